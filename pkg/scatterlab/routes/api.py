import logging
import math
from typing import List, Literal, Optional

from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel, Field

from scatterlab import __version__
from scatterlab.cli import RunConfig, Table, cmd_critical, cmd_phase_shift, cmd_resonance_scan
from scatterlab.core.config import get_settings
from scatterlab.core.errors import ConfigurationError, NumericalFailure

router = APIRouter(prefix="/api", tags=["scattering"])
logger = logging.getLogger("scatterlab.api")

# Limite de puntos por peticion; los barridos largos se hacen con la CLI.
MAX_POINTS = 2000


class PotentialRequest(BaseModel):
    model: Literal["dirac", "schrodinger"] = "dirac"
    shape: str = "square"
    sign: Optional[Literal["well", "barrier"]] = None
    depth: float = 0.0
    range: float = Field(1.0, gt=0)
    mass: float = Field(1.0, gt=0)
    channel: str = "s1/2"
    units: Literal["natural", "mev_fm"] = "natural"


class PhaseShiftRequest(PotentialRequest):
    scan: Literal["E", "k", "p"] = "E"
    start: float
    stop: float
    points: int = Field(200, ge=2, le=MAX_POINTS)
    method: Optional[Literal["analytic", "numerical"]] = None


class CriticalRequest(PotentialRequest):
    count: int = Field(3, ge=1, le=20)
    layout: Literal["scattering", "thresholds"] = "scattering"


class ResonanceScanRequest(PotentialRequest):
    scan: Literal["v", "p"] = "v"
    start: float
    stop: float
    points: int = Field(100, ge=2, le=MAX_POINTS)
    momentum: Optional[float] = None
    nu: Optional[int] = Field(None, ge=1)


class TablePayload(BaseModel):
    columns: List[str]
    rows: List[List[Optional[float]]]
    notes: List[str] = []


class TableResponse(BaseModel):
    table: TablePayload
    peaks: Optional[TablePayload] = None


def _payload(table: Optional[Table]) -> Optional[TablePayload]:
    if table is None:
        return None
    rows = [
        [float(value) if math.isfinite(value) else None for value in row]
        for row in table.rows.reshape(-1, len(table.columns)).tolist()
    ]
    return TablePayload(columns=table.columns, rows=rows, notes=table.notes)


async def _run(command: str, handler, payload: BaseModel) -> TableResponse:
    try:
        cfg = RunConfig(command=command, **payload.model_dump())
        result = await run_in_threadpool(handler, cfg, get_settings())
    except ConfigurationError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc)) from exc
    except NumericalFailure as exc:
        logger.warning("%s: fallo numerico: %s", command, exc)
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc)) from exc
    except Exception as exc:  # pragma: no cover - error inesperado
        logger.exception("Error inesperado en %s: %s", command, exc)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="No se pudo completar el calculo.",
        ) from exc
    table, peaks = result if isinstance(result, tuple) else (result, None)
    return TableResponse(table=_payload(table), peaks=_payload(peaks))


@router.get("/health")
async def health() -> dict:
    return {"status": "ok", "version": __version__}


@router.post("/phase-shift", response_model=TableResponse)
async def phase_shift(payload: PhaseShiftRequest) -> TableResponse:
    return await _run("phase-shift", cmd_phase_shift, payload)


@router.post("/critical", response_model=TableResponse)
async def critical(payload: CriticalRequest) -> TableResponse:
    return await _run("critical", cmd_critical, payload)


@router.post("/resonance-scan", response_model=TableResponse)
async def resonance_scan(payload: ResonanceScanRequest) -> TableResponse:
    return await _run("resonance-scan", cmd_resonance_scan, payload)
