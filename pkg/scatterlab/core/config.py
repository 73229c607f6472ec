import os
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path
from typing import List

from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

PHASE_FIT_MODELS = ("riccati", "sine")
# no alteran los numeros producidos
PRESENTATION_FIELDS = ("app_title", "log_level", "scan_workers", "scan_block")


@dataclass
class Settings:
    """Centraliza configuracion numerica leida desde variables de entorno."""

    app_title: str = field(
        default_factory=lambda: os.environ.get(
            "APP_TITLE", "Laboratorio de Dispersion Dirac"
        )
    )
    log_level: str = field(
        default_factory=lambda: os.environ.get("LOG_LEVEL", "INFO").upper()
    )
    hbar_c: float = field(
        default_factory=lambda: float(os.environ.get("HBAR_C", "197.3269631"))
    )
    # Radial grid, in units of the potential range a.
    inner_step: float = field(
        default_factory=lambda: float(os.environ.get("INNER_STEP", "1e-3"))
    )
    outer_step: float = field(
        default_factory=lambda: float(os.environ.get("OUTER_STEP", "1e-2"))
    )
    inner_region: float = field(
        default_factory=lambda: float(os.environ.get("INNER_REGION", "20"))
    )
    start_radius: float = field(
        default_factory=lambda: float(os.environ.get("START_RADIUS", "1e-6"))
    )
    node_index: int = field(
        default_factory=lambda: int(os.environ.get("NODE_INDEX", "20"))
    )
    phase_fit_model: str = field(
        default_factory=lambda: os.environ.get("PHASE_FIT_MODEL", "riccati").lower()
    )
    magnitude_cap: float = field(
        default_factory=lambda: float(os.environ.get("MAGNITUDE_CAP", "1e150"))
    )
    # Critical couplings: scan step and ceiling in units of m, radii in units of a.
    critical_scan_step: float = field(
        default_factory=lambda: float(os.environ.get("CRITICAL_SCAN_STEP", "0.05"))
    )
    critical_tolerance: float = field(
        default_factory=lambda: float(os.environ.get("CRITICAL_TOLERANCE", "1e-10"))
    )
    critical_step: float = field(
        default_factory=lambda: float(os.environ.get("CRITICAL_STEP", "1e-2"))
    )
    critical_radius: float = field(
        default_factory=lambda: float(os.environ.get("CRITICAL_RADIUS", "10"))
    )
    critical_max_coupling: float = field(
        default_factory=lambda: float(
            os.environ.get("CRITICAL_MAX_COUPLING", "500")
        )
    )
    critical_acceptance: float = field(
        default_factory=lambda: float(
            os.environ.get("CRITICAL_ACCEPTANCE", "1e-6")
        )
    )
    limit_momentum: float = field(
        default_factory=lambda: float(os.environ.get("LIMIT_MOMENTUM", "1e-4"))
    )
    branch_bridge_points: int = field(
        default_factory=lambda: int(os.environ.get("BRANCH_BRIDGE_POINTS", "2000"))
    )
    branch_max_refinements: int = field(
        default_factory=lambda: int(
            os.environ.get("BRANCH_MAX_REFINEMENTS", "30")
        )
    )
    resonance_refine_points: int = field(
        default_factory=lambda: int(
            os.environ.get("RESONANCE_REFINE_POINTS", "200")
        )
    )
    resonance_refine_widths: float = field(
        default_factory=lambda: float(
            os.environ.get("RESONANCE_REFINE_WIDTHS", "5")
        )
    )
    scan_workers: int = field(
        default_factory=lambda: int(os.environ.get("SCAN_WORKERS", "1"))
    )
    scan_block: int = field(
        default_factory=lambda: int(os.environ.get("SCAN_BLOCK", "64"))
    )
    csv_digits: int = field(
        default_factory=lambda: int(os.environ.get("CSV_DIGITS", "12"))
    )

    @property
    def csv_format(self) -> str:
        """Formato printf usado en todas las columnas CSV."""
        return f"%.{self.csv_digits}g"

    def echo_lines(self) -> List[str]:
        """Parametros efectivos que cambian los resultados, como `VARIABLE = valor`."""
        return [
            f"{item.name.upper()} = {getattr(self, item.name)}"
            for item in fields(self)
            if item.name not in PRESENTATION_FIELDS
        ]


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Devuelve configuracion cacheada para reutilizar en todo el proyecto."""
    return Settings()


__all__ = ["BASE_DIR", "PHASE_FIT_MODELS", "PRESENTATION_FIELDS", "Settings", "get_settings"]
