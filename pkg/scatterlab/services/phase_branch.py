"""Rama continua del desfase a partir de tan(delta), comun a Schrodinger y Dirac.

La formula analitica solo fija delta modulo pi. La rama se reconstruye
desenvolviendo en momento creciente sobre una malla que se prolonga hasta un
momento de anclaje alto, donde el desfase tiende al valor eikonal (p - k) a.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from scatterlab.core.config import Settings, get_settings
from scatterlab.core.errors import ConfigurationError, NumericalFailure

logger = logging.getLogger("scatterlab.branch")

HALF_PI = 0.5 * np.pi


class BranchError(NumericalFailure):
    """No se pudo fijar una rama continua del desfase."""


class TimeDelayError(ConfigurationError):
    """Muestras insuficientes o desordenadas para derivar el desfase."""


@dataclass(frozen=True)
class PhaseShiftSample:
    """Un punto de la curva de desfase."""

    energy: float
    momentum: float
    delta: float
    tan_delta: float
    sin2_delta: float

    @classmethod
    def from_delta(cls, energy: float, momentum: float, delta: float) -> "PhaseShiftSample":
        return cls(
            energy=float(energy),
            momentum=float(momentum),
            delta=float(delta),
            tan_delta=float(np.tan(delta)),
            sin2_delta=float(np.sin(delta) ** 2),
        )


def wrap_phase(num, den):
    """arctan(num/den) en [-pi/2, pi/2) sin dividir; den=0 da -pi/2."""
    angle = np.arctan2(num, den)
    return np.mod(angle + HALF_PI, np.pi) - HALF_PI


def _wrapped_step(values: np.ndarray) -> np.ndarray:
    return np.mod(np.diff(values) + HALF_PI, np.pi) - HALF_PI


def continuous_phase(
    wrapped: Callable[[np.ndarray], np.ndarray],
    momenta: Sequence[float],
    anchor_momentum: float,
    anchor_phase: Callable[[float], float],
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Desfase continuo en `momenta` (estrictamente crecientes).

    `wrapped(k)` devuelve el desfase modulo pi; `anchor_phase(k)` una
    aproximacion al desfase verdadero valida en `anchor_momentum`, que debe
    quedar a menos de pi/2 del valor exacto.
    """
    settings = settings or get_settings()
    grid = np.asarray(momenta, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ConfigurationError("momenta: se requiere al menos un momento.")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ConfigurationError("momenta: deben ser positivos y estrictamente crecientes.")

    top = grid[-1]
    if anchor_momentum > top:
        bridge = np.geomspace(top, anchor_momentum, settings.branch_bridge_points)[1:]
    else:
        bridge = np.empty(0)
    points = np.concatenate([grid, bridge])
    is_user = np.concatenate([np.ones(grid.size, dtype=bool), np.zeros(bridge.size, dtype=bool)])
    values = np.asarray(wrapped(points), dtype=float)

    for _ in range(settings.branch_max_refinements):
        steps = _wrapped_step(values)
        coarse = np.flatnonzero(np.abs(steps) > 0.25 * np.pi)
        if coarse.size == 0:
            break
        middles = 0.5 * (points[coarse] + points[coarse + 1])
        middle_values = np.asarray(wrapped(middles), dtype=float)
        points = np.insert(points, coarse + 1, middles)
        values = np.insert(values, coarse + 1, middle_values)
        is_user = np.insert(is_user, coarse + 1, False)
    else:
        logger.warning(
            "Rama del desfase sin resolver tras %d refinamientos; se continua.",
            settings.branch_max_refinements,
        )

    unwrapped = values[0] + np.concatenate([[0.0], np.cumsum(_wrapped_step(values))])
    target = anchor_phase(points[-1])
    if not np.isfinite(target):
        raise BranchError("El desfase de anclaje no es finito.")
    shift = np.pi * np.round((target - unwrapped[-1]) / np.pi)
    return (unwrapped + shift)[is_user]


def samples_from_phase(
    energies: Sequence[float], momenta: Sequence[float], deltas: Sequence[float]
) -> List[PhaseShiftSample]:
    return [
        PhaseShiftSample.from_delta(energy, momentum, delta)
        for energy, momentum, delta in zip(energies, momenta, deltas)
    ]


def wigner_time_delay(samples: Sequence[PhaseShiftSample]) -> np.ndarray:
    """tau = 2 d(delta)/dE con diferencias centrales (laterales en los extremos)."""
    if len(samples) < 3:
        raise TimeDelayError("time delay: se requieren al menos 3 muestras.")
    energies = np.array([sample.energy for sample in samples])
    deltas = np.array([sample.delta for sample in samples])
    if np.any(np.diff(energies) <= 0):
        raise TimeDelayError("time delay: las energias deben ser estrictamente crecientes.")
    return 2.0 * np.gradient(deltas, energies, edge_order=1)


__all__ = [
    "BranchError",
    "PhaseShiftSample",
    "TimeDelayError",
    "continuous_phase",
    "samples_from_phase",
    "wigner_time_delay",
    "wrap_phase",
]
