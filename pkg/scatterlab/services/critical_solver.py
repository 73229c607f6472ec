"""Acoplamientos criticos (E = m) y supercriticos (E = -m).

Para el pozo cuadrado las condiciones son trascendentes en p_+- = sqrt(V(V+-2m));
para formas generales se integra a momento cero y se exige que desaparezca la
rama externa no normalizable. Una barrera en el canal chi se resuelve como el
pozo cruzado (-chi, E -> -E) con la misma altura.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.optimize import bisect

from scatterlab.core.config import Settings, get_settings
from scatterlab.core.errors import ConfigurationError, NumericalFailure

from .channels import Channel, channel_from_chi, crossing_transform
from .potentials import PotentialSpec, make_potential
from .radial_integrator import zero_momentum_mismatch
from .special_fn import sph_j

logger = logging.getLogger("scatterlab.critical")

# w(R)/w(0) admitido en el radio de ajuste
DECAY_LIMIT = 1e-3


class CriticalDomainError(ConfigurationError):
    """p_+- imaginario: el acoplamiento esta por debajo del umbral."""


class CriticalSearchError(NumericalFailure):
    """No se encontraron suficientes raices en el rango barrido."""


@dataclass(frozen=True)
class CriticalCondition:
    channel: Channel
    energy_sign: int
    potential_sign: int = -1

    def __post_init__(self) -> None:
        if self.energy_sign not in (1, -1):
            raise ConfigurationError("energy_sign: debe ser +1 (E=m) o -1 (E=-m).")
        if self.potential_sign not in (1, -1):
            raise ConfigurationError("potential_sign: debe ser -1 (pozo) o +1 (barrera).")

    @property
    def label(self) -> str:
        sign = "+" if self.potential_sign > 0 else "-"
        suffix = "" if self.energy_sign > 0 else " E=-m"
        return f"{self.channel.label}({sign}){suffix}"

    def threshold(self, m: float) -> float:
        """Acoplamiento minimo con p_crit real."""
        return 2.0 * m if self.energy_sign * self.potential_sign > 0 else 0.0

    def p_crit(self, V: float, m: float) -> float:
        """sqrt(V(V +- 2m)) segun el signo efectivo de E frente al potencial."""
        p_squared = V * (V - 2.0 * m) if self.energy_sign * self.potential_sign > 0 else V * (V + 2.0 * m)
        if p_squared < 0:
            raise CriticalDomainError(
                f"{self.label}: p imaginario para V={V:.6g}; se requiere V > {self.threshold(m):.6g}."
            )
        return float(np.sqrt(p_squared))

    def crossed(self) -> "CriticalCondition":
        return CriticalCondition(
            channel=crossing_transform(self.channel),
            energy_sign=-self.energy_sign,
            potential_sign=-self.potential_sign,
        )


@dataclass(frozen=True)
class CriticalCoupling:
    value: float
    index: int
    condition: CriticalCondition
    residual: float


def _well_residual(chi: int, energy_sign: int, V: float, m: float, a: float, p: float) -> float:
    channel = channel_from_chi(chi)
    x = p * a
    j_chi = sph_j(channel.l_chi, x)
    j_minus = sph_j(channel.l_minus_chi, x)
    if chi < 0 and energy_sign > 0:
        return (1 + 2 * chi) * j_chi + 2 * m * a * np.sqrt(V / (V + 2 * m)) * j_minus
    if chi < 0:
        return j_chi
    if energy_sign > 0:
        return j_minus
    return 2 * m * a * np.sqrt(V) * j_chi + (2 * chi - 1) * np.sqrt(V - 2 * m) * j_minus


def square_critical_residual(cond: CriticalCondition, V: float, m: float, a: float) -> float:
    """Condicion de umbral del pozo cuadrado; se anula en los V criticos."""
    if not (m > 0 and a > 0):
        raise ConfigurationError("m y a deben ser positivos.")
    p = cond.p_crit(V, m)
    well = cond if cond.potential_sign < 0 else cond.crossed()
    return float(_well_residual(well.channel.chi, well.energy_sign, V, m, a, p))


def _scan_roots(
    residual: Callable[[float], float],
    start: float,
    step: float,
    stop: float,
    count: int,
    tolerance: float,
    acceptance: Optional[float] = None,
) -> List[float]:
    roots: List[float] = []
    lower, value = start, residual(start)
    while len(roots) < count and lower < stop:
        upper = lower + step
        upper_value = residual(upper)
        if value * upper_value < 0:
            root = bisect(residual, lower, upper, xtol=tolerance)
            if acceptance is None or abs(residual(root)) < acceptance:
                roots.append(root)
        lower, value = upper, upper_value
    return roots


def find_square_criticals(
    cond: CriticalCondition,
    m: float,
    a: float,
    count: int,
    settings: Optional[Settings] = None,
) -> List[CriticalCoupling]:
    """Primeras `count` raices por barrido en pasos de 0.05 m y biseccion."""
    settings = settings or get_settings()
    if int(count) != count or count < 1:
        raise ConfigurationError("count: debe ser un entero >= 1.")
    step = settings.critical_scan_step * m
    start = cond.threshold(m) + 0.5 * step
    stop = settings.critical_max_coupling * m

    def residual(V: float) -> float:
        return square_critical_residual(cond, V, m, a)

    roots = _scan_roots(residual, start, step, stop, count, settings.critical_tolerance)
    if len(roots) < count:
        raise CriticalSearchError(
            f"{cond.label}: {len(roots)} de {count} raices en [{start:.4g}, {stop:.4g}]."
        )
    logger.info("%s: %s", cond.label, ", ".join(f"{root:.6g}" for root in roots))
    return [
        CriticalCoupling(value=root, index=n, condition=cond, residual=residual(root))
        for n, root in enumerate(roots, start=1)
    ]


def pwave_closed_form_couplings(count: int, energy_sign: int, m: float, a: float) -> List[float]:
    """Sectores con condicion p a = n pi: v = sqrt(m^2 + (n pi/a)^2) -+ m.

    energy_sign=+1 es p1/2 critico en un pozo; energy_sign=-1 es s1/2
    supercritico, igual a la barrera p1/2(+).
    """
    if energy_sign not in (1, -1):
        raise ConfigurationError("energy_sign: debe ser +1 o -1.")
    n = np.arange(1, count + 1)
    return (np.sqrt(m * m + (n * np.pi / a) ** 2) - energy_sign * m).tolist()


def find_general_criticals(
    potential: PotentialSpec,
    cond: CriticalCondition,
    count: int,
    m: float = 1.0,
    settings: Optional[Settings] = None,
) -> List[CriticalCoupling]:
    """Raices en v del desajuste a momento cero para una forma cualquiera."""
    settings = settings or get_settings()
    if int(count) != count or count < 1:
        raise ConfigurationError("count: debe ser un entero >= 1.")
    if potential.sign != cond.potential_sign:
        raise ConfigurationError(f"{cond.label}: el signo del potencial no coincide con la condicion.")
    radius = settings.critical_radius
    if float(potential.w(radius)) > DECAY_LIMIT * float(potential.w(0.0)):
        raise ConfigurationError(
            f"shape: '{potential.shape}' no decae en r={radius:g}a; el ajuste a momento cero no aplica."
        )
    channel, energy_sign = cond.channel, cond.energy_sign
    step = settings.critical_scan_step * m
    start = 0.5 * step
    stop = settings.critical_max_coupling * m
    tolerance = settings.critical_tolerance

    def residual(v: float) -> float:
        return zero_momentum_mismatch(potential, channel, energy_sign, m, v, settings)

    roots: List[float] = []
    lower = start
    previous = None
    while len(roots) < count and lower < stop:
        grid = lower + step * np.arange(settings.scan_block + 1)
        values = zero_momentum_mismatch(potential, channel, energy_sign, m, grid, settings)
        if previous is not None:
            grid, values = np.concatenate([[grid[0] - step], grid]), np.concatenate([[previous], values])
        for i in np.flatnonzero(values[:-1] * values[1:] < 0):
            root = bisect(residual, grid[i], grid[i + 1], xtol=tolerance)
            if abs(residual(root)) < settings.critical_acceptance:
                roots.append(root)
            if len(roots) == count:
                break
        previous = values[-1]
        lower = grid[-1] + step
    if len(roots) < count:
        raise CriticalSearchError(
            f"{cond.label}: {len(roots)} de {count} raices en [{start:.4g}, {stop:.4g}]."
        )
    logger.info("%s (%s): %s", cond.label, potential.shape, ", ".join(f"{root:.6g}" for root in roots))
    return [
        CriticalCoupling(value=root, index=n, condition=cond, residual=residual(root))
        for n, root in enumerate(roots[:count], start=1)
    ]


TABLE_LAYOUTS: Dict[str, List[CriticalCondition]] = {
    # s1/2(+), s1/2(-), p1/2(+), p1/2(-) al umbral E = m
    "scattering": [
        CriticalCondition(channel_from_chi(-1), 1, 1),
        CriticalCondition(channel_from_chi(-1), 1, -1),
        CriticalCondition(channel_from_chi(1), 1, 1),
        CriticalCondition(channel_from_chi(1), 1, -1),
    ],
    # pozos: s en E=m y E=-m, p en E=m y E=-m
    "thresholds": [
        CriticalCondition(channel_from_chi(-1), 1, -1),
        CriticalCondition(channel_from_chi(-1), -1, -1),
        CriticalCondition(channel_from_chi(1), 1, -1),
        CriticalCondition(channel_from_chi(1), -1, -1),
    ],
}


def critical_table(
    shape: str,
    m: float,
    a: float,
    count: int,
    layout: str = "scattering",
    settings: Optional[Settings] = None,
    table_path=None,
) -> Dict[str, List[CriticalCoupling]]:
    """Tabla de cuatro columnas; la forma cuadrada usa las condiciones exactas."""
    if layout not in TABLE_LAYOUTS:
        raise ConfigurationError(f"layout: '{layout}' no es uno de {', '.join(TABLE_LAYOUTS)}.")
    columns: Dict[str, List[CriticalCoupling]] = {}
    for cond in TABLE_LAYOUTS[layout]:
        if shape == "square":
            columns[cond.label] = find_square_criticals(cond, m, a, count, settings)
        else:
            kind = "barrier" if cond.potential_sign > 0 else "well"
            potential = make_potential(shape, kind, 0.0, a, table_path)
            columns[cond.label] = find_general_criticals(potential, cond, count, m, settings)
    return columns


__all__ = [
    "CriticalCondition",
    "CriticalCoupling",
    "CriticalDomainError",
    "CriticalSearchError",
    "TABLE_LAYOUTS",
    "critical_table",
    "find_general_criticals",
    "find_square_criticals",
    "pwave_closed_form_couplings",
    "square_critical_residual",
]
