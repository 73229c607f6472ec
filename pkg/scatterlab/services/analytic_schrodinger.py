"""Desfases no relativistas del pozo esferico y profundidades criticas."""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from scatterlab.core.config import Settings, get_settings
from scatterlab.core.errors import ConfigurationError

from .phase_branch import (
    PhaseShiftSample,
    continuous_phase,
    samples_from_phase,
    wigner_time_delay,
    wrap_phase,
)
from .special_fn import sph_j, sph_n


@dataclass(frozen=True)
class SchrodingerWell:
    """Pozo V(r) = -V para r <= a; V = 0 es la particula libre."""

    V: float
    a: float
    m: float

    def __post_init__(self) -> None:
        if not self.V >= 0:
            raise ConfigurationError(f"depth: V={self.V} debe ser >= 0.")
        if not self.a > 0:
            raise ConfigurationError(f"range: a={self.a} debe ser positivo.")
        if not self.m > 0:
            raise ConfigurationError(f"mass: m={self.m} debe ser positivo.")

    def energy(self, k):
        return np.square(k) / (2.0 * self.m)

    def momentum(self, energy):
        return np.sqrt(2.0 * self.m * np.asarray(energy, dtype=float))

    def interior_momentum(self, k):
        return np.sqrt(np.square(k) + 2.0 * self.m * self.V)


def _check_momenta(k) -> np.ndarray:
    values = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(values <= 0):
        raise ConfigurationError("k: el momento debe ser positivo (k=0 solo como limite).")
    return values


def schrodinger_tan_parts(well: SchrodingerWell, l: int, k):
    """Numerador y denominador de tan(delta_l) para el pozo esferico."""
    k = np.asarray(k, dtype=float)
    p = well.interior_momentum(k)
    ka, pa = k * well.a, p * well.a
    j_in, dj_in = sph_j(l, pa), sph_j(l, pa, derivative=True)
    num = k * sph_j(l, ka, derivative=True) * j_in - p * sph_j(l, ka) * dj_in
    den = k * sph_n(l, ka, derivative=True) * j_in - p * sph_n(l, ka) * dj_in
    return num, den


def swave_tan_closed_form(well: SchrodingerWell, k):
    k = np.asarray(k, dtype=float)
    p = well.interior_momentum(k)
    tan_ka, tan_pa = np.tan(k * well.a), np.tan(p * well.a)
    return (k * tan_pa - p * tan_ka) / (p + k * tan_ka * tan_pa)


def pwave_tan_closed_form(well: SchrodingerWell, k):
    k = np.asarray(k, dtype=float)
    p = well.interior_momentum(k)
    a = well.a
    tan_ka, tan_pa = np.tan(k * a), np.tan(p * a)
    num = a * k * p**2 * tan_pa - a * k**2 * p * tan_ka + (k**2 - p**2) * tan_ka * tan_pa
    den = a * k**2 * p + (p**2 - k**2) * tan_pa + a * k * p**2 * tan_ka * tan_pa
    return num / den


def _anchor(well: SchrodingerWell, l: int, top: float):
    k_anchor = max(
        top,
        50.0 * (l + 1) ** 2 / well.a,
        50.0 * np.sqrt(2.0 * well.m * well.V),
    )

    def eikonal(k: float) -> float:
        return float((well.interior_momentum(k) - k) * well.a)

    return k_anchor, eikonal


def schrodinger_phase_curve(
    well: SchrodingerWell,
    l: int,
    momenta: Sequence[float],
    settings: Optional[Settings] = None,
) -> List[PhaseShiftSample]:
    """Curva delta_l(k) sobre una rama continua anclada a k grande."""
    if int(l) != l or l < 0:
        raise ConfigurationError(f"l={l}: debe ser un entero >= 0.")
    momenta = _check_momenta(momenta)
    order = np.argsort(momenta)
    ordered = momenta[order]
    k_anchor, eikonal = _anchor(well, l, ordered[-1])
    deltas = continuous_phase(
        lambda k: wrap_phase(*schrodinger_tan_parts(well, l, k)),
        ordered,
        k_anchor,
        eikonal,
        settings,
    )
    result = np.empty_like(deltas)
    result[order] = deltas
    return samples_from_phase(well.energy(momenta), momenta, result)


def schrodinger_phase_shift(
    well: SchrodingerWell, l: int, k: float, settings: Optional[Settings] = None
) -> PhaseShiftSample:
    """Desfase en un solo momento, en la misma rama que la curva completa."""
    return schrodinger_phase_curve(well, l, [k], settings)[0]


def schrodinger_low_energy_phase(
    well: SchrodingerWell, l: int, settings: Optional[Settings] = None
) -> PhaseShiftSample:
    """Limite k -> 0+ evaluado en k = limit_momentum / a."""
    settings = settings or get_settings()
    return schrodinger_phase_shift(well, l, settings.limit_momentum / well.a, settings)


def _bessel_root(order: int, n: int) -> float:
    """n-esima raiz positiva de j_order por barrido y biseccion."""
    if order == 0:
        return n * np.pi
    found, x, step = 0, 0.5, 0.1
    previous = sph_j(order, x)
    while True:
        nxt = x + step
        value = sph_j(order, nxt)
        if previous * value < 0:
            found += 1
            if found == n:
                return brentq(lambda y: sph_j(order, y), x, nxt, xtol=1e-12)
        x, previous = nxt, value


def schrodinger_critical_depth(l: int, n: int, m: float, a: float) -> float:
    """n-esima profundidad que sostiene un estado de energia cero con momento l."""
    if int(l) != l or l < 0 or int(n) != n or n < 1:
        raise ConfigurationError("l >= 0 y n >= 1 son obligatorios.")
    if not (m > 0 and a > 0):
        raise ConfigurationError("m y a deben ser positivos.")
    if l == 0:
        return (2 * n - 1) ** 2 * np.pi**2 / (8.0 * m * a**2)
    if l == 1:
        return n**2 * np.pi**2 / (2.0 * m * a**2)
    root = _bessel_root(l - 1, n)
    return root**2 / (2.0 * m * a**2)


def count_bound_states(well: SchrodingerWell, l: int) -> int:
    """Estados ligados con momento l: profundidades criticas por debajo de V."""
    count = 0
    while schrodinger_critical_depth(l, count + 1, well.m, well.a) < well.V:
        count += 1
    return count


def levinson_bound_states(
    well: SchrodingerWell, l: int, settings: Optional[Settings] = None
) -> int:
    """Conteo por el teorema de Levinson, delta_l(0) = n_l pi."""
    return int(np.round(schrodinger_low_energy_phase(well, l, settings).delta / np.pi))


__all__ = [
    "PhaseShiftSample",
    "SchrodingerWell",
    "count_bound_states",
    "levinson_bound_states",
    "pwave_tan_closed_form",
    "schrodinger_critical_depth",
    "schrodinger_low_energy_phase",
    "schrodinger_phase_curve",
    "schrodinger_phase_shift",
    "schrodinger_tan_parts",
    "swave_tan_closed_form",
    "wigner_time_delay",
]
