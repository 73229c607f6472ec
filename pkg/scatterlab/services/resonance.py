"""Deteccion de resonancias por el criterio de Wigner y anchos de Breit-Wigner.

Una resonancia es un cruce creciente de delta por un multiplo impar de pi/2
(retardo tau = 2 d(delta)/dE > 0). Un cruce decreciente es un adelanto
temporal y no lleva ancho.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.signal import find_peaks, peak_widths

from scatterlab.core.config import Settings, get_settings
from scatterlab.core.errors import ConfigurationError, NumericalFailure

from .phase_branch import PhaseShiftSample
from .radial_integrator import ResonanceCurve

logger = logging.getLogger("scatterlab.resonance")

PhaseFunction = Callable[[np.ndarray], List[PhaseShiftSample]]

MIN_SAMPLES = 10
QUARTER_PI = 0.25 * np.pi


class ResonanceError(ConfigurationError):
    """Curva o pico no aptos para el analisis pedido."""


class BranchDiscontinuityError(NumericalFailure):
    """Salto mayor que pi/2 entre muestras consecutivas."""


class WidthNotBracketedError(NumericalFailure):
    """sin^2(delta) no cruza 1/2 a ambos lados del pico dentro de la curva."""


@dataclass(frozen=True)
class ResonancePeak:
    energy: float
    level: float
    slope: float
    classification: str
    gamma: Optional[float] = None
    channel: str = ""

    @property
    def is_resonance(self) -> bool:
        return self.classification == "resonance"

    @property
    def tau(self) -> float:
        """Retardo de Wigner en E_R."""
        return 2.0 * self.slope

    @property
    def gamma_slope(self) -> Optional[float]:
        """Ancho 2 / (d delta/dE), exacto para la forma de Breit-Wigner."""
        return 2.0 / self.slope if self.is_resonance else None

    @property
    def gamma_time_delay(self) -> Optional[float]:
        """Estimacion aproximada Gamma ~ 1/tau."""
        return 1.0 / self.tau if self.is_resonance else None

    @property
    def width(self) -> Optional[float]:
        return self.gamma if self.gamma is not None else self.gamma_slope


def _arrays(curve: Sequence[PhaseShiftSample]):
    if len(curve) < MIN_SAMPLES:
        raise ResonanceError(f"curve: se requieren al menos {MIN_SAMPLES} muestras.")
    energies = np.array([sample.energy for sample in curve])
    deltas = np.array([sample.delta for sample in curve])
    if np.any(np.diff(energies) <= 0):
        raise ResonanceError("curve: las energias deben ser estrictamente crecientes.")
    jumps = np.abs(np.diff(deltas))
    if np.any(jumps > 0.5 * np.pi):
        worst = int(np.argmax(jumps))
        raise BranchDiscontinuityError(
            f"salto de {jumps[worst]:.3f} rad entre E={energies[worst]:.6g} y E={energies[worst + 1]:.6g}."
        )
    return energies, deltas


def _crossings(energies: np.ndarray, deltas: np.ndarray):
    """(i, nivel) para cada cruce de delta = (n + 1/2) pi entre i e i+1."""
    index = np.floor(deltas / np.pi - 0.5)
    for i in np.flatnonzero(np.diff(index) != 0):
        n = max(index[i], index[i + 1])
        yield int(i), float((n + 0.5) * np.pi)


def _interpolate(x0, x1, y0, y1, target):
    return x0 + (target - y0) * (x1 - x0) / (y1 - y0)


def _half_level_segments(energies, deltas, energy: float, level: float) -> Tuple[int, int]:
    """Tramos (i, i+1) que contienen delta = nivel - pi/4 y nivel + pi/4.

    La busqueda se corta si delta vuelve a cruzar el nivel antes de llegar
    a la mitad de la altura.
    """
    centre = int(np.clip(np.searchsorted(energies, energy), 1, energies.size - 1))
    lower = upper = None
    for i in range(centre - 1, -1, -1):
        if deltas[i] >= level:
            break
        if deltas[i] <= level - QUARTER_PI:
            lower = i
            break
    for i in range(centre, energies.size):
        if deltas[i] < level:
            break
        if deltas[i] >= level + QUARTER_PI:
            upper = i - 1
            break
    if lower is None or upper is None:
        raise WidthNotBracketedError(
            f"sin^2 = 1/2 no queda a ambos lados de E_R={energy:.6g} en la curva."
        )
    return lower, upper


def breit_wigner_width(curve: Sequence[PhaseShiftSample], peak: ResonancePeak) -> float:
    """FWHM de sin^2(delta): distancia entre los cruces de nivel -+ pi/4."""
    if not peak.is_resonance:
        raise ResonanceError("width: solo las resonancias (tau > 0) tienen ancho.")
    energies, deltas = _arrays(curve)
    lower, upper = _half_level_segments(energies, deltas, peak.energy, peak.level)
    e = energies
    low = _interpolate(e[lower], e[lower + 1], deltas[lower], deltas[lower + 1], peak.level - QUARTER_PI)
    high = _interpolate(e[upper], e[upper + 1], deltas[upper], deltas[upper + 1], peak.level + QUARTER_PI)
    return float(high - low)


def detect_resonances(curve: Sequence[PhaseShiftSample], channel_label: str = "") -> List[ResonancePeak]:
    """Cruces de pi/2 (mod pi) clasificados por el signo de d(delta)/dE."""
    energies, deltas = _arrays(curve)
    peaks = []
    for i, level in _crossings(energies, deltas):
        energy = _interpolate(energies[i], energies[i + 1], deltas[i], deltas[i + 1], level)
        slope = (deltas[i + 1] - deltas[i]) / (energies[i + 1] - energies[i])
        peak = ResonancePeak(
            energy=float(energy),
            level=level,
            slope=float(slope),
            classification="resonance" if slope > 0 else "anti-crossing",
            channel=channel_label,
        )
        if peak.is_resonance:
            try:
                peak = replace(peak, gamma=breit_wigner_width(curve, peak))
            except WidthNotBracketedError as error:
                logger.info("Sin FWHM en E=%.6g: %s", energy, error)
        peaks.append(peak)
    return peaks


def width_ratio(peak_a: ResonancePeak, peak_b: ResonancePeak) -> float:
    """Gamma_a / Gamma_b; FWHM si ambos lo tienen, si no 2/(d delta/dE)."""
    if not (peak_a.is_resonance and peak_b.is_resonance):
        raise ResonanceError("width_ratio: ambos picos deben ser resonancias.")
    if peak_a.gamma is not None and peak_b.gamma is not None:
        return peak_a.gamma / peak_b.gamma
    return peak_a.gamma_slope / peak_b.gamma_slope


def _root(phase_fn: PhaseFunction, lo: float, hi: float, target: float) -> float:
    def offset(energy: float) -> float:
        return phase_fn(np.array([energy]))[0].delta - target

    return brentq(offset, lo, hi, xtol=1e-12 * max(abs(hi), 1.0))


def refine_resonance(
    phase_fn: PhaseFunction,
    peak: ResonancePeak,
    lower_bound: float,
    settings: Optional[Settings] = None,
) -> ResonancePeak:
    """Remuestrea [E_R - 5 Gamma, E_R + 5 Gamma] y ajusta E_R, pendiente y FWHM.

    `phase_fn` devuelve la curva continua en energias crecientes y
    `lower_bound` es la primera energia admisible (el umbral).
    """
    settings = settings or get_settings()
    if not peak.is_resonance:
        return peak
    estimate, energy, refined = peak.width, peak.energy, peak
    for _ in range(6):
        half = settings.resonance_refine_widths * estimate
        lo = max(energy - half, lower_bound)
        window = np.linspace(lo, energy + half, settings.resonance_refine_points)
        curve = phase_fn(window)
        energies = np.array([sample.energy for sample in curve])
        deltas = np.array([sample.delta for sample in curve])
        candidates = [
            i
            for i, level in _crossings(energies, deltas)
            if abs(level - peak.level) < 1e-9 and deltas[i + 1] > deltas[i]
        ]
        if not candidates:
            raise ResonanceError(f"refine: el cruce de E={peak.energy:.6g} no aparece en la ventana.")
        i = min(candidates, key=lambda index: abs(energies[index] - energy))
        energy = _root(phase_fn, energies[i], energies[i + 1], peak.level)
        step = 1e-4 * min(estimate, energy - lower_bound)
        pair = phase_fn(np.array([energy - step, energy + step]))
        refined = replace(
            peak,
            energy=float(energy),
            slope=float((pair[1].delta - pair[0].delta) / (2 * step)),
            gamma=None,
        )
        try:
            lower, upper = _half_level_segments(energies, deltas, energy, peak.level)
        except WidthNotBracketedError:
            if lo > lower_bound:
                estimate *= 4.0
                continue
            logger.info("E_R=%.6g: FWHM sin acotar; se reporta 2/(d delta/dE).", energy)
            return refined
        low = _root(phase_fn, energies[lower], energies[lower + 1], peak.level - QUARTER_PI)
        high = _root(phase_fn, energies[upper], energies[upper + 1], peak.level + QUARTER_PI)
        refined = replace(refined, gamma=float(high - low))
        if refined.gamma >= 0.1 * half:
            break
        # ventana demasiado ancha para resolver el pico
        estimate = refined.gamma
    return refined


def scan_resonances(
    phase_fn: PhaseFunction,
    energies: Sequence[float],
    lower_bound: float,
    settings: Optional[Settings] = None,
    channel_label: str = "",
) -> List[ResonancePeak]:
    """Deteccion gruesa sobre `energies` seguida del refinamiento local."""
    energies = np.asarray(energies, dtype=float)
    peaks = detect_resonances(phase_fn(energies), channel_label)
    refined = [refine_resonance(phase_fn, peak, lower_bound, settings) for peak in peaks]
    logger.info(
        "%d cruces, %d resonancias%s.",
        len(refined),
        sum(peak.is_resonance for peak in refined),
        f" en {channel_label}" if channel_label else "",
    )
    return refined


@dataclass(frozen=True)
class CurvePeak:
    """Maximo local de C sobre el eje del barrido (v o p)."""

    position: float
    height: float
    width: float
    left: float
    right: float


def find_curve_peaks(curve: ResonanceCurve, prominence: Optional[float] = None) -> List[CurvePeak]:
    """Maximos de C(v) o C(p) con su ancho a media altura.

    Los puntos fallidos (C no finito) cuentan como C = 0.
    """
    axis = curve.axis
    values = np.nan_to_num(curve.C, nan=0.0, posinf=0.0, neginf=0.0)
    if values.size < 3:
        return []
    indices, _ = find_peaks(values, prominence=prominence)
    if indices.size == 0:
        return []
    _, _, left_ips, right_ips = peak_widths(values, indices, rel_height=0.5)
    samples = np.arange(values.size)
    left = np.interp(left_ips, samples, axis)
    right = np.interp(right_ips, samples, axis)
    return [
        CurvePeak(
            position=float(axis[i]),
            height=float(values[i]),
            width=float(r - l),
            left=float(l),
            right=float(r),
        )
        for i, l, r in zip(indices, left, right)
    ]


__all__ = [
    "BranchDiscontinuityError",
    "CurvePeak",
    "PhaseFunction",
    "ResonanceError",
    "ResonancePeak",
    "WidthNotBracketedError",
    "breit_wigner_width",
    "detect_resonances",
    "find_curve_peaks",
    "refine_resonance",
    "scan_resonances",
    "width_ratio",
]
