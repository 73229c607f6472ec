"""Soluciones exactas de Dirac para el pozo y la barrera esfericos.

Convencion de signo: `V` es la profundidad, positiva para un pozo (energia
potencial -V dentro de r < a) y negativa para una barrera. En el interior el
momento es q^2 = (E + V)^2 - m^2; si q^2 < 0 se usan las funciones
modificadas i_l, que son la continuacion real de j_l(i|q|r).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from scatterlab.core.config import Settings
from scatterlab.core.errors import ConfigurationError

from .channels import Channel, crossing_transform
from .phase_branch import (
    PhaseShiftSample,
    continuous_phase,
    samples_from_phase,
    wrap_phase,
)
from .special_fn import sph_i, sph_j, sph_n


class KinematicsError(ConfigurationError):
    """Energia fuera del regimen pedido (por ejemplo |E| <= m)."""


@dataclass(frozen=True)
class DiracSquareSystem:
    V: float
    a: float
    m: float
    channel: Channel

    def __post_init__(self) -> None:
        if not np.isfinite(self.V):
            raise ConfigurationError("depth: V debe ser finito.")
        if not self.a > 0:
            raise ConfigurationError(f"range: a={self.a} debe ser positivo.")
        if not self.m > 0:
            raise ConfigurationError(f"mass: m={self.m} debe ser positivo.")

    @property
    def potential_value(self) -> float:
        """Energia potencial con signo dentro del pozo, U = -V."""
        return -self.V

    def crossed(self) -> "DiracSquareSystem":
        """Problema conjugado: V -> -V, chi -> -chi (E -> -E lo aplica quien llama)."""
        return DiracSquareSystem(V=-self.V, a=self.a, m=self.m, channel=crossing_transform(self.channel))


@dataclass(frozen=True)
class DiracKinematics:
    """k y kappa son nan cuando no son reales; p es |q| y p_squared lleva el signo."""

    energy: float
    k: float
    kappa: float
    p: float
    p_squared: float
    gamma: float

    @property
    def propagating(self) -> bool:
        return np.isfinite(self.k)

    @property
    def interior_propagating(self) -> bool:
        return self.p_squared >= 0


def dirac_kinematics(system: DiracSquareSystem, energy: float) -> DiracKinematics:
    m = system.m
    k2 = energy * energy - m * m
    p2 = (energy + system.V) ** 2 - m * m
    k = np.sqrt(k2) if k2 > 0 else np.nan
    kappa = np.sqrt(-k2) if k2 < 0 else np.nan
    p = np.sqrt(abs(p2))
    gamma = np.nan
    if np.isfinite(k) and p2 >= 0:
        gamma = (p / k) * (energy + m) / (energy + system.V + m)
    return DiracKinematics(
        energy=float(energy),
        k=float(k),
        kappa=float(kappa),
        p=float(p),
        p_squared=float(p2),
        gamma=float(gamma),
    )


def _require_propagating(system: DiracSquareSystem, energies) -> np.ndarray:
    energies = np.asarray(energies, dtype=float)
    if np.any(np.abs(energies) <= system.m):
        raise KinematicsError("energy: se requiere |E| > m para una onda externa propagante.")
    return energies


def _interior_values(system: DiracSquareSystem, energies, radius):
    """(J, P) en r = radius: J = j_l(qr) o i_l(|q|r); P es el factor de g."""
    channel = system.channel
    l, lp = channel.l_chi, channel.l_minus_chi
    energies, radius = np.broadcast_arrays(
        np.asarray(energies, dtype=float), np.asarray(radius, dtype=float)
    )
    shape = energies.shape
    q2 = np.ravel((energies + system.V) ** 2 - system.m**2)
    q = np.sqrt(np.abs(q2))
    x = q * np.ravel(radius)
    real = q2 >= 0
    J, P = np.empty_like(x), np.empty_like(x)
    J[real] = sph_j(l, x[real])
    P[real] = q[real] * sph_j(lp, x[real])
    J[~real] = sph_i(l, x[~real])
    P[~real] = channel.tau * q[~real] * sph_i(lp, x[~real])
    return J.reshape(shape), P.reshape(shape)


def dirac_tan_parts(system: DiracSquareSystem, energies):
    """Numerador y denominador de tan(delta) sin polos en E + V + m = 0."""
    energies = _require_propagating(system, energies)
    channel, m, a = system.channel, system.m, system.a
    l, lp = channel.l_chi, channel.l_minus_chi
    k = np.sqrt(energies**2 - m**2)
    ka = k * a
    J, P = _interior_values(system, energies, a)
    outer = (energies + m) / k * P
    inner = (energies + system.V + m) * J
    num = outer * sph_j(l, ka) - inner * sph_j(lp, ka)
    den = outer * sph_n(l, ka) - inner * sph_n(lp, ka)
    return num, den


def dirac_tan_delta(system: DiracSquareSystem, energies):
    num, den = dirac_tan_parts(system, energies)
    return num / den


def dirac_wrapped_phase(system: DiracSquareSystem, energies):
    return wrap_phase(*dirac_tan_parts(system, energies))


def _anchor(system: DiracSquareSystem, top: float):
    m, V = system.m, system.V
    k_anchor = max(
        top,
        50.0 * (system.channel.l_chi + 1) ** 2 / system.a,
        50.0 * (abs(V) + m),
    )

    def eikonal(k: float) -> float:
        energy = np.hypot(k, m)
        return float((np.sqrt((energy + V) ** 2 - m * m) - k) * system.a)

    return k_anchor, eikonal


def dirac_phase_curve(
    system: DiracSquareSystem,
    energies: Sequence[float],
    settings: Optional[Settings] = None,
) -> List[PhaseShiftSample]:
    """Curva delta(E) para E > m, continua y anclada en delta -> V a."""
    energies = np.atleast_1d(_require_propagating(system, energies))
    if np.any(energies < 0):
        raise KinematicsError("energy: la curva continua solo cubre E > m.")
    m = system.m
    momenta = np.sqrt(energies**2 - m**2)
    order = np.argsort(momenta)
    ordered = momenta[order]
    k_anchor, eikonal = _anchor(system, ordered[-1])
    deltas = continuous_phase(
        lambda k: dirac_wrapped_phase(system, np.hypot(k, m)),
        ordered,
        k_anchor,
        eikonal,
        settings,
    )
    result = np.empty_like(deltas)
    result[order] = deltas
    return samples_from_phase(energies, momenta, result)


def dirac_phase_shift(
    system: DiracSquareSystem, energy: float, settings: Optional[Settings] = None
) -> PhaseShiftSample:
    """Desfase en una energia; para E < -m se devuelve el valor en [-pi/2, pi/2)."""
    _require_propagating(system, energy)
    if energy > 0:
        return dirac_phase_curve(system, [energy], settings)[0]
    k = np.sqrt(energy**2 - system.m**2)
    return PhaseShiftSample.from_delta(energy, k, dirac_wrapped_phase(system, energy))


def swave_closed_form_parts(system: DiracSquareSystem, energies):
    """Forma en senos y cosenos de ka y pa para chi = -1, libre de polos de tan."""
    if system.channel.chi != -1:
        raise ConfigurationError("channel: la forma cerrada solo aplica a s1/2 (chi=-1).")
    energies = _require_propagating(system, energies)
    m, a, V = system.m, system.a, system.V
    k = np.sqrt(energies**2 - m**2)
    X = k * a
    sX, cX = np.sin(X), np.cos(X)
    c = energies + V + m
    q2 = (energies + V) ** 2 - m * m
    q = np.sqrt(np.abs(q2))
    coupling = q * (energies + m) / k
    Y = q * a
    with np.errstate(invalid="ignore", over="ignore"):
        sY, cY = np.sin(Y), np.cos(Y)
        real_num = coupling * X * sX * (sY - Y * cY) - c * Y * sY * (sX - X * cX)
        real_den = c * Y * sY * (cX + X * sX) - coupling * X * cX * (sY - Y * cY)
        # interior evanescente: cociente dividido por cosh(|q|a)
        th = np.tanh(Y)
        imag_num = -coupling * X * sX * (th - Y) + c * Y * th * (sX - X * cX)
        imag_den = -c * Y * th * (cX + X * sX) + coupling * X * cX * (th - Y)
    real = q2 >= 0
    return np.where(real, real_num, imag_num), np.where(real, real_den, imag_den)


def swave_phase_closed_form(
    system: DiracSquareSystem, energy: float, settings: Optional[Settings] = None
) -> PhaseShiftSample:
    """Desfase s1/2 por la forma cerrada, en la rama de `dirac_phase_shift`."""
    num, den = swave_closed_form_parts(system, energy)
    wrapped = float(wrap_phase(num, den))
    if energy > 0:
        reference = dirac_phase_shift(system, energy, settings).delta
        wrapped += np.pi * np.round((reference - wrapped) / np.pi)
    k = np.sqrt(energy**2 - system.m**2)
    return PhaseShiftSample.from_delta(energy, k, wrapped)


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """Componentes f (grande) y g (pequena) de r*psi sobre una malla."""

    grid: np.ndarray
    f: np.ndarray
    g: np.ndarray
    energy: float
    a1: float = 1.0
    a2: float = 0.0
    b1: float = float("nan")
    b2: float = float("nan")
    amplitude: float = float("nan")

    @property
    def A(self) -> float:
        return self.amplitude


@dataclass(frozen=True)
class ExteriorCoefficients:
    a1: float
    b1: float
    b2: float
    amplitude: float

    @property
    def tan_delta(self) -> float:
        return -self.b2 / self.b1

    @property
    def delta(self) -> float:
        """Desfase en (-pi/2, pi/2] con b1 > 0."""
        return float(np.arctan2(-self.b2, self.b1))


def exterior_coefficients(system: DiracSquareSystem, energy: float) -> ExteriorCoefficients:
    """Coeficientes externos con a1 = +-1 elegido para que b1 > 0."""
    _require_propagating(system, energy)
    channel, m, a = system.channel, system.m, system.a
    l, lp = channel.l_chi, channel.l_minus_chi
    k = np.sqrt(energy**2 - m**2)
    ka = k * a
    J, P = (float(value) for value in _interior_values(system, np.asarray(energy), a))
    R = P * (energy + m) / (k * (energy + system.V + m))
    jl, nl = sph_j(l, ka), sph_n(l, ka)
    jlp, nlp = sph_j(lp, ka), sph_n(lp, ka)
    det = jl * nlp - nl * jlp
    b1 = (J * nlp - nl * R) / det
    b2 = (jl * R - J * jlp) / det
    sign = -1.0 if b1 < 0 else 1.0
    return ExteriorCoefficients(a1=sign, b1=sign * b1, b2=sign * b2, amplitude=float(np.hypot(b1, b2)))


def interior_solution(system: DiracSquareSystem, energy: float, radii) -> RadialSolution:
    """Solucion regular f = a1 r j_l(qr), g segun la ecuacion para f'."""
    coefficients = exterior_coefficients(system, energy)
    radii = np.asarray(radii, dtype=float)
    J, P = _interior_values(system, np.full(radii.shape, energy), radii)
    a1 = coefficients.a1
    f = a1 * radii * J
    g = a1 * system.channel.tau * radii * P / (energy + system.V + system.m)
    return RadialSolution(
        grid=radii,
        f=f,
        g=g,
        energy=float(energy),
        a1=a1,
        b1=coefficients.b1,
        b2=coefficients.b2,
        amplitude=coefficients.amplitude,
    )


def exterior_solution(
    system: DiracSquareSystem, energy: float, radii, delta: Optional[float] = None
) -> RadialSolution:
    """Onda libre desfasada fuera del pozo; con `delta` se usa b1 = A cos, b2 = -A sin."""
    coefficients = exterior_coefficients(system, energy)
    a1, b1, b2 = coefficients.a1, coefficients.b1, coefficients.b2
    if delta is not None:
        if abs(np.sin(delta - coefficients.delta)) > 1e-8:
            raise ConfigurationError("delta: no corresponde al desfase del sistema (modulo pi).")
        direction = 1.0 if np.cos(delta) >= 0 else -1.0
        amplitude = coefficients.amplitude
        a1, b1, b2 = a1 * direction, amplitude * np.cos(delta), -amplitude * np.sin(delta)
    channel, m = system.channel, system.m
    l, lp = channel.l_chi, channel.l_minus_chi
    radii = np.asarray(radii, dtype=float)
    k = np.sqrt(energy**2 - m**2)
    x = k * radii
    f = radii * (b1 * sph_j(l, x) + b2 * sph_n(l, x))
    g = channel.tau * k * radii * (b1 * sph_j(lp, x) + b2 * sph_n(lp, x)) / (energy + m)
    return RadialSolution(
        grid=radii,
        f=f,
        g=g,
        energy=float(energy),
        a1=a1,
        b1=float(b1),
        b2=float(b2),
        amplitude=coefficients.amplitude,
    )


def matched_solution(system: DiracSquareSystem, energy: float, radii) -> RadialSolution:
    """Solucion completa: interior para r <= a y exterior para r > a."""
    radii = np.asarray(radii, dtype=float)
    inside = radii <= system.a
    interior = interior_solution(system, energy, radii[inside])
    exterior = exterior_solution(system, energy, radii[~inside])
    return RadialSolution(
        grid=radii,
        f=np.concatenate([interior.f, exterior.f]),
        g=np.concatenate([interior.g, exterior.g]),
        energy=float(energy),
        a1=interior.a1,
        b1=interior.b1,
        b2=interior.b2,
        amplitude=interior.amplitude,
    )


def asymptotic_modulus(system: DiracSquareSystem, energy: float) -> float:
    """|Psi(R)| = A / (E + m) en las crestas lejanas, con a1 = 1."""
    return exterior_coefficients(system, energy).amplitude / (energy + system.m)


__all__ = [
    "DiracKinematics",
    "DiracSquareSystem",
    "ExteriorCoefficients",
    "KinematicsError",
    "RadialSolution",
    "asymptotic_modulus",
    "dirac_kinematics",
    "dirac_phase_curve",
    "dirac_phase_shift",
    "dirac_tan_delta",
    "dirac_tan_parts",
    "dirac_wrapped_phase",
    "exterior_coefficients",
    "exterior_solution",
    "interior_solution",
    "matched_solution",
    "swave_closed_form_parts",
    "swave_phase_closed_form",
]
