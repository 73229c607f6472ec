"""Laboratorio virtual: integracion numerica de las ecuaciones radiales de Dirac.

    f' = -chi/r f + (E + m - U) g
    g' = -(E - m - U) f + chi/r g

con U(r) = +-v w(r/a). El paso es fijo (RK4 clasico): h1 hasta r = 20a y h2
despues, sobre una malla alineada r_n = n h1 para que la frontera de un pozo
cuadrado caiga en un nodo de la malla.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from scatterlab.core.config import PHASE_FIT_MODELS, Settings, get_settings
from scatterlab.core.errors import ConfigurationError, NumericalFailure

from .analytic_dirac import DiracSquareSystem, RadialSolution, exterior_coefficients
from .channels import Channel
from .potentials import PotentialSpec
from .special_fn import double_factorial, sph_j, sph_n

logger = logging.getLogger("scatterlab.integrator")

# las etapas extremas muestrean U un poco dentro del paso
STAGE_OFFSET = 1e-9
CHUNK = 4096


class IntegrationError(NumericalFailure):
    """La integracion radial no pudo completarse."""


class NodeNotFoundError(IntegrationError):
    """No aparecieron nu nodos de g antes del radio maximo."""


class DegenerateFitError(IntegrationError):
    """f es practicamente nula en los dos puntos del ajuste."""


class MagnitudeOverflowError(IntegrationError):
    """Las componentes superaron el tope de magnitud."""


@dataclass(frozen=True)
class IntegrationConfig:
    """Parametros de paso en longitudes absolutas (ya multiplicadas por a)."""

    inner_step: float
    outer_step: float
    inner_region: float
    start_radius: float
    nu: int = 20
    amplitude: float = 1.0
    magnitude_cap: float = 1e150
    fit_model: str = "riccati"
    max_radius: Optional[float] = None

    def __post_init__(self) -> None:
        if not (self.inner_step > 0 and self.outer_step > 0):
            raise ConfigurationError("step: h debe ser positivo.")
        if not 0 < self.start_radius < self.inner_step:
            raise ConfigurationError("r0: debe cumplir 0 < r0 < h.")
        if int(self.nu) != self.nu or self.nu < 1:
            raise ConfigurationError(f"nu={self.nu}: debe ser un entero >= 1.")
        if not self.amplitude > 0:
            raise ConfigurationError("C: la amplitud inicial debe ser positiva.")
        if self.fit_model not in PHASE_FIT_MODELS:
            raise ConfigurationError(f"fit: '{self.fit_model}' no es uno de {PHASE_FIT_MODELS}.")

    @classmethod
    def from_settings(
        cls, a: float, settings: Optional[Settings] = None, **overrides
    ) -> "IntegrationConfig":
        settings = settings or get_settings()
        values = dict(
            inner_step=settings.inner_step * a,
            outer_step=settings.outer_step * a,
            inner_region=settings.inner_region * a,
            start_radius=settings.start_radius * a,
            nu=settings.node_index,
            magnitude_cap=settings.magnitude_cap,
            fit_model=settings.phase_fit_model,
        )
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def h(self) -> float:
        return self.inner_step

    def halved(self) -> "IntegrationConfig":
        return replace(self, inner_step=self.inner_step / 2, outer_step=self.outer_step / 2)

    def node_cap(self, momentum: float) -> float:
        """Radio maximo para buscar el nodo nu a momento p."""
        if self.max_radius is not None:
            return self.max_radius
        return self.inner_region + (self.nu + 1) * np.pi / momentum + 10.0 / momentum


@dataclass(frozen=True)
class NumericalPhaseResult:
    delta: float
    D: float
    theta: float
    delta1: float
    node_radius: float
    C: float
    fit_model: str


def radial_grid(cfg: IntegrationConfig, r_end: float) -> np.ndarray:
    """Malla completa r0, h1, 2h1, ..., 20a, 20a + h2, ... hasta cubrir r_end."""
    return np.concatenate([[cfg.start_radius], *(right for _, right in _grid_chunks(cfg, r_end))])


def _grid_chunks(cfg: IntegrationConfig, r_end: float) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Pares (r_i, r_{i+1}) por bloques; el ultimo paso alcanza o supera r_end."""
    inner_count = max(int(round(cfg.inner_region / cfg.inner_step)), 1)
    inner_end = inner_count * cfg.inner_step
    start = 1
    while True:
        index = np.arange(start, start + CHUNK)
        right = np.where(
            index <= inner_count,
            index * cfg.inner_step,
            inner_end + (index - inner_count) * cfg.outer_step,
        )
        left = np.concatenate([[cfg.start_radius if start == 1 else previous], right[:-1]])
        done = np.flatnonzero(right >= r_end)
        if done.size:
            stop = done[0] + 1
            yield left[:stop], right[:stop]
            return
        yield left, right
        previous = right[-1]
        start += CHUNK


def _stage_shape(potential: PotentialSpec, left: np.ndarray, right: np.ndarray):
    """sign * w en el inicio, el centro y el final de cada paso."""
    step = right - left
    stages = (left + STAGE_OFFSET * step, left + 0.5 * step, right - STAGE_OFFSET * step)
    return tuple((potential.sign * potential.w(x / potential.a)).tolist() for x in stages)


def _origin_potential(potential: PotentialSpec, coupling):
    return potential.sign * float(potential.w(0.0)) * coupling


def _rk4_step(chi, ep, em, r, rn, f, g, u0, um, u1):
    """Un paso RK4; ep = E + m y em = E - m; vale para floats y columnas."""
    h = rn - r
    half = 0.5 * h
    rm = r + half
    c0, cm, c1 = chi / r, chi / rm, chi / rn
    k1f = -c0 * f + (ep - u0) * g
    k1g = -(em - u0) * f + c0 * g
    f2, g2 = f + half * k1f, g + half * k1g
    k2f = -cm * f2 + (ep - um) * g2
    k2g = -(em - um) * f2 + cm * g2
    f3, g3 = f + half * k2f, g + half * k2g
    k3f = -cm * f3 + (ep - um) * g3
    k3g = -(em - um) * f3 + cm * g3
    f4, g4 = f + h * k3f, g + h * k3g
    k4f = -c1 * f4 + (ep - u1) * g4
    k4g = -(em - u1) * f4 + c1 * g4
    sixth = h / 6.0
    return (
        f + sixth * (k1f + 2.0 * k2f + 2.0 * k3f + k4f),
        g + sixth * (k1g + 2.0 * k2g + 2.0 * k3g + k4g),
    )


def _origin_values(chi: int, energy, m: float, u_origin, radius: float, amplitude: float, normalise: str = "f"):
    """Potencias dominantes en r0; sigma no entra en la amplitud C.

    Con normalise="g" y chi > 0 se fija g ~ r^k; f lleva el factor
    (E + m - U(0)) / (2k + 1), que puede anularse sin singularidad.
    """
    k = abs(chi)
    if chi < 0:
        sigma = (u_origin - energy + m) / (2 * k + 1)
        return amplitude * radius**k, sigma * amplitude * radius ** (k + 1)
    if normalise == "g":
        sigma = (energy + m - u_origin) / (2 * k + 1)
        return sigma * amplitude * radius ** (k + 1), amplitude * radius**k
    denominator = energy + m - u_origin
    if np.any(np.asarray(denominator) == 0):
        raise IntegrationError("E + m - U(0) = 0: condicion inicial singular para chi > 0.")
    sigma = (2 * k + 1) / denominator
    return amplitude * radius ** (k + 1), sigma * amplitude * radius**k


def integrate_radial(
    potential: PotentialSpec,
    channel: Channel,
    energy: float,
    m: float,
    cfg: IntegrationConfig,
    r_end: Optional[float] = None,
    until_node: Optional[int] = None,
) -> RadialSolution:
    """Integra hacia afuera y guarda (r, f, g) en cada punto de la malla.

    Se detiene en r_end o justo despues del nodo `until_node` de g, lo que
    ocurra primero.
    """
    if r_end is None and until_node is None:
        r_end = cfg.inner_region
    if until_node is not None and r_end is None:
        momentum = np.sqrt(max(energy * energy - m * m, 0.0))
        if momentum == 0:
            raise ConfigurationError("until_node requiere E > m o un r_end explicito.")
        r_end = cfg.node_cap(momentum)
    radii, fs, gs, _ = _shoot(potential, channel, energy, m, potential.v, cfg, r_end, until_node, store=True)
    return RadialSolution(
        grid=np.asarray(radii),
        f=np.asarray(fs),
        g=np.asarray(gs),
        energy=float(energy),
        a1=cfg.amplitude,
    )


def _shoot(potential, channel, energy, m, coupling, cfg, r_end, until_node, store):
    chi = channel.chi
    ep, em = energy + m, energy - m
    u_origin = _origin_potential(potential, coupling)
    r = cfg.start_radius
    f, g = _origin_values(chi, energy, m, u_origin, r, cfg.amplitude)
    cap = cfg.magnitude_cap
    radii, fs, gs = ([r], [f], [g]) if store else (None, None, None)
    nodes = 0
    for left, right in _grid_chunks(cfg, r_end):
        starts, middles, ends = _stage_shape(potential, left, right)
        for rn, w0, wm, w1 in zip(right.tolist(), starts, middles, ends):
            fn, gn = _rk4_step(chi, ep, em, r, rn, f, g, coupling * w0, coupling * wm, coupling * w1)
            if not (abs(fn) < cap and abs(gn) < cap):
                raise MagnitudeOverflowError(
                    f"|f|,|g| superan {cap:.3g} en r={rn:.6g}: E o v no fisicos para este canal."
                )
            if store:
                radii.append(rn)
                fs.append(fn)
                gs.append(gn)
            if (g < 0) != (gn < 0):
                nodes += 1
                if until_node is not None and nodes == until_node:
                    return radii, fs, gs, (r, rn, f, fn, g, gn)
            r, f, g = rn, fn, gn
    if until_node is not None:
        raise NodeNotFoundError(f"solo {nodes} nodos de g antes de r={r:.6g}; se pedian {until_node}.")
    return radii, fs, gs, None


def _node_bracket(solution: RadialSolution, nu: int):
    g = np.asarray(solution.g)
    negative = g < 0
    changes = np.flatnonzero(negative[1:] != negative[:-1])
    if changes.size < nu:
        raise NodeNotFoundError(f"g tiene {changes.size} nodos en la malla; se pedian {nu}.")
    i = changes[nu - 1]
    return (
        float(solution.grid[i]),
        float(solution.grid[i + 1]),
        float(solution.f[i]),
        float(solution.f[i + 1]),
        float(g[i]),
        float(g[i + 1]),
    )


def find_node(solution: RadialSolution, nu: int) -> float:
    """Radio del nu-esimo cero de g por cambio de signo e interpolacion lineal."""
    r0, r1, _, _, g0, g1 = _node_bracket(solution, nu)
    return r0 - g0 * (r1 - r0) / (g1 - g0)


def _fit_riccati(alpha, beta, r0, r1, momentum, l):
    """Ajuste exacto a r (b1 j_l(pr) + b2 n_l(pr)) en dos puntos."""
    j0, n0 = r0 * sph_j(l, momentum * r0), r0 * sph_n(l, momentum * r0)
    j1, n1 = r1 * sph_j(l, momentum * r1), r1 * sph_n(l, momentum * r1)
    det = j0 * n1 - n0 * j1
    b1 = (alpha * n1 - n0 * beta) / det
    b2 = (j0 * beta - j1 * alpha) / det
    delta1 = float(np.arctan2(-b2, b1))
    D = float(np.hypot(b1, b2) / momentum)
    theta = momentum * r0 + delta1 - 0.5 * l * np.pi
    return delta1, D, theta


def _fit_sine(alpha, beta, r0, r1, momentum, l):
    """Modelo local f = D sin(theta + p (r - r0)) con sus casos especiales."""
    ph = momentum * (r1 - r0)
    if alpha == 0.0:
        theta, D = 0.0, beta / np.sin(ph)
    elif alpha == beta:
        theta = -0.5 * ph
        D = alpha / np.sin(theta)
    elif beta / alpha == np.cos(ph):
        theta, D = np.copysign(0.5 * np.pi, alpha), abs(alpha)
    else:
        theta = float(np.arctan(np.sin(ph) / (beta / alpha - np.cos(ph))))
        D = alpha / np.sin(theta)
    delta1 = theta - momentum * r0 + 0.5 * l * np.pi
    return float(delta1), float(D), float(theta)


def window_phase(delta1: float) -> float:
    """Lleva el desfase a [-pi/2, pi/2)."""
    return float(np.mod(delta1 + 0.5 * np.pi, np.pi) - 0.5 * np.pi)


def numerical_phase(
    source: Union[RadialSolution, Tuple[float, ...]],
    momentum: float,
    cfg: IntegrationConfig,
    channel: Channel,
) -> NumericalPhaseResult:
    """Desfase numerico en el nodo nu de g.

    `source` es una solucion muestreada o directamente el tramo
    (r_i, r_{i+1}, f_i, f_{i+1}, g_i, g_{i+1}) que contiene ese nodo.
    """
    if isinstance(source, RadialSolution):
        source = _node_bracket(source, cfg.nu)
    r0, r1, alpha, beta, g0, g1 = source
    if abs(alpha) < 1e-12 and abs(beta) < 1e-12:
        raise DegenerateFitError(f"f ~ 0 en r={r0:.6g} y r={r1:.6g}.")
    l = channel.l_chi
    if cfg.fit_model == "sine":
        delta1, D, theta = _fit_sine(alpha, beta, r0, r1, momentum, l)
    else:
        delta1, D, theta = _fit_riccati(alpha, beta, r0, r1, momentum, l)
    node_radius = r0 - g0 * (r1 - r0) / (g1 - g0)
    return NumericalPhaseResult(
        delta=window_phase(delta1),
        D=D,
        theta=theta,
        delta1=delta1,
        node_radius=float(node_radius),
        C=cfg.amplitude / abs(D),
        fit_model=cfg.fit_model,
    )


def scattering_phase(
    potential: PotentialSpec,
    channel: Channel,
    momentum: float,
    m: float,
    settings: Optional[Settings] = None,
    cfg: Optional[IntegrationConfig] = None,
) -> NumericalPhaseResult:
    """Integra a E = sqrt(p^2 + m^2) hasta el nodo nu de g y ajusta la fase."""
    if not momentum > 0:
        raise ConfigurationError(f"momentum: p={momentum} debe ser positivo.")
    cfg = cfg or IntegrationConfig.from_settings(potential.a, settings)
    energy = float(np.hypot(momentum, m))
    _, _, _, bracket = _shoot(
        potential, channel, energy, m, potential.v, cfg, cfg.node_cap(momentum), cfg.nu, store=False
    )
    return numerical_phase(bracket, momentum, cfg, channel)


@dataclass(frozen=True)
class CurvePoint:
    axis: float
    C: float
    delta: float
    node_radius: float
    error: Optional[str] = None


@dataclass(frozen=True)
class ResonanceCurve:
    """Curva C(v) o C(p) en el orden del eje."""

    axis_name: str
    points: List[CurvePoint]

    @property
    def axis(self) -> np.ndarray:
        return np.array([point.axis for point in self.points])

    @property
    def C(self) -> np.ndarray:
        return np.array([point.C for point in self.points])

    @property
    def delta(self) -> np.ndarray:
        return np.array([point.delta for point in self.points])

    @property
    def failures(self) -> List[CurvePoint]:
        return [point for point in self.points if point.error]


def _march_columns(potential, channel, energies, m, couplings, momenta, cfg) -> List[tuple]:
    """Integra varias columnas a la vez y ajusta cada una en su nodo nu."""
    chi, nu = channel.chi, cfg.nu
    energies = np.asarray(energies, dtype=float)
    couplings = np.asarray(couplings, dtype=float)
    momenta = np.asarray(momenta, dtype=float)
    size = max(energies.size, couplings.size)
    energies = np.broadcast_to(energies, (size,)).copy()
    couplings = np.broadcast_to(couplings, (size,)).copy()
    momenta = np.broadcast_to(momenta, (size,))
    ep, em = energies + m, energies - m
    r = cfg.start_radius
    f, g = _origin_values(chi, energies, m, _origin_potential(potential, couplings), r, cfg.amplitude)
    f = np.broadcast_to(np.asarray(f, dtype=float), (size,)).copy()
    g = np.broadcast_to(np.asarray(g, dtype=float), (size,)).copy()
    nodes = np.zeros(size, dtype=int)
    active = np.ones(size, dtype=bool)
    brackets = np.full((size, 6), np.nan)
    errors: List[Optional[str]] = [None] * size
    r_end = max(cfg.node_cap(p) for p in momenta)
    steps = 0
    for left, right in _grid_chunks(cfg, r_end):
        starts, middles, ends = _stage_shape(potential, left, right)
        for rn, w0, wm, w1 in zip(right.tolist(), starts, middles, ends):
            fn, gn = _rk4_step(chi, ep, em, r, rn, f, g, couplings * w0, couplings * wm, couplings * w1)
            crossed = active & ((g < 0) != (gn < 0))
            if crossed.any():
                nodes += crossed
                hit = crossed & (nodes == nu)
                if hit.any():
                    brackets[hit] = np.column_stack(
                        [np.full(hit.sum(), r), np.full(hit.sum(), rn), f[hit], fn[hit], g[hit], gn[hit]]
                    )
                    active &= ~hit
                    if not active.any():
                        return _points_from_brackets(brackets, errors, momenta, cfg, channel)
            r, f, g = rn, fn, gn
            steps += 1
            if steps % 256 == 0:
                blown = active & ~((np.abs(f) < cfg.magnitude_cap) & (np.abs(g) < cfg.magnitude_cap))
                for index in np.flatnonzero(blown):
                    errors[index] = f"magnitud > {cfg.magnitude_cap:.3g} en r={r:.6g}"
                active &= ~blown
                f[blown], g[blown] = 0.0, 0.0
                if not active.any():
                    return _points_from_brackets(brackets, errors, momenta, cfg, channel)
    for index in np.flatnonzero(active):
        errors[index] = f"solo {nodes[index]} nodos de g antes de r={r:.6g}"
    return _points_from_brackets(brackets, errors, momenta, cfg, channel)


def _points_from_brackets(brackets, errors, momenta, cfg, channel) -> List[tuple]:
    """(C, delta, r_nu, error) por columna."""
    results = []
    for bracket, error, momentum in zip(brackets, errors, momenta):
        if error is None:
            try:
                phase = numerical_phase(tuple(bracket.tolist()), float(momentum), cfg, channel)
            except IntegrationError as failure:
                error = str(failure)
            else:
                results.append((phase.C, phase.delta, phase.node_radius, None))
                continue
        results.append((np.nan, np.nan, np.nan, error))
    return results


def _scan(axis_name, axis, evaluate, settings: Settings) -> ResonanceCurve:
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size < 2:
        raise ConfigurationError(f"{axis_name}: se requieren al menos 2 puntos en el barrido.")
    if not np.all(np.isfinite(axis)):
        raise ConfigurationError(f"{axis_name}: el barrido contiene valores no finitos.")
    blocks = [axis[start:start + settings.scan_block] for start in range(0, axis.size, settings.scan_block)]
    logger.info("Barrido en %s: %d puntos en %d bloques.", axis_name, axis.size, len(blocks))
    if settings.scan_workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=settings.scan_workers) as pool:
            outcomes = list(pool.map(evaluate, blocks))
    else:
        outcomes = [evaluate(block) for block in blocks]
    points = []
    for block, outcome in zip(blocks, outcomes):
        for value, (C, delta, node_radius, error) in zip(block.tolist(), outcome):
            if error:
                logger.warning("Punto %s=%.6g descartado: %s", axis_name, value, error)
            points.append(CurvePoint(axis=value, C=C, delta=delta, node_radius=node_radius, error=error))
    return ResonanceCurve(axis_name=axis_name, points=points)


def resonance_curve_vs_coupling(
    potential: PotentialSpec,
    channel: Channel,
    momentum: float,
    couplings: Sequence[float],
    m: float,
    settings: Optional[Settings] = None,
    cfg: Optional[IntegrationConfig] = None,
) -> ResonanceCurve:
    """C(v) y delta(v) a momento p fijo."""
    settings = settings or get_settings()
    if not momentum > 0:
        raise ConfigurationError(f"momentum: p={momentum} debe ser positivo.")
    if np.any(np.asarray(couplings, dtype=float) < 0):
        raise ConfigurationError("depth: los acoplamientos deben ser >= 0.")
    cfg = cfg or IntegrationConfig.from_settings(potential.a, settings)
    energy = float(np.hypot(momentum, m))

    def evaluate(block):
        return _march_columns(potential, channel, energy, m, block, momentum, cfg)

    return _scan("v", couplings, evaluate, settings)


def resonance_curve_vs_momentum(
    potential: PotentialSpec,
    channel: Channel,
    momenta: Sequence[float],
    m: float,
    settings: Optional[Settings] = None,
    cfg: Optional[IntegrationConfig] = None,
) -> ResonanceCurve:
    """C(p) y delta(p) con el acoplamiento de `potential` fijo."""
    settings = settings or get_settings()
    if np.any(np.asarray(momenta, dtype=float) <= 0):
        raise ConfigurationError("momentum: todos los p deben ser positivos.")
    cfg = cfg or IntegrationConfig.from_settings(potential.a, settings)

    def evaluate(block):
        return _march_columns(potential, channel, np.hypot(block, m), m, potential.v, block, cfg)

    return _scan("p", momenta, evaluate, settings)


def square_system(potential: PotentialSpec, channel: Channel, m: float) -> DiracSquareSystem:
    """Sistema analitico equivalente a un potencial cuadrado (profundidad -sign*v)."""
    if potential.shape != "square":
        raise ConfigurationError("shape: la forma cerrada de C solo existe para 'square'.")
    return DiracSquareSystem(V=-potential.sign * potential.v, a=potential.a, m=m, channel=channel)


def analytic_C_square(system: DiracSquareSystem, energy: float) -> float:
    """C exacta: k |q|^l / ((2l+1)!! A), normalizando f ~ r^{l+1} en el origen."""
    coefficients = exterior_coefficients(system, energy)
    l = system.channel.l_chi
    k = np.sqrt(energy**2 - system.m**2)
    q = np.sqrt(abs((energy + system.V) ** 2 - system.m**2))
    return float(k * q**l / (double_factorial(2 * l + 1) * coefficients.amplitude))


def zero_momentum_mismatch(
    potential: PotentialSpec,
    channel: Channel,
    energy_sign: int,
    m: float,
    couplings,
    settings: Optional[Settings] = None,
):
    """Peso de la rama externa prohibida a E = +-m, normalizado a [-1, 1].

    A momento cero la solucion externa es una combinacion de dos potencias de
    r; la condicion critica exige que desaparezca la no normalizable.
    """
    settings = settings or get_settings()
    if energy_sign not in (1, -1):
        raise ConfigurationError("energy_sign: debe ser +1 (E=m) o -1 (E=-m).")
    a = potential.a
    step = settings.critical_step * a
    radius = settings.critical_radius * a
    cfg = IntegrationConfig(
        inner_step=step,
        outer_step=step,
        inner_region=radius,
        start_radius=settings.start_radius * a,
    )
    chi = channel.chi
    energy = energy_sign * m
    ep, em = energy + m, energy - m
    scalar = np.ndim(couplings) == 0
    v = float(couplings) if scalar else np.asarray(couplings, dtype=float)
    r = cfg.start_radius
    f, g = _origin_values(chi, energy, m, _origin_potential(potential, v), r, 1.0, normalise="g")
    steps = 0
    for left, right in _grid_chunks(cfg, radius - 0.5 * step):
        starts, middles, ends = _stage_shape(potential, left, right)
        for rn, w0, wm, w1 in zip(right.tolist(), starts, middles, ends):
            f, g = _rk4_step(chi, ep, em, r, rn, f, g, v * w0, v * wm, v * w1)
            r = rn
            steps += 1
            if steps % 128 == 0:
                scale = np.maximum(np.abs(f), np.abs(g))
                if np.max(scale) > 1e100:
                    f, g = f / scale, g / scale
    R = r
    if energy_sign > 0:
        A = np.array([2 * m * R ** (chi + 1) / (2 * chi + 1), R**chi])
        B = np.array([R ** (-chi), 0.0])
    else:
        A = np.array([0.0, R**chi])
        B = np.array([R ** (-chi), 2 * m * R ** (1 - chi) / (1 - 2 * chi)])
    A, B = A / np.hypot(*A), B / np.hypot(*B)
    det = A[0] * B[1] - A[1] * B[0]
    alpha = (f * B[1] - g * B[0]) / det
    beta = (A[0] * g - A[1] * f) / det
    forbidden = beta if chi < 0 else alpha
    mismatch = forbidden / np.hypot(alpha, beta)
    return float(mismatch) if scalar else mismatch


__all__ = [
    "CurvePoint",
    "DegenerateFitError",
    "IntegrationConfig",
    "IntegrationError",
    "MagnitudeOverflowError",
    "NodeNotFoundError",
    "NumericalPhaseResult",
    "ResonanceCurve",
    "analytic_C_square",
    "find_node",
    "integrate_radial",
    "numerical_phase",
    "radial_grid",
    "resonance_curve_vs_coupling",
    "resonance_curve_vs_momentum",
    "scattering_phase",
    "square_system",
    "window_phase",
    "zero_momentum_mismatch",
]
