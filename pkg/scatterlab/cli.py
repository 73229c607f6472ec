"""Linea de comandos: curvas de desfase, tablas criticas, barridos de C y funciones de onda.

Cada invocacion escribe un CSV cuyo encabezado de comentarios reproduce la
configuracion completa de la corrida.
"""

import argparse
import logging
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from scatterlab.core.bootstrap import bootstrap
from scatterlab.core.config import PHASE_FIT_MODELS, Settings, get_settings
from scatterlab.core.errors import ConfigurationError, NumericalFailure
from scatterlab.core.units import UNIT_SYSTEMS, UnitSystem, get_unit_system
from scatterlab.services.analytic_dirac import (
    dirac_phase_curve,
    exterior_coefficients,
    matched_solution,
)
from scatterlab.services.analytic_schrodinger import SchrodingerWell, schrodinger_phase_curve
from scatterlab.services.channels import parse_channel, parse_schrodinger_channel
from scatterlab.services.critical_solver import TABLE_LAYOUTS, critical_table
from scatterlab.services.phase_branch import (
    PhaseShiftSample,
    samples_from_phase,
    wigner_time_delay,
)
from scatterlab.services.potentials import SHAPES, SIGNS, PotentialSpec, make_potential
from scatterlab.services.radial_integrator import (
    IntegrationConfig,
    analytic_C_square,
    integrate_radial,
    radial_grid,
    resonance_curve_vs_coupling,
    resonance_curve_vs_momentum,
    scattering_phase,
    square_system,
)
from scatterlab.services.resonance import (
    BranchDiscontinuityError,
    find_curve_peaks,
    scan_resonances,
)

logger = logging.getLogger("scatterlab.cli")

COMMANDS = ("phase-shift", "critical", "resonance-scan", "wavefunction")
MODELS = ("dirac", "schrodinger")
METHODS = ("analytic", "numerical")
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class RunConfig:
    """Todo lo que define una corrida; se vuelca en el encabezado del CSV."""

    command: str
    model: str = "dirac"
    shape: str = "square"
    table: Optional[str] = None
    sign: Optional[str] = None
    depth: float = 0.0
    range: float = 1.0
    mass: float = 1.0
    channel: str = "s1/2"
    units: str = "natural"
    scan: Optional[str] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    points: int = 200
    momentum: Optional[float] = None
    energy: Optional[float] = None
    count: int = 3
    layout: str = "scattering"
    method: Optional[str] = None
    nu: Optional[int] = None
    step: Optional[float] = None
    r0: Optional[float] = None
    fit: Optional[str] = None
    r_end: Optional[float] = None
    out: Optional[str] = None
    workers: Optional[int] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigurationError(f"command: '{self.command}' no es uno de {', '.join(COMMANDS)}.")
        if self.model not in MODELS:
            raise ConfigurationError(f"model: '{self.model}' no es uno de {', '.join(MODELS)}.")
        if self.shape not in SHAPES:
            raise ConfigurationError(f"shape: '{self.shape}' no es uno de {', '.join(SHAPES)}.")
        if self.sign is not None and self.sign not in SIGNS:
            raise ConfigurationError(f"sign: '{self.sign}' no es 'well' ni 'barrier'.")
        if self.units not in UNIT_SYSTEMS:
            raise ConfigurationError(f"units: '{self.units}' no es uno de {', '.join(UNIT_SYSTEMS)}.")
        if self.method is not None and self.method not in METHODS:
            raise ConfigurationError(f"method: '{self.method}' no es uno de {', '.join(METHODS)}.")
        if self.fit is not None and self.fit not in PHASE_FIT_MODELS:
            raise ConfigurationError(f"fit: '{self.fit}' no es uno de {', '.join(PHASE_FIT_MODELS)}.")
        if not self.range > 0:
            raise ConfigurationError(f"range: a={self.range} debe ser positivo.")
        if not self.mass > 0:
            raise ConfigurationError(f"mass: m={self.mass} debe ser positivo.")

    def header_lines(self) -> List[str]:
        return [f"{key} = {value}" for key, value in asdict(self).items()]

    @property
    def kind(self) -> str:
        """well/barrier; un --depth negativo es el valor con signo de un pozo."""
        if self.depth < 0 and self.sign == "barrier":
            raise ConfigurationError("depth: un valor negativo describe un pozo; no combine con --sign barrier.")
        if self.depth < 0:
            return "well"
        return self.sign or "well"

    @property
    def coupling(self) -> float:
        return abs(self.depth)


@dataclass
class Table:
    columns: List[str]
    rows: np.ndarray
    notes: List[str] = field(default_factory=list)


def _units(cfg: RunConfig, settings: Settings) -> UnitSystem:
    return get_unit_system(cfg.units, settings)


def _range(cfg: RunConfig, units: UnitSystem) -> float:
    return units.length_to_internal(cfg.range)


def _potential(cfg: RunConfig, units: UnitSystem, coupling: Optional[float] = None) -> PotentialSpec:
    v = cfg.coupling if coupling is None else coupling
    return make_potential(cfg.shape, cfg.kind, v, _range(cfg, units), cfg.table)


def _axis(cfg: RunConfig) -> np.ndarray:
    if cfg.start is None or cfg.stop is None:
        raise ConfigurationError("from/to: el barrido necesita --from y --to.")
    if int(cfg.points) != cfg.points or cfg.points < 2:
        raise ConfigurationError(f"points: {cfg.points} debe ser un entero >= 2.")
    if not cfg.stop > cfg.start:
        raise ConfigurationError(f"from/to: rango vacio [{cfg.start}, {cfg.stop}].")
    return np.linspace(cfg.start, cfg.stop, int(cfg.points))


def _integration(cfg: RunConfig, a: float, settings: Settings) -> IntegrationConfig:
    return IntegrationConfig.from_settings(
        a,
        settings,
        inner_step=cfg.step * a if cfg.step else None,
        outer_step=10.0 * cfg.step * a if cfg.step else None,
        start_radius=cfg.r0 * a if cfg.r0 else None,
        nu=cfg.nu,
        fit_model=cfg.fit,
    )


def _method(cfg: RunConfig) -> str:
    if cfg.method:
        if cfg.method == "analytic" and cfg.shape != "square":
            raise ConfigurationError("method: la solucion analitica solo existe para shape=square.")
        return cfg.method
    return "analytic" if cfg.shape == "square" else "numerical"


def _schrodinger_well(cfg: RunConfig, units: UnitSystem) -> Tuple[SchrodingerWell, int]:
    if cfg.shape != "square" or cfg.kind != "well":
        raise ConfigurationError("model: schrodinger solo admite el pozo cuadrado.")
    l = parse_schrodinger_channel(cfg.channel).l
    return SchrodingerWell(V=cfg.coupling, a=_range(cfg, units), m=cfg.mass), l


def phase_function(cfg: RunConfig, settings: Settings):
    """Curva analitica E -> muestras y la primera energia admisible."""
    units = _units(cfg, settings)
    if cfg.model == "schrodinger":
        well, l = _schrodinger_well(cfg, units)

        def schrodinger(energies):
            return schrodinger_phase_curve(well, l, well.momentum(energies), settings)

        return schrodinger, 1e-12 * well.m
    system = square_system(_potential(cfg, units), parse_channel(cfg.channel), cfg.mass)

    def dirac(energies):
        return dirac_phase_curve(system, energies, settings)

    return dirac, cfg.mass * (1.0 + 1e-9)


def _time_delay(samples: Sequence[PhaseShiftSample]) -> np.ndarray:
    if len(samples) < 3:
        return np.full(len(samples), np.nan)
    return wigner_time_delay(samples)


def cmd_phase_shift(cfg: RunConfig, settings: Settings) -> Tuple[Table, Optional[Table]]:
    """Columnas: abscisa (E o k), delta, tan_delta, sin2_delta, time_delay."""
    axis_name = cfg.scan or "E"
    if axis_name not in ("E", "k", "p"):
        raise ConfigurationError(f"scan: '{axis_name}' no es E, k ni p para phase-shift.")
    axis = _axis(cfg)
    m = cfg.mass
    if axis_name == "E":
        energies = axis
    elif cfg.model == "schrodinger":
        energies = axis**2 / (2.0 * m)
    else:
        energies = np.hypot(axis, m)

    peaks_table = None
    if cfg.model == "schrodinger" or _method(cfg) == "analytic":
        phase_fn, lower_bound = phase_function(cfg, settings)
        samples = phase_fn(energies)
        time_delay = _time_delay(samples)
        peaks = []
        if len(samples) >= 10:
            try:
                peaks = scan_resonances(phase_fn, energies, lower_bound, settings, cfg.channel)
            except BranchDiscontinuityError as error:
                logger.warning("Sin resumen de picos: %s Aumente --points.", error)
            peaks_table = Table(
                columns=["E_R", "gamma", "gamma_slope", "gamma_time_delay", "tau"],
                rows=np.array(
                    [
                        [
                            peak.energy,
                            np.nan if peak.gamma is None else peak.gamma,
                            np.nan if peak.gamma_slope is None else peak.gamma_slope,
                            np.nan if peak.gamma_time_delay is None else peak.gamma_time_delay,
                            peak.tau,
                        ]
                        for peak in peaks
                    ]
                ).reshape(-1, 5),
                notes=["tau > 0: resonancia; tau < 0: adelanto temporal"],
            )
    else:
        units = _units(cfg, settings)
        if np.any(energies <= m):
            raise ConfigurationError("from: el metodo numerico requiere E > m.")
        momenta = np.sqrt(energies**2 - m**2)
        potential = _potential(cfg, units)
        curve = resonance_curve_vs_momentum(
            potential,
            parse_channel(cfg.channel),
            momenta,
            m,
            settings,
            _integration(cfg, potential.a, settings),
        )
        samples = samples_from_phase(energies, momenta, curve.delta)
        continuous = np.unwrap(curve.delta, period=np.pi)
        if np.all(np.isfinite(continuous)) and len(samples) >= 3:
            time_delay = 2.0 * np.gradient(continuous, energies, edge_order=1)
        else:
            time_delay = np.full(len(samples), np.nan)

    rows = np.column_stack(
        [
            axis,
            [sample.delta for sample in samples],
            [sample.tan_delta for sample in samples],
            [sample.sin2_delta for sample in samples],
            time_delay,
        ]
    )
    table = Table(columns=[axis_name, "delta", "tan_delta", "sin2_delta", "time_delay"], rows=rows)
    return table, peaks_table


def cmd_critical(cfg: RunConfig, settings: Settings) -> Table:
    """Tabla n x 4 con el orden de columnas de `layout`."""
    if cfg.model != "dirac":
        raise ConfigurationError("model: la tabla critica es un calculo de Dirac.")
    if cfg.layout not in TABLE_LAYOUTS:
        raise ConfigurationError(f"layout: '{cfg.layout}' no es uno de {', '.join(TABLE_LAYOUTS)}.")
    if int(cfg.count) != cfg.count or cfg.count < 1:
        raise ConfigurationError(f"count: {cfg.count} debe ser un entero >= 1.")
    units = _units(cfg, settings)
    columns = critical_table(
        cfg.shape,
        cfg.mass,
        _range(cfg, units),
        int(cfg.count),
        cfg.layout,
        settings,
        cfg.table,
    )
    rows = np.column_stack(
        [np.arange(1, cfg.count + 1)] + [[root.value for root in roots] for roots in columns.values()]
    )
    return Table(columns=["n", *columns], rows=rows, notes=[f"energias en {units.energy_label}"])


def cmd_resonance_scan(cfg: RunConfig, settings: Settings) -> Tuple[Table, Table]:
    """Columnas: eje (v o p), C, delta; mas el resumen de picos de C."""
    if cfg.model != "dirac":
        raise ConfigurationError("model: el barrido de C integra las ecuaciones de Dirac.")
    axis_name = cfg.scan or "v"
    if axis_name not in ("v", "p"):
        raise ConfigurationError(f"scan: '{axis_name}' no es v ni p para resonance-scan.")
    axis = _axis(cfg)
    units = _units(cfg, settings)
    channel = parse_channel(cfg.channel)
    if axis_name == "v":
        if cfg.momentum is None:
            raise ConfigurationError("momentum: el barrido en v necesita --momentum.")
        potential = _potential(cfg, units, coupling=0.0)
        curve = resonance_curve_vs_coupling(
            potential,
            channel,
            cfg.momentum,
            axis,
            cfg.mass,
            settings,
            _integration(cfg, potential.a, settings),
        )
    else:
        potential = _potential(cfg, units)
        curve = resonance_curve_vs_momentum(
            potential,
            channel,
            axis,
            cfg.mass,
            settings,
            _integration(cfg, potential.a, settings),
        )
    notes = [f"{len(curve.failures)} puntos fallidos"] if curve.failures else []
    table = Table(columns=[axis_name, "C", "delta"], rows=np.column_stack([curve.axis, curve.C, curve.delta]), notes=notes)
    peaks = find_curve_peaks(curve)
    peaks_table = Table(
        columns=["position", "C_max", "fwhm", "left", "right"],
        rows=np.array([[p.position, p.height, p.width, p.left, p.right] for p in peaks]).reshape(-1, 5),
    )
    return table, peaks_table


def cmd_wavefunction(cfg: RunConfig, settings: Settings) -> Table:
    """Columnas r, f, g con max|f| = 1 en la zona asintotica (C = C(v))."""
    if cfg.model != "dirac":
        raise ConfigurationError("model: la funcion de onda radial es de Dirac.")
    m = cfg.mass
    if cfg.momentum is not None:
        momentum = cfg.momentum
    elif cfg.energy is not None:
        if not cfg.energy > m:
            raise ConfigurationError("energy: se requiere E > m.")
        momentum = float(np.sqrt(cfg.energy**2 - m**2))
    else:
        raise ConfigurationError("momentum: indique --momentum o --energy.")
    if not momentum > 0:
        raise ConfigurationError(f"momentum: p={momentum} debe ser positivo.")
    units = _units(cfg, settings)
    channel = parse_channel(cfg.channel)
    potential = _potential(cfg, units)
    integration = _integration(cfg, potential.a, settings)
    energy = float(np.hypot(momentum, m))
    r_end = units.length_to_internal(cfg.r_end) if cfg.r_end else None

    if _method(cfg) == "analytic":
        system = square_system(potential, channel, m)
        grid = radial_grid(integration, r_end or integration.node_cap(momentum))
        solution = matched_solution(system, energy, grid)
        scale = momentum / exterior_coefficients(system, energy).amplitude
        f, g = solution.f * scale, solution.g * scale
        notes = [f"C = {analytic_C_square(system, energy):.12g}"]
    else:
        phase = scattering_phase(potential, channel, momentum, m, settings, integration)
        solution = integrate_radial(
            potential,
            channel,
            energy,
            m,
            replace(integration, amplitude=phase.C),
            r_end=r_end or phase.node_radius + np.pi / momentum,
        )
        grid, f, g = solution.grid, solution.f, solution.g
        notes = [
            f"C = {phase.C:.12g}",
            f"r_nu = {units.length_from_internal(phase.node_radius):.12g}",
            f"delta = {phase.delta:.12g}",
        ]
    rows = np.column_stack([units.length_from_internal(grid), f, g])
    return Table(columns=["r", "f", "g"], rows=rows, notes=notes)


def write_table(table: Table, cfg: RunConfig, settings: Settings, stream: TextIO) -> None:
    header = [
        f"scatterlab {cfg.command}",
        *cfg.header_lines(),
        *settings.echo_lines(),
        *table.notes,
        ",".join(table.columns),
    ]
    np.savetxt(
        stream,
        np.asarray(table.rows, dtype=float).reshape(-1, len(table.columns)),
        fmt=settings.csv_format,
        delimiter=",",
        header="\n".join(header),
        comments="# ",
    )


@contextmanager
def _open_output(path: Optional[str]) -> Iterator[TextIO]:
    if not path or path == "-":
        yield sys.stdout
        return
    try:
        with Path(path).open("w", encoding="utf-8") as stream:
            yield stream
    except OSError as error:
        raise ConfigurationError(f"out: no se pudo escribir '{path}': {error}") from error


def run(cfg: RunConfig, settings: Settings) -> None:
    """Ejecuta el comando y escribe su CSV (y el resumen de picos si aplica)."""
    sidecar = None
    if cfg.command == "phase-shift":
        table, sidecar = cmd_phase_shift(cfg, settings)
    elif cfg.command == "critical":
        table = cmd_critical(cfg, settings)
    elif cfg.command == "resonance-scan":
        table, sidecar = cmd_resonance_scan(cfg, settings)
    else:
        table = cmd_wavefunction(cfg, settings)

    with _open_output(cfg.out) as stream:
        write_table(table, cfg, settings, stream)
    if sidecar is None:
        return
    if cfg.out and cfg.out != "-":
        with _open_output(str(Path(cfg.out).with_suffix(".peaks.csv"))) as stream:
            write_table(sidecar, cfg, settings, stream)
    else:
        for row in np.asarray(sidecar.rows).reshape(-1, len(sidecar.columns)):
            logger.info("Pico: %s", ", ".join(f"{name}={value:.6g}" for name, value in zip(sidecar.columns, row)))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=MODELS, default="dirac")
    common.add_argument("--shape", choices=SHAPES, default="square")
    common.add_argument("--table", default=None, help="archivo x, w(x) para shape=tabulated")
    common.add_argument("--sign", choices=tuple(SIGNS), default=None)
    common.add_argument("--depth", type=float, default=0.0, help="acoplamiento v (negativo: pozo con signo)")
    common.add_argument("--range", type=float, default=1.0, help="alcance a")
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--channel", default="s1/2", help="etiqueta (s1/2, p1/2, ...), chi o l")
    common.add_argument("--units", choices=UNIT_SYSTEMS, default="natural")
    common.add_argument("--scan", default=None)
    common.add_argument("--from", dest="start", type=float, default=None)
    common.add_argument("--to", dest="stop", type=float, default=None)
    common.add_argument("--points", type=int, default=200)
    common.add_argument("--method", choices=METHODS, default=None)
    common.add_argument("--nu", type=int, default=None, help="nodo de g usado en el ajuste")
    common.add_argument("--step", type=float, default=None, help="paso interior en unidades de a")
    common.add_argument("--r0", type=float, default=None, help="radio inicial en unidades de a")
    common.add_argument("--fit", choices=PHASE_FIT_MODELS, default=None)
    common.add_argument("--out", default=None, help="archivo CSV de salida (por defecto stdout)")
    common.add_argument("--workers", type=int, default=None)

    parser = argparse.ArgumentParser(prog="scatterlab", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("phase-shift", parents=[common], help="curva delta(E) o delta(k)")
    critical = commands.add_parser("critical", parents=[common], help="acoplamientos criticos")
    critical.add_argument("--count", type=int, default=3)
    critical.add_argument("--layout", choices=tuple(TABLE_LAYOUTS), default="scattering")
    scan = commands.add_parser("resonance-scan", parents=[common], help="barrido C(v) o C(p)")
    scan.add_argument("--momentum", type=float, default=None)
    wave = commands.add_parser("wavefunction", parents=[common], help="f y g en un punto (E, v)")
    wave.add_argument("--momentum", type=float, default=None)
    wave.add_argument("--energy", type=float, default=None)
    wave.add_argument("--r-end", dest="r_end", type=float, default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {name: value for name, value in vars(args).items() if name in RunConfig.__dataclass_fields__}
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
        if args.workers:
            settings = replace(settings, scan_workers=args.workers)
        settings = bootstrap(settings)
        run(config_from_args(args), settings)
    except ConfigurationError as error:
        logger.error("Configuracion invalida: %s", error)
        return EXIT_CONFIG
    except NumericalFailure as error:
        logger.error("Fallo numerico: %s", error)
        return EXIT_NUMERICAL
    return 0


__all__ = [
    "RunConfig",
    "Table",
    "build_parser",
    "cmd_critical",
    "cmd_phase_shift",
    "cmd_resonance_scan",
    "cmd_wavefunction",
    "main",
    "phase_function",
    "run",
    "write_table",
]
