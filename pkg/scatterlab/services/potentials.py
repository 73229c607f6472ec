"""Formas radiales V(r) = +-v w(r/a) de pozos y barreras de corto alcance."""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from scatterlab.core.errors import ConfigurationError

SHAPES = ("square", "gaussian", "exponential", "woods_saxon", "tabulated")
SIGNS = {"well": -1, "barrier": 1}


class PotentialError(ConfigurationError):
    """Potencial mal especificado."""


@dataclass(frozen=True, eq=False)
class TabulatedShape:
    """w(x) interpolada linealmente; cero mas alla del ultimo punto."""

    x: np.ndarray
    w: np.ndarray

    def __call__(self, x):
        return np.interp(x, self.x, self.w, right=0.0)


def load_tabulated_shape(path: Union[str, Path]) -> TabulatedShape:
    """Lee un archivo de dos columnas (x, w) ascendente que empieza en x=0."""
    try:
        data = np.loadtxt(path, comments="#", ndmin=2)
    except (OSError, ValueError) as error:
        raise PotentialError(f"table: no se pudo leer '{path}': {error}") from error
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise PotentialError("table: se esperan al menos dos filas de dos columnas.")
    x, w = data[:, 0], data[:, 1]
    if x[0] != 0.0 or w[0] != 1.0:
        raise PotentialError("table: la primera fila debe ser x=0, w=1.")
    if np.any(np.diff(x) <= 0):
        raise PotentialError("table: x debe ser estrictamente ascendente.")
    if np.any(w < 0) or np.any(w > 1) or np.any(np.diff(w) > 0):
        raise PotentialError("table: w debe estar en [0, 1] y no crecer.")
    return TabulatedShape(x=x, w=w)


def shape_function(shape: str, table: Optional[TabulatedShape] = None):
    """Devuelve w(x) vectorizada para la forma pedida."""
    if shape == "square":
        return lambda x: np.where(np.asarray(x) < 1.0, 1.0, 0.0)
    if shape == "gaussian":
        return lambda x: np.exp(-np.square(x))
    if shape == "exponential":
        return lambda x: np.exp(-np.asarray(x, dtype=float))
    if shape == "woods_saxon":
        return lambda x: 1.0 / (1.0 + np.exp(np.asarray(x, dtype=float) - 1.0))
    if shape == "tabulated":
        if table is None:
            raise PotentialError("shape: 'tabulated' requiere un archivo de tabla.")
        return table
    raise PotentialError(f"shape: '{shape}' no es una de {', '.join(SHAPES)}.")


@dataclass(frozen=True)
class PotentialSpec:
    """Potencial V(r) = sign * v * w(r/a); sign=-1 pozo, +1 barrera."""

    shape: str
    sign: int
    v: float
    a: float
    table: Optional[TabulatedShape] = None

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise PotentialError("sign: debe ser -1 (pozo) o +1 (barrera).")
        if not self.v >= 0:
            raise PotentialError(f"depth: el acoplamiento v={self.v} debe ser >= 0.")
        if not self.a > 0:
            raise PotentialError(f"range: a={self.a} debe ser positivo.")
        shape_function(self.shape, self.table)

    @property
    def kind(self) -> str:
        return "well" if self.sign < 0 else "barrier"

    def w(self, x):
        return shape_function(self.shape, self.table)(x)

    def value(self, r, coupling=None):
        """Energia potencial con signo U(r)."""
        v = self.v if coupling is None else coupling
        return self.sign * v * self.w(np.asarray(r, dtype=float) / self.a)

    def with_coupling(self, v: float) -> "PotentialSpec":
        return replace(self, v=float(v))

    def crossed(self) -> "PotentialSpec":
        """Misma forma con el signo invertido (V -> -V)."""
        return replace(self, sign=-self.sign)


def make_potential(
    shape: str,
    kind: str,
    v: float,
    a: float,
    table_path: Optional[Union[str, Path]] = None,
) -> PotentialSpec:
    """Construye el potencial desde nombres de la linea de comandos o la API."""
    if kind not in SIGNS:
        raise PotentialError(f"sign: '{kind}' no es 'well' ni 'barrier'.")
    table = load_tabulated_shape(table_path) if shape == "tabulated" and table_path else None
    return PotentialSpec(shape=shape, sign=SIGNS[kind], v=float(v), a=float(a), table=table)


__all__ = [
    "SHAPES",
    "SIGNS",
    "PotentialError",
    "PotentialSpec",
    "TabulatedShape",
    "load_tabulated_shape",
    "make_potential",
    "shape_function",
]
