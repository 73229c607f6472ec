"""Funciones de Bessel esfericas y sus limites para argumentos pequenos.

Todas las funciones aceptan escalares o arreglos de numpy y delegan la
evaluacion en `scipy.special`; aqui solo se fijan dominios y normalizaciones.
"""

import numpy as np
from scipy.special import factorial2, spherical_in, spherical_jn, spherical_kn, spherical_yn

from scatterlab.core.errors import ConfigurationError


class SpecialFunctionDomainError(ConfigurationError):
    """Orden o argumento fuera del dominio de la funcion pedida."""


def _check_order(n: int) -> int:
    if int(n) != n or n < 0:
        raise SpecialFunctionDomainError(f"orden n={n}: debe ser un entero >= 0.")
    return int(n)


def _check_positive(x, name: str):
    values = np.asarray(x, dtype=float)
    if np.any(values <= 0) or np.any(~np.isfinite(values)):
        raise SpecialFunctionDomainError(f"{name}: requiere x > 0 finito.")
    return x


def _scalar_or_array(value):
    if np.ndim(value) == 0:
        return float(value)
    return value


def sph_j(n: int, x, derivative: bool = False):
    """Funcion esferica regular j_n(x); total en x (j_0(0)=1)."""
    n = _check_order(n)
    return _scalar_or_array(spherical_jn(n, x, derivative=derivative))


def sph_n(n: int, x, derivative: bool = False):
    """Funcion esferica irregular n_n(x) (convencion -cos(x)/x para n=0)."""
    n = _check_order(n)
    _check_positive(x, "sph_n")
    return _scalar_or_array(spherical_yn(n, x, derivative=derivative))


def sph_i(n: int, x, derivative: bool = False):
    """Funcion esferica modificada i_n(x); continua j_n a argumento imaginario."""
    n = _check_order(n)
    return _scalar_or_array(spherical_in(n, x, derivative=derivative))


def mod_sph_k(n: int, x):
    """sqrt(2x/pi) K_{n+1/2}(x); vale e^{-x} para n=0."""
    n = _check_order(n)
    _check_positive(x, "mod_sph_k")
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(2.0 * x / np.pi * spherical_kn(n, x))


def mod_sph_i(n: int, x):
    """sqrt(2x/pi) I_{n+1/2}(x); crece como e^{x}."""
    n = _check_order(n)
    _check_positive(x, "mod_sph_i")
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(2.0 * x / np.pi * spherical_in(n, x))


def double_factorial(n: int) -> int:
    """Doble factorial con la convencion (-1)!! = 1."""
    if int(n) != n or n < -1:
        raise SpecialFunctionDomainError(f"double_factorial: n={n} debe ser >= -1.")
    if n <= 0:
        return 1
    return int(factorial2(int(n), exact=True))


__all__ = [
    "SpecialFunctionDomainError",
    "double_factorial",
    "mod_sph_i",
    "mod_sph_k",
    "sph_i",
    "sph_j",
    "sph_n",
]
