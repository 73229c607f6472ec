"""Laboratorio numerico de dispersion Dirac/Schrodinger."""

__version__ = "0.1.0"
