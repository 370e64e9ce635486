"""Exact Brauer-algebra induction and SO(n) coupling coefficients."""

__version__ = "0.1.0"
