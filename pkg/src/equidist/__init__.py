"""Zeros of integer polynomials in the closed unit disk.

Exact integer polynomial arithmetic, certified root finding, the zero
counting measure, circle norms, Lipschitz test functions, logarithmic
energies and the equidistribution bounds that tie them together.
"""
from .intpoly import IntPolynomial, discriminant, parse_poly, power_sums, resultant
from .roots import RootSet, find_roots

__all__ = ["IntPolynomial", "RootSet", "discriminant", "find_roots", "parse_poly", "power_sums", "resultant"]
__version__ = "0.1.0"
