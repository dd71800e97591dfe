"""Exact computations for finite-dimensional representations of PSL2(Z)
whose commutator images are diagonalizable."""

__version__ = "0.1.0"
