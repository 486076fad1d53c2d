"""Exact and numerical computations on the quantum group SU_q(2) and the Podles sphere."""

__version__ = "0.1.0"
