"""Finite workbench for matrix-algebra diagonals, signed-permutation groups,
biorthogonal lifts, and certified operator-norm bounds."""

from amenbench._core import *  # noqa: F401,F403
from amenbench._core import __all__ as _core_all

__all__ = list(_core_all)
