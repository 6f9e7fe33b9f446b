"""Finite, exactly checkable models of symmetric sequences, operads, functor sequences,
the sphere operad and connectivity arithmetic."""

from . import combinat, conncalc, polyfun, sphere, symseq

__version__ = "0.1.0"

__all__ = ["combinat", "conncalc", "polyfun", "sphere", "symseq", "__version__"]
