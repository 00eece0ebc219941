"""Numerical laboratory for bound-states and stability of the 1D complex
Ginzburg-Landau equation."""

__version__ = "0.1.0"
