"""Numerical toolkit for a coherent-state model of critical-line zeta zeros."""

__version__ = "0.1.0"
