"""Algebraic analysis of closed 6R linkages with dual quaternions."""

__version__ = "0.1.0"
