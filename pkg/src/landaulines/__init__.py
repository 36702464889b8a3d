"""Landau analysis of planar Feynman diagrams as line incidence problems in P^3."""

__version__ = "0.1.0"
