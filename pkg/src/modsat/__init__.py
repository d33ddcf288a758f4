"""Exact combinatorics of mod-ell functoriality: root data, Tate cohomology,
Brauer homomorphisms on Satake rings, and fixed-point counts."""

__version__ = "0.1.0"
