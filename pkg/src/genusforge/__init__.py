"""Exact surface-genus toolkit: rotation systems with signatures, 2-sum genus
calculus, criticality classes and the connectivity-2 Euler-genus-2 catalog."""

__version__ = "0.1.0"
