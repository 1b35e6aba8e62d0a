"""Exact invariants of Brieskorn spheres and an equivariant G-signature engine."""

__version__ = "0.1.0"
