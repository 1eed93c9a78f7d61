# src/arbor/__init__.py

"""Exact tree-combinatorial composition and inversion of truncated formal power series."""

__version__ = "0.1.0"
