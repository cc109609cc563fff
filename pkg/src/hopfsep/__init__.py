"""Exact verification toolkit for coseparability of Clifford algebras over E(n)."""

__version__ = "0.1.0"
