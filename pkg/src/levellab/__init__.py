"""Exact-arithmetic toolkit for level structures on elliptic curves."""

__version__ = "0.1.0"
