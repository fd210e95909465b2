"""Exact Groebner bases for coloured shuffle operads."""

__version__ = "0.1.0"
