"""Exact computations with curves over small finite fields."""

__version__ = "0.1.0"
