"""Strictly sparse 4-cycle systems and packings."""

__version__ = "0.1.0"
