"""Finite-order recurrences for compound loss distributions via D-finite closure."""

__version__ = "0.1.0"
