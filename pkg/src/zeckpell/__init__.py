"""Pell x-coordinates with Zeckendorf representations of at most two terms."""

__version__ = "0.1.0"
