"""Finite categories, functors and fibrations as executable tables."""

__version__ = "0.1.0"
