"""Exact obstructions to finite concordance order for knots."""

__version__ = "0.1.0"
