"""Exact decision procedures for ideal super-isolated abelian varieties."""

__version__ = "0.1.0"
