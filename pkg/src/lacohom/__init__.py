"""Exact jets, forms, Lie algebra cohomology and group-cochain comparison maps."""

__version__ = "0.1.0"
