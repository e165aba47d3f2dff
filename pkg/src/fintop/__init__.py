"""Finite topological approximation of compact metric spaces."""

__version__ = "0.1.0"
