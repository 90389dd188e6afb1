"""Exact computer algebra for Poisson vertex algebra operads and Poisson cohomology."""

__version__ = "0.1.0"
