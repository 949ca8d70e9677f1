"""Algebraic OTOCs, Gaussian scrambling rates and minimal-scrambling partitions."""

__version__ = "0.1.0"
