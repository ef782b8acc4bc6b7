"""Probabilistic temperature-1 tile self-assembly toolkit."""

__version__ = "0.1.0"
