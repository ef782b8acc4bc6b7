"""Command-line front end: ``tileasm <command> ...``."""

from .main import main

__all__ = ["main"]
