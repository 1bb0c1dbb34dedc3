"""Command line interface for tinyturbo."""

from .main import main

__all__ = ["main"]
