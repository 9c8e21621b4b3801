"""Main entry point to the CLI."""

from qfilter.cli import app

__all__ = ["app"]
