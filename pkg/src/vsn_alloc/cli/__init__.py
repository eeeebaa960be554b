"""Command-line entry point (``vsn-alloc``)."""

from .main import app

__all__ = ["app"]
