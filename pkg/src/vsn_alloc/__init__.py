"""Resource allocation for virtualized wireless sensor networks."""

__version__ = "0.1.0"
