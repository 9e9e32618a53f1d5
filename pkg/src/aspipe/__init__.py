"""Algorithm-selection pipeline with an easy-instance filter and budget re-allocation."""

__version__ = "0.1.0"
