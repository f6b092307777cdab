"""Birational maps of the plane, their Picard actions and Salem numbers."""

__version__ = "0.1.0"
