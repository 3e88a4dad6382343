"""Codes for the adversarial wiretap channel."""

__version__ = "0.1.0"

__all__ = ["__version__"]
