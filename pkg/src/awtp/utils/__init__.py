from .console import configure_logging, console

__all__ = ["configure_logging", "console"]
