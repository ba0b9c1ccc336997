"""Select diverse, high-quality example solutions from a task's submission corpus."""

__version__ = "0.1.0"
