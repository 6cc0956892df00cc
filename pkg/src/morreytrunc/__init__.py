"""Discretised Morrey-type smoothness norms and the truncation operators
``max(f, 0)`` and ``|f|``."""

__version__ = "0.1.0"
