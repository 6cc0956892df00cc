"""The truncation operators ``max(f, 0)`` and ``|f|``, acting on samples."""

import numpy as np

from .core import GridFunction, ParameterError


def truncate_plus(g: GridFunction) -> GridFunction:
    return g.with_values(np.maximum(g.values, 0.0))


def truncate_abs(g: GridFunction) -> GridFunction:
    return g.with_values(np.abs(g.values))


OPERATORS = {"T+": truncate_plus, "T": truncate_abs}


def operator(name: str):
    """Look up ``"T"`` (absolute value) or ``"T+"`` (positive part)."""
    try:
        return OPERATORS[name]
    except KeyError:
        raise ParameterError(f"unknown operator {name!r}; expected one of {sorted(OPERATORS)}") from None
