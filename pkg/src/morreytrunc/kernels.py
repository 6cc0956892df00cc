"""Kernel dispatch and the worker pool.

The compiled extension is used when it imports; otherwise the numpy
versions in ``_kernels_py`` take over. ``use_backend`` switches explicitly
(benchmarks and the cross-backend tests use it).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_active = _BACKENDS.get("cython", _kernels_py)
_threads = os.cpu_count() or 1


def available_backends() -> list:
    return sorted(_BACKENDS)


def backend() -> str:
    return "cython" if _active is _compiled and _compiled is not None else "python"


def use_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}") from None


def set_threads(n: int | None) -> None:
    """Cap the worker count; ``None`` means all available cores."""
    global _threads
    if n is None:
        _threads = os.cpu_count() or 1
    elif int(n) < 1:
        raise ValueError(f"thread count must be >= 1, got {n}")
    else:
        _threads = int(n)


def get_threads() -> int:
    return _threads


def ordered_map(fn, items) -> list:
    """``list(map(fn, items))``, spread over the worker pool.

    Results come back in input order, so any reduction done afterwards is
    independent of the thread count.
    """
    items = list(items)
    if _threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(_threads, len(items))) as pool:
        return list(pool.map(fn, items))


def interval_sums(a, lo, delta, left, right):
    return _active.interval_sums(a, float(lo), float(delta), left, right)


def ball_accumulate(f, pos, offsets, coeffs, v, use_max):
    return _active.ball_accumulate(f, pos, offsets, coeffs, float(v), bool(use_max))
