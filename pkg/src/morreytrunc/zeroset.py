"""Dyadic covers of zero sets and the covering-count scaling law."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Box, DyadicCube, GridFunction, ParameterError, cubes_at_level, evaluate, sample

NO_ZEROS = "NO_ZEROS"


def _cell_index_range(lo: float, hi: float, r: int) -> tuple:
    scale = math.ldexp(1.0, r)
    return math.ceil(lo * scale), math.floor(hi * scale) - 1


def sign_change_cells(g: GridFunction, base: DyadicCube, r: int, tol: float = 0.25) -> list:
    """Level-``r`` cubes inside ``2 * base`` (and inside the grid box) that
    may meet the zero set of ``g``.

    A cube is kept when its corner and centre values change sign, or when
    one of them satisfies ``|f| <= tol * |grad f| * 2**-r`` with the
    gradient estimated from the corner values. Lexicographic order in ``m``.
    """
    if r < base.j:
        raise ParameterError(f"r={r} is coarser than the base level {base.j}")
    outer_lo, outer_hi = base.dilated(2.0)
    ranges = []
    for a in range(g.d):
        lo = max(outer_lo[a], g.box.lower[a])
        hi = min(outer_hi[a], g.box.upper[a])
        i0, i1 = _cell_index_range(lo, hi, r)
        if i1 < i0:
            return []
        ranges.append((i0, i1))
    side = math.ldexp(1.0, -r)
    corner_axes = [np.arange(i0, i1 + 2) * side for i0, i1 in ranges]
    centre_axes = [(np.arange(i0, i1 + 1) + 0.5) * side for i0, i1 in ranges]
    corners = evaluate(g, np.stack(np.meshgrid(*corner_axes, indexing="ij"), axis=-1))
    centres = evaluate(g, np.stack(np.meshgrid(*centre_axes, indexing="ij"), axis=-1))
    corners = np.asarray(corners).reshape([len(a) for a in corner_axes])
    centres = np.asarray(centres).reshape([len(a) for a in centre_axes])

    shape = centres.shape
    lo_v = centres.copy()
    hi_v = centres.copy()
    small = np.abs(centres)
    views = {}
    for off in np.ndindex(*(2,) * g.d):
        view = corners[tuple(slice(o, o + n) for o, n in zip(off, shape))]
        views[off] = view
        lo_v = np.minimum(lo_v, view)
        hi_v = np.maximum(hi_v, view)
        small = np.minimum(small, np.abs(view))
    grad2 = np.zeros(shape)
    for a in range(g.d):
        plus = sum(v for off, v in views.items() if off[a] == 1)
        minus = sum(v for off, v in views.items() if off[a] == 0)
        grad2 += ((plus - minus) / (2 ** (g.d - 1) * side)) ** 2
    flagged = (lo_v < 0) & (hi_v > 0)
    flagged |= small <= tol * np.sqrt(grad2) * side
    offsets = [i0 for i0, _ in ranges]
    return [DyadicCube(r, tuple(int(o + i) for o, i in zip(offsets, idx)))
            for idx in np.argwhere(flagged)]


@dataclass
class CoverScaling:
    status: str
    exponent: float
    prefactor: float
    levels: list = field(default_factory=list)
    counts: list = field(default_factory=list)
    ratios: list = field(default_factory=list)
    residual: float = math.nan

    def rows(self) -> list:
        return list(zip(self.levels, self.counts, self.ratios))


def lattice_grid(callback, box, r: int) -> GridFunction:
    """Samples whose centres are exactly the level-``r + 1`` lattice points
    in ``box``, so corners and centres of level-``r`` cubes are nodes."""
    box = Box.of(box)
    half = math.ldexp(1.0, -(r + 2))
    lo = [math.floor(a * 2 ** (r + 1)) / 2 ** (r + 1) for a in box.lower]
    hi = [math.ceil(b * 2 ** (r + 1)) / 2 ** (r + 1) for b in box.upper]
    n = [int(round((b - a) * 2 ** (r + 1))) + 1 for a, b in zip(lo, hi)]
    grid_box = Box(tuple(a - half for a in lo), tuple(b + half for b in hi))
    return sample(callback, grid_box, n)


def covering_cells(callback, box, k: int, r: int, tol: float = 0.25) -> set:
    """Distinct flagged level-``r`` cubes inside ``box``, collected over the
    level-``k`` base cubes whose doublings meet ``box``."""
    box = Box.of(box)
    g = lattice_grid(callback, box, r)
    cells = set()
    side = math.ldexp(1.0, -r)
    lo, hi = np.array(box.lower), np.array(box.upper)
    for base in cubes_at_level(box, k):
        for c in sign_change_cells(g, base, r, tol):
            low = np.array(c.m) * side
            if np.all(low >= lo) and np.all(low + side <= hi):
                cells.add(c)
    return cells


def cover_scaling(callback, box, k: int, r_range, tol: float = 0.25) -> CoverScaling:
    """Count covering cubes for each ``r`` and fit ``log2 count`` against ``r``.

    ``ratios`` are ``count / 2**((d-1)(r-k))``; ``prefactor`` is their
    geometric mean.
    """
    box = Box.of(box)
    levels = list(r_range)
    if len(levels) < 4:
        raise ParameterError("r_range must span at least 4 levels")
    if min(levels) <= k:
        raise ParameterError(f"all levels must exceed k={k}")
    d = box.d
    counts = [len(covering_cells(callback, box, k, r, tol)) for r in levels]
    if min(counts) == 0:
        return CoverScaling(NO_ZEROS, math.nan, math.nan, levels, counts,
                            [math.nan] * len(levels))
    ratios = [c / 2.0 ** ((d - 1) * (r - k)) for c, r in zip(counts, levels)]
    A = np.vstack([levels, np.ones(len(levels))]).T
    y = np.log2(counts)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    residual = float(np.max(np.abs(A @ coef - y)))
    prefactor = float(np.exp(np.mean(np.log(ratios))))
    return CoverScaling("OK", float(coef[0]), prefactor, levels, counts, ratios, residual)
