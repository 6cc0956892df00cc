"""Numerical probes of the boundedness border, the necessity constructions,
the missing Fubini property and the Morrey Hardy inequality.

Unboundedness is reported as a positive least-squares slope of a log
quantity across dyadic scales, never as an infinite value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import (INFINITY, Box, GridFunction, ParameterError, QuadratureSpec, SpaceParams,
                   cutoff, sample)
from .norms_diff import morrey_of_values, norm
from .testbank import fubini_function, necessity_function, sawtooth_series
from .truncation import operator

DIVERGENT_INTEGRAL = "DIVERGENT_INTEGRAL"


@dataclass
class LineFit:
    slope: float
    intercept: float
    residual: float  # max |fit - data| over the fitted range of the data

    @classmethod
    def of(cls, x, y) -> "LineFit":
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        A = np.vstack([x, np.ones_like(x)]).T
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        spread = float(np.ptp(y)) or 1.0
        return cls(float(coef[0]), float(coef[1]), float(np.max(np.abs(A @ coef - y))) / spread)


def critical_border(params: SpaceParams) -> float:
    """Smoothness threshold ``min(1 + 1/p, 1 + d/u)``."""
    return min(1.0 + 1.0 / params.p, 1.0 + params.d / params.u)


# ---------------------------------------------------------------- sweeps

@dataclass
class SweepRow:
    function: int
    refinement: int
    n: int
    norm_f: float
    norm_tf: float
    ratio: float
    flagged: bool


@dataclass
class SweepTable:
    rows: list
    max_ratio: list  # per refinement
    stable: bool


def truncation_ratio_sweep(family, params: SpaceParams, which: str = "T", N: int | None = None,
                           v: float = 1.0, spec: QuadratureSpec | None = None,
                           refinements: int = 2, *, box=None, n0: int = 64,
                           space: str = "tlm") -> SweepTable:
    """Ratios ``norm(T* f) / norm(f)`` for each function and refinement.

    Refinement ``i`` samples with ``n0 * 2**i`` cells per axis. ``stable``
    is true when the largest ratio grows by at most 5% from the coarsest
    to any finer level. Rows with ``norm(f) = 0`` are flagged and carry NaN.
    """
    family = list(family)
    if not family:
        raise ParameterError("family must be nonempty")
    op = operator(which)
    box = Box.of(box if box is not None else [(0.0, 1.0)] * params.d)
    rows = []
    for i in range(refinements):
        n = n0 * 2 ** i
        for idx, f in enumerate(family):
            g = sample(f, box, n)
            sp = spec if spec is not None else QuadratureSpec.for_grid(g)
            nf = norm(space, g, params, v, N, sp).total
            nt = norm(space, op(g), params, v, N, sp).total
            if nf == 0:
                rows.append(SweepRow(idx, i, n, nf, nt, math.nan, True))
            else:
                rows.append(SweepRow(idx, i, n, nf, nt, nt / nf, False))
    max_ratio = []
    for i in range(refinements):
        r = [row.ratio for row in rows if row.refinement == i and not row.flagged]
        max_ratio.append(max(r) if r else math.nan)
    stable = all(m <= 1.05 * max_ratio[0] for m in max_ratio[1:])
    return SweepTable(rows, max_ratio, stable)


# ---------------------------------------------------------------- necessity

@dataclass
class DivergenceProbe:
    status: str
    slope: float
    predicted: float
    residual: float
    levels: list = field(default_factory=list)
    log2_values: list = field(default_factory=list)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _graded_integral(fn, length: float, panels: int = 240) -> float:
    """``int_0^length fn`` on geometrically graded panels toward 0."""
    hi = length
    total = 0.0
    for _ in range(panels):
        lo = 0.5 * hi
        x = 0.5 * (hi - lo) * _GL_X + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * float(np.dot(_GL_W, fn(x)))
        hi = lo
    return total


def divergence_probe(params: SpaceParams, j_range, cells: int = 4) -> DivergenceProbe:
    """Lower bounds ``A_j`` on the cube ``2^-j [0,1]^d`` for the necessity function.

    ``A_j = |P|^{1/u-1/p} (int_P |T* f(x)|^p x_1^{-sp} dx)^{1/p}`` where on
    ``P`` the truncated function equals ``x_1``; the weight ``x_1^{-s}``
    is what the inner t-integral leaves after the ``N``-th difference. The
    slope of ``log2 A_j`` against ``j`` is returned: positive means
    ``sup_j A_j`` is infinite.
    """
    levels = list(j_range)
    if len(levels) < 3:
        raise ParameterError("j_range must contain at least 3 levels")
    p, u, s, d = params.p, params.u, params.s, params.d
    predicted = s - 1.0 - d / u
    if not s < 1.0 + 1.0 / p:
        return DivergenceProbe(DIVERGENT_INTEGRAL, math.inf, predicted, math.nan, levels, [])
    f = necessity_function(d, s)
    logs = []
    for j in levels:
        side = 2.0 ** -j
        # midpoint in x' (integrand is constant there), graded Gauss in x_1
        xp = (np.arange(cells) + 0.5) * side / cells

        def integrand(x1, xp=xp):
            pts = np.zeros((len(x1) * len(xp) ** (d - 1), d))
            mesh = np.meshgrid(x1, *([xp] * (d - 1)), indexing="ij")
            for a in range(d):
                pts[:, a] = mesh[a].ravel()
            vals = np.abs(f(pts)) ** p * pts[:, 0] ** (-s * p)
            per_x1 = vals.reshape(len(x1), -1).sum(axis=1)
            return per_x1 * (side / cells) ** (d - 1)

        mass = _graded_integral(integrand, side)
        logs.append(math.log2(side ** (d * (1 / u - 1 / p)) * mass ** (1 / p)))
    fit = LineFit.of(levels, logs)
    return DivergenceProbe("OK", fit.slope, predicted, fit.residual, levels, logs)


@dataclass
class SawtoothFit:
    J: int
    c1: float
    c2: float
    residual: float
    t: list
    values: list


def sawtooth_quantity(J: int, t: float) -> float:
    """``t^-2 int_0^t |g_J(x)| dx`` for the sawtooth partial sum ``g_J``."""
    g = sawtooth_series(J)
    return _graded_integral(lambda x: np.abs(g(x)), t, panels=80) / (t * t)


def sawtooth_probe(p: float, u: float, J_range, t_range=None) -> list:
    """Fit ``c1 ln(1/t) + c2`` to the sawtooth quantity for each ``J``.

    ``t_range`` is ``(t_lo, t_hi)``; by default ``t = 2^-i`` for
    ``i = 0..J``, the scales carried by the ``J + 1`` terms. ``p`` and
    ``u`` only enter through the Hoelder step that reduces the Morrey
    lower bound to this quantity, so they are validated but unused.
    """
    if not 1 <= p <= u < math.inf:
        raise ParameterError(f"need 1 <= p <= u < inf, got p={p}, u={u}")
    fits = []
    for J in (J_range if np.iterable(J_range) else [J_range]):
        if t_range is None:
            ts = 2.0 ** -np.arange(0, J + 1)
        else:
            lo, hi = t_range
            ts = np.geomspace(hi, lo, max(4, int(round(math.log2(hi / lo))) + 1))
        vals = kernels.ordered_map(lambda t, J=J: sawtooth_quantity(J, t), ts)
        fit = LineFit.of(np.log(1.0 / ts), vals)
        fits.append(SawtoothFit(int(J), fit.slope, fit.intercept, fit.residual,
                                list(map(float, ts)), list(map(float, vals))))
    return fits


# ---------------------------------------------------------------- Fubini

@dataclass
class FubiniReport:
    t: list
    fubini_values: list
    fubini_slope: float
    fubini_residual: float
    box_scales: list
    direct_norms: list
    direct_change: float  # max relative change between consecutive scales


def fubini_quantity(g, d: int, p: float, u: float, t: float, per_unit: int = 32) -> float:
    """Iterated lower bound: 1-d Morrey bound on ``[0, t]`` in ``x_1``, then
    the ``(d-1)``-d Morrey norm in ``x'`` over ``[0, 1]^(d-1)``."""
    n1 = max(2, int(round(t * per_unit)))
    box = [(0.0, t)] + [(0.0, 1.0)] * (d - 1)
    G = sample(g, box, [n1] + [per_unit] * (d - 1))
    inner = (np.sum(np.abs(G.values) ** p, axis=0) * G.spacing[0]) ** (1 / p)
    inner = t ** (1 / u - 1 / p) * inner
    outer_box = Box((0.0,) * (d - 1), (1.0,) * (d - 1))
    levels = range(-1, int(math.log2(per_unit)))
    value, _ = morrey_of_values(inner, outer_box, p, u, levels)
    return value


def fubini_comparison(d: int, p: float, u: float, s: float, q: float, t_range=(1.0, 64.0),
                      box_scales=(16.0, 32.0), per_unit: int = 16, spec_kw=None) -> FubiniReport:
    """Growth of the iterated quantity versus stability of the direct norm.

    The direct norm is the TL-Morrey difference norm with ``v = 1``,
    ``a = 1``. Since ``g`` is constant in ``x_1``, it is tapered smoothly to
    zero on ``L/2 < |x_1| < L`` for box half-length ``L`` before sampling.
    """
    if d < 2:
        raise ParameterError("Fubini comparison needs d >= 2")
    if not p < u:
        raise ParameterError(f"need p < u, got p={p}, u={u}")
    if p > (d - 1) * u / d:
        raise ParameterError(f"need p <= (d-1)u/d = {(d - 1) * u / d:g}, got p={p}")
    g = fubini_function(d, p)
    lo, hi = t_range
    ts = 2.0 ** np.arange(math.log2(lo), math.log2(hi) + 0.5)
    fvals = [fubini_quantity(g, d, p, u, float(t)) for t in ts]
    fit = LineFit.of(np.log(ts), np.log(fvals))

    params = SpaceParams(s, p, u, q, d)
    N = int(math.floor(s)) + 1
    margin = N * 1.0 + 0.25
    norms = []
    for L in box_scales:
        def tapered(x, L=L):
            x = np.atleast_2d(x)
            return g(x) * cutoff(np.abs(x[:, 0]), 0.5 * L, L)

        box = [(-L, L)] + [(-margin, 1.0 + margin)] * (d - 1)
        n = [int(round(2 * L * per_unit))] + [int(round((1 + 2 * margin) * per_unit))] * (d - 1)
        G = sample(tapered, box, n)
        spec = QuadratureSpec.for_grid(G, t_max=1.0, **(spec_kw or {}))
        norms.append(norm("tlm", G, params, 1.0, N, spec).total)
    changes = [abs(b - a) / a for a, b in zip(norms, norms[1:])]
    return FubiniReport(list(map(float, ts)), fvals, fit.slope, fit.residual,
                        list(box_scales), norms, max(changes) if changes else 0.0)


# ---------------------------------------------------------------- Hardy

@dataclass
class HardyResult:
    ratios: list
    lhs: list
    rhs: list
    max_ratio: float


def _window_sums(f: np.ndarray, delta: float, radii: np.ndarray) -> np.ndarray:
    """``U[k, i] = int_{|y - x_i| < r_k} |f(x_i) - f(y)| dy`` over the grid cells.

    Cells cut by the window edge contribute their covered fraction.
    """
    n = len(f)
    idx = np.arange(n)
    # E[i, m]: summed |f_i - f_{i+-m}| at cell offset m (zero off the grid)
    E = np.zeros((n, n + 1))
    for m in range(1, n):
        right, left = idx + m, idx - m
        ok_r, ok_l = right < n, left >= 0
        E[ok_r, m] += np.abs(f[ok_r] - f[right[ok_r]])
        E[ok_l, m] += np.abs(f[ok_l] - f[left[ok_l]])
    C = np.cumsum(E, axis=1)
    out = np.zeros((len(radii), n))
    for k, r in enumerate(radii):
        reach = r / delta - 0.5
        full = math.floor(reach)
        if full < 0:
            continue
        val = C[:, min(full, n)]
        if full + 1 <= n:
            val = val + (reach - full) * E[:, full + 1]
        out[k] = val * delta
    return out


def hardy_sides(f: GridFunction, p: float, u: float, q: float, s: float, interval,
                levels, r_per_octave: int = 4, r_max_factor: float = 64.0) -> tuple:
    """Both sides of the Morrey Hardy inequality for samples ``f`` on ``interval``.

    ``interval = (a, b)`` with ``b = inf`` for a half line; ``f`` then lives
    on a truncated box ``(a, L)`` and vanishes beyond ``L``.
    """
    a, b = interval
    x = f.axis_centers(0)
    delta = float(f.spacing[0])
    vals = f.values
    dist = x - a if b == INFINITY else np.minimum(x - a, b - x)
    lhs_vals = np.abs(vals) * dist ** (-s)
    lhs, _ = morrey_of_values(lhs_vals, f.box, p, u, levels)

    length = f.box.sides[0]
    r_lo, r_hi = delta / 4.0, r_max_factor * length
    count = int(math.ceil(math.log2(r_hi / r_lo) * r_per_octave))
    edges = np.geomspace(r_lo, r_hi, count + 1)
    radii = np.sqrt(edges[:-1] * edges[1:])
    weights = np.log(edges[1:] / edges[:-1])
    U = _window_sums(vals, delta, radii)
    if b == INFINITY:
        # f = 0 beyond the truncation point
        U = U + np.abs(vals)[None, :] * np.maximum(0.0, x[None, :] + radii[:, None] - f.box.upper[0])
    U = U / radii[:, None]
    scaled = radii[:, None] ** (-s) * U
    if q == INFINITY:
        G = scaled.max(axis=0)
    else:
        G = (weights[:, None] * scaled ** q).sum(axis=0) ** (1 / q)
    rhs, _ = morrey_of_values(G, f.box, p, u, levels)
    return lhs, rhs


def hardy_check(family, p: float, u: float, q: float, s: float,
                spec: QuadratureSpec | None = None, *, n: int = 512,
                interval=(0.0, 1.0), truncate_at: float = 4.0) -> HardyResult:
    """Largest ``LHS / RHS`` over the family for the Morrey Hardy inequality (d = 1)."""
    if not 0 < s < 1.0 / u:
        raise ParameterError(f"need 0 < s < 1/u = {1 / u:g}, got s={s}")
    if not 1 <= p <= u < math.inf:
        raise ParameterError(f"need 1 <= p <= u < inf, got p={p}, u={u}")
    a, b = interval
    box = [(a, truncate_at if b == INFINITY else b)]
    ratios, lhs_all, rhs_all = [], [], []
    for f in family:
        g = sample(f, box, n)
        if b != INFINITY:
            mean = float(np.sum(g.values) * g.spacing[0])
            scale = max(1.0, float(np.sum(np.abs(g.values)) * g.spacing[0]))
            if abs(mean) > 1e-8 * scale:
                raise ParameterError(f"function is not mean-zero on the interval (mean {mean:.3e})")
        sp = spec if spec is not None else QuadratureSpec.for_grid(g)
        lhs, rhs = hardy_sides(g, p, u, q, s, interval, sp.levels())
        lhs_all.append(lhs)
        rhs_all.append(rhs)
        ratios.append(lhs / rhs if rhs > 0 else math.nan)
    finite = [r for r in ratios if not math.isnan(r)]
    return HardyResult(ratios, lhs_all, rhs_all, max(finite) if finite else math.nan)
