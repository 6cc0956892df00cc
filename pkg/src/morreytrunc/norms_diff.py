"""Morrey norms and the difference characterisations of the
Besov-Morrey and Triebel-Lizorkin-Morrey norms.

Balls in the Morrey supremum are replaced by doubled dyadic cubes
``2Q_{j,m}``, levels taken from ``QuadratureSpec.sup_levels``.

The h-ball quadrature uses shifts that are integer multiples of the grid
spacing, so every point ``x + l*h`` with ``x`` a sample is either another
sample or outside the box. Differences inside the norm engines therefore
never interpolate. Pointwise inequalities between samples (such as
``| |a| - |b| | <= |a - b|``) then carry over to the computed norms exactly.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .core import (INFINITY, Box, DyadicCube, GridFunction, NormResult, ParameterError,
                   QuadratureSpec, SpaceParams, NumericalError, ball_volume, evaluate,
                   level_index_range)


def binomial_coefficients(N: int) -> np.ndarray:
    """Weights ``c_l`` with ``Delta_h^N f(x) = sum_l c_l f(x + l h)``."""
    return np.array([(-1) ** (N - l) * math.comb(N, l) for l in range(N + 1)], dtype=float)


def _level_sums(power: np.ndarray, box: Box, j: int) -> tuple:
    """Integrals of ``power`` over every doubled level-``j`` cube meeting the box."""
    side = math.ldexp(1.0, -j)
    acc = power
    firsts = []
    for axis in range(box.d):
        lo, hi = box.lower[axis], box.upper[axis]
        m0, m1 = level_index_range(lo, hi, j)
        firsts.append(m0)
        m = np.arange(m0, m1 + 1, dtype=float)
        left = (m - 0.5) * side
        right = (m + 1.5) * side
        delta = (hi - lo) / power.shape[axis]
        moved = np.moveaxis(acc, axis, 0)
        flat = np.ascontiguousarray(moved.reshape(moved.shape[0], -1))
        summed = kernels.interval_sums(flat, lo, delta, left, right)
        acc = np.moveaxis(summed.reshape((len(m),) + moved.shape[1:]), 0, axis)
    return acc, tuple(firsts)


def morrey_of_values(values: np.ndarray, box: Box, p: float, u: float,
                     levels) -> tuple:
    """Morrey supremum of sampled ``values``; returns ``(value, witness)``."""
    power = np.abs(values) ** p
    exponent = 1.0 / u - 1.0 / p
    best, witness = -1.0, None
    for j in levels:
        sums, firsts = _level_sums(power, box, j)
        prefactor = (2.0 * math.ldexp(1.0, -j)) ** (box.d * exponent)
        vals = prefactor * sums ** (1.0 / p)
        k = int(np.argmax(vals))
        if vals.flat[k] > best:
            best = float(vals.flat[k])
            idx = np.unravel_index(k, vals.shape)
            witness = DyadicCube(j, tuple(f + int(i) for f, i in zip(firsts, idx)))
    if not math.isfinite(best):
        raise NumericalError(f"Morrey norm is not finite ({best})")
    return best, witness


def lp_norm_on_cube(g: GridFunction, p: float, cube: DyadicCube, dilation: float = 1.0) -> float:
    """Midpoint value of ``(int_{cube & box} |g|^p)^(1/p)``.

    Cells cut by the cube faces contribute with their overlap volume.
    """
    if p < 1:
        raise ParameterError(f"p must be >= 1, got {p}")
    lower, upper = cube.dilated(dilation)
    acc = np.abs(g.values) ** p
    for axis in range(g.d):
        lo = g.box.lower[axis]
        moved = np.moveaxis(acc, axis, 0)
        flat = np.ascontiguousarray(moved.reshape(moved.shape[0], -1))
        summed = kernels.interval_sums(flat, lo, g.spacing[axis],
                                       np.array([lower[axis]]), np.array([upper[axis]]))
        acc = np.moveaxis(summed.reshape((1,) + moved.shape[1:]), 0, axis)
    return float(acc.sum()) ** (1.0 / p)


def morrey_norm(g: GridFunction, p: float, u: float, spec: QuadratureSpec) -> NormResult:
    """``max_{j, m} |2Q|^{1/u-1/p} ||g | L_p(2Q)||`` over ``spec.sup_levels``."""
    if not 1 <= p <= u < math.inf:
        raise ParameterError(f"need 1 <= p <= u < inf, got p={p}, u={u}")
    value, witness = morrey_of_values(g.values, g.box, p, u, spec.levels())
    return NormResult(value, value, 0.0, witness, spec)


def difference(g: GridFunction, h, N: int) -> GridFunction:
    """``Delta_h^N g`` on the grid of ``g``, via the zero-extended interpolant."""
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    h = np.broadcast_to(np.asarray(h, dtype=float), (g.d,))
    x = g.centers()
    out = np.zeros(g.n)
    # Delta^N = Delta^1(Delta^{N-1}) expands to the binomial sum below
    for l, c in enumerate(binomial_coefficients(N)):
        out = out + c * evaluate(g, x + l * h)
    return g.with_values(out)


def h_shifts(t: float, spacing, h_per_axis: int) -> np.ndarray:
    """Integer lattice shifts of the h-ball quadrature for radius ``t``.

    The node step on each axis is the grid spacing times
    ``max(1, round(2t / (h_per_axis * spacing)))``; nodes with ``|h| <= t``
    are kept. Returns an ``(H, d)`` integer array in units of grid cells.
    """
    spacing = np.asarray(spacing, dtype=float)
    mult = np.maximum(1, np.rint(2.0 * t / (h_per_axis * spacing))).astype(np.intp)
    step = mult * spacing
    reach = np.floor(t / step * (1 + 1e-12)).astype(np.intp)
    axes = [np.arange(-r, r + 1) for r in reach]
    k = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(spacing))
    inside = np.sum((k * step) ** 2, axis=1) <= t * t * (1 + 1e-12)
    return k[inside] * mult


def _validate(params: SpaceParams, v: float, N: int, g: GridFunction, tlm: bool):
    if g.d != params.d:
        raise ParameterError(f"grid is {g.d}-d but params.d = {params.d}")
    if not (v >= 1 or v == INFINITY):
        raise ParameterError(f"v must be >= 1 or inf, got {v}")
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N}")
    if not N > params.s:
        raise ParameterError(f"need N > s, got N={N}, s={params.s}")
    inv_v = 0.0 if v == INFINITY else 1.0 / v
    floor = max(0.0, 1.0 / params.p - inv_v)
    if tlm:
        inv_q = 0.0 if params.q == INFINITY else 1.0 / params.q
        floor = max(floor, inv_q - inv_v)
    if not params.s > params.d * floor:
        raise ParameterError(
            f"difference characterisation needs s > {params.d * floor:g}, got s={params.s}")


def default_N(s: float) -> int:
    return int(math.floor(s)) + 1


class _DifferenceField:
    """Per-t-node local averages ``(t^-d int_{B(0,t)} |Delta_h^N g|^v dh)^(1/v)``."""

    def __init__(self, g: GridFunction, N: int, v: float, spec: QuadratureSpec):
        self.g, self.N, self.v, self.spec = g, N, v, spec
        self.t, self.w = spec.t_nodes()
        self.shifts = [h_shifts(t, g.spacing, spec.h_per_axis) for t in self.t]
        reach = np.max(np.abs(np.concatenate(self.shifts)), axis=0)
        pad = N * reach
        padded = np.pad(g.values, [(int(r), int(r)) for r in pad])
        self.flat = np.ascontiguousarray(padded.ravel())
        strides = np.array(padded.strides) // padded.itemsize
        interior = np.ix_(*[np.arange(r, r + k) for r, k in zip(pad, g.n)])
        grid_index = np.arange(padded.size, dtype=np.intp).reshape(padded.shape)
        self.pos = np.ascontiguousarray(grid_index[interior].ravel())
        self.strides = strides.astype(np.intp)
        self.coeffs = binomial_coefficients(N)

    def local(self, k: int) -> np.ndarray:
        shifts = self.shifts[k]
        offsets = np.ascontiguousarray(shifts @ self.strides, dtype=np.intp)
        use_max = self.v == INFINITY
        acc = kernels.ball_accumulate(self.flat, self.pos, offsets, self.coeffs,
                                      1.0 if use_max else self.v, use_max)
        if use_max:
            return acc.reshape(self.g.n)
        d = self.g.d
        # t^-d |B(0,t)| * mean over nodes
        mean = acc * (ball_volume(d, 1.0) / len(shifts))
        return (mean ** (1.0 / self.v)).reshape(self.g.n)

    def all_local(self) -> list:
        return kernels.ordered_map(self.local, range(len(self.t)))


def _combine(terms, weights, q: float):
    """``(sum w_k a_k^q)^(1/q)`` or ``max a_k`` for q = inf, in fixed order."""
    if q == INFINITY:
        out = terms[0]
        for a in terms[1:]:
            out = np.maximum(out, a)
        return out
    out = weights[0] * terms[0] ** q
    for a, w in zip(terms[1:], weights[1:]):
        out = out + w * a ** q
    return out ** (1.0 / q)


def besov_morrey_norm(g: GridFunction, params: SpaceParams, v: float = 1.0,
                      N: int | None = None, spec: QuadratureSpec | None = None) -> NormResult:
    """Difference norm of ``g`` in the Besov-Morrey space: Morrey part plus
    the ``l_q``-in-``t`` sum of Morrey norms of the h-ball averages."""
    N = default_N(params.s) if N is None else N
    spec = QuadratureSpec.for_grid(g) if spec is None else spec
    _validate(params, v, N, g, tlm=False)
    base = morrey_norm(g, params.p, params.u, spec)
    field = _DifferenceField(g, N, v, spec)
    levels = spec.levels()

    def per_node(k):
        return morrey_of_values(field.local(k), g.box, params.p, params.u, levels)[0]

    morreys = kernels.ordered_map(per_node, range(len(field.t)))
    terms = [t ** (-params.s) * m for t, m in zip(field.t, morreys)]
    diff = float(_combine(terms, field.w, params.q))
    return NormResult(base.total + diff, base.total, diff, base.witness, spec)


def tlm_norm(g: GridFunction, params: SpaceParams, v: float = 1.0,
             N: int | None = None, spec: QuadratureSpec | None = None) -> NormResult:
    """Difference norm of ``g`` in the Triebel-Lizorkin-Morrey space, with
    the t-integral taken pointwise inside the Morrey norm."""
    N = default_N(params.s) if N is None else N
    spec = QuadratureSpec.for_grid(g) if spec is None else spec
    _validate(params, v, N, g, tlm=True)
    base = morrey_norm(g, params.p, params.u, spec)
    field = _DifferenceField(g, N, v, spec)
    locals_ = field.all_local()
    terms = [t ** (-params.s) * a for t, a in zip(field.t, locals_)]
    inner = _combine(terms, field.w, params.q)
    diff, _ = morrey_of_values(inner, g.box, params.p, params.u, spec.levels())
    return NormResult(base.total + diff, base.total, diff, base.witness, spec)


def norm(space: str, g: GridFunction, params: SpaceParams, v: float = 1.0,
         N: int | None = None, spec: QuadratureSpec | None = None) -> NormResult:
    """Dispatch on ``space`` in ``{"besov", "tlm"}``."""
    if space in ("besov", "bm", "N"):
        return besov_morrey_norm(g, params, v, N, spec)
    if space in ("tlm", "E"):
        return tlm_norm(g, params, v, N, spec)
    raise ParameterError(f"unknown space {space!r}")
