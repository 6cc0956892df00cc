"""Domain types, grid sampling and evaluation, dyadic-cube geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

INFINITY = math.inf

Callback = Callable[[np.ndarray], np.ndarray]


class ParameterError(ValueError):
    """Raised when parameters violate a documented precondition."""


class NumericalError(ArithmeticError):
    """Raised when a computation produced NaN or overflowed."""


def _read_only(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpaceParams:
    """Parameters ``(s, p, u, q, d)`` of a Besov-Morrey or TL-Morrey space."""

    s: float
    p: float
    u: float
    q: float
    d: int

    def __post_init__(self):
        if not self.s > 0:
            raise ParameterError(f"s must be > 0, got {self.s}")
        if not 1 <= self.p <= self.u < math.inf:
            raise ParameterError(f"need 1 <= p <= u < inf, got p={self.p}, u={self.u}")
        if not (self.q >= 1 or self.q == INFINITY):
            raise ParameterError(f"q must be >= 1 or inf, got {self.q}")
        if int(self.d) != self.d or self.d < 1:
            raise ParameterError(f"d must be a positive integer, got {self.d}")


@dataclass(frozen=True)
class Box:
    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if len(lo) != len(hi) or not lo:
            raise ParameterError("box corners must have equal, nonzero length")
        if any(not b > a for a, b in zip(lo, hi)):
            raise ParameterError(f"box must have positive volume: {lo} .. {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def of(cls, box) -> "Box":
        """Coerce ``Box``, ``[(lo, hi), ...]`` or a single ``(lo, hi)`` pair."""
        if isinstance(box, Box):
            return box
        box = list(box)
        if len(box) == 2 and np.isscalar(box[0]):
            return cls((box[0],), (box[1],))
        return cls(tuple(b[0] for b in box), tuple(b[1] for b in box))

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def sides(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lower, self.upper))

    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Cell-centred samples of a real function on a box, zero outside it.

    ``values`` has shape ``n`` (one entry per axis); flattening in C order
    gives the sample list with the last axis varying fastest.
    """

    box: Box
    values: np.ndarray

    def __post_init__(self):
        box = Box.of(self.box)
        values = _read_only(self.values)
        if values.ndim != box.d:
            raise ParameterError(f"values have {values.ndim} axes, box has {box.d}")
        if any(k < 2 for k in values.shape):
            raise ParameterError(f"need at least 2 samples per axis, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NumericalError("grid values must be finite")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "values", values)

    @property
    def d(self) -> int:
        return self.box.d

    @property
    def n(self) -> tuple:
        return self.values.shape

    @property
    def spacing(self) -> np.ndarray:
        return np.array([s / k for s, k in zip(self.box.sides, self.n)])

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis_centers(self, axis: int) -> np.ndarray:
        lo, k = self.box.lower[axis], self.n[axis]
        return lo + (np.arange(k) + 0.5) * self.spacing[axis]

    def centers(self) -> np.ndarray:
        """All sample points, shape ``n + (d,)``."""
        axes = [self.axis_centers(a) for a in range(self.d)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.box, values)

    def __repr__(self):
        return f"GridFunction(box={self.box.lower}..{self.box.upper}, n={self.n})"


@dataclass(frozen=True, order=True)
class DyadicCube:
    """The cube ``2**-j * (m + (0, 1)**d)``."""

    j: int
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "j", int(self.j))
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))

    @property
    def d(self) -> int:
        return len(self.m)

    @property
    def side(self) -> float:
        return math.ldexp(1.0, -self.j)

    @property
    def lower(self) -> np.ndarray:
        return np.array(self.m, dtype=float) * self.side

    @property
    def upper(self) -> np.ndarray:
        return self.lower + self.side

    def dilated(self, c: float = 2.0) -> tuple:
        """Bounds ``(lower, upper)`` of the concentric cube with side ``c * side``."""
        centre = self.lower + 0.5 * self.side
        half = 0.5 * c * self.side
        return centre - half, centre + half

    def children(self):
        for off in np.ndindex(*(2,) * self.d):
            yield DyadicCube(self.j + 1, tuple(2 * a + b for a, b in zip(self.m, off)))


@dataclass(frozen=True)
class QuadratureSpec:
    """Discretisation of the t-integral, the h-ball and the Morrey supremum.

    ``t_max`` is the upper cutoff ``a`` of the t-integral.
    """

    t_min: float
    t_max: float = 1.0
    t_count: int = 16
    h_per_axis: int = 8
    sup_levels: tuple = (0, 6)

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max:
            raise ParameterError(f"need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.t_count < 2:
            raise ParameterError("t_count must be >= 2")
        if self.h_per_axis < 2:
            raise ParameterError("h_per_axis must be >= 2")
        j0, j1 = self.sup_levels
        if int(j0) != j0 or int(j1) != j1:
            raise ParameterError("sup_levels must be integers")
        if j0 > j1:
            raise ParameterError(f"empty level range {self.sup_levels}")
        object.__setattr__(self, "sup_levels", (int(j0), int(j1)))

    @classmethod
    def for_grid(cls, g: GridFunction, *, t_min=None, t_max=1.0, t_count=16,
                 h_per_axis=8, j_min=None, j_max=None) -> "QuadratureSpec":
        """Defaults tied to the grid: coarsest level has a doubled cube
        covering the box, finest level has doubled cubes of two cells."""
        if j_min is None:
            j_min = -math.ceil(math.log2(max(g.box.sides))) - 1
        if j_max is None:
            j_max = max(j_min, math.floor(math.log2(1.0 / float(np.max(g.spacing)))))
        if t_min is None:
            t_min = float(np.min(g.spacing))
        return cls(t_min, t_max, t_count, h_per_axis, (j_min, j_max))

    def levels(self) -> range:
        return range(self.sup_levels[0], self.sup_levels[1] + 1)

    def t_nodes(self) -> tuple:
        """Log-spaced midpoint nodes and their ``dt/t`` weights."""
        edges = np.geomspace(self.t_min, self.t_max, self.t_count + 1)
        nodes = np.sqrt(edges[:-1] * edges[1:])
        weights = np.log(edges[1:] / edges[:-1])
        return nodes, weights


@dataclass(frozen=True)
class NormResult:
    total: float
    morrey_part: float
    difference_part: float
    witness: DyadicCube | None
    spec: QuadratureSpec | None = field(default=None, compare=False)

    def __float__(self):
        return float(self.total)


def _as_points(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise ParameterError(f"points must have trailing dimension {d}, got {x.shape}")
    return x


def _call(callback: Callback, pts: np.ndarray) -> np.ndarray:
    flat = pts.reshape(-1, pts.shape[-1])
    try:
        out = np.asarray(callback(flat), dtype=float)
    except (TypeError, IndexError, ValueError):
        out = None
    if out is None or out.shape != (flat.shape[0],):
        out = np.array([float(callback(p)) for p in flat])
    return out.reshape(pts.shape[:-1])


def sample(callback: Callback, box, n) -> GridFunction:
    """Sample ``callback`` at the cell centres of a uniform grid on ``box``.

    ``callback`` receives an ``(M, d)`` array of points and returns ``M``
    values; scalar callbacks taking one point are also accepted.
    """
    box = Box.of(box)
    n = (int(n),) * box.d if np.isscalar(n) else tuple(int(k) for k in n)
    if len(n) != box.d or any(k < 2 for k in n):
        raise ParameterError(f"need n >= 2 per axis for a {box.d}-d box, got {n}")
    axes = [lo + (np.arange(k) + 0.5) * (hi - lo) / k
            for lo, hi, k in zip(box.lower, box.upper, n)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    values = _call(callback, pts)
    bad = ~np.isfinite(values)
    if bad.any():
        idx = tuple(np.argwhere(bad)[0])
        raise NumericalError(f"callback returned {values[idx]} at point {pts[idx].tolist()}")
    return GridFunction(box, values)


def evaluate(g: GridFunction, x) -> np.ndarray | float:
    """Multilinear interpolation of the samples; zero outside the box.

    Between the outermost centres and the box faces the interpolant is
    continued linearly, so multilinear functions are reproduced on the whole
    box. Accepts one point or an array of points with trailing axis ``d``.
    """
    scalar = np.ndim(x) == 0 or (np.ndim(x) == 1 and g.d > 1) or (np.ndim(x) == 1 and len(x) == 1)
    pts = _as_points(x, g.d)
    lead = pts.shape[:-1]
    pts = pts.reshape(-1, g.d)
    inside = np.ones(len(pts), dtype=bool)
    idx0, frac = [], []
    for a in range(g.d):
        lo, hi = g.box.lower[a], g.box.upper[a]
        xa = pts[:, a]
        inside &= (xa >= lo) & (xa <= hi)
        pos = (xa - lo) / g.spacing[a] - 0.5
        i0 = np.clip(np.floor(pos), 0, g.n[a] - 2).astype(np.intp)
        idx0.append(i0)
        frac.append(pos - i0)
    out = np.zeros(len(pts))
    for corner in np.ndindex(*(2,) * g.d):
        w = np.ones(len(pts))
        ix = []
        for a, c in enumerate(corner):
            w = w * (frac[a] if c else 1.0 - frac[a])
            ix.append(idx0[a] + c)
        out += w * g.values[tuple(ix)]
    out = np.where(inside, out, 0.0).reshape(lead)
    return float(out) if scalar and out.size == 1 else out


def level_index_range(lo: float, hi: float, j: int) -> tuple:
    """Indices ``m`` whose doubled interval ``2**-j (m - 1/2, m + 3/2)`` meets ``[lo, hi]``."""
    scale = math.ldexp(1.0, j)
    m_min = math.floor(lo * scale - 1.5) + 1
    m_max = math.ceil(hi * scale + 0.5) - 1
    return m_min, m_max


def cubes_at_level(box, j: int) -> list:
    """All level-``j`` cubes whose doubling meets ``box``, lexicographic in ``m``."""
    box = Box.of(box)
    ranges = [level_index_range(lo, hi, j) for lo, hi in zip(box.lower, box.upper)]
    if any(a > b for a, b in ranges):
        return []
    axes = [range(a, b + 1) for a, b in ranges]
    return [DyadicCube(j, m) for m in _product(axes)]


def _product(axes: Sequence[range]):
    if not axes:
        yield ()
        return
    for head in axes[0]:
        for tail in _product(axes[1:]):
            yield (head,) + tail


def _bump_exp(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_step(t) -> np.ndarray:
    """C-infinity step: 1 for ``t <= 0``, 0 for ``t >= 1``, monotone between."""
    t = np.asarray(t, dtype=float)
    a = _bump_exp(1.0 - t)
    b = _bump_exp(t)
    return a / (a + b)


def cutoff(r, inner: float, outer: float) -> np.ndarray:
    """Smooth radial cutoff equal to 1 on ``r <= inner`` and 0 on ``r >= outer``."""
    return smooth_step((np.asarray(r, dtype=float) - inner) / (outer - inner))


def ball_volume(d: int, radius: float) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * radius ** d
