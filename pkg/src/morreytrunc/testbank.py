"""Test functions: the necessity probe, the Fubini counterexample, the
lacunary sawtooth series and reproducible random smooth families.

Every callback takes an ``(M, d)`` array of points and returns ``M``
values. All cutoffs share the ``exp(-1/x)`` profile of ``core.smooth_step``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .core import Box, ParameterError, cutoff


def _pts(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1 and d == 1:
        x = x[:, None]
    return np.atleast_2d(x)


def necessity_function(d: int, s: float):
    """``x_1`` on ``|x| < 10 d (s+2)``, zero beyond ``11 d (s+2)``, smooth between."""
    if d < 1 or not s > 0:
        raise ParameterError(f"need d >= 1 and s > 0, got d={d}, s={s}")
    inner, outer = 10 * d * (s + 2), 11 * d * (s + 2)

    def f(x):
        x = _pts(x, d)
        return x[:, 0] * cutoff(np.linalg.norm(x, axis=1), inner, outer)

    f.inner_radius, f.outer_radius = inner, outer
    return f


def unit_bump(y) -> np.ndarray:
    """Smooth bump supported in ``[0, 1]`` with peak 1 at ``1/2``."""
    z = 2.0 * np.asarray(y, dtype=float) - 1.0
    out = np.zeros_like(z)
    inside = np.abs(z) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - z[inside] ** 2))
    return out


def fubini_function(d: int, p: float):
    """``g(x_1, x') = f(x')`` with ``f`` a product bump on ``[0, 1]^(d-1)``
    scaled so that ``int |f|^p dx' = 1``."""
    if d < 2:
        raise ParameterError(f"the Fubini counterexample needs d >= 2, got {d}")
    mass, _ = integrate.quad(lambda y: unit_bump(np.array([y]))[0] ** p, 0.0, 1.0,
                             epsabs=1e-15, epsrel=1e-13, limit=200)
    scale = mass ** (-(d - 1) / p)

    def g(x):
        x = _pts(x, d)
        return scale * np.prod(unit_bump(x[:, 1:]), axis=1)

    g.scale = scale
    return g


def saw_profile(x) -> np.ndarray:
    """Odd profile equal to ``x`` on ``[-1, 1]`` and vanishing outside ``[-2, 2]``."""
    x = np.asarray(x, dtype=float)
    return x * cutoff(np.abs(x), 1.0, 2.0)


def sawtooth_series(J: int):
    """Partial sum ``sum_{j=0}^{J} 2^-j phi(2^j x)`` (one dimension)."""
    if J < 0:
        raise ParameterError(f"J must be >= 0, got {J}")

    def g(x):
        x = _pts(x, 1)[:, 0]
        out = np.zeros_like(x)
        for j in range(J + 1):
            out += 2.0 ** -j * saw_profile(2.0 ** j * x)
        return out

    return g


def random_smooth(seed: int, d: int, box, complexity: int = 3, window: bool = True):
    """Seeded random trigonometric polynomial plus Gaussian bumps.

    With ``window`` the sum is multiplied by a smooth cutoff vanishing on the
    outer 10% of each half-width, so the function is supported inside
    ``box``. ``complexity = 0`` leaves only the constant term.
    """
    if complexity < 0:
        raise ParameterError("complexity must be >= 0")
    box = Box.of(box)
    if box.d != d:
        raise ParameterError(f"box is {box.d}-d, expected {d}")
    rng = np.random.default_rng(seed)
    lo, hi = np.array(box.lower), np.array(box.upper)
    centre, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    const = rng.normal()
    waves = []
    for _ in range(complexity):
        k = rng.integers(1, 5, size=d) * np.pi / half * rng.choice([-1, 1], size=d)
        waves.append((rng.normal() / (1 + complexity), k, rng.uniform(0, 2 * np.pi)))
    bumps = []
    for _ in range(complexity):
        c = centre + rng.uniform(-0.5, 0.5, size=d) * half
        w = rng.uniform(0.08, 0.25) * half
        bumps.append((rng.normal(), c, w))

    def f(x):
        x = _pts(x, d)
        out = np.full(len(x), const)
        for amp, k, phase in waves:
            out += amp * np.cos(x @ k + phase)
        for amp, c, w in bumps:
            out += amp * np.exp(-np.sum(((x - c) / w) ** 2, axis=1))
        if window:
            rel = np.abs(x - centre) / half
            out *= np.prod(cutoff(rel, 0.6, 0.9), axis=1)
        return out

    return f


def random_family(count: int, d: int, box, complexity: int = 3, seed: int = 0) -> list:
    return [random_smooth(seed + i, d, box, complexity) for i in range(count)]


def smooth_bump(centre=0.5, width=0.5, d: int = 1):
    """Radial bump ``unit_bump`` rescaled to ``|x - centre| < width``."""
    centre = np.broadcast_to(np.asarray(centre, dtype=float), (d,))

    def f(x):
        x = _pts(x, d)
        r = np.linalg.norm(x - centre, axis=1) / width
        return unit_bump(0.5 + 0.5 * r)

    return f


def odd_bump(width: float, freq: float = 0.0, centre: float = 0.5, kind: str = "linear"):
    """One-dimensional bump odd about ``centre``: zero mean on any interval
    symmetric about ``centre``."""

    def f(x):
        y = _pts(x, 1)[:, 0] - centre
        env = unit_bump(0.5 + 0.5 * np.abs(y) / width)
        if kind == "sine":
            return np.sin(2 * np.pi * freq * y) * env
        return y / width * env

    return f


def zero_mean_family(count: int = 10, centre: float = 0.5) -> list:
    """Deterministic family of odd bumps about ``centre`` with varied widths
    and oscillation."""
    fam = []
    for i in range(count):
        width = 0.15 + 0.3 * i / max(count - 1, 1)
        if i % 2 == 0:
            fam.append(odd_bump(width, centre=centre))
        else:
            fam.append(odd_bump(width, freq=(1 + i // 2) / width, centre=centre, kind="sine"))
    return fam


def line(normal, offset: float = 0.0):
    normal = np.asarray(normal, dtype=float)

    def f(x):
        return _pts(x, len(normal)) @ normal - offset

    return f


def circle(radius: float = 0.5, centre=(0.0, 0.0)):
    centre = np.asarray(centre, dtype=float)

    def f(x):
        x = _pts(x, len(centre))
        return np.sum((x - centre) ** 2, axis=1) - radius ** 2

    return f


def product(*fs):
    def f(x):
        out = None
        for h in fs:
            val = h(x)
            out = val if out is None else out * val
        return out

    return f


def triple_line():
    """Product of three transversal linear forms in the plane."""
    return product(line((1.0, 0.3), 0.1), line((-0.4, 1.0), -0.2), line((0.7, 0.7), 0.35))


def triple_line_parts():
    return [line((1.0, 0.3), 0.1), line((-0.4, 1.0), -0.2), line((0.7, 0.7), 0.35)]


def constant(c: float = 1.0, d: int = 1):
    def f(x):
        return np.full(len(_pts(x, d)), float(c))

    return f


NAMED = {
    "bump": lambda d=1, **kw: smooth_bump(kw.get("centre", 0.5), kw.get("width", 0.5), d),
    "necessity": lambda d=1, s=1.0, **kw: necessity_function(d, s),
    "fubini": lambda d=2, p=1.0, **kw: fubini_function(d, p),
    "sawtooth": lambda d=1, J=12, **kw: sawtooth_series(int(J)),
    "random": lambda d=1, seed=0, box=None, **kw: random_smooth(int(seed), d, box or [(0.0, 1.0)] * d),
    "circle": lambda d=2, **kw: circle(0.5, (0.0,) * d),
    "line": lambda d=2, **kw: line((1.0,) + (0.0,) * (d - 1), 1.0 / 3.0),
    "triple_line": lambda d=2, **kw: triple_line(),
}

DEFAULT_BOX = {
    "bump": lambda d: [(-0.5, 1.5)] * d,
    "necessity": lambda d: [(-1.0, 1.0)] * d,
    "fubini": lambda d: [(-4.0, 4.0)] + [(-1.0, 2.0)] * (d - 1),
    "sawtooth": lambda d: [(-3.0, 3.0)],
    "random": lambda d: [(0.0, 1.0)] * d,
    "circle": lambda d: [(-1.0, 1.0)] * d,
    "line": lambda d: [(0.0, 1.0)] * d,
    "triple_line": lambda d: [(-1.0, 1.0)] * d,
}


def named(name: str, **kwargs):
    try:
        factory = NAMED[name]
    except KeyError:
        raise ParameterError(f"unknown function {name!r}; choose from {sorted(NAMED)}") from None
    return factory(**kwargs)
