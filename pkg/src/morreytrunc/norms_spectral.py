"""Littlewood-Paley norms computed with the discrete Fourier transform.

The sampled box is treated as one period. By default it is first padded
with zeros to twice its size per axis, which keeps compactly supported
functions from wrapping around. Frequencies are angular (``e^{-i x xi}``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (INFINITY, Box, GridFunction, NormResult, ParameterError, QuadratureSpec,
                   SpaceParams, cutoff)
from .norms_diff import morrey_of_values


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    shape: tuple
    spacing: tuple

    @property
    def axes(self) -> list:
        return [2 * np.pi * np.fft.fftfreq(n, d) for n, d in zip(self.shape, self.spacing)]

    def radius(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.sqrt(sum(m * m for m in mesh))

    @property
    def nyquist(self) -> float:
        return min(math.pi / d for d in self.spacing)

    @classmethod
    def for_grid(cls, g: GridFunction, padding: int = 2) -> "FrequencyGrid":
        return cls(tuple(int(padding) * k for k in g.n), tuple(float(s) for s in g.spacing))


@dataclass(frozen=True, eq=False)
class LPPartition:
    K: int
    phi: tuple
    freq_grid: FrequencyGrid

    def residual(self) -> float:
        """Max deviation of ``sum_k phi_k`` from 1 where ``|xi| <= 2^(K-1)``."""
        r = self.freq_grid.radius()
        total = np.zeros_like(r)
        for p in self.phi:
            total = total + p
        resolved = r <= 2.0 ** (self.K - 1)
        return float(np.max(np.abs(total[resolved] - 1.0)))


def phi0(r) -> np.ndarray:
    """Radial profile: 1 for ``|xi| <= 1``, 0 for ``|xi| >= 3/2``, smooth between."""
    return cutoff(r, 1.0, 1.5)


def default_K(freq_grid: FrequencyGrid) -> int:
    return max(1, int(math.floor(math.log2(freq_grid.nyquist))))


def build_partition(K: int | None, freq_grid: FrequencyGrid) -> LPPartition:
    if K is None:
        K = default_K(freq_grid)
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    r = freq_grid.radius()
    phi = [phi0(r)]
    for k in range(1, K + 1):
        phi.append(phi0(r * 2.0 ** -k) - phi0(r * 2.0 ** (1 - k)))
    return LPPartition(int(K), tuple(phi), freq_grid)


def partition_for(g: GridFunction, padding: int = 2, K: int | None = None) -> LPPartition:
    return build_partition(K, FrequencyGrid.for_grid(g, padding))


def pad(g: GridFunction, shape: tuple) -> GridFunction:
    """Embed ``g`` centrally in a zero grid of ``shape`` with the same spacing."""
    if tuple(shape) == g.n:
        return g
    extra = [s - k for s, k in zip(shape, g.n)]
    if any(e < 0 for e in extra):
        raise ParameterError(f"cannot pad {g.n} to {shape}")
    before = [e // 2 for e in extra]
    values = np.pad(g.values, [(b, e - b) for b, e in zip(before, extra)])
    lower = tuple(lo - b * h for lo, b, h in zip(g.box.lower, before, g.spacing))
    upper = tuple(hi + (e - b) * h for hi, b, e, h in zip(g.box.upper, before, extra, g.spacing))
    return GridFunction(Box(lower, upper), values)


def _spectrum(g: GridFunction, partition: LPPartition):
    fg = partition.freq_grid
    if not np.allclose(fg.spacing, g.spacing, rtol=1e-12, atol=0):
        raise ParameterError("partition spacing does not match the grid")
    padded = pad(g, fg.shape)
    return padded, np.fft.fftn(padded.values)


def band(g: GridFunction, partition: LPPartition, k: int) -> GridFunction:
    """``F^-1[phi_k F g]`` on the (padded) periodic grid of the partition."""
    if not 0 <= k <= partition.K:
        raise ParameterError(f"band index {k} outside 0..{partition.K}")
    padded, spec = _spectrum(g, partition)
    return padded.with_values(np.fft.ifftn(partition.phi[k] * spec).real)


def bands(g: GridFunction, partition: LPPartition) -> list:
    padded, spec = _spectrum(g, partition)
    return [padded.with_values(np.fft.ifftn(p * spec).real) for p in partition.phi]


def _spec_for(padded: GridFunction, spec: QuadratureSpec | None) -> QuadratureSpec:
    return QuadratureSpec.for_grid(padded) if spec is None else spec


def besov_morrey_norm_lp(g: GridFunction, params: SpaceParams, partition: LPPartition,
                         spec: QuadratureSpec | None = None) -> NormResult:
    """``(sum_k 2^{ksq} ||band_k | M^u_p||^q)^{1/q}``.

    ``morrey_part`` is the ``k = 0`` term and ``difference_part`` the
    ``l_q`` sum over ``k >= 1``; they combine to ``total`` in ``l_q``.
    """
    parts = bands(g, partition)
    spec = _spec_for(parts[0], spec)
    levels = spec.levels()
    terms, witnesses = [], []
    for k, b in enumerate(parts):
        m, w = morrey_of_values(b.values, b.box, params.p, params.u, levels)
        terms.append(2.0 ** (k * params.s) * m)
        witnesses.append(w)
    terms = np.array(terms)
    q = params.q
    if q == INFINITY:
        total, high = float(terms.max()), float(terms[1:].max())
    else:
        total = float(np.sum(terms ** q) ** (1 / q))
        high = float(np.sum(terms[1:] ** q) ** (1 / q))
    return NormResult(total, float(terms[0]), high, witnesses[int(np.argmax(terms))], spec)


def tlm_norm_lp(g: GridFunction, params: SpaceParams, partition: LPPartition,
                spec: QuadratureSpec | None = None) -> NormResult:
    """``|| (sum_k 2^{ksq} |band_k|^q)^{1/q} | M^u_p ||``.

    ``morrey_part`` is the Morrey norm of ``band_0`` and ``difference_part``
    that of the ``k >= 1`` square function; ``total`` lies between their
    maximum and their sum.
    """
    parts = bands(g, partition)
    spec = _spec_for(parts[0], spec)
    levels = spec.levels()
    q = params.q
    scaled = [2.0 ** (k * params.s) * np.abs(b.values) for k, b in enumerate(parts)]
    if q == INFINITY:
        full = np.maximum.reduce(scaled)
        high = np.maximum.reduce(scaled[1:]) if len(scaled) > 1 else np.zeros_like(full)
    else:
        powered = [a ** q for a in scaled]
        full = np.add.reduce(powered) ** (1 / q)
        high = np.add.reduce(powered[1:]) ** (1 / q)
    box = parts[0].box
    total, witness = morrey_of_values(full, box, params.p, params.u, levels)
    low, _ = morrey_of_values(scaled[0], box, params.p, params.u, levels)
    rest, _ = morrey_of_values(high, box, params.p, params.u, levels)
    return NormResult(total, low, rest, witness, spec)
