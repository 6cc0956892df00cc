import math

import numpy as np
import pytest

from morreytrunc import testbank
from morreytrunc.core import ParameterError, SpaceParams, sample
from morreytrunc.norms_diff import norm
from morreytrunc.norms_spectral import (FrequencyGrid, band, bands, besov_morrey_norm_lp,
                                        build_partition, default_K, pad, partition_for, phi0,
                                        tlm_norm_lp)

# frozen band for spectral / difference ratios, s=0.5, p=1, u=2, q=2
RATIO_BAND_C = 3.0


def test_phi0_profile():
    r = np.array([0.0, 1.0, 1.2, 1.5, 3.0])
    out = phi0(r)
    assert out[0] == 1 and out[1] == 1 and 0 < out[2] < 1 and out[3] == 0 and out[4] == 0


@pytest.mark.parametrize("shape,spacing", [((256,), (1 / 64,)), ((64, 48), (0.05, 0.1))])
def test_partition_of_unity(shape, spacing):
    part = build_partition(None, FrequencyGrid(shape, spacing))
    assert part.K == default_K(part.freq_grid)
    assert part.residual() < 1e-12
    r = part.freq_grid.radius()
    for k, p in enumerate(part.phi[1:], start=1):
        outside = (r < 2.0 ** (k - 1) * (1 - 1e-12)) | (r > 1.5 * 2.0 ** k * (1 + 1e-12))
        assert np.all(p[outside] == 0)
        assert np.all(p >= -1e-15)


def test_bands_reconstruct_smooth_function():
    g = sample(testbank.smooth_bump(0.5, 0.4), [(0, 1)], 128)
    part = partition_for(g)
    pieces = bands(g, part)
    total = sum(b.values for b in pieces)
    padded = pad(g, part.freq_grid.shape)
    # only the tail beyond 2^K is lost
    np.testing.assert_allclose(total, padded.values, atol=2e-5)
    np.testing.assert_array_equal(band(g, part, 2).values, pieces[2].values)
    with pytest.raises(ParameterError):
        band(g, part, part.K + 1)


def test_pad_is_centred():
    g = sample(lambda x: 1 + x[:, 0], [(0, 1)], 8)
    p = pad(g, (16,))
    assert p.box.lower[0] == pytest.approx(-0.5) and p.box.upper[0] == pytest.approx(1.5)
    np.testing.assert_array_equal(p.values[4:12], g.values)
    assert pad(g, (8,)) is g
    with pytest.raises(ParameterError):
        pad(g, (4,))


def test_partition_spacing_mismatch():
    g = sample(lambda x: x[:, 0], [(0, 1)], 32)
    h = sample(lambda x: x[:, 0], [(0, 1)], 64)
    with pytest.raises(ParameterError):
        bands(h, partition_for(g))


def test_q_infinity_and_parts():
    g = sample(testbank.smooth_bump(0.5, 0.4), [(0, 1)], 64)
    part = partition_for(g)
    for fn in (besov_morrey_norm_lp, tlm_norm_lp):
        fin = fn(g, SpaceParams(0.5, 1, 2, 2, 1), part)
        inf = fn(g, SpaceParams(0.5, 1, 2, math.inf, 1), part)
        assert inf.total <= fin.total
        assert max(fin.morrey_part, fin.difference_part) <= fin.total * (1 + 1e-12)
        assert fin.total <= (fin.morrey_part + fin.difference_part) * (1 + 1e-12)


@pytest.mark.parametrize("space", ["besov", "tlm"])
def test_engines_are_comparable(space):
    box = [(0.0, 1.0)]
    params = SpaceParams(0.5, 1, 2, 2, 1)
    lp = besov_morrey_norm_lp if space == "besov" else tlm_norm_lp
    for f in testbank.random_family(4, 1, box, seed=100):
        ratios = []
        for n in (64, 128):
            g = sample(f, box, n)
            ratios.append(lp(g, params, partition_for(g)).total / norm(space, g, params).total)
        assert 1 / RATIO_BAND_C <= min(ratios) and max(ratios) <= RATIO_BAND_C
        assert abs(ratios[1] / ratios[0] - 1) <= 0.25


def test_phi_examples():
    part = build_partition(4, FrequencyGrid((128,), (0.05,)))
    r = part.freq_grid.radius()
    assert part.phi[0][r == 0][0] == 1.0
    assert np.all(part.phi[1][r <= 1] == 0)


def test_constant_bands_without_padding():
    g = sample(lambda x: np.full(len(x), 2.5), [(0, 1)], 64)
    part = partition_for(g, padding=1)
    np.testing.assert_allclose(band(g, part, 0).values, 2.5, atol=1e-13)
    for k in range(1, part.K + 1):
        np.testing.assert_allclose(band(g, part, k).values, 0.0, atol=1e-13)


@pytest.mark.parametrize("k", [2, 3])
def test_single_mode_scaled_by_multiplier(k):
    xi = 5.0  # resolved on the 2 pi periodic grid; 2^(k-1) < 5 < 3 * 2^(k-1) for k = 2, 3
    g = sample(lambda x: np.cos(xi * x[:, 0]), [(0, 2 * np.pi)], 64)
    part = partition_for(g, padding=1)
    r = part.freq_grid.radius()
    weight = part.phi[k][np.isclose(r, xi)][0]
    assert 0 < weight < 1
    np.testing.assert_allclose(band(g, part, k).values, weight * g.values, atol=1e-12)


def test_zero_function_lp():
    g = sample(lambda x: np.zeros(len(x)), [(0, 1)], 32)
    part = partition_for(g)
    assert besov_morrey_norm_lp(g, SpaceParams(0.5, 1, 2, 2, 1), part).total == 0.0
