import math

import numpy as np
import pytest

from morreytrunc import experiments as ex
from morreytrunc import testbank
from morreytrunc.core import ParameterError, SpaceParams

FROZEN_T = [0.8475415473088358, 0.7661169900043157, 0.8116919899361998, 1.0,
            0.8002390427248025]
FROZEN_T_PLUS = [0.2501358816472881, 0.6177952740252343, 0.8092448927274123, 1.0,
                 0.7591737467064626]


def test_critical_border():
    assert ex.critical_border(SpaceParams(1.0, 1, 4, 2, 2)) == 1.5
    assert ex.critical_border(SpaceParams(1.0, 2, 2, 2, 3)) == 1.5
    assert ex.critical_border(SpaceParams(1.0, 1, 1, 2, 1)) == 2.0


def test_line_fit():
    fit = ex.LineFit.of([0, 1, 2, 3], [1, 3, 5, 7])
    assert fit.slope == pytest.approx(2) and fit.intercept == pytest.approx(1)
    assert fit.residual < 1e-14


@pytest.mark.parametrize("which,frozen", [("T", FROZEN_T), ("T+", FROZEN_T_PLUS)])
def test_sweep_frozen_ratios(which, frozen):
    fam = testbank.random_family(5, 1, [(0.0, 1.0)])
    table = ex.truncation_ratio_sweep(fam, SpaceParams(0.5, 1, 2, 2, 1), which, refinements=1)
    np.testing.assert_allclose([r.ratio for r in table.rows], frozen, rtol=1e-12)
    assert table.max_ratio == [1.0] and table.stable


def test_sweep_flags_zero_function():
    fam = [testbank.constant(0.0)]
    table = ex.truncation_ratio_sweep(fam, SpaceParams(0.5, 1, 2, 2, 1), refinements=1, n0=16)
    assert table.rows[0].flagged and math.isnan(table.rows[0].ratio)
    assert math.isnan(table.max_ratio[0])
    with pytest.raises(ParameterError):
        ex.truncation_ratio_sweep([], SpaceParams(0.5, 1, 2, 2, 1))


@pytest.mark.parametrize("s", [1.2, 1.75])
def test_divergence_probe_slope(s):
    probe = ex.divergence_probe(SpaceParams(s, 1, 4, 2, 2), range(2, 9))
    assert probe.status == "OK"
    assert probe.slope == pytest.approx(s - 1 - 2 / 4, rel=1e-3)
    assert len(probe.log2_values) == 7


def test_divergence_probe_statuses():
    probe = ex.divergence_probe(SpaceParams(2.5, 1, 4, 2, 2), range(2, 9))
    assert probe.status == ex.DIVERGENT_INTEGRAL and probe.slope == math.inf
    with pytest.raises(ParameterError):
        ex.divergence_probe(SpaceParams(1.2, 1, 4, 2, 2), range(2, 4))


def test_graded_integral():
    assert ex._graded_integral(lambda x: x ** -0.5, 1.0) == pytest.approx(2.0, rel=1e-12)


def test_sawtooth_small_cases():
    # J = 0: int_0^t x dx / t^2 = 1/2 for t <= 1
    (fit,) = ex.sawtooth_probe(1, 2, [0], t_range=(2 ** -6, 1))
    assert fit.c1 == pytest.approx(0.0, abs=1e-12)
    assert fit.c2 == pytest.approx(0.5, rel=1e-12)
    assert ex.sawtooth_quantity(3, 1.0) == pytest.approx(ex.sawtooth_quantity(3, 1.0))
    with pytest.raises(ParameterError):
        ex.sawtooth_probe(3, 2, [4])


def test_sawtooth_growth_increases_with_J():
    c1 = [f.c1 for f in ex.sawtooth_probe(1, 2, [6, 10])]
    assert 0 < c1[0] < c1[1] < 1 / (2 * math.log(2))


def test_fubini_comparison():
    rep = ex.fubini_comparison(2, 1.0, 2.0, 0.5, 2.0, t_range=(1, 16), box_scales=(8, 16),
                               per_unit=8)
    assert rep.fubini_slope == pytest.approx(0.5, rel=0.02)
    assert rep.direct_change <= 0.05
    with pytest.raises(ParameterError):
        ex.fubini_comparison(2, 2.0, 2.0, 0.5, 2.0)
    with pytest.raises(ParameterError):
        ex.fubini_comparison(3, 1.9, 2.0, 0.5, 2.0)


def test_fubini_quantity_scaling():
    g = testbank.fubini_function(2, 1.0)
    a = ex.fubini_quantity(g, 2, 1.0, 2.0, 4.0)
    b = ex.fubini_quantity(g, 2, 1.0, 2.0, 16.0)
    assert b / a == pytest.approx(2.0, rel=1e-6)


def test_window_sums_against_loops():
    rng = np.random.default_rng(1)
    f = rng.normal(size=20)
    delta = 0.1
    radii = np.array([0.1, 0.25, 0.7])
    got = ex._window_sums(f, delta, radii)
    for k, r in enumerate(radii):
        for i in range(20):
            # cell m covers [|i-m| - 1/2, |i-m| + 1/2] * delta from x_i
            want = sum(abs(f[i] - f[m]) * delta
                       * min(1.0, max(0.0, r / delta - abs(i - m) + 0.5))
                       for m in range(20))
            assert got[k, i] == pytest.approx(want, rel=1e-12, abs=1e-14)


def test_hardy_check_bounded_interval():
    res = ex.hardy_check(testbank.zero_mean_family(4), 1.0, 2.0, 2.0, 0.3, n=256)
    assert len(res.ratios) == 4
    assert 0 < res.max_ratio < 10
    with pytest.raises(ParameterError, match="mean-zero"):
        ex.hardy_check([testbank.smooth_bump(0.5, 0.3)], 1.0, 2.0, 2.0, 0.3, n=128)
    with pytest.raises(ParameterError):
        ex.hardy_check(testbank.zero_mean_family(2), 1.0, 2.0, 2.0, 0.6)


def test_hardy_check_half_line():
    res = ex.hardy_check(testbank.zero_mean_family(3, centre=1.5), 1.0, 2.0, 2.0, 0.3,
                         n=256, interval=(0.0, math.inf))
    assert all(r > 0 for r in res.ratios)


def test_critical_border_examples():
    for d in (1, 2, 3):
        assert ex.critical_border(SpaceParams(1.0, 2.0, 2.0, 2, d)) == 1.5
    assert ex.critical_border(SpaceParams(1.0, 1.0, 3.0, 2, 1)) == pytest.approx(1 + 1 / 3)


def test_nonnegative_functions_have_unit_ratio():
    fam = [testbank.smooth_bump(0.5, 0.3), testbank.constant(2.0)]
    for which in ("T", "T+"):
        table = ex.truncation_ratio_sweep(fam, SpaceParams(0.7, 1, 2, 2, 1), which,
                                          refinements=1, n0=32)
        assert [r.ratio for r in table.rows] == [1.0, 1.0]


def test_divergence_probe_at_border():
    probe = ex.divergence_probe(SpaceParams(1.5, 1, 4, 2, 2), range(2, 9))
    assert abs(probe.slope) <= 0.05


def test_hardy_zero_function_skipped():
    res = ex.hardy_check([testbank.constant(0.0)], 1.0, 2.0, 2.0, 0.3, n=64)
    assert math.isnan(res.ratios[0]) and math.isnan(res.max_ratio)
