import math

import numpy as np
import pytest

from morreytrunc import testbank
from morreytrunc.core import DyadicCube, ParameterError, sample
from morreytrunc.zeroset import (NO_ZEROS, cover_scaling, covering_cells, lattice_grid,
                                 sign_change_cells)


def test_lattice_grid_nodes():
    g = lattice_grid(lambda x: x[:, 0], [(0, 1)], 3)
    np.testing.assert_allclose(g.axis_centers(0), np.arange(17) / 16)


def test_vertical_line_exact_counts():
    f = testbank.line((1.0, 0.0), 1 / 3)
    for r in (3, 5, 7):
        cells = covering_cells(f, [(0, 1), (0, 1)], 0, r)
        assert len(cells) == 2 ** r
        assert {c.m[0] for c in cells} == {math.floor(2 ** r / 3)}


def test_sign_change_cells_restricted_to_doubled_base():
    g = lattice_grid(testbank.line((1.0, 0.0), 1 / 3), [(-2, 2), (-2, 2)], 4)
    base = DyadicCube(1, (0, 0))
    cells = sign_change_cells(g, base, 4)
    lo, hi = base.dilated(2.0)
    for c in cells:
        assert np.all(c.lower >= lo - 1e-12) and np.all(c.upper <= hi + 1e-12)
    with pytest.raises(ParameterError):
        sign_change_cells(g, base, 0)


@pytest.mark.parametrize("name", ["line", "circle", "triple_line"])
def test_cover_scaling_codimension_one(name):
    f = testbank.named(name, d=2)
    res = cover_scaling(f, testbank.DEFAULT_BOX[name](2), 0, range(4, 8))
    assert res.status == "OK"
    assert res.exponent <= 1.1
    assert max(res.ratios) / min(res.ratios) <= 4
    assert res.rows()[0][0] == 4


def test_circle_prefactor_near_perimeter():
    # a circle of radius 1/2 has length pi; cells of side 2^-r along it ~ c * pi * 2^r
    res = cover_scaling(testbank.circle(0.5), [(-1, 1), (-1, 1)], 0, range(5, 9))
    assert math.pi <= res.prefactor <= 3 * math.pi


def test_no_zeros_and_argument_checks():
    res = cover_scaling(testbank.constant(1.0, 2), [(0, 1), (0, 1)], 0, range(3, 7))
    assert res.status == NO_ZEROS and math.isnan(res.exponent)
    with pytest.raises(ParameterError):
        cover_scaling(testbank.circle(), [(-1, 1), (-1, 1)], 0, range(4, 6))
    with pytest.raises(ParameterError):
        cover_scaling(testbank.circle(), [(-1, 1), (-1, 1)], 5, range(4, 9))


def test_one_dimensional_zero_count_is_flat():
    f = lambda x: np.sin(7 * x[:, 0])
    res = cover_scaling(f, [(0.1, 2.9)], 0, range(4, 9))
    assert abs(res.exponent) < 0.1
    assert res.counts[-1] <= 2 * 6


def test_hyperplane_ratio_within_bounds():
    for box in ([(0, 1), (0, 1)], [(-1, 1), (-1, 1)]):
        res = cover_scaling(testbank.line((1.0, 0.0)), box, 0, range(4, 9))
        assert res.exponent == pytest.approx(1.0, abs=1e-9)
        assert all(1 <= q <= 4 for q in res.ratios)


def test_triple_line_matches_summed_single_lines():
    box = [(-1, 1), (-1, 1)]
    triple = cover_scaling(testbank.triple_line(), box, 0, range(4, 9))
    parts = [cover_scaling(p, box, 0, range(4, 9)) for p in testbank.triple_line_parts()]
    summed = [sum(c) for c in zip(*[p.counts for p in parts])]
    for a, b in zip(triple.counts, summed):
        # the three lines share only a few cells near their crossings
        assert 0.95 * b <= a <= b


@pytest.mark.parametrize("name", ["line", "circle", "triple_line"])
def test_count_growth(name):
    res = cover_scaling(testbank.named(name, d=2), testbank.DEFAULT_BOX[name](2), 0,
                        range(4, 10))
    steps = [b / a for a, b in zip(res.counts, res.counts[1:])]
    assert all(s <= 4 for s in steps)
    assert steps[-1] == pytest.approx(2.0, rel=0.25)


def test_constant_has_no_cells():
    g = lattice_grid(testbank.constant(1.0, 2), [(0, 1), (0, 1)], 5)
    assert sign_change_cells(g, DyadicCube(0, (0, 0)), 5) == []
