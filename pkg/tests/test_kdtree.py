from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kdjitter.kdtree import (
    CellBounds,
    all_cell_bounds,
    batch_cell_bounds,
    cell_bounds,
    exact_cell_bounds,
    jittered_points,
    locate_cell,
)

from .oracles import membership_counts

F = Fraction


def test_twelve_strata_cell_seven_exact():
    lo, hi = exact_cell_bounds(12, 2, 7)
    assert lo == (F(5, 6), F(1, 2))
    assert hi == (F(1), F(1))


def test_five_strata_3d_cell_one_exact():
    lo, hi = exact_cell_bounds(5, 3, 1)
    assert lo == (F(3, 5), F(0), F(0))
    assert hi == (F(1), F(1, 2), F(1))


def test_single_stratum_is_whole_cube():
    cell = cell_bounds(1, 4, 0)
    assert (cell.lower == 0.0).all() and (cell.upper == 1.0).all()
    assert cell.volume() == 1.0


def test_sixteen_strata_2d_cell_zero():
    cell = cell_bounds(16, 2, 0)
    assert (cell.lower == [0.0, 0.0]).all()
    assert (cell.upper == [0.25, 0.25]).all()


def test_three_strata_1d_index_order():
    lower, upper = all_cell_bounds(3, 1)
    cells = np.c_[lower, upper]
    np.testing.assert_allclose(
        cells, [[0, 1 / 3], [2 / 3, 1], [1 / 3, 2 / 3]], rtol=0, atol=1e-15
    )


def test_four_strata_2d_is_two_by_two_grid():
    lower, upper = all_cell_bounds(4, 2)
    got = sorted(map(tuple, np.c_[lower, upper]))
    want = sorted(
        (x / 2, y / 2, (x + 1) / 2, (y + 1) / 2) for x in range(2) for y in range(2)
    )
    assert got == want


@pytest.mark.parametrize("n,d,i", [(0, 1, None), (4, 0, None), (4, 2, 4), (4, 2, -1)])
def test_invalid_parameters_raise(n, d, i):
    with pytest.raises(ValueError):
        if i is None:
            all_cell_bounds(n, d)
        else:
            cell_bounds(n, d, i)


@given(
    st.integers(min_value=1, max_value=300),
    st.integers(min_value=1, max_value=5),
    st.data(),
)
def test_float_bounds_track_exact_bounds(n, d, data):
    i = data.draw(st.integers(min_value=0, max_value=n - 1))
    cell = cell_bounds(n, d, i)
    lo, hi = exact_cell_bounds(n, d, i)
    assert np.abs(cell.lower - [float(v) for v in lo]).max() < 1e-12
    assert np.abs(cell.upper - [float(v) for v in hi]).max() < 1e-12
    # the rational shadow has exactly equal-volume cells
    vol = 1
    for a, b in zip(lo, hi):
        vol *= b - a
    assert vol == F(1, n)


@given(st.integers(min_value=1, max_value=400), st.integers(min_value=1, max_value=6))
def test_direct_equals_recursive_bitwise(n, d):
    l1, u1 = batch_cell_bounds(n, d)
    l2, u2 = all_cell_bounds(n, d)
    assert (l1 == l2).all() and (u1 == u2).all()


@given(
    st.integers(min_value=1, max_value=200),
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=0, max_value=2**64 - 1),
    st.data(),
)
def test_jitter_stays_in_cell_and_locates_back(n, d, seed, data):
    i = data.draw(st.integers(min_value=0, max_value=n - 1))
    point = jittered_points(n, d, seed, indices=[i])[0]
    cell = cell_bounds(n, d, i)
    assert cell.contains(point)
    assert (point < cell.upper).all()  # strict: jitter never hits the top face
    assert locate_cell(point, n)[0] == i


@given(
    st.integers(min_value=1, max_value=150),
    st.integers(min_value=1, max_value=4),
    st.integers(min_value=0, max_value=2**64 - 1),
)
def test_any_subset_matches_full_batch_bitwise(n, d, seed):
    full = jittered_points(n, d, seed)
    subset = np.arange(0, n, 3)[::-1]  # decimated, reversed order
    assert (jittered_points(n, d, seed, indices=subset) == full[subset]).all()


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 31, 32])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_cells_tile_the_cube_brute_force(n, d):
    lower, upper = all_cell_bounds(n, d)
    probes = np.random.default_rng(100 * n + d).random((2000, d))
    assert (membership_counts(probes, lower, upper) == 1).all()
    # the cube's own corners land in exactly one cell too (top faces closed)
    corners = np.stack(np.meshgrid(*[[0.0, 1.0]] * d)).reshape(d, -1).T
    assert (membership_counts(corners, lower, upper) == 1).all()


def test_volumes_sum_to_one():
    for n, d in [(7, 1), (59, 2), (100, 3), (512, 6)]:
        lower, upper = all_cell_bounds(n, d)
        vols = np.prod(upper - lower, axis=1)
        assert np.abs(vols * n - 1.0).max() < 1e-9
        assert abs(vols.sum() - 1.0) < 1e-9


def test_locate_is_inverse_of_generation():
    pts = jittered_points(257, 3, 9)
    assert (locate_cell(pts, 257) == np.arange(257)).all()


def test_cell_bounds_container():
    cell = CellBounds(np.array([0.0, 0.5]), np.array([0.5, 1.0]))
    assert cell.d == 2
    assert cell.volume() == 0.25
    assert cell.contains([0.0, 0.5])
    assert cell.contains([0.25, 1.0])  # upper face at 1 is closed
    assert not cell.contains([0.5, 0.75])
    assert not cell.contains([0.25, 0.25])
