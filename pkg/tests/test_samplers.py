import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kdjitter.kdtree import locate_cell
from kdjitter.samplers import (
    SOBOL_MAX_DIM,
    SamplerSpec,
    apply_shift,
    generate,
    halton_point,
    latin_hypercube,
    pad_2d,
    randomize_shift,
    sobol_point,
    _halton_batch,
    _sobol_batch,
)

from .oracles import radical_inverse_fraction


# ---------------------------------------------------------------- halton


def test_halton_origin_and_known_points():
    assert (halton_point(0, 3) == 0.0).all()
    assert halton_point(1, 2) == pytest.approx([1 / 2, 1 / 3], abs=1e-15)
    assert halton_point(5, 1)[0] == pytest.approx(5 / 8, abs=0)


def test_halton_first_four_base_two():
    pts = generate(SamplerSpec("halton"), 4, 1).points.ravel()
    assert pts == pytest.approx([0.0, 0.5, 0.25, 0.75], abs=0)


@given(st.integers(min_value=0, max_value=10_000))
def test_halton_tracks_exact_radical_inverse(i):
    got = halton_point(i, 3)
    for value, base in zip(got, (2, 3, 5)):
        assert abs(value - float(radical_inverse_fraction(i, base))) < 1e-15


def test_halton_batch_equals_scalar():
    idx = np.arange(200)
    batch = _halton_batch(idx, 4)
    for i in (0, 1, 17, 100, 199):
        assert (batch[i] == halton_point(i, 4)).all()


# ---------------------------------------------------------------- sobol


def test_sobol_first_dimension_is_van_der_corput():
    pts = _sobol_batch(np.arange(8), 1).ravel()
    assert pts == pytest.approx([0, 1 / 2, 1 / 4, 3 / 4, 1 / 8, 5 / 8, 3 / 8, 7 / 8], abs=0)


def test_sobol_first_four_2d():
    pts = _sobol_batch(np.arange(4), 2)
    want = [(0, 0), (1 / 2, 1 / 2), (1 / 4, 3 / 4), (3 / 4, 1 / 4)]
    assert pts == pytest.approx(np.array(want), abs=0)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_sobol_2d_prefixes_are_binary_nets(m):
    """Every 2^m-point prefix puts one point in each dyadic elementary box."""
    n = 2**m
    pts = _sobol_batch(np.arange(n), 2)
    for a in range(m + 1):
        b = m - a
        boxes = set(zip((pts[:, 0] * 2**a).astype(int), (pts[:, 1] * 2**b).astype(int)))
        assert len(boxes) == n


def test_sobol_matches_scipy_reference_table():
    qmc = pytest.importorskip("scipy.stats.qmc")
    n = 256
    idx = np.arange(n)
    mine = _sobol_batch(idx, SOBOL_MAX_DIM)
    ref = qmc.Sobol(d=SOBOL_MAX_DIM, scramble=False).random(n)
    # scipy emits the same sequence in Gray-code order
    assert np.array_equal(mine[idx ^ (idx >> 1)], ref)


def test_sobol_point_matches_batch_and_validates():
    assert (sobol_point(1000, 5) == _sobol_batch(np.array([1000]), 5)[0]).all()
    with pytest.raises(ValueError):
        sobol_point(0, SOBOL_MAX_DIM + 1)
    with pytest.raises(ValueError):
        sobol_point(-1, 2)
    with pytest.raises(ValueError):
        sobol_point(2**52, 2)


# ---------------------------------------------------------------- stochastic kinds


def test_jittered_grid_one_point_per_cell():
    pts = generate(SamplerSpec("jittered_grid", 4), 9, 2).points
    cells = set(zip(*(pts * 3).astype(int).T))
    assert len(cells) == 9


def test_jittered_grid_rejects_non_powers():
    with pytest.raises(ValueError, match="perfect"):
        generate(SamplerSpec("jittered_grid"), 10, 2)


def test_lhs_fills_every_bin_on_every_axis():
    for n, d in [(1, 1), (4, 2), (5, 3), (33, 2)]:
        pts = latin_hypercube(n, d, master_seed=2).points
        for axis in range(d):
            assert sorted((pts[:, axis] * n).astype(int)) == list(range(n))


def test_kdt_points_occupy_every_cell():
    pts = generate(SamplerSpec("kdt", 3), 59, 3).points
    assert sorted(locate_cell(pts, 59)) == list(range(59))


@pytest.mark.parametrize("kind", ["random", "jittered_grid", "lhs", "kdt", "kdt_2d_pad"])
def test_generate_is_deterministic_and_in_range(kind):
    spec = SamplerSpec(kind, master_seed=11)
    a = generate(spec, 16, 2).points
    b = generate(spec, 16, 2).points
    assert (a == b).all()
    assert a.min() >= 0.0 and a.max() < 1.0
    c = generate(SamplerSpec(kind, master_seed=12), 16, 2).points
    assert not (a == c).all()


# ---------------------------------------------------------------- padding


def test_pad_blocks_are_valid_2d_strata():
    n, d = 59, 5
    pts = pad_2d("kdt", n, d, master_seed=8).points
    for lo_axis in (0, 2):
        block = pts[:, lo_axis : lo_axis + 2]
        assert sorted(locate_cell(block, n)) == list(range(n))
    # trailing odd axis is 1D n-way stratified
    tail = np.sort(pts[:, 4])
    assert ((tail >= np.arange(n) / n) & (tail < (np.arange(n) + 1) / n)).all()


def test_pad_blocks_are_shuffled_independently():
    pts = pad_2d("kdt", 100, 4, master_seed=8).points
    first = locate_cell(pts[:, :2], 100)
    second = locate_cell(pts[:, 2:], 100)
    assert not (first == second).all()


def test_jittered_pad_needs_square_n():
    ss = pad_2d("jittered_grid", 16, 5, master_seed=1)
    assert ss.points.shape == (16, 5)
    with pytest.raises(ValueError, match="perfect"):
        pad_2d("jittered_grid", 10, 4)


def test_pad_single_point():
    assert pad_2d("kdt", 1, 4).points.shape == (1, 4)


# ---------------------------------------------------------------- randomization


def test_zero_shift_is_identity():
    ss = generate(SamplerSpec("sobol"), 32, 2)
    assert (apply_shift(ss, np.zeros(2)).points == ss.points).all()


def test_shift_preserves_wrapped_differences():
    ss = generate(SamplerSpec("halton"), 4, 2)
    shifted = randomize_shift(ss, seed=5)
    assert shifted.points.min() >= 0.0 and shifted.points.max() < 1.0
    before = np.mod(ss.points[:, None, :] - ss.points[None, :, :], 1.0)
    after = np.mod(shifted.points[:, None, :] - shifted.points[None, :, :], 1.0)
    assert np.abs(before - after).max() < 1e-12


def test_shift_randomization_in_generate_is_seeded():
    spec = SamplerSpec("sobol", master_seed=4, randomization="shift")
    a = generate(spec, 64, 3).points
    assert (a == generate(spec, 64, 3).points).all()
    assert not (a == generate(SamplerSpec("sobol"), 64, 3).points).all()
    assert spec.label == "sobol+shift"


def test_spec_validation():
    with pytest.raises(ValueError, match="kind"):
        SamplerSpec("sobolol")
    with pytest.raises(ValueError, match="halton/sobol"):
        SamplerSpec("kdt", randomization="shift")
    with pytest.raises(ValueError):
        SamplerSpec("random", randomization="rotate")
    with pytest.raises(ValueError):
        generate(SamplerSpec("random"), 0, 2)
