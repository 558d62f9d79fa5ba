"""Star discrepancy of point sets in [0, 1)^d.

Two measures:

* :func:`l2_star_discrepancy` -- the L2 star discrepancy via Warnock's
  closed form.  The O(n^2 d) pair sum runs in a parallel compiled kernel
  when numba is importable (a chunked numpy path covers the rest), always
  with compensated accumulation, and the cross-thread reduction is a
  deterministic serial ``fsum`` over per-row partials, so results do not
  depend on thread count.
* :func:`linf_star_discrepancy` -- the sup-norm star discrepancy, computed
  exactly.  The supremum over anchored boxes [0, u) is attained with every
  u_m either a point coordinate (closed side) or just below one / at 1
  (open side), so enumerating that candidate grid with closed and strict
  counts is exact.  Cost grows like n^d, hence the n <= 512, d <= 3 limit.

:func:`stratified_linf_bound` is the worst-case sup-norm bound
``2^(d-1) * d * n^(-1/d)`` satisfied by any set with one point in each
cell of the equal-volume kd partition.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .rng import derive_seed
from .samplers import SampleSet, SamplerSpec, generate, randomize_shift

try:
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_LINF_MAX_N = 512
_LINF_MAX_D = 3


def _as_points(points) -> np.ndarray:
    pts = points.points if isinstance(points, SampleSet) else np.asarray(points, dtype=float)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError(f"need a nonempty (n, d) point array, got shape {pts.shape}")
    if pts.min() < 0.0 or pts.max() > 1.0:
        raise ValueError("points must lie in the unit cube")
    return pts


if _HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _pair_rows(x):  # pragma: no cover - compiled
        n, d = x.shape
        rows = np.zeros(n)
        for i in prange(n):
            acc = 0.0
            comp = 0.0
            for j in range(i):
                p = 1.0
                for m in range(d):
                    a = x[i, m]
                    b = x[j, m]
                    if b > a:
                        a = b
                    p *= 1.0 - a
                # Kahan step
                y = p - comp
                t = acc + y
                comp = (t - acc) - y
                acc = t
            rows[i] = acc
        return rows


def _pair_rows_numpy(x: np.ndarray) -> np.ndarray:
    """Strict-lower-triangle row sums of prod_m (1 - max(x_i, x_j))."""
    n, d = x.shape
    rows = np.zeros(n)
    chunk = max(1, 4_000_000 // max(n * d, 1))
    col = np.arange(n)
    for start in range(1, n, chunk):
        stop = min(start + chunk, n)
        block = np.prod(1.0 - np.maximum(x[start:stop, None, :], x[None, :, :]), axis=2)
        keep = col[None, :] < np.arange(start, stop)[:, None]
        rows[start:stop] = np.where(keep, block, 0.0).sum(axis=1)
    return rows


def l2_star_discrepancy(points) -> float:
    """L2 star discrepancy (the value itself, not its square)."""
    x = _as_points(points)
    n, d = x.shape
    single = math.fsum(np.prod(1.0 - x * x, axis=1).tolist())
    diag = math.fsum(np.prod(1.0 - x, axis=1).tolist())
    rows = _pair_rows(x) if _HAVE_NUMBA else _pair_rows_numpy(x)
    pair = 2.0 * math.fsum(rows.tolist()) + diag
    value_sq = 3.0**-d - (2.0 ** (1 - d) / n) * single + pair / (float(n) * n)
    return math.sqrt(max(value_sq, 0.0))


def _linf_1d(x: np.ndarray) -> float:
    n = x.shape[0]
    xs = np.sort(x)
    cand = np.append(np.unique(xs), 1.0)
    closed = np.searchsorted(xs, cand, side="right")
    strict = np.searchsorted(xs, cand, side="left")
    pos = np.max(closed / n - cand)
    neg = np.max(cand - strict / n)
    return float(max(pos, neg, 0.0))


def _linf_2d(x: np.ndarray) -> float:
    n = x.shape[0]
    cx = np.append(np.unique(x[:, 0]), 1.0)
    cy = np.append(np.unique(x[:, 1]), 1.0)
    hist = np.zeros((cx.size, cy.size))
    np.add.at(hist, (np.searchsorted(cx, x[:, 0]), np.searchsorted(cy, x[:, 1])), 1.0)
    closed = hist.cumsum(0).cumsum(1)  # counts with p <= (cx[a], cy[b])
    padded = np.zeros((cx.size + 1, cy.size + 1))
    padded[1:, 1:] = closed
    strict = padded[:-1, :-1]  # counts with p < (cx[a], cy[b]) per axis
    vol = cx[:, None] * cy[None, :]
    pos = np.max(closed / n - vol)
    neg = np.max(vol - strict / n)
    return float(max(pos, neg, 0.0))


def _linf_3d(x: np.ndarray) -> float:
    n = x.shape[0]
    cx = np.append(np.unique(x[:, 0]), 1.0)
    cy = np.append(np.unique(x[:, 1]), 1.0)
    cz = np.append(np.unique(x[:, 2]), 1.0)
    rx = np.searchsorted(cx, x[:, 0])
    ry = np.searchsorted(cy, x[:, 1])
    rz = np.searchsorted(cz, x[:, 2])
    vol2 = cx[:, None] * cy[None, :]
    hist = np.zeros((cx.size, cy.size))
    padded = np.zeros((cx.size + 1, cy.size + 1))
    best_pos = 0.0
    best_neg = 0.0
    # sweep the z candidates upward, keeping a 2D histogram of points below
    for zi, zc in enumerate(cz):
        strict2 = hist.cumsum(0).cumsum(1)  # z < zc at this moment
        padded[1:, 1:] = strict2
        best_neg = max(best_neg, float(np.max(vol2 * zc - padded[:-1, :-1] / n)))
        at_z = rz == zi
        if at_z.any():
            np.add.at(hist, (rx[at_z], ry[at_z]), 1.0)
        closed2 = hist.cumsum(0).cumsum(1)  # z <= zc
        best_pos = max(best_pos, float(np.max(closed2 / n - vol2 * zc)))
    return float(max(best_pos, best_neg, 0.0))


def linf_star_discrepancy(points) -> float:
    """Exact sup-norm star discrepancy by candidate-corner enumeration."""
    x = _as_points(points)
    n, d = x.shape
    if n > _LINF_MAX_N or d > _LINF_MAX_D:
        raise ValueError(
            f"exact sup-norm discrepancy is limited to n <= {_LINF_MAX_N}, "
            f"d <= {_LINF_MAX_D}; got n={n}, d={d}"
        )
    if d == 1:
        return _linf_1d(x[:, 0])
    if d == 2:
        return _linf_2d(x)
    return _linf_3d(x)


def stratified_linf_bound(n: int, d: int) -> float:
    """Worst-case sup-norm discrepancy of one-point-per-cell kd-partition sets."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    return 2.0 ** (d - 1) * d * n ** (-1.0 / d)


def mean_l2_discrepancy(
    spec: SamplerSpec, n: int, d: int, reps: int = 100, seed: int = 0
) -> float:
    """Mean L2 star discrepancy over ``reps`` independent realizations.

    Stochastic kinds are redrawn with per-rep sub-seeds; deterministic QMC
    kinds are randomized by per-rep Cranley-Patterson shifts.
    """
    if reps < 1:
        raise ValueError(f"need reps >= 1, got {reps}")
    values = []
    if spec.kind in ("halton", "sobol"):
        base = generate(SamplerSpec(spec.kind, spec.master_seed), n, d)
        for rep in range(reps):
            shifted = randomize_shift(base, derive_seed(seed, "shift_rep", rep))
            values.append(l2_star_discrepancy(shifted.points))
    else:
        for rep in range(reps):
            rep_spec = replace(spec, master_seed=derive_seed(seed, "rep", rep))
            values.append(l2_star_discrepancy(generate(rep_spec, n, d).points))
    return float(np.mean(values))
