"""Equal-volume kd partition of [0, 1]^d and jittered sampling from its cells.

For any stratum count ``n`` and dimension ``d`` the unit cube is split
recursively by axis-aligned planes, cycling through the axes starting at
axis 0.  A node responsible for ``N`` strata sends ``ceil(N/2)`` of them to
its lower child and ``floor(N/2)`` to its upper child, with the split plane
placed at fraction ``ceil(N/2)/N`` of the node's current extent, so every
one of the ``n`` leaves encloses volume exactly ``1/n``.  When
``n = 2**(k*d)`` the leaves coincide with the regular grid of ``2**k``
cells per axis.

Cell indexing consumes the bits of the sample index least-significant
first: bit ``t`` selects the lower (0) or upper (1) child at depth ``t``.
The bounds of any single cell therefore follow from its index alone in
O(log n) time -- no tree is built or stored -- and jittered samples can be
drawn independently, in any order, on any number of workers, with
bit-identical results.

Cells are half-open, ``[lower, upper)`` on each axis, except that an upper
bound of 1 is closed; the cells then tile the cube exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .rng import uniform01


@dataclass(frozen=True)
class CellBounds:
    """Axis-aligned bounds of one stratum, half-open except at the top face."""

    lower: np.ndarray
    upper: np.ndarray

    @property
    def d(self) -> int:
        return self.lower.shape[0]

    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def contains(self, x) -> bool:
        """Half-open membership test; the cube's top face counts as inside."""
        x = np.asarray(x, dtype=float)
        below_top = (x < self.upper) | ((self.upper == 1.0) & (x <= 1.0))
        return bool(np.all(x >= self.lower) & np.all(below_top))


def _check_partition(n: int, d: int, i: int | None = None) -> None:
    if n < 1:
        raise ValueError(f"stratum count must be positive, got n={n}")
    if d < 1:
        raise ValueError(f"dimension must be positive, got d={d}")
    if i is not None and not 0 <= i < n:
        raise ValueError(f"cell index {i} out of range for {n} strata")


def cell_bounds(n: int, d: int, i: int) -> CellBounds:
    """Bounds of cell ``i`` of the ``n``-way partition, in O(log n) time."""
    _check_partition(n, d, i)
    lower, upper = batch_cell_bounds(n, d, np.array([i], dtype=np.int64))
    return CellBounds(lower[0], upper[0])


def batch_cell_bounds(n: int, d: int, indices=None):
    """Bounds for many cells at once.

    Performs the same floating-point operations in the same order as the
    single-cell path, so results are bit-identical for any index subset.
    Returns ``(lower, upper)`` arrays of shape ``(len(indices), d)``;
    ``indices=None`` means all of ``0..n-1``.
    """
    _check_partition(n, d)
    if indices is None:
        idx = np.arange(n, dtype=np.int64)
    else:
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise ValueError(f"cell index out of range for {n} strata")
    k = idx.shape[0]
    lower = np.zeros((k, d))
    upper = np.ones((k, d))
    n_rem = np.full(k, n, dtype=np.int64)
    t = 0
    m = 0
    while True:
        active = n_rem > 1
        if not active.any():
            break
        half = (n_rem + 1) // 2  # strata handed to the lower child
        cut = (upper[:, m] - lower[:, m]) * half / n_rem + lower[:, m]
        high_side = active & (((idx >> t) & 1) == 1)
        low_side = active & ~high_side
        upper[low_side, m] = cut[low_side]
        lower[high_side, m] = cut[high_side]
        n_rem = np.where(low_side, half, np.where(high_side, n_rem - half, n_rem))
        t += 1
        m = (m + 1) % d
    return lower, upper


def exact_cell_bounds(n: int, d: int, i: int):
    """Cell bounds in exact rational arithmetic.

    Shadow of :func:`cell_bounds` used for verification and for pretty
    printing; returns ``(lower, upper)`` tuples of :class:`Fraction`.
    """
    _check_partition(n, d, i)
    lower = [Fraction(0)] * d
    upper = [Fraction(1)] * d
    n_rem = n
    t = 0
    m = 0
    while n_rem > 1:
        half = (n_rem + 1) // 2
        cut = lower[m] + (upper[m] - lower[m]) * half / n_rem
        if (i >> t) & 1:
            lower[m] = cut
            n_rem -= half
        else:
            upper[m] = cut
            n_rem = half
        t += 1
        m = (m + 1) % d
    return tuple(lower), tuple(upper)


def all_cell_bounds(n: int, d: int):
    """All ``n`` cells in index order via one linear-time recursive sweep.

    Equivalent to ``batch_cell_bounds(n, d)`` (bit-identical, same split
    arithmetic) but visits each tree node once instead of replaying the
    root-to-leaf path per cell.  Even local indices go to the lower child,
    odd to the upper, matching the LSB-first bit convention.
    """
    _check_partition(n, d)
    lower = np.zeros((n, d))
    upper = np.ones((n, d))

    def fill(lo, hi, axis, n_rem, offset, stride):
        if n_rem == 1:
            lower[offset] = lo
            upper[offset] = hi
            return
        half = (n_rem + 1) // 2
        cut = (hi[axis] - lo[axis]) * half / n_rem + lo[axis]
        low_hi = hi.copy()
        low_hi[axis] = cut
        fill(lo, low_hi, (axis + 1) % d, half, offset, stride * 2)
        high_lo = lo.copy()
        high_lo[axis] = cut
        fill(high_lo, hi, (axis + 1) % d, n_rem - half, offset + stride, stride * 2)

    fill([0.0] * d, [1.0] * d, 0, n, 0, 1)
    return lower, upper


def jittered_points(n: int, d: int, master_seed: int = 0, indices=None) -> np.ndarray:
    """One uniform point inside each requested cell of the partition.

    The jitter for ``(cell, axis)`` depends only on
    ``(master_seed, cell, axis)``, so any subset of cells, in any order,
    yields the same coordinates as the full batch.
    """
    _check_partition(n, d)
    if indices is None:
        idx = np.arange(n, dtype=np.int64)
    else:
        idx = np.asarray(indices, dtype=np.int64)
    lower, upper = batch_cell_bounds(n, d, idx)
    u = uniform01(master_seed, idx[:, None], np.arange(d)[None, :])
    pts = lower + (upper - lower) * u
    # rounding can land exactly on the excluded top face; fold it back inside
    np.minimum(pts, np.nextafter(upper, 0.0), out=pts)
    return pts


def locate_cell(points, n: int) -> np.ndarray:
    """Index of the cell that contains each point (half-open convention).

    Descends the implicit tree once per point, mirroring the split
    arithmetic of :func:`batch_cell_bounds` exactly, so a point generated
    in cell ``i`` always locates back to ``i``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    k, d = pts.shape
    _check_partition(n, d)
    lower = np.zeros((k, d))
    upper = np.ones((k, d))
    n_rem = np.full(k, n, dtype=np.int64)
    out = np.zeros(k, dtype=np.int64)
    t = 0
    m = 0
    while True:
        active = n_rem > 1
        if not active.any():
            break
        half = (n_rem + 1) // 2
        cut = (upper[:, m] - lower[:, m]) * half / n_rem + lower[:, m]
        high_side = active & (pts[:, m] >= cut)
        low_side = active & ~high_side
        upper[low_side, m] = cut[low_side]
        lower[high_side, m] = cut[high_side]
        out |= high_side.astype(np.int64) << t
        n_rem = np.where(low_side, half, np.where(high_side, n_rem - half, n_rem))
        t += 1
        m = (m + 1) % d
    return out
