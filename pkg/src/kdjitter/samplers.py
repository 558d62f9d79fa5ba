"""Point-set generators on the unit hypercube.

One entry point, :func:`generate`, dispatches on a :class:`SamplerSpec`:

``random``            i.i.d. uniform points
``jittered_grid``     one uniform point per cell of a k x ... x k grid (n = k**d)
``lhs``               Latin hypercube: per-axis bin permutations, uniform in-bin
``halton``            radical inverses in the first d prime bases (unscrambled)
``sobol``             binary Sobol sequence, natural order, published
                      direction-number table (up to 21 dimensions)
``kdt``               jittered equal-volume kd partition (any n, any d)
``kdt_2d_pad``        independent 2D kd sets on axis pairs, shuffled per block
``jittered_2d_pad``   same padding with 2D jittered grids (n must be square)

QMC sequences are deterministic; for variance studies wrap them with
:func:`randomize_shift` (Cranley-Patterson rotation) or request
``randomization="shift"`` in the spec.  All stochastic kinds are fully
reproducible from ``master_seed``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kdtree import jittered_points
from .rng import derive_seed

KINDS = (
    "random",
    "jittered_grid",
    "lhs",
    "halton",
    "sobol",
    "kdt",
    "kdt_2d_pad",
    "jittered_2d_pad",
)
_QMC_KINDS = ("halton", "sobol")


@dataclass(frozen=True)
class SamplerSpec:
    """What to sample: kind, master seed, and optional QMC randomization."""

    kind: str
    master_seed: int = 0
    randomization: str = "none"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown sampler kind {self.kind!r}; choose from {KINDS}")
        if self.randomization not in ("none", "shift"):
            raise ValueError(f"unknown randomization {self.randomization!r}")
        if self.randomization == "shift" and self.kind not in _QMC_KINDS:
            raise ValueError("shift randomization applies to halton/sobol only")

    @property
    def label(self) -> str:
        return self.kind + ("+shift" if self.randomization == "shift" else "")


@dataclass(frozen=True)
class SampleSet:
    """An (n, d) array of points in [0, 1) plus the spec that produced it."""

    points: np.ndarray
    spec: SamplerSpec

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


# --------------------------------------------------------------------------
# deterministic low-discrepancy sequences


def _primes(count: int) -> list[int]:
    """The first ``count`` primes (trial division; count stays small here)."""
    primes: list[int] = []
    cand = 2
    while len(primes) < count:
        if all(cand % p for p in primes if p * p <= cand):
            primes.append(cand)
        cand += 1 if cand == 2 else 2
    return primes


def _radical_inverse(i: int, base: int) -> float:
    f = 1.0 / base
    r = 0.0
    while i > 0:
        i, digit = divmod(i, base)
        r += digit * f
        f /= base
    return r


def halton_point(i: int, d: int) -> np.ndarray:
    """Point ``i`` of the d-dimensional Halton sequence, O(log i) per axis."""
    if i < 0:
        raise ValueError(f"sequence index must be nonnegative, got {i}")
    if d < 1:
        raise ValueError(f"dimension must be positive, got d={d}")
    return np.array([_radical_inverse(i, b) for b in _primes(d)])


def _halton_batch(indices, d: int) -> np.ndarray:
    """Vectorized Halton; digit loop mirrors the scalar path bit-for-bit."""
    idx = np.asarray(indices, dtype=np.int64)
    pts = np.empty((idx.size, d))
    for axis, base in enumerate(_primes(d)):
        i = idx.copy()
        r = np.zeros(idx.size)
        f = 1.0 / base
        while (i > 0).any():
            r += (i % base) * f
            i //= base
            f /= base
        pts[:, axis] = r
    return pts


# First 20 rows (dimensions 2..21) of the published Joe-Kuo D6 direction
# number table: (degree s, coefficient bits a, initial m values).
# Dimension 1 is the van der Corput sequence (all m = 1).
_SOBOL_DIRECTIONS = (
    (1, 0, (1,)),
    (2, 1, (1, 3)),
    (3, 1, (1, 3, 1)),
    (3, 2, (1, 1, 1)),
    (4, 1, (1, 1, 3, 3)),
    (4, 4, (1, 3, 5, 13)),
    (5, 2, (1, 1, 5, 5, 17)),
    (5, 4, (1, 1, 5, 5, 5)),
    (5, 7, (1, 1, 7, 11, 19)),
    (5, 11, (1, 1, 5, 1, 1)),
    (5, 13, (1, 1, 1, 3, 11)),
    (5, 14, (1, 3, 5, 5, 31)),
    (6, 1, (1, 3, 3, 9, 7, 49)),
    (6, 13, (1, 1, 1, 15, 21, 21)),
    (6, 16, (1, 3, 1, 13, 27, 49)),
    (6, 19, (1, 1, 1, 15, 7, 5)),
    (6, 22, (1, 3, 1, 15, 13, 25)),
    (6, 25, (1, 1, 5, 5, 19, 61)),
    (7, 1, (1, 3, 7, 11, 23, 15, 103)),
    (7, 4, (1, 3, 7, 13, 13, 15, 69)),
)
SOBOL_MAX_DIM = len(_SOBOL_DIRECTIONS) + 1
_SOBOL_BITS = 52  # fractional bits; max index 2**52 keeps doubles exact


def _direction_ints(dim: int, nbits: int) -> np.ndarray:
    """Direction integers v_1..v_nbits for 0-based ``dim``, as int64."""
    if dim == 0:
        m = [1] * nbits
    else:
        s, a, m_init = _SOBOL_DIRECTIONS[dim - 1]
        m = list(m_init[:nbits])
        while len(m) < nbits:
            k = len(m)
            new = m[k - s] ^ (m[k - s] << s)
            for j in range(1, s):
                if (a >> (s - 1 - j)) & 1:
                    new ^= m[k - j] << j
            m.append(new)
    return np.array(
        [mi << (_SOBOL_BITS - i) for i, mi in enumerate(m, start=1)], dtype=np.int64
    )


def _sobol_batch(indices, d: int) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.int64)
    if d < 1 or d > SOBOL_MAX_DIM:
        raise ValueError(
            f"sobol direction table covers 1..{SOBOL_MAX_DIM} dimensions, got d={d}"
        )
    if idx.size and (idx.min() < 0 or idx.max() >= 1 << _SOBOL_BITS):
        raise ValueError(f"sequence index out of range [0, 2**{_SOBOL_BITS})")
    nbits = max(1, int(idx.max()).bit_length()) if idx.size else 1
    out = np.zeros((idx.size, d), dtype=np.int64)
    for axis in range(d):
        v = _direction_ints(axis, nbits)
        acc = np.zeros(idx.size, dtype=np.int64)
        for bit in range(nbits):
            hit = ((idx >> bit) & 1).astype(bool)
            acc[hit] ^= v[bit]
        out[:, axis] = acc
    # dyadic rationals with <= 52 bits: the division below is exact
    return out * 2.0**-_SOBOL_BITS


def sobol_point(i: int, d: int) -> np.ndarray:
    """Point ``i`` of the d-dimensional Sobol sequence (natural order)."""
    if i < 0:
        raise ValueError(f"sequence index must be nonnegative, got {i}")
    return _sobol_batch(np.array([i], dtype=np.int64), d)[0]


# --------------------------------------------------------------------------
# stochastic point sets


def _perfect_root(n: int, d: int) -> int:
    k = round(n ** (1.0 / d))
    for cand in (k - 1, k, k + 1):
        if cand >= 1 and cand**d == n:
            return cand
    raise ValueError(f"jittered grid needs n = k**d; n={n} is not a perfect {d}-th power")


def _jittered_grid(n: int, d: int, seed: int) -> np.ndarray:
    k = _perfect_root(n, d)
    cells = np.indices((k,) * d).reshape(d, -1).T
    rng = np.random.default_rng(derive_seed(seed, "jittered_grid"))
    return (cells + rng.random((n, d))) / k


def _latin_hypercube(n: int, d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(derive_seed(seed, "lhs"))
    pts = np.empty((n, d))
    for axis in range(d):
        pts[:, axis] = (rng.permutation(n) + rng.random(n)) / n
    return pts


def latin_hypercube(n: int, d: int, master_seed: int = 0) -> SampleSet:
    """Latin hypercube sample: every axis has exactly one point per 1/n bin."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    return SampleSet(_latin_hypercube(n, d, master_seed), SamplerSpec("lhs", master_seed))


def _pad_2d_points(base_kind: str, n: int, d: int, seed: int) -> np.ndarray:
    pts = np.empty((n, d))
    for block in range((d + 1) // 2):
        lo_axis = 2 * block
        block_d = 2 if lo_axis + 1 < d else 1
        block_seed = derive_seed(seed, "pad", block)
        if base_kind == "kdt":
            coords = jittered_points(n, block_d, block_seed)
        else:
            coords = _jittered_grid(n, block_d, block_seed)
        perm = np.random.default_rng(derive_seed(seed, "pad_perm", block)).permutation(n)
        pts[:, lo_axis : lo_axis + block_d] = coords[perm]
    return pts


def pad_2d(base_kind: str, n: int, d: int, master_seed: int = 0) -> SampleSet:
    """Higher-dimensional set padded from independent 2D sets on axis pairs.

    Axes are grouped (0,1), (2,3), ...; each pair gets its own 2D set of
    ``base_kind`` ("kdt" or "jittered_grid"), independently seeded and
    independently shuffled so points are matched at random across blocks.
    An unpaired trailing axis gets a 1D n-way stratified set.
    """
    if base_kind not in ("kdt", "jittered_grid"):
        raise ValueError(f"pad base must be 'kdt' or 'jittered_grid', got {base_kind!r}")
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    kind = "kdt_2d_pad" if base_kind == "kdt" else "jittered_2d_pad"
    return SampleSet(_pad_2d_points(base_kind, n, d, master_seed), SamplerSpec(kind, master_seed))


# --------------------------------------------------------------------------


def apply_shift(sample_set: SampleSet, shift) -> SampleSet:
    """Translate every point by ``shift``, wrapping around the unit torus."""
    shift = np.asarray(shift, dtype=float)
    pts = np.mod(sample_set.points + shift, 1.0)
    return SampleSet(pts, sample_set.spec)


def randomize_shift(sample_set: SampleSet, seed: int) -> SampleSet:
    """Cranley-Patterson rotation by one uniform vector drawn from ``seed``."""
    shift = np.random.default_rng(derive_seed(seed, "cp")).random(sample_set.d)
    return apply_shift(sample_set, shift)


def generate(spec: SamplerSpec, n: int, d: int) -> SampleSet:
    """Draw the n-point, d-dimensional set described by ``spec``."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    kind, seed = spec.kind, spec.master_seed
    if kind == "random":
        pts = np.random.default_rng(derive_seed(seed, "random")).random((n, d))
    elif kind == "jittered_grid":
        pts = _jittered_grid(n, d, seed)
    elif kind == "lhs":
        pts = _latin_hypercube(n, d, seed)
    elif kind == "halton":
        pts = _halton_batch(np.arange(n), d)
    elif kind == "sobol":
        pts = _sobol_batch(np.arange(n), d)
    elif kind == "kdt":
        pts = jittered_points(n, d, seed)
    elif kind == "kdt_2d_pad":
        pts = _pad_2d_points("kdt", n, d, seed)
    else:  # jittered_2d_pad
        pts = _pad_2d_points("jittered_grid", n, d, seed)
    out = SampleSet(pts, spec)
    if spec.randomization == "shift":
        out = randomize_shift(out, derive_seed(seed, "cp_base"))
    return out
