"""Stateless counter-keyed random values.

Every value is a pure function of a 64-bit master seed plus integer
counters, so any one sample of a batch can be drawn alone, out of order,
or concurrently, and always comes out bit-identical.  The mixer is the
SplitMix64 finalizer applied once per counter.
"""

from __future__ import annotations

import hashlib

import numpy as np

_U64_MASK = 0xFFFFFFFFFFFFFFFF
_INDEX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_AXIS_GAMMA = np.uint64(0xD1B54A32D192ED03)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on uint64 data (arrays wrap mod 2**64)."""
    z = (z ^ (z >> np.uint64(30))) * _MUL1
    z = (z ^ (z >> np.uint64(27))) * _MUL2
    return z ^ (z >> np.uint64(31))


def uniform01(master_seed: int, index, axis) -> np.ndarray:
    """Uniform doubles in [0, 1) keyed by ``(master_seed, index, axis)``.

    ``index`` and ``axis`` may be scalars or broadcastable integer arrays;
    the result has the broadcast shape.  Each key maps to one fixed value,
    which is what makes batch generation order-independent.
    """
    idx = np.atleast_1d(np.asarray(index, dtype=np.uint64))
    ax = np.atleast_1d(np.asarray(axis, dtype=np.uint64))
    shape = np.broadcast_shapes(np.shape(index), np.shape(axis))
    z = np.uint64(master_seed & _U64_MASK) + (idx + np.uint64(1)) * _INDEX_GAMMA
    z = _mix(z)
    z = _mix(z + (ax + np.uint64(1)) * _AXIS_GAMMA)
    # 53 high bits -> double in [0, 1)
    out = (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return out.reshape(shape)


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit sub-seed for the stream labelled by ``parts``.

    blake2b based, so identical across processes and platforms (unlike
    ``hash()``, which is salted per process).  Labels are separated before
    hashing, so ("ab",) and ("a", "b") give unrelated seeds.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update((master_seed & _U64_MASK).to_bytes(8, "little"))
    for part in parts:
        h.update(str(part).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")
