"""Exact polynomial convolution mod p via one big-integer multiply.

Coefficients are packed into fixed-width lanes of a single arbitrary
precision integer (gmpy2 mpz when available); integer multiplication then
performs the whole convolution exactly.  A lane-overflow bound is checked
up front, so there is no wraparound and no floating point anywhere.
numpy is used purely to move lane buffers around.
"""

from __future__ import annotations

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    def mpz(x):
        return x

LANE_BYTES = 8
_DTYPE = np.uint64
_LANE_MAX = 2**64 - 1


def conv_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Full linear convolution of two nonnegative integer arrays (entries
    < p), reduced mod p.  Shape of the result: a.shape + b.shape - 1."""
    shape = tuple(sa + sb - 1 for sa, sb in zip(a.shape, b.shape))
    overlap = 1
    for sa, sb in zip(a.shape, b.shape):
        overlap *= min(sa, sb)
    if overlap * (p - 1) ** 2 > _LANE_MAX:
        raise OverflowError("convolution lanes would overflow")

    def pack(arr):
        box = np.zeros(shape, dtype=_DTYPE)
        box[tuple(slice(0, s) for s in arr.shape)] = arr
        return mpz(int.from_bytes(box.tobytes(), "little"))

    prod = pack(a) * pack(b)
    nlanes = int(np.prod(shape))
    buf = int(prod).to_bytes(nlanes * LANE_BYTES + LANE_BYTES, "little")
    out = np.frombuffer(buf[: nlanes * LANE_BYTES], dtype=_DTYPE).reshape(shape)
    return (out % p).astype(_DTYPE)


def weighted_degree_grid(shape, weights) -> np.ndarray:
    """Array g with g[e] = sum_i e_i * w_i over the index box."""
    g = np.zeros(shape, dtype=np.int64)
    for axis, (s, w) in enumerate(zip(shape, weights)):
        idx = [1] * len(shape)
        idx[axis] = s
        g = g + (w * np.arange(s, dtype=np.int64)).reshape(idx)
    return g
