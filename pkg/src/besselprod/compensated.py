"""Error-free transformations and compensated reductions (vectorised).

``sum2`` and ``dot2`` follow Ogita, Rump and Oishi: the result is as accurate
as if computed in twice the working precision and then rounded.
"""

from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = al * bl - (((p - ah * bh) - al * bh) - ah * bl)
    return p, err


def sum2(values, axis=-1):
    """Compensated sum along ``axis``."""
    v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    s = np.zeros(v.shape[:-1])
    c = np.zeros(v.shape[:-1])
    for i in range(v.shape[-1]):
        s, e = two_sum(s, v[..., i])
        c = c + e
    return s + c


def dot2(weights, values):
    """Compensated ``values @ weights`` along the last axis of ``values``."""
    w = np.asarray(weights, dtype=float)
    v = np.asarray(values, dtype=float)
    s, c = two_prod(v[..., 0], w[0])
    for i in range(1, v.shape[-1]):
        p, pe = two_prod(v[..., i], w[i])
        s, se = two_sum(s, p)
        c = c + (pe + se)
    return s + c


def exact_sum(values) -> float:
    """Correctly rounded sum of a 1-D sequence (Shewchuk expansions via math.fsum)."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())
