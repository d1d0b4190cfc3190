"""Bessel functions of integral order, general solutions and zeros.

``Z_n(x) = a J_n(x) + b Y_n(x)`` is the object every other module integrates.
J_n and Y_n are built from four base functions (J0, J1, Y0, Y1):

* ``x <= 25``: the Cephes rational approximations shipped with scipy;
* ``x > 25``: Hankel's amplitude/phase expansion, with the phase
  ``cos(x - pi/4)`` expanded through ``cos x`` and ``sin x`` so that no
  argument reduction error of order ``eps * x`` is introduced.

Higher orders use the ascending series near the origin, forward recurrence
where ``n <= x`` and Miller's normalised backward recurrence elsewhere. Y_n
always uses forward recurrence, which is stable for the second kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DomainError, UnsupportedOrderError

__all__ = [
    "GeneralSolution",
    "BesselZero",
    "J_ONLY",
    "bessel_j",
    "bessel_y",
    "z_eval",
    "z_derivative",
    "z_triplet",
    "bessel_zero",
    "bessel_zeros",
]

_HANKEL_CUTOFF = 25.0
_HANKEL_TERMS = 40
_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class GeneralSolution:
    """Coefficients of ``Z_n = a J_n + b Y_n``."""

    a: float = 1.0
    b: float = 0.0

    @property
    def has_y(self) -> bool:
        return self.b != 0.0

    def __iter__(self):
        yield self.a
        yield self.b


J_ONLY = GeneralSolution(1.0, 0.0)


@dataclass(frozen=True)
class BesselZero:
    q: int
    p: int
    value: float

    def __float__(self) -> float:
        return self.value


def _hankel_coefficients(nu: int, count: int) -> np.ndarray:
    mu = 4.0 * nu * nu
    coeffs = np.empty(count)
    c = 1.0
    coeffs[0] = c
    for k in range(1, count):
        c *= (mu - (2 * k - 1) ** 2) / (k * 8.0)
        coeffs[k] = c
    return coeffs


_HANKEL_A = {nu: _hankel_coefficients(nu, _HANKEL_TERMS) for nu in (0, 1)}


def _hankel_pairs(nu: int, xmin: float) -> int:
    """Number of (P, Q) coefficient pairs needed for x >= xmin."""
    a = np.abs(_HANKEL_A[nu])
    k = np.arange(_HANKEL_TERMS)
    small = np.nonzero(a * float(xmin) ** (-k) < 1e-17)[0]
    last = int(small[small >= 2][0]) if small.size else _HANKEL_TERMS - 1
    return min(_HANKEL_TERMS // 2, last // 2 + 1)


def _hankel_pq(nu: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = _HANKEL_A[nu]
    inv = 1.0 / x
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    # P = sum (-1)^k a_{2k} x^{-2k},  Q = sum (-1)^k a_{2k+1} x^{-2k-1}
    inv2 = inv * inv
    for k in range(_hankel_pairs(nu, float(np.min(x))) - 1, -1, -1):
        sign = -1.0 if k % 2 else 1.0
        p = p * inv2 + sign * a[2 * k]
        q = q * inv2 + sign * a[2 * k + 1]
    return p, q * inv


def _large_x(nu: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(J_nu, Y_nu) for nu in {0, 1} and x > 25."""
    p, q = _hankel_pq(nu, x)
    c, s = np.cos(x), np.sin(x)
    if nu == 0:
        cos_chi = (c + s) * _SQRT_HALF
        sin_chi = (s - c) * _SQRT_HALF
    else:
        cos_chi = (s - c) * _SQRT_HALF
        sin_chi = -(s + c) * _SQRT_HALF
    amp = np.sqrt(2.0 / (math.pi * x))
    return amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)


def _base(nu: int, x: np.ndarray, kind: str) -> np.ndarray:
    small = {("j", 0): special.j0, ("j", 1): special.j1,
             ("y", 0): special.y0, ("y", 1): special.y1}[(kind, nu)]
    out = np.empty_like(x)
    lo = x <= _HANKEL_CUTOFF
    out[lo] = small(x[lo])
    hi = ~lo
    if hi.any():
        jv, yv = _large_x(nu, x[hi])
        out[hi] = jv if kind == "j" else yv
    return out


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr).astype(float, copy=True), arr.ndim == 0


def _finish(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def _series_j(n: int, x: np.ndarray) -> np.ndarray:
    y = -0.25 * x * x
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 40):
        term = term * y / (k * (n + k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    pre = np.ones_like(x)
    half = 0.5 * x
    for k in range(1, n + 1):
        pre *= half / k
    return pre * total


def _forward_j(n: int, x: np.ndarray) -> np.ndarray:
    jm, jk = _base(0, x, "j"), _base(1, x, "j")
    for k in range(1, n):
        jm, jk = jk, (2.0 * k / x) * jk - jm
    return jk


def _miller_j(n: int, x: np.ndarray) -> np.ndarray:
    top = max(n, float(np.max(x)))
    start = 2 * ((int(top) + 16 + int(math.sqrt(150.0 * top))) // 2)
    big, tiny = 1e250, 1e-250
    jp = np.zeros_like(x)
    jk = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    result = np.zeros_like(x)
    for k in range(start, 0, -1):
        jm = (2.0 * k / x) * jk - jp
        jp, jk = jk, jm
        # jk now holds the order k-1 value
        if k - 1 == n:
            result = jk.copy()
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * jk
        over = np.abs(jk) > big
        if over.any():
            jk = np.where(over, jk * tiny, jk)
            jp = np.where(over, jp * tiny, jp)
            norm = np.where(over, norm * tiny, norm)
            result = np.where(over, result * tiny, result)
    norm += jk
    return result / norm


def _jn_nonneg(n: int, x: np.ndarray) -> np.ndarray:
    if n <= 1:
        out = np.empty_like(x)
        zero = x == 0.0
        out[zero] = 1.0 if n == 0 else 0.0
        nz = ~zero
        out[nz] = _base(n, x[nz], "j")
        return out
    out = np.empty_like(x)
    series = x * x <= 4.0 * (n + 1)
    forward = ~series & (x >= n)
    miller = ~series & ~forward
    if series.any():
        out[series] = _series_j(n, x[series])
    if forward.any():
        out[forward] = _forward_j(n, x[forward])
    if miller.any():
        out[miller] = _miller_j(n, x[miller])
    return out


def _yn_nonneg(n: int, x: np.ndarray) -> np.ndarray:
    y0 = _base(0, x, "y")
    if n == 0:
        return y0
    y1 = _base(1, x, "y")
    for k in range(1, n):
        y0, y1 = y1, (2.0 * k / x) * y1 - y0
    return y1


def _reflect(n: int, values: np.ndarray) -> np.ndarray:
    return -values if (n < 0 and n % 2) else values


def bessel_j(n: int, x):
    """J_n(x) for integral ``n`` and ``x >= 0``; accepts scalars or arrays."""
    n = int(n)
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j: argument must be finite")
    if np.any(arr < 0.0):
        raise DomainError("bessel_j: negative argument")
    return _finish(_reflect(n, _jn_nonneg(abs(n), arr)), scalar)


def bessel_y(n: int, x):
    """Y_n(x) for integral ``n`` and ``x > 0``."""
    n = int(n)
    arr, scalar = _as_array(x)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_y: argument must be finite")
    if np.any(arr <= 0.0):
        raise DomainError("bessel_y: Y_n diverges for x <= 0")
    return _finish(_reflect(n, _yn_nonneg(abs(n), arr)), scalar)


def z_eval(sol: GeneralSolution, n: int, scale: float, x):
    """``a J_n(scale x) + b Y_n(scale x)``. The Y term is skipped when b == 0."""
    arr, scalar = _as_array(x)
    arg = scale * arr
    out = sol.a * bessel_j(n, arg) if sol.a != 0.0 else np.zeros_like(arg)
    if sol.b != 0.0:
        out = out + sol.b * bessel_y(n, arg)
    return _finish(out, scalar)


def z_derivative(sol: GeneralSolution, n: int, scale: float, x):
    """d/dx Z_n(scale x) = (scale/2) (Z_{n-1} - Z_{n+1})."""
    zm = z_eval(sol, n - 1, scale, x)
    zp = z_eval(sol, n + 1, scale, x)
    return 0.5 * scale * (zm - zp)


def z_triplet(sol: GeneralSolution, n: int, scale: float, x):
    """(Z_{n-1}, Z_n, Z_{n+1}) at ``scale * x``."""
    return (z_eval(sol, n - 1, scale, x), z_eval(sol, n, scale, x),
            z_eval(sol, n + 1, scale, x))


def _mcmahon(q: int, p: np.ndarray) -> np.ndarray:
    beta = (p + 0.5 * q - 0.25) * math.pi
    mu = 4.0 * q * q
    b8 = 8.0 * beta
    return (beta - (mu - 1) / b8
            - 4 * (mu - 1) * (7 * mu - 31) / (3 * b8 ** 3)
            - 32 * (mu - 1) * (83 * mu ** 2 - 982 * mu + 3779) / (15 * b8 ** 5))


def _jq_and_slope(q: int, x: np.ndarray):
    j0 = bessel_j(0, x)
    j1 = bessel_j(1, x)
    if q == 0:
        return j0, -j1
    return j1, j0 - j1 / x


@lru_cache(maxsize=8)
def _zero_table(q: int, count: int) -> tuple[float, ...]:
    p = np.arange(1, count + 1, dtype=float)
    seed = _mcmahon(q, p)
    lo, hi = seed - 1.0, seed + 1.0
    flo, _ = _jq_and_slope(q, lo)
    x = seed.copy()
    for _ in range(60):
        f, df = _jq_and_slope(q, x)
        # shrink the bracket around the sign change
        same = np.sign(f) == np.sign(flo)
        lo = np.where(same, x, lo)
        flo = np.where(same, f, flo)
        hi = np.where(same, hi, x)
        step = f / df
        newton = x - step
        bad = (newton <= lo) | (newton >= hi) | ~np.isfinite(newton)
        nxt = np.where(bad, 0.5 * (lo + hi), newton)
        done = np.abs(nxt - x) <= 4e-16 * x
        x = nxt
        if np.all(done):
            break
    # final polish: pick the best of the neighbouring doubles
    cands = np.stack([np.nextafter(x, -np.inf), x, np.nextafter(x, np.inf)])
    vals = np.abs(bessel_j(q, cands.ravel()).reshape(cands.shape))
    x = cands[np.argmin(vals, axis=0), np.arange(count)]
    return tuple(float(v) for v in x)


def _check_q(q: int) -> int:
    if q not in (0, 1):
        raise UnsupportedOrderError(f"zeros are provided for orders 0 and 1, got {q}")
    return int(q)


def bessel_zeros(q: int, count: int) -> np.ndarray:
    """The first ``count`` positive zeros of J_q as a read-only array."""
    q = _check_q(q)
    if count < 1:
        return np.empty(0)
    size = 1 << max(6, (count - 1).bit_length())
    out = np.array(_zero_table(q, size)[:count])
    out.flags.writeable = False
    return out


def bessel_zero(q: int, p: int) -> BesselZero:
    """The ``p``-th positive zero j_{q,p} of J_q (q in {0, 1}, p >= 1)."""
    q = _check_q(q)
    if p < 1:
        raise DomainError("zero index p must be >= 1")
    return BesselZero(q, int(p), float(bessel_zeros(q, p)[p - 1]))
