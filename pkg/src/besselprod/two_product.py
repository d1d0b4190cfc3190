"""Closed-form antiderivatives for products of two general Bessel solutions.

Every ``*_antideriv`` function returns the right-hand side evaluated at a
single point ``x``; a definite integral over [x0, x1] is the difference of two
such evaluations (see :func:`definite`).  Factors at scale ``alpha`` use
``solA`` and factors at scale ``beta`` use ``solB``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bessel_core import J_ONLY, GeneralSolution, bessel_j, bessel_y, z_derivative, z_eval
from .errors import DegeneracyError, PreconditionError
from .quadrature import Factor, ProductIntegralSpec, integrate

DEGENERACY_REL = 1e-6


def _z(sol, n, s, x):
    return z_eval(sol, n, s, x)


def is_degenerate(alpha: float, beta: float) -> bool:
    return abs(alpha - beta) < DEGENERACY_REL * max(abs(alpha), abs(beta))


def _check_distinct(alpha, beta, hint, guard=True):
    if guard and is_degenerate(alpha, beta):
        raise DegeneracyError(
            f"scales {alpha!r} and {beta!r} are too close for the alpha != beta form; use {hint}")


def definite(antideriv, x0, x1, *args, **kwargs):
    """``antideriv(..., x1) - antideriv(..., x0)`` with the point as last argument."""
    return antideriv(*args, x1, **kwargs) - antideriv(*args, x0, **kwargs)


@dataclass(frozen=True)
class TwoProductParams:
    alpha: float
    beta: float
    n: int = 0
    solA: GeneralSolution = J_ONLY
    solB: GeneralSolution = J_ONLY

    def swapped(self) -> "TwoProductParams":
        return TwoProductParams(self.beta, self.alpha, self.n, self.solB, self.solA)


# -- general cross integrals -------------------------------------------------

def lommel_cross_antideriv(p, q, alpha, beta, solA, solB, x):
    """Antiderivative of [(alpha^2 - beta^2) x - (p^2 - q^2)/x] U_p(alpha x) V_q(beta x)."""
    up, up1 = _z(solA, p, alpha, x), _z(solA, p - 1, alpha, x)
    vq, vq1 = _z(solB, q, beta, x), _z(solB, q - 1, beta, x)
    return beta * x * up * vq1 - alpha * x * up1 * vq + (p - q) * up * vq


def same_order_cross_antideriv(params: TwoProductParams, x, form: str = "pair",
                               guard: bool = True):
    """Antiderivative of x Z_n(alpha x) Z_n(beta x) for alpha != beta.

    ``form="pair"`` uses the Z_{n-1} combination; ``form="derivative"`` the
    Wronskian-like combination of first derivatives.  Both are equal.
    """
    a, b, n = params.alpha, params.beta, params.n
    _check_distinct(a, b, "same_scale_norm_antideriv", guard)
    d = a * a - b * b
    if form == "pair":
        return (b * x * _z(params.solA, n, a, x) * _z(params.solB, n - 1, b, x)
                - a * x * _z(params.solA, n - 1, a, x) * _z(params.solB, n, b, x)) / d
    if form == "derivative":
        return x * (_z(params.solA, n, a, x) * z_derivative(params.solB, n, b, x)
                    - _z(params.solB, n, b, x) * z_derivative(params.solA, n, a, x)) / d
    raise ValueError(f"unknown form {form!r}")


def same_scale_norm_antideriv(params: TwoProductParams, x):
    """Antiderivative of x Z_n(alpha x)^2 (beta is ignored)."""
    a, n, sol = params.alpha, params.n, params.solA
    return 0.5 * x * x * (_z(sol, n, a, x) ** 2 - _z(sol, n - 1, a, x) * _z(sol, n + 1, a, x))


def norm_n0_antideriv(alpha, sol, x):
    """x^2/2 [Z_0^2 + Z_1^2]; the n = 0 case of the same-scale norm."""
    return 0.5 * x * x * (_z(sol, 0, alpha, x) ** 2 + _z(sol, 1, alpha, x) ** 2)


def norm_n1_antideriv(alpha, sol, x):
    """x^2/2 [Z_1^2 + Z_0^2] - (x/alpha) Z_0 Z_1; the n = 1 case."""
    z0, z1 = _z(sol, 0, alpha, x), _z(sol, 1, alpha, x)
    return 0.5 * x * x * (z1 * z1 + z0 * z0) - x * z0 * z1 / alpha


def annulus_eigenvalues(n: int, A: float, count: int, start: float = 1e-3):
    """First ``count`` eigenvalues alpha with Z_n(alpha) = Z_n(alpha A) = 0.

    Returns ``[(alpha, GeneralSolution), ...]`` with (a, b) normalised to unit
    length.  Roots of the cross product J_n(a)Y_n(aA) - J_n(aA)Y_n(a) are
    bracketed on a grid finer than the asymptotic spacing pi/(A - 1).
    """
    if A <= 1:
        raise ValueError("outer radius ratio A must exceed 1")

    def cross(a):
        return bessel_j(n, a) * bessel_y(n, a * A) - bessel_j(n, a * A) * bessel_y(n, a)

    step = math.pi / (A - 1) / 16
    out = []
    lo = max(start, 0.05)
    flo = cross(lo)
    while len(out) < count:
        hi = lo + step
        fhi = cross(hi)
        if flo == 0.0 or flo * fhi < 0:
            r = lo if flo == 0.0 else brentq(cross, lo, hi, xtol=1e-15, maxiter=200)
            ja, ya = bessel_j(n, r), bessel_y(n, r)
            norm = math.hypot(ja, ya)
            out.append((r, GeneralSolution(ya / norm, -ja / norm)))
        lo, flo = hi, fhi
    return out


def orthogonality_norm(params: TwoProductParams, A: float, tol: float = 1e-6):
    """Integral of x Z_n(alpha x) Z_n(beta x) over [1, A] for annulus eigenfunctions.

    The diagonal value is the equal-scale limit
    (1/(2 alpha^2)) [A^2 Z_n'(alpha A)^2 - Z_n'(alpha)^2] with ' = d/dx.
    Distinct eigenvalues give exactly 0.
    """
    a, b, n = params.alpha, params.beta, params.n
    for s, sol in ((a, params.solA), (b, params.solB)):
        size = max(abs(sol.a), abs(sol.b), 1e-300)
        worst = max(abs(_z(sol, n, s, 1.0)), abs(_z(sol, n, s, A))) / size
        if worst > tol:
            raise PreconditionError(
                f"Z_{n} does not vanish at both radii for scale {s!r} (|Z| = {worst:.2e})")
    if not is_degenerate(a, b):
        return 0.0
    sol = params.solA
    dA = z_derivative(sol, n, a, A)
    d1 = z_derivative(sol, n, a, 1.0)
    return (A * A * dA * dA - d1 * d1) / (2.0 * a * a)


# -- recurrences and moments --------------------------------------------------

def norm_recurrence_step(n, alpha, sol, x0, x1, lower):
    """Integral of x Z_{n+1}^2 over [x0, x1] from the one of x Z_{n-1}^2."""
    zn1, zn0 = _z(sol, n, alpha, x1), _z(sol, n, alpha, x0)
    return lower - (2.0 * n / alpha ** 2) * (zn1 * zn1 - zn0 * zn0)


def x3_difference_antideriv(alpha, sol, x):
    """Antiderivative of x^3 [Z_0^2 - Z_1^2]."""
    z0, z1 = _z(sol, 0, alpha, x), _z(sol, 1, alpha, x)
    return x ** 3 * z1 * z0 / alpha - x * x * z1 * z1 / alpha ** 2


def _oracle(power, factors, x0, x1, **kw):
    if x1 == x0:
        return 0.0
    spec = ProductIntegralSpec(power, tuple(Factor(*f) for f in factors), (x0, x1))
    return integrate(spec, **kw).value


def moment_p_relation_residual(p, alpha, sol, x0, x1):
    """LHS - RHS of the x^p Z_1^2 moment relation, integrals by quadrature.

    The d[x Z_1]^2 term is rewritten as 2 alpha x^{p-1} Z_1 Z_0 dx.  For p = 3
    that integral has the closed form x^2 Z_1^2 / (2 alpha) and the relation
    collapses to :func:`x3_difference_antideriv`.
    """
    if p < 1:
        raise ValueError("moment relation needs p >= 1")
    lhs = _oracle(p, [(1, alpha, sol), (1, alpha, sol)], x0, x1)
    z1 = lambda x: _z(sol, 1, alpha, x)  # noqa: E731
    z0 = lambda x: _z(sol, 0, alpha, x)  # noqa: E731
    boundary = -(x1 ** p * z1(x1) * z0(x1) - x0 ** p * z1(x0) * z0(x0)) / alpha
    if p == 1:
        middle = 0.0
    elif p == 3:
        middle = (2.0 / alpha) * definite(w10_equal_scale, x0, x1, alpha, sol)
    else:
        middle = ((p - 1) / alpha) * _oracle(p - 1, [(1, alpha, sol), (0, alpha, sol)], x0, x1)
    rhs = boundary + middle + _oracle(p, [(0, alpha, sol), (0, alpha, sol)], x0, x1)
    return lhs - rhs


def x3_same_scale_antiderivs(alpha, sol, x):
    """(antiderivative of x^3 Z_0^2, antiderivative of x^3 Z_1^2)."""
    z0, z1 = _z(sol, 0, alpha, x), _z(sol, 1, alpha, x)
    common = x ** 4 / 6.0 * (z0 * z0 + z1 * z1)
    t3 = x ** 3 * z1 * z0 / alpha
    t2 = x * x * z1 * z1 / alpha ** 2
    return common + t3 / 3.0 - t2 / 3.0, common - 2.0 * t3 / 3.0 + 2.0 * t2 / 3.0


def x3_recurrence_step(n, alpha, sol, x0, x1, lower):
    """Integral of x^3 Z_{n+1}^2 over [x0, x1] from the one of x^3 Z_{n-1}^2."""
    def bracket(x):
        zn = _z(sol, n, alpha, x)
        zp, zm = _z(sol, n + 1, alpha, x), _z(sol, n - 1, alpha, x)
        return (4.0 * n / alpha ** 2) * 0.5 * x * x * (zn * zn - zp * zm) \
            - (2.0 * n / alpha ** 2) * x * x * zn * zn
    if x1 == x0:
        return lower
    return lower + bracket(x1) - bracket(x0)


# -- mixed-order cross integrals ---------------------------------------------

def w10_antideriv(alpha, beta, solA, solB, x, guard: bool = True):
    """Antiderivative of x^2 Z_1(alpha x) Z_0(beta x), alpha != beta."""
    _check_distinct(alpha, beta, "w10_equal_scale", guard)
    d = alpha * alpha - beta * beta
    a1, a0 = _z(solA, 1, alpha, x), _z(solA, 0, alpha, x)
    b1, b0 = _z(solB, 1, beta, x), _z(solB, 0, beta, x)
    return (-beta / d * x * x * a1 * b1 - alpha / d * x * x * a0 * b0
            + 2 * alpha ** 2 / d ** 2 * x * a1 * b0 - 2 * alpha * beta / d ** 2 * x * a0 * b1)


def w10_equal_scale(alpha, sol, x):
    """Antiderivative of x^2 Z_1(alpha x) Z_0(alpha x)."""
    return x * x * _z(sol, 1, alpha, x) ** 2 / (2.0 * alpha)


def x3_cross_antiderivs(alpha, beta, solA, solB, x, guard: bool = True):
    """(antiderivative of x^3 Z_0 Z_0, antiderivative of x^3 Z_1 Z_1), alpha != beta.

    The second member comes from integrating x^3 Z_1 Z_1 by parts against
    d Z_0(alpha x) and reusing :func:`w10_antideriv` with the scales swapped.
    """
    _check_distinct(alpha, beta, "x3_same_scale_antiderivs", guard)
    d = alpha * alpha - beta * beta
    s = alpha * alpha + beta * beta
    a1, a0 = _z(solA, 1, alpha, x), _z(solA, 0, alpha, x)
    b1, b0 = _z(solB, 1, beta, x), _z(solB, 0, beta, x)
    x2, x3 = x * x, x ** 3
    i00 = ((alpha * x3 * a1 * b0 - beta * x3 * a0 * b1) / d
           + 4 * alpha * beta / d ** 2 * x2 * a1 * b1 + 2 * s / d ** 2 * x2 * a0 * b0
           + 4 * beta * s / d ** 3 * x * a0 * b1 - 4 * alpha * s / d ** 3 * x * a1 * b0)
    i11 = ((beta * x3 * a1 * b0 - alpha * x3 * a0 * b1) / d
           + 2 * s / d ** 2 * x2 * a1 * b1 + 4 * alpha * beta / d ** 2 * x2 * a0 * b0
           + 8 * alpha * beta ** 2 / d ** 3 * x * a0 * b1
           - 8 * alpha ** 2 * beta / d ** 3 * x * a1 * b0)
    return i00, i11


def w11_antideriv(alpha, beta, solA, solB, x, guard: bool = True):
    """Antiderivative of x Z_1(alpha x) Z_1(beta x), alpha != beta."""
    _check_distinct(alpha, beta, "same_scale_norm_antideriv", guard)
    d = alpha * alpha - beta * beta
    return (beta * x * _z(solA, 1, alpha, x) * _z(solB, 0, beta, x)
            - alpha * x * _z(solA, 0, alpha, x) * _z(solB, 1, beta, x)) / d


def w00_antideriv(alpha, beta, solA, solB, x, guard: bool = True):
    """Antiderivative of x Z_0(alpha x) Z_0(beta x), alpha != beta."""
    _check_distinct(alpha, beta, "same_scale_norm_antideriv", guard)
    d = alpha * alpha - beta * beta
    return (alpha * x * _z(solA, 1, alpha, x) * _z(solB, 0, beta, x)
            - beta * x * _z(solA, 0, alpha, x) * _z(solB, 1, beta, x)) / d


def finite_difference(f, x, h=1e-5):
    """Central difference; used for the differentiation contract."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


__all__ = [n for n in dir() if not n.startswith("_") and n not in {"annotations", "math", "np"}]
