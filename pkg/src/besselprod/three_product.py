"""Triple-product integral family and its identities.

Notation: ``I_ijk^{abg}`` is the integral of x Z_i(a x) Z_j(b x) Z_k(g x),
``K_ijk^{abg}`` the same without the x weight.  All integrals are definite
over ``[params.x0, params.x]``; boundary brackets are differenced over the same
interval, so every relation holds exactly for the definite forms.

I_000 has no closed form.  It is the single irreducible input: the remaining
family members follow from it (and from K_110, K_000) by the identities here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .bessel_core import J_ONLY, GeneralSolution, bessel_zeros, z_eval
from .errors import DegeneracyError, PreconditionError, StepSizeError
from .quadrature import (Factor, ProductIntegralSpec, integrate, integrate_fixed,
                         lobe_breakpoints)
from .two_product import is_degenerate, w00_antideriv, w11_antideriv

RESONANCE_REL = 1e-8


class Residual(float):
    """A residual value that also carries the magnitude of the largest term."""

    scale: float

    def __new__(cls, value, scale):
        obj = super().__new__(cls, value)
        obj.scale = float(scale)
        return obj

    def passes(self, rel=1e-8, abs_floor=1e-11) -> bool:
        return abs(self) <= max(rel * self.scale, abs_floor)


def _residual(*terms):
    """Residual of ``sum(terms) == 0``."""
    vals = [float(t) for t in terms]
    return Residual(math.fsum(vals), max(abs(v) for v in vals))


@dataclass(frozen=True)
class TripleParams:
    alpha: float
    beta: float
    gamma: float
    sols: tuple = (J_ONLY, J_ONLY, J_ONLY)
    x: float = 1.0
    x0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "sols", tuple(self.sols))
        if len(self.sols) != 3:
            raise ValueError("three solutions required")
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ValueError("scales must be positive")

    @property
    def scales(self):
        return (self.alpha, self.beta, self.gamma)

    def rotate(self, k: int = 1) -> "TripleParams":
        """Cyclic substitution alpha -> beta -> gamma -> alpha applied k times."""
        s, z = list(self.scales), list(self.sols)
        k %= 3
        s, z = s[k:] + s[:k], z[k:] + z[:k]
        return replace(self, alpha=s[0], beta=s[1], gamma=s[2], sols=tuple(z))

    @property
    def has_y(self) -> bool:
        return any(s.has_y for s in self.sols)

    def z(self, which: int, order: int, x):
        return z_eval(self.sols[which], order, self.scales[which], x)

    def bracket(self, f: Callable[["TripleParams", float], float]) -> float:
        """f(x) - f(x0) for a point function f(params, x)."""
        return f(self, self.x) - f(self, self.x0)


# -- quadrature of family members -------------------------------------------

def triple_integral(params: TripleParams, orders, power=1, **kw):
    """Quadrature of x^power Z_i(alpha x) Z_j(beta x) Z_k(gamma x); returns QuadratureResult."""
    fs = tuple(Factor(o, s, z) for o, s, z in zip(orders, params.scales, params.sols))
    return integrate(ProductIntegralSpec(power, fs, (params.x0, params.x)), **kw)


def _q(params, orders, power=1):
    return triple_integral(params, orders, power).value


@dataclass(frozen=True)
class FamilyEntry:
    value: float
    abs_err: float
    provenance: str  # "quadrature" | "identity"


# Cyclic tags: "abg" is the given order, "bga" = rotate(1), "gab" = rotate(2).
CYCLIC = ("abg", "bga", "gab")


@dataclass
class TripleFamilyValues:
    entries: dict = field(default_factory=dict)

    def __getitem__(self, key) -> float:
        return self.entries[key].value

    def __contains__(self, key):
        return key in self.entries

    def set(self, key, value, abs_err, provenance):
        self.entries[key] = FamilyEntry(float(value), float(abs_err), provenance)

    def cyclic(self, stem):
        return tuple(self[f"{stem}_{c}"] for c in CYCLIC)


def quadrature_family(params: TripleParams) -> TripleFamilyValues:
    """Every family member by direct quadrature."""
    fam = TripleFamilyValues()
    for key, orders, power in (("i000", (0, 0, 0), 1), ("i111", (1, 1, 1), 1),
                               ("k111", (1, 1, 1), 0), ("k000", (0, 0, 0), 0)):
        r = triple_integral(params, orders, power)
        fam.set(key, r.value, r.abs_err, "quadrature")
    for k, tag in enumerate(CYCLIC):
        p = params.rotate(k)
        for stem, orders, power in (("i110", (1, 1, 0), 1), ("i001", (0, 0, 1), 1),
                                    ("k110", (1, 1, 0), 0)):
            r = triple_integral(p, orders, power)
            fam.set(f"{stem}_{tag}", r.value, r.abs_err, "quadrature")
    return fam


# -- first-order relations between I_000 and I_110 --------------------------

def _b37(p: TripleParams, x):
    a, b, g = p.scales
    return (g * x * p.z(2, 1, x) * p.z(0, 0, x) * p.z(1, 0, x)
            - a * x * p.z(0, 1, x) * p.z(1, 0, x) * p.z(2, 0, x)
            - b * x * p.z(1, 1, x) * p.z(2, 0, x) * p.z(0, 0, x))


def _x100(p: TripleParams, x):
    """x Z_1(alpha x) Z_0(beta x) Z_0(gamma x)."""
    return x * p.z(0, 1, x) * p.z(1, 0, x) * p.z(2, 0, x)


def i110_coefficient(params: TripleParams) -> float:
    a, b, g = params.scales
    return (a * a + b * b - g * g) / (2.0 * a * b)


def i110_from_i000(params: TripleParams, i000: float) -> float:
    """I_110^{abg} from I_000 by eliminating the two other cyclic members."""
    a, b, _ = params.scales
    return i000 * i110_coefficient(params) + params.bracket(_b37) / (2.0 * a * b)


def i110_special(params: TripleParams) -> float:
    """The gamma^2 = alpha^2 + beta^2 case, where the I_000 term drops out."""
    a, b, _ = params.scales
    return params.bracket(_b37) / (2.0 * a * b)


def matrix_system(params: TripleParams, i000: float):
    """(M, rhs) of the linear system for (I_110^{abg}, I_110^{bga}, I_110^{gab})."""
    a, b, g = params.scales
    m = np.array([[b, 0.0, g], [a, g, 0.0], [0.0, b, a]])
    rhs = np.array([s * i000 - params.rotate(k).bracket(_x100)
                    for k, s in enumerate((a, b, g))])
    return m, rhs


def matrix_system_solve(params: TripleParams, i000: float):
    """Cyclic I_110 values by direct linear solve (det = 2 alpha beta gamma)."""
    m, rhs = matrix_system(params, i000)
    if abs(np.linalg.det(m)) == 0.0:
        raise DegeneracyError("singular I_110 system")
    return tuple(float(v) for v in np.linalg.solve(m, rhs))


def alt_relation_residual(params: TripleParams, i000: float, i110_cyclics) -> Residual:
    """Residual of I_000 = [W_00^{ab} Z_0(g x)] + (ga/(a^2-b^2)) I_110^{gab} - (bg/(a^2-b^2)) I_110^{bga}."""
    a, b, g = params.scales
    if is_degenerate(a, b):
        raise DegeneracyError("alpha and beta too close for the W_00 route")
    d = a * a - b * b
    sa, sb = params.sols[0], params.sols[1]
    w = params.bracket(lambda p, x: w00_antideriv(a, b, sa, sb, x) * p.z(2, 0, x))
    _, bga, gab = i110_cyclics
    return _residual(i000, -w, -g * a / d * gab, b * g / d * bga)


# -- K_111 ------------------------------------------------------------------

def _b45(p: TripleParams, x):
    a, b, g = p.scales
    z1 = [p.z(i, 1, x) for i in range(3)]
    z0 = [p.z(i, 0, x) for i in range(3)]
    return ((a * a - b * b - g * g) / (4 * b * g) * x * z1[0] * z0[1] * z0[2]
            + (b * b - g * g - a * a) / (4 * g * a) * x * z1[1] * z0[2] * z0[0]
            + (g * g - a * a - b * b) / (4 * a * b) * x * z1[2] * z0[0] * z0[1]
            - 0.5 * x * z1[0] * z1[1] * z1[2])


def k111_coefficient(params: TripleParams) -> float:
    a, b, g = params.scales
    return -((a * a + b * b - g * g) ** 2 - 4 * a * a * b * b) / (4 * a * b * g)


def k111_from_i000(params: TripleParams, i000: float) -> float:
    """K_111 from I_000 plus boundary terms."""
    return params.bracket(_b45) + k111_coefficient(params) * i000


def k111_special(params: TripleParams) -> float:
    """The gamma = |alpha +- beta| case, where the I_000 term drops out."""
    return params.bracket(_b45)


# -- cyclic sums and the I_001 / I_111 relations -----------------------------

def _x111(p, x):
    return x * p.z(0, 1, x) * p.z(1, 1, x) * p.z(2, 1, x)


def _x000(p, x):
    return x * p.z(0, 0, x) * p.z(1, 0, x) * p.z(2, 0, x)


def cyclic_sum_residuals(params: TripleParams, fam: TripleFamilyValues):
    """Residuals of the I_110 cyclic sum (against K_111) and the I_001 one (against K_000)."""
    a, b, g = params.scales
    i110 = fam.cyclic("i110")
    i001 = fam.cyclic("i001")
    r44 = _residual(g * i110[0], a * i110[1], b * i110[2],
                    -params.bracket(_x111), -2.0 * fam["k111"])
    r47 = _residual(g * i001[0], a * i001[1], b * i001[2],
                    params.bracket(_x000), -fam["k000"])
    return r44, r47


def _b49(p, x):
    """Z_0(gamma x) x Z_1(alpha x) Z_1(beta x)."""
    return x * p.z(2, 0, x) * p.z(0, 1, x) * p.z(1, 1, x)


def _b50(p, x):
    a, b, g = p.scales
    return (a * x * p.z(0, 0, x) * p.z(1, 1, x) * p.z(2, 1, x)
            + b * x * p.z(1, 0, x) * p.z(2, 1, x) * p.z(0, 1, x)
            - g * x * p.z(2, 0, x) * p.z(0, 1, x) * p.z(1, 1, x))


def i111_i001_relations_residual(params: TripleParams, fam: TripleFamilyValues):
    """Residuals of the W_11 route to I_111, the first-order I_001/I_111 relation,
    and its cyclic solution for I_001."""
    a, b, g = params.scales
    i001 = fam.cyclic("i001")
    k110 = fam.cyclic("k110")
    i111 = fam["i111"]
    if is_degenerate(a, b):
        r48 = Residual(float("nan"), 0.0)
    else:
        d = a * a - b * b
        sa, sb = params.sols[0], params.sols[1]
        w = params.bracket(lambda p, x: w11_antideriv(a, b, sa, sb, x) * p.z(2, 1, x))
        r48 = _residual(-i111, w, -b * g / d * i001[1], g * a / d * i001[2],
                        b / d * k110[2], -a / d * k110[1])
    r49 = _residual(b * i001[1], a * i001[2], -k110[0], -g * i111, -params.bracket(_b49))
    r50 = _residual(-2 * a * b * i001[0], a * k110[1], b * k110[2], -g * k110[0],
                    i111 * (a * a + b * b - g * g), params.bracket(_b50))
    return r48, r49, r50


def i001_i111_system(params: TripleParams, k110_cyclics, k000: float):
    """Solve for (I_001^{abg}, I_001^{bga}, I_001^{gab}, I_111) given K_110 and K_000.

    Uses the three cyclic copies of the first-order I_001/I_111 relation plus
    the I_001 cyclic sum.  Raises DegeneracyError if the 4x4 system is
    numerically singular.
    """
    a, b, g = params.scales
    m = np.array([[0.0, b, a, -g],
                  [b, 0.0, g, -a],
                  [a, g, 0.0, -b],
                  [g, a, b, 0.0]])
    rhs = np.array([k110_cyclics[k] + params.rotate(k).bracket(_b49) for k in range(3)]
                   + [k000 - params.bracket(_x000)])
    if np.linalg.cond(m) > 1e10:
        raise DegeneracyError("I_001/I_111 system is rank-deficient for these scales")
    return tuple(float(v) for v in np.linalg.solve(m, rhs))


def derived_family(params: TripleParams) -> TripleFamilyValues:
    """Family built from quadrature I_000, K_110 (cyclic) and K_000 plus identities."""
    fam = TripleFamilyValues()
    r = triple_integral(params, (0, 0, 0))
    fam.set("i000", r.value, r.abs_err, "quadrature")
    r = triple_integral(params, (0, 0, 0), power=0)
    fam.set("k000", r.value, r.abs_err, "quadrature")
    k110 = []
    for k, tag in enumerate(CYCLIC):
        r = triple_integral(params.rotate(k), (1, 1, 0), power=0)
        fam.set(f"k110_{tag}", r.value, r.abs_err, "quadrature")
        k110.append(r.value)
    i000 = fam["i000"]
    i000_err = fam.entries["i000"].abs_err
    for k, tag in enumerate(CYCLIC):
        p = params.rotate(k)
        fam.set(f"i110_{tag}", i110_from_i000(p, i000),
                abs(i110_coefficient(p)) * i000_err, "identity")
    fam.set("k111", k111_from_i000(params, i000),
            abs(k111_coefficient(params)) * i000_err, "identity")
    sol = i001_i111_system(params, k110, fam["k000"])
    err = max(e.abs_err for e in fam.entries.values())
    for tag, v in zip(CYCLIC, sol[:3]):
        fam.set(f"i001_{tag}", v, err, "identity")
    fam.set("i111", sol[3], err, "identity")
    return fam


# -- differential relations in the scale parameters -------------------------

def ode_rhs_eval(alpha, beta, gamma, x, sols=(J_ONLY,) * 3, x0: float = 0.0):
    """(F, G) in dI_000/dalpha - F I_000 = G.

    G is the boundary bracket over [x0, x] of
    [ g c x^2 Z1 Z0 Z1 + a(a^2-b^2-g^2) x^2 Z0 Z0 Z0 + b(a^2-b^2+g^2) x^2 Z1 Z1 Z0
      - 2 a b g x^2 Z0 Z1 Z1 ] / D,   c = a^2+b^2-g^2,  D = c^2 - 4 a^2 b^2,
    with the three factor arguments (alpha x, beta x, gamma x) in that order.
    """
    a, b, g = alpha, beta, gamma
    c = a * a + b * b - g * g
    den = c * c - 4 * a * a * b * b
    if abs(den) < RESONANCE_REL * (a * a + b * b) ** 2:
        raise DegeneracyError("resonant scales: (a^2+b^2-g^2)^2 = 4 a^2 b^2")
    F = 2 * a * (b * b + g * g - a * a) / den
    p = TripleParams(a, b, g, sols, x, x0)

    def num(p, x):
        z = [[p.z(i, o, x) for o in (0, 1)] for i in range(3)]
        return x * x * (g * c * z[0][1] * z[1][0] * z[2][1]
                        + a * (a * a - b * b - g * g) * z[0][0] * z[1][0] * z[2][0]
                        + b * (a * a - b * b + g * g) * z[0][1] * z[1][1] * z[2][0]
                        - 2 * a * b * g * z[0][0] * z[1][1] * z[2][1])
    return F, p.bracket(num) / den


def log_derivative_f(alpha, beta, gamma, h=None):
    """d/dalpha of -1/2 log|(a^2+b^2-g^2)^2 - 4a^2b^2| by a five-point central difference."""
    h = h or 1e-4 * alpha

    def L(a):
        return -0.5 * math.log(abs((a * a + beta ** 2 - gamma ** 2) ** 2 - 4 * a * a * beta ** 2))
    return (8 * (L(alpha + h) - L(alpha - h)) - (L(alpha + 2 * h) - L(alpha - 2 * h))) / (12 * h)


@dataclass(frozen=True)
class DiffResiduals:
    eq40: float
    eq41: float
    eq42: float
    forms40: tuple = ()  # the alpha, beta and gamma residuals behind eq40

    def __iter__(self):
        return iter((self.eq40, self.eq41, self.eq42))

    def max(self):
        return max(self)


class _Smooth:
    """I(scales) by a fixed composite rule, so finite differences see a smooth function."""

    def __init__(self, params: TripleParams, subdivisions=6):
        # panels fixed from the unperturbed scales, padded for the step
        base = lobe_breakpoints(ProductIntegralSpec(
            1, tuple(Factor(0, s * 1.05, z) for s, z in zip(params.scales, params.sols)),
            (params.x0, params.x)))
        self.edges = base
        self.params = params
        self.sub = subdivisions

    def __call__(self, orders, scales, power=1):
        fs = tuple(Factor(o, s, z) for o, s, z in zip(orders, scales, self.params.sols))
        spec = ProductIntegralSpec(power, fs, (self.params.x0, self.params.x))
        return integrate_fixed(spec, self.edges, self.sub)


def _fd_derivs(f, s, h):
    fp, f0, fm = f(s + h), f(s), f(s - h)
    return (fp - fm) / (2 * h), (fp - 2 * f0 + fm) / (h * h)


def diff_relations_residual(alpha, beta, gamma, interval=(0.0, 1.0), h=None,
                            sols=(J_ONLY,) * 3, richardson=False) -> DiffResiduals:
    """Finite-difference residuals of the scale-derivative relations.

    eq40: the three radial-Laplacian forms in alpha, beta, gamma against
    -integral of x^3 Z0 Z0 Z0;  eq41: the two first-order I_000/I_110 links;
    eq42: dI_000/dalpha - F I_000 - G.  Each is the largest absolute residual.
    ``h`` is the absolute step (default 1e-4 times the smallest scale).
    With ``richardson`` every derivative is the (h, h/2) extrapolation.
    """
    params = TripleParams(alpha, beta, gamma, sols, interval[1], interval[0])
    scales = np.array(params.scales)
    h = 1e-4 * scales.min() if h is None else h
    if h < 1e-7 * scales.max():
        raise StepSizeError(f"step {h} too small for scales up to {scales.max()}")
    I = _Smooth(params)

    def deriv(fn, i):
        def along(s):
            v = scales.copy()
            v[i] = s
            return fn(v)
        d1, d2 = _fd_derivs(along, scales[i], h)
        if richardson:
            e1, e2 = _fd_derivs(along, scales[i], h / 2)
            d1, d2 = (4 * e1 - d1) / 3, (4 * e2 - d2) / 3
        return d1, d2

    i000 = lambda v: I((0, 0, 0), v)  # noqa: E731
    target = -I((0, 0, 0), scales, power=3)
    r40 = []
    for i in range(3):
        d1, d2 = deriv(i000, i)
        r40.append(d2 + d1 / scales[i] - target)

    # d/dbeta I000 = -(1/alpha) d/dalpha (alpha I110);  d/dalpha I000 = -(1/beta) d/dbeta (beta I110)
    ai110 = lambda v: v[0] * I((1, 1, 0), v)  # noqa: E731
    bi110 = lambda v: v[1] * I((1, 1, 0), v)  # noqa: E731
    dI_da, _ = deriv(i000, 0)
    dI_db, _ = deriv(i000, 1)
    r41 = [abs(dI_db + deriv(ai110, 0)[0] / scales[0]),
           abs(dI_da + deriv(bi110, 1)[0] / scales[1])]

    F, G = ode_rhs_eval(alpha, beta, gamma, params.x, sols, params.x0)
    r42 = abs(dI_da - F * i000(scales) - G)
    return DiffResiduals(float(max(map(abs, r40))), float(max(r41)), float(r42),
                         tuple(float(v) for v in r40))


# -- definite coefficients at Bessel zeros ----------------------------------

def _zeros(q, *idx):
    if min(idx) < 1:
        raise ValueError("zero indices start at 1")
    z = bessel_zeros(q, max(idx))
    return [float(z[i - 1]) for i in idx]


def c110_ratio(q, m, n, p) -> float:
    jm, jn, jp = _zeros(q, m, n, p)
    return (jm * jm + jn * jn - jp * jp) / (2 * jm * jn)


def d111_ratio(q, m, n, p) -> float:
    jm, jn, jp = _zeros(q, m, n, p)
    c = jm * jm + jn * jn - jp * jp
    return -(c * c - 4 * jm * jm * jn * jn) / (4 * jm * jn * jp)


def c110_from_c000(q, m, n, p, c000: float) -> float:
    """C_110^{mnp} (x J1 J1 J0 over [0,1] at zeros of J_q) from C_000^{mnp}."""
    return c000 * c110_ratio(q, m, n, p)


def d111_from_c000(q, m, n, p, c000: float) -> float:
    """D_111^{mnp} (J1 J1 J1 over [0,1] at zeros of J_q) from C_000^{mnp}.

    Exact for q = 1.  For q = 0 add ``zero_bracket_report(...).d111_bracket``.
    """
    return c000 * d111_ratio(q, m, n, p)


@dataclass(frozen=True)
class BracketReport:
    q: int
    mnp: tuple
    c110_bracket: float
    d111_bracket: float

    @property
    def c110_exact(self) -> bool:
        return self.c110_bracket == 0.0 or abs(self.c110_bracket) < 1e-14

    @property
    def d111_exact(self) -> bool:
        return abs(self.d111_bracket) < 1e-14


def zero_bracket_report(q, m, n, p) -> BracketReport:
    """Boundary brackets dropped by the C_110 and D_111 shortcuts, evaluated at x = 1.

    Both vanish for q = 1.  For q = 0 the C_110 bracket still vanishes (every
    term carries two J_0 factors at zeros) but the D_111 bracket keeps
    -1/2 J1(j_m) J1(j_n) J1(j_p).
    """
    if q not in (0, 1):
        raise ValueError("q must be 0 or 1")
    jm, jn, jp = _zeros(q, m, n, p)
    params = TripleParams(jm, jn, jp)
    return BracketReport(q, (m, n, p),
                         _b37(params, 1.0) / (2 * jm * jn), _b45(params, 1.0))


def definite_coefficients(q, m, n, p, extended=None):
    """(C_000, C_110, D_111) by direct quadrature over [0, 1] at zeros of J_q."""
    from .quadrature import integrate_extended
    jm, jn, jp = _zeros(q, m, n, p)
    params = TripleParams(jm, jn, jp)
    ext = max(m, n, p) > 100 if extended is None else extended
    run = integrate_extended if ext else integrate

    def q_(orders, power):
        fs = tuple(Factor(o, s) for o, s in zip(orders, params.scales))
        return run(ProductIntegralSpec(power, fs, (0.0, 1.0)))
    return q_((0, 0, 0), 1), q_((1, 1, 0), 1), q_((1, 1, 1), 0)


__all__ = [n for n in dir() if not n.startswith("_")]
