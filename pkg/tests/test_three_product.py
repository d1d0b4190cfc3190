import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from besselprod import three_product as tp
from besselprod.bessel_core import J_ONLY, GeneralSolution, bessel_j, bessel_zeros
from besselprod.errors import DegeneracyError, StepSizeError

GEN = (GeneralSolution(0.6, -0.9), GeneralSolution(1.2, 0.4), GeneralSolution(-0.3, 1.5))


def ok(value, ref, rel=1e-8, abs_=1e-11):
    return abs(value - ref) <= max(rel * abs(ref), abs_)


def test_permutation_symmetry():
    scales = (3.1, 7.7, 12.4)
    base = tp.TripleParams(*scales, GEN, 2.5, 0.5)
    ref = {k: tp.triple_integral(base, o, p).value
           for k, o, p in (("i000", (0, 0, 0), 1), ("k000", (0, 0, 0), 0), ("k111", (1, 1, 1), 0))}
    for perm in itertools.permutations(range(3)):
        P = tp.TripleParams(*(scales[i] for i in perm), tuple(GEN[i] for i in perm), 2.5, 0.5)
        assert abs(tp.triple_integral(P, (0, 0, 0)).value - ref["i000"]) <= 1e-11
        assert abs(tp.triple_integral(P, (0, 0, 0), 0).value - ref["k000"]) <= 1e-11
        assert abs(tp.triple_integral(P, (1, 1, 1), 0).value - ref["k111"]) <= 1e-11


def test_rotate():
    P = tp.TripleParams(1.0, 2.0, 3.0, GEN)
    R = P.rotate()
    assert R.scales == (2.0, 3.0, 1.0) and R.sols == GEN[1:] + GEN[:1]
    assert P.rotate(3) == P


@settings(max_examples=12, deadline=None)
@given(s=st.lists(st.floats(1, 40), min_size=3, max_size=3, unique=True))
def test_identity_closure_j_only(s):
    s = sorted(s)
    if min(s[1] - s[0], s[2] - s[1]) < 1e-2 * s[2]:
        return
    P = tp.TripleParams(*s)
    q, d = tp.quadrature_family(P), tp.derived_family(P)
    for key, entry in d.entries.items():
        if entry.provenance == "identity":
            assert ok(entry.value, q[key]), key


def test_identity_closure_general():
    P = tp.TripleParams(2.2, 5.9, 9.3, GEN, 3.0, 0.7)
    q, d = tp.quadrature_family(P), tp.derived_family(P)
    for key, entry in d.entries.items():
        assert ok(entry.value, q[key]), key


def test_linear_system_and_alternative_route():
    P = tp.TripleParams(4.0, 6.5, 3.3, GEN, 2.0, 0.5)
    fam = tp.quadrature_family(P)
    solved = tp.matrix_system_solve(P, fam["i000"])
    for v, w in zip(solved, fam.cyclic("i110")):
        assert ok(v, w)
    assert tp.alt_relation_residual(P, fam["i000"], fam.cyclic("i110")).passes()
    for r in (*tp.cyclic_sum_residuals(P, fam), *tp.i111_i001_relations_residual(P, fam)):
        assert r.passes()


def test_special_conditions_are_limits():
    # gamma^2 = alpha^2 + beta^2 removes the I_000 term from I_110
    a, b = 3.0, 4.0
    for eps in (1e-3, 1e-5):
        P = tp.TripleParams(a, b, 5.0 + eps, x=1.3)
        gap = abs(tp.i110_from_i000(P, tp.triple_integral(P, (0, 0, 0)).value) - tp.i110_special(P))
        assert gap <= 10 * abs(tp.i110_coefficient(P))
    P = tp.TripleParams(a, b, 5.0, x=1.3)
    assert ok(tp.i110_special(P), tp.triple_integral(P, (1, 1, 0)).value)
    # gamma = alpha + beta removes it from K_111
    P = tp.TripleParams(a, b, 7.0, x=1.3)
    assert abs(tp.k111_coefficient(P)) < 1e-14
    assert ok(tp.k111_special(P), tp.triple_integral(P, (1, 1, 1), 0).value)
    Pe = tp.TripleParams(a, b, 7.0 + 1e-4, x=1.3)
    gap = abs(tp.k111_from_i000(Pe, tp.triple_integral(Pe, (0, 0, 0)).value) - tp.k111_special(Pe))
    assert gap <= 10 * abs(tp.k111_coefficient(Pe))


@pytest.mark.parametrize("mnp", [(22, 89, 31), (100, 50, 20), (160, 80, 70)])
def test_triangle_violation_collapse(mnp):
    c000 = tp.definite_coefficients(1, *mnp)[0].value
    assert abs(c000) <= 1e-7


def test_definite_coefficient_shortcuts():
    for mnp in ((1, 2, 3), (4, 4, 4), (2, 7, 5)):
        c000, c110, d111 = (r.value for r in tp.definite_coefficients(1, *mnp))
        assert ok(tp.c110_from_c000(1, *mnp, c000), c110, 1e-9, 1e-14)
        assert ok(tp.d111_from_c000(1, *mnp, c000), d111, 1e-9, 1e-14)


def test_zero_kind_zero_brackets():
    rep = tp.zero_bracket_report(0, 2, 3, 4)
    assert rep.c110_exact and not rep.d111_exact
    z = bessel_zeros(0, 4)
    expect = -0.5 * bessel_j(1, z[1]) * bessel_j(1, z[2]) * bessel_j(1, z[3])
    assert rep.d111_bracket == pytest.approx(expect, rel=1e-12)
    c000, _, d111 = (r.value for r in tp.definite_coefficients(0, 2, 3, 4))
    assert ok(tp.d111_from_c000(0, 2, 3, 4, c000) + rep.d111_bracket, d111, 1e-9, 1e-14)
    assert tp.zero_bracket_report(1, 2, 3, 4).d111_exact


def test_diff_relations_and_halving():
    kw = dict(interval=(0.3, 4.0))
    r = tp.diff_relations_residual(2.3, 1.1, 3.7, **kw)
    assert r.max() <= 1e-4
    assert all(isinstance(v, float) for v in r)
    coarse = tp.diff_relations_residual(2.3, 1.1, 3.7, h=0.02, **kw)
    fine = tp.diff_relations_residual(2.3, 1.1, 3.7, h=0.01, **kw)
    assert fine.max() < coarse.max()
    rich = tp.diff_relations_residual(2.3, 1.1, 3.7, h=0.02, richardson=True, **kw)
    assert coarse.max() / rich.max() >= 4


def test_diff_relations_step_guard():
    with pytest.raises(StepSizeError):
        tp.diff_relations_residual(2.0, 3.0, 4.0, h=1e-9)


def test_ode_degenerate_configuration():
    with pytest.raises(DegeneracyError):
        tp.ode_rhs_eval(3.0, 4.0, 7.0, 1.0)


def test_log_derivative():
    a, b, g = 2.0, 3.0, 4.0
    D = lambda a_: (a_ * a_ + b * b - g * g) ** 2 - 4 * a_ * a_ * b * b  # noqa: E731
    exact = -0.5 * (2 * (a * a + b * b - g * g) * 2 * a - 8 * a * b * b) / D(a)
    assert tp.log_derivative_f(a, b, g) == pytest.approx(exact, rel=1e-8)


def test_bad_params():
    with pytest.raises(ValueError):
        tp.TripleParams(1.0, -2.0, 3.0)
    with pytest.raises(ValueError):
        tp.TripleParams(1.0, 2.0, 3.0, (J_ONLY,))


def test_symmetric_scales_laplacian_forms_agree():
    r = tp.diff_relations_residual(3.0, 3.0, 5.0)
    assert abs(r.forms40[0] - r.forms40[1]) <= 1e-6


@pytest.mark.parametrize("abg", [(2.0, 3.0, 4.0), (1.3, 7.1, 5.2), (10.0, 2.5, 9.0)])
def test_f_is_log_derivative(abg):
    F, _ = tp.ode_rhs_eval(*abg, 1.0)
    assert abs(F - tp.log_derivative_f(*abg)) <= 1e-10
