import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from besselprod.bessel_core import (J_ONLY, GeneralSolution, bessel_j, bessel_y, bessel_zero,
                                    bessel_zeros, z_derivative, z_eval)
from besselprod.errors import DomainError, UnsupportedOrderError

GRID = np.geomspace(0.1, 50.0, 60)
sols = st.builds(GeneralSolution, st.floats(-2, 2), st.floats(-2, 2))


def test_known_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(3, 0.0) == 0.0
    assert bessel_j(0, 1.0) == pytest.approx(0.7651976865579666, rel=1e-15)
    assert bessel_y(1, 2.0) == pytest.approx(-0.10703243154093754, rel=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 17, 40])
def test_against_mpmath(n):
    mp.mp.dps = 30
    for x in (0.01, 0.7, 3.3, 12.0, 29.5, 80.0, 400.0):
        ref_j, ref_y = mp.besselj(n, x), mp.bessely(n, x)
        env = float(mp.sqrt(ref_j ** 2 + ref_y ** 2)) if x > n else float(abs(ref_j))
        assert abs(bessel_j(n, x) - float(ref_j)) <= 1e-13 * env
        env_y = env if x > n else float(abs(ref_y))
        assert abs(bessel_y(n, x) - float(ref_y)) <= 1e-13 * env_y


@pytest.mark.parametrize("n", range(1, 9))
def test_reflection_exact(n):
    sol = GeneralSolution(0.7, -1.3)
    for x in GRID:
        assert z_eval(sol, -n, 1.0, x) == (-1) ** n * z_eval(sol, n, 1.0, x)


@pytest.mark.parametrize("n", range(0, 9))
def test_recurrence(n):
    for sol in (J_ONLY, GeneralSolution(0.3, 1.1)):
        zm, z0, zp = (z_eval(sol, k, 1.0, GRID) for k in (n - 1, n, n + 1))
        res = np.abs(zm + zp - 2 * n / GRID * z0)
        assert np.all(res <= 1e-11 * np.maximum(1.0, np.abs(z0)))


@pytest.mark.parametrize("n", range(0, 9))
def test_wronskian(n):
    w = bessel_j(n + 1, GRID) * bessel_y(n, GRID) - bessel_j(n, GRID) * bessel_y(n + 1, GRID)
    assert np.max(np.abs(w / (2 / (math.pi * GRID)) - 1)) <= 1e-11


@settings(max_examples=60, deadline=None)
@given(sol=sols, n=st.integers(-4, 6), scale=st.floats(0.5, 30), x=st.floats(0.2, 5))
def test_derivative_matches_finite_difference(sol, n, scale, x):
    # smooth region: past the turning point, where Y is not blowing up
    assume(scale * x > abs(n) + 1)
    h = 1e-5 * x
    fd = (z_eval(sol, n, scale, x + h) - z_eval(sol, n, scale, x - h)) / (2 * h)
    assert abs(z_derivative(sol, n, scale, x) - fd) <= 1e-7 * max(1.0, scale * scale)


@settings(max_examples=40, deadline=None)
@given(sol=sols, n=st.integers(0, 6), x=st.floats(0.5, 40))
def test_linearity(sol, n, x):
    expect = sol.a * bessel_j(n, x) + sol.b * bessel_y(n, x)
    assert z_eval(sol, n, 1.0, x) == pytest.approx(expect, rel=1e-14, abs=1e-15)


def test_vectorised_matches_scalar():
    xs = np.linspace(0.0, 60.0, 41)
    v = bessel_j(4, xs)
    assert v.shape == xs.shape
    assert all(v[i] == bessel_j(4, float(x)) for i, x in enumerate(xs))


def test_y_domain():
    with pytest.raises(DomainError):
        bessel_y(0, 0.0)
    with pytest.raises(DomainError):
        bessel_y(1, -1.0)


def test_zeros():
    z0, z1 = bessel_zeros(0, 501), bessel_zeros(1, 500)
    assert z0[0] == pytest.approx(2.404825557695773, rel=1e-15)
    assert z1[0] == pytest.approx(3.8317059702075125, rel=1e-15)
    assert np.all(z0[:-1] < z1) and np.all(z1 < z0[1:])
    assert np.max(np.abs(bessel_j(1, z1))) < 1e-13
    assert not z1.flags.writeable


def test_zero_accessor():
    z = bessel_zero(1, 20)
    assert (z.q, z.p) == (1, 20)
    assert float(z) == bessel_zeros(1, 20)[19]
    with pytest.raises(UnsupportedOrderError):
        bessel_zeros(2, 3)
    with pytest.raises(ValueError):
        bessel_zero(0, 0)
