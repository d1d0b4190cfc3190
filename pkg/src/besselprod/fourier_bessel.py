"""Fourier-Bessel expansion of a product of two Bessel functions.

Convention: the product J_j(j_{i,m} x) J_k(j_{i,n} x) is expanded in the basis
J_i(j_{i,p} x), p = 1..N, with every zero taken of kind i.  The coefficient of
basis function p is

    c_p = 2 / J_{i+1}(j_{i,p})^2 * integral_0^1 x J_i(j_{i,p} x) J_j(j_{i,m} x) J_k(j_{i,n} x) dx.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .asymptotics import ModeTriple
from .bessel_core import bessel_j, bessel_zeros
from .quadrature import Factor, ProductIntegralSpec, integrate, integrate_function


@dataclass(frozen=True)
class ExpansionSeries:
    i: int
    j: int
    k: int
    m: int
    n: int
    coefficients: tuple  # ((p, c_p), ...)

    @property
    def q(self) -> int:
        return self.i

    @property
    def truncation(self) -> int:
        return len(self.coefficients)

    def values(self) -> np.ndarray:
        return np.array([c for _, c in self.coefficients], dtype=float)


def basis_norm(i: int, p: int) -> float:
    """Integral of x J_i(j_{i,p} x)^2 over [0, 1] = J_{i+1}(j_{i,p})^2 / 2."""
    z = float(bessel_zeros(i, p)[p - 1])
    return 0.5 * bessel_j(i + 1, z) ** 2


def expansion_coefficient(mode: ModeTriple, **quad_kw) -> float:
    """c_p for basis index ``mode.p`` and factor indices ``mode.m``, ``mode.n``.

    Zeros are of kind ``mode.i`` regardless of ``mode.q``.
    """
    i = mode.i
    z = bessel_zeros(i, max(mode.m, mode.n, mode.p))
    fs = (Factor(i, float(z[mode.p - 1])), Factor(mode.j, float(z[mode.m - 1])),
          Factor(mode.k, float(z[mode.n - 1])))
    c = integrate(ProductIntegralSpec(1, fs, (0.0, 1.0)), **quad_kw).value
    return c / basis_norm(i, mode.p)


def single_factor_coefficient(i: int, m: int, p: int) -> float:
    """Coefficient of J_i(j_{i,p} x) when expanding J_i(j_{i,m} x) itself (= delta_mp)."""
    z = bessel_zeros(i, max(m, p))
    fs = (Factor(i, float(z[p - 1])), Factor(i, float(z[m - 1])))
    c = integrate(ProductIntegralSpec(1, fs, (0.0, 1.0))).value
    return c / basis_norm(i, p)


def build_series(i: int, j: int, k: int, m: int, n: int, N: int) -> ExpansionSeries:
    coeffs = tuple((p, expansion_coefficient(ModeTriple(m, n, p, i, j, k, q=i)))
                   for p in range(1, N + 1))
    return ExpansionSeries(i, j, k, m, n, coeffs)


def product_values(series: ExpansionSeries, x):
    """The expanded product itself, for comparison with the partial sum."""
    z = bessel_zeros(series.i, max(series.m, series.n))
    x = np.asarray(x, dtype=float)
    return (bessel_j(series.j, float(z[series.m - 1]) * x)
            * bessel_j(series.k, float(z[series.n - 1]) * x))


def reconstruct(series: ExpansionSeries, x):
    """Partial sum of the series at ``x`` (scalar or array) in (0, 1)."""
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise ValueError("reconstruction is defined on the open interval (0, 1)")
    out = np.zeros_like(x)
    if not series.coefficients:
        return float(out) if out.ndim == 0 else out
    z = bessel_zeros(series.i, series.truncation)
    for (p, c) in series.coefficients:
        out = out + c * bessel_j(series.i, float(z[p - 1]) * x)
    return float(out) if out.ndim == 0 else out


def truncate(series: ExpansionSeries, N: int) -> ExpansionSeries:
    return ExpansionSeries(series.i, series.j, series.k, series.m, series.n,
                           series.coefficients[:N])


def rms_error(series: ExpansionSeries, points: int = 512) -> float:
    """RMS of partial sum minus product on ``points`` interior midpoints."""
    x = (np.arange(points) + 0.5) / points
    d = reconstruct(series, x) - product_values(series, x)
    return float(np.sqrt(np.mean(d * d)))


def parseval_sum(series: ExpansionSeries) -> float:
    """Sum of c_p^2 times the basis norms; bounded above by the product's norm."""
    return float(sum(c * c * basis_norm(series.i, p) for p, c in series.coefficients))


def product_norm(series: ExpansionSeries) -> float:
    """Integral of x (J_j J_k)^2 over [0, 1]."""
    z = bessel_zeros(series.i, max(series.m, series.n))
    fm, fn = float(z[series.m - 1]), float(z[series.n - 1])
    f = lambda x: x * (bessel_j(series.j, fm * x) * bessel_j(series.k, fn * x)) ** 2  # noqa: E731
    pts = np.arange(1, int(2 * max(fm, fn) / np.pi) + 2) * np.pi / (2 * max(fm, fn))
    return integrate_function(f, 0.0, 1.0, pts).value


def to_csv(series: ExpansionSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "c"])
    for p, c in series.coefficients:
        w.writerow([p, f"{c:.17g}"])
    return buf.getvalue()


def export_csv(series: ExpansionSeries, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv(series))
