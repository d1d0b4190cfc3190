import numpy as np
import pytest

from besselprod import fourier_bessel as fb
from besselprod.asymptotics import ModeTriple
from besselprod.bessel_core import bessel_j, bessel_zeros


@pytest.fixture(scope="module")
def series():
    return fb.build_series(1, 1, 1, 1, 2, 64)


def test_single_factor_is_delta():
    assert fb.single_factor_coefficient(1, 3, 3) == pytest.approx(1.0, rel=1e-12)
    assert abs(fb.single_factor_coefficient(1, 3, 5)) < 1e-13
    assert abs(fb.single_factor_coefficient(0, 2, 1)) < 1e-13


def test_basis_norm():
    z = bessel_zeros(0, 3)[2]
    assert fb.basis_norm(0, 3) == pytest.approx(0.5 * bessel_j(1, z) ** 2, rel=1e-15)


def test_reconstruction(series):
    assert series.truncation == 64 and series.q == 1
    assert fb.rms_error(series) <= 1e-3
    assert fb.rms_error(fb.truncate(series, 16)) > fb.rms_error(series)


def test_parseval_from_below(series):
    norm = fb.product_norm(series)
    sums = [fb.parseval_sum(fb.truncate(series, N)) for N in (8, 16, 64)]
    assert sums[0] <= sums[1] <= sums[2] <= norm * (1 + 1e-12)
    assert (norm - sums[2]) / norm <= 0.02


def test_coefficient_decay(series):
    c = np.abs(series.values())
    tail = c[1 + 2 + 10:]  # p > m + n + 10
    assert tail.max() <= 1e-2 * c.max()


def test_reconstruct_domain_and_empty(series):
    with pytest.raises(ValueError):
        fb.reconstruct(series, 1.0)
    assert fb.reconstruct(fb.truncate(series, 0), 0.5) == 0.0


def test_coefficient_matches_series(series):
    assert fb.expansion_coefficient(ModeTriple(1, 2, 5, 1, 1, 1, q=1)) == series.coefficients[4][1]


def test_csv(series, tmp_path):
    text = fb.to_csv(series)
    lines = text.splitlines()
    assert lines[0] == "p,c" and len(lines) == 65
    assert float(lines[1].split(",")[1]) == series.coefficients[0][1]
    fb.export_csv(series, tmp_path / "s.csv")
    assert (tmp_path / "s.csv").read_text(encoding="utf-8") == text
