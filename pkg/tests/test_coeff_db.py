import math

import numpy as np
import pytest

from besselprod import coeff_db as cdb
from besselprod.errors import IntegrityError, NotFoundError, ParseError
from besselprod.three_product import definite_coefficients


@pytest.fixture(scope="module")
def db():
    return cdb.generate(10, workers=1)


def test_count_and_order(db):
    assert len(db) == 220 == cdb.record_count(10)
    keys = [r.key for r in db]
    assert keys == sorted(keys)
    assert not db.audit() and not db.fallbacks


def test_lookup_orientation(db):
    rec = db.lookup(1, 4, 3, 2)
    assert (rec.m, rec.n, rec.p) == (4, 3, 2)
    canon = db.lookup(1, 2, 3, 4)
    assert rec.c000 == canon.c000 and rec.d111 == canon.d111
    direct = definite_coefficients(1, 4, 3, 2)
    assert rec.c110 == pytest.approx(direct[1].value, rel=1e-9)


def test_lookup_errors(db):
    with pytest.raises(NotFoundError) as e:
        db.lookup(1, 1, 2, 11)
    assert e.value.reason == "out_of_range"
    with pytest.raises(NotFoundError):
        db.lookup(0, 1, 2, 3)
    partial = cdb.Database([r for r in db if r.key != (1, 1, 2, 3)], max_mode=10, qs=(1,))
    with pytest.raises(NotFoundError) as e:
        partial.lookup(1, 3, 2, 1)
    assert e.value.reason == "not_generated"


def test_csv_round_trip(db, tmp_path):
    path = tmp_path / "c.csv"
    db.export_csv(path)
    again = cdb.Database.import_csv(path)
    assert again.to_csv() == db.to_csv()
    assert path.read_bytes() == again.to_csv().encode("utf-8")


def test_worker_count_independent(db):
    assert cdb.generate(10, workers=2).to_csv() == db.to_csv()


def test_binary_index(db, tmp_path):
    path = tmp_path / "c.bpk"
    db.write_index(path)
    idx = cdb.BinaryIndex(path)
    assert len(idx) == len(db)
    for key in ((1, 1, 1), (3, 9, 5), (10, 10, 10), (2, 2, 7)):
        assert idx.lookup(1, *key) == db.lookup(1, *key)
    with pytest.raises(NotFoundError):
        idx.lookup(1, 1, 1, 11)


def test_sparse_binary_index(db, tmp_path):
    sparse = cdb.Database([r for r in db if r.p != 7], max_mode=10, qs=(1,))
    path = tmp_path / "s.bpk"
    sparse.write_index(path)
    idx = cdb.BinaryIndex(path)
    assert idx.lookup(1, 2, 3, 8) == db.lookup(1, 2, 3, 8)
    with pytest.raises(NotFoundError) as e:
        idx.lookup(1, 1, 2, 7)
    assert e.value.reason == "not_generated"


def test_bad_index(tmp_path):
    p = tmp_path / "bad.bpk"
    p.write_bytes(b"XXXX" + b"\0" * 30)
    with pytest.raises(IntegrityError):
        cdb.BinaryIndex(p)


def test_triple_rank_dense():
    keys = list(cdb.canonical_triples(7))
    assert [cdb.triple_rank(*k, 7) for k in keys] == list(range(len(keys)))


@pytest.mark.parametrize("text, line", [
    ("", 1),
    ("a,b\n", 1),
    (",".join(cdb.HEADER) + "\n1,1,2\n", 2),
    (",".join(cdb.HEADER) + "\n1,1,2,3,x,0,0,0,quadrature\n", 2),
    (",".join(cdb.HEADER) + "\n1,3,2,1,0,0,0,0,quadrature\n", 2),
    (",".join(cdb.HEADER) + "\n1,1,2,3,0,0,0,0,magic\n", 2),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as e:
        cdb.Database.from_csv_text(text)
    assert e.value.line == line


def test_integrity_error(db):
    text = db.to_csv().splitlines()
    row = text[5].split(",")
    row[5] = repr(float(row[5]) * 1.01)
    text[5] = ",".join(row)
    with pytest.raises(IntegrityError):
        cdb.Database.from_csv_text("\n".join(text) + "\n")


def test_permutation_audit(db):
    rng = np.random.default_rng(3)
    for _ in range(50):
        m, n, p = (int(v) for v in rng.integers(1, 11, size=3))
        c000 = definite_coefficients(1, m, n, p)[0]
        rec = db.lookup(1, m, n, p)
        assert abs(c000.value - rec.c000) <= 10 * (c000.abs_err + rec.abs_err) + 1e-15


def test_equilateral_decrease():
    vals = [cdb.compute_record(1, m, m, m)[0].c000 for m in range(20, 151, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_method_policy():
    rec, fb = cdb.compute_record(1, 160, 160, 160)
    assert rec.method == "asymptotic" and not fb
    assert rec.abs_err == pytest.approx(abs(rec.c000) * cdb.asymptotic_rel_error(160, 160, 160))
    assert cdb.compute_record(1, 120, 110, 101)[0].method == "quadrature_extended"
    assert cdb.asymptotic_rel_error(20, 89, 31) == 1.0


def test_zero_kind_zero_records():
    db0 = cdb.generate(4, q=0, workers=1)
    assert not db0.audit()
    rec = db0.lookup(0, 2, 3, 4)
    direct = definite_coefficients(0, 2, 3, 4)
    assert rec.d111 == pytest.approx(direct[2].value, rel=1e-9)


def test_worker_env_cap(monkeypatch):
    monkeypatch.setenv("BPK_THREADS", "1")
    assert cdb.worker_count(8) == 1
    monkeypatch.setenv("BPK_THREADS", "junk")
    assert cdb.worker_count(3) == 3


def test_generate_arguments():
    with pytest.raises(ValueError):
        cdb.generate(0)
    with pytest.raises(ValueError):
        cdb.generate(3, q=2)
