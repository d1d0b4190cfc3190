import json

import pytest

from besselprod import validation as val


def test_reports_reproducible():
    a = val.two_suite_draw(11, 3)
    b = val.two_suite_draw(11, 3)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    assert len({r.identity_id for r in a}) == len(a) == 18


def test_small_suites_pass():
    for scope in val.SCOPES:
        s = val.summarize(val.run_suite(scope, 6, 5))
        assert s.ok, [(r.identity_id, r.rel_residual, r.warning) for r in s.failed]


def test_parallel_matches_serial():
    serial = val.run_suite("three", 9, 2, workers=1)
    parallel = val.run_suite("three", 9, 2, workers=2)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in parallel]


def test_y_inclusive_split():
    general = [d for d in range(150) if any(
        s[1] != 0 for s in val.three_suite_draw(1, d)[0].params["sols"])]
    assert len(general) == 50


def test_report_shape():
    r = val.two_suite_draw(0, 0)[0]
    d = r.to_dict()
    assert d["pass"] is True and "passed" not in d
    json.dumps(d)


def test_tolerance():
    t = val.Tolerance(1e-9, 1e-12)
    assert t.ok(1e-10, 1.0) and not t.ok(1e-8, 1.0) and t.ok(5e-13, 0.0)


def test_even_parity_is_warning():
    reports = [r for d in range(40) for r in val.approx_suite_draw(7, d)
               if r.identity_id == "eq60"]
    warned = [r for r in reports if r.warning]
    assert warned and all(r.passed for r in warned)


def test_unknown_scope():
    with pytest.raises(ValueError):
        val.run_suite("four", 1, 0)
