from dataclasses import replace

import numpy as np
import pytest

from polyspec.gen import FIXTURE_IDS, fixture
from polyspec.matpoly import MatrixPolynomial
from polyspec.reproduce import check_fixture, reproduce


def test_all_fixtures_pass():
    results = reproduce()
    assert [r.id for r in results] == list(FIXTURE_IDS)
    for r in results:
        assert r.passed, (r.id, [c for c in r.checks if not c.ok], r.error)
        assert r.checks


def test_only_subset_and_unknown_id():
    assert [r.id for r in reproduce(["F7", "F1"])] == ["F1", "F7"]
    with pytest.raises(KeyError):
        reproduce(["F0"])


def test_wrong_expectation_is_reported():
    fx = fixture("F7")
    bad = replace(fx, expected={**fx.expected, "min_modulus_below": 0.3})
    r = check_fixture(bad)
    assert not r.passed
    assert [c.name for c in r.checks if not c.ok] == ["min_modulus_below"]


def test_bad_expectation_shape_becomes_fail():
    fx = fixture("F3")
    # expected vectors of the wrong length must not escape as an exception
    broken = replace(fx, payload={"polynomials": (MatrixPolynomial((np.eye(2), np.eye(2))),)},
                     expected={"eigenvectors": {"values": [[1, 0]], "vectors": [[[1, 0], [0, 0], [0, 0]]]}})
    r = check_fixture(broken)
    assert not r.passed and r.error.startswith("ValueError")


def test_result_serializes():
    d = reproduce(["F13"])[0].to_dict()
    assert d["id"] == "F13" and d["status"] == "PASS"
    assert all({"name", "ok", "detail"} <= set(c) for c in d["checks"])
