import json
from collections import Counter

import pytest

from oracles import cycle_colorings
from tricolor import checks
from tricolor.errors import PreconditionFailed
from tricolor.heights import QuasiPeriodicHF
from tricolor.lattice import Dims


def test_report_cap_and_json():
    rep = checks.SuiteReport("x", {"d": 1})
    assert rep.ok
    for i in range(250):
        rep.fail(str(i))
    doc = json.loads(json.dumps(rep.to_json()))
    assert not rep.ok and len(doc["violations"]) == 200 and doc["schema"] == "1"


def test_stratified_sample_composition():
    dims = Dims(2, 6)
    a = checks.stratified_qp_sample(dims)
    b = checks.stratified_qp_sample(dims)
    assert [h.key() for h in a] == [h.key() for h in b]
    assert len({h.key() for h in a}) == 100
    by = Counter(h.slope for h in a)
    assert by[(0, 0)] == 20
    for m in [(6, 0), (-6, 0), (0, 6), (0, -6)]:
        assert by[m] == 19
    for m in [(6, 6), (6, -6), (-6, 6), (-6, -6)]:
        assert by[m] == 1


@pytest.mark.parametrize("dims", [Dims(1, 6), Dims(1, 8), Dims(2, 4)])
def test_bijection_suite(dims):
    rep = checks.run_suite("bijection", dims)
    assert rep.ok and rep.checked > 0


def test_height_formula_suite():
    rep = checks.run_suite("height-formula", Dims(1, 8))
    count = cycle_colorings(8)
    assert rep.ok and rep.details["functions"] == count and rep.checked == count * 64


def test_height_formula_rejects_non_height_function():
    with pytest.raises(PreconditionFailed):
        checks.height_formula_violations(QuasiPeriodicHF(Dims(1, 4), (0,), [0, 1, 3, 1]))


def test_trichotomy_suite_small():
    rep = checks.run_suite("trichotomy", Dims(1, 8))
    assert rep.ok, rep.violations[:5]
    assert rep.details["ordered_pairs"] == rep.checked > 0


def test_trichotomy_suite_sampled_plane():
    rep = checks.trichotomy_suite(checks.stratified_qp_sample(Dims(2, 4), total=20), {"d": 2, "n": 4})
    assert rep.ok, rep.violations[:5]


@pytest.mark.parametrize("m", [(-6,), (12,)])
def test_embedding_suite_line(m):
    rep = checks.run_suite("embedding", Dims(1, 12), m)
    assert rep.ok, rep.violations[:5]
    assert rep.details["distinct_images"] == rep.details["members"]


def test_steep_suite():
    rep = checks.run_suite("steep", Dims(1, 12), (12,))
    assert rep.ok, rep.violations[:5]


def test_stats_suite():
    rep = checks.stats_suite(Dims(1, 6), draws=20000)
    assert rep.ok, rep.violations


def test_exact_ratios():
    r = checks.exact_ratios([Dims(1, 6)])
    assert r["d=1,n=6"]["6"] == "1/20"
