"""End-to-end acceptance battery; each test prints one PASS/FAIL line."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from oracles import cycle_slope_counts
from tricolor import checks, embedding, sampler
from tricolor.enumeration import enumerate_slope_class, partition_by_slope
from tricolor.heights import validate
from tricolor.lattice import Dims, VertexSet, Window
from tricolor.trichotomy import classify_type

DATA = Path(__file__).parent / "data" / "slope_ratios.json"


@pytest.fixture
def verdict(capsys):
    def emit(number: int, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def height_corpus():
    corpus = list(checks.lifts(Dims(2, 4))) + list(checks.lifts(Dims(1, 6)))
    return corpus + checks.stratified_qp_sample(Dims(2, 6), total=100, seed=0)


@pytest.fixture(scope="module")
def trichotomy_report(height_corpus):
    return checks.trichotomy_suite(height_corpus, {"corpus": "acceptance"})


def test_criterion_01_line_partitions(verdict):
    expected = {
        4: (6, {(0,): 6}),
        6: (22, {(0,): 20, (6,): 1, (-6,): 1}),
        8: (86, {(0,): 70, (6,): 8, (-6,): 8}),
    }
    ok = True
    for n, (total, counts) in expected.items():
        part = partition_by_slope(Dims(1, n))
        oracle = {(m,): c for m, c in cycle_slope_counts(n).items() if c}
        ok &= part.total == total and dict(part.counts) == counts == oracle
    verdict(1, ok)


def test_criterion_02_bijection(verdict):
    reps = [checks.bijection_suite(Dims(2, 4)), checks.bijection_suite(Dims(1, 6))]
    verdict(2, all(r.ok for r in reps), "; ".join(v for r in reps for v in r.violations[:3]))


def test_criterion_03_height_formula(verdict, height_corpus):
    rep = checks.height_formula_suite(height_corpus, {"corpus": "acceptance"})
    verdict(3, rep.ok and rep.details["functions"] == 990 + 22 + 100, f"{rep.checked} pairs")


def test_criterion_04_pair_trichotomy(verdict, trichotomy_report):
    rep = trichotomy_report
    bad = [v for v in rep.violations if "satisfies" in v or "share boundary" in v]
    verdict(4, not bad and rep.checked > 0, f"{rep.checked} ordered pairs")


CLASSES = [(Dims(1, 6), (6,)), (Dims(1, 6), (-6,)), (Dims(1, 8), (6,)), (Dims(1, 8), (-6,)),
           (Dims(2, 6), (6, 0)), (Dims(2, 6), (0, 6))]


def test_criterion_05_psi(verdict):
    reps = [checks.embedding_suite(dims, m) for dims, m in CLASSES]
    ok = all(r.ok and r.checked == r.details["members"] == r.details["distinct_images"] for r in reps)
    verdict(5, ok, "; ".join(v for r in reps for v in r.violations[:3]))


def test_criterion_06_direct_formula(verdict):
    members = list(enumerate_slope_class(Dims(1, 8), (6,)))
    general = {embedding.psi(h, (6,)).key() for h in members}
    direct = set()
    ok = len(members) == 8
    for h in members:
        t = embedding.psi_1d(h)
        ok &= t.slope == (0,) and not validate(t)
        direct.add(t.key())
    for h in members:
        t = embedding.psi(h, (6,))
        ok &= t.slope == (0,) and not validate(t)
    ok &= len(general) == len(direct) == 8
    verdict(6, ok, f"{len(general)} general and {len(direct)} direct images")


def test_criterion_07_long_boundaries(verdict):
    reps = [checks.steep_suite(Dims(2, 6), m) for m in [(6, 0), (0, 6)]]
    ok = all(r.ok and r.details["min_directed_boundary"] >= 6 for r in reps)
    verdict(7, ok, f"min directed boundary {min(r.details['min_directed_boundary'] for r in reps)}")


def test_criterion_08_ratios(verdict):
    frozen = json.loads(DATA.read_text())["ratios"]
    dims = [Dims(1, n) for n in (4, 6, 8, 10, 12)] + [Dims(2, n) for n in (4, 6, 8)]
    got = checks.exact_ratios(dims)
    ok = got == frozen
    ok &= all(Fraction(r) < 1 for block in got.values() for r in block.values())
    verdict(8, ok)


def test_criterion_09_sampler(verdict):
    reps = [checks.stats_suite(Dims(1, 4)), checks.stats_suite(Dims(1, 6)), checks.stats_suite(Dims(2, 4))]
    ok = all(r.ok and r.details["chi_square"]["p_value"] > 0.001 for r in reps)
    ok &= sampler.exact_slope_event(Dims(1, 6)) == Fraction(2, 22)
    ax = checks.stats_suite(Dims(2, 6))
    ok &= ax.ok and sampler.a_x_conditionals(2) == (Fraction(1, 18), Fraction(1, 2))
    verdict(9, ok, "; ".join(v for r in reps + [ax] for v in r.violations[:3]))


def test_criterion_10_trichotomy_battery(verdict, trichotomy_report):
    W = Window(Dims(2, 4), 2)
    point = VertexSet.from_vertices(W, [(0, 0)])
    half = VertexSet.from_predicate(W, lambda x, y: x <= 0)
    ok = classify_type(point).type == 1
    ok &= classify_type(point.complement()).type == -1
    h = classify_type(half)
    ok &= h.type == 0 and h.delta == (4, 0)
    c = classify_type(half.complement())
    ok &= c.type == 0 and c.functional == (-1, 0)
    bad = [v for v in trichotomy_report.violations if "complement" in v]
    ok &= not bad and sum(trichotomy_report.details["types"].values()) > 0
    verdict(10, ok, f"types {trichotomy_report.details['types']}")
