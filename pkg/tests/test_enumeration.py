import json
from collections import Counter
from pathlib import Path

import pytest

import oracles
from tricolor.enumeration import (
    SlopePartition,
    count_colorings,
    enumerate_colorings,
    enumerate_colorings_dfs,
    enumerate_slope_class,
    partition_by_slope,
    slope_class_by_filter,
)
from tricolor.errors import TooLarge
from tricolor.heights import lift, mod3, validate
from tricolor.lattice import Dims

DATA = json.loads((Path(__file__).parent / "data" / "slope_ratios.json").read_text())


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_ring_counts_match_chromatic_polynomial(n):
    dims = Dims(1, n)
    expected = oracles.cycle_colorings(n)
    assert count_colorings(dims, "transfer") == expected
    assert count_colorings(dims, "dfs") == expected
    assert sum(1 for _ in enumerate_colorings(dims)) == expected


def test_frozen_ring_values():
    assert [count_colorings(Dims(1, n)) for n in (4, 6, 8)] == [6, 22, 86]


def test_torus_4x4_against_backtracking():
    dims = Dims(2, 4)
    brute = oracles.brute_colorings(2, 4)
    assert count_colorings(dims, "transfer") == len(brute) == 990
    assert count_colorings(dims, "dfs") == 990
    ours = {tuple(int(x) for x in f.values.flatten()) for f in enumerate_colorings(dims)}
    assert ours == set(brute)


def test_dfs_and_layer_walk_agree():
    dims = Dims(2, 4)
    a = {f.key() for f in enumerate_colorings(dims)}
    b = {f.key() for f in enumerate_colorings_dfs(dims)}
    assert a == b


def test_torus_6x6_count():
    assert count_colorings(Dims(2, 6)) == sum(oracles.torus2_slope_counts(6).values()) == 5482800


def test_axis_swap_symmetry():
    dims = Dims(2, 6)
    part = partition_by_slope(dims)
    for (a, b), c in part.counts.items():
        assert part.counts[(b, a)] == c
        assert part.counts[(-a, -b)] == c


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_ring_partitions(n):
    part = partition_by_slope(Dims(1, n))
    assert part.counts == {(m,): c for m, c in oracles.cycle_slope_counts(n).items()}
    assert part.total == oracles.cycle_colorings(n)


def test_frozen_ring_partitions():
    assert partition_by_slope(Dims(1, 4)).counts == {(0,): 6}
    assert partition_by_slope(Dims(1, 6)).counts == {(0,): 20, (6,): 1, (-6,): 1}
    assert partition_by_slope(Dims(1, 8)).counts == {(0,): 70, (6,): 8, (-6,): 8}


@pytest.mark.parametrize("n", [4, 6, 8])
def test_square_partitions_against_oracle(n):
    part = partition_by_slope(Dims(2, n))
    assert part.counts == dict(oracles.torus2_slope_counts(n))
    frozen = DATA["counts"][f"d=2,n={n}"]
    assert {",".join(map(str, m)): str(c) for m, c in part.counts.items()} == frozen


def test_partition_by_listing_matches_transfer():
    dims = Dims(2, 4)
    assert partition_by_slope(dims, "enumerate").counts == partition_by_slope(dims, "transfer").counts
    assert partition_by_slope(dims, "dfs").counts == {(0, 0): 990}


def test_zero_class_counts_torus_height_functions():
    for d, n in [(1, 6), (1, 8), (2, 4)]:
        part = partition_by_slope(Dims(d, n))
        assert part.counts[(0,) * d] == oracles.torus_hhf_count(d, n)


def test_partition_json_roundtrip():
    part = partition_by_slope(Dims(1, 8))
    obj = part.to_json()
    assert all(isinstance(e["count"], str) for e in obj["counts"])
    assert SlopePartition.from_json(json.loads(part.dumps())).counts == part.counts


class TestSlopeClass:
    def test_single_staircase(self):
        members = list(enumerate_slope_class(Dims(1, 6), (6,)))
        assert len(members) == 1
        assert members[0].base.tolist() == [0, 1, 2, 3, 4, 5]

    def test_out_of_range(self):
        assert list(enumerate_slope_class(Dims(1, 6), (12,))) == []

    def test_sizes_sum_to_total(self):
        dims = Dims(1, 8)
        total = sum(len(list(enumerate_slope_class(dims, m))) for m in [(-6,), (0,), (6,)])
        assert total == 86

    def test_members_are_lifts(self):
        for h in enumerate_slope_class(Dims(1, 8), (-6,)):
            assert validate(h) == [] and h.slope == (-6,)
            assert lift(mod3(h)) == h

    def test_search_matches_filter_on_6x6(self, class_6x6_60):
        dims = Dims(2, 6)
        by_filter = slope_class_by_filter(dims, (6, 0))
        assert len(class_6x6_60) == 20
        assert {h.key() for h in by_filter} == {h.key() for h in class_6x6_60}

    def test_counts_per_class_on_6x6(self):
        dims = Dims(2, 6)
        counts = Counter()
        for m in [(6, 6), (-6, 6), (0, 6), (0, -6), (-6, 0)]:
            counts[m] = sum(1 for _ in enumerate_slope_class(dims, m))
        assert counts == {(6, 6): 1, (-6, 6): 1, (0, 6): 20, (0, -6): 20, (-6, 0): 20}


def test_guard():
    with pytest.raises(TooLarge):
        count_colorings(Dims(3, 8), "dfs")
    with pytest.raises(TooLarge):
        count_colorings(Dims(3, 4), "transfer")
