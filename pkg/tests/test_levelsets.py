import itertools

import numpy as np
import pytest

import oracles
from tricolor.errors import LevelMismatch, PreconditionFailed
from tricolor.heights import QuasiPeriodicHF, checkerboard, lift
from tricolor.lattice import Dims, Torus, VertexSet, Window, edge_boundary_mask, extb, intb, neighbors, project
from tricolor.levelsets import (
    LevelStructure,
    all_components,
    basic_property_violations,
    component_of_edge,
    height_diff_via_components,
    separating_family,
    separating_family_global,
    sublevel_component,
    sublevel_set,
    superlevel_component,
    translate_component,
)

RING6 = Dims(1, 6)
IDENTITY = QuasiPeriodicHF(RING6, (6,), [0, 1, 2, 3, 4, 5])  # h(x) = x
W1 = Window(RING6, 2)


def cells(U):
    return sorted(x[0] for x in U.vertices())


def half_line(top):
    return list(range(W1.lo, top + 1))


class TestSublevelSet:
    def test_checkerboard_origin(self):
        r = lift(checkerboard(Dims(2, 4))).torus()
        assert sublevel_set(r, (0, 0), 0, Torus(r.dims)).vertices() == [(0, 0)]

    def test_identity(self):
        assert cells(sublevel_set(IDENTITY, (0,), 3, W1)) == half_line(3)

    def test_level_below_anchor(self):
        with pytest.raises(LevelMismatch):
            sublevel_set(IDENTITY, (2,), 1, W1)

    def test_level_outside_window_heights(self):
        with pytest.raises(LevelMismatch):
            sublevel_set(IDENTITY, (0,), 500, W1)

    def test_torus_lattice_compatibility(self, lifts_4x4):
        dims = Dims(2, 4)
        W, T = Window(dims, 2), Torus(dims)
        for h in lifts_4x4[::20]:
            L, R = LevelStructure(h, W), LevelStructure(h.torus(), T)
            top = int(R.heights.max())
            for u in [(0, 0), (1, 2), (3, 3)]:
                for k in range(L.height(u), top + 1):
                    lat = project(L.sublevel_set(u, k))
                    tor = R.sublevel_set(u, k)
                    assert lat == tor


class TestComponents:
    def test_identity_component(self):
        c = sublevel_component(IDENTITY, (0,), (1,), 0, W1)
        assert cells(c.carrier) == half_line(0)
        assert (c.inner_height, c.outer_height) == (0, 1)

    def test_anchor_order_required(self):
        with pytest.raises(LevelMismatch):
            sublevel_component(IDENTITY, (3,), (1,), 2, W1)

    def test_superlevel_duality(self, lifts_4x4):
        W = Window(Dims(2, 4), 2)
        for h in lifts_4x4[::99]:
            S = LevelStructure(h, W)
            u = (0, 0)
            for v in [(1, 0), (0, 3), (2, 1)]:
                if S.height(v) < S.height(u):
                    k = S.height(u)
                    a = superlevel_component(h, u, v, k, W)
                    b = sublevel_component(h.negate(), u, v, -k, W)
                    assert a.carrier == b.carrier
                    assert a.kind == "super" and a.inner_height == k and a.outer_height == k - 1

    def test_edge_component(self):
        c = component_of_edge(IDENTITY, ((2,), (3,)), W1)
        assert cells(c.carrier) == half_line(2)
        assert component_of_edge(IDENTITY, ((3,), (2,)), W1).carrier == c.carrier

    def test_edge_component_rejects_flat_pair(self):
        with pytest.raises(PreconditionFailed):
            component_of_edge(IDENTITY, ((0,), (2,)), W1)

    def test_basic_properties_on_lattice(self, lifts_4x4):
        W = Window(Dims(2, 4), 2)
        core = W.core()
        for h in lifts_4x4[::33]:
            S = LevelStructure(h, W)
            for c in all_components(S, core & W.core(2 * W.dims.n)):
                assert basic_property_violations(S, c) == []

    def test_each_torus_edge_in_one_boundary(self, lifts_4x4):
        dims = Dims(2, 4)
        T = Torus(dims)
        for h in lifts_4x4[::10]:
            R = LevelStructure(h.torus(), T)
            comps = {c.carrier: c for c in all_components(R)}
            masks = [edge_boundary_mask(U.mask, T) for U in comps]
            cover = np.sum(masks, axis=0)
            assert np.all(cover == 1)

    def test_distinct_components_boundary_disjoint(self, lifts_4x4):
        W = Window(Dims(2, 4), 2)
        for h in lifts_4x4[::47]:
            S = LevelStructure(h, W)
            comps = all_components(S, W.core(2 * W.dims.n))
            masks = [edge_boundary_mask(c.carrier.mask, W) & W.core() for c in comps]
            for a, b in itertools.combinations(masks, 2):
                assert not np.any(a & b)


def grow(rng, allowed, start, steps, dims):
    """Random connected subset of ``allowed`` containing ``start``."""
    V = {start}
    frontier = [start]
    for _ in range(steps):
        x = frontier[rng.integers(len(frontier))]
        nb = [y for y in neighbors(x, dims) if allowed[y] and y not in V]
        if nb:
            y = nb[rng.integers(len(nb))]
            V.add(y)
            frontier.append(y)
    return V


def test_containment_criterion(lifts_4x4):
    """Both bullets of the containment criterion on torus components, 50 witnesses each."""
    dims = Dims(2, 4)
    T = Torus(dims)
    rng = np.random.default_rng(0)
    checked = 0
    for h in lifts_4x4[::45]:
        R = LevelStructure(h.torus(), T)
        for c in all_components(R)[:4]:
            U, k = c.carrier, c.level
            high = R.heights > k
            low_ok = ~extb(U).mask
            for _ in range(50):
                V = grow(rng, high, c.v, int(rng.integers(1, 8)), dims)
                assert c.u not in V
                assert not (V & set(U.vertices()))
                seed = U.vertices()[rng.integers(len(U))]
                V2 = grow(rng, low_ok, seed, int(rng.integers(1, 8)), dims)
                assert V2 <= set(U.vertices())
                checked += 1
    assert checked >= 50


class TestSeparatingFamily:
    def test_empty_for_equal_anchors(self):
        assert len(separating_family(IDENTITY, (2,), (2,), W1)) == 0

    def test_identity_three_components(self):
        fam = separating_family(IDENTITY, (0,), (3,), W1)
        assert [cells(c.carrier) for c in fam] == [half_line(0), half_line(1), half_line(2)]
        assert fam.is_chain()

    def test_path_walk_equals_global_scan_d1(self, lifts_ring6):
        W = Window(RING6, 2)
        region = W.core()
        for h in lifts_ring6:
            S = LevelStructure(h, W)
            for u, v in itertools.product(range(-3, 9), repeat=2):
                a = S.separating((u,), (v,))[0]
                b = separating_family_global(S, (u,), (v,), region)
                assert {c.carrier for c in a} == {c.carrier for c in b}
                assert a.is_chain()

    def test_interval_brute_force_d1(self, lifts_ring6):
        W = Window(RING6, 2)
        for h in lifts_ring6[::3]:
            S = LevelStructure(h, W)
            f = h.eval
            for u, v in [(0, 5), (2, -3), (4, 7)]:
                ours = len(S.separating((u,), (v,))[0])
                ref = oracles.interval_family(lambda x: f((x,)), u, v, W.lo, W.hi)
                assert ours == ref

    def test_path_walk_equals_global_scan_sampled_d2(self, lifts_4x4, class_6x6_60):
        rng = np.random.default_rng(1)
        for h in lifts_4x4[::90] + class_6x6_60[::5]:
            W = Window(h.dims, 2)
            S = LevelStructure(h, W)
            region = W.core()
            for _ in range(3):
                u = tuple(int(c) for c in rng.integers(0, h.dims.n, 2))
                v = tuple(int(c) for c in rng.integers(0, h.dims.n, 2))
                a = S.separating(u, v)[0]
                b = separating_family_global(S, u, v, region)
                assert {c.carrier for c in a} == {c.carrier for c in b}


class TestHeightFormula:
    def test_zero(self):
        assert height_diff_via_components(IDENTITY, (1,), (1,), W1) == 0

    def test_identity(self):
        assert height_diff_via_components(IDENTITY, (0,), (5,), W1) == 5

    def test_all_pairs_ring6(self, lifts_ring6):
        for h in lifts_ring6:
            S = LevelStructure(h, W1)
            for u, v in itertools.product(range(6), repeat=2):
                fwd, bwd = S.separating((u,), (v,))
                assert len(fwd) - len(bwd) == h.eval((v,)) - h.eval((u,))


class TestTranslation:
    def test_zero_offset(self):
        c = sublevel_component(IDENTITY, (0,), (1,), 0, W1)
        assert translate_component(c, (0,), IDENTITY).carrier == c.carrier

    def test_identity_by_period(self):
        c = sublevel_component(IDENTITY, (0,), (1,), 0, W1)
        t = translate_component(c, (6,), IDENTITY)
        assert t.level == 6
        known = [x for x in cells(t.carrier) if x >= W1.lo + 6]
        assert known == list(range(W1.lo + 6, 7))

    def test_recomputation(self, class_6x6_60):
        for h in class_6x6_60[::4]:
            W = Window(h.dims, 2)
            S = LevelStructure(h, W)
            c = S.edge_component((0, 0), (1, 0))
            for x in [(6, 0), (0, -6), (-6, 6)]:
                t = translate_component(c, x, h)
                again = S.component(t.u, t.v, t.level)
                ok = VertexSet.from_predicate(W, lambda a, b: (abs(a - 3) < 6) & (abs(b - 3) < 6)).mask
                assert np.array_equal(t.carrier.mask[ok], again.carrier.mask[ok])

    def test_offset_must_be_lattice_period(self):
        c = sublevel_component(IDENTITY, (0,), (1,), 0, W1)
        with pytest.raises(PreconditionFailed):
            translate_component(c, (3,), IDENTITY)


def test_component_json():
    c = sublevel_component(IDENTITY, (0,), (1,), 0, Window(RING6, 1))
    obj = c.to_json()
    assert obj["kind"] == "sub" and obj["level"] == 0
    assert obj["carrier"][0] == [-6]
