import itertools

import numpy as np
import pytest

from tricolor.errors import PreconditionFailed
from tricolor.lattice import Dims, VertexSet, Window, translate
from tricolor.levelsets import LevelStructure, all_components
from tricolor.trichotomy import (
    CODISJOINT,
    DISJOINT,
    NESTED,
    TypeClassification,
    classify_type,
    directed_boundary_count,
    forbidden_squares,
    is_bicon,
    is_boundary_disjoint,
    is_translation_respecting,
    long_boundary_bound,
    minimal_translation,
    order_index,
    pair_table,
    pair_trichotomy,
    shells_connected,
    translate_by_order,
    translation_order_violations,
)

W1 = Window(Dims(1, 4), 2)
W2 = Window(Dims(2, 4), 2)


def line(pred):
    return VertexSet.from_predicate(W1, pred)


def plane(pred, window=W2):
    return VertexSet.from_predicate(window, pred)


class TestBicon:
    def test_point_in_plane(self):
        assert is_bicon(VertexSet.from_vertices(W2, [(0, 0)]))

    def test_point_on_line(self):
        assert not is_bicon(VertexSet.from_vertices(W1, [(0,)]))

    def test_empty_and_full(self):
        assert not is_bicon(VertexSet.empty(W2))
        assert not is_bicon(VertexSet.full(W2))

    def test_shells_of_a_square(self):
        U = plane(lambda x, y: (abs(x) <= 2) & (abs(y) <= 2))
        assert shells_connected(U) == {"boundary": True, "outer": True, "inner": True}


class TestBoundaryDisjoint:
    def test_nested_half_lines(self):
        assert is_boundary_disjoint(line(lambda x: x <= 0), line(lambda x: x <= 2))

    def test_crossing_half_planes(self):
        A, B = plane(lambda x, y: x <= 0), plane(lambda x, y: y <= 0)
        assert forbidden_squares(A.mask, B.mask, W2) == 1
        assert not is_boundary_disjoint(A, B)

    def test_complement_symmetry(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            A = VertexSet(W2, rng.random(W2.shape) < 0.5)
            B = VertexSet(W2, rng.random(W2.shape) < 0.5)
            assert is_boundary_disjoint(A, B) == is_boundary_disjoint(A.complement(), B)

    def test_shared_edge(self):
        assert not is_boundary_disjoint(line(lambda x: x <= 0), line(lambda x: x >= 1))


class TestPairTrichotomy:
    def test_nested(self):
        v = pair_trichotomy(line(lambda x: x <= 0), line(lambda x: x <= 2))
        assert v.tag == NESTED and v.inner == 1

    def test_disjoint(self):
        assert pair_trichotomy(line(lambda x: x <= 0), line(lambda x: x >= 2)).tag == DISJOINT

    def test_codisjoint(self):
        assert pair_trichotomy(line(lambda x: x <= 2), line(lambda x: x >= 0)).tag == CODISJOINT

    def test_preconditions(self):
        A = line(lambda x: x <= 0)
        with pytest.raises(PreconditionFailed, match="equal"):
            pair_trichotomy(A, A)
        with pytest.raises(PreconditionFailed, match="biconnected"):
            pair_trichotomy(A, VertexSet.from_vertices(W1, [(0,)]))
        with pytest.raises(PreconditionFailed, match="boundary disjoint"):
            pair_trichotomy(A, line(lambda x: x >= 1))

    def test_table_matches_pairwise(self, lifts_4x4):
        rng = np.random.default_rng(2)
        for h in lifts_4x4[::110]:
            S = LevelStructure(h, W2)
            comps = [c.carrier for c in all_components(S, W2.core())]
            T = pair_table(comps)
            for _ in range(40):
                i, j = rng.choice(len(comps), 2, replace=False)
                verdict = pair_trichotomy(comps[i], comps[j])
                assert verdict.alternatives == T.alternatives(i, j)
                assert T.boundary_disjoint[i, j]


def zigzag():
    # graph of a period-8 zigzag of amplitude 8, which crosses its translate by 4
    return plane(lambda x, y: y <= 2 * np.abs((x % 8) - 4))


class TestTranslationRespecting:
    def test_half_space(self):
        assert is_translation_respecting(plane(lambda x, y: x <= 0))

    def test_crossing_zigzag(self):
        U = zigzag()
        assert is_bicon(U)
        assert not is_translation_respecting(U)


class TestClassify:
    def test_point(self):
        c = classify_type(VertexSet.from_vertices(W2, [(0, 0)]))
        assert c.type == 1

    def test_punctured_plane(self):
        c = classify_type(VertexSet.from_vertices(W2, [(0, 0)]).complement())
        assert c.type == -1

    def test_half_space(self):
        c = classify_type(plane(lambda x, y: x <= 0))
        assert c.type == 0 and c.delta == (4, 0) and c.functional == (1, 0)

    def test_diagonal_half_spaces(self):
        c = classify_type(plane(lambda x, y: x + y <= 0))
        assert c.functional == (1, 1) and c.delta == (0, 4)
        c = classify_type(plane(lambda x, y: 2 * x + y <= 0))
        assert c.functional == (2, 1) and c.delta == (0, 4)

    def test_complement_rule_on_examples(self):
        for pred in (lambda x, y: x <= 0, lambda x, y: x + y <= 0, lambda x, y: (x == 0) & (y == 0)):
            U = plane(pred)
            a, b = classify_type(U), classify_type(U.complement())
            assert b.types == frozenset(-t for t in a.types)
            if a.type == 0:
                assert b.functional == tuple(-c for c in a.functional)
                assert order_index(b, b.delta) == 1

    def test_degenerate_marker(self):
        c = TypeClassification(frozenset({1, -1}))
        assert c.degenerate and c.type is None

    def test_minimal_translation_tie_break(self):
        assert minimal_translation((1, 0), 4) == (4, 0)
        assert minimal_translation((1, 1), 4) == (0, 4)
        assert minimal_translation((-1, -1), 4) == (-4, 0)


class TestOrder:
    def test_half_space(self):
        c = classify_type(plane(lambda x, y: x <= 0))
        assert order_index(c, (0, 0)) == 0
        assert order_index(c, (8, 0)) == 2
        assert order_index(c, (0, 4)) == 0

    def test_requires_lattice_vector(self):
        c = classify_type(plane(lambda x, y: x <= 0))
        with pytest.raises(PreconditionFailed):
            order_index(c, (2, 0))

    def test_requires_type_zero(self):
        c = classify_type(VertexSet.from_vertices(W2, [(0, 0)]))
        with pytest.raises(PreconditionFailed):
            order_index(c, (4, 0))

    def test_translate_by_order(self):
        U = plane(lambda x, y: x <= 0)
        c = classify_type(U)
        V = translate_by_order(U, c, 1)
        core = W2.core()
        assert np.array_equal(V.mask[core], plane(lambda x, y: x <= 4).mask[core])

    def test_order_facts(self):
        U = plane(lambda x, y: x + y <= 0)
        assert translation_order_violations(U, classify_type(U)) == []

    def test_heights_of_translates(self, class_6x6_60):
        """h(intb(U + z)) - h(intb U) equals the height shift times the order of z."""
        for h in class_6x6_60[::5]:
            W = Window(h.dims, 2)
            S = LevelStructure(h, W)
            for c in all_components(S, W.core(2 * h.dims.n))[:6]:
                cls = classify_type(c.carrier)
                if cls.type != 0:
                    continue
                shift_height = sum(m * d // h.dims.n for m, d in zip(h.slope, cls.delta))
                for z in [(6, 0), (0, 6), (-6, 6)]:
                    level_shift = sum(m * d // h.dims.n for m, d in zip(h.slope, z))
                    assert level_shift == shift_height * order_index(cls, z)


class TestDirectedBoundary:
    def test_flat_interface(self):
        V = plane(lambda x, y: x <= 0)
        assert directed_boundary_count(V, 0) == 4
        assert long_boundary_bound(classify_type(V), 0, 4, 2) == 4

    def test_wiggly_interface(self):
        y0 = lambda y: (y % 4) == 0  # noqa: E731
        y1 = lambda y: (y % 4) == 1  # noqa: E731
        V = plane(lambda x, y: (x <= 0) | (y0(y) & (x >= 1) & (x <= 3)) | (y1(y) & (x == 3)))
        assert is_bicon(V)
        assert classify_type(V).type == 0
        assert directed_boundary_count(V, 0) == 6


class TestOnComponents:
    def test_monotone_types_and_complements(self, lifts_4x4):
        for h in lifts_4x4[::60]:
            S = LevelStructure(h, W2)
            comps = [c.carrier for c in all_components(S, W2.core())]
            cls = [classify_type(U) for U in comps]
            for U, a in zip(comps, cls):
                b = classify_type(U.complement())
                assert b.types == frozenset(-t for t in a.types)
                assert is_translation_respecting(U)
            for (i, U), (j, V) in itertools.permutations(enumerate(comps), 2):
                if U.issubset(V) and cls[i].type is not None and cls[j].type is not None:
                    assert cls[i].type >= cls[j].type
