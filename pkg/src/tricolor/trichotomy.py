"""Biconnected sets, boundary disjointness and the two trichotomies.

Translation classification works on the translates ``U + n z`` that are
visible inside a window. Each informative translate is compared with
``U`` on the *trusted region* (the window core intersected with the
shifted core). For a type 0 set the order of translates is additive in
``z``, so it is a linear functional ``z -> a . z``; its kernel is read off
the translates equal to ``U`` and its sign off the nested ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionFailed, WindowOverflow, WindowUnstable
from .lattice import (
    MAX_K,
    EdgeSet,
    Space,
    VertexSet,
    Window,
    edge_boundary_mask,
    edge_valid,
    extb,
    intb,
    is_connected,
    plus_mask,
    project,
    shift_by,
    shifted,
)

DISJOINT = "Disjoint"
CODISJOINT = "CoDisjoint"
NESTED = "Nested"

# translates U + n z are compared for |z_i| <= MAX_OFFSET
MAX_OFFSET = 2


@dataclass(frozen=True)
class TrichotomyVerdict:
    tag: str | None
    alternatives: tuple[str, ...]
    inner: int | None = None  # 1 when U1 is strictly inside U2, 2 for the reverse


@dataclass(frozen=True)
class TypeClassification:
    """``types`` is ``{+1, -1}`` for the degenerate single-translate case."""

    types: frozenset[int]
    functional: tuple[int, ...] | None = None
    delta: tuple[int, ...] | None = None
    samples: dict = field(default_factory=dict, compare=False)
    K: int | None = field(default=None, compare=False)
    n: int | None = field(default=None, compare=False)

    @property
    def type(self) -> int | None:
        return next(iter(self.types)) if len(self.types) == 1 else None

    @property
    def degenerate(self) -> bool:
        return self.types == frozenset({1, -1})


# ----------------------------------------------------------- biconnected


def is_bicon(U: VertexSet) -> bool:
    """Nonempty, proper, and both ``U`` and its complement connected."""
    if not U or U.mask.all():
        return False
    return is_connected(U) and is_connected(U.complement())


def shells_connected(U: VertexSet) -> dict[str, bool]:
    """Connectivity of ``intb U | extb U``, ``U^{++} - U`` and ``U - U^{--}``."""
    space, m = U.space, U.mask
    pp = plus_mask(plus_mask(m, space), space)
    mm = ~plus_mask(plus_mask(~m, space), space)
    both = intb(U).mask | extb(U).mask
    return {
        "boundary": is_connected(VertexSet(space, both)),
        "outer": is_connected(VertexSet(space, pp & ~m)),
        "inner": is_connected(VertexSet(space, m & ~mm)),
    }


# ---------------------------------------------------- boundary disjoint


def _region_edges(space: Space, region: np.ndarray | None) -> np.ndarray:
    valid = edge_valid(space)
    if region is None:
        return valid
    for axis in range(space.dims.d):
        valid[axis] &= region & shifted(region, axis, 1, space.wrap)
    return valid


def forbidden_squares(A: np.ndarray, B: np.ndarray, space: Space, region: np.ndarray | None = None) -> int:
    """Count 4-cycles whose corners carry all four membership patterns in cyclic order.

    A 4-cycle ``(v00, v01, v11, v10)`` with ``v_ab`` in ``U1`` iff ``a`` and
    in ``U2`` iff ``b``. In a unit square the four pattern codes then sit
    with ``00`` opposite ``11`` and ``01`` opposite ``10``.
    """
    code = 2 * A.astype(np.int8) + B.astype(np.int8)
    ok = np.ones(space.shape, dtype=bool) if region is None else region
    total = 0
    d = space.dims.d
    for i, j in itertools.combinations(range(d), 2):
        c0 = code
        c1 = shifted(code, i, 1, space.wrap, fill=-8)
        c2 = shifted(shifted(code, i, 1, space.wrap, fill=-8), j, 1, space.wrap, fill=-8)
        c3 = shifted(code, j, 1, space.wrap, fill=-8)
        inside = (c1 >= 0) & (c2 >= 0) & (c3 >= 0) & ok
        if region is not None:
            inside &= shifted(ok, i, 1, space.wrap) & shifted(ok, j, 1, space.wrap)
            inside &= shifted(shifted(ok, i, 1, space.wrap), j, 1, space.wrap)
        distinct = (c0 != c1) & (c0 != c2) & (c0 != c3) & (c1 != c2) & (c1 != c3) & (c2 != c3)
        bad = inside & distinct & ((c0 ^ c2) == 3)
        total += int(bad.sum())
    return total


def shared_boundary_edges(A: np.ndarray, B: np.ndarray, space: Space, region: np.ndarray | None = None) -> int:
    ea = edge_boundary_mask(A, space)
    eb = edge_boundary_mask(B, space)
    return int((ea & eb & _region_edges(space, region)).sum())


def is_boundary_disjoint(U1: VertexSet, U2: VertexSet, region: np.ndarray | None = None) -> bool:
    if U1.space != U2.space:
        raise PreconditionFailed("sets live in different spaces")
    A, B = U1.mask, U2.mask
    return (
        shared_boundary_edges(A, B, U1.space, region) == 0
        and forbidden_squares(A, B, U1.space, region) == 0
    )


# ------------------------------------------------------- pair trichotomy


def _alternatives(A: np.ndarray, B: np.ndarray, region: np.ndarray | None) -> tuple[list[str], int | None]:
    if region is not None:
        A, B = A[region], B[region]
    alts, inner = [], None
    if not np.any(A & B):
        alts.append(DISJOINT)
    if not np.any(~A & ~B):
        alts.append(CODISJOINT)
    a_in_b = not np.any(A & ~B)
    b_in_a = not np.any(B & ~A)
    if a_in_b != b_in_a:
        alts.append(NESTED)
        inner = 1 if a_in_b else 2
    return alts, inner


def pair_trichotomy(U1: VertexSet, U2: VertexSet) -> TrichotomyVerdict:
    """Which of: disjoint, complements disjoint, strictly nested."""
    if U1 == U2:
        raise PreconditionFailed("the two sets are equal")
    for name, U in (("U1", U1), ("U2", U2)):
        if not is_bicon(U):
            raise PreconditionFailed(f"{name} is not biconnected")
    if not is_boundary_disjoint(U1, U2):
        raise PreconditionFailed("sets are not boundary disjoint")
    alts, inner = _alternatives(U1.mask, U2.mask, None)
    tag = alts[0] if len(alts) == 1 else None
    return TrichotomyVerdict(tag, tuple(alts), inner if tag == NESTED else None)


@dataclass(frozen=True)
class PairTable:
    """Pairwise relations of a family of sets in one space, as ``k x k`` arrays."""

    meets: np.ndarray  # U_i and U_j intersect
    complements_meet: np.ndarray
    inside: np.ndarray  # U_i is a subset of U_j
    shared_edges: np.ndarray
    squares: np.ndarray

    @property
    def boundary_disjoint(self) -> np.ndarray:
        return (self.shared_edges == 0) & (self.squares == 0)

    def alternatives(self, i: int, j: int) -> tuple[str, ...]:
        alts = []
        if not self.meets[i, j]:
            alts.append(DISJOINT)
        if not self.complements_meet[i, j]:
            alts.append(CODISJOINT)
        if self.inside[i, j] != self.inside[j, i]:
            alts.append(NESTED)
        return tuple(alts)

    def exactly_one(self) -> np.ndarray:
        n_alt = (~self.meets).astype(int) + (~self.complements_meet).astype(int)
        n_alt += (self.inside != self.inside.T).astype(int)
        return n_alt == 1


def pair_table(sets: Sequence[VertexSet]) -> PairTable:
    """All pairwise trichotomy data at once, via products of indicator matrices.

    A unit square is forbidden for a pair exactly when, for both sets,
    opposite corners have opposite membership, and the two sets disagree on
    whether the first two corners agree.
    """
    space = sets[0].space
    d = space.dims.d
    M = np.stack([U.mask.ravel() for U in sets]).astype(np.int32)
    C = 1 - M
    both = M @ M.T
    sizes = M.sum(axis=1)
    meets = both > 0
    complements_meet = (C @ C.T) > 0
    inside = both == sizes[:, None]
    valid = edge_valid(space)
    E = np.stack(
        [(edge_boundary_mask(U.mask, space) & valid).ravel() for U in sets]
    ).astype(np.int32)
    shared = E @ E.T
    squares = np.zeros_like(shared)
    wrap = space.wrap
    for i, j in itertools.combinations(range(d), 2):
        x0, x1 = [], []
        for U in sets:
            m = U.mask
            c1 = shifted(m, i, 1, wrap)
            c2 = shifted(c1, j, 1, wrap)
            c3 = shifted(m, j, 1, wrap)
            ok = np.ones(space.shape, dtype=bool)
            if not wrap:
                ok = valid[i] & shifted(valid[i], j, 1, False) & valid[j]
            alt = ok & (c2 != m) & (c3 != c1)
            x0.append((alt & (m == c1)).ravel())
            x1.append((alt & (m != c1)).ravel())
        X0 = np.stack(x0).astype(np.int32)
        X1 = np.stack(x1).astype(np.int32)
        squares += X0 @ X1.T + X1 @ X0.T
    return PairTable(meets, complements_meet, inside, shared, squares)


# ------------------------------------------------- translation behaviour


def _trusted(space: Window) -> np.ndarray:
    margin = space.dims.n if space.K >= 2 else space.dims.n // 2
    return space.core(margin)


def _offsets(space: Window) -> list[tuple[int, ...]]:
    core_side = int(_trusted(space).any(axis=tuple(range(1, space.dims.d))).sum())
    zmax = max(1, min(space.K, MAX_OFFSET, (core_side - 1) // space.dims.n))
    rng = range(-zmax, zmax + 1)
    return [z for z in itertools.product(rng, repeat=space.dims.d) if any(z)]


@dataclass(frozen=True)
class _Relation:
    z: tuple[int, ...]
    same: bool
    alts: tuple[str, ...]
    sign: int  # +1 if U + nz strictly contains U, -1 if strictly inside
    disjoint_boundary: bool


def _stack_squares(codes: np.ndarray, region: np.ndarray, d: int) -> np.ndarray:
    """Per-stack count of forbidden squares; ``codes`` has a leading stack axis."""
    total = np.zeros(codes.shape[0], dtype=np.int64)
    for i, j in itertools.combinations(range(1, d + 1), 2):
        def sh(x, *axes):
            for ax in axes:
                x = shifted(x, ax, 1, False, fill=-8 if x.dtype != bool else False)
            return x

        c0, c1, c2, c3 = codes, sh(codes, i), sh(codes, i, j), sh(codes, j)
        ok = region & sh(region, i) & sh(region, i, j) & sh(region, j)
        distinct = (c0 != c1) & (c0 != c2) & (c0 != c3) & (c1 != c2) & (c1 != c3) & (c2 != c3)
        bad = ok & distinct & ((c0 ^ c2) == 3)
        total += bad.reshape(len(bad), -1).sum(axis=1)
    return total


def _relations(U: VertexSet, offsets: list[tuple[int, ...]]) -> list[_Relation]:
    """Compare ``U`` with each visible translate ``U + n z`` on the trusted region."""
    space = U.space
    n, d = space.dims.n, space.dims.d
    if not offsets:
        return []
    core = _trusted(space)
    A = U.mask
    xs = [tuple(n * c for c in z) for z in offsets]
    B = np.stack([shift_by(A, x, False) for x in xs])
    R = np.stack([core & shift_by(core, x, False) for x in xs])
    k = len(xs)
    flat = lambda x: x.reshape(k, -1)  # noqa: E731
    a = A[None] & R
    b = B & R
    a_any, b_any = flat(a).any(1), flat(b).any(1)
    ca, cb = ~A[None] & R, ~B & R
    ca_any, cb_any = flat(ca).any(1), flat(cb).any(1)
    visible = flat(R).any(1) & (a_any | b_any) & (ca_any | cb_any)
    inter = flat(a & b).any(1)
    cointer = flat(ca & cb).any(1)
    a_not_b = flat(a & ~B).any(1)
    b_not_a = flat(b & ~A[None]).any(1)
    same = ~a_not_b & ~b_not_a
    # shared boundary edges inside the region
    shared = np.zeros(k, dtype=np.int64)
    for axis in range(1, d + 1):
        ea = A[None] != shifted(A[None], axis, 1, False)
        eb = B != shifted(B, axis, 1, False)
        ok = R & shifted(R, axis, 1, False)
        shared += flat(ea & eb & ok).sum(1)
    codes = (2 * A[None].astype(np.int8) + B.astype(np.int8)).astype(np.int8)
    squares = _stack_squares(codes, R, d) if d >= 2 else np.zeros(k, dtype=np.int64)
    out = []
    for i, z in enumerate(offsets):
        if not visible[i]:
            continue
        alts = []
        if not inter[i]:
            alts.append(DISJOINT)
        if not cointer[i]:
            alts.append(CODISJOINT)
        sign = 0
        if a_not_b[i] != b_not_a[i]:
            alts.append(NESTED)
            sign = 1 if not a_not_b[i] else -1
        bd = shared[i] == 0 and squares[i] == 0
        out.append(_Relation(tuple(z), bool(same[i]), tuple(alts), sign, bool(bd)))
    return out


def _integer_normal(vectors: list[tuple[int, ...]], d: int) -> tuple[int, ...] | None:
    """Primitive integer vector orthogonal to ``vectors`` if they span a hyperplane."""
    rows = [[Fraction(c) for c in v] for v in vectors]
    pivots: list[int] = []
    r = 0
    for col in range(d):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col]
        rows[r] = [c / inv for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if r != d - 1:
        return None
    free = next(c for c in range(d) if c not in pivots)
    vec = [Fraction(0)] * d
    vec[free] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -rows[i][free]
    lcm = 1
    for c in vec:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in vec]
    g = 0
    for c in ints:
        g = math.gcd(g, abs(c))
    return tuple(c // g for c in ints)


def minimal_translation(a: Sequence[int], n: int) -> tuple[int, ...]:
    """``n z`` with ``a . z = 1``, smallest l1 norm, then lexicographically first."""
    d = len(a)
    bound = 1
    while True:
        best = None
        for z in itertools.product(range(-bound, bound + 1), repeat=d):
            if sum(ai * zi for ai, zi in zip(a, z)) == 1:
                key = (sum(abs(c) for c in z), z)
                if key[0] <= bound and (best is None or key < best):
                    best = key
        if best is not None:
            return tuple(n * c for c in best[1])
        bound += 1


def _classify_once(U: VertexSet) -> TypeClassification:
    space = U.space
    if not isinstance(space, Window):
        raise PreconditionFailed("translation classification needs a lattice window")
    rels = _relations(U, _offsets(space))
    distinct = [r for r in rels if not r.same]
    samples = {r.z: r for r in rels}
    if not distinct:
        return TypeClassification(frozenset({1, -1}), samples=samples, K=space.K)
    if not all(r.disjoint_boundary for r in distinct):
        raise PreconditionFailed("distinct translates are not boundary disjoint")
    types = {1, -1, 0}
    for r in distinct:
        ok = set()
        if DISJOINT in r.alts:
            ok.add(1)
        if CODISJOINT in r.alts:
            ok.add(-1)
        if NESTED in r.alts:
            ok.add(0)
        types &= ok
    if not types:
        raise PreconditionFailed("translates satisfy no common alternative")
    if types != {0}:
        return TypeClassification(frozenset(types), samples=samples, K=space.K)
    d, n = space.dims.d, space.dims.n
    kernel = [r.z for r in rels if r.same]
    if d == 1:
        a = (distinct[0].sign * (1 if distinct[0].z[0] > 0 else -1),)
    else:
        normal = _integer_normal(kernel, d) if kernel else None
        if normal is None:
            raise WindowUnstable("stabiliser of the translates not visible in this window")
        ref = distinct[0]
        dot = sum(p * q for p, q in zip(normal, ref.z))
        if dot == 0:
            raise PreconditionFailed("nested translate lies in the visible stabiliser")
        a = normal if (dot > 0) == (ref.sign > 0) else tuple(-c for c in normal)
    for r in rels:
        dot = sum(p * q for p, q in zip(a, r.z))
        expect = 0 if r.same else r.sign
        if (dot > 0) - (dot < 0) != expect:
            raise PreconditionFailed(f"order of translate {r.z} inconsistent with a linear order")
    delta = minimal_translation(a, n)
    orders = {r.z: sum(p * q for p, q in zip(a, r.z)) for r in rels}
    return TypeClassification(frozenset({0}), tuple(a), delta, orders, K=space.K, n=n)


def classify_type(U: VertexSet, certify: bool = True) -> TypeClassification:
    """Translation type of a lattice set, certified by window doubling.

    When the set can rebuild itself, it is classified at ``K``, ``2K``, ...
    until two consecutive windows agree; :class:`WindowUnstable` if none do
    up to K=8. A set already at the largest window is checked against the
    halved one instead.
    """
    if not isinstance(U.space, Window):
        raise PreconditionFailed("translation classification needs a lattice window")
    if not is_bicon(U):
        raise PreconditionFailed("set is not biconnected")
    if not certify or U.rebuild is None:
        return _classify_once(U)
    window = U.space
    if 2 * window.K > MAX_K and window.K > 1:
        ks = [window.K // 2, window.K]
    else:
        ks = [window.K]
        while 2 * ks[-1] <= MAX_K:
            ks.append(2 * ks[-1])
    prev: TypeClassification | Exception | None = None
    for K in ks:
        current = U if K == window.K else U.rebuild(Window(window.dims, K))
        try:
            cls: TypeClassification | Exception = _classify_once(current)
        except (WindowUnstable, PreconditionFailed) as err:
            cls = err
        if prev is not None and _same_verdict(prev, cls):
            if isinstance(cls, Exception):
                raise cls
            return cls
        prev = cls
    raise WindowUnstable("classification changed under window doubling up to K=8")


def _same_verdict(a, b) -> bool:
    if isinstance(a, Exception) or isinstance(b, Exception):
        return isinstance(a, PreconditionFailed) and isinstance(b, PreconditionFailed)
    return a == b


def is_translation_respecting(U: VertexSet, certify: bool = True) -> bool:
    try:
        classify_type(U, certify)
    except PreconditionFailed:
        return False
    return True


def order_index(cls: TypeClassification, x: Sequence[int]) -> int:
    """``o(U + x)`` for a lattice vector ``x`` in ``nZ^d``."""
    if cls.type != 0 or cls.functional is None or cls.n is None:
        raise PreconditionFailed("order index needs a type 0 classification")
    if any(int(c) % cls.n for c in x):
        raise PreconditionFailed(f"{tuple(x)} is not in nZ^d")
    return sum(a * (int(c) // cls.n) for a, c in zip(cls.functional, x))


def translate_by_order(U: VertexSet, cls: TypeClassification, k: int) -> VertexSet:
    """``U + k * Delta`` (a plain shift of the mask)."""
    assert cls.delta is not None
    return VertexSet(U.space, shift_by(U.mask, tuple(k * c for c in cls.delta), False))


# ----------------------------------------------------- long boundaries


def directed_boundary_count(V: VertexSet, axis: int = 0, region: np.ndarray | None = None) -> int:
    """Number of torus edges along ``axis`` in the projection of the edge boundary.

    Only boundary edges with both endpoints in ``region`` (default: the
    trusted core of the window) are projected.
    """
    space = V.space
    if isinstance(space, Window) and region is None:
        region = _trusted(space)
    em = edge_boundary_mask(V.mask, space) & _region_edges(space, region)
    proj = project(EdgeSet(space, em))
    return proj.along(axis)


def long_boundary_bound(cls: TypeClassification, axis: int, n: int, d: int) -> int:
    """``l * n^(d-1)`` where ``V + l Delta = V + n e_axis``."""
    if cls.type != 0 or cls.functional is None:
        raise PreconditionFailed("bound applies to type 0 sets only")
    return abs(cls.functional[axis]) * n ** (d - 1)


def translation_order_violations(U: VertexSet, cls: TypeClassification) -> list[str]:
    """Type 0 facts checkable in a window.

    ``Delta`` has order index 1, and the translates ``U + k Delta`` for
    ``k = 1, 2`` strictly contain ``U`` on their trusted overlap.
    """
    if cls.type != 0 or cls.delta is None:
        raise PreconditionFailed("order facts apply to type 0 sets only")
    space = U.space
    assert isinstance(space, Window)
    out = []
    if order_index(cls, cls.delta) != 1:
        out.append(f"minimal translation {cls.delta} has order {order_index(cls, cls.delta)}")
    core = _trusted(space)
    for k in (1, 2):
        x = tuple(k * c for c in cls.delta)
        region = core & shift_by(core, x, False)
        if not region.any():
            continue
        moved = shift_by(U.mask, x, False)
        if np.any(U.mask & ~moved & region):
            out.append(f"U is not inside U + {k} Delta")
        elif not np.any(moved & ~U.mask & region):
            out.append(f"U + {k} Delta equals U on the overlap")
    return out
