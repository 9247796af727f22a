"""Sublevel sets, level components and separating families.

For a height function ``h``, an anchor ``u`` and a level ``k >= h(u)``
the *sublevel set* is the connected component of ``u`` once all vertices
at height ``k + 1`` are removed. For a second anchor ``v`` with
``h(v) > k`` the *sublevel component* is everything not reachable from
``v`` without entering the sublevel set. Superlevel components are
sublevel components of ``-h``.

On the lattice these sets are infinite; they are computed inside a
:class:`~tricolor.lattice.Window`, where connectivity is judged within the
window only. Every carrier remembers how to rebuild itself in a larger
window so answers can be certified by doubling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import LevelMismatch, PreconditionFailed, WindowOverflow
from .heights import HeightFunction, QuasiPeriodicHF, TorusHHF
from .lattice import (
    DEFAULT_K,
    Dims,
    EdgeSet,
    Space,
    Torus,
    Vertex,
    VertexSet,
    Window,
    add,
    component_mask,
    edge_boundary,
    extb,
    intb,
    is_connected,
    is_odd_set,
    shift_by,
    translate_known,
)


def default_space(h: HeightFunction) -> Space:
    if isinstance(h, TorusHHF):
        return Torus(h.dims)
    return Window(h.dims, DEFAULT_K)


def negate(h: HeightFunction) -> HeightFunction:
    return h.negate()


@dataclass(frozen=True, eq=False)
class LevelComponent:
    kind: str
    level: int
    u: Vertex
    v: Vertex
    carrier: VertexSet
    inner_height: int
    outer_height: int

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LevelComponent) and self.carrier == other.carrier

    def __hash__(self) -> int:
        return hash(self.carrier)

    def __len__(self) -> int:
        return len(self.carrier)

    def __contains__(self, x: Sequence[int]) -> bool:
        return tuple(x) in self.carrier

    @property
    def space(self) -> Space:
        return self.carrier.space

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "level": self.level,
            "u": list(self.u),
            "v": list(self.v),
            "carrier": [list(x) for x in self.carrier.vertices()],
            "window": self.space.describe(),
        }


@dataclass
class SeparatingFamily:
    """Sublevel components containing ``u`` but not ``v``, smallest first."""

    u: Vertex
    v: Vertex
    components: list[LevelComponent] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def is_chain(self) -> bool:
        """Strictly increasing under inclusion."""
        cs = self.components
        return all(
            cs[i].carrier.issubset(cs[i + 1].carrier) and cs[i] != cs[i + 1]
            for i in range(len(cs) - 1)
        )


class LevelStructure:
    """Heights of ``h`` on a fixed space, with a cache of components."""

    def __init__(self, h: HeightFunction, space: Space | None = None):
        self.h = h
        self.space = space if space is not None else default_space(h)
        self.heights = h.on_space(self.space)
        self._cache: dict[tuple, LevelComponent] = {}

    @property
    def dims(self) -> Dims:
        return self.h.dims

    def idx(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.space.index(x)

    def height(self, x: Sequence[int]) -> int:
        return int(self.heights[self.idx(x)])

    def _check_level(self, k: int) -> None:
        lo, hi = int(self.heights.min()), int(self.heights.max())
        if not lo <= k <= hi:
            raise LevelMismatch(f"level {k} outside heights [{lo}, {hi}] on this space")

    def sublevel_mask(self, u: Sequence[int], k: int) -> np.ndarray:
        if self.height(u) > k:
            raise LevelMismatch(f"h(u) = {self.height(u)} > k = {k}")
        self._check_level(k)
        return component_mask(self.heights != k + 1, self.space, self.idx(u))

    def sublevel_set(self, u: Sequence[int], k: int) -> VertexSet:
        return VertexSet(self.space, self.sublevel_mask(u, k))

    def component(self, u: Sequence[int], v: Sequence[int], k: int) -> LevelComponent:
        u, v = tuple(u), tuple(v)
        key = (u, v, k)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        hu, hv = self.height(u), self.height(v)
        if not hu <= k < hv:
            raise LevelMismatch(f"need h(u) <= k < h(v), got {hu}, {k}, {hv}")
        ll = self.sublevel_mask(u, k)
        reach_v = component_mask(~ll, self.space, self.idx(v))
        rebuild = None
        if isinstance(self.space, Window):
            h = self.h

            def rebuild(w: Window) -> VertexSet:
                return LevelStructure(h, w).component(u, v, k).carrier

        carrier = VertexSet(self.space, ~reach_v, rebuild)
        comp = LevelComponent("sub", k, u, v, carrier, k, k + 1)
        self._cache[key] = comp
        return comp

    def edge_component(self, a: Sequence[int], b: Sequence[int]) -> LevelComponent:
        """The unique sublevel component with ``(a, b)`` on its boundary."""
        ha, hb = self.height(a), self.height(b)
        if abs(ha - hb) != 1:
            raise PreconditionFailed(f"{tuple(a)}, {tuple(b)} is not an edge of an HHF")
        if ha < hb:
            return self.component(a, b, ha)
        return self.component(b, a, hb)

    def separating(self, u: Sequence[int], v: Sequence[int]) -> tuple[SeparatingFamily, SeparatingFamily]:
        """Both separating families, read off one fixed shortest path."""
        u, v = tuple(u), tuple(v)
        forward: dict[VertexSet, LevelComponent] = {}
        backward: dict[VertexSet, LevelComponent] = {}
        path = shortest_path(u, v, self.space)
        for a, b in zip(path, path[1:]):
            c = self.edge_component(a, b)
            has_u, has_v = u in c.carrier, v in c.carrier
            if has_u and not has_v:
                forward.setdefault(c.carrier, c)
            elif has_v and not has_u:
                backward.setdefault(c.carrier, c)
        return (
            SeparatingFamily(u, v, sorted(forward.values(), key=len)),
            SeparatingFamily(v, u, sorted(backward.values(), key=len)),
        )


def shortest_path(u: Vertex, v: Vertex, space: Space) -> list[Vertex]:
    """Monotone path changing axis 0 first; on the torus each axis takes the short way."""
    path = [tuple(u)]
    cur = list(u)
    for axis in range(len(u)):
        delta = v[axis] - cur[axis]
        if isinstance(space, Torus):
            n = space.dims.n
            delta %= n
            if delta > n // 2:
                delta -= n
        step = 1 if delta > 0 else -1
        for _ in range(abs(delta)):
            cur[axis] += step
            if isinstance(space, Torus):
                cur[axis] %= space.dims.n
            path.append(tuple(cur))
    return path


# ------------------------------------------------------- public operations


def _structure(h: HeightFunction, space: Space | None) -> LevelStructure:
    return LevelStructure(h, space)


def sublevel_set(h: HeightFunction, u: Sequence[int], k: int, space: Space | None = None) -> VertexSet:
    return _structure(h, space).sublevel_set(u, k)


def sublevel_component(
    h: HeightFunction, u: Sequence[int], v: Sequence[int], k: int, space: Space | None = None
) -> LevelComponent:
    return _structure(h, space).component(u, v, k)


def superlevel_component(
    h: HeightFunction, u: Sequence[int], v: Sequence[int], k: int, space: Space | None = None
) -> LevelComponent:
    """Requires ``h(v) < k <= h(u)``; ``h = k`` inside, ``k - 1`` just outside."""
    c = _structure(h.negate(), space).component(u, v, -k)
    return LevelComponent("super", k, c.u, c.v, c.carrier, k, k - 1)


def component_of_edge(h: HeightFunction, e: tuple[Sequence[int], Sequence[int]], space: Space | None = None) -> LevelComponent:
    return _structure(h, space).edge_component(*e)


def separating_family(h: HeightFunction, u: Sequence[int], v: Sequence[int], space: Space | None = None) -> SeparatingFamily:
    return _structure(h, space).separating(u, v)[0]


def height_diff_via_components(h: HeightFunction, u: Sequence[int], v: Sequence[int], space: Space | None = None) -> int:
    fwd, bwd = _structure(h, space).separating(u, v)
    return len(fwd) - len(bwd)


def region_edges(space: Space, region: np.ndarray | None = None) -> Iterable[tuple[Vertex, Vertex]]:
    """Edges of the space with both endpoints in ``region`` (default: all)."""
    d = space.dims.d
    if region is None:
        region = np.ones(space.shape, dtype=bool)
    off = space.offset
    for idx in zip(*np.nonzero(region)):
        x = tuple(int(c) - off for c in idx)
        for axis in range(d):
            y = list(x)
            y[axis] += 1
            if isinstance(space, Torus):
                y[axis] %= space.dims.n
            elif not space.contains(y):
                continue
            if region[space.index(y)]:
                yield x, tuple(y)


def all_components(structure: LevelStructure, region: np.ndarray | None = None) -> list[LevelComponent]:
    """Distinct sublevel components owning an edge inside ``region``."""
    seen: dict[VertexSet, LevelComponent] = {}
    for a, b in region_edges(structure.space, region):
        c = structure.edge_component(a, b)
        seen.setdefault(c.carrier, c)
    return list(seen.values())


def separating_family_global(structure: LevelStructure, u: Sequence[int], v: Sequence[int], region: np.ndarray | None = None) -> SeparatingFamily:
    """Oracle: scan every edge of ``region`` rather than one path."""
    u, v = tuple(u), tuple(v)
    found = [
        c for c in all_components(structure, region) if u in c.carrier and v not in c.carrier
    ]
    return SeparatingFamily(u, v, sorted(found, key=len))


def translate_component(A: LevelComponent, x: Sequence[int], h: QuasiPeriodicHF) -> LevelComponent:
    """``A + x`` for ``x`` in ``nZ^d``; the level moves by ``h(x) - h(0)``."""
    n = h.dims.n
    if any(int(c) % n for c in x):
        raise PreconditionFailed(f"offset {tuple(x)} not in nZ^d")
    space = A.space
    if not isinstance(space, Window):
        raise PreconditionFailed("translation acts on lattice components")
    u2, v2 = add(A.u, x), add(A.v, x)
    if not (space.contains(u2) and space.contains(v2)):
        raise WindowOverflow(f"anchors leave window after translating by {tuple(x)}")
    shift = sum(m * (int(c) // n) for m, c in zip(h.slope, x))
    carrier = VertexSet(space, shift_by(A.carrier.mask, x, False))
    if A.carrier.rebuild is not None:
        inner, offset = A.carrier.rebuild, tuple(x)

        def rebuild(w: Window) -> VertexSet:
            return VertexSet(w, shift_by(inner(w).mask, offset, False))

        carrier = carrier.with_rebuild(rebuild)
    return LevelComponent(
        A.kind, A.level + shift, u2, v2, carrier,
        A.inner_height + shift, A.outer_height + shift,
    )


def translate_known_region(A: LevelComponent, x: Sequence[int]) -> np.ndarray:
    """Cells where the translate of a windowed carrier is actually known."""
    return translate_known(A.space, x)


# ---------------------------------------------------- property bundle


def basic_property_violations(structure: LevelStructure, c: LevelComponent) -> list[str]:
    """Check the standard facts about one sublevel component."""
    out = []
    U = c.carrier
    if c.u not in U:
        out.append("u not in carrier")
    if c.v in U:
        out.append("v in carrier")
    H = structure.heights
    ib, eb = intb(U).mask, extb(U).mask
    if ib.any() and not np.all(H[ib] == c.inner_height):
        out.append("heights on internal boundary not constant")
    if eb.any() and not np.all(H[eb] == c.outer_height):
        out.append("heights on external boundary not constant")
    if abs(c.inner_height - c.outer_height) != 1:
        out.append("inner and outer heights do not differ by one")
    if not U or U.mask.all() or not is_connected(U) or not is_connected(U.complement()):
        out.append("carrier not biconnected")
    if not is_odd_set(U):
        out.append("carrier not odd")
    if c.kind == "sub":
        ll = structure.sublevel_mask(c.u, c.level)
        if np.any(ib & ~ll):
            out.append("internal boundary not inside the sublevel set")
        if np.any(ll & ~U.mask):
            out.append("sublevel set not inside the carrier")
    return out


def boundary_edges(c: LevelComponent) -> EdgeSet:
    return edge_boundary(c.carrier)
