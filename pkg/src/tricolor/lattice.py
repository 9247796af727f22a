"""Geometry of Z^d and of the discrete torus T_n^d.

Sets of vertices are boolean masks over a finite *space*. A space is
either the torus itself (coordinates wrap modulo n) or a window, a box
``[-K*n, (K+1)*n)^d`` cut out of the infinite lattice. Windows have no
wrap-around; the outermost layer of cells is the *frame*, and anything
whose correctness depends on cells beyond it is flagged or refused.

Array layout: a mask has shape ``(side,) * d`` and is indexed by
``mask[i_0, ..., i_{d-1}]`` with ``i_a = v_a + offset``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from scipy import ndimage

from .errors import WindowOverflow

Vertex = tuple[int, ...]

DEFAULT_K = 2
MAX_K = 8


@dataclass(frozen=True)
class Dims:
    """Dimension ``d`` and (even) side length ``n`` of the torus."""

    d: int
    n: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if self.n < 4 or self.n % 2:
            raise ValueError(f"side length must be even and >= 4, got {self.n}")

    @property
    def volume(self) -> int:
        return self.n**self.d

    def unit(self, axis: int, scale: int = 1) -> Vertex:
        v = [0] * self.d
        v[axis] = scale
        return tuple(v)

    def zero(self) -> Vertex:
        return (0,) * self.d


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1


# ---------------------------------------------------------------- spaces


@dataclass(frozen=True)
class Torus:
    dims: Dims

    wrap = True

    @property
    def side(self) -> int:
        return self.dims.n

    @property
    def offset(self) -> int:
        return 0

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.dims.n,) * self.dims.d

    def index(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(c) % self.dims.n for c in v)

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.dims.d

    def coords(self) -> np.ndarray:
        """Array of shape ``(d,) + shape`` with the coordinate of every cell."""
        return np.indices(self.shape)

    def describe(self) -> dict:
        return {"space": "torus", "d": self.dims.d, "n": self.dims.n}


@dataclass(frozen=True)
class Window:
    """The box ``[-K*n, (K+1)*n)^d`` of the lattice."""

    dims: Dims
    K: int = DEFAULT_K

    wrap = False

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"window radius must be >= 1, got {self.K}")

    @property
    def side(self) -> int:
        return (2 * self.K + 1) * self.dims.n

    @property
    def offset(self) -> int:
        return self.K * self.dims.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.side,) * self.dims.d

    @property
    def lo(self) -> int:
        return -self.offset

    @property
    def hi(self) -> int:
        return self.side - self.offset

    def index(self, v: Sequence[int]) -> tuple[int, ...]:
        if not self.contains(v):
            raise WindowOverflow(f"vertex {tuple(v)} outside window K={self.K}")
        return tuple(int(c) + self.offset for c in v)

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.dims.d and all(self.lo <= c < self.hi for c in v)

    def coords(self) -> np.ndarray:
        return np.indices(self.shape) - self.offset

    def doubled(self) -> "Window":
        return Window(self.dims, 2 * self.K)

    def frame(self) -> np.ndarray:
        """Mask of the outermost single layer of cells."""
        inner = np.zeros(self.shape, dtype=bool)
        inner[(slice(1, -1),) * self.dims.d] = True
        return ~inner

    def core(self, margin: int | None = None) -> np.ndarray:
        """Cells at distance at least ``margin`` (default n) from the outside."""
        m = self.dims.n if margin is None else margin
        out = np.zeros(self.shape, dtype=bool)
        if 2 * m < self.side:
            out[(slice(m, self.side - m),) * self.dims.d] = True
        return out

    def describe(self) -> dict:
        return {"space": "window", "d": self.dims.d, "n": self.dims.n, "K": self.K}


Space = Torus | Window


# ------------------------------------------------------------- vertices


def parity(v: Sequence[int]) -> Parity:
    return Parity(sum(int(c) for c in v) % 2)


def neighbors(v: Sequence[int], dims: Dims, torus: bool = True) -> list[Vertex]:
    """The 2d neighbours of ``v``; reduced mod n when ``torus``."""
    out = []
    for axis in range(dims.d):
        for step in (1, -1):
            w = list(v)
            w[axis] += step
            if torus:
                w[axis] %= dims.n
            out.append(tuple(w))
    return out


def project_vertex(v: Sequence[int], dims: Dims) -> Vertex:
    return tuple(int(c) % dims.n for c in v)


def add(v: Sequence[int], w: Sequence[int]) -> Vertex:
    return tuple(int(a) + int(b) for a, b in zip(v, w))


def scale(v: Sequence[int], k: int) -> Vertex:
    return tuple(int(a) * k for a in v)


# ---------------------------------------------------------- mask shifts


def shifted(mask: np.ndarray, axis: int, step: int, wrap: bool, fill=False) -> np.ndarray:
    """``out[x] = mask[x + step * e_axis]``; cells beyond a box get ``fill``."""
    if wrap:
        return np.roll(mask, -step, axis=axis)
    n = mask.shape[axis]
    if step == 0:
        return mask.copy()
    out = np.empty_like(mask)
    src = [slice(None)] * mask.ndim
    dst = [slice(None)] * mask.ndim
    rest = [slice(None)] * mask.ndim
    k = min(abs(step), n)
    if step > 0:
        src[axis], dst[axis], rest[axis] = slice(k, None), slice(None, n - k), slice(n - k, None)
    else:
        src[axis], dst[axis], rest[axis] = slice(None, n - k), slice(k, None), slice(None, k)
    out[tuple(dst)] = mask[tuple(src)]
    out[tuple(rest)] = fill
    return out


def shift_by(mask: np.ndarray, offset: Sequence[int], wrap: bool, fill=False) -> np.ndarray:
    """``out[x] = mask[x - offset]`` (the translate of the mask by ``offset``)."""
    out = mask
    for axis, step in enumerate(offset):
        if step:
            out = shifted(out, axis, -int(step), wrap, fill)
    return out if out is not mask else mask.copy()


def edge_valid(space: Space) -> np.ndarray:
    """``valid[i][x]`` is true iff ``(x, x + e_i)`` is an edge of the space."""
    d = space.dims.d
    valid = np.ones((d,) + space.shape, dtype=bool)
    if not space.wrap:
        for axis in range(d):
            idx = [axis] + [slice(None)] * d
            idx[1 + axis] = -1
            valid[tuple(idx)] = False
    return valid


# ------------------------------------------------------------ edge sets


@dataclass(frozen=True, eq=False)
class EdgeSet:
    """Edges ``(x, x + e_i)`` stored as ``mask[i][x]``."""

    space: Space
    mask: np.ndarray

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, EdgeSet)
            and self.space == other.space
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self) -> int:
        return hash((self.space, self.mask.tobytes()))

    def issubset(self, other: "EdgeSet") -> bool:
        return not np.any(self.mask & ~other.mask)

    def isdisjoint(self, other: "EdgeSet") -> bool:
        return not np.any(self.mask & other.mask)

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        out = []
        off = self.space.offset
        for idx in zip(*np.nonzero(self.mask)):
            axis, x = idx[0], tuple(int(c) - off for c in idx[1:])
            y = list(x)
            y[axis] += 1
            if self.space.wrap:
                y[axis] %= self.space.dims.n
            out.append((x, tuple(y)))
        return out

    def along(self, axis: int) -> int:
        return int(self.mask[axis].sum())

    def restrict(self, region: np.ndarray) -> "EdgeSet":
        """Keep edges whose both endpoints lie in ``region``."""
        keep = np.zeros_like(self.mask)
        for axis in range(self.space.dims.d):
            keep[axis] = region & shifted(region, axis, 1, self.space.wrap)
        return EdgeSet(self.space, self.mask & keep)


# ----------------------------------------------------------- vertex sets


@dataclass(frozen=True, eq=False)
class VertexSet:
    """A set of vertices of a space, stored as a boolean mask.

    ``rebuild`` optionally recomputes the same (infinite) set in another
    window; it is what makes window-doubling certification possible.
    """

    space: Space
    mask: np.ndarray
    rebuild: Callable[[Window], "VertexSet"] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.mask.shape != self.space.shape or self.mask.dtype != bool:
            raise ValueError("mask does not match space shape")

    # construction helpers
    @classmethod
    def from_vertices(cls, space: Space, vertices: Iterable[Sequence[int]]) -> "VertexSet":
        mask = np.zeros(space.shape, dtype=bool)
        for v in vertices:
            mask[space.index(v)] = True
        return cls(space, mask)

    @classmethod
    def from_predicate(cls, space: Space, pred: Callable[..., np.ndarray]) -> "VertexSet":
        """Set ``{v : pred(*coords)}`` with a vectorised predicate.

        On a window the set can be rebuilt at any other window size.
        """
        coords = space.coords()
        mask = np.asarray(pred(*coords), dtype=bool)
        rebuild = None
        if isinstance(space, Window):
            def rebuild(w: Window) -> VertexSet:
                return VertexSet.from_predicate(w, pred)
        return cls(space, mask, rebuild)

    @classmethod
    def empty(cls, space: Space) -> "VertexSet":
        return cls(space, np.zeros(space.shape, dtype=bool))

    @classmethod
    def full(cls, space: Space) -> "VertexSet":
        return cls(space, np.ones(space.shape, dtype=bool))

    # set algebra
    def __len__(self) -> int:
        return int(self.mask.sum())

    def __bool__(self) -> bool:
        return bool(self.mask.any())

    def __contains__(self, v: Sequence[int]) -> bool:
        if not self.space.contains(v):
            raise WindowOverflow(f"vertex {tuple(v)} outside {self.space}")
        return bool(self.mask[self.space.index(v)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, VertexSet)
            and self.space == other.space
            and np.array_equal(self.mask, other.mask)
        )

    def __hash__(self) -> int:
        return hash((self.space, self.mask.tobytes()))

    def complement(self) -> "VertexSet":
        rebuild = None
        if self.rebuild is not None:
            inner = self.rebuild

            def rebuild(w: Window) -> VertexSet:
                return inner(w).complement()
        return VertexSet(self.space, ~self.mask, rebuild)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.space, self.mask & other.mask)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.space, self.mask | other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.space, self.mask & ~other.mask)

    def issubset(self, other: "VertexSet") -> bool:
        return not np.any(self.mask & ~other.mask)

    def vertices(self) -> list[Vertex]:
        """Members in lexicographic coordinate order."""
        off = self.space.offset
        return [tuple(int(c) - off for c in idx) for idx in zip(*np.nonzero(self.mask))]

    @property
    def frame_contact(self) -> bool:
        """True when a member or a neighbour of a member lies on the frame."""
        if not isinstance(self.space, Window):
            return False
        return bool(np.any(plus_mask(self.mask, self.space) & self.space.frame()))

    def with_rebuild(self, rebuild: Callable[[Window], "VertexSet"] | None) -> "VertexSet":
        return VertexSet(self.space, self.mask, rebuild)


# WindowedSet is the name used for lattice sets carried by a window.
WindowedSet = VertexSet


# ---------------------------------------------------- boundary operators


def plus_mask(mask: np.ndarray, space: Space) -> np.ndarray:
    out = mask.copy()
    for axis in range(space.dims.d):
        out |= shifted(mask, axis, 1, space.wrap)
        out |= shifted(mask, axis, -1, space.wrap)
    return out


def edge_boundary_mask(mask: np.ndarray, space: Space) -> np.ndarray:
    d = space.dims.d
    out = np.zeros((d,) + space.shape, dtype=bool)
    for axis in range(d):
        out[axis] = mask != shifted(mask, axis, 1, space.wrap)
    return out & edge_valid(space)


def _check_frame(space: Space, touched: np.ndarray, what: str) -> None:
    if isinstance(space, Window) and np.any(touched & space.frame()):
        raise WindowOverflow(f"{what} meets the frame of window K={space.K}")


def boundary(U: VertexSet, kind: str, strict: bool = True) -> VertexSet | EdgeSet:
    """Boundary operators.

    ``kind`` is one of ``edge`` (the edge boundary), ``plus`` (the closed
    1-neighbourhood), ``minus`` (the complement of the 1-neighbourhood of the
    complement), ``intb`` (U minus U-minus) or ``extb`` (U-plus minus U).

    In a window only edges inside the window are seen. With ``strict`` a
    result that meets the frame raises :class:`WindowOverflow`, since part of
    it may lie beyond the window; otherwise the visible part is returned.
    """
    space, mask = U.space, U.mask
    if kind == "edge":
        em = edge_boundary_mask(mask, space)
        if strict and isinstance(space, Window):
            touched = np.zeros(space.shape, dtype=bool)
            for axis in range(space.dims.d):
                touched |= em[axis] | shifted(em[axis], axis, -1, False)
            _check_frame(space, touched, "edge boundary")
        return EdgeSet(space, em)
    if kind == "plus":
        res = plus_mask(mask, space)
    elif kind == "minus":
        res = ~plus_mask(~mask, space)
    elif kind == "intb":
        res = mask & plus_mask(~mask, space)
    elif kind == "extb":
        res = plus_mask(mask, space) & ~mask
    else:
        raise ValueError(f"unknown boundary kind {kind!r}")
    if strict:
        _check_frame(space, res, kind)
    return VertexSet(space, res)


def edge_boundary(U: VertexSet, strict: bool = False) -> EdgeSet:
    return boundary(U, "edge", strict)  # type: ignore[return-value]


def intb(U: VertexSet, strict: bool = False) -> VertexSet:
    return boundary(U, "intb", strict)  # type: ignore[return-value]


def extb(U: VertexSet, strict: bool = False) -> VertexSet:
    return boundary(U, "extb", strict)  # type: ignore[return-value]


# --------------------------------------------------------------- distance


def distance(U: VertexSet, V: VertexSet) -> float:
    """Graph distance between two sets; ``inf`` when either is empty."""
    if not U or not V:
        return math.inf
    reach = U.mask.copy()
    k = 0
    while not np.any(reach & V.mask):
        grown = plus_mask(reach, U.space)
        if np.array_equal(grown, reach):
            return math.inf
        reach = grown
        k += 1
    return k


def vertex_distance(v: Sequence[int], w: Sequence[int], dims: Dims, torus: bool = True) -> int:
    if torus:
        return sum(min((a - b) % dims.n, (b - a) % dims.n) for a, b in zip(v, w))
    return sum(abs(a - b) for a, b in zip(v, w))


# ---------------------------------------------------------- connectivity


def _structure(d: int) -> np.ndarray:
    return ndimage.generate_binary_structure(d, 1)


def label(mask: np.ndarray, space: Space) -> tuple[np.ndarray, int]:
    """Connected-component labels (1..count, 0 outside the mask)."""
    labels, count = ndimage.label(mask, structure=_structure(space.dims.d))
    if not space.wrap or count <= 1:
        return labels, count
    parent = list(range(count + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for axis in range(space.dims.d):
        first = np.take(labels, 0, axis=axis)
        last = np.take(labels, -1, axis=axis)
        both = (first > 0) & (last > 0)
        for a, b in zip(first[both].tolist(), last[both].tolist()):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(a) for a in range(count + 1)])
    _, compact = np.unique(roots, return_inverse=True)
    return compact[labels].reshape(labels.shape), int(compact.max())


def component_mask(mask: np.ndarray, space: Space, seed: Sequence[int]) -> np.ndarray:
    """Mask of the connected component of ``mask`` containing the index ``seed``."""
    seed = tuple(seed)
    if not mask[seed]:
        return np.zeros_like(mask)
    labels, _ = label(mask, space)
    return labels == labels[seed]


def connected_components(U: VertexSet) -> list[VertexSet]:
    labels, count = label(U.mask, U.space)
    return [VertexSet(U.space, labels == k) for k in range(1, count + 1)]


def is_connected(U: VertexSet) -> bool:
    return label(U.mask, U.space)[1] <= 1


# ------------------------------------------------------------- odd sets


def parity_mask(space: Space) -> np.ndarray:
    return (space.coords().sum(axis=0) % 2).astype(np.int8)


def is_odd_set(U: VertexSet, strict: bool = False) -> bool:
    """All internal-boundary vertices share one parity (vacuous if none)."""
    ib = intb(U, strict=strict).mask
    par = parity_mask(U.space)[ib]
    return par.size == 0 or bool(np.all(par == par[0]))


# ------------------------------------------------ translation/projection


def translate(U: VertexSet, x: Sequence[int], strict: bool = True) -> VertexSet:
    """``U + x``. In a window, members pushed outside raise :class:`WindowOverflow`."""
    space = U.space
    out = shift_by(U.mask, x, space.wrap)
    if strict and not space.wrap and int(out.sum()) != int(U.mask.sum()):
        raise WindowOverflow(f"translate by {tuple(x)} leaves window K={space.K}")
    rebuild = None
    if U.rebuild is not None and isinstance(space, Window):
        inner = U.rebuild
        offset = tuple(x)

        def rebuild(w: Window) -> VertexSet:
            return translate(inner(w), offset, strict=False)
    return VertexSet(space, out, rebuild)


def translate_known(space: Window, x: Sequence[int]) -> np.ndarray:
    """Cells ``c`` of the window for which ``c - x`` is also in the window."""
    return shift_by(np.ones(space.shape, dtype=bool), x, False)


def _fold(mask: np.ndarray, K: int, n: int) -> np.ndarray:
    d = mask.ndim
    shape = []
    for _ in range(d):
        shape += [2 * K + 1, n]
    return mask.reshape(shape).any(axis=tuple(range(0, 2 * d, 2)))


def project(obj: VertexSet | EdgeSet) -> VertexSet | EdgeSet:
    """Projection of a windowed lattice set or edge set onto the torus."""
    space = obj.space
    if isinstance(space, Torus):
        return obj
    torus = Torus(space.dims)
    if isinstance(obj, VertexSet):
        return VertexSet(torus, _fold(obj.mask, space.K, space.dims.n))
    folded = np.stack([_fold(obj.mask[a], space.K, space.dims.n) for a in range(space.dims.d)])
    return EdgeSet(torus, folded)


def all_vertices(space: Space) -> Iterator[Vertex]:
    rng = range(-space.offset, space.side - space.offset)
    return itertools.product(rng, repeat=space.dims.d)
