"""Exact enumeration and counting of torus colorings by slope class.

Two independent routes are provided:

* depth-first search over vertices (any dimension), and
* a transfer matrix over proper colorings of one layer (d <= 2), whose
  trace counts torus colorings and which also tracks the height gained
  between layers, so that whole slope classes are counted at once.

All counts are of colorings normalised by ``f(0) = 0``; they are exact
Python integers.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import TooLarge
from .heights import Coloring, QuasiPeriodicHF, Slope, coloring_slopes, lift
from .lattice import Dims

FEASIBILITY_LIMIT = 10**8
METHODS = ("dfs", "enumerate", "transfer")


# ------------------------------------------------------------ layer states


@lru_cache(maxsize=None)
def layer_states(n: int) -> np.ndarray:
    """Proper colorings of the n-cycle, lexicographically sorted."""
    rows = [
        r
        for r in itertools.product(range(3), repeat=n)
        if all(r[i] != r[(i + 1) % n] for i in range(n))
    ]
    arr = np.array(rows, dtype=np.int8)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def layer_compatibility(n: int) -> np.ndarray:
    states = layer_states(n)
    compat = np.all(states[:, None, :] != states[None, :, :], axis=2)
    compat.setflags(write=False)
    return compat


def _step(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where((b.astype(np.int16) - a) % 3 == 1, 1, -1)


@lru_cache(maxsize=None)
def layer_winding(n: int) -> np.ndarray:
    """Height gained going once around each layer state."""
    s = layer_states(n)
    return _step(s, np.roll(s, -1, axis=1)).sum(axis=1)


def _matpow_trace_start(T: np.ndarray, n: int, starts: np.ndarray) -> int:
    """Sum over ``s`` in ``starts`` of ``(T^n)[s, s]`` in exact arithmetic."""
    deg = int(T.sum(axis=1).max()) if T.size else 0
    if deg**n < 2**62:
        M = np.linalg.matrix_power(T.astype(np.int64), n)
        return int(sum(int(M[s, s]) for s in starts))
    M = np.identity(T.shape[0], dtype=object)
    Tobj = T.astype(object)
    for _ in range(n):
        M = M.dot(Tobj)
    return int(sum(M[s, s] for s in starts))


# ---------------------------------------------------------------- counting


def _transfer_count(dims: Dims) -> int:
    if dims.d == 1:
        T = 1 - np.identity(3, dtype=np.int64)
        return _matpow_trace_start(T, dims.n, np.array([0]))
    if dims.d == 2:
        T = layer_compatibility(dims.n).astype(np.int64)
        starts = np.nonzero(layer_states(dims.n)[:, 0] == 0)[0]
        return _matpow_trace_start(T, dims.n, starts)
    raise TooLarge(f"transfer method supports d <= 2, got d={dims.d}")


def estimated_count(dims: Dims) -> int:
    """Exact count when cheap (d <= 2), else the bound 2^(N-1)."""
    if dims.d <= 2 and dims.n <= 10:
        return _transfer_count(dims)
    return 2 ** (dims.volume - 1)


def _guard(dims: Dims) -> None:
    est = estimated_count(dims)
    if est > FEASIBILITY_LIMIT:
        raise TooLarge(f"about {est} colorings of T_{dims.n}^{dims.d} exceeds {FEASIBILITY_LIMIT}")


def count_colorings(dims: Dims, method: str = "transfer") -> int:
    """Number of proper 3-colorings with ``f(0) = 0``."""
    if method == "transfer":
        return _transfer_count(dims)
    if method == "dfs":
        _guard(dims)
        return sum(len(chunk) for chunk in _dfs_arrays(dims, 4096))
    if method == "enumerate":
        return sum(len(chunk) for chunk in iter_coloring_arrays(dims))
    raise ValueError(f"unknown method {method!r}")


# ------------------------------------------------------------ enumeration


def _dfs_arrays(dims: Dims, chunk: int) -> Iterator[np.ndarray]:
    d, n = dims.d, dims.n
    order = [tuple(v) for v in itertools.product(range(n), repeat=d)]
    order = [tuple(reversed(v)) for v in order]  # axis 0 fastest
    index = {v: i for i, v in enumerate(order)}
    earlier: list[list[int]] = []
    for v in order:
        nb = []
        for b in range(d):
            for step in (-1, 1):
                w = list(v)
                w[b] = (w[b] + step) % n
                j = index[tuple(w)]
                if j < index[v]:
                    nb.append(j)
        earlier.append(sorted(set(nb)))
    N = len(order)
    flat = [0] * N
    buf: list[list[int]] = []

    def rec(i: int) -> Iterator[None]:
        if i == N:
            yield None
            return
        banned = {flat[j] for j in earlier[i]}
        for c in range(3):
            if c not in banned:
                flat[i] = c
                yield from rec(i + 1)

    flat[0] = 0
    for _ in rec(1):
        buf.append(list(flat))
        if len(buf) >= chunk:
            yield _reshape(np.array(buf, dtype=np.int8), dims)
            buf = []
    if buf:
        yield _reshape(np.array(buf, dtype=np.int8), dims)


def _reshape(flat: np.ndarray, dims: Dims) -> np.ndarray:
    """Rows of flattened values (axis 0 fastest) to an array of grids."""
    grid = flat.reshape((flat.shape[0],) + (dims.n,) * dims.d)
    return np.ascontiguousarray(grid.transpose((0,) + tuple(range(dims.d, 0, -1))))


def _layer_walk_arrays(dims: Dims) -> Iterator[np.ndarray]:
    """Closed walks of layer states, one chunk per first layer (d = 2)."""
    n = dims.n
    states = layer_states(n)
    compat = layer_compatibility(n)
    succ = [np.nonzero(compat[s])[0] for s in range(len(states))]
    reach = [np.identity(len(states), dtype=bool)]
    for _ in range(n):
        reach.append((reach[-1].astype(np.int64) @ compat.astype(np.int64)) > 0)
    for s0 in np.nonzero(states[:, 0] == 0)[0]:
        walks = np.array([[s0]], dtype=np.int32)
        for k in range(1, n):
            last = walks[:, -1]
            counts = np.array([len(succ[s]) for s in last])
            parent = np.repeat(np.arange(len(walks)), counts)
            nxt = np.concatenate([succ[s] for s in last]) if len(last) else np.array([], int)
            ok = reach[n - k][nxt, s0]
            walks = np.concatenate([walks[parent], nxt[:, None]], axis=1)[ok]
        if len(walks):
            # values[x0, x1] = states[walk[x1]][x0]
            yield np.transpose(states[walks], (0, 2, 1)).copy()


def iter_coloring_arrays(dims: Dims, chunk: int = 4096) -> Iterator[np.ndarray]:
    """Batches of colorings, shape ``(N,) + (n,)*d``, in lexicographic order.

    The order is lexicographic in the flattened value vector (axis 0
    fastest), which is the depth-first order over vertices.
    """
    _guard(dims)
    if dims.d == 2:
        yield from _layer_walk_arrays(dims)
    else:
        yield from _dfs_arrays(dims, chunk)


def enumerate_colorings(dims: Dims) -> Iterator[Coloring]:
    """Every proper 3-coloring with ``f(0) = 0`` exactly once."""
    for batch in iter_coloring_arrays(dims):
        for values in batch:
            yield Coloring(dims, values)


def enumerate_colorings_dfs(dims: Dims) -> Iterator[Coloring]:
    """Depth-first route regardless of dimension (independent of the layer walk)."""
    _guard(dims)
    for batch in _dfs_arrays(dims, 4096):
        for values in batch:
            yield Coloring(dims, values)


# ---------------------------------------------------------- slope classes


@dataclass
class SlopePartition:
    dims: Dims
    counts: dict[Slope, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def ratio(self, m: Slope) -> tuple[int, int]:
        """``(|QP_m|, |QP_0|)`` as exact integers."""
        return self.counts.get(tuple(m), 0), self.counts.get((0,) * self.dims.d, 0)

    def to_json(self) -> dict:
        return {
            "d": self.dims.d,
            "n": self.dims.n,
            "counts": [
                {"m": list(m), "count": str(c)} for m, c in sorted(self.counts.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SlopePartition":
        dims = Dims(int(obj["d"]), int(obj["n"]))
        counts = {tuple(int(x) for x in e["m"]): int(e["count"]) for e in obj["counts"]}
        return cls(dims, counts)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _transfer_partition(dims: Dims) -> SlopePartition:
    n = dims.n
    if dims.d == 1:
        states = np.arange(3, dtype=np.int8)[:, None]
        compat = 1 - np.identity(3, dtype=bool)
        winding = np.zeros(3, dtype=np.int64)
        starts = [0]
    elif dims.d == 2:
        states = layer_states(n)
        compat = layer_compatibility(n)
        winding = layer_winding(n)
        starts = list(np.nonzero(states[:, 0] == 0)[0])
    else:
        raise TooLarge(f"transfer method supports d <= 2, got d={dims.d}")
    col0 = states[:, 0]
    step = _step(col0[:, None], col0[None, :])
    S, E = len(states), 2 * n + 1
    total = _transfer_count(dims)
    dtype = np.int64 if total < 2**62 else object
    up = (compat & (step == 1)).astype(dtype)
    down = (compat & (step == -1)).astype(dtype)
    counts: Counter = Counter()
    for s0 in starts:
        cur = np.zeros((S, E), dtype=dtype)
        cur[s0, n] = 1
        for _ in range(n):
            a = up.T.dot(cur)
            b = down.T.dot(cur)
            cur = np.zeros((S, E), dtype=dtype)
            cur[:, 1:] += a[:, :-1]
            cur[:, :-1] += b[:, 1:]
        for e in range(E):
            c = int(cur[s0, e])
            if c:
                m_layer = e - n
                m = (m_layer,) if dims.d == 1 else (int(winding[s0]), m_layer)
                counts[m] += c
    return SlopePartition(dims, dict(counts))


def partition_by_slope(dims: Dims, method: str | None = None) -> SlopePartition:
    """Counts ``|col_m|`` for every slope ``m``.

    ``transfer`` tracks heights through the layer operator; ``enumerate``
    and ``dfs`` list every coloring and read off its slope.
    """
    method = method or ("transfer" if dims.d <= 2 else "dfs")
    if method == "transfer":
        return _transfer_partition(dims)
    if method == "enumerate":
        batches = iter_coloring_arrays(dims)
    elif method == "dfs":
        _guard(dims)
        batches = _dfs_arrays(dims, 4096)
    else:
        raise ValueError(f"unknown method {method!r}")
    counts: Counter = Counter()
    for batch in batches:
        for row in coloring_slopes(batch, dims):
            counts[tuple(int(x) for x in row)] += 1
    return SlopePartition(dims, dict(counts))


def _slope_admissible(dims: Dims, m: Slope) -> bool:
    return len(m) == dims.d and all(x % 6 == 0 and abs(x) <= dims.n for x in m)


def enumerate_slope_class(dims: Dims, m: Slope) -> Iterator[QuasiPeriodicHF]:
    """All lifts of colorings with slope ``m``, by direct search on heights.

    Heights are assigned vertex by vertex (axis 0 fastest); each vertex
    must differ by one from its already assigned neighbours, where the
    neighbour across a seam is read with the slope added.
    """
    m = tuple(int(x) for x in m)
    if not _slope_admissible(dims, m):
        return
    if dims.d <= 2 and dims.n <= 10:
        size = _transfer_partition(dims).counts.get(m, 0)
        if size > FEASIBILITY_LIMIT:
            raise TooLarge(f"|QP_{m}| = {size} exceeds {FEASIBILITY_LIMIT}")
    elif 2 ** (dims.volume - 1) > FEASIBILITY_LIMIT:
        raise TooLarge(f"T_{dims.n}^{dims.d} too large to enumerate")
    d, n = dims.d, dims.n
    order = [tuple(reversed(v)) for v in itertools.product(range(n), repeat=d)]
    index = {v: i for i, v in enumerate(order)}
    # constraints: (earlier index, offset added to its height)
    cons: list[list[tuple[int, int]]] = []
    for v in order:
        c = []
        for b in range(d):
            if v[b] > 0:
                w = list(v)
                w[b] -= 1
                c.append((index[tuple(w)], 0))
            if v[b] == n - 1:
                w = list(v)
                w[b] = 0
                c.append((index[tuple(w)], m[b]))
        cons.append(c)
    N = len(order)
    vals = [0] * N

    def rec(i: int) -> Iterator[None]:
        if i == N:
            yield None
            return
        j0, off0 = cons[i][0]
        for cand in (vals[j0] + off0 - 1, vals[j0] + off0 + 1):
            if all(abs(cand - vals[j] - off) == 1 for j, off in cons[i][1:]):
                vals[i] = cand
                yield from rec(i + 1)

    for _ in rec(1):
        base = np.array(vals, dtype=np.int64).reshape((n,) * d, order="F")
        yield QuasiPeriodicHF(dims, m, base)


def slope_class_by_filter(dims: Dims, m: Slope) -> list[QuasiPeriodicHF]:
    """Lifts of all enumerated colorings whose slope is ``m`` (the filter route)."""
    m = tuple(m)
    out = []
    for batch in iter_coloring_arrays(dims):
        slopes = coloring_slopes(batch, dims)
        keep = np.all(slopes == np.array(m), axis=1)
        out += [lift(Coloring(dims, v)) for v in batch[keep]]
    return out
