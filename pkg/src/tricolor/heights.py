"""Colorings, height functions and quasi-periodic height functions.

A proper 3-coloring ``f`` of the torus lifts to a unique height function
``h`` on Z^d with ``h(0) = 0`` and ``h = f (mod 3)`` along the covering
map. The lift is quasi-periodic: ``h(v + n e_i) = h(v) + m_i`` where the
slope ``m`` lies in ``6Z^d``. This module converts between the two sides.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import InconsistentGradient, NonPeriodicResult
from .lattice import Dims, Space, Torus, Vertex, Window

Slope = tuple[int, ...]


def _as_grid(values: Any, dims: Dims, dtype) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    shape = (dims.n,) * dims.d
    if arr.shape != shape:
        if arr.size != dims.volume:
            raise ValueError(f"expected {dims.volume} values, got {arr.size}")
        arr = arr.reshape(shape, order="F")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Coloring:
    dims: Dims
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_grid(self.values, self.dims, np.int8))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Coloring)
            and self.dims == other.dims
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.dims, self.values.tobytes()))

    def key(self) -> bytes:
        return self.values.tobytes()

    def normalized(self) -> "Coloring":
        """Shift colors cyclically so the origin has color 0."""
        c0 = int(self.values[(0,) * self.dims.d])
        return Coloring(self.dims, (self.values.astype(np.int16) - c0) % 3)


@dataclass(frozen=True, eq=False)
class TorusHHF:
    dims: Dims
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_grid(self.values, self.dims, np.int64))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TorusHHF)
            and self.dims == other.dims
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.dims, self.values.tobytes()))

    def on_space(self, space: Space) -> np.ndarray:
        if not isinstance(space, Torus):
            raise TypeError("torus height functions only live on the torus")
        return np.asarray(self.values)

    def negate(self) -> "TorusHHF":
        return TorusHHF(self.dims, -self.values)

    def as_qp(self) -> "QuasiPeriodicHF":
        return QuasiPeriodicHF(self.dims, (0,) * self.dims.d, self.values)


@dataclass(frozen=True, eq=False)
class QuasiPeriodicHF:
    """``h(v) = base(v mod n) + sum_i m_i * floor(v_i / n)``."""

    dims: Dims
    slope: Slope
    base: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", _as_grid(self.base, self.dims, np.int64))
        object.__setattr__(self, "slope", tuple(int(s) for s in self.slope))
        if len(self.slope) != self.dims.d:
            raise ValueError("slope length must equal the dimension")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuasiPeriodicHF)
            and self.dims == other.dims
            and self.slope == other.slope
            and np.array_equal(self.base, other.base)
        )

    def __hash__(self) -> int:
        return hash((self.dims, self.slope, self.base.tobytes()))

    def key(self) -> tuple:
        return (self.slope, self.base.tobytes())

    def eval(self, v: Sequence[int]) -> int:
        n = self.dims.n
        idx = tuple(int(c) % n for c in v)
        return int(self.base[idx]) + sum(m * (int(c) // n) for m, c in zip(self.slope, v))

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        """Heights at a coordinate array of shape ``(d,) + S``."""
        n = self.dims.n
        out = self.base[tuple(coords % n)].astype(np.int64)
        for axis, m in enumerate(self.slope):
            if m:
                out = out + m * (coords[axis] // n)
        return out

    def on_space(self, space: Space) -> np.ndarray:
        if isinstance(space, Torus):
            if any(self.slope):
                raise NonPeriodicResult("a sloped function does not live on the torus")
            return np.asarray(self.base)
        return self.evaluate(space.coords())

    def negate(self) -> "QuasiPeriodicHF":
        return QuasiPeriodicHF(self.dims, tuple(-m for m in self.slope), -self.base)

    def is_periodic(self) -> bool:
        return not any(self.slope)

    def torus(self) -> TorusHHF:
        if any(self.slope):
            raise NonPeriodicResult(f"slope {self.slope} is not zero")
        return TorusHHF(self.dims, self.base)


HeightFunction = QuasiPeriodicHF | TorusHHF


# ------------------------------------------------------------ validation


def _wrap_steps(values: np.ndarray, axis: int, slope: int) -> np.ndarray:
    """``value(x + e_axis) - value(x)`` with the slope added across the seam."""
    nxt = np.roll(values, -1, axis=axis).astype(np.int64)
    seam = np.zeros(values.shape, dtype=np.int64)
    idx = [slice(None)] * values.ndim
    idx[axis] = -1
    seam[tuple(idx)] = slope
    return nxt + seam - values.astype(np.int64)


def _cells(mask: np.ndarray) -> list[Vertex]:
    return [tuple(int(c) for c in idx) for idx in zip(*np.nonzero(mask))]


def validate(x: Coloring | TorusHHF | QuasiPeriodicHF) -> list[str]:
    """Every violated invariant, naming the offending edge or vertex."""
    out: list[str] = []
    dims = x.dims
    if isinstance(x, Coloring):
        vals = x.values
        bad = (vals < 0) | (vals > 2)
        out += [f"vertex {v}: color {int(vals[v])} not in 0..2" for v in _cells(bad)]
        for axis in range(dims.d):
            same = np.roll(vals, -1, axis=axis) == vals
            out += [f"edge {v} +e{axis}: equal colors" for v in _cells(same)]
        return out
    if isinstance(x, TorusHHF):
        vals, slope = x.values, (0,) * dims.d
    else:
        vals, slope = x.base, x.slope
        for axis, m in enumerate(slope):
            if m % 2 or abs(m) > dims.n:
                out.append(f"slope m{axis}={m} not even with |m| <= n")
    if int(vals[(0,) * dims.d]) != 0:
        out.append(f"vertex {(0,) * dims.d}: height {int(vals[(0,) * dims.d])} != 0")
    for axis in range(dims.d):
        steps = _wrap_steps(vals, axis, slope[axis])
        out += [f"edge {v} +e{axis}: step {int(steps[v])}" for v in _cells(np.abs(steps) != 1)]
    return out


# ------------------------------------------------------- mod 3 and lift


def mod3(h: HeightFunction) -> Coloring:
    """Reduce heights modulo 3, as a coloring of the torus."""
    if isinstance(h, QuasiPeriodicHF):
        if any(m % 3 for m in h.slope):
            raise NonPeriodicResult(f"slope {h.slope} not in 3Z^d")
        return Coloring(h.dims, h.base % 3)
    return Coloring(h.dims, h.values % 3)


def color_gradient(values: np.ndarray, axis: int) -> np.ndarray:
    """+1 where the next color along ``axis`` is one more mod 3, else -1."""
    diff = (np.roll(values, -1, axis=axis).astype(np.int16) - values) % 3
    return np.where(diff == 1, 1, -1).astype(np.int64)


def lift(f: Coloring) -> QuasiPeriodicHF:
    """The unique quasi-periodic height function reducing to ``f``.

    Heights are integrated along canonical staircase paths from the origin
    (axis 0 first, then axis 1, ...), the slope is read off the seam edges,
    and every edge of the torus is then re-checked against the gradient.
    """
    dims = f.dims
    vals = f.values
    if int(vals[(0,) * dims.d]) != 0:
        f = f.normalized()
        vals = f.values
    d, n = dims.d, dims.n
    grads = [color_gradient(vals, a) for a in range(d)]
    if any(np.any(np.roll(vals, -1, axis=a) == vals) for a in range(d)):
        raise InconsistentGradient("input is not a proper coloring")
    h = np.zeros((n,) * d, dtype=np.int64)
    for a in range(d):
        sub = grads[a][(slice(None),) * (a + 1) + (0,) * (d - a - 1)]
        cum = np.cumsum(sub, axis=a)
        cum = np.roll(cum, 1, axis=a)
        idx = [slice(None)] * (a + 1)
        idx[a] = 0
        cum[tuple(idx)] = 0
        h += cum.reshape(cum.shape + (1,) * (d - a - 1))
    slope = []
    for a in range(d):
        last = [0] * d
        last[a] = n - 1
        slope.append(int(h[tuple(last)] + grads[a][tuple(last)]))
    for a in range(d):
        if np.any(_wrap_steps(h, a, slope[a]) != grads[a]):
            raise InconsistentGradient(f"gradient not integrable along axis {a}")
    return QuasiPeriodicHF(dims, tuple(slope), h)


def slope(x: QuasiPeriodicHF | Coloring | TorusHHF) -> Slope:
    if isinstance(x, QuasiPeriodicHF):
        return x.slope
    if isinstance(x, TorusHHF):
        return (0,) * x.dims.d
    return lift(x).slope


def coloring_slopes(values: np.ndarray, dims: Dims) -> np.ndarray:
    """Slopes of a batch of colorings of shape ``(N,) + (n,)*d`` at once.

    The slope along axis ``a`` is the sum of the color gradient around the
    cycle through the origin parallel to ``a``.
    """
    out = np.empty((values.shape[0], dims.d), dtype=np.int64)
    for a in range(dims.d):
        diff = (np.roll(values, -1, axis=a + 1).astype(np.int16) - values) % 3
        steps = np.where(diff == 1, 1, -1)
        line = steps[(slice(None),) + (0,) * a + (slice(None),) + (0,) * (dims.d - a - 1)]
        out[:, a] = line.sum(axis=1)
    return out


def checkerboard(dims: Dims) -> Coloring:
    coords = np.indices((dims.n,) * dims.d)
    return Coloring(dims, coords.sum(axis=0) % 2)


def heights_on(h: HeightFunction, space: Space) -> np.ndarray:
    return h.on_space(space)


# ------------------------------------------------------------------- JSON


def to_json(x: Coloring | TorusHHF | QuasiPeriodicHF) -> dict:
    dims = x.dims
    if isinstance(x, Coloring):
        out: dict = {"kind": "coloring", "d": dims.d, "n": dims.n}
        vals = x.values
    elif isinstance(x, TorusHHF):
        out = {"kind": "hhf", "d": dims.d, "n": dims.n}
        vals = x.values
    else:
        out = {"kind": "qp", "d": dims.d, "n": dims.n, "slope": list(x.slope)}
        vals = x.base
    out["values"] = [int(v) for v in vals.flatten(order="F")]
    return out


def from_json(obj: dict) -> Coloring | TorusHHF | QuasiPeriodicHF:
    dims = Dims(int(obj["d"]), int(obj["n"]))
    kind = obj["kind"]
    if kind == "coloring":
        return Coloring(dims, obj["values"])
    if kind == "hhf":
        return TorusHHF(dims, obj["values"])
    if kind == "qp":
        return QuasiPeriodicHF(dims, tuple(obj["slope"]), obj["values"])
    raise ValueError(f"unknown function kind {kind!r}")


def dumps(x: Coloring | TorusHHF | QuasiPeriodicHF) -> str:
    """Canonical serialisation; identical objects give identical bytes."""
    return json.dumps(to_json(x), separators=(", ", ": ")) + "\n"


def loads(text: str) -> Coloring | TorusHHF | QuasiPeriodicHF:
    return from_json(json.loads(text))


def window_heights(h: HeightFunction, window: Window) -> np.ndarray:
    return h.on_space(window)
