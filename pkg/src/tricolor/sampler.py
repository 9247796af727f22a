"""Uniform and Markov-chain sampling of 3-colorings, and sample statistics.

Random numbers come from numpy's PCG64 generator. A run seeded with
``seed`` derives one independent stream per chain from
``SeedSequence(seed).spawn(chains)``, so results depend only on the seed
and the chain count.

The exact sampler draws uniformly from colorings with ``f(0) = 0``. Small
instances are sampled by index into the enumeration; two-dimensional tori
beyond that use backward sampling through the layer transfer matrix.
Glauber dynamics is stationary for the uniform measure but is not
irreducible: it cannot change the slope, and some states (``012012`` on
the 6-cycle) admit no move at all.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .enumeration import (
    estimated_count,
    iter_coloring_arrays,
    layer_compatibility,
    layer_states,
)
from .errors import TooLarge
from .heights import Coloring, TorusHHF, coloring_slopes, lift, to_json, validate
from .lattice import Dims, Torus, edge_boundary_mask, vertex_distance
from .levelsets import LevelStructure

INDEX_LIMIT = 200_000
METHODS = ("exact", "glauber")


@dataclass(frozen=True)
class SampleConfig:
    dims: Dims
    method: str = "exact"
    steps: int = 1
    burn_in: int = 0
    seed: int = 0
    chains: int = 1

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.burn_in < 0 or self.chains < 1:
            raise ValueError("burn_in must be >= 0 and chains >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    def streams(self) -> list[np.random.Generator]:
        seqs = np.random.SeedSequence(self.seed).spawn(self.chains)
        return [np.random.Generator(np.random.PCG64(s)) for s in seqs]


# ------------------------------------------------------------ exact sampling


class ExactSampler:
    """Reusable exact sampler for one torus."""

    def __init__(self, dims: Dims):
        self.dims = dims
        total = estimated_count(dims)
        if total <= INDEX_LIMIT:
            self.table = np.concatenate(list(iter_coloring_arrays(dims)))
            self.mode = "index"
        elif dims.d == 2 and dims.n <= 10:
            self._prepare_transfer()
            self.mode = "transfer"
        else:
            raise TooLarge(f"no exact sampler for d={dims.d}, n={dims.n}")

    def _prepare_transfer(self) -> None:
        n = self.dims.n
        self.states = layer_states(n)
        M = layer_compatibility(n).astype(np.int64)
        self.M = M
        self.powers = [np.identity(len(M), dtype=np.int64)]
        for _ in range(n):
            self.powers.append(self.powers[-1] @ M)
        starts = np.nonzero(self.states[:, 0] == 0)[0]
        self.starts = starts
        self.start_weights = np.diagonal(self.powers[n])[starts]

    def _choose(self, rng: np.random.Generator, weights: np.ndarray) -> np.ndarray:
        """One index per row of ``weights``, proportional to the row."""
        cum = np.cumsum(weights, axis=1)
        total = cum[:, -1]
        r = (rng.random(len(weights)) * total).astype(np.int64)
        r = np.minimum(r, total - 1)
        return (cum <= r[:, None]).sum(axis=1)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """``size`` colorings as an array of shape ``(size,) + (n,)*d``."""
        if self.mode == "index":
            idx = rng.integers(0, len(self.table), size=size)
            return self.table[idx]
        n = self.dims.n
        w0 = np.broadcast_to(self.start_weights, (size, len(self.starts)))
        s0 = self.starts[self._choose(rng, w0)]
        walk = np.empty((size, n), dtype=np.int64)
        walk[:, 0] = s0
        for k in range(1, n):
            # s_k given s_{k-1}: M[s_{k-1}, s] * (M^(n-k))[s, s_0]
            w = self.M[walk[:, k - 1]] * self.powers[n - k][:, s0].T
            walk[:, k] = self._choose(rng, w)
        return np.transpose(self.states[walk], (0, 2, 1)).astype(np.int8)


def exact_sample(cfg: SampleConfig, count: int, batch: int = 10_000) -> Iterator[Coloring]:
    """``count`` i.i.d. uniform colorings with ``f(0) = 0``, chains interleaved in order."""
    sampler = ExactSampler(cfg.dims)
    streams = cfg.streams()
    per = [count // cfg.chains + (1 if c < count % cfg.chains else 0) for c in range(cfg.chains)]
    for rng, k in zip(streams, per):
        while k > 0:
            b = min(batch, k)
            for values in sampler.draw(rng, b):
                yield Coloring(cfg.dims, values)
            k -= b


def exact_sample_arrays(cfg: SampleConfig, count: int) -> np.ndarray:
    sampler = ExactSampler(cfg.dims)
    streams = cfg.streams()
    per = [count // cfg.chains + (1 if c < count % cfg.chains else 0) for c in range(cfg.chains)]
    parts = [sampler.draw(rng, k) for rng, k in zip(streams, per) if k]
    return np.concatenate(parts) if parts else np.empty((0,) + (cfg.dims.n,) * cfg.dims.d, np.int8)


# ------------------------------------------------------------------ Glauber


def allowed_colors(values: np.ndarray, v: tuple[int, ...]) -> list[int]:
    n, d = values.shape[0], values.ndim
    used = set()
    for a in range(d):
        for s in (1, -1):
            w = list(v)
            w[a] = (w[a] + s) % n
            used.add(int(values[tuple(w)]))
    return [c for c in range(3) if c not in used]


def glauber_chain(dims: Dims, init: Coloring, rng: np.random.Generator, steps: int, burn_in: int, samples: int) -> Iterator[Coloring]:
    """Heat-bath updates; yields the state every ``steps`` updates after ``burn_in``."""
    if validate(init):
        raise ValueError("initial coloring is not proper")
    values = np.array(init.values, dtype=np.int8)
    shape = values.shape

    def update(k: int) -> None:
        verts = rng.integers(0, dims.n, size=(k, dims.d))
        u = rng.random(k)
        for v, r in zip(verts, u):
            v = tuple(int(c) for c in v)
            opts = allowed_colors(values, v)
            values[v] = opts[int(r * len(opts))]

    update(burn_in)
    for _ in range(samples):
        update(steps)
        yield Coloring(dims, values.reshape(shape).copy())


def glauber(cfg: SampleConfig, init: Coloring, samples: int) -> Iterator[tuple[int, Coloring]]:
    """``(chain, coloring)`` pairs from ``cfg.chains`` independent chains, chain by chain."""
    for c, rng in enumerate(cfg.streams()):
        for f in glauber_chain(cfg.dims, init, rng, cfg.steps, cfg.burn_in, samples):
            yield c, f


def glauber_kernel(f: Coloring) -> dict[bytes, Fraction]:
    """One-step transition probabilities out of ``f`` (for balance checks)."""
    dims = f.dims
    out: dict[bytes, Fraction] = {}
    N = dims.volume
    for idx in np.ndindex(*f.values.shape):
        opts = allowed_colors(f.values, idx)
        for c in opts:
            g = np.array(f.values)
            g[idx] = c
            key = g.tobytes()
            out[key] = out.get(key, Fraction(0)) + Fraction(1, N * len(opts))
    return out


# --------------------------------------------------------------- statistics


@dataclass(frozen=True)
class RigidityStats:
    rho: tuple[tuple[Fraction, ...], ...]  # rho[i][k], i = parity class
    min_rho: tuple[Fraction, ...]
    slope: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "rho": [[str(x) for x in row] for row in self.rho],
            "min_rho": [str(x) for x in self.min_rho],
            "slope": list(self.slope),
        }


def _parity(dims: Dims) -> np.ndarray:
    return np.indices((dims.n,) * dims.d).sum(axis=0) % 2


def rho_stats(f: Coloring) -> RigidityStats:
    """Proportion of each color on each parity class."""
    par = _parity(f.dims)
    rho = []
    for i in (0, 1):
        cls = f.values[par == i]
        rho.append(tuple(Fraction(int(np.sum(cls == k)), cls.size) for k in range(3)))
    mins = tuple(min(rho[0][k], rho[1][k]) for k in range(3))
    return RigidityStats(tuple(rho), mins, lift(f).slope)


def mean_min_rho(samples: Iterable[Coloring]) -> tuple[tuple[Fraction, ...], int]:
    """Exact average of ``min_i rho_{i,k}`` for each ``k``, and the sample count."""
    total = [Fraction(0)] * 3
    count = 0
    for f in samples:
        st = rho_stats(f)
        total = [a + b for a, b in zip(total, st.min_rho)]
        count += 1
    return tuple(t / count for t in total) if count else (Fraction(0),) * 3, count


def slope_event_freq(samples: Iterable[Coloring] | np.ndarray, dims: Dims | None = None) -> Fraction:
    """Fraction of samples with nonzero slope."""
    if isinstance(samples, np.ndarray):
        assert dims is not None
        arr = samples
    else:
        items = list(samples)
        if not items:
            return Fraction(0)
        dims = items[0].dims
        arr = np.stack([f.values for f in items])
    if len(arr) == 0:
        return Fraction(0)
    sl = coloring_slopes(arr, dims)
    return Fraction(int(np.any(sl != 0, axis=1).sum()), len(arr))


def sphere(dims: Dims, x: Sequence[int], r: int = 2) -> list[tuple[int, ...]]:
    return [
        tuple(int(c) for c in y)
        for y in np.ndindex(*(dims.n,) * dims.d)
        if vertex_distance(x, y, dims) == r
    ]


def a_x_event(f: Coloring, x: Sequence[int]) -> bool:
    """Every vertex at distance 2 from ``x`` has color 0."""
    return all(int(f.values[y]) == 0 for y in sphere(f.dims, x))


@dataclass(frozen=True)
class AxStats:
    trials: int
    events: int
    center_one: int  # f(x) = 1 given the event
    next_one: int  # f(x + e_0) = 1 given the event

    @property
    def freq(self) -> Fraction:
        return Fraction(self.events, self.trials) if self.trials else Fraction(0)

    @property
    def center(self) -> Fraction:
        return Fraction(self.center_one, self.events) if self.events else Fraction(0)

    @property
    def neighbour(self) -> Fraction:
        return Fraction(self.next_one, self.events) if self.events else Fraction(0)

    def merge(self, other: "AxStats") -> "AxStats":
        return AxStats(
            self.trials + other.trials,
            self.events + other.events,
            self.center_one + other.center_one,
            self.next_one + other.next_one,
        )

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "events": self.events,
            "freq": str(self.freq),
            "p_center_1": str(self.center),
            "p_next_1": str(self.neighbour),
        }


def a_x_freq(samples: Iterable[Coloring] | np.ndarray, x: Sequence[int], dims: Dims | None = None) -> AxStats:
    """Frequency of the event at ``x`` and the two conditional frequencies."""
    if not isinstance(samples, np.ndarray):
        items = list(samples)
        if not items:
            return AxStats(0, 0, 0, 0)
        dims = items[0].dims
        samples = np.stack([f.values for f in items])
    assert dims is not None
    sph = sphere(dims, x)
    sel = np.ones(len(samples), dtype=bool)
    for y in sph:
        sel &= samples[(slice(None),) + y] == 0
    x = tuple(int(c) % dims.n for c in x)
    e = list(x)
    e[0] = (e[0] + 1) % dims.n
    centre = samples[(slice(None),) + x][sel] == 1
    nxt = samples[(slice(None),) + tuple(e)][sel] == 1
    return AxStats(len(samples), int(sel.sum()), int(centre.sum()), int(nxt.sum()))


def a_x_conditionals(d: int) -> tuple[Fraction, Fraction]:
    """Exact conditionals given the event: ``f(x) = 1`` and ``f(x + e) = 1``.

    Given zeros on the distance-2 sphere, the centre is 0 with its ``2d``
    neighbours free in {1, 2}, or the centre is 1 or 2 with every neighbour
    forced to the third color.
    """
    total = 2 ** (2 * d) + 2
    return Fraction(1, total), Fraction(2 ** (2 * d - 1) + 1, total)


def a_x_freq_all(samples: np.ndarray, dims: Dims, min_dist: int = 2) -> AxStats:
    """Pool the event over every ``x`` at torus distance at least ``min_dist`` from 0.

    The exact sampler fixes ``f(0) = 0``; conditioning on the event makes the
    closed ball around ``x`` independent of vertices outside it, so the
    conditionals are unaffected as long as 0 is not inside that ball.
    """
    out = AxStats(0, 0, 0, 0)
    zero = dims.zero()
    for x in np.ndindex(*(dims.n,) * dims.d):
        if vertex_distance(zero, x, dims) >= min_dist:
            out = out.merge(a_x_freq(samples, x, dims))
    return out


def boundary_size_stats(r: TorusHHF) -> Counter:
    """Histogram of boundary sizes over all distinct sublevel components of ``r``."""
    torus = Torus(r.dims)
    S = LevelStructure(r, torus)
    seen = set()
    hist: Counter = Counter()
    d = r.dims.d
    for idx in np.ndindex(*torus.shape):
        for a in range(d):
            nb = list(idx)
            nb[a] = (nb[a] + 1) % r.dims.n
            nb = tuple(nb)
            if abs(S.height(idx) - S.height(nb)) != 1:
                continue
            c = S.edge_component(idx, nb)
            if c.carrier in seen:
                continue
            seen.add(c.carrier)
            hist[int(edge_boundary_mask(c.carrier.mask, torus).sum())] += 1
    return hist


# ---------------------------------------------------------------- helpers


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1 - p) / n) if n else float("inf")


def within(est: Fraction | float, exact: Fraction | float, n: int, k: float = 4.0) -> bool:
    """``|est - exact| <= k`` binomial standard deviations at ``n`` trials."""
    p = float(exact)
    return abs(float(est) - p) <= k * binomial_sigma(p, n) + 1e-12


def chi_square_uniform(samples: np.ndarray, table: np.ndarray) -> tuple[float, float]:
    """Chi-square statistic and p-value of ``samples`` against uniform over ``table``."""
    from scipy.stats import chisquare

    index = {row.tobytes(): i for i, row in enumerate(table)}
    counts = np.zeros(len(table), dtype=np.int64)
    for s in samples:
        counts[index[s.tobytes()]] += 1
    stat, p = chisquare(counts)
    return float(stat), float(p)


def exact_slope_event(dims: Dims) -> Fraction:
    from .enumeration import partition_by_slope

    part = partition_by_slope(dims)
    zero = part.counts.get((0,) * dims.d, 0)
    return Fraction(part.total - zero, part.total)


def sample_record(index: int, chain: int, f: Coloring) -> str:
    rec = {"schema": "1", "kind": "sample", "index": index, "chain": chain, "function": to_json(f)}
    return json.dumps(rec, separators=(", ", ": "))


def aggregate_record(name: str, payload: dict) -> str:
    rec = {"schema": "1", "kind": "aggregate", "name": name, **payload}
    return json.dumps(rec, separators=(", ", ": "), sort_keys=False)

