"""Verification suites shared by the command line and the test-suite.

Each suite walks a corpus of functions, runs the module invariants on
every member and returns a :class:`SuiteReport` listing violations.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import embedding, sampler
from .enumeration import count_colorings, enumerate_colorings, enumerate_slope_class, partition_by_slope
from .errors import PreconditionFailed, TricolorError
from .heights import QuasiPeriodicHF, lift, mod3, validate
from .lattice import Dims, VertexSet, Window
from .levelsets import LevelComponent, LevelStructure, basic_property_violations
from .trichotomy import (
    classify_type,
    pair_table,
    shells_connected,
    translation_order_violations,
)

Progress = Callable[[str], None] | None


@dataclass
class SuiteReport:
    suite: str
    params: dict
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, msg: str) -> None:
        if len(self.violations) < 200:
            self.violations.append(msg)

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "suite": self.suite,
            "params": self.params,
            "ok": self.ok,
            "checked": self.checked,
            "violations": self.violations,
            "details": self.details,
        }


def stderr_progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _tick(progress: Progress, i: int, every: int, label: str) -> None:
    if progress and i and i % every == 0:
        progress(f"{label}: {i}")


# ------------------------------------------------------------------ corpora


def lifts(dims: Dims) -> Iterator[QuasiPeriodicHF]:
    for f in enumerate_colorings(dims):
        yield lift(f)


def stratified_qp_sample(dims: Dims, total: int = 100, seed: int = 0) -> list[QuasiPeriodicHF]:
    """A seeded sample spread over every nonempty slope class.

    Classes small enough to list are sampled from their enumeration; the
    zero-slope class is filled with exact uniform samples of slope 0. Singleton
    classes are taken whole, the remaining budget is split evenly.
    """
    part = partition_by_slope(dims)
    rng = np.random.default_rng(seed)
    zero = (0,) * dims.d
    others = sorted(m for m in part.counts if m != zero)
    small = [m for m in others if part.counts[m] == 1]
    mid = [m for m in others if part.counts[m] > 1]
    out: list[QuasiPeriodicHF] = []
    for m in small:
        out.extend(enumerate_slope_class(dims, m))
    share = (total - len(out)) // (len(mid) + 1) if mid else 0
    for m in mid:
        members = list(enumerate_slope_class(dims, m))
        k = min(share, len(members))
        idx = sorted(rng.choice(len(members), size=k, replace=False))
        out.extend(members[i] for i in idx)
    need = total - len(out)
    cfg = sampler.SampleConfig(dims, seed=int(rng.integers(0, 2**63)))
    found: dict[bytes, QuasiPeriodicHF] = {}
    ex = sampler.ExactSampler(dims)
    gen = np.random.Generator(np.random.PCG64(cfg.seed))
    while len(found) < need:
        for values in ex.draw(gen, 4 * need):
            h = lift(sampler.Coloring(dims, values))
            if not any(h.slope) and h.base.tobytes() not in found:
                found[h.base.tobytes()] = h
                if len(found) == need:
                    break
    out.extend(found.values())
    return out


# ------------------------------------------------------------- bijection


def bijection_suite(dims: Dims, progress: Progress = None) -> SuiteReport:
    rep = SuiteReport("bijection", {"d": dims.d, "n": dims.n})
    keys = set()
    for i, f in enumerate(enumerate_colorings(dims)):
        _tick(progress, i, 100_000, "bijection")
        h = lift(f)
        probs = validate(h)
        if probs:
            rep.fail(f"lift of coloring {i} invalid: {probs[0]}")
        if mod3(h) != f:
            rep.fail(f"coloring {i}: mod 3 of its lift differs")
        keys.add(h.key())
        rep.checked += 1
    if len(keys) != rep.checked:
        rep.fail(f"lift not injective: {rep.checked} colorings, {len(keys)} lifts")
    expected = count_colorings(dims, "transfer")
    if rep.checked != expected:
        rep.fail(f"enumerated {rep.checked} colorings, transfer count {expected}")
    rep.details = {"colorings": rep.checked, "distinct_lifts": len(keys)}
    return rep


# --------------------------------------------------------- height formula


def fundamental_domain(dims: Dims) -> list[tuple[int, ...]]:
    return list(itertools.product(range(dims.n), repeat=dims.d))


def height_formula_violations(h: QuasiPeriodicHF, window_k: int = 2) -> tuple[int, list[str]]:
    S = LevelStructure(h, Window(h.dims, window_k))
    F = fundamental_domain(h.dims)
    out = []
    for u in F:
        for v in F:
            fwd, bwd = S.separating(u, v)
            if len(fwd) - len(bwd) != h.eval(v) - h.eval(u):
                out.append(f"slope {h.slope}: pair {u} -> {v}: {len(fwd)} - {len(bwd)} != {h.eval(v) - h.eval(u)}")
    return len(F) ** 2, out


def height_formula_suite(corpus: Iterable[QuasiPeriodicHF], label: dict, progress: Progress = None) -> SuiteReport:
    rep = SuiteReport("height-formula", label)
    functions = 0
    for i, h in enumerate(corpus):
        _tick(progress, i, 100, "height-formula")
        pairs, bad = height_formula_violations(h)
        rep.checked += pairs
        functions += 1
        for b in bad:
            rep.fail(b)
    rep.details = {"functions": functions, "pairs": rep.checked}
    return rep


# -------------------------------------------------------------- trichotomy


def fundamental_components(S: LevelStructure) -> list[LevelComponent]:
    """Distinct sublevel components owning an edge whose lower corner is in the fundamental domain."""
    dims = S.dims
    seen: dict[VertexSet, LevelComponent] = {}
    for x in fundamental_domain(dims):
        for a in range(dims.d):
            y = list(x)
            y[a] += 1
            c = S.edge_component(x, tuple(y))
            seen.setdefault(c.carrier, c)
    return list(seen.values())


@dataclass
class TrichotomyTally:
    functions: int = 0
    components: int = 0
    pairs: int = 0
    types: dict = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False)

    def classify(self, U: VertexSet):
        got = self.cache.get(U)
        if got is None:
            got = self.cache[U] = classify_type(U)
        return got


def trichotomy_violations(h: QuasiPeriodicHF, tally: TrichotomyTally, window_k: int = 2, classify: bool = True) -> list[str]:
    out: list[str] = []
    window = Window(h.dims, window_k)
    for kind, fn in (("sub", h), ("super", h.negate())):
        S = LevelStructure(fn, window)
        comps = fundamental_components(S)
        sets = [c.carrier for c in comps]
        k = len(sets)
        tally.components += k
        tally.pairs += k * (k - 1)
        for c in comps:
            for p in basic_property_violations(S, c):
                out.append(f"{kind} component at level {c.level}: {p}")
        if k >= 2:
            T = pair_table(sets)
            off = ~np.eye(k, dtype=bool)
            if np.any(off & ~T.boundary_disjoint):
                out.append(f"{kind}: distinct components share boundary")
            bad = off & ~T.exactly_one()
            for i, j in zip(*np.nonzero(bad)):
                out.append(f"{kind}: pair ({i}, {j}) satisfies {T.alternatives(i, j)}")
        if not classify:
            continue
        types = []
        for U in sets:
            a = tally.classify(U)
            b = tally.classify(U.complement())
            types.append(a)
            key = ",".join(str(t) for t in sorted(a.types))
            tally.types[key] = tally.types.get(key, 0) + 1
            if a.types != frozenset(-t for t in b.types):
                out.append(f"{kind}: complement types {sorted(a.types)} vs {sorted(b.types)}")
            if a.type == 0:
                if b.functional != tuple(-c for c in a.functional):
                    out.append(f"{kind}: complement functional {b.functional} vs {a.functional}")
                out.extend(f"{kind}: {p}" for p in translation_order_violations(U, a))
            for name, ok in shells_connected(U).items():
                if not ok:
                    out.append(f"{kind}: {name} shell disconnected")
        if k >= 2:
            for i, j in zip(*np.nonzero(T.inside & off)):
                ti, tj = types[i], types[j]
                if ti.degenerate or tj.degenerate:
                    continue
                if ti.type < tj.type:
                    out.append(f"{kind}: monotonicity fails, {ti.type} inside {tj.type}")
    tally.functions += 1
    return out


def trichotomy_suite(corpus: Iterable[QuasiPeriodicHF], label: dict, classify: bool = True, progress: Progress = None) -> SuiteReport:
    rep = SuiteReport("trichotomy", label)
    tally = TrichotomyTally()
    for i, h in enumerate(corpus):
        _tick(progress, i, 100, "trichotomy")
        for v in trichotomy_violations(h, tally, classify=classify):
            rep.fail(v)
    rep.checked = tally.pairs
    rep.details = {
        "functions": tally.functions,
        "components": tally.components,
        "ordered_pairs": tally.pairs,
        "types": tally.types,
    }
    return rep


# --------------------------------------------------------------- embedding


def embedding_suite(dims: Dims, m: Sequence[int], progress: Progress = None) -> SuiteReport:
    m = tuple(int(c) for c in m)
    rep = SuiteReport("embedding", {"d": dims.d, "n": dims.n, "m": list(m)})
    members = list(enumerate_slope_class(dims, m))
    images: dict[bytes, int] = {}
    oracle_images: dict[bytes, int] = {}
    agree = 0
    for i, h in enumerate(members):
        _tick(progress, i, 5, "embedding")
        try:
            T, sc = embedding.psi_scaffold(h)
            t = embedding.psi(h, m)
        except TricolorError as err:
            rep.fail(f"member {i}: {type(err).__name__}: {err}")
            continue
        rep.checked += 1
        if any(t.slope) or validate(t):
            rep.fail(f"member {i}: image is not a periodic height function")
        images.setdefault(t.base.tobytes(), i)
        try:
            back = embedding.psi_inverse(t, m)
            if back != h:
                rep.fail(f"member {i}: inverse does not recover the input")
        except TricolorError as err:
            rep.fail(f"member {i}: inverse failed: {err}")
        for v in embedding.stability_violations(sc):
            rep.fail(f"member {i}: {v}")
        for v in embedding.projection_violations(sc):
            rep.fail(f"member {i}: {v}")
        if dims.d == 1:
            t1 = embedding.psi_1d(h)
            if any(t1.slope) or validate(t1):
                rep.fail(f"member {i}: direct formula image invalid")
            oracle_images.setdefault(t1.base.tobytes(), i)
            agree += int(t1 == t)
    if len(images) != rep.checked:
        rep.fail(f"images not distinct: {rep.checked} inputs, {len(images)} images")
    rep.details = {"members": len(members), "distinct_images": len(images)}
    if dims.d == 1:
        if len(oracle_images) != len(members):
            rep.fail("direct formula is not injective")
        rep.details.update(
            {
                "direct_distinct_images": len(oracle_images),
                "image_sets_equal": set(images) == set(oracle_images),
                "pointwise_agreements": agree,
            }
        )
    part = partition_by_slope(dims)
    qm, q0 = part.ratio(m)
    rep.details["ratio"] = f"{qm}/{q0}"
    if not qm < q0:
        rep.fail(f"|QP_m| = {qm} is not below |QP_0| = {q0}")
    if len(images) > q0:
        rep.fail("more images than periodic functions")
    return rep


def steep_suite(dims: Dims, m: Sequence[int], progress: Progress = None) -> SuiteReport:
    m = tuple(int(c) for c in m)
    rep = SuiteReport("steep", {"d": dims.d, "n": dims.n, "m": list(m)})
    counts, sums = [], []
    for i, h in enumerate(enumerate_slope_class(dims, m)):
        _tick(progress, i, 5, "steep")
        try:
            T, sc = embedding.psi_scaffold(h, steep=True)
            u, v, total = embedding.steep_witness(h, sc, T)
        except TricolorError as err:
            rep.fail(f"member {i}: {type(err).__name__}: {err}")
            continue
        rep.checked += 1
        if sc.p * 6 != sc.delta_height:
            rep.fail(f"member {i}: p does not match delta / 6")
        bound = sc.sigma * dims.n ** (dims.d - 1)
        if total < bound:
            rep.fail(f"member {i}: witness sum {total} < {bound}")
        sums.append(total)
        for V in (sc.V0, *sc.steep):
            count, need = embedding.long_boundary(sc, V)
            counts.append(count)
            if count < need:
                rep.fail(f"member {i}: directed boundary {count} < {need}")
    rep.details = {
        "members": rep.checked,
        "min_directed_boundary": min(counts) if counts else None,
        "min_witness_sum": min(sums) if sums else None,
    }
    return rep


# ------------------------------------------------------------------- stats


def stats_suite(dims: Dims, draws: int = 60_000, seed: int = 0, k: float = 4.0) -> SuiteReport:
    rep = SuiteReport("stats", {"d": dims.d, "n": dims.n, "draws": draws, "seed": seed})
    cfg = sampler.SampleConfig(dims, seed=seed)
    ex = sampler.ExactSampler(dims)
    arr = ex.draw(cfg.streams()[0], draws)
    rep.checked = draws
    if ex.mode == "index":
        stat, p = sampler.chi_square_uniform(arr, ex.table)
        rep.details["chi_square"] = {"statistic": stat, "p_value": p, "cells": len(ex.table)}
        if p <= 0.001:
            rep.fail(f"chi-square p-value {p:.2e} <= 0.001")
    exact = sampler.exact_slope_event(dims)
    est = sampler.slope_event_freq(arr, dims)
    rep.details["slope_event"] = {"estimate": str(est), "exact": str(exact)}
    if not sampler.within(est, exact, draws, k):
        rep.fail(f"slope event {float(est):.5f} vs exact {float(exact):.5f}")
    if dims.d >= 2:
        st = sampler.a_x_freq_all(arr, dims)
        c_exact, n_exact = sampler.a_x_conditionals(dims.d)
        rep.details["a_x"] = st.to_json()
        if not sampler.within(st.center, c_exact, st.events, k):
            rep.fail(f"P(f(x)=1 | A_x) = {float(st.center):.4f} vs {c_exact}")
        if not sampler.within(st.neighbour, n_exact, st.events, k):
            rep.fail(f"P(f(x+e)=1 | A_x) = {float(st.neighbour):.4f} vs {n_exact}")
    return rep


SUITES = ("bijection", "height-formula", "trichotomy", "embedding", "steep", "stats")


def default_corpus(dims: Dims, m: Sequence[int] | None, sample: int | None, seed: int) -> tuple[list[QuasiPeriodicHF], dict]:
    label = {"d": dims.d, "n": dims.n}
    if m is not None:
        members = list(enumerate_slope_class(dims, tuple(m)))
        label["m"] = list(m)
        return members, label
    if sample is not None:
        label.update({"sample": sample, "seed": seed})
        return stratified_qp_sample(dims, sample, seed), label
    return list(lifts(dims)), label


def run_suite(name: str, dims: Dims, m: Sequence[int] | None = None, sample: int | None = None, seed: int = 0, progress: Progress = None) -> SuiteReport:
    if name == "bijection":
        return bijection_suite(dims, progress)
    if name in ("height-formula", "trichotomy"):
        corpus, label = default_corpus(dims, m, sample, seed)
        if name == "height-formula":
            return height_formula_suite(corpus, label, progress)
        return trichotomy_suite(corpus, label, progress=progress)
    if name in ("embedding", "steep"):
        if m is None:
            raise PreconditionFailed(f"suite {name} needs a slope")
        fn = embedding_suite if name == "embedding" else steep_suite
        return fn(dims, m, progress)
    if name == "stats":
        return stats_suite(dims, seed=seed)
    raise ValueError(f"unknown suite {name!r}")


def exact_ratios(dims_list: Iterable[Dims]) -> dict:
    """``|QP_m| / |QP_0|`` for every nonzero slope class, as exact fractions."""
    out = {}
    for dims in dims_list:
        part = partition_by_slope(dims)
        zero = part.counts.get((0,) * dims.d, 0)
        out[f"d={dims.d},n={dims.n}"] = {
            ",".join(str(c) for c in m): str(Fraction(cnt, zero))
            for m, cnt in sorted(part.counts.items())
            if any(m)
        }
    return out
