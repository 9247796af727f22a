"""Flattening the slope: the scaffold, the map Psi_m and its inverse.

For a quasi-periodic height function with nonzero slope ``m`` the map
reverses the gradient of ``h`` on a periodic family of strips bounded by
translates of two level components, ``W_0`` and ``U_0``, producing a
periodic height function. Everything is computed on a lattice window
after rotating coordinates so the first slope coordinate is positive and
largest in absolute value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    NotInImage,
    PreconditionFailed,
    ScaffoldInvariantViolated,
    WindowOverflow,
    WindowUnstable,
    ZeroSlope,
)
from .heights import QuasiPeriodicHF, TorusHHF, validate
from .lattice import (
    DEFAULT_K,
    MAX_K,
    Dims,
    EdgeSet,
    Torus,
    VertexSet,
    Window,
    edge_boundary_mask,
    extb,
    intb,
    plus_mask,
    project,
    shift_by,
)
from .levelsets import LevelComponent, LevelStructure
from .trichotomy import TypeClassification, classify_type, directed_boundary_count

Slope = tuple[int, ...]
_UNSET = np.iinfo(np.int64).min


# ------------------------------------------------------------ orientation


@dataclass(frozen=True)
class OrientationTransform:
    """``v' = A v``: flip the axes in ``flips``, then new axis ``a`` reads old axis ``perm[a]``."""

    perm: tuple[int, ...]
    flips: tuple[bool, ...]

    def _signs(self) -> tuple[int, ...]:
        return tuple(-1 if f else 1 for f in self.flips)

    def slope(self, m: Sequence[int]) -> Slope:
        s = self._signs()
        return tuple(s[p] * int(m[p]) for p in self.perm)

    def vertex(self, v: Sequence[int]) -> tuple[int, ...]:
        s = self._signs()
        return tuple(s[p] * int(v[p]) for p in self.perm)

    def inverse_vertex(self, w: Sequence[int]) -> tuple[int, ...]:
        s = self._signs()
        out = [0] * len(w)
        for a, p in enumerate(self.perm):
            out[p] = s[p] * int(w[a])
        return tuple(out)

    def _pull(self, h: QuasiPeriodicHF, new_slope: Slope, forward: bool) -> QuasiPeriodicHF:
        dims = h.dims
        grid = np.indices((dims.n,) * dims.d)
        src = np.empty_like(grid)
        s = self._signs()
        if forward:
            # h'(w) = h(A^-1 w)
            for a, p in enumerate(self.perm):
                src[p] = s[p] * grid[a]
        else:
            # h(v) = h'(A v)
            for a, p in enumerate(self.perm):
                src[a] = s[p] * grid[p]
        return QuasiPeriodicHF(dims, new_slope, h.evaluate(src))

    def apply(self, h: QuasiPeriodicHF) -> QuasiPeriodicHF:
        return self._pull(h, self.slope(h.slope), True)

    def invert(self, h: QuasiPeriodicHF) -> QuasiPeriodicHF:
        s = self._signs()
        old = [0] * h.dims.d
        for a, p in enumerate(self.perm):
            old[p] = s[p] * h.slope[a]
        return self._pull(h, tuple(old), False)

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and not any(self.flips)


def orient(m: Sequence[int]) -> OrientationTransform:
    """Rotate so the first coordinate is positive and largest in absolute value.

    Ties go to the lowest axis; the sign flip is applied before the swap.
    """
    m = tuple(int(c) for c in m)
    if not any(m):
        raise ZeroSlope("slope is zero")
    j = max(range(len(m)), key=lambda a: (abs(m[a]), -a))
    flips = tuple(a == j and m[a] < 0 for a in range(len(m)))
    perm = list(range(len(m)))
    perm[0], perm[j] = perm[j], perm[0]
    return OrientationTransform(tuple(perm), flips)


# --------------------------------------------------------------- scaffold


@dataclass(frozen=True, eq=False)
class EmbeddingScaffold:
    h: QuasiPeriodicHF  # oriented
    window: Window
    W0: LevelComponent
    V0: LevelComponent
    U0: VertexSet
    U0_complement: LevelComponent  # superlevel provenance of U0
    delta: tuple[int, ...]
    delta_height: int
    ell: int
    classification: TypeClassification
    steep: tuple[LevelComponent, ...] | None = None  # V0^0 ... V0^(p-1)
    image: QuasiPeriodicHF | None = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.delta_height // 6

    @property
    def sigma(self) -> int:
        return self.h.slope[0] // 6

    @property
    def level_w(self) -> int:
        return self.W0.level

    def to_json(self) -> dict:
        def cells(U: VertexSet) -> list:
            core = self.window.core()
            return sorted(list(v) for v in VertexSet(U.space, U.mask & core).vertices())

        out = {
            "schema": "1",
            "slope": list(self.h.slope),
            "window": self.window.describe(),
            "delta": list(self.delta),
            "delta_height": self.delta_height,
            "ell": self.ell,
            "p": self.p,
            "sigma": self.sigma,
            "levels": {
                "W0": self.W0.level,
                "V0": self.V0.level,
                "U0_inner": self.level_w + 1 - self.delta_height // 2,
            },
            "W0": cells(self.W0.carrier),
            "V0": cells(self.V0.carrier),
            "U0": cells(self.U0),
        }
        if self.steep is not None:
            out["steep_levels"] = [c.level for c in self.steep]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(", ", ": ")) + "\n"


def _shift(U: VertexSet, x: Sequence[int]) -> np.ndarray:
    return shift_by(U.mask, tuple(x), False)


def _trusted(window: Window, *offsets: Sequence[int]) -> np.ndarray:
    """Core cells whose offsets by each ``-x`` also lie in the core."""
    core = window.core()
    out = core.copy()
    for x in offsets:
        out &= shift_by(core, tuple(x), False)
    return out


def _subset(a: np.ndarray, b: np.ndarray, region: np.ndarray) -> bool:
    return not np.any(a & ~b & region)


def _strict_subset(a: np.ndarray, b: np.ndarray, region: np.ndarray) -> bool:
    return _subset(a, b, region) and bool(np.any(b & ~a & region))


class _Search:
    """Candidate search for one oriented function on one window."""

    def __init__(self, h: QuasiPeriodicHF, window: Window, errors: type[Exception]):
        self.h = h
        self.window = window
        self.err = errors
        self.S = LevelStructure(h, window)
        self.neg = LevelStructure(h.negate(), window)
        dims = h.dims
        self.origin = dims.zero()
        self.fwd = dims.unit(0, dims.n)
        self.back = dims.unit(0, -dims.n)
        self._types: dict[VertexSet, TypeClassification | None] = {}

    def type_of(self, U: VertexSet) -> TypeClassification | None:
        if U not in self._types:
            try:
                self._types[U] = classify_type(U)
            except PreconditionFailed:
                self._types[U] = None
        return self._types[U]

    def is_type0(self, U: VertexSet) -> bool:
        cls = self.type_of(U)
        return cls is not None and cls.type == 0

    def minimal_w(self) -> tuple[LevelComponent, TypeClassification]:
        fam = self.S.separating(self.origin, self.fwd)[0]
        core = self.window.core()
        members = list(fam)
        for a, b in zip(members, members[1:]):
            if not _subset(a.carrier.mask, b.carrier.mask, core):
                raise ScaffoldInvariantViolated("separating family is not a chain")
        for c in members:
            if self.is_type0(c.carrier):
                return c, self.type_of(c.carrier)
        raise self.err("no type 0 sublevel component separates 0 from n e1")

    def below(self) -> list[LevelComponent]:
        return list(self.S.separating(self.back, self.origin)[0])

    def u_candidates(self) -> list[tuple[VertexSet, LevelComponent]]:
        fam = self.neg.separating(self.origin, self.back)[0]
        out = []
        for c in fam:
            sup = LevelComponent("super", -c.level, c.u, c.v, c.carrier, -c.level, -c.level - 1)
            out.append((c.carrier.complement(), sup))
        return out


def _window_loop(fn, K: int):
    """Run ``fn(window_K)``, doubling the window on instability up to ``MAX_K``."""
    last: Exception | None = None
    while K <= MAX_K:
        try:
            return fn(K)
        except (WindowUnstable, WindowOverflow) as err:
            last = err
            K *= 2
    raise WindowUnstable(f"no stable window up to K={MAX_K}: {last}")


def build_scaffold(h: QuasiPeriodicHF, steep: bool = False, window_k: int = DEFAULT_K) -> EmbeddingScaffold:
    """Scaffold of an oriented function (first slope coordinate positive and maximal)."""
    m = h.slope
    if m[0] <= 0 or any(abs(c) > m[0] for c in m):
        raise PreconditionFailed(f"slope {m} is not oriented; apply orient() first")
    return _window_loop(lambda K: _build(h, steep, Window(h.dims, K), ScaffoldInvariantViolated), window_k)


def _build(h: QuasiPeriodicHF, steep: bool, window: Window, err: type[Exception]) -> EmbeddingScaffold:
    srch = _Search(h, window, err)
    dims = h.dims
    n = dims.n
    m = h.slope
    W0, cls = srch.minimal_w()
    delta = cls.delta
    assert delta is not None and cls.functional is not None
    dh = sum(mi * (x // n) for mi, x in zip(m, delta))
    ell = cls.functional[0]
    if dh < 6 or dh % 6:
        raise err(f"translation height {dh} is not a positive multiple of 6")
    if ell * dh != m[0]:
        raise err(f"m1 = {m[0]} differs from ell * delta = {ell} * {dh}")
    kW = W0.level
    minus = tuple(-c for c in delta)
    region = _trusted(window, minus)
    Wm = _shift(W0.carrier, minus)
    Wmask = W0.carrier.mask
    if not Wm[window.index(srch.back)]:
        raise err("-n e1 is not in W0 - Delta")

    def sandwiched(U: VertexSet, lo: np.ndarray = Wm) -> bool:
        return _subset(lo, U.mask, region) and _subset(U.mask, Wmask, region)

    below = srch.below()
    vs = [c for c in below if c.level == kW - 1 and sandwiched(c.carrier) and srch.is_type0(c.carrier)]
    if not vs:
        raise err("no type 0 component one level below W0")
    V0 = max(vs, key=len)

    target = kW + 1 - dh // 2
    us = [
        (U, sup)
        for U, sup in srch.u_candidates()
        if sup.outer_height == target and sandwiched(U) and srch.is_type0(sup.carrier)
    ]
    if not us:
        raise err("no type 0 superlevel complement at the middle level")
    U0, Usup = max(us, key=lambda pair: len(pair[0]))

    chain = [Wm, U0.mask, V0.carrier.mask, Wmask]
    for a, b in zip(chain, chain[1:]):
        if not _strict_subset(a, b, region):
            raise err("containment chain W0 - Delta < U0 < V0 < W0 fails")

    family = None
    if steep:
        p = dh // 6
        top = [c for c in below if c.level == kW - 3 * p + 2 and sandwiched(c.carrier) and srch.is_type0(c.carrier)]
        if not top:
            raise err("no type 0 component for the deepest steep level")
        fam = [max(top, key=len)]
        for i in range(p - 2, -1, -1):
            inner = fam[0].carrier.mask
            cands = [
                c
                for c in below
                if c.level == kW - 3 * i - 1
                and _strict_subset(inner, c.carrier.mask, region)
                and _strict_subset(c.carrier.mask, Wmask, region)
                and srch.is_type0(c.carrier)
            ]
            if not cands:
                raise err(f"no type 0 component for steep level {i}")
            fam.insert(0, min(cands, key=len))
        steep_chain = [U0.mask] + [c.carrier.mask for c in reversed(fam)] + [Wmask]
        for a, b in zip(steep_chain, steep_chain[1:]):
            if not _strict_subset(a, b, region):
                raise err("steep containment chain fails")
        family = tuple(fam)

    sc = EmbeddingScaffold(h, window, W0, V0, U0, Usup, tuple(delta), dh, ell, cls, family)
    object.__setattr__(sc, "image", _psi_oriented(sc))
    return sc


# ------------------------------------------------------------------- Psi


def _piecewise(
    values: np.ndarray,
    window: Window,
    W0: np.ndarray,
    U0: np.ndarray,
    delta: Sequence[int],
    dh: int,
    outer: int,
    sign: int,
) -> np.ndarray:
    """Apply the strip formula on every trusted cell of the window.

    ``sign=-1`` is the forward map, ``+1`` the inverse; only the kept strips
    change sign, the reflected ones are their own inverse.
    """
    core = window.core()
    out = np.full(window.shape, _UNSET, dtype=np.int64)
    span = 2 * window.side // max(1, max(abs(c) for c in delta)) + 2
    for j in range(-span, span + 1):
        xj = tuple(j * c for c in delta)
        xj1 = tuple((j - 1) * c for c in delta)
        known = core & shift_by(core, xj, False) & shift_by(core, xj1, False)
        if not known.any():
            continue
        Wj = shift_by(W0, xj, False)
        Wj1 = shift_by(W0, xj1, False)
        Uj = shift_by(U0, xj, False)
        sel = known & Wj & ~Wj1
        if np.any(out[sel] != _UNSET):
            raise ScaffoldInvariantViolated("strips overlap")
        if np.any(known & ((Wj1 & ~Uj) | (Uj & ~Wj))):
            raise ScaffoldInvariantViolated("strip chain broken")
        strip_u = sel & Uj
        strip_w = sel & ~Uj
        out[strip_w] = values[strip_w] + sign * j * dh
        out[strip_u] = 2 * outer - values[strip_u] + (j - 1) * dh
    return out


def _fundamental(window: Window, arr: np.ndarray) -> np.ndarray:
    n, off = window.dims.n, window.offset
    return arr[(slice(off, off + n),) * window.dims.d]


def _periodic_violations(window: Window, arr: np.ndarray, slope: Sequence[int]) -> list[str]:
    """``arr(x + n e_a) = arr(x) + m_a`` on every pair of determined cells."""
    out = []
    n = window.dims.n
    for a, m in enumerate(slope):
        nxt = np.roll(arr, -n, axis=a)
        both = (arr != _UNSET) & (nxt != _UNSET)
        idx = [slice(None)] * arr.ndim
        idx[a] = slice(window.side - n, None)
        both[tuple(idx)] = False
        bad = both & (nxt - arr != m)
        if bad.any():
            out.append(f"{int(bad.sum())} cells break the shift by n e{a}")
    return out


def _psi_oriented(sc: EmbeddingScaffold) -> QuasiPeriodicHF:
    if sc.image is not None:
        return sc.image
    window = sc.window
    heights = sc.h.on_space(window)
    t = _piecewise(
        heights, window, sc.W0.carrier.mask, sc.U0.mask, sc.delta, sc.delta_height, sc.level_w + 1, -1
    )
    base = _fundamental(window, t)
    if np.any(base == _UNSET):
        raise WindowUnstable("strip index undetermined on the fundamental domain")
    probs = _periodic_violations(window, t, (0,) * sc.h.dims.d)
    delta_shift = shift_by(t, sc.delta, False, fill=_UNSET)
    both = (t != _UNSET) & (delta_shift != _UNSET)
    if np.any(both & (t != delta_shift)):
        probs.append("result is not Delta-periodic")
    out = QuasiPeriodicHF(sc.h.dims, (0,) * sc.h.dims.d, base)
    probs += validate(out)
    if probs:
        raise ScaffoldInvariantViolated("; ".join(probs[:5]))
    return out


def psi(h: QuasiPeriodicHF, m: Sequence[int] | None = None, window_k: int = DEFAULT_K, certify: bool = True) -> QuasiPeriodicHF:
    """Map a function of slope ``m`` to a periodic height function.

    With ``certify`` the result is recomputed on the doubled window and must agree.
    """
    m = tuple(h.slope if m is None else m)
    if tuple(h.slope) != m:
        raise PreconditionFailed(f"function has slope {h.slope}, not {m}")
    T = orient(m)
    ho = T.apply(h)

    def run(K: int) -> QuasiPeriodicHF:
        t = _build(ho, False, Window(h.dims, K), ScaffoldInvariantViolated).image
        if certify and 2 * K <= MAX_K:
            t2 = _build(ho, False, Window(h.dims, 2 * K), ScaffoldInvariantViolated).image
            if t2 != t:
                raise WindowUnstable("image changed under window doubling")
        return t

    return T.invert(_window_loop(run, window_k))


def psi_scaffold(h: QuasiPeriodicHF, steep: bool = False, window_k: int = DEFAULT_K) -> tuple[OrientationTransform, EmbeddingScaffold]:
    T = orient(h.slope)
    return T, build_scaffold(T.apply(h), steep, window_k)


def _inverse_oriented(t: QuasiPeriodicHF, m: Slope, window: Window) -> QuasiPeriodicHF:
    srch = _Search(t, window, NotInImage)
    n = t.dims.n
    W0, cls = srch.minimal_w()
    ell = cls.functional[0] if cls.functional else 0
    if ell <= 0 or m[0] % ell:
        raise NotInImage(f"order of n e1 is {ell}, which does not divide m1 = {m[0]}")
    dh = m[0] // ell
    delta = cls.delta
    if dh < 6 or dh % 6:
        raise NotInImage(f"recovered translation height {dh} is not a positive multiple of 6")
    if sum(mi * (x // n) for mi, x in zip(m, delta)) != dh:
        raise NotInImage("slope is inconsistent with the recovered translation")
    outer = W0.level + 1
    minus = tuple(-c for c in delta)
    region = _trusted(window, minus)
    Wm = _shift(W0.carrier, minus)
    target = outer - dh // 2
    us = [
        U
        for U, sup in srch.u_candidates()
        if sup.outer_height == target
        and _subset(Wm, U.mask, region)
        and _subset(U.mask, W0.carrier.mask, region)
        and srch.is_type0(sup.carrier)
    ]
    if not us:
        raise NotInImage("no admissible inner set")
    U0 = max(us, key=len)
    values = t.on_space(window)
    hv = _piecewise(values, window, W0.carrier.mask, U0.mask, delta, dh, outer, 1)
    base = _fundamental(window, hv)
    if np.any(base == _UNSET):
        raise WindowUnstable("strip index undetermined on the fundamental domain")
    probs = _periodic_violations(window, hv, m)
    out = QuasiPeriodicHF(t.dims, m, base)
    probs += validate(out)
    if probs:
        raise NotInImage("; ".join(probs[:5]))
    return out


def psi_inverse(t: QuasiPeriodicHF | TorusHHF, m: Sequence[int], window_k: int = DEFAULT_K) -> QuasiPeriodicHF:
    """Recover ``h`` of slope ``m`` from its image; :class:`NotInImage` otherwise."""
    if isinstance(t, TorusHHF):
        t = t.as_qp()
    if any(t.slope):
        raise NotInImage(f"image functions have slope 0, got {t.slope}")
    probs = validate(t)
    if probs:
        raise NotInImage("not a height function: " + probs[0])
    m = tuple(int(c) for c in m)
    T = orient(m)
    to = T.apply(t)
    mo = T.slope(m)

    def run(K: int) -> QuasiPeriodicHF:
        try:
            return _inverse_oriented(to, mo, Window(t.dims, K))
        except ScaffoldInvariantViolated as err:
            raise NotInImage(str(err)) from err

    h = T.invert(_window_loop(run, window_k))
    if psi(h, m, window_k) != t:
        raise NotInImage("recovered function does not map back")
    return h


# ------------------------------------------------------- one-dimensional


def psi_1d(h: QuasiPeriodicHF) -> QuasiPeriodicHF:
    """Direct one-dimensional gradient reversal between two marked heights.

    With slope ``6l > 0``: ``w`` is the least ``w >= 0`` at height 2 and ``u``
    the greatest ``u <= 0`` at height ``2 - 3l``. Heights are kept on
    ``[u + in, w + in]`` (shifted down by ``6il``) and reflected about 2 on
    ``[w + in, u + (i+1)n]`` (shifted up by ``6il``). Negative slopes are
    handled by reflecting the line.
    """
    if h.dims.d != 1:
        raise PreconditionFailed("the direct formula is one-dimensional")
    m = h.slope[0]
    if m == 0:
        raise ZeroSlope("slope is zero")
    if m % 6:
        raise PreconditionFailed(f"slope {m} is not a multiple of 6")
    if m < 0:
        T = orient((m,))
        return T.invert(psi_1d(T.apply(h)))
    ell = m // 6
    n = h.dims.n
    w = 0
    while h.eval((w,)) != 2:
        w += 1
    u = 0
    while h.eval((u,)) != 2 - 3 * ell:
        u -= 1
    if w - u >= n:
        raise ScaffoldInvariantViolated("marked points are a full period apart")
    base = []
    for v in range(n):
        i = (v - u) // n
        x = v - i * n  # x in [u, u + n)
        hv = h.eval((v,))
        if x <= w:
            base.append(hv - 6 * i * ell)
        else:
            base.append(4 - hv + 6 * i * ell)
    return QuasiPeriodicHF(h.dims, (0,), base)


# ------------------------------------------------------ long boundaries


def _witness_pair(sc: EmbeddingScaffold) -> tuple[tuple[int, ...], tuple[int, ...]]:
    assert sc.steep is not None
    core = sc.window.core()

    def nearest(U: VertexSet) -> tuple[int, ...]:
        cells = VertexSet(U.space, U.mask & core).vertices()
        if not cells:
            raise WindowUnstable("witness set not visible in the core")
        return min(cells, key=lambda v: (sum(abs(c) for c in v), v))

    return nearest(intb(sc.steep[-1].carrier)), nearest(extb(sc.steep[0].carrier))


def steep_witness(
    h: QuasiPeriodicHF, sc: EmbeddingScaffold | None = None, T: OrientationTransform | None = None
) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Torus points separated by ``p`` long sublevel components of the flattened image.

    Returns ``(u, v, total)`` in the input's coordinates, where ``total`` is the
    sum over ``j < p`` of the boundary sizes of the sublevel components at levels
    ``r(u) + 3j`` separating ``u`` from ``v`` for ``r`` the image on the torus.
    """
    if sc is None:
        T, sc = psi_scaffold(h, steep=True)
    elif T is None:
        T = orient(h.slope)
    if sc.steep is None:
        raise PreconditionFailed("scaffold was built without the steep family")
    u, v = _witness_pair(sc)
    r = _psi_oriented(sc).torus()
    torus = Torus(sc.h.dims)
    R = LevelStructure(r, torus)
    n = sc.h.dims.n
    pu, pv = tuple(c % n for c in u), tuple(c % n for c in v)
    total = 0
    for j in range(sc.p):
        comp = R.component(pu, pv, R.height(pu) + 3 * j)
        total += int(edge_boundary_mask(comp.carrier.mask, torus).sum())
    back = lambda x: tuple(c % n for c in T.inverse_vertex(x))  # noqa: E731
    return back(pu), back(pv), total


def projection_violations(sc: EmbeddingScaffold, V: LevelComponent | None = None) -> list[str]:
    """Check that the projected boundary of ``V`` lies in the boundary of one image component.

    The component is the torus sublevel component of the image separating the
    projections of an inner and an outer boundary vertex of ``V``.
    """
    V = V or sc.V0
    r = _psi_oriented(sc).torus()
    torus = Torus(sc.h.dims)
    R = LevelStructure(r, torus)
    n = sc.h.dims.n
    core = sc.window.core()
    inner = [x for x in intb(V.carrier).vertices() if core[sc.window.index(x)]]
    outer = [x for x in extb(V.carrier).vertices() if core[sc.window.index(x)]]
    if not inner or not outer:
        return ["boundary of V not visible in the core"]
    u = min(inner, key=lambda x: (sum(map(abs, x)), x))
    w = min(outer, key=lambda x: (sum(map(abs, x)), x))
    pu, pw = tuple(c % n for c in u), tuple(c % n for c in w)
    if not R.height(pu) <= V.level < R.height(pw):
        return [f"image heights at the witnesses do not straddle level {V.level}"]
    comp = R.component(pu, pw, V.level)
    eb = edge_boundary_mask(V.carrier.mask, sc.window)
    eb &= _core_edges(sc.window)
    proj = project(EdgeSet(sc.window, eb))
    target = EdgeSet(torus, edge_boundary_mask(comp.carrier.mask, torus))
    if not proj.issubset(target):
        return ["projected boundary escapes the image component boundary"]
    return []


def _core_edges(window: Window) -> np.ndarray:
    core = window.core()
    d = window.dims.d
    out = np.zeros((d,) + window.shape, dtype=bool)
    for a in range(d):
        out[a] = core & np.roll(core, -1, axis=a)
    return out


def long_boundary(sc: EmbeddingScaffold, V: LevelComponent | None = None) -> tuple[int, int]:
    """``(count, bound)``: projected boundary edges along the first axis and ``l n^(d-1)``."""
    V = V or sc.V0
    count = directed_boundary_count(V.carrier, 0, sc.window.core())
    return count, sc.ell * sc.h.dims.n ** (sc.h.dims.d - 1)


def stability_violations(sc: EmbeddingScaffold) -> list[str]:
    """``W0``, ``V0`` are sublevel and ``U0^c`` superlevel components of the image as well."""
    t = _psi_oriented(sc)
    S = LevelStructure(t, sc.window)
    out = []
    core = sc.window.core()
    for name, C in (("W0", sc.W0), ("V0", sc.V0)):
        other = S.component(C.u, C.v, C.level).carrier.mask
        if np.any((other != C.carrier.mask) & core):
            out.append(f"{name} is not a sublevel component of the image")
    sup = sc.U0_complement
    neg = LevelStructure(t.negate(), sc.window)
    other = neg.component(sup.u, sup.v, -sup.level).carrier.mask
    if np.any((other != sup.carrier.mask) & core):
        out.append("U0 complement is not a superlevel component of the image")
    return out


__all__ = [
    "EmbeddingScaffold",
    "OrientationTransform",
    "build_scaffold",
    "long_boundary",
    "orient",
    "projection_violations",
    "psi",
    "psi_1d",
    "psi_inverse",
    "psi_scaffold",
    "stability_violations",
    "steep_witness",
]
