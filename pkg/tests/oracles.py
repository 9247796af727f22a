"""Independent reference computations used as test oracles.

Nothing here imports the package: each routine recomputes its answer from
first principles so that agreement is meaningful.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from math import comb


def cycle_colorings(n: int) -> int:
    """Normalized proper 3-colorings of the n-cycle (chromatic polynomial / 3)."""
    return (2**n + 2 * (-1) ** n) // 3


def cycle_slope_counts(n: int) -> dict[int, int]:
    """Closed +-1 walks of length n whose mod-3 class returns, by total winding."""
    out = {}
    for up in range(n + 1):
        m = 2 * up - n
        if m % 6 == 0:
            out[m] = comb(n, up)
    return out


def step(a: int, b: int) -> int:
    """Height increment across an edge coloured a -> b."""
    return 1 if (b - a) % 3 == 1 else -1


def ring_states(n: int) -> list[tuple[int, ...]]:
    return [s for s in itertools.product(range(3), repeat=n) if all(s[i] != s[(i + 1) % n] for i in range(n))]


def winding(s: tuple[int, ...]) -> int:
    return sum(step(s[i], s[(i + 1) % len(s)]) for i in range(len(s)))


def torus2_slope_counts(n: int) -> Counter:
    """Slope histogram of normalized colorings of the n x n torus.

    Rows are proper colorings of the n-cycle; the axis-1 slope is the
    winding of any row, the axis-0 slope is the winding accumulated down
    column 0. Raw counts are divided by 3 for the normalization f(0) = 0.
    """
    states = ring_states(n)
    compat = {s: [t for t in states if all(a != b for a, b in zip(s, t))] for s in states}
    total: Counter = Counter()
    for s0 in states:
        layer = {(s0, 0): 1}
        for _ in range(n):
            nxt: dict = defaultdict(int)
            for (s, w), c in layer.items():
                for t in compat[s]:
                    nxt[(t, w + step(s[0], t[0]))] += c
            layer = nxt
        for (s, w), c in layer.items():
            if s == s0:
                total[(w, winding(s0))] += c
    return Counter({m: c // 3 for m, c in total.items()})


def brute_colorings(d: int, n: int) -> list[tuple[int, ...]]:
    """Normalized proper colorings of the torus by plain backtracking.

    Values are listed in lexicographic vertex order (last axis fastest).
    """
    verts = list(itertools.product(range(n), repeat=d))
    index = {v: i for i, v in enumerate(verts)}
    earlier = []
    for i, v in enumerate(verts):
        nb = set()
        for a in range(d):
            for s in (1, -1):
                w = list(v)
                w[a] = (w[a] + s) % n
                j = index[tuple(w)]
                if j < i:
                    nb.add(j)
        earlier.append(sorted(nb))
    out = []
    cur = [0] * len(verts)

    def rec(i: int) -> None:
        if i == len(verts):
            out.append(tuple(cur))
            return
        for c in ((0,) if i == 0 else range(3)):
            if all(cur[j] != c for j in earlier[i]):
                cur[i] = c
                rec(i + 1)

    rec(0)
    return out


def torus_hhf_count(d: int, n: int) -> int:
    """Integer functions on the torus with h(0)=0 and |h(x)-h(y)| = 1 on edges."""
    verts = list(itertools.product(range(n), repeat=d))
    index = {v: i for i, v in enumerate(verts)}
    earlier = []
    for i, v in enumerate(verts):
        nb = set()
        for a in range(d):
            for s in (1, -1):
                w = list(v)
                w[a] = (w[a] + s) % n
                j = index[tuple(w)]
                if j < i:
                    nb.add(j)
        earlier.append(sorted(nb))
    cur = [0] * len(verts)
    count = 0

    def rec(i: int) -> None:
        nonlocal count
        if i == len(verts):
            count += 1
            return
        if i == 0:
            cands = [0]
        else:
            ref = cur[earlier[i][0]]
            cands = [ref - 1, ref + 1]
        for c in cands:
            if all(abs(cur[j] - c) == 1 for j in earlier[i]):
                cur[i] = c
                rec(i + 1)

    rec(0)
    return count


def integrate(values: dict[tuple[int, ...], int], d: int, n: int) -> tuple[dict, tuple[int, ...]]:
    """Heights on the fundamental domain and slope of a coloring, by BFS."""
    h = {(0,) * d: 0}
    queue = [(0,) * d]
    for v in queue:
        for a in range(d):
            for s in (1, -1):
                w = list(v)
                w[a] += s
                w = tuple(w)
                if all(0 <= c < n for c in w) and w not in h:
                    h[w] = h[v] + step(values[v], values[w])
                    queue.append(w)
    m = []
    for a in range(d):
        v = (0,) * d
        last = list(v)
        last[a] = n - 1
        m.append(h[tuple(last)] + step(values[tuple(last)], values[v]))
    return h, tuple(m)


def interval_family(h, u: int, v: int, lo: int, hi: int) -> int:
    """d=1 separating-family size by brute force over all (anchor, level) pairs."""
    found = set()
    for a in range(lo, hi):
        for b in range(lo, hi):
            for k in range(h(a), h(b)):
                ll = {a}
                x = a
                while x + 1 < hi and h(x + 1) != k + 1:
                    x += 1
                    ll.add(x)
                x = a
                while x - 1 >= lo and h(x - 1) != k + 1:
                    x -= 1
                    ll.add(x)
                reach = {b}
                x = b
                while x + 1 < hi and x + 1 not in ll:
                    x += 1
                    reach.add(x)
                x = b
                while x - 1 >= lo and x - 1 not in ll:
                    x -= 1
                    reach.add(x)
                carrier = frozenset(range(lo, hi)) - reach
                if u in carrier and v not in carrier:
                    found.add(carrier)
    return len(found)
