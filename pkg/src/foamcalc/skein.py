"""The sl(N) link polynomial from the skein relation (independent oracle).

    q^{-N} P(L+) - q^{N} P(L-) = (q^{-1} - q) P(L0),   P(unknot) = [N].

Crossings are switched until the diagram is descending (an unlink), and
every switch spawns an oriented smoothing.  No foams or MOY graphs are used.
"""

from __future__ import annotations

from functools import lru_cache

from .diagrams import LinkDiagram
from .rings import LaurentQ, quantum_integer


def switch(pd: tuple, signs: tuple, c: int):
    i, j, k, l = pd[c]
    new = (l, i, j, k) if signs[c] > 0 else (j, k, l, i)
    return pd[:c] + (new,) + pd[c + 1:], signs[:c] + (-signs[c],) + signs[c + 1:]


def smooth(pd: tuple, signs: tuple, loops: int, c: int):
    i, j, k, l = pd[c]
    # oriented smoothing: incoming arcs continue into the other strand's exit
    merges = [(k, l), (j, i)] if signs[c] > 0 else [(l, i), (k, j)]
    rest = [list(x) for n, x in enumerate(pd) if n != c]
    for old, new in merges:
        if old == new:
            loops += 1
            continue
        for x in rest:
            for s in range(4):
                if x[s] == old:
                    x[s] = new
        merges = [(new if a == old else a, new if b == old else b) for a, b in merges]
    return tuple(map(tuple, rest)), signs[:c] + signs[c + 1:], loops


def _next_arc(pd, signs) -> dict:
    nxt = {}
    for (i, j, k, l), s in zip(pd, signs):
        nxt[i] = k
        if s > 0:
            nxt[l] = j
        else:
            nxt[j] = l
    return nxt


def _first_bad(pd, signs):
    """First crossing met from below on a traversal; None if descending."""
    nxt = _next_arc(pd, signs)
    head = {}
    for c, x in enumerate(pd):
        head[x[0]] = c
        head[x[3] if signs[c] > 0 else x[1]] = c
    seen_arcs, seen_x = set(), set()
    comps = 0
    for start in sorted(nxt):
        if start in seen_arcs:
            continue
        comps += 1
        a = start
        while a not in seen_arcs:
            seen_arcs.add(a)
            c = head[a]
            if c not in seen_x:
                seen_x.add(c)
                if pd[c][0] == a:
                    return c, comps
            a = nxt[a]
    return None, comps


@lru_cache(maxsize=None)
def _poly(pd: tuple, signs: tuple, loops: int, N: int) -> LaurentQ:
    c, comps = _first_bad(pd, signs)
    if c is None:
        return quantum_integer(N) ** (comps + loops)
    pd2, s2 = switch(pd, signs, c)
    pd0, s0, l0 = smooth(pd, signs, loops, c)
    other = _poly(pd2, s2, loops, N)
    zero = _poly(pd0, s0, l0, N)
    d = LaurentQ({-1: 1, 1: -1})
    if signs[c] > 0:
        # P(+) = q^{2N} P(-) + q^N (q^{-1} - q) P(0)
        return other.shift(2 * N) + (d * zero).shift(N)
    # P(-) = q^{-2N} P(+) - q^{-N} (q^{-1} - q) P(0)
    return other.shift(-2 * N) - (d * zero).shift(-N)


def skein_polynomial(D: LinkDiagram, N: int) -> LaurentQ:
    return _poly(tuple(D.pd), tuple(D.signs), D.loops, N)
