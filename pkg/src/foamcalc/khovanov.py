"""Khovanov homology from the Frobenius algebra Z[X]/X^2 (independent oracle).

Bar-Natan's conventions: at X[i,j,k,l] the 0-smoothing joins (i,j),(k,l)
and the 1-smoothing joins (i,l),(j,k).  A generator is a resolution plus a
sign v+ / v- per circle; h = r - n-, q = #v+ - #v- + r + n+ - 2n-.
"""

from __future__ import annotations

from itertools import product

from .diagrams import LinkDiagram
from .krcomplex import BigradedComplex, HomologyTable, homology
from .rings import ZZ, RingSpec


def _circles(pd, loops, v):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, j, k, l), b in zip(pd, v):
        pairs = ((i, j), (k, l)) if b == 0 else ((i, l), (j, k))
        for a, c in pairs:
            parent[find(a)] = find(c)
    roots = sorted({find(a) for x in pd for a in x}, key=repr)
    label = {a: roots.index(find(a)) for x in pd for a in x}
    return len(roots) + loops, label


def khovanov_complex(D: LinkDiagram) -> BigradedComplex:
    n, npos, nneg = D.n, D.n_plus, D.n_minus
    verts = list(product((0, 1), repeat=n))
    info = {v: _circles(D.pd, D.loops, v) for v in verts}
    gens: dict = {}
    pos = {}
    for v in verts:
        k, _ = info[v]
        r = sum(v)
        for signs in product((1, -1), repeat=k):
            h = r - nneg
            lst = gens.setdefault(h, [])
            pos[(v, signs)] = len(lst)
            lst.append((sum(signs) + r + npos - 2 * nneg, (v, signs)))
    diffs: dict = {}
    for v in verts:
        k, lab = info[v]
        for c in range(n):
            if v[c]:
                continue
            w = v[:c] + (1,) + v[c + 1:]
            k2, lab2 = info[w]
            sign = -1 if sum(v[:c]) % 2 else 1
            i, j, kk, l = D.pd[c]
            # circles before/after, through the arcs at the crossing
            a, b = lab[i], lab[kk]
            # map old circle ids to new ones via any arc
            old_to_new = {}
            for x in D.pd:
                for arc in x:
                    old_to_new.setdefault(lab[arc], set()).add(lab2[arc])
            for lp in range(k - D.loops, k):
                old_to_new[lp] = {lp - k + k2}
            h = sum(v) - nneg
            block = diffs.setdefault(h, {})
            for s in product((1, -1), repeat=k):
                col = block.setdefault(pos[(v, s)], {})
                if a != b:  # merge
                    (m,) = old_to_new[a]
                    t = [0] * k2
                    for o in range(k):
                        if o not in (a, b):
                            (nn,) = old_to_new[o]
                            t[nn] = s[o]
                    if s[a] == 1 and s[b] == 1:
                        t[m] = 1
                    elif s[a] == -1 and s[b] == -1:
                        continue
                    else:
                        t[m] = -1
                    key = pos[(w, tuple(t))]
                    col[key] = col.get(key, 0) + sign
                else:  # split
                    new = sorted(old_to_new[a])
                    t = [0] * k2
                    for o in range(k):
                        if o != a:
                            (nn,) = old_to_new[o]
                            t[nn] = s[o]
                    outs = [(1, -1), (-1, 1)] if s[a] == 1 else [(-1, -1)]
                    for x, y in outs:
                        t[new[0]], t[new[1]] = x, y
                        key = pos[(w, tuple(t))]
                        col[key] = col.get(key, 0) + sign
    C = BigradedComplex(ZZ, gens, diffs)
    C.check_d_squared()
    return C


def khovanov_homology(D: LinkDiagram, ring: RingSpec = ZZ) -> HomologyTable:
    return homology(khovanov_complex(D), ring)
