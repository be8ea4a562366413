"""Cube of resolutions, the bigraded sl(N) chain complex and its homology.

A resolution v assigns 0/1 to each crossing.  The chain group at v is the
state space of the resolved web, shifted to h = |v| - n+ and
q = deg - |v| + N n+ - (N-1) n-.  Edge maps are induced by the identity
foam with a zip or unzip at the changing crossing, computed on the
connected pieces that meet it and extended by the identity elsewhere.
Everything is computed over ZZ; other rings are reductions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product

from . import linalg
from .diagrams import LinkDiagram
from .foam import Foam, FoamError, MoyGraph
from .rings import QQ, ZZ, RingError, RingSpec, smith_invariants
from .statespace import StateSpace, induced_map

log = logging.getLogger(__name__)


class ComplexError(RuntimeError):
    pass


def resolve(D: LinkDiagram, v, N: int) -> MoyGraph:
    if len(v) != D.n or any(b not in (0, 1) for b in v):
        raise ValueError("resolution must give 0 or 1 for every crossing")
    return D.web(N).graph(D.resolution_states(v))


def _changed(v, w) -> int:
    diff = [i for i, (a, b) in enumerate(zip(v, w)) if a != b]
    if len(diff) != 1 or v[diff[0]] != 0:
        raise ValueError("resolutions must differ at one crossing, 0 -> 1")
    return diff[0]


def edge_foam(D: LinkDiagram, v, w, N: int) -> Foam:
    """Zip or unzip at the changing crossing, identity elsewhere."""
    _changed(v, w)
    W = D.web(N)
    return W.cylinder(D.resolution_states(v), D.resolution_states(w))


def local_edge_map(D: LinkDiagram, W, Sv: StateSpace, Sw: StateSpace, c: int) -> dict:
    """Sparse matrix {i: {j: coeff}} of the edge map Sv -> Sw at crossing c."""
    s = W.sites[c]
    touched = {Sv.piece_of_edge(("a", a)) for a in (s.in_L, s.in_R)}
    arcs = set().union(*(Sv.pieces[i].key for i in touched))
    sub = W.restrict_to_arcs(arcs)
    st_v = {x: Sv.states[x] for x in sub.sites}
    st_w = {x: Sw.states[x] for x in sub.sites}
    Lv = StateSpace(sub, st_v)
    Lw = StateSpace(sub, st_w)
    G = sub.cylinder(st_v, st_w)
    M = induced_map(G, Lv, Lw)
    pos_v = [Sv.piece_index(p.key) for p in Lv.pieces]
    pos_w = [Sw.piece_index(p.key) for p in Lw.pieces]
    others = [(Sw.piece_index(p.key), k) for k, p in enumerate(Sv.pieces) if k not in touched]
    nw = len(Sw.pieces)
    out = {}
    for i, (_, combo) in enumerate(Sv.elements):
        loc = Lv.index[tuple(combo[k] for k in pos_v)]
        col = {}
        for j, row in enumerate(M):
            x = row[loc]
            if not x:
                continue
            tgt = [None] * nw
            for kw, kv in others:
                tgt[kw] = combo[kv]
            for kw, jj in zip(pos_w, Lw.elements[j][1]):
                tgt[kw] = jj
            col[Sw.index[tuple(tgt)]] = x
        out[i] = col
    return out, G.degree()


@dataclass
class BigradedComplex:
    """Free bigraded complex with differential of bidegree (1, 0).

    ``gens[h]`` lists (q, provenance) per generator; ``diffs[h]`` is a sparse
    matrix from C^h to C^{h+1}.  Entries are integers; ``ring`` says how
    they are read.
    """

    ring: RingSpec
    gens: dict
    diffs: dict
    N: int = 0
    diagram: LinkDiagram | None = None
    spaces: dict = field(default_factory=dict)
    position: dict = field(default_factory=dict)  # (v, i) -> (h, index)
    qshift: int = 0

    def degrees(self) -> list[int]:
        return sorted(h for h, g in self.gens.items() if g)

    def objects(self) -> dict:
        out: dict = {}
        for h, gs in self.gens.items():
            for q, _ in gs:
                out[(h, q)] = out.get((h, q), 0) + 1
        return out

    def qs(self, h: int) -> dict:
        out: dict = {}
        for i, (q, _) in enumerate(self.gens.get(h, [])):
            out.setdefault(q, []).append(i)
        return out

    def block(self, h: int, q: int) -> list[list[int]]:
        """Matrix of d: C^{h,q} -> C^{h+1,q}."""
        src = self.qs(h).get(q, [])
        tgt = self.qs(h + 1).get(q, [])
        M = linalg.dense(self.diffs.get(h, {}), tgt, src)
        n = self.ring.characteristic
        return [[x % n for x in row] for row in M] if n else M

    def with_ring(self, ring: RingSpec) -> "BigradedComplex":
        return BigradedComplex(ring, self.gens, self.diffs, self.N, self.diagram, self.spaces,
                               self.position, self.qshift)

    def check_d_squared(self):
        n = self.ring.characteristic
        for h in self.gens:
            if h in self.diffs and h + 1 in self.diffs:
                dd = linalg.compose(self.diffs[h + 1], self.diffs[h])
                if not linalg.is_zero(dd, n):
                    bad = next(j for j, c in dd.items() if any((v % n if n else v) for v in c.values()))
                    raise ComplexError(f"d^2 != 0 at h={h}, generator {self.gens[h][bad][1]}")
        return True

    def total_rank(self) -> int:
        return sum(len(g) for g in self.gens.values())

    def euler_characteristic(self):
        from .rings import LaurentQ
        out: dict = {}
        for (h, q), r in self.objects().items():
            out[q] = out.get(q, 0) + (-1) ** (h % 2) * r
        return LaurentQ(out)


def build_complex(D: LinkDiagram, N: int, ring: RingSpec = ZZ, check: bool = True) -> BigradedComplex:
    W = D.web(N)
    npos, nneg = D.n_plus, D.n_minus
    qshift = N * npos - (N - 1) * nneg
    verts = sorted(product((0, 1), repeat=D.n), key=lambda v: (sum(v), v))
    spaces = {v: StateSpace(W, D.resolution_states(v)) for v in verts}
    gens: dict = {}
    position = {}
    for v in verts:
        h = sum(v) - npos
        lst = gens.setdefault(h, [])
        for i, (d, _) in enumerate(spaces[v].elements):
            position[(v, i)] = (h, len(lst))
            lst.append((d - sum(v) + qshift, (v, i)))
    diffs: dict = {}
    for v in verts:
        h = sum(v) - npos
        S = spaces[v]
        for c in range(D.n):
            if v[c]:
                continue
            w = v[:c] + (1,) + v[c + 1:]
            M, deg = local_edge_map(D, W, S, spaces[w], c)
            if deg != 1:
                raise ComplexError(f"edge foam at crossing {c} has degree {deg}, expected 1")
            sign = -1 if sum(v[:c]) % 2 else 1
            block = diffs.setdefault(h, {})
            for i, col in M.items():
                src = position[(v, i)][1]
                tgt = block.setdefault(src, {})
                for j, x in col.items():
                    r = position[(w, j)][1]
                    tgt[r] = tgt.get(r, 0) + sign * x
    for h in diffs:
        diffs[h] = {j: {i: x for i, x in c.items() if x} for j, c in diffs[h].items()}
    C = BigradedComplex(ZZ, gens, diffs, N, D, spaces, position, qshift)
    if check:
        C.check_d_squared()
    return C.with_ring(ring) if ring != ZZ else C


# ---------------------------------------------------------------------------
# homology


@dataclass
class HomologyTable:
    ring: RingSpec
    groups: dict  # (h, q) -> (free rank, torsion invariants)

    def rank(self, h: int, q: int) -> int:
        return self.groups.get((h, q), (0, ()))[0]

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def total_dimension(self) -> int:
        """Number of cyclic summands (dimension over a field)."""
        return sum(r + len(t) for r, t in self.groups.values())

    def q_poincare(self):
        from .rings import LaurentQ
        out: dict = {}
        for (h, q), (r, _) in self.groups.items():
            out[q] = out.get(q, 0) + r
        return LaurentQ(out)

    def poincare(self) -> str:
        terms = []
        for (h, q) in sorted(self.groups):
            r, tors = self.groups[(h, q)]
            mono = f"t^{h}q^{q}"
            if r:
                terms.append(mono if r == 1 else f"{r}{mono}")
            for t in tors:
                terms.append(f"[Z/{t}]{mono}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return {"ring": str(self.ring),
                "groups": [{"h": h, "q": q, "rank": r, "torsion": list(t)}
                           for (h, q), (r, t) in sorted(self.groups.items())],
                "poincare": self.poincare()}

    def __eq__(self, other):
        return isinstance(other, HomologyTable) and self.ring == other.ring and self.groups == other.groups


def homology(C: BigradedComplex, ring: RingSpec | None = None) -> HomologyTable:
    ring = ring or C.ring
    if ring.kind == "Z/n" and not ring.is_field:
        return _uct(homology(C, ZZ), ring.n)
    groups = {}
    for h in C.degrees():
        for q, idx in C.qs(h).items():
            dim = len(idx)
            out_M = C.with_ring(ring).block(h, q)
            in_M = C.with_ring(ring).block(h - 1, q)
            if ring.kind == "Z":
                r_out = len(smith_invariants(out_M)) if out_M and out_M[0] else 0
                inv_in = smith_invariants(in_M) if in_M and in_M[0] else ()
                free = dim - r_out - len(inv_in)
                tors = tuple(x for x in inv_in if x > 1)
            else:
                free = dim - linalg.rank(out_M, ring) - linalg.rank(in_M, ring)
                tors = ()
            if free or tors:
                groups[(h, q)] = (free, tors)
    return HomologyTable(ring, groups)


def _uct(HZ: HomologyTable, n: int) -> HomologyTable:
    """Homology over Z/n from integral homology; differential raises h."""
    from math import gcd
    groups: dict = {}
    for (h, q), (r, tors) in HZ.groups.items():
        # H^h ⊗ Z/n at (h, q)
        summ = [n] * r + [gcd(t, n) for t in tors]
        groups.setdefault((h, q), []).extend(summ)
    # Tor(H^{h+1}, Z/n) lands in degree h
    for (h, q), (_, tors) in HZ.groups.items():
        groups.setdefault((h - 1, q), []).extend(gcd(t, n) for t in tors)
    out = {}
    for k, summ in groups.items():
        summ = [s for s in summ if s > 1]
        free = sum(1 for s in summ if s == n)
        tors = tuple(sorted(s for s in summ if s != n))
        if free or tors:
            out[k] = (free, tors)
    return HomologyTable(RingSpec("Z/n", n), out)
