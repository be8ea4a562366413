"""State spaces of webs from template foams and the closed-foam pairing.

The rewriting engine reduces a web Γ to the empty graph; realizing each
step as a foam gives template foams ∅ → Γ (one per branch of the square
relation) with decoration slots.  Decorated templates span F_N(Γ); a basis
is certified degree by degree by comparing Gram ranks with the MOY
polynomial and requiring a unimodular Gram block.  Everything is built over
ℤ; coordinates over ℤ/n are reductions.

A decoration of a state space is a dict {branch: MPoly} in the variables
(facet, k) of the branch template.  Pairings of degree-zero closed foams
are computed by evaluating at X_i = i, where a symmetric polynomial of
degree 0 equals its constant.
"""

from __future__ import annotations

import hashlib
import os
import pickle
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .foam import (Foam, FoamError, MoyGraph, Site, Web, compose_with_maps, juxtapose, mirror,
                   rename_top)
from .localfoams import Template, reduction_templates
from .moy import moy_polynomial
from .rings import LaurentQ, RingSpec, ZZ, smith_normal_form
from .rweval import ColoringTable
from .sympoly import MPoly, nabla


class SpanningCertificateFailed(RuntimeError):
    def __init__(self, degree: int, expected: int, found: int, detail: str = ""):
        self.degree = degree
        self.expected = expected
        self.found = found
        msg = f"q-degree {degree}: spanning foams give rank {found}, MOY rank is {expected}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class SpaceMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# decorations over several templates


def deco_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, p in b.items():
        out[k] = out[k] + p if k in out else p
    return {k: p for k, p in out.items() if not p.is_zero()}


def deco_scale(a: dict, c: int) -> dict:
    return {k: p * c for k, p in a.items()} if c else {}


def deco_mul(a: dict, b: dict) -> dict:
    return {(i, j): p * q for i, p in a.items() for j, q in b.items()}


def deco_is_zero(a: dict) -> bool:
    return all(p.is_zero() for p in a.values())


# ---------------------------------------------------------------------------
# pairing tables


def _eval_polys(polys: Sequence[MPoly], points: list) -> np.ndarray:
    out = np.zeros((len(polys), len(points)), dtype=object)
    for r, p in enumerate(polys):
        terms = list(p.terms.items())
        for g, vals in enumerate(points):
            total = 0
            for m, c in terms:
                t = c
                for v, e in m:
                    t *= vals[v] ** e
                total += t
            out[r, g] = total
    return out


class PairingTable:
    """Colorings of a closed foam grouped by the values on two sets of facets.

    ``left`` and ``right`` map template facet ids to facets of the closed
    foam; polynomials in variables (template facet, k) are evaluated on the
    pigment coordinates there.  The closed foam's own decoration is folded
    into the weights.
    """

    def __init__(self, C: Foam, left: Mapping, right: Mapping, point=None):
        table = ColoringTable(C, point)
        dec = C.decoration
        plain = set(dec.terms) <= {()}
        pt = table.point
        groups: dict = {}
        for w, pm in zip(table.weights, table.pigments):
            if not plain:
                w = w * dec.evaluate(lambda v: pt[pm[v] - 1])
            if not w:
                continue
            lk = tuple(pt[pm[(cf, k)] - 1] for f, cf in left.items() for k in range(1, C.facets[cf].label + 1))
            rk = tuple(pt[pm[(cf, k)] - 1] for f, cf in right.items() for k in range(1, C.facets[cf].label + 1))
            groups[(lk, rk)] = groups.get((lk, rk), 0) + w
        groups = {k: w for k, w in groups.items() if w}
        self.lvars = [(f, k) for f, cf in left.items() for k in range(1, C.facets[cf].label + 1)]
        self.rvars = [(f, k) for f, cf in right.items() for k in range(1, C.facets[cf].label + 1)]
        self.denominator = reduce(lcm, (Fraction(w).denominator for w in groups.values()), 1)
        self.keys = list(groups)
        self.weights = np.array([int(groups[k] * self.denominator) for k in self.keys], dtype=object)
        self.ncolorings = len(table.weights)

    def matrix(self, rows: Sequence[MPoly], cols: Sequence[MPoly]) -> np.ndarray:
        """Integer matrix of pairings <rows[i] | cols[j]> (object array)."""
        if not rows or not cols or not self.keys:
            return np.zeros((len(rows), len(cols)), dtype=object)
        A = _eval_polys(rows, [dict(zip(self.lvars, k[0])) for k in self.keys])
        B = _eval_polys(cols, [dict(zip(self.rvars, k[1])) for k in self.keys])
        M = (A * self.weights) @ B.T
        L = self.denominator
        if L != 1:
            if any(x % L for x in M.flat):
                raise ArithmeticError("degree-zero pairing is not an integer")
            M = M // L
        return M


def closed_table(T0: Foam, G: Foam | None, T1: Foam) -> PairingTable:
    """Table for T0 ∪ G ∪ mirror(T1); variables are facets of T0 and T1."""
    if G is None:
        H, fa = T0, {f: f for f in T0.facets}
    else:
        H, fa0, _ = compose_with_maps(T0, G)
        fa = fa0
    C, fh, fm = compose_with_maps(H, mirror(T1))
    return PairingTable(C, {f: fh[fa[f]] for f in T0.facets}, {f: fm[f] for f in T1.facets})


# ---------------------------------------------------------------------------
# certified basis selection


def _unimodular_inverse(P: list[list[int]]) -> list[list[int]]:
    n = len(P)
    A = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(P)]
    for c in range(n):
        p = next(r for r in range(c, n) if A[r][c])
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = [[A[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise ArithmeticError("Gram block is not unimodular")
    return [[int(x) for x in row] for row in out]


def _greedy_pivots(M: list[list[int]]):
    """Unit pivots with full elimination; returns (rows, cols, leftover)."""
    A = [list(row) for row in M]
    rows, cols = [], []
    free_r = list(range(len(A)))
    free_c = list(range(len(A[0]) if A else 0))
    while True:
        piv = next(((r, c) for r in free_r for c in free_c if A[r][c] in (1, -1)), None)
        if piv is None:
            break
        r, c = piv
        p = A[r][c]
        for r2 in free_r:
            if r2 != r and A[r2][c]:
                f = A[r2][c] * p
                A[r2] = [x - f * y for x, y in zip(A[r2], A[r])]
        free_r.remove(r)
        free_c.remove(c)
        rows.append(r)
        cols.append(c)
    leftover = any(A[r][c] for r in free_r for c in free_c)
    return rows, cols, leftover


@dataclass
class DegreeBlock:
    degree: int
    spanning: list  # decorations proposed in this degree
    gram: list  # pairings with the spanning decorations of degree -d
    basis: list  # decorations
    dual: list  # decorations of degree -d with <basis_i, dual_j> = δ_ij
    pivots: tuple | None = None  # (rows, cols) when the basis is a subset


def select_basis(degree: int, rows: list, cols: list, gram, expected: int) -> DegreeBlock:
    """Certified basis of one degree block; raises SpanningCertificateFailed."""
    gram = [[int(x) for x in row] for row in gram]
    if expected == 0:
        if any(x for row in gram for x in row):
            raise SpanningCertificateFailed(degree, 0, -1, "nonzero pairing in a degree of rank 0")
        return DegreeBlock(degree, rows, gram, [], [])
    if not rows or not cols:
        raise SpanningCertificateFailed(degree, expected, 0)
    I, J, leftover = _greedy_pivots(gram)
    if not leftover and len(I) == expected:
        Q = _unimodular_inverse([[gram[i][j] for j in J] for i in I])
        basis = [rows[i] for i in I]
        dual = []
        for j in range(len(J)):
            d: dict = {}
            for k in range(len(J)):
                d = deco_add(d, deco_scale(cols[J[k]], Q[k][j]))
            dual.append(d)
        return DegreeBlock(degree, rows, gram, basis, dual, (tuple(I), tuple(J)))
    inv, _, U, V = smith_normal_form(gram)
    rank = len(inv)
    if rank != expected:
        raise SpanningCertificateFailed(degree, expected, rank)
    if any(x != 1 for x in inv):
        raise SpanningCertificateFailed(degree, expected, rank, f"Gram invariants {inv} are not units")
    basis, dual = [], []
    for i in range(rank):
        b: dict = {}
        for s, c in enumerate(U[i]):
            b = deco_add(b, deco_scale(rows[s], c))
        basis.append(b)
        d: dict = {}
        for s in range(len(cols)):
            d = deco_add(d, deco_scale(cols[s], V[s][i]))
        dual.append(d)
    return DegreeBlock(degree, rows, gram, basis, dual)


# ---------------------------------------------------------------------------
# state spaces of connected graphs


class ComponentSpace:
    """F_N(Γ) for a graph the rewriting engine reduces (usually connected)."""

    def __init__(self, graph: MoyGraph):
        self.N = graph.N
        self.graph = graph
        self.templates: list[Template] = reduction_templates(graph)
        self.base = [t.foam.undecorated_degree() for t in self.templates]
        self._tables: dict = {}
        self.expected = moy_polynomial(graph)
        spanning: dict = {}
        for i, t in enumerate(self.templates):
            for p in t.decorations():
                spanning.setdefault(self.base[i] + 2 * p.degree(), []).append({i: p})
        self.blocks: dict = {}
        for d in sorted(set(spanning) | set(self.expected.coeffs)):
            rows = spanning.get(d, [])
            cols = spanning.get(-d, [])
            self.blocks[d] = select_basis(d, rows, cols, self.matrix(rows, cols), self.expected[d])
        self.elements = [(d, b, du) for d in sorted(self.blocks)
                         for b, du in zip(self.blocks[d].basis, self.blocks[d].dual)]

    def table(self, i: int, j: int) -> PairingTable:
        if (i, j) not in self._tables:
            self._tables[(i, j)] = closed_table(self.templates[i].foam, None, self.templates[j].foam)
        return self._tables[(i, j)]

    def matrix(self, rows: list, cols: list) -> np.ndarray:
        M = np.zeros((len(rows), len(cols)), dtype=object)
        for i in {k for r in rows for k in r}:
            for j in {k for c in cols for k in c}:
                ri = [n for n, r in enumerate(rows) if i in r]
                cj = [n for n, c in enumerate(cols) if j in c]
                sub = self.table(i, j).matrix([rows[n][i] for n in ri], [cols[n][j] for n in cj])
                M[np.ix_(ri, cj)] += sub
        return M

    def degree_of(self, deco: dict) -> int:
        degs = {self.base[i] + 2 * p.degree() for i, p in deco.items() if not p.is_zero()}
        if len(degs) != 1:
            raise ValueError("decoration is zero or not homogeneous")
        return degs.pop()

    def rank(self) -> LaurentQ:
        return LaurentQ({d: len(b.basis) for d, b in self.blocks.items() if b.basis})

    def degrees(self) -> list[int]:
        return sorted(d for d, b in self.blocks.items() if b.basis)

    def coords(self, deco: dict, degree: int | None = None) -> list[int]:
        """Coordinates of a homogeneous decoration in the basis."""
        if deco_is_zero(deco):
            if degree is None:
                raise ValueError("degree needed for a zero decoration")
            return [0] * len(self.blocks.get(degree, DegreeBlock(degree, [], [], [], [])).basis)
        if degree is None:
            degree = self.degree_of(deco)
        blk = self.blocks.get(degree)
        if blk is None or not blk.basis:
            return []
        return [int(x) for x in self.matrix([deco], blk.dual)[0]]

    def pair(self, a: dict, b: dict) -> int:
        if deco_is_zero(a) or deco_is_zero(b):
            return 0
        if self.degree_of(a) + self.degree_of(b) != 0:
            return 0
        return int(self.matrix([a], [b])[0][0])

    def edge_facets(self, edge) -> dict:
        """branch -> facet of the template that contains a boundary edge."""
        return {i: t.foam.top_map.edge_facet[edge] for i, t in enumerate(self.templates)}

    def spanning_foams(self) -> list[tuple[Foam, int]]:
        out = []
        for d, blk in sorted(self.blocks.items()):
            for deco in blk.spanning:
                ((i, p),) = deco.items()
                out.append((self.templates[i].foam.with_decoration(p), d))
        return out

    def gram(self, degree: int) -> list[list[int]]:
        return self.blocks[degree].gram


_GRAPH_CACHE: dict = {}


def graph_space(graph: MoyGraph) -> ComponentSpace:
    return ComponentSpace(graph)


def circle_space(k: int, N: int) -> ComponentSpace:
    """F_N(O^k): discs labeled k decorated by Schur polynomials."""
    key = ("circle", k, N)
    if key not in _GRAPH_CACHE:
        if not 1 <= k <= N:
            raise FoamError(f"label {k} not in 1..{N}")
        _GRAPH_CACHE[key] = ComponentSpace(MoyGraph(N, circles={0: (k, 1)}))
    return _GRAPH_CACHE[key]


# ---------------------------------------------------------------------------
# connected pieces of resolved webs, cached up to relabeling


def _canonical_code(web: Web, states: Mapping):
    best = None
    for start in web.arcs:
        arc_id = {start: 0}
        order = [start]
        site_id: dict = {}
        i = 0
        while i < len(order):
            a = order[i]
            i += 1
            for c, _ in (web.arc_head[a], web.arc_tail[a]):
                if c in site_id:
                    continue
                site_id[c] = len(site_id)
                s = web.sites[c]
                for x in (s.in_L, s.in_R, s.out_L, s.out_R):
                    if x is not None and x not in arc_id:
                        arc_id[x] = len(order)
                        order.append(x)
        code = tuple(
            (states[c],) + tuple(-1 if x is None else arc_id[x]
                                 for x in (web.sites[c].in_L, web.sites[c].in_R,
                                           web.sites[c].out_L, web.sites[c].out_R))
            for c in sorted(site_id, key=site_id.get)
        )
        if best is None or code < best[0]:
            best = (code, arc_id, site_id)
    return best


_COMPONENT_CACHE: dict = {}


def _disk_path(key):
    root = os.environ.get("FOAMCALC_CACHE_DIR")
    if not root:
        return None
    digest = hashlib.sha256(repr(key).encode()).hexdigest()[:32]
    return Path(root) / f"space-{digest}.pkl"


def _cached_space(key, build) -> ComponentSpace:
    """Component spaces are memoized in memory and, with FOAMCALC_CACHE_DIR, on disk."""
    if key in _COMPONENT_CACHE:
        return _COMPONENT_CACHE[key]
    path = _disk_path(key)
    space = None
    if path is not None and path.exists():
        try:
            with open(path, "rb") as fh:
                stored_key, space = pickle.load(fh)
            if stored_key != key:
                space = None
        except (OSError, pickle.UnpicklingError, EOFError, AttributeError):
            space = None
    if space is None:
        space = build()
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            tables, space._tables = space._tables, {}
            tmp = path.with_suffix(".tmp")
            with open(tmp, "wb") as fh:
                pickle.dump((key, space), fh)
            tmp.replace(path)
            space._tables = tables
    _COMPONENT_CACHE[key] = space
    return space


def clear_cache():
    _COMPONENT_CACHE.clear()
    _GRAPH_CACHE.clear()


@dataclass
class Piece:
    """A connected piece of a resolved web placed on actual ids."""

    space: ComponentSpace
    key: object  # frozenset of arcs, or ("o", loop)
    arc_map: dict  # actual arc -> canonical arc
    inv_arc: dict
    inv_site: dict
    loop: object = None

    def canonical_edge(self, edge):
        if edge[0] == "o":
            return ("o", 0)
        if edge[0] == "a":
            return ("a", self.arc_map[edge[1]])
        raise KeyError(edge)

    def edge_map(self, e):
        if e[0] == "a":
            return ("a", self.inv_arc[e[1]])
        if e[0] == "w":
            return ("w", self.inv_site[e[1]])
        if e[0] == "o":
            return ("o", self.loop)
        raise KeyError(e)

    def vertex_map(self, v):
        if v[0] == "j":
            return ("j", self.inv_site[v[1]], v[2])
        return (v[0], self.inv_site[v[1]])

    def placed_template(self, branch: int) -> Foam:
        return rename_top(self.space.templates[branch].foam, self.edge_map, self.vertex_map)


def place_piece(sub: Web, states: Mapping) -> Piece:
    N = sub.N
    if not sub.sites:
        (lp,) = sub.loops
        space = _cached_space((N, ("loop",)), lambda: ComponentSpace(Web(N, [], [0]).graph({})))
        return Piece(space, ("o", lp), {}, {}, {}, lp)
    code, arc_id, site_id = _canonical_code(sub, states)

    def build():
        sites = [Site(site_id[c], *[None if x is None else arc_id[x] for x in (s.in_L, s.in_R, s.out_L, s.out_R)])
                 for c, s in sub.sites.items()]
        canon = Web(N, sites)
        return ComponentSpace(canon.graph({site_id[c]: st for c, st in states.items()}))

    space = _cached_space((N, code), build)
    return Piece(space, frozenset(sub.arcs), dict(arc_id),
                 {v: a for a, v in arc_id.items()}, {v: c for c, v in site_id.items()})


class StateSpace:
    """F_N(Γ_v) of a resolved web: the tensor product over connected pieces.

    Basis elements are tuples with one basis index per piece, listed in
    ``elements`` sorted by q-degree.
    """

    def __init__(self, web: Web, states: Mapping, ring: RingSpec = ZZ):
        self.N = web.N
        self.web = web
        self.states = dict(states)
        self.ring = ring
        self.graph = web.graph(self.states)
        self.pieces: list[Piece] = [place_piece(sub, st) for sub, st in web.split(self.states)]
        self.pieces.sort(key=lambda p: repr(sorted(map(repr, p.key))) if isinstance(p.key, frozenset) else repr(p.key))
        by_deg: dict = {}
        for combo in product(*[range(len(p.space.elements)) for p in self.pieces]):
            d = sum(self.pieces[i].space.elements[j][0] for i, j in enumerate(combo))
            by_deg.setdefault(d, []).append(combo)
        self.elements = [(d, c) for d in sorted(by_deg) for c in by_deg[d]]
        self.index = {c: i for i, (_, c) in enumerate(self.elements)}
        self._whole: dict = {}

    @property
    def dim(self) -> int:
        return len(self.elements)

    def rank(self) -> LaurentQ:
        out: dict = {}
        for d, _ in self.elements:
            out[d] = out.get(d, 0) + 1
        return LaurentQ(out)

    def degree_of(self, i: int) -> int:
        return self.elements[i][0]

    def piece_index(self, key) -> int:
        for i, p in enumerate(self.pieces):
            if p.key == key:
                return i
        raise KeyError(key)

    def piece_of_edge(self, edge) -> int:
        for i, p in enumerate(self.pieces):
            if edge[0] == "o" and p.key == edge:
                return i
            if edge[0] == "a" and isinstance(p.key, frozenset) and edge[1] in p.key:
                return i
        raise KeyError(edge)

    # operators ---------------------------------------------------------
    def piece_operator(self, piece: int, fn) -> dict:
        """Sparse matrix {j: {j': c}} of a decoration operator on one piece."""
        sp = self.pieces[piece].space
        pos: dict = {}
        for j, (d, _, _) in enumerate(sp.elements):
            pos.setdefault(d, []).append(j)
        out = {}
        for j, (d, b, _) in enumerate(sp.elements):
            img = fn(b)
            col: dict = {}
            parts: dict = {}
            for br, poly in img.items():
                for pd, part in poly.homogeneous_parts().items():
                    dd = sp.base[br] + 2 * pd
                    parts.setdefault(dd, {})[br] = part
            for dd, deco in parts.items():
                cs = sp.coords(deco, dd)
                for jj, c in zip(pos.get(dd, []), cs):
                    if c:
                        col[jj] = col.get(jj, 0) + c
            out[j] = {k: v for k, v in col.items() if v}
        return out

    def tensor_operator(self, ops: Mapping[int, dict]) -> dict:
        """Per-piece operators (identity elsewhere) as sparse columns."""
        out = {}
        for i, (_, combo) in enumerate(self.elements):
            terms = {combo: 1}
            for piece, op in ops.items():
                new: dict = {}
                for cmb, c in terms.items():
                    for jj, v in op[cmb[piece]].items():
                        key = cmb[:piece] + (jj,) + cmb[piece + 1:]
                        new[key] = new.get(key, 0) + c * v
                terms = {k: v for k, v in new.items() if v}
            out[i] = {self.index[k]: v for k, v in terms.items()}
        return out

    def dot_operator(self, edge) -> dict:
        """Weight-1 dot on the facet through a label-1 edge ("a", arc) or ("o", loop)."""
        piece = self.piece_of_edge(edge)
        p = self.pieces[piece]
        facets = p.space.edge_facets(p.canonical_edge(edge))
        op = self.piece_operator(piece, lambda deco: {i: q * MPoly.var((facets[i], 1)) for i, q in deco.items()})
        return self.tensor_operator({piece: op})

    def nabla_operator(self) -> dict:
        total: dict = {i: {} for i in range(self.dim)}
        for piece in range(len(self.pieces)):
            op = self.piece_operator(piece, lambda deco: {i: nabla(q) for i, q in deco.items()})
            for i, col in self.tensor_operator({piece: op}).items():
                for k, v in col.items():
                    total[i][k] = total[i].get(k, 0) + v
        return {i: {k: v for k, v in c.items() if v} for i, c in total.items()}

    # whole-web templates -----------------------------------------------
    def whole_template(self, combo: tuple):
        """Juxtaposed piece templates for a choice of branch per piece."""
        if combo not in self._whole:
            F = None
            maps = []
            for p, br in zip(self.pieces, combo):
                T = p.placed_template(br)
                if F is None:
                    F, fm = T, {f: f for f in T.facets}
                    maps.append(fm)
                else:
                    F, a, bmap = juxtapose(F, T)
                    maps = [{f: a[x] for f, x in m.items()} for m in maps]
                    maps.append(bmap)
            if F is None:
                F = Foam(self.N, {}, {})
            self._whole[combo] = (F, maps)
        return self._whole[combo]

    def whole_deco(self, i: int, dual: bool = False) -> dict:
        """Basis element (or its dual) as {branch combo: poly} on whole templates."""
        combo = self.elements[i][1]
        parts = []
        for p, j in zip(self.pieces, combo):
            parts.append(p.space.elements[j][2 if dual else 1])
        out: dict = {}
        for choice in product(*[list(d.items()) for d in parts]):
            brs = tuple(br for br, _ in choice)
            _, maps = self.whole_template(brs)
            poly = MPoly.const(1)
            for (br, q), fm in zip(choice, maps):
                poly = poly * q.map_variables(lambda v, fm=fm: (fm[v[0]], v[1]))
            out[brs] = out[brs] + poly if brs in out else poly
        return out

    def pair(self, v: "StateVector", w: "StateVector"):
        return pair(v, w)

    def _gram_pair(self, i: int, j: int) -> int:
        out = 1
        for p, a, b in zip(self.pieces, self.elements[i][1], self.elements[j][1]):
            out *= p.space.pair(p.space.elements[a][1], p.space.elements[b][1])
            if not out:
                return 0
        return out


# ---------------------------------------------------------------------------
# vectors, pairing and induced maps


@dataclass
class StateVector:
    space: object
    coeffs: dict  # basis index -> coefficient
    degree: int

    def __post_init__(self):
        ring = self.space.ring
        self.coeffs = {i: ring.normalize(c) for i, c in self.coeffs.items()}
        self.coeffs = {i: c for i, c in self.coeffs.items() if c}
        for i in self.coeffs:
            if self.space.degree_of(i) != self.degree:
                raise ValueError("state vectors are homogeneous")

    @classmethod
    def basis(cls, space, i: int) -> "StateVector":
        return cls(space, {i: 1}, space.degree_of(i))

    def __add__(self, other):
        if other.space is not self.space or other.degree != self.degree:
            raise SpaceMismatch("vectors live in different spaces or degrees")
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return StateVector(self.space, out, self.degree)

    def __mul__(self, c):
        return StateVector(self.space, {i: x * c for i, x in self.coeffs.items()}, self.degree)

    __rmul__ = __mul__


def pair(v: StateVector, w: StateVector):
    if v.space is not w.space:
        raise SpaceMismatch("pairing needs vectors in one state space")
    S = v.space
    total = 0
    for i, a in v.coeffs.items():
        for j, b in w.coeffs.items():
            total += a * b * S._gram_pair(i, j)
    return S.ring.normalize(total)


def induced_map(G: Foam, S0: StateSpace, S1: StateSpace) -> list[list[int]]:
    """Matrix of G (rows: basis of S1, columns: basis of S0), reduced in S1's ring."""
    if not (G.bottom.same_shape(S0.graph) and G.top.same_shape(S1.graph)):
        raise FoamError("foam boundary does not match the state spaces")
    gdeg = G.degree()
    out = [[0] * S0.dim for _ in range(S1.dim)]
    by_deg1: dict = {}
    for j, (d, _) in enumerate(S1.elements):
        by_deg1.setdefault(d, []).append(j)
    tables: dict = {}
    for d in sorted({d for d, _ in S0.elements}):
        src = [i for i, (dd, _) in enumerate(S0.elements) if dd == d]
        tgt = by_deg1.get(d + gdeg, [])
        if not tgt:
            continue
        rows = [S0.whole_deco(i) for i in src]
        cols = [S1.whole_deco(j, dual=True) for j in tgt]
        M = np.zeros((len(rows), len(cols)), dtype=object)
        for c0 in {k for r in rows for k in r}:
            for c1 in {k for c in cols for k in c}:
                if (c0, c1) not in tables:
                    tables[(c0, c1)] = closed_table(S0.whole_template(c0)[0], G, S1.whole_template(c1)[0])
                ri = [n for n, r in enumerate(rows) if c0 in r]
                cj = [n for n, c in enumerate(cols) if c1 in c]
                M[np.ix_(ri, cj)] += tables[(c0, c1)].matrix([rows[n][c0] for n in ri], [cols[n][c1] for n in cj])
        for a, i in enumerate(src):
            for b, j in enumerate(tgt):
                out[j][i] = S1.ring.normalize(int(M[a][b]))
    return out


def build_statespace(web: Web, states: Mapping, ring: RingSpec = ZZ) -> StateSpace:
    return StateSpace(web, states, ring)


def spanning_set(web: Web, states: Mapping) -> list[tuple[Foam, int]]:
    """Certified spanning foams of every connected piece, with q-degrees."""
    out = []
    for sub, st in web.split(states):
        out.extend(place_piece(sub, st).space.spanning_foams())
    return out
