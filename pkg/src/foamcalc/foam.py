"""MOY graphs and decorated foams as abstract stratified complexes.

A foam keeps, for every stratum, only what the evaluation and the degree
need: facet labels, compactly supported Euler characteristics of open strata,
the cyclic order of facets at each binding, and how the boundary graphs sit on
the facets and bindings.  Gluing recomputes everything by inclusion-exclusion.

Conventions used throughout:

* ``chi`` of a facet or binding is the Euler characteristic with compact
  support of the *open* stratum (boundary edges and boundary vertices are not
  part of it).  An open disc has 1, an open annulus 0, an open interval -1.
* A binding's cyclic triple is ``(a, b, h)`` with ``label(a)+label(b) =
  label(h)``.  It is read with respect to the binding's own orientation, which
  at a merge vertex points upwards and at a split vertex downwards.  With that
  reading every binding built here has the form ``(right sheet, left sheet,
  thick sheet)``.
* Decorations are a single polynomial over variables ``(facet_id, k)``,
  symmetric in ``k`` for each facet.  Sums of dotted foams with the same
  underlying foam are therefore one Foam object.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Hashable, Iterable, Mapping

from .rings import ZZ, RingSpec
from .sympoly import MPoly, elementary, is_symmetric


class FoamError(ValueError):
    pass


def facet_weight(label: int, N: int) -> int:
    return label * (N - label)


def binding_weight(a: int, b: int, N: int) -> int:
    return a * b + (a + b) * (N - a - b)


def point_weight(a: int, b: int, c: int, N: int) -> int:
    return a * b + b * c + a * c + (a + b + c) * (N - a - b - c)


# ---------------------------------------------------------------------------
# MOY graphs

IN, OUT = -1, 1


@dataclass
class MoyGraph:
    """Oriented labeled planar graph.

    ``vertices`` maps a vertex id to ``"bi"``, ``"merge"`` or ``"split"``.
    Bivalent vertices are allowed as subdivision points; they carry no
    binding.  ``rotation`` lists the darts ``(edge, OUT|IN)`` around a vertex
    counterclockwise and is optional for purely combinatorial use.
    """

    N: int
    vertices: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)  # eid -> (src, tgt, label)
    circles: dict = field(default_factory=dict)  # cid -> (label, orientation)
    rotation: dict = field(default_factory=dict)
    basepoints: dict = field(default_factory=dict)  # marker -> edge or circle id

    def label(self, eid) -> int:
        if eid in self.edges:
            return self.edges[eid][2]
        return self.circles[eid][0]

    def darts(self) -> dict:
        """vertex -> list of (edge, OUT|IN) in arbitrary order."""
        out: dict = {v: [] for v in self.vertices}
        for e, (s, t, _) in self.edges.items():
            out[s].append((e, OUT))
            out[t].append((e, IN))
        return out

    def validate(self) -> None:
        darts = self.darts()
        for e, (s, t, lab) in self.edges.items():
            if s not in self.vertices or t not in self.vertices:
                raise FoamError(f"edge {e} has an unknown endpoint")
            if not 1 <= lab <= self.N:
                raise FoamError(f"edge {e} has label {lab} outside 1..{self.N}")
        for c, (lab, _) in self.circles.items():
            if not 1 <= lab <= self.N:
                raise FoamError(f"circle {c} has bad label {lab}")
        for v, kind in self.vertices.items():
            ins = [self.edges[e][2] for e, d in darts[v] if d == IN]
            outs = [self.edges[e][2] for e, d in darts[v] if d == OUT]
            want = {"bi": (1, 1), "merge": (2, 1), "split": (1, 2)}.get(kind)
            if want is None:
                raise FoamError(f"vertex {v} has unknown kind {kind!r}")
            if (len(ins), len(outs)) != want:
                raise FoamError(f"vertex {v} ({kind}) has {len(ins)} in / {len(outs)} out")
            if sum(ins) != sum(outs):
                raise FoamError(f"labels do not balance at vertex {v}")
            if v in self.rotation:
                if sorted(map(repr, self.rotation[v])) != sorted(map(repr, darts[v])):
                    raise FoamError(f"rotation at {v} does not match its darts")
        for m, e in self.basepoints.items():
            if e not in self.edges and e not in self.circles:
                raise FoamError(f"basepoint {m} is on unknown edge {e}")

    def same_shape(self, other: "MoyGraph") -> bool:
        return (
            self.N == other.N
            and self.vertices == other.vertices
            and self.edges == other.edges
            and {c: lab for c, (lab, _) in self.circles.items()}
            == {c: lab for c, (lab, _) in other.circles.items()}
        )

    def is_empty(self) -> bool:
        return not self.edges and not self.circles

    def components(self) -> list[dict]:
        """Connected components as {'vertices','edges','circles'} sets."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t, _ in self.edges.values():
            a, b = find(s), find(t)
            if a != b:
                parent[a] = b
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), {"vertices": set(), "edges": set(), "circles": set()})
            groups[find(v)]["vertices"].add(v)
        for e, (s, _, _) in self.edges.items():
            groups[find(s)]["edges"].add(e)
        comps = [groups[k] for k in sorted(groups, key=repr)]
        for c in sorted(self.circles, key=repr):
            comps.append({"vertices": set(), "edges": set(), "circles": {c}})
        return comps

    def subgraph(self, vertices: Iterable, edges: Iterable, circles: Iterable = ()) -> "MoyGraph":
        vs = set(vertices)
        es = set(edges)
        cs = set(circles)
        return MoyGraph(
            self.N,
            {v: k for v, k in self.vertices.items() if v in vs},
            {e: x for e, x in self.edges.items() if e in es},
            {c: x for c, x in self.circles.items() if c in cs},
            {v: r for v, r in self.rotation.items() if v in vs},
            {m: e for m, e in self.basepoints.items() if e in es or e in cs},
        )

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "N": self.N,
            "vertices": [[_j(v), k] for v, k in sorted(self.vertices.items(), key=_rk)],
            "edges": [[_j(e), _j(s), _j(t), lab] for e, (s, t, lab) in sorted(self.edges.items(), key=_rk)],
            "circles": [[_j(c), lab, o] for c, (lab, o) in sorted(self.circles.items(), key=_rk)],
            "rotation": [[_j(v), [[_j(e), d] for e, d in r]] for v, r in sorted(self.rotation.items(), key=_rk)],
            "basepoints": [[_j(m), _j(e)] for m, e in sorted(self.basepoints.items(), key=_rk)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MoyGraph":
        _check_version(data)
        try:
            g = cls(
                int(data["N"]),
                {_t(v): k for v, k in data.get("vertices", [])},
                {_t(e): (_t(s), _t(t), int(lab)) for e, s, t, lab in data.get("edges", [])},
                {_t(c[0]): (int(c[1]), int(c[2]) if len(c) > 2 else 1) for c in data.get("circles", [])},
                {_t(v): [(_t(e), int(d)) for e, d in r] for v, r in data.get("rotation", [])},
                {_t(m): _t(e) for m, e in data.get("basepoints", [])},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FoamError(f"malformed MOY graph JSON: {exc}") from exc
        g.validate()
        return g


def _check_version(data: Mapping):
    if data.get("version", 1) != 1:
        raise FoamError(f"unsupported format version {data.get('version')!r}")


def _rk(item):
    return repr(item[0])


def _j(x):
    return [_j(y) for y in x] if isinstance(x, tuple) else x


def _t(x):
    return tuple(_t(y) for y in x) if isinstance(x, list) else x


# ---------------------------------------------------------------------------
# foams


@dataclass(frozen=True)
class Facet:
    label: int
    chi: int


@dataclass(frozen=True)
class Binding:
    chi: int
    cyclic: tuple  # (a, b, h) with label(a) + label(b) = label(h)
    ends: tuple = ()  # ("bottom", v) | ("top", v) | ("point", p)

    @property
    def kind(self) -> str:
        return "interval" if (self.ends or self.chi) else "circle"


@dataclass(frozen=True)
class SingularPoint:
    facets: tuple  # labels a, b, c, a+b, b+c, a+b+c in this order
    bindings: tuple = ()


@dataclass
class Boundary:
    """How a boundary graph sits on the foam."""

    edge_facet: dict = field(default_factory=dict)  # edge or circle id -> facet
    vertex_facet: dict = field(default_factory=dict)  # bivalent vertex -> facet
    vertex_binding: dict = field(default_factory=dict)  # trivalent vertex -> binding

    def renamed(self, fmap, bmap) -> "Boundary":
        return Boundary(
            {e: fmap[f] for e, f in self.edge_facet.items()},
            {v: fmap[f] for v, f in self.vertex_facet.items()},
            {v: bmap[b] for v, b in self.vertex_binding.items()},
        )


def empty_graph(N: int) -> MoyGraph:
    return MoyGraph(N)


@dataclass
class Foam:
    N: int
    facets: dict  # fid -> Facet
    bindings: dict  # bid -> Binding
    points: dict = field(default_factory=dict)  # pid -> SingularPoint
    bottom: MoyGraph = None
    top: MoyGraph = None
    bottom_map: Boundary = field(default_factory=Boundary)
    top_map: Boundary = field(default_factory=Boundary)
    decoration: MPoly = None

    def __post_init__(self):
        if self.bottom is None:
            self.bottom = empty_graph(self.N)
        if self.top is None:
            self.top = empty_graph(self.N)
        if self.decoration is None:
            self.decoration = MPoly.const(1)

    # basic queries ------------------------------------------------------
    @property
    def is_closed(self) -> bool:
        return self.bottom.is_empty() and self.top.is_empty()

    def facet_variables(self, fid) -> list:
        return [(fid, k) for k in range(1, self.facets[fid].label + 1)]

    def undecorated_degree(self) -> int:
        N = self.N
        deg = 0
        for f in self.facets.values():
            deg -= facet_weight(f.label, N) * f.chi
        for b in self.bindings.values():
            a, c, _ = (self.facets[x].label for x in b.cyclic)
            deg -= binding_weight(a, c, N) * b.chi
        for p in self.points.values():
            a, b, c = (self.facets[x].label for x in p.facets[:3])
            deg -= point_weight(a, b, c, N)
        return deg

    def degree(self) -> int:
        """Quantum degree; the decoration must be homogeneous."""
        base = self.undecorated_degree()
        if self.decoration.is_zero():
            return base
        if not self.decoration.is_homogeneous():
            raise FoamError("degree of an inhomogeneous decoration is undefined")
        return base + 2 * self.decoration.degree()

    def with_decoration(self, decoration: MPoly) -> "Foam":
        return replace(self, decoration=decoration)

    def add_dot(self, fid, w: int = 1) -> "Foam":
        if fid not in self.facets:
            raise FoamError(f"no facet {fid}")
        lab = self.facets[fid].label
        if not 1 <= w <= lab:
            raise FoamError(f"dot weight {w} not in 1..{lab}")
        e = elementary(w, lab, self.facet_variables(fid), self.decoration.ring)
        return self.with_decoration(self.decoration * e)

    def boundary_facet(self, side: str, eid):
        m = self.bottom_map if side == "bottom" else self.top_map
        return m.edge_facet[eid]

    # validation ---------------------------------------------------------
    def validate(self, check_symmetry: bool = True) -> None:
        N = self.N
        for fid, f in self.facets.items():
            if not 1 <= f.label <= N:
                raise FoamError(f"facet {fid} label {f.label} outside 1..{N}")
        for bid, b in self.bindings.items():
            if len(b.cyclic) != 3 or any(x not in self.facets for x in b.cyclic):
                raise FoamError(f"binding {bid} has a bad facet triple")
            la, lb, lh = (self.facets[x].label for x in b.cyclic)
            if la + lb != lh:
                raise FoamError(f"labels {la}+{lb} != {lh} at binding {bid}")
            if b.chi not in (0, -1):
                raise FoamError(f"binding {bid} has chi {b.chi}")
            if (b.chi == 0) != (not b.ends):
                raise FoamError(f"binding {bid}: chi {b.chi} inconsistent with ends {b.ends}")
        for side, g, m in (("bottom", self.bottom, self.bottom_map), ("top", self.top, self.top_map)):
            g.validate()
            want_e = set(g.edges) | set(g.circles)
            if set(m.edge_facet) != want_e:
                raise FoamError(f"{side} edge map is not a bijection onto the graph edges")
            for e, fid in m.edge_facet.items():
                if self.facets[fid].label != g.label(e):
                    raise FoamError(f"{side} edge {e} label differs from its facet")
            bi = {v for v, k in g.vertices.items() if k == "bi"}
            tri = set(g.vertices) - bi
            if set(m.vertex_facet) != bi or set(m.vertex_binding) != tri:
                raise FoamError(f"{side} vertex maps incomplete")
            ends = {}
            for bid, b in self.bindings.items():
                for end in b.ends:
                    if end[0] == side:
                        ends[end[1]] = bid
            if ends != m.vertex_binding:
                raise FoamError(f"{side} vertex/binding incidence inconsistent")
        if check_symmetry:
            groups: dict = {}
            for v in self.decoration.variables():
                groups.setdefault(v[0], set()).add(v)
            for fid in groups:
                if fid not in self.facets:
                    raise FoamError(f"decoration uses unknown facet {fid}")
                if not is_symmetric(self.decoration, self.facet_variables(fid)):
                    raise FoamError(f"decoration not symmetric on facet {fid}")

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        fids = sorted(self.facets, key=repr)
        variables = [(f, k) for f in fids for k in range(1, self.facets[f].label + 1)]
        return {
            "N": self.N,
            "facets": [{"id": _j(f), "label": self.facets[f].label, "chi": self.facets[f].chi} for f in fids],
            "bindings": [
                {"id": _j(b), "chi": x.chi, "cyclic": [_j(y) for y in x.cyclic], "ends": [_j(e) for e in x.ends]}
                for b, x in sorted(self.bindings.items(), key=_rk)
            ],
            "points": [
                {"id": _j(p), "facets": [_j(y) for y in x.facets], "bindings": [_j(y) for y in x.bindings]}
                for p, x in sorted(self.points.items(), key=_rk)
            ],
            "bottom": self.bottom.to_json(),
            "top": self.top.to_json(),
            "bottom_map": _boundary_json(self.bottom_map),
            "top_map": _boundary_json(self.top_map),
            "decoration": self.decoration.to_json([v for v in variables]),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Foam":
        _check_version(data)
        try:
            N = int(data["N"])
            facets = {_t(f["id"]): Facet(int(f["label"]), int(f["chi"])) for f in data["facets"]}
            bindings = {
                _t(b["id"]): Binding(int(b["chi"]), tuple(_t(y) for y in b["cyclic"]), tuple(_t(e) for e in b.get("ends", [])))
                for b in data.get("bindings", [])
            }
            points = {
                _t(p["id"]): SingularPoint(tuple(_t(y) for y in p["facets"]), tuple(_t(y) for y in p.get("bindings", [])))
                for p in data.get("points", [])
            }
            bottom = MoyGraph.from_json(data["bottom"]) if data.get("bottom") else empty_graph(N)
            top = MoyGraph.from_json(data["top"]) if data.get("top") else empty_graph(N)
            dec = data.get("decoration")
            decoration = MPoly.from_json(dec) if dec else MPoly.const(1)
            foam = cls(N, facets, bindings, points, bottom, top,
                       _boundary_from_json(data.get("bottom_map")), _boundary_from_json(data.get("top_map")),
                       decoration)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FoamError):
                raise
            raise FoamError(f"malformed foam JSON: {exc}") from exc
        foam.validate()
        return foam


def _boundary_json(m: Boundary) -> dict:
    return {
        "edge_facet": [[_j(e), _j(f)] for e, f in sorted(m.edge_facet.items(), key=_rk)],
        "vertex_facet": [[_j(v), _j(f)] for v, f in sorted(m.vertex_facet.items(), key=_rk)],
        "vertex_binding": [[_j(v), _j(b)] for v, b in sorted(m.vertex_binding.items(), key=_rk)],
    }


def _boundary_from_json(data) -> Boundary:
    if not data:
        return Boundary()
    return Boundary(
        {_t(e): _t(f) for e, f in data.get("edge_facet", [])},
        {_t(v): _t(f) for v, f in data.get("vertex_facet", [])},
        {_t(v): _t(b) for v, b in data.get("vertex_binding", [])},
    )


# ---------------------------------------------------------------------------
# gluing


class _UF:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[a] = b


def _same_cyclic(t1: tuple, t2: tuple) -> bool:
    return any(t1 == t2[i:] + t2[:i] for i in range(3))


def compose_with_maps(F: Foam, G: Foam):
    """Glue F on the bottom and G on top.  Returns (F∪G, fmap_F, fmap_G)."""
    if F.N != G.N:
        raise FoamError("foams for different N")
    if not F.top.same_shape(G.bottom):
        raise FoamError("top of the first foam does not match bottom of the second")
    N = F.N
    uf = _UF()
    chi: dict = {}
    for tag, X in (("F", F), ("G", G)):
        for fid, f in X.facets.items():
            uf.add((tag, fid))
            chi[(tag, fid)] = f.chi
    extra: list = []  # (facet key, chi contribution) of interface strata
    g = F.top
    for e in g.edges:
        a, b = ("F", F.top_map.edge_facet[e]), ("G", G.bottom_map.edge_facet[e])
        uf.union(a, b)
        extra.append((a, -1))
    for c in g.circles:
        uf.union(("F", F.top_map.edge_facet[c]), ("G", G.bottom_map.edge_facet[c]))
    for v in F.top_map.vertex_facet:
        a, b = ("F", F.top_map.vertex_facet[v]), ("G", G.bottom_map.vertex_facet[v])
        uf.union(a, b)
        extra.append((a, 1))

    # facet renumbering in order of first appearance
    fnew: dict = {}
    order: list = []
    for tag, X in (("F", F), ("G", G)):
        for fid in X.facets:
            r = uf.find((tag, fid))
            if r not in fnew:
                fnew[r] = len(order)
                order.append(r)
    label = {}
    total_chi = {i: 0 for i in range(len(order))}
    for key, c in chi.items():
        i = fnew[uf.find(key)]
        total_chi[i] += c
        lab = (F if key[0] == "F" else G).facets[key[1]].label
        if label.setdefault(i, lab) != lab:
            raise FoamError("glued facets have different labels")
    for key, c in extra:
        total_chi[fnew[uf.find(key)]] += c
    facets = {i: Facet(label[i], total_chi[i]) for i in range(len(order))}
    fmap_F = {fid: fnew[uf.find(("F", fid))] for fid in F.facets}
    fmap_G = {fid: fnew[uf.find(("G", fid))] for fid in G.facets}

    # bindings
    buf = _UF()
    for tag, X in (("F", F), ("G", G)):
        for bid in X.bindings:
            buf.add((tag, bid))
    joins = []
    for v, bF in F.top_map.vertex_binding.items():
        bG = G.bottom_map.vertex_binding[v]
        buf.union(("F", bF), ("G", bG))
        joins.append(("F", bF))
    bnew: dict = {}
    border: list = []
    for tag, X in (("F", F), ("G", G)):
        for bid in X.bindings:
            r = buf.find((tag, bid))
            if r not in bnew:
                bnew[r] = len(border)
                border.append(r)
    bchi = {i: 0 for i in range(len(border))}
    bcyc: dict = {}
    bends: dict = {i: [] for i in range(len(border))}
    pnew_F = {p: ("F", p) for p in F.points}
    pnew_G = {p: ("G", p) for p in G.points}
    pids = {}
    for k in list(pnew_F.values()) + list(pnew_G.values()):
        pids[k] = len(pids)
    for tag, X, fm in (("F", F, fmap_F), ("G", G, fmap_G)):
        for bid, b in X.bindings.items():
            i = bnew[buf.find((tag, bid))]
            bchi[i] += b.chi
            cyc = tuple(fm[x] for x in b.cyclic)
            if i in bcyc:
                if not _same_cyclic(bcyc[i], cyc):
                    raise FoamError(f"cyclic orders disagree across the gluing at binding {bid}")
            else:
                bcyc[i] = cyc
            for end in b.ends:
                if end[0] == "point":
                    bends[i].append(("point", pids[(tag, end[1])]))
                elif (tag == "F" and end[0] == "top") or (tag == "G" and end[0] == "bottom"):
                    continue
                else:
                    bends[i].append(end)
    for key in joins:
        bchi[bnew[buf.find(key)]] += 1
    bindings = {i: Binding(bchi[i], bcyc[i], tuple(sorted(bends[i], key=repr))) for i in range(len(border))}
    bmap_F = {bid: bnew[buf.find(("F", bid))] for bid in F.bindings}
    bmap_G = {bid: bnew[buf.find(("G", bid))] for bid in G.bindings}

    points = {}
    for tag, X, fm, bm in (("F", F, fmap_F, bmap_F), ("G", G, fmap_G, bmap_G)):
        for pid, p in X.points.items():
            points[pids[(tag, pid)]] = SingularPoint(tuple(fm[x] for x in p.facets), tuple(bm[x] for x in p.bindings))

    ring = F.decoration.ring
    dF = F.decoration.map_variables(lambda v: (fmap_F[v[0]], v[1]))
    dG = G.decoration.change_ring(ring).map_variables(lambda v: (fmap_G[v[0]], v[1]))
    H = Foam(
        N, facets, bindings, points, F.bottom, G.top,
        F.bottom_map.renamed(fmap_F, bmap_F), G.top_map.renamed(fmap_G, bmap_G),
        dF * dG,
    )
    return H, fmap_F, fmap_G


def compose(F: Foam, G: Foam) -> Foam:
    """F: Γ0 → Γ1 followed by G: Γ1 → Γ2."""
    return compose_with_maps(F, G)[0]


def mirror(F: Foam) -> Foam:
    """Reflect in a horizontal plane.

    Reflection reverses the handedness at each binding, and the facet
    orientations must also be reversed so that the boundary graphs keep their
    orientation; the two reversals cancel on the stored (orientation-relative)
    cyclic triples, so only the ends swap sides.
    """
    swap = {"bottom": "top", "top": "bottom", "point": "point"}
    bindings = {
        bid: Binding(b.chi, b.cyclic, tuple(sorted(((swap[e[0]], e[1]) for e in b.ends), key=repr)))
        for bid, b in F.bindings.items()
    }
    return Foam(F.N, dict(F.facets), bindings, dict(F.points), F.top, F.bottom,
                F.top_map, F.bottom_map, F.decoration)


def disjoint_union(F: Foam, G: Foam) -> Foam:
    """Side-by-side union of two closed foams."""
    if not (F.is_closed and G.is_closed):
        raise FoamError("disjoint_union is only provided for closed foams")
    fm = {f: i for i, f in enumerate(F.facets)}
    off = len(fm)
    gm = {f: off + i for i, f in enumerate(G.facets)}
    facets = {fm[f]: x for f, x in F.facets.items()}
    facets.update({gm[f]: x for f, x in G.facets.items()})
    bindings = {("F", b): Binding(x.chi, tuple(fm[y] for y in x.cyclic), ()) for b, x in F.bindings.items()}
    bindings.update({("G", b): Binding(x.chi, tuple(gm[y] for y in x.cyclic), ()) for b, x in G.bindings.items()})
    if F.points or G.points:
        raise FoamError("disjoint_union of foams with singular points is not supported")
    dec = F.decoration.map_variables(lambda v: (fm[v[0]], v[1])) * G.decoration.change_ring(
        F.decoration.ring).map_variables(lambda v: (gm[v[0]], v[1]))
    return Foam(F.N, facets, bindings, decoration=dec)


def nabla_foam(F: Foam) -> Foam:
    from .sympoly import nabla

    return F.with_decoration(nabla(F.decoration))


# ---------------------------------------------------------------------------
# piece-wise construction


class FoamBuilder:
    """Assemble a foam from open pieces that are glued along seams."""

    def __init__(self, N: int):
        self.N = N
        self.uf = _UF()
        self.label: dict = {}
        self.chi: dict = {}
        self.order: list = []
        self.bindings: dict = {}
        self.bottom_map = Boundary()
        self.top_map = Boundary()

    def piece(self, key, label: int, chi: int):
        if key in self.label:
            raise FoamError(f"duplicate piece {key}")
        self.uf.add(key)
        self.label[key] = label
        self.chi[key] = chi
        self.order.append(key)
        return key

    def join(self, a, b):
        if self.label[a] != self.label[b]:
            raise FoamError(f"cannot join pieces {a} and {b} with different labels")
        self.uf.union(a, b)

    def binding(self, key, chi: int, cyclic: tuple, ends: tuple = ()):
        self.bindings[key] = (chi, cyclic, ends)
        for side, v in ends:
            (self.bottom_map if side == "bottom" else self.top_map).vertex_binding[v] = key

    def boundary_edge(self, side: str, eid, key):
        (self.bottom_map if side == "bottom" else self.top_map).edge_facet[eid] = key

    def boundary_vertex(self, side: str, vid, key):
        (self.bottom_map if side == "bottom" else self.top_map).vertex_facet[vid] = key

    def build(self, bottom: MoyGraph, top: MoyGraph, decoration: MPoly | None = None) -> Foam:
        ids: dict = {}
        for key in self.order:
            r = self.uf.find(key)
            if r not in ids:
                ids[r] = len(ids)
        fid = {key: ids[self.uf.find(key)] for key in self.order}
        chi = {i: 0 for i in ids.values()}
        label = {}
        for key in self.order:
            chi[fid[key]] += self.chi[key]
            label[fid[key]] = self.label[key]
        facets = {i: Facet(label[i], chi[i]) for i in chi}
        bids = {key: i for i, key in enumerate(self.bindings)}
        bindings = {
            bids[k]: Binding(c, tuple(fid[x] for x in cyc), tuple(sorted(ends, key=repr)))
            for k, (c, cyc, ends) in self.bindings.items()
        }
        foam = Foam(
            self.N, facets, bindings, {}, bottom, top,
            self.bottom_map.renamed(fid, bids), self.top_map.renamed(fid, bids),
            decoration if decoration is not None else MPoly.const(1),
        )
        return foam


def _circle_graph(N: int, label: int, cid=0) -> MoyGraph:
    return MoyGraph(N, circles={cid: (label, 1)})


def cup(label: int, N: int, cid=0) -> Foam:
    """Disc ∅ → circle labeled `label`."""
    if not 1 <= label <= N:
        raise FoamError(f"label {label} not in 1..{N}")
    b = FoamBuilder(N)
    b.piece("disc", label, 1)
    b.boundary_edge("top", cid, "disc")
    return b.build(empty_graph(N), _circle_graph(N, label, cid))


def cap(label: int, N: int, cid=0) -> Foam:
    return mirror(cup(label, N, cid))


def sphere(label: int, N: int, decoration: MPoly | None = None) -> Foam:
    """Sphere with one facet; `decoration` is in variables 1..label."""
    if not 1 <= label <= N:
        raise FoamError(f"label {label} not in 1..{N}")
    dec = MPoly.const(1) if decoration is None else decoration.map_variables(lambda k: (0, k))
    return Foam(N, {0: Facet(label, 2)}, {}, decoration=dec)


def theta_foam(a: int, b: int, N: int, decoration: MPoly | None = None, reverse: bool = False) -> Foam:
    """Three discs glued along one circle binding; facets 0,1,2 labeled a, b, a+b.

    `decoration` uses variables (0,k), (1,k), (2,k).  `reverse` flips the
    cyclic order at the binding.
    """
    if a < 1 or b < 1 or a + b > N:
        raise FoamError("theta foam needs 1 <= a, b and a+b <= N")
    cyc = (1, 0, 2) if reverse else (0, 1, 2)
    return Foam(N, {0: Facet(a, 1), 1: Facet(b, 1), 2: Facet(a + b, 1)},
                {0: Binding(0, cyc, ())},
                decoration=decoration if decoration is not None else MPoly.const(1))


def identity_foam(g: MoyGraph) -> Foam:
    """Product foam Γ × [0,1]."""
    N = g.N
    b = FoamBuilder(N)
    for e, (_, _, lab) in g.edges.items():
        b.piece(("e", e), lab, 1)
        b.boundary_edge("bottom", e, ("e", e))
        b.boundary_edge("top", e, ("e", e))
    for c, (lab, _) in g.circles.items():
        b.piece(("e", c), lab, 0)
        b.boundary_edge("bottom", c, ("e", c))
        b.boundary_edge("top", c, ("e", c))
    darts = g.darts()
    for v, kind in g.vertices.items():
        if kind == "bi":
            (e_in,) = [e for e, d in darts[v] if d == IN]
            (e_out,) = [e for e, d in darts[v] if d == OUT]
            key = b.piece(("seam", v), g.edges[e_in][2], -1)
            b.join(("e", e_in), key)
            b.join(key, ("e", e_out))
            b.boundary_vertex("bottom", v, key)
            b.boundary_vertex("top", v, key)
            continue
        b.binding(("v", v), -1, _vertex_cyclic(g, v, darts[v]), (("bottom", v), ("top", v)))
    return b.build(g, g)


def _vertex_cyclic(g: MoyGraph, v, darts) -> tuple:
    """(right, left, thick) pieces at a trivalent vertex from its rotation."""
    kind = g.vertices[v]
    thick_dir = OUT if kind == "merge" else IN
    rot = list(g.rotation.get(v) or sorted(darts, key=repr))
    (thick,) = [x for x in rot if x[1] == thick_dir]
    i = rot.index(thick)
    rot = rot[i:] + rot[:i]
    # counterclockwise from the thick edge: merge sees (thick, left, right),
    # split sees (thick, right, left)
    if kind == "merge":
        left, right = rot[1][0], rot[2][0]
    else:
        right, left = rot[1][0], rot[2][0]
    return (("e", right), ("e", left), ("e", thick[0]))


# ---------------------------------------------------------------------------
# resolution webs: label-1 arcs meeting at crossing sites


SMOOTH, WIDE = "S", "W"


@dataclass(frozen=True)
class Site:
    """A crossing site: incoming and outgoing arcs on the left and right."""

    id: Hashable
    in_L: Hashable
    in_R: Hashable
    out_L: Hashable
    out_R: Hashable

    def strands(self) -> list:
        """(side, in, out) for the strands present; a half site has one."""
        out = []
        if self.in_L is not None:
            out.append(("L", self.in_L, self.out_L))
        if self.in_R is not None:
            out.append(("R", self.in_R, self.out_R))
        return out

    @property
    def is_full(self) -> bool:
        return self.in_L is not None and self.in_R is not None


class Web:
    """Family of MOY graphs: each site is resolved SMOOTH or WIDE.

    Counterclockwise around a site the arcs read in_L, in_R, out_R, out_L.
    Arcs are label-1 edges named ``("a", arc)``, the thick edge of a wide site
    is ``("w", site)`` and crossingless loops are circles ``("o", loop)``.
    """

    def __init__(self, N: int, sites: Iterable[Site], loops: Iterable = ()):
        self.N = N
        self.sites = {s.id: s for s in sites}
        self.loops = list(loops)
        self.arc_head: dict = {}  # arc -> (site, side) it enters
        self.arc_tail: dict = {}  # arc -> (site, side) it leaves
        for s in self.sites.values():
            for side, a_in, a_out in s.strands():
                if a_in in self.arc_head:
                    raise FoamError(f"arc {a_in} enters two sites")
                self.arc_head[a_in] = (s.id, side)
                if a_out in self.arc_tail:
                    raise FoamError(f"arc {a_out} leaves two sites")
                self.arc_tail[a_out] = (s.id, side)
        if set(self.arc_head) != set(self.arc_tail):
            raise FoamError("every arc must leave one site and enter one site")
        self.arcs = sorted(self.arc_head, key=repr)

    def _head_vertex(self, arc, states):
        c, side = self.arc_head[arc]
        return ("j", c, side) if states[c] == SMOOTH else ("m", c)

    def _tail_vertex(self, arc, states):
        c, side = self.arc_tail[arc]
        return ("j", c, side) if states[c] == SMOOTH else ("s", c)

    def graph(self, states: Mapping) -> MoyGraph:
        g = MoyGraph(self.N)
        for c, s in self.sites.items():
            if states[c] == SMOOTH:
                for side, a_in, a_out in s.strands():
                    v = ("j", c, side)
                    g.vertices[v] = "bi"
                    g.rotation[v] = [(("a", a_in), IN), (("a", a_out), OUT)]
            else:
                if not s.is_full:
                    raise FoamError(f"half site {c} cannot be wide")
                m, sp = ("m", c), ("s", c)
                g.vertices[m] = "merge"
                g.vertices[sp] = "split"
                g.edges[("w", c)] = (m, sp, 2)
                g.rotation[m] = [(("w", c), OUT), (("a", s.in_L), IN), (("a", s.in_R), IN)]
                g.rotation[sp] = [(("w", c), IN), (("a", s.out_R), OUT), (("a", s.out_L), OUT)]
        for arc in self.arcs:
            g.edges[("a", arc)] = (self._tail_vertex(arc, states), self._head_vertex(arc, states), 1)
        for lp in self.loops:
            g.circles[("o", lp)] = (1, 1)
        return g

    def all_smooth(self) -> dict:
        return {c: SMOOTH for c in self.sites}

    def cylinder(self, lower: Mapping, upper: Mapping) -> Foam:
        """Identity away from sites whose state changes; zip S→W, unzip W→S."""
        b = FoamBuilder(self.N)
        for arc in self.arcs:
            k = b.piece(("arc", arc), 1, 1)
            b.boundary_edge("bottom", ("a", arc), k)
            b.boundary_edge("top", ("a", arc), k)
        for lp in self.loops:
            k = b.piece(("loop", lp), 1, 0)
            b.boundary_edge("bottom", ("o", lp), k)
            b.boundary_edge("top", ("o", lp), k)
        for c, s in self.sites.items():
            lo, up = lower[c], upper[c]
            sides = s.strands()
            if lo == SMOOTH and up == SMOOTH:
                for side, a_in, a_out in sides:
                    k = b.piece(("seam", c, side), 1, -1)
                    b.join(("arc", a_in), k)
                    b.join(k, ("arc", a_out))
                    b.boundary_vertex("bottom", ("j", c, side), k)
                    b.boundary_vertex("top", ("j", c, side), k)
                continue
            w = b.piece(("thick", c), 2, 1)
            if lo == WIDE:
                b.boundary_edge("bottom", ("w", c), w)
            if up == WIDE:
                b.boundary_edge("top", ("w", c), w)
            if lo == WIDE and up == WIDE:
                b.binding(("bm", c), -1, (("arc", s.in_R), ("arc", s.in_L), w),
                          (("bottom", ("m", c)), ("top", ("m", c))))
                b.binding(("bs", c), -1, (("arc", s.out_R), ("arc", s.out_L), w),
                          (("bottom", ("s", c)), ("top", ("s", c))))
                continue
            # zip (lo smooth) or unzip (up smooth)
            smooth_side = "bottom" if lo == SMOOTH else "top"
            wide_side = "top" if lo == SMOOTH else "bottom"
            centers = {}
            for side, a_in, a_out in sides:
                ctr = b.piece(("sheet", c, side), 1, 1)
                centers[side] = ctr
                h_in = b.piece(("half", c, side, "in"), 1, -1)
                h_out = b.piece(("half", c, side, "out"), 1, -1)
                b.join(("arc", a_in), h_in)
                b.join(h_in, ctr)
                b.join(ctr, h_out)
                b.join(h_out, ("arc", a_out))
                b.boundary_vertex(smooth_side, ("j", c, side), ctr)
            b.binding(("u", c), -1, (centers["R"], centers["L"], w),
                      ((wide_side, ("m", c)), (wide_side, ("s", c))))
        return b.build(self.graph(lower), self.graph(upper))

    def smoothing_circles(self) -> list[list]:
        """Circles of the all-smooth graph as lists of arcs; loops last."""
        seen = set()
        circles = []
        for arc in self.arcs:
            if arc in seen:
                continue
            cyc = []
            a = arc
            while a not in seen:
                seen.add(a)
                cyc.append(a)
                c, side = self.arc_head[a]
                s = self.sites[c]
                a = s.out_L if side == "L" else s.out_R
            circles.append(cyc)
        return circles

    def cups(self) -> Foam:
        """Discs ∅ → all-smooth graph, one per circle (loops included)."""
        b = FoamBuilder(self.N)
        for i, cyc in enumerate(self.smoothing_circles()):
            k = b.piece(("disc", i), 1, 1)
            for a in cyc:
                b.boundary_edge("top", ("a", a), k)
                c, side = self.arc_head[a]
                b.boundary_vertex("top", ("j", c, side), k)
        for lp in self.loops:
            k = b.piece(("disc", ("o", lp)), 1, 1)
            b.boundary_edge("top", ("o", lp), k)
        return b.build(empty_graph(self.N), self.graph(self.all_smooth()))

    def restrict(self, site_ids: Iterable, loops: Iterable = ()) -> "Web":
        ids = set(site_ids)
        return Web(self.N, [s for c, s in self.sites.items() if c in ids], loops)

    def restrict_to_arcs(self, arcs: Iterable, loops: Iterable = ()) -> "Web":
        """Sub-web on a set of arcs closed under the sites; strands of
        sites whose arcs fall outside are dropped, leaving half sites."""
        keep = set(arcs)
        sites = []
        for c, s in self.sites.items():
            L = s.in_L in keep and s.in_L is not None
            R = s.in_R in keep and s.in_R is not None
            if not (L or R):
                continue
            sites.append(Site(c, s.in_L if L else None, s.in_R if R else None,
                              s.out_L if L else None, s.out_R if R else None))
        return Web(self.N, sites, loops)

    def split(self, states: Mapping) -> list:
        """Connected pieces of the resolved graph as (sub-web, states)."""
        parent = {a: a for a in self.arcs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        for c, s in self.sites.items():
            for side, a_in, a_out in s.strands():
                union(a_in, a_out)
            if states[c] == WIDE:
                union(s.in_L, s.in_R)
        groups: dict = {}
        for a in self.arcs:
            groups.setdefault(find(a), []).append(a)
        out = []
        for arcs in groups.values():
            sub = self.restrict_to_arcs(arcs)
            out.append((sub, {c: states[c] for c in sub.sites}))
        for lp in self.loops:
            out.append((Web(self.N, [], [lp]), {}))
        return out


def zip_foam(N: int) -> Foam:
    """Zip on the closure of one crossing site: two circles → theta-like web."""
    w = Web(N, [Site(0, "l", "r", "l", "r")])
    return w.cylinder({0: SMOOTH}, {0: WIDE})


def unzip_foam(N: int) -> Foam:
    w = Web(N, [Site(0, "l", "r", "l", "r")])
    return w.cylinder({0: WIDE}, {0: SMOOTH})


def digon_cup(N: int) -> Foam:
    """∅ → closed web of one wide site: zip after two discs."""
    w = Web(N, [Site(0, "l", "r", "l", "r")])
    return compose(w.cups(), w.cylinder({0: SMOOTH}, {0: WIDE}))


def digon_cap(N: int) -> Foam:
    return mirror(digon_cup(N))


# ---------------------------------------------------------------------------
# side by side union and renaming of boundary ids


def _graph_union(a: MoyGraph, b: MoyGraph) -> MoyGraph:
    if set(a.vertices) & set(b.vertices) or set(a.edges) & set(b.edges) or set(a.circles) & set(b.circles):
        raise FoamError("juxtaposed boundaries share ids")
    return MoyGraph(a.N, {**a.vertices, **b.vertices}, {**a.edges, **b.edges},
                    {**a.circles, **b.circles}, {**a.rotation, **b.rotation})


def _boundary_union(a: Boundary, b: Boundary) -> Boundary:
    return Boundary({**a.edge_facet, **b.edge_facet}, {**a.vertex_facet, **b.vertex_facet},
                    {**a.vertex_binding, **b.vertex_binding})


def juxtapose(F: Foam, G: Foam):
    """Foams side by side (boundary ids must be disjoint); (H, fmap_F, fmap_G)."""
    if F.N != G.N:
        raise FoamError("foams for different N")
    if F.points or G.points:
        raise FoamError("juxtaposition of foams with singular points is not supported")
    fm = {f: i for i, f in enumerate(F.facets)}
    gm = {f: len(fm) + i for i, f in enumerate(G.facets)}
    bf = {x: i for i, x in enumerate(F.bindings)}
    bg = {x: len(bf) + i for i, x in enumerate(G.bindings)}
    facets = {fm[f]: x for f, x in F.facets.items()}
    facets.update({gm[f]: x for f, x in G.facets.items()})
    bindings = {bf[k]: Binding(x.chi, tuple(fm[y] for y in x.cyclic), x.ends) for k, x in F.bindings.items()}
    bindings.update({bg[k]: Binding(x.chi, tuple(gm[y] for y in x.cyclic), x.ends) for k, x in G.bindings.items()})
    dec = F.decoration.map_variables(lambda v: (fm[v[0]], v[1])) * G.decoration.change_ring(
        F.decoration.ring).map_variables(lambda v: (gm[v[0]], v[1]))
    H = Foam(F.N, facets, bindings, {}, _graph_union(F.bottom, G.bottom), _graph_union(F.top, G.top),
             _boundary_union(F.bottom_map.renamed(fm, bf), G.bottom_map.renamed(gm, bg)),
             _boundary_union(F.top_map.renamed(fm, bf), G.top_map.renamed(gm, bg)), dec)
    return H, fm, gm


def rename_top(F: Foam, edge_map, vertex_map) -> Foam:
    """Rename the ids of the top boundary graph (callables on edge/vertex ids)."""
    g = F.top
    top = MoyGraph(
        g.N,
        {vertex_map(v): k for v, k in g.vertices.items()},
        {edge_map(e): (vertex_map(s), vertex_map(t), lab) for e, (s, t, lab) in g.edges.items()},
        {edge_map(c): x for c, x in g.circles.items()},
        {vertex_map(v): [(edge_map(e), d) for e, d in r] for v, r in g.rotation.items()},
    )
    tm = F.top_map
    top_map = Boundary({edge_map(e): f for e, f in tm.edge_facet.items()},
                       {vertex_map(v): f for v, f in tm.vertex_facet.items()},
                       {vertex_map(v): x for v, x in tm.vertex_binding.items()})
    bindings = {}
    for k, x in F.bindings.items():
        ends = tuple(sorted(((s, vertex_map(v)) if s == "top" else (s, v) for s, v in x.ends), key=repr))
        bindings[k] = Binding(x.chi, x.cyclic, ends)
    return replace(F, top=top, top_map=top_map, bindings=bindings)
