"""MOY polynomials of planar webs with edge labels 1 and 2.

``moy_polynomial`` rewrites with the local relations of MOY calculus
(bivalent vertices, circles, digons, bigons, squares) and falls back on a
pigment state sum for graphs no relation simplifies.  The state sum also
serves as an independent cross-check.

State sum: every label-1 edge gets a pigment in
1..N.  At each label-2 edge the two strands either go straight through or
swap sides; a straight passage with pigment a on the left and b on the
right weighs q^-1 if a < b and q otherwise, a swap weighs 1.  The strands
then form simple closed curves, and a curve of pigment i with rotation
number r weighs q^((N+1-2i) r).

Rotation numbers come from the rotation system alone: the faces on the left
of a curve are flood-filled without crossing it, and the curve is
counterclockwise exactly when that region misses the chosen outer face.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .foam import IN, OUT, FoamError, MoyGraph
from .rings import LaurentQ, quantum_binomial, quantum_integer


class IrreducibleGraph(ValueError):
    pass


q = LaurentQ.monomial


# ---------------------------------------------------------------------------
# faces


def faces(g: MoyGraph) -> tuple[dict, list]:
    """Faces from the rotation system.

    Returns (face_of, faces) where face_of[(edge, +1|-1)] is the face to the
    left of traversing the edge forwards (+1) or backwards (-1).
    """
    rot = g.rotation
    for v in g.vertices:
        if v not in rot:
            raise FoamError(f"vertex {v} has no rotation; planar data required")
    face_of: dict = {}
    all_faces: list = []
    for e in g.edges:
        for direction in (1, -1):
            if (e, direction) in face_of:
                continue
            fid = len(all_faces)
            cycle = []
            cur = (e, direction)
            while cur not in face_of:
                face_of[cur] = fid
                cycle.append(cur)
                edge, d = cur
                s, t, _ = g.edges[edge]
                v = t if d == 1 else s
                dart = (edge, IN if d == 1 else OUT)
                ring = rot[v]
                idx = ring.index(dart)
                nxt_edge, nxt_kind = ring[idx - 1]
                cur = (nxt_edge, 1 if nxt_kind == OUT else -1)
            all_faces.append(cycle)
    return face_of, all_faces


def _component_of_edges(g: MoyGraph) -> dict:
    comp = {}
    for i, c in enumerate(g.components()):
        for e in c["edges"]:
            comp[e] = i
    return comp


class _Planar:
    def __init__(self, g: MoyGraph):
        self.g = g
        self.face_of, self.faces = faces(g)
        self.edge_comp = _component_of_edges(g)
        self.outer = {}
        for (e, d), f in sorted(self.face_of.items(), key=lambda kv: kv[1]):
            self.outer.setdefault(self.edge_comp[e], f)

    def rotation(self, curve_edges: list) -> int:
        """+1 for a counterclockwise simple closed curve, -1 otherwise."""
        block = set(curve_edges)
        comp = self.edge_comp[curve_edges[0]]
        start = {self.face_of[(e, 1)] for e in curve_edges}
        region = set(start)
        stack = list(start)
        while stack:
            f = stack.pop()
            for e, d in self.faces[f]:
                if e in block:
                    continue
                other = self.face_of[(e, -d)]
                if other not in region:
                    region.add(other)
                    stack.append(other)
        return -1 if self.outer[comp] in region else 1


# ---------------------------------------------------------------------------
# state sum


def _check_labels(g: MoyGraph, any_circle: bool = False):
    for e, (s, t, lab) in g.edges.items():
        if lab not in (1, 2):
            raise FoamError(f"edge {e} has label {lab}; only 1 and 2 are supported")
    for c, (lab, _) in g.circles.items():
        if any_circle and 1 <= lab <= g.N:
            continue
        if lab not in (1, 2):
            raise FoamError(f"circle {c} has label {lab}; only 1 and 2 are supported")


def _circle_value(label: int, N: int) -> LaurentQ:
    return quantum_integer(N) if label == 1 else quantum_binomial(N, 2)


def moy_state_sum(g: MoyGraph) -> LaurentQ:
    _check_labels(g)
    N = g.N
    total = LaurentQ.one()
    for c, (lab, _) in g.circles.items():
        total = total * _circle_value(lab, N)
    if not g.edges:
        return total
    planar = _Planar(g)
    darts = g.darts()
    # thick edges and the strand slots around them
    thick = []
    for e, (m, s, lab) in g.edges.items():
        if lab != 2:
            continue
        if g.vertices[m] != "merge" or g.vertices[s] != "split":
            raise FoamError(f"label-2 edge {e} must run from a merge to a split vertex")
        rm = _rotate_to(g.rotation[m], (e, OUT))
        rs = _rotate_to(g.rotation[s], (e, IN))
        in_L, in_R = rm[1][0], rm[2][0]
        out_R, out_L = rs[1][0], rs[2][0]
        thick.append((e, in_L, in_R, out_L, out_R))
    for v, kind in g.vertices.items():
        if kind != "bi":
            ds = darts[v]
            labels = sorted(g.edges[x][2] for x, _ in ds)
            if labels != [1, 1, 2]:
                raise FoamError(f"vertex {v} is not a 1-1-2 vertex")
    # successor of a label-1 edge at its head when not at a thick edge
    one_edges = [e for e, (_, _, lab) in g.edges.items() if lab == 1]
    head_next = {}
    for e in one_edges:
        t = g.edges[e][1]
        if g.vertices[t] == "bi":
            (nxt,) = [x for x, d in darts[t] if d == OUT]
            head_next[e] = nxt
    total_states = LaurentQ()
    for choice in product((0, 1), repeat=len(thick)):
        nxt = dict(head_next)
        via = {}
        for (w, in_L, in_R, out_L, out_R), cross in zip(thick, choice):
            if cross:
                nxt[in_L], nxt[in_R] = out_R, out_L
            else:
                nxt[in_L], nxt[in_R] = out_L, out_R
            via[in_L] = w
            via[in_R] = w
        curves = []
        curve_of = {}
        for e in one_edges:
            if e in curve_of:
                continue
            cur = []
            x = e
            while x not in curve_of:
                curve_of[x] = len(curves)
                cur.append(x)
                if x in via:
                    cur.append(via[x])
                x = nxt[x]
            curves.append(cur)
        rots = [planar.rotation(c) for c in curves]
        # pairwise constraints at thick edges
        sites = []
        for (w, in_L, in_R, out_L, out_R), cross in zip(thick, choice):
            a, b = curve_of[in_L], curve_of[in_R]
            if a == b:
                break
            sites.append((a, b, cross))
        else:
            total_states = total_states + _color_sum(N, rots, sites)
    return total * total_states


def _rotate_to(ring, dart):
    i = ring.index(dart)
    return ring[i:] + ring[:i]


def _color_sum(N: int, rots: list, sites: list) -> LaurentQ:
    """Sum over pigment assignments with distinct pigments at each site."""
    k = len(rots)
    nbrs: dict = {i: [] for i in range(k)}
    for idx, (a, b, cross) in enumerate(sites):
        nbrs[a].append(idx)
        nbrs[b].append(idx)
    out: dict = {}
    pig = [0] * k

    def rec(i, exp):
        if i == k:
            out[exp] = out.get(exp, 0) + 1
            return
        for p in range(1, N + 1):
            ok = True
            e = exp + (N + 1 - 2 * p) * rots[i]
            for idx in nbrs[i]:
                a, b, cross = sites[idx]
                other = b if a == i else a
                if other < i:
                    if pig[other] == p:
                        ok = False
                        break
                    if not cross:
                        left, right = (p, pig[b]) if a == i else (pig[a], p)
                        e += -1 if left < right else 1
            if ok:
                pig[i] = p
                rec(i + 1, e)
        pig[i] = 0

    rec(0, 0)
    return LaurentQ(out)


# ---------------------------------------------------------------------------
# rewriting


@dataclass
class Step:
    """Elementary change from a lower graph to an upper graph.

    kinds: "bivalent" (v, e_in, e_out), "circle" (c, label),
    "digon" (s, m, x, y, e1, e2): thick e1 splits into x, y merging into e2,
    "bigon" (m, s, a, b, t, a2): a merges with b into t, t splits into a2
    and b, "saddle" (lower, upper): two edges of one label reconnected.
    """

    kind: str
    data: dict
    lower: MoyGraph
    upper: MoyGraph
    dots: bool = True  # whether the new facet carries the full decoration range


@dataclass
class Branch:
    factor: LaurentQ
    graph: MoyGraph  # the simpler graph
    steps: list  # bottom-up, from `graph` to the original


@dataclass
class Move:
    kind: str
    branches: list


def _copy(g: MoyGraph) -> MoyGraph:
    return MoyGraph(g.N, dict(g.vertices), dict(g.edges), dict(g.circles),
                    {v: list(r) for v, r in g.rotation.items()}, dict(g.basepoints))


def _replace_dart(g: MoyGraph, v, old, new):
    if v in g.rotation:
        g.rotation[v] = [new if d == old else d for d in g.rotation[v]]


def _drop(g: MoyGraph, vertices=(), edges=()):
    for v in vertices:
        g.vertices.pop(v, None)
        g.rotation.pop(v, None)
    for e in edges:
        g.edges.pop(e, None)


def _single(kind, factor, data, lower, upper, dots=True) -> Move:
    return Move(kind, [Branch(factor, lower, [Step(kind, data, lower, upper, dots)])])


def _remove_bigon(g: MoyGraph, m, s, a, b, t, a2) -> MoyGraph:
    h = _copy(g)
    if a == a2:
        _drop(h, [m, s], [a, b, t])
        h.circles[a] = (1, 1)
    else:
        u = g.edges[a][0]
        w = g.edges[a2][1]
        _drop(h, [m, s], [b, t, a2])
        h.edges[a] = (u, w, 1)
        _replace_dart(h, w, (a2, IN), (a, IN))
    return h


def _bivalent(g, darts):
    for v, kind in g.vertices.items():
        if kind != "bi":
            continue
        (e_in,) = [e for e, d in darts[v] if d == IN]
        (e_out,) = [e for e, d in darts[v] if d == OUT]
        h = _copy(g)
        if e_in == e_out:
            lab = g.edges[e_in][2]
            _drop(h, [v], [e_in])
            h.circles[e_in] = (lab, 1)
        else:
            u, _, lab = g.edges[e_in]
            w = g.edges[e_out][1]
            _drop(h, [v], [e_out])
            h.edges[e_in] = (u, w, lab)
            _replace_dart(h, w, (e_out, IN), (e_in, IN))
        return _single("bivalent", LaurentQ.one(), {"v": v, "e_in": e_in, "e_out": e_out}, h, g)
    return None


def _circle(g):
    for c, (lab, _) in g.circles.items():
        h = _copy(g)
        del h.circles[c]
        return _single("circle", quantum_binomial(g.N, lab), {"c": c, "label": lab}, h, g)
    return None


def _digon(g, darts):
    for s, kind in g.vertices.items():
        if kind != "split":
            continue
        x, y = [e for e, d in darts[s] if d == OUT]
        (e1,) = [e for e, d in darts[s] if d == IN]
        m = g.edges[x][1]
        if m != g.edges[y][1] or g.vertices[m] != "merge":
            continue
        (e2,) = [e for e, d in darts[m] if d == OUT]
        h = _copy(g)
        if e1 == e2:
            _drop(h, [s, m], [x, y, e1])
            h.circles[e1] = (2, 1)
        else:
            m1 = g.edges[e1][0]
            s2 = g.edges[e2][1]
            _drop(h, [s, m], [x, y, e2])
            h.edges[e1] = (m1, s2, 2)
            _replace_dart(h, s2, (e2, IN), (e1, IN))
        data = {"s": s, "m": m, "x": x, "y": y, "e1": e1, "e2": e2}
        return _single("digon", quantum_integer(2), data, h, g)
    return None


def _bigon(g, darts):
    for m, kind in g.vertices.items():
        if kind != "merge":
            continue
        (t,) = [e for e, d in darts[m] if d == OUT]
        s = g.edges[t][1]
        if g.vertices[s] != "split":
            continue
        outs = [e for e, d in darts[s] if d == OUT]
        back = [e for e in outs if g.edges[e][1] == m]
        if len(back) != 1:
            continue
        b = back[0]
        (a2,) = [e for e in outs if e != b]
        (a,) = [e for e, d in darts[m] if d == IN and e != b]
        h = _remove_bigon(g, m, s, a, b, t, a2)
        data = {"m": m, "s": s, "a": a, "b": b, "t": t, "a2": a2}
        return _single("bigon", quantum_integer(g.N - 1), data, h, g)
    return None


def _square(g, darts):
    """Square face thick, thin, thick, thin with its boundary oriented around it."""
    if any(v not in g.rotation for v in g.vertices):
        return None
    _, all_faces = faces(g)
    for f in all_faces:
        if len(f) != 4:
            continue
        seq = [(e, d) for e, d in f]
        if any(d != 1 for _, d in seq):
            continue
        labs = [g.edges[e][2] for e, _ in seq]
        if labs not in ([2, 1, 2, 1], [1, 2, 1, 2]):
            continue
        if labs[0] == 1:
            seq = seq[1:] + seq[:1]
        (w0, _), (u, _), (w1, _), (v, _) = seq
        m0, s0 = g.edges[w0][:2]
        m1, s1 = g.edges[w1][:2]
        if len({m0, s0, m1, s1}) != 4:
            continue
        (p,) = [e for e, d in darts[m0] if d == IN and e != v]
        (q,) = [e for e, d in darts[s0] if d == OUT and e != u]
        (r,) = [e for e, d in darts[m1] if d == IN and e != u]
        (t,) = [e for e, d in darts[s1] if d == OUT and e != v]
        if len({p, q, r, t, u, v}) != 6:
            continue
        return Move("square", [_square_y(g, m0, s0, m1, s1, w0, w1, u, v, p, q, r, t),
                               _square_x(g, m0, s0, m1, s1, w0, w1, u, v, p, q, r, t)])
    return None


def _square_y(g, m0, s0, m1, s1, w0, w1, u, v, p, q, r, t) -> Branch:
    # thick saddle: w0 (m0→s0), w1 (m1→s1) become m0→s1, m1→s0
    top = g
    mid = _copy(g)
    mid.edges[w0] = (m0, s1, 2)
    mid.edges[w1] = (m1, s0, 2)
    _replace_dart(mid, s1, (w1, IN), (w0, IN))
    _replace_dart(mid, s0, (w0, IN), (w1, IN))
    # mid has bigons (m0, s1; a=p, b=v, t=w0, a2=t) and (m1, s0; a=r, b=u, t=w1, a2=q)
    low1 = _remove_bigon(mid, m1, s0, r, u, w1, q)
    low2 = _remove_bigon(low1, m0, s1, p, v, w0, t)
    steps = [
        Step("bigon", {"m": m0, "s": s1, "a": p, "b": v, "t": w0, "a2": t}, low2, low1, False),
        Step("bigon", {"m": m1, "s": s0, "a": r, "b": u, "t": w1, "a2": q}, low1, mid, False),
        Step("saddle", {"lower": (w0, w1), "upper": (w0, w1)}, mid, top, False),
    ]
    return Branch(LaurentQ.one(), low2, steps)


def _square_x(g, m0, s0, m1, s1, w0, w1, u, v, p, q, r, t) -> Branch:
    # thin saddle: u (s0→m1), v (s1→m0) become s0→m0, s1→m1
    top = g
    mid = _copy(g)
    mid.edges[u] = (s0, m0, 1)
    mid.edges[v] = (s1, m1, 1)
    _replace_dart(mid, m0, (v, IN), (u, IN))
    _replace_dart(mid, m1, (u, IN), (v, IN))
    low1 = _remove_bigon(mid, m1, s1, r, v, w1, t)
    low2 = _remove_bigon(low1, m0, s0, p, u, w0, q)
    steps = [
        Step("bigon", {"m": m0, "s": s0, "a": p, "b": u, "t": w0, "a2": q}, low2, low1, False),
        Step("bigon", {"m": m1, "s": s1, "a": r, "b": v, "t": w1, "a2": t}, low1, mid, False),
        Step("saddle", {"lower": (u, v), "upper": (u, v), "dots": g.N - 2}, mid, top, True),
    ]
    return Branch(quantum_integer(g.N - 2), low2, steps)


def reduction_step(g: MoyGraph):
    """The first applicable simplification as a Move, or None."""
    darts = g.darts()
    for find in (lambda: _bivalent(g, darts), lambda: _circle(g), lambda: _digon(g, darts),
                 lambda: _bigon(g, darts), lambda: _square(g, darts)):
        mv = find()
        if mv is not None:
            return mv
    return None


def moy_rewrite(g: MoyGraph) -> LaurentQ:
    """⟨Γ⟩ by local rewriting; IrreducibleGraph when no relation applies."""
    _check_labels(g, any_circle=True)
    total = LaurentQ()
    stack = [(LaurentQ.one(), g)]
    while stack:
        coef, cur = stack.pop()
        if cur.is_empty():
            total = total + coef
            continue
        mv = reduction_step(cur)
        if mv is None:
            raise IrreducibleGraph(
                f"no relation applies to a graph with {len(cur.vertices)} vertices and {len(cur.edges)} edges")
        for br in mv.branches:
            stack.append((coef * br.factor, br.graph))
    return total


def moy_polynomial(g: MoyGraph) -> LaurentQ:
    """MOY evaluation of a planar web with labels in {1, 2}.

    Rewriting first; graphs it cannot simplify go to the state sum.
    """
    try:
        return moy_rewrite(g)
    except IrreducibleGraph:
        return moy_state_sum(g)
