"""Foams realizing the local simplifications of the rewriting engine.

Each elementary step (lower graph → upper graph) becomes a foam that is a
product away from the changed region.  A step may create one facet that
carries decorations; composing the steps of a full reduction from the
empty graph gives a template foam ∅ → Γ together with decoration slots,
and the decorated templates span the state space of Γ.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .foam import (IN, OUT, Boundary, Foam, FoamBuilder, FoamError, MoyGraph, Binding,
                   _vertex_cyclic, compose_with_maps, empty_graph)
from .moy import IrreducibleGraph, Step, reduction_step
from .sympoly import MPoly, partitions_in_box, schur


@dataclass
class Slot:
    facet: int
    label: int
    decorations: list  # MPoly in variables (facet, k)

    def remapped(self, fmap) -> "Slot":
        return Slot(fmap[self.facet], self.label,
                    [p.map_variables(lambda v: (fmap[v[0]], v[1])) for p in self.decorations])


def _dot_powers(fid, n: int) -> list[MPoly]:
    return [MPoly.var((fid, 1), exp=j) for j in range(n)]


def _schur_slot(fid, label: int, N: int) -> list[MPoly]:
    vs = [(fid, k) for k in range(1, label + 1)]
    return [schur(lam, label, vs) for lam in partitions_in_box(label, N - label)]


def _common(b: FoamBuilder, lower: MoyGraph, upper: MoyGraph, skip_lower, skip_upper,
            piece_up: dict, piece_low: dict):
    """Product pieces for the unchanged part of a step."""
    for e, (_, _, lab) in upper.edges.items():
        if e in skip_upper:
            continue
        if e not in lower.edges or e in skip_lower:
            raise FoamError(f"edge {e} is not shared by the two graphs")
        b.piece(("e", e), lab, 1)
        b.boundary_edge("bottom", e, ("e", e))
        b.boundary_edge("top", e, ("e", e))
    for c, (lab, _) in upper.circles.items():
        if c in skip_upper:
            continue
        b.piece(("e", c), lab, 0)
        b.boundary_edge("bottom", c, ("e", c))
        b.boundary_edge("top", c, ("e", c))

    def up(e):
        return piece_up.get(e, ("e", e))

    def low(e):
        return piece_low.get(e, ("e", e))

    darts_up = upper.darts()
    darts_low = lower.darts()
    for v, kind in upper.vertices.items():
        if v not in lower.vertices:
            continue
        if kind == "bi":
            key = b.piece(("seam", v), upper.edges[darts_up[v][0][0]][2], -1)
            for e, _ in darts_up[v]:
                b.join(up(e), key)
            for e, _ in darts_low[v]:
                b.join(low(e), key)
            b.boundary_vertex("bottom", v, key)
            b.boundary_vertex("top", v, key)
            continue
        cyc = tuple(up(x[1]) for x in _vertex_cyclic(upper, v, darts_up[v]))
        b.binding(("v", v), -1, cyc, (("bottom", v), ("top", v)))


def _new_binding(b, upper: MoyGraph, v, piece_up, key, ends):
    darts = upper.darts()
    cyc = tuple(piece_up.get(x[1], ("e", x[1])) for x in _vertex_cyclic(upper, v, darts[v]))
    b.binding(key, -1, cyc, ends)


def step_foam(step: Step, N: int) -> tuple[Foam, Slot | None]:
    """Foam lower → upper for one step, and the slot it creates."""
    lo, up, d = step.lower, step.upper, step.data
    b = FoamBuilder(N)
    slot_piece = None
    decos = None
    if step.kind == "bivalent":
        v, e_in, e_out = d["v"], d["e_in"], d["e_out"]
        lab = up.edges[e_in][2]
        circ = e_in in lo.circles
        K = b.piece(("bv", v), lab, 0 if circ else 1)
        b.boundary_edge("bottom", e_in, K)
        b.boundary_edge("top", e_in, K)
        if e_out != e_in:
            b.boundary_edge("top", e_out, K)
        b.boundary_vertex("top", v, K)
        pu = {e_in: K, e_out: K}
        _common(b, lo, up, {e_in}, {e_in, e_out}, pu, {e_in: K})
    elif step.kind == "circle":
        c, lab = d["c"], d["label"]
        K = b.piece(("cup", c), lab, 1)
        b.boundary_edge("top", c, K)
        _common(b, lo, up, set(), {c}, {}, {})
        slot_piece, decos = K, ("schur", lab)
    elif step.kind == "digon":
        s, m, x, y, e1, e2 = (d[k] for k in ("s", "m", "x", "y", "e1", "e2"))
        circ = e1 in lo.circles
        T = b.piece(("dT", e1), 2, 0 if circ else 1)
        X = b.piece(("dx", x), 1, 1)
        Y = b.piece(("dy", y), 1, 1)
        b.boundary_edge("bottom", e1, T)
        b.boundary_edge("top", e1, T)
        if e2 != e1:
            b.boundary_edge("top", e2, T)
        b.boundary_edge("top", x, X)
        b.boundary_edge("top", y, Y)
        pu = {e1: T, e2: T, x: X, y: Y}
        _new_binding(b, up, s, pu, ("dg", s), (("top", s), ("top", m)))
        _common(b, lo, up, {e1}, {e1, e2, x, y}, pu, {e1: T})
        slot_piece, decos = X, ("dots", 2)
    elif step.kind == "bigon":
        m, s, a, bb, t, a2 = (d[k] for k in ("m", "s", "a", "b", "t", "a2"))
        circ = a in lo.circles
        P = b.piece(("bP", a), 1, 0 if circ else 1)
        Tt = b.piece(("bT", t), 2, 1)
        B = b.piece(("bB", bb), 1, 1)
        b.boundary_edge("bottom", a, P)
        b.boundary_edge("top", a, P)
        if a2 != a:
            b.boundary_edge("top", a2, P)
        b.boundary_edge("top", t, Tt)
        b.boundary_edge("top", bb, B)
        pu = {a: P, a2: P, t: Tt, bb: B}
        _new_binding(b, up, m, pu, ("bg", m), (("top", m), ("top", s)))
        _common(b, lo, up, {a}, {a, a2, t, bb}, pu, {a: P})
        slot_piece, decos = B, ("dots", N - 1)
    elif step.kind == "saddle":
        e_lo, e_up = d["lower"], d["upper"]
        lab = up.edges[e_up[0]][2]
        K = b.piece(("sd",) + tuple(e_up), lab, 1)
        for e in e_lo:
            b.boundary_edge("bottom", e, K)
        for e in e_up:
            b.boundary_edge("top", e, K)
        _common(b, lo, up, set(e_lo), set(e_up), {e: K for e in e_up}, {e: K for e in e_lo})
        if "dots" in d:
            slot_piece, decos = K, ("dots", d["dots"])
    else:
        raise FoamError(f"unknown step {step.kind}")
    F = b.build(lo, up)
    if slot_piece is None:
        return F, None
    fid = F.top_map.edge_facet[_some_top_edge(F, slot_piece, b)]
    if decos[0] == "schur":
        polys = _schur_slot(fid, decos[1], N)
    elif step.dots:
        polys = _dot_powers(fid, decos[1])
    else:
        polys = [MPoly.const(1)]
    lab = F.facets[fid].label
    return F, Slot(fid, lab, polys)


def _some_top_edge(F: Foam, piece, b: FoamBuilder):
    root = b.uf.find(piece)
    for e in b.top_map.edge_facet:
        if b.uf.find(b.top_map.edge_facet[e]) == root:
            return e
    raise FoamError("slot facet does not meet the top boundary")


# ---------------------------------------------------------------------------
# templates


def empty_foam(N: int) -> Foam:
    return Foam(N, {}, {})


@dataclass
class Template:
    foam: Foam  # ∅ → Γ
    slots: list  # Slot

    def decorations(self) -> list[MPoly]:
        out = []
        for choice in product(*[s.decorations for s in self.slots]):
            p = MPoly.const(1)
            for x in choice:
                p = p * x
            out.append(p)
        return out


def _extend(t: Template, step: Step, N: int) -> Template:
    F, slot = step_foam(step, N)
    H, fa, fb = compose_with_maps(t.foam, F)
    slots = [s.remapped(fa) for s in t.slots]
    if slot is not None:
        slots.append(slot.remapped(fb))
    return Template(H, slots)


def reduction_templates(g: MoyGraph) -> list[Template]:
    """Decorated template foams ∅ → Γ following the rewriting engine."""
    if g.is_empty():
        return [Template(Foam(g.N, {}, {}, bottom=empty_graph(g.N), top=g), [])]
    mv = reduction_step(g)
    if mv is None:
        raise IrreducibleGraph(f"no relation applies to a graph with {len(g.vertices)} vertices")
    out = []
    for br in mv.branches:
        for t in reduction_templates(br.graph):
            for step in br.steps:
                t = _extend(t, step, g.N)
            out.append(t)
    return out
