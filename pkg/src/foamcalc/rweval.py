"""Closed-foam evaluation by a sum over colorings.

For a coloring c, the pigment-i surface collects the facets whose pigment set
contains i, and the (i,j) surface the facets containing exactly one of i, j.
Each coloring contributes

    (-1)^s * P(c) / prod_{i<j} (X_i - X_j)^(chi_ij / 2),
    s = sum_i i * chi_i / 2 + sum_{i<j} theta_ij,

where theta_ij counts closed curves of bindings at which i sits on the first
thin facet and j on the second (in the stored cyclic order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .foam import Foam, FoamError
from .rings import RingSpec, ZZ
from .sympoly import MPoly, divide_exact, NotDivisible, nabla


class EvaluationError(ArithmeticError):
    pass


def _masks(N: int, k: int) -> list[int]:
    return [sum(1 << i for i in c) for c in combinations(range(N), k)]


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _require_closed(F: Foam):
    if not F.is_closed:
        raise FoamError("evaluation needs a closed foam")


def _color_masks(F: Foam) -> list[dict]:
    """All colorings as facet -> bitmask (bit i-1 is pigment i)."""
    _require_closed(F)
    N = F.N
    fids = list(F.facets)
    incident: dict = {f: [] for f in fids}
    for b in F.bindings.values():
        for x in set(b.cyclic):
            incident[x].append(b.cyclic)
    # most-constrained-first ordering grown along bindings
    order: list = []
    placed: set = set()
    while len(order) < len(fids):
        best = max(
            (f for f in fids if f not in placed),
            key=lambda f: (
                sum(1 for cyc in incident[f] for x in cyc if x in placed and x != f),
                len(incident[f]),
                F.facets[f].label,
                -fids.index(f),
            ),
        )
        order.append(best)
        placed.add(best)
    pos = {f: i for i, f in enumerate(order)}
    # constraints checked once all three facets of a binding are known
    checks: dict = {i: [] for i in range(len(order))}
    for cyc in (b.cyclic for b in F.bindings.values()):
        checks[max(pos[x] for x in cyc)].append(cyc)
    choices = {f: _masks(N, F.facets[f].label) for f in fids}
    out: list = []
    cur: dict = {}

    def determined(f):
        for a, b, h in incident[f]:
            if f == h and a in cur and b in cur:
                return [cur[a] | cur[b]] if not cur[a] & cur[b] else []
            if f == a and b in cur and h in cur:
                return [cur[h] & ~cur[b]] if cur[b] & ~cur[h] == 0 else []
            if f == b and a in cur and h in cur:
                return [cur[h] & ~cur[a]] if cur[a] & ~cur[h] == 0 else []
        return None

    def rec(i):
        if i == len(order):
            out.append(dict(cur))
            return
        f = order[i]
        cand = determined(f)
        lab = F.facets[f].label
        for m in choices[f] if cand is None else cand:
            if bin(m).count("1") != lab:
                continue
            cur[f] = m
            ok = True
            for a, b, h in checks[i]:
                if cur[a] & cur[b] or cur[a] | cur[b] != cur[h]:
                    ok = False
                    break
            if ok:
                rec(i + 1)
            del cur[f]

    rec(0)
    return out


def enumerate_colorings(F: Foam) -> list[dict]:
    """Colorings as facet -> frozenset of pigments in 1..N."""
    return [{f: frozenset(i + 1 for i in _bits(m)) for f, m in c.items()} for c in _color_masks(F)]


def _as_masks(c: Mapping) -> dict:
    return {f: (sum(1 << (i - 1) for i in s) if not isinstance(s, int) else s) for f, s in c.items()}


def _check_coloring(F: Foam, cm: dict):
    for f, fac in F.facets.items():
        if f not in cm or bin(cm[f]).count("1") != fac.label or cm[f] >> F.N:
            raise EvaluationError(f"facet {f} is not properly colored")
    for a, b, h in (x.cyclic for x in F.bindings.values()):
        if cm[a] & cm[b] or cm[a] | cm[b] != cm[h]:
            raise EvaluationError("coloring violates a binding constraint")


def _mono_chi(F: Foam, cm: dict, i: int) -> int:
    bit = 1 << (i - 1)
    chi = sum(f.chi for fid, f in F.facets.items() if cm[fid] & bit)
    chi += sum(b.chi for b in F.bindings.values() if cm[b.cyclic[2]] & bit)
    chi += sum(1 for p in F.points.values() if any(cm[x] & bit for x in p.facets))
    return chi


def _bi_in(mask: int, bi: int, bj: int) -> bool:
    return bool(mask & bi) != bool(mask & bj)


def _bi_chi(F: Foam, cm: dict, i: int, j: int) -> int:
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    chi = sum(f.chi for fid, f in F.facets.items() if _bi_in(cm[fid], bi, bj))
    for b in F.bindings.values():
        if any(_bi_in(cm[x], bi, bj) for x in b.cyclic):
            chi += b.chi
    chi += sum(1 for p in F.points.values() if any(_bi_in(cm[x], bi, bj) for x in p.facets))
    return chi


def _theta_plus(F: Foam, cm: dict, i: int, j: int) -> int:
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    positive = [bid for bid, b in F.bindings.items()
                if cm[b.cyclic[0]] & bi and cm[b.cyclic[1]] & bj]
    if not F.points:
        return len(positive)
    parent = {bid: bid for bid in positive}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    at_point: dict = {}
    for bid in positive:
        for end in F.bindings[bid].ends:
            if end[0] == "point":
                at_point.setdefault(end[1], []).append(bid)
    for pid, bs in at_point.items():
        if len(bs) != 2:
            # positive curves must pass straight through singular points
            raise EvaluationError(f"positive bindings branch at singular point {pid}")
        parent[find(bs[0])] = find(bs[1])
    return len({find(b) for b in positive})


def surface_data(F: Foam, c: Mapping, i: int, j: int | None = None):
    """chi of the pigment-i surface, or (chi, theta+) of the (i,j) surface."""
    cm = _as_masks(c)
    _check_coloring(F, cm)
    if j is None:
        return _mono_chi(F, cm, i)
    if not i < j:
        raise ValueError("need i < j")
    return _bi_chi(F, cm, i, j), _theta_plus(F, cm, i, j)


@dataclass
class ColoringTerm:
    sign: int
    numerator: MPoly  # in variables 1..N
    exponents: dict  # (i, j) -> power of (X_i - X_j) in the denominator


def _term_data(F: Foam, cm: dict):
    N = F.N
    s = 0
    for i in range(1, N + 1):
        chi = _mono_chi(F, cm, i)
        if chi % 2:
            raise EvaluationError(f"odd Euler characteristic {chi} of a pigment surface")
        s += i * chi // 2
    exps = {}
    for i, j in combinations(range(1, N + 1), 2):
        chi = _bi_chi(F, cm, i, j)
        if chi % 2:
            raise EvaluationError(f"odd Euler characteristic {chi} of a bichrome surface")
        exps[(i, j)] = chi // 2
        s += _theta_plus(F, cm, i, j)
    return (-1) ** (s % 2), exps


def _pigment_map(F: Foam, cm: dict) -> dict:
    """(facet, k) -> pigment for decoration substitution."""
    out = {}
    for f, m in cm.items():
        for k, b in enumerate(_bits(m), start=1):
            out[(f, k)] = b + 1
    return out


def coloring_term(F: Foam, c: Mapping) -> ColoringTerm:
    cm = _as_masks(c)
    _check_coloring(F, cm)
    sign, exps = _term_data(F, cm)
    pm = _pigment_map(F, cm)
    num = F.decoration.change_ring(ZZ).map_variables(pm.__getitem__)
    return ColoringTerm(sign, num, exps)


def _diff(i, j) -> MPoly:
    return MPoly.var(i) - MPoly.var(j)


def evaluate(F: Foam) -> MPoly:
    """Symmetric integral polynomial in X_1..X_N."""
    _require_closed(F)
    N = F.N
    terms = [coloring_term(F, c) for c in _color_masks(F)]
    if not terms:
        return MPoly({})
    pairs = list(combinations(range(1, N + 1), 2))
    common = {p: max(0, max(t.exponents[p] for t in terms)) for p in pairs}
    total = MPoly({})
    for t in terms:
        part = t.numerator * t.sign
        for p in pairs:
            e = common[p] - t.exponents[p]
            if e:
                part = part * _diff(*p) ** e
        total = total + part
    W = MPoly.const(1)
    for p in pairs:
        if common[p]:
            W = W * _diff(*p) ** common[p]
    try:
        return divide_exact(total, W)
    except NotDivisible as exc:
        raise EvaluationError("coloring sum is not a polynomial; the foam data is inconsistent") from exc


def default_point(N: int) -> list[int]:
    """Distinct integers used for numerical evaluation (X_i -> i)."""
    return list(range(1, N + 1))


class ColoringTable:
    """Colorings of one closed foam with their weights at a fixed point.

    For a decoration D the evaluation at the point is sum_c w_c * D(x_c); for
    degree-zero decorated foams that number is the (constant) evaluation.
    Weights are kept as exact fractions.
    """

    def __init__(self, F: Foam, point: Sequence[int] | None = None):
        _require_closed(F)
        self.foam = F
        N = F.N
        self.point = list(point) if point is not None else default_point(N)
        self.colorings = _color_masks(F)
        self.weights: list[Fraction] = []
        self.pigments: list[dict] = []
        for cm in self.colorings:
            sign, exps = _term_data(F, cm)
            w = Fraction(sign)
            for (i, j), e in exps.items():
                d = self.point[i - 1] - self.point[j - 1]
                w = w / Fraction(d) ** e if e >= 0 else w * Fraction(d) ** (-e)
            self.weights.append(w)
            self.pigments.append(_pigment_map(F, cm))

    def facet_values(self, fid) -> list[tuple]:
        """Per coloring, the point coordinates of the facet's pigments."""
        lab = self.foam.facets[fid].label
        return [tuple(self.point[pm[(fid, k)] - 1] for k in range(1, lab + 1)) for pm in self.pigments]

    def evaluate_at(self, decoration: MPoly | None = None) -> Fraction:
        dec = self.foam.decoration if decoration is None else decoration
        total = Fraction(0)
        for w, pm in zip(self.weights, self.pigments):
            total += w * dec.evaluate(lambda v: self.point[pm[v] - 1])
        return total


def evaluate_at(F: Foam, point: Sequence[int] | None = None) -> Fraction:
    return ColoringTable(F, point).evaluate_at()


def evaluate_constant(F: Foam) -> int:
    """Constant term of the evaluation.  Zero unless the degree is zero."""
    _require_closed(F)
    if F.decoration.is_zero():
        return 0
    parts = F.decoration.homogeneous_parts()
    base = F.undecorated_degree()
    total = 0
    for d, part in parts.items():
        if base + 2 * d != 0:
            continue
        v = ColoringTable(F.with_decoration(part)).evaluate_at()
        if v.denominator != 1:
            raise EvaluationError(f"degree-zero evaluation {v} is not an integer")
        total += v.numerator
    return total


def evaluate_in_ring(F: Foam, ring: RingSpec):
    """Image in R of the evaluation under X_i -> 0 (a ring element)."""
    return ring.normalize(evaluate_constant(F))


def nabla_foam(F: Foam) -> Foam:
    return F.with_decoration(nabla(F.decoration))


def colorings_count(N: int, labels: Sequence[int]) -> int:
    """Number of colorings of a disjoint union of spheres with these labels."""
    out = 1
    for k in labels:
        out *= comb(N, k)
    return out
