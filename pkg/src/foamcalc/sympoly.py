"""Sparse multivariate polynomials, symmetric bases and the operator nabla.

Variables are opaque hashable, orderable keys (ints, tuples ...).  A monomial
is a sorted tuple of ``(variable, exponent)`` pairs with positive exponents.
"""

from __future__ import annotations

from itertools import combinations, permutations
from typing import Callable, Hashable, Iterable, Mapping

from .rings import ZZ, RingSpec


class NotDivisible(ArithmeticError):
    pass


Monomial = tuple  # tuple[tuple[var, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts if p)
        if any(p < 0 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"{parts} is not weakly decreasing")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def part(self, j: int) -> int:
        """1-based part, zero past the length."""
        return self[j - 1] if 1 <= j <= len(self) else 0

    def fits_box(self, rows: int, cols: int) -> bool:
        return len(self) <= rows and (not self or self[0] <= cols)

    def to_json(self) -> list[int]:
        return list(self)


def partitions_in_box(rows: int, cols: int) -> list[Partition]:
    out = []

    def rec(prefix, maxpart):
        out.append(Partition(prefix))
        if len(prefix) == rows:
            return
        for p in range(1, maxpart + 1):
            rec(prefix + [p], p)

    rec([], cols)
    return sorted(out, key=lambda p: (p.size, tuple(p)))


class MPoly:
    """Polynomial over a RingSpec; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, terms: Mapping[Monomial, object] | None = None, ring: RingSpec = ZZ):
        self.ring = ring
        clean = {}
        for m, c in (terms or {}).items():
            c = ring.normalize(c)
            if c:
                clean[m] = c
        self.terms = clean

    # construction -------------------------------------------------------
    @classmethod
    def var(cls, v: Hashable, ring: RingSpec = ZZ, exp: int = 1) -> "MPoly":
        return cls({((v, exp),) if exp else (): 1}, ring)

    @classmethod
    def const(cls, c, ring: RingSpec = ZZ) -> "MPoly":
        return cls({(): c}, ring)

    @classmethod
    def monomial(cls, exps: Mapping, coeff=1, ring: RingSpec = ZZ) -> "MPoly":
        return cls({tuple(sorted((v, e) for v, e in exps.items() if e)): coeff}, ring)

    def _wrap(self, terms) -> "MPoly":
        return MPoly(terms, self.ring)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch {self.ring} vs {other.ring}")
            return other
        return MPoly.const(other, self.ring)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = self.ring.normalize(other)
            return self._wrap({m: v * c for m, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.const(1, self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = self._coerce(other)
            except (ValueError, TypeError):
                return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure ----------------------------------------------------------
    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({_mono_degree(m) for m in self.terms}) <= 1

    def homogeneous_parts(self) -> dict[int, "MPoly"]:
        parts: dict[int, dict] = {}
        for m, c in self.terms.items():
            parts.setdefault(_mono_degree(m), {})[m] = c
        return {d: self._wrap(t) for d, t in parts.items()}

    def constant_term(self):
        return self.terms.get((), self.ring.zero())

    def coefficient(self, exps: Mapping):
        key = tuple(sorted((v, e) for v, e in exps.items() if e))
        return self.terms.get(key, self.ring.zero())

    def change_ring(self, ring: RingSpec) -> "MPoly":
        return MPoly(self.terms, ring)

    def map_variables(self, f: Callable) -> "MPoly":
        """Apply the ring map X_v -> X_{f(v)} (variables may be identified)."""
        out: dict = {}
        for m, c in self.terms.items():
            d: dict = {}
            for v, e in m:
                w = f(v)
                d[w] = d.get(w, 0) + e
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c
        return self._wrap(out)

    def evaluate(self, point: Mapping | Callable):
        """Evaluate at numeric values; `point` maps variables to numbers."""
        get = point if callable(point) else point.__getitem__
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * get(v) ** e
            total += t
        return total

    def partial(self, v) -> "MPoly":
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c * e
        return self._wrap(out)

    def leading_term(self):
        """Largest monomial in graded-lex order on sorted variables."""
        vs = sorted(self.variables())
        return max(self.terms.items(), key=lambda mc: _grlex_key(mc[0], vs))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (-_mono_degree(mc[0]), mc[0])):
            mono = "*".join(f"{_vname(v)}^{e}" if e > 1 else _vname(v) for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    # serialization ------------------------------------------------------
    def to_json(self, variables: list | None = None) -> dict:
        vs = variables if variables is not None else sorted(self.variables(), key=repr)
        index = {v: i for i, v in enumerate(vs)}
        terms = []
        for m, c in sorted(self.terms.items(), key=lambda mc: repr(mc[0])):
            vec = [0] * len(vs)
            for v, e in m:
                vec[index[v]] = e
            terms.append([vec, str(c)])
        return {"ring": str(self.ring), "variables": [_jsonable(v) for v in vs], "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> "MPoly":
        ring = RingSpec.parse(data.get("ring", "Z"))
        vs = [_from_jsonable(v) for v in data["variables"]]
        terms = {}
        for vec, c in data["terms"]:
            key = tuple(sorted((vs[i], e) for i, e in enumerate(vec) if e))
            terms[key] = ring.from_str(str(c))
        return cls(terms, ring)


def _jsonable(v):
    return list(v) if isinstance(v, tuple) else v


def _from_jsonable(v):
    return tuple(_from_jsonable(x) for x in v) if isinstance(v, list) else v


def _vname(v) -> str:
    if isinstance(v, int):
        return f"X{v}"
    if isinstance(v, tuple):
        return "X" + "_".join(map(str, v))
    return str(v)


def _grlex_key(m: Monomial, vs: list):
    d = dict(m)
    return (_mono_degree(m), tuple(d.get(v, 0) for v in vs))


# ---------------------------------------------------------------------------
# symmetric bases


def default_variables(k: int) -> list[int]:
    return list(range(1, k + 1))


def elementary(w: int, k: int, variables: list | None = None, ring: RingSpec = ZZ) -> MPoly:
    if not 0 <= w <= k:
        raise ValueError(f"e_{w} undefined in {k} variables")
    vs = variables if variables is not None else default_variables(k)
    terms = {tuple((v, 1) for v in sorted(c)): 1 for c in combinations(vs, w)}
    return MPoly(terms, ring)


def complete(d: int, k: int, variables: list | None = None, ring: RingSpec = ZZ) -> MPoly:
    vs = variables if variables is not None else default_variables(k)
    out = {}

    def rec(i, left, acc):
        if i == len(vs) - 1:
            m = acc + ([(vs[i], left)] if left else [])
            out[tuple(sorted(m))] = 1
            return
        for e in range(left + 1):
            rec(i + 1, left - e, acc + ([(vs[i], e)] if e else []))

    if not vs:
        return MPoly.const(1 if d == 0 else 0, ring)
    rec(0, d, [])
    return MPoly(out, ring)


def vandermonde(variables: list, ring: RingSpec = ZZ) -> MPoly:
    out = MPoly.const(1, ring)
    for i, j in combinations(range(len(variables)), 2):
        out = out * (MPoly.var(variables[i], ring) - MPoly.var(variables[j], ring))
    return out


def _det_monomial_matrix(exps: list[int], variables: list, ring: RingSpec) -> MPoly:
    """det(X_i^{exps[j]}) expanded over permutations (alternant)."""
    k = len(variables)
    terms: dict = {}
    for perm in permutations(range(k)):
        sign = _perm_sign(perm)
        d = {}
        for i in range(k):
            e = exps[perm[i]]
            if e:
                d[variables[i]] = e
        key = tuple(sorted(d.items()))
        terms[key] = terms.get(key, 0) + sign
    return MPoly(terms, ring)


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


_SCHUR_CACHE: dict = {}


def schur(lam: Iterable[int], k: int, variables: list | None = None, ring: RingSpec = ZZ) -> MPoly:
    """Bialternant Schur polynomial in k variables."""
    lam = Partition(lam)
    if len(lam) > k:
        raise ValueError(f"{tuple(lam)} has more than {k} parts")
    key = (tuple(lam), k)
    base = _SCHUR_CACHE.get(key)
    if base is None:
        vs = default_variables(k)
        exps = [lam.part(j) + k - j for j in range(1, k + 1)]
        num = _det_monomial_matrix(exps, vs, ZZ)
        base = divide_exact(num, vandermonde(vs, ZZ))
        _SCHUR_CACHE[key] = base
    out = base
    if variables is not None:
        mapping = dict(zip(default_variables(k), variables))
        out = out.map_variables(mapping.__getitem__)
    return out.change_ring(ring) if ring != ZZ else out


def is_symmetric(p: MPoly, variables: list) -> bool:
    if len(variables) < 2:
        return True
    for i in range(len(variables) - 1):
        a, b = variables[i], variables[i + 1]
        swap = {a: b, b: a}
        if p.map_variables(lambda v: swap.get(v, v)) != p:
            return False
    return True


def expand_in_schur(p: MPoly, k: int, variables: list | None = None) -> dict[Partition, object]:
    """Coefficients c_lambda with p = sum c_lambda s_lambda (leading-term peeling)."""
    vs = variables if variables is not None else default_variables(k)
    if len(vs) != k:
        raise ValueError("need exactly k variables")
    extra = p.variables() - set(vs)
    if extra:
        raise ValueError(f"polynomial involves foreign variables {sorted(extra, key=repr)}")
    if not is_symmetric(p, vs):
        raise ValueError("polynomial is not symmetric")
    out: dict[Partition, object] = {}
    rest = p
    order = list(vs)
    while rest:
        m, c = max(rest.terms.items(), key=lambda mc: _grlex_key(mc[0], order))
        d = dict(m)
        lam = Partition(sorted((d.get(v, 0) for v in order), reverse=True))
        out[lam] = p.ring.normalize(out.get(lam, 0) + c)
        rest = rest - schur(lam, k, vs, p.ring) * c
    return {lam: c for lam, c in out.items() if c}


def from_schur(coeffs: Mapping, k: int, variables: list | None = None, ring: RingSpec = ZZ) -> MPoly:
    out = MPoly({}, ring)
    for lam, c in coeffs.items():
        out = out + schur(lam, k, variables, ring) * c
    return out


# ---------------------------------------------------------------------------
# nabla and friends


def nabla(p: MPoly, variables: Iterable | None = None) -> MPoly:
    """Sum of first partials over `variables` (default: every variable)."""
    if variables is None:
        out: dict = {}
        for m, c in p.terms.items():
            for i, (v, e) in enumerate(m):
                if e == 1:
                    key = m[:i] + m[i + 1:]
                else:
                    key = m[:i] + ((v, e - 1),) + m[i + 1:]
                out[key] = out.get(key, 0) + c * e
        return MPoly(out, p.ring)
    out = MPoly({}, p.ring)
    for v in variables:
        out = out + p.partial(v)
    return out


def nabla_power(p: MPoly, n: int) -> MPoly:
    for _ in range(n):
        p = nabla(p)
    return p


def substitute_variables(p: MPoly, s: Mapping) -> MPoly:
    """Ring map X_i -> Y_{s(i)}; s must be total on the variables of p."""
    missing = p.variables() - set(s)
    if missing:
        raise KeyError(f"no assignment for {sorted(missing, key=repr)}")
    return p.map_variables(s.__getitem__)


def divide_exact(p: MPoly, d: MPoly) -> MPoly:
    """Return q with p = q*d, or raise NotDivisible."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    vs = sorted(p.variables() | d.variables(), key=repr)
    key = lambda mc: _grlex_key(mc[0], vs)
    lm, lc = max(d.terms.items(), key=key)
    ring = p.ring
    inv = None
    if not ring.is_unit(lc):
        inv = None
    else:
        inv = ring.inverse(lc)
    ld = dict(lm)
    quot: dict = {}
    rest = p
    while rest:
        m, c = max(rest.terms.items(), key=key)
        dm = dict(m)
        qexp = {}
        for v in set(dm) | set(ld):
            e = dm.get(v, 0) - ld.get(v, 0)
            if e < 0:
                raise NotDivisible("leading monomial not divisible")
            if e:
                qexp[v] = e
        if inv is not None:
            qc = ring.normalize(c * inv)
        else:
            if c % lc:
                raise NotDivisible("leading coefficient not divisible")
            qc = c // lc
        qm = tuple(sorted(qexp.items()))
        quot[qm] = quot.get(qm, 0) + qc
        rest = rest - d * MPoly({qm: qc}, ring)
    return MPoly(quot, ring)
