"""Exact coefficient rings, Laurent polynomials in q, and integer normal forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    """One of ZZ, QQ or Z/n (any n >= 2, composite allowed)."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Z/n"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Z/n" and self.n < 2:
            raise RingError("Z/n requires n >= 2")
        if self.kind != "Z/n" and self.n != 0:
            raise RingError("only Z/n carries a modulus")

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        text = text.strip()
        if text in ("Z", "ZZ"):
            return ZZ
        if text in ("Q", "QQ"):
            return QQ
        if text.startswith("Z/") and text[2:].isdigit():
            return mod(int(text[2:]))
        if text.startswith("F") and text[1:].isdigit():
            return mod(int(text[1:]))
        raise RingError(f"cannot parse ring {text!r}")

    def __str__(self) -> str:
        return f"Z/{self.n}" if self.kind == "Z/n" else self.kind

    @property
    def characteristic(self) -> int:
        return self.n if self.kind == "Z/n" else 0

    @property
    def is_field(self) -> bool:
        if self.kind == "Q":
            return True
        return self.kind == "Z/n" and _is_prime(self.n)

    def normalize(self, value):
        if self.kind == "Z":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise RingError(f"{value} is not an integer")
                return value.numerator
            return int(value)
        if self.kind == "Q":
            return Fraction(value)
        if isinstance(value, Fraction):
            den = value.denominator % self.n
            if gcd(den, self.n) != 1:
                raise RingError(f"{value} has no image in {self}")
            return value.numerator * pow(den, -1, self.n) % self.n
        return int(value) % self.n

    def zero(self):
        return self.normalize(0)

    def one(self):
        return self.normalize(1)

    def add(self, a, b):
        return self.normalize(a + b)

    def mul(self, a, b):
        return self.normalize(a * b)

    def neg(self, a):
        return self.normalize(-a)

    def is_unit(self, a) -> bool:
        if self.kind == "Z":
            return a in (1, -1)
        if self.kind == "Q":
            return a != 0
        return gcd(a, self.n) == 1

    def inverse(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not a unit in {self}")
        if self.kind == "Z":
            return a
        if self.kind == "Q":
            return 1 / Fraction(a)
        return pow(a, -1, self.n)

    def to_str(self, a) -> str:
        return str(a)

    def from_str(self, text: str):
        return self.normalize(Fraction(text))


ZZ = RingSpec("Z")
QQ = RingSpec("Q")


def mod(n: int) -> RingSpec:
    return RingSpec("Z/n", n)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


is_prime = _is_prime


@dataclass(frozen=True)
class Scalar:
    """An element of a RingSpec, always held in canonical form."""

    ring: RingSpec
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.ring.normalize(self.value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other.value
        return self.ring.normalize(other)

    def __add__(self, other):
        return Scalar(self.ring, self.value + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.ring, self.value - self._other(other))

    def __rsub__(self, other):
        return Scalar(self.ring, self._other(other) - self.value)

    def __mul__(self, other):
        return Scalar(self.ring, self.value * self._other(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, -self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ring == other.ring and self.value == other.value
        try:
            return self.value == self.ring.normalize(other)
        except (RingError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.ring, self.ring.inverse(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def to_json(self) -> dict:
        return {"ring": str(self.ring), "value": str(self.value)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Scalar":
        ring = RingSpec.parse(data["ring"])
        return cls(ring, ring.from_str(data["value"]))

    def __repr__(self):
        return f"{self.value} in {self.ring}"


class LaurentQ:
    """Laurent polynomial in q with integer coefficients (sparse)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self.coeffs = {int(e): int(c) for e, c in (coeffs or {}).items() if c}

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentQ":
        return cls({exp: coeff})

    @classmethod
    def one(cls) -> "LaurentQ":
        return cls({0: 1})

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentQ(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQ({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        other = _as_laurent(other)
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentQ(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = LaurentQ.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            other = _as_laurent(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_exp(self) -> int:
        return min(self.coeffs)

    def max_exp(self) -> int:
        return max(self.coeffs)

    def shift(self, k: int) -> "LaurentQ":
        return LaurentQ({e + k: c for e, c in self.coeffs.items()})

    def bar(self) -> "LaurentQ":
        """q -> q^{-1}."""
        return LaurentQ({-e: c for e, c in self.coeffs.items()})

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def __getitem__(self, exp: int) -> int:
        return self.coeffs.get(exp, 0)

    def divmod_exact(self, other: "LaurentQ") -> "LaurentQ":
        """Exact division; raises if `other` does not divide `self`."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        rem = LaurentQ(self.coeffs)
        quot: dict[int, int] = {}
        lead_e = other.max_exp()
        lead_c = other.coeffs[lead_e]
        low = other.min_exp()
        while rem.coeffs:
            e = rem.max_exp()
            c = rem.coeffs[e]
            if c % lead_c or e - lead_e < rem.min_exp() - low:
                raise RingError("inexact Laurent division")
            k = e - lead_e
            quot[k] = c // lead_c
            rem = rem - other * LaurentQ.monomial(k, c // lead_c)
        return LaurentQ(quot)

    def __floordiv__(self, other):
        return self.divmod_exact(_as_laurent(other))

    def to_json(self) -> dict:
        return {str(e): c for e, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentQ":
        return cls({int(e): int(c) for e, c in data.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            if e == 0:
                term = str(c)
            else:
                mono = "q" if e == 1 else f"q^{e}" if e > 0 else f"q^({e})"
                term = mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


def _as_laurent(x) -> LaurentQ:
    if isinstance(x, LaurentQ):
        return x
    if isinstance(x, int):
        return LaurentQ({0: x})
    raise TypeError(f"cannot treat {type(x).__name__} as a Laurent polynomial")


def quantum_integer(k: int) -> LaurentQ:
    """[k] = q^{-(k-1)} + q^{-(k-3)} + ... + q^{k-1}; [0] = 0."""
    if k < 0:
        raise ValueError("quantum integers are defined for k >= 0")
    return LaurentQ({e: 1 for e in range(-(k - 1), k, 2)})


def quantum_factorial(k: int) -> LaurentQ:
    out = LaurentQ.one()
    for i in range(1, k + 1):
        out = out * quantum_integer(i)
    return out


def quantum_binomial(n: int, k: int) -> LaurentQ:
    if n < 0:
        raise ValueError("quantum binomials need n >= 0")
    if k < 0 or k > n:
        return LaurentQ()
    return quantum_factorial(n) // (quantum_factorial(k) * quantum_factorial(n - k))


# ---------------------------------------------------------------------------
# Smith normal form over ZZ


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Iterable[Iterable[int]]):
    """Return (invariants, D, U, V) with U*M*V = D diagonal and d_i | d_{i+1}.

    U and V are unimodular.  Pivots are chosen with minimal absolute value
    to keep entries small.
    """
    D = [list(map(int, row)) for row in matrix]
    m = len(D)
    n = len(D[0]) if m else 0
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row dst += k * row src
        if k:
            rs, rd = D[src], D[dst]
            for c in range(n):
                if rs[c]:
                    rd[c] += k * rs[c]
            us, ud = U[src], U[dst]
            for c in range(m):
                if us[c]:
                    ud[c] += k * us[c]

    def add_col(src, dst, k):  # col dst += k * col src
        if k:
            for row in D:
                if row[src]:
                    row[dst] += k * row[src]
            for row in V:
                if row[src]:
                    row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if not dirty:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # move the smallest remaining entry of row/col t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if D[i][t] and abs(D[i][t]) < best[0]:
                    best = (abs(D[i][t]), i, t)
            for j in range(t + 1, n):
                if D[t][j] and abs(D[t][j]) < best[0]:
                    best = (abs(D[t][j]), t, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    invariants = tuple(D[i][i] for i in range(min(m, n)) if D[i][i])
    return invariants, D, U, V


def smith_invariants(matrix, modulus: int = 0) -> tuple[int, ...]:
    """Nonzero invariant factors only (no transforms); faster than the full form.

    Works on a sparse dict-of-rows copy.  With modulus > 0 the computation is
    done over Z/modulus for a prime modulus and returns a tuple of 1s of
    length equal to the rank.
    """
    rows = []
    for row in matrix:
        r = {j: int(v) for j, v in enumerate(row) if v}
        if modulus:
            r = {j: v % modulus for j, v in r.items() if v % modulus}
        if r:
            rows.append(r)
    return _sparse_invariants(rows, modulus)


def _sparse_invariants(rows: list[dict[int, int]], modulus: int = 0) -> tuple[int, ...]:
    diag = []
    rows = [r for r in rows if r]
    while rows:
        best = None
        for ri, r in enumerate(rows):
            for j, v in r.items():
                key = (1 if modulus else abs(v), len(r))
                if best is None or key < best[0]:
                    best = (key, ri, j)
            if best[0] == (1, 1):
                break
        _, ri, j = best
        prow = rows.pop(ri)
        p = prow[j]
        if modulus:
            inv = pow(p, -1, modulus)
            prow = {c: v * inv % modulus for c, v in prow.items()}
            p = 1
        kept = []
        dirty = False
        for r in rows:
            v = r.get(j)
            if v:
                q = v if modulus else v // p
                for c, pv in prow.items():
                    nv = r.get(c, 0) - q * pv
                    if modulus:
                        nv %= modulus
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
                if j in r:
                    dirty = True
            if r:
                kept.append(r)
        if dirty:
            rows = kept + [prow]
            continue
        # column j is now clean except for prow: column ops only touch prow
        rem = {c: v % p for c, v in prow.items() if c != j and v % p}
        if rem:
            rem[j] = p
            rows = kept + [rem]
            continue
        diag.append(abs(p))
        rows = kept
    return _normalize_invariants(diag, modulus)


def _normalize_invariants(diag: list[int], modulus: int) -> tuple[int, ...]:
    if modulus:
        return tuple(1 for _ in diag)
    # diagonal -> divisibility chain via gcd/lcm swaps
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a * b // g
                    changed = True
        d.sort()
    return tuple(d)


def matmul(A, B):
    n = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * n
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def determinant(M) -> int:
    """Integer determinant by fraction-free elimination (Bareiss)."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
