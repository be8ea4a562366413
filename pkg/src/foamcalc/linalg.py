"""Small exact linear algebra over ZZ, QQ and Z/p for chain complexes.

Matrices are dense lists of rows of Python ints.  Sparse operators used by
the complex builders are dicts {column: {row: value}}.
"""

from __future__ import annotations

from fractions import Fraction

from .rings import RingError, RingSpec, smith_invariants, smith_normal_form


def dense(sparse: dict, rows: list, cols: list) -> list[list[int]]:
    """Block of a sparse operator on the given row and column indices."""
    rpos = {r: i for i, r in enumerate(rows)}
    out = [[0] * len(cols) for _ in rows]
    for j, c in enumerate(cols):
        for r, v in sparse.get(c, {}).items():
            i = rpos.get(r)
            if i is not None:
                out[i][j] += v
    return out


def compose(a: dict, b: dict) -> dict:
    """Sparse product a∘b."""
    out = {}
    for j, col in b.items():
        acc: dict = {}
        for k, v in col.items():
            for i, w in a.get(k, {}).items():
                acc[i] = acc.get(i, 0) + w * v
        out[j] = {i: x for i, x in acc.items() if x}
    return out


def add(a: dict, b: dict, s: int = 1) -> dict:
    out = {j: dict(c) for j, c in a.items()}
    for j, col in b.items():
        tgt = out.setdefault(j, {})
        for i, v in col.items():
            tgt[i] = tgt.get(i, 0) + s * v
    return {j: {i: x for i, x in c.items() if x} for j, c in out.items()}


def reduce_sparse(a: dict, n: int) -> dict:
    if not n:
        return a
    return {j: {i: v % n for i, v in c.items() if v % n} for j, c in a.items()}


def is_zero(a: dict, n: int = 0) -> bool:
    return all(not (v % n if n else v) for c in a.values() for v in c.values())


def rank(M: list[list[int]], ring: RingSpec) -> int:
    if not M or not M[0]:
        return 0
    if ring.kind in ("Z", "Q"):
        return len(smith_invariants(M))
    if ring.is_field:
        return len(smith_invariants(M, ring.n))
    raise RingError(f"rank over {ring} is not defined")


def _inverse_mod(M: list[list[int]], p: int) -> list[list[int]]:
    n = len(M)
    A = [[x % p for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        r = next(r for r in range(c, n) if A[r][c])
        A[c], A[r] = A[r], A[c]
        inv = pow(A[c][c], -1, p)
        A[c] = [x * inv % p for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _inverse_unimodular(U: list[list[int]]) -> list[list[int]]:
    n = len(U)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        r = next(r for r in range(c, n) if A[r][c])
        A[c], A[r] = A[r], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [[int(x) for x in row[n:]] for row in A]


class ImageBasis:
    """Basis of the column space of M with coordinates of its elements.

    Over ZZ (also used for QQ) the basis comes from the Smith form, so it is
    a basis of the image lattice.  Over Z/p pivot columns are used.
    """

    def __init__(self, M: list[list[int]], nrows: int, ring: RingSpec):
        self.ring = ring
        self.nrows = nrows
        if not M or not M[0] or nrows == 0:
            self.vectors: list[list[int]] = []
            self._solve = lambda y: []
            return
        if ring.kind in ("Z", "Q"):
            inv, _, U, _ = smith_normal_form(M)
            Ui = _inverse_unimodular(U)
            r = len(inv)
            self.vectors = [[Ui[i][k] * inv[k] for i in range(nrows)] for k in range(r)]

            def solve(y):
                z = [sum(U[k][i] * y[i] for i in range(nrows)) for k in range(r)]
                if any(z[k] % inv[k] for k in range(r)):
                    raise ArithmeticError("vector is not in the image")
                return [z[k] // inv[k] for k in range(r)]

            self._solve = solve
            return
        if not ring.is_field:
            raise RingError(f"images over {ring} are not supported")
        p = ring.n
        A = [[x % p for x in row] for row in M]
        # row-reduce a copy to find pivot columns and pivot rows
        R = [list(row) for row in A]
        piv_cols = []
        r = 0
        for c in range(len(R[0])):
            k = next((i for i in range(r, nrows) if R[i][c]), None)
            if k is None:
                continue
            R[r], R[k] = R[k], R[r]
            inv = pow(R[r][c], -1, p)
            R[r] = [x * inv % p for x in R[r]]
            for i in range(nrows):
                if i != r and R[i][c]:
                    f = R[i][c]
                    R[i] = [(x - f * y) % p for x, y in zip(R[i], R[r])]
            piv_cols.append(c)
            r += 1
        self.vectors = [[A[i][c] for i in range(nrows)] for c in piv_cols]
        # pivot rows of the basis matrix for solving
        B = [[v[i] for v in self.vectors] for i in range(nrows)]
        rows = []
        T = [list(row) for row in B]
        rr = 0
        for c in range(len(piv_cols)):
            k = next(i for i in range(nrows) if i not in rows and T[i][c])
            rows.append(k)
            inv = pow(T[k][c], -1, p)
            T[k] = [x * inv % p for x in T[k]]
            for i in range(nrows):
                if i != k and T[i][c]:
                    f = T[i][c]
                    T[i] = [(x - f * y) % p for x, y in zip(T[i], T[k])]
            rr += 1
        Binv = _inverse_mod([B[i] for i in rows], p)

        def solve_p(y):
            yy = [y[i] % p for i in rows]
            c = [sum(Binv[a][b] * yy[b] for b in range(len(rows))) % p for a in range(len(rows))]
            check = [sum(B[i][a] * c[a] for a in range(len(c))) % p for i in range(nrows)]
            if check != [v % p for v in y]:
                raise ArithmeticError("vector is not in the image")
            return c

        self._solve = solve_p

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def coords(self, y: list[int]) -> list[int]:
        return self._solve(y)
