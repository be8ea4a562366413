"""The acceptance suite: ten exact checks, each returning (ok, detail)."""

from __future__ import annotations

import random
import time
from itertools import product

from . import linalg
from .diagrams import bundled, bundled_names
from .foam import MoyGraph, sphere, theta_foam
from .grassmann import (CircleStates, SchurVector, cup, iso_matrix, nabla_cohomology, nabla_schur_coeffs,
                        nabla_table)
from .khovanov import khovanov_homology
from .krcomplex import BigradedComplex, build_complex, homology
from .moy import moy_polynomial, moy_state_sum
from .operators import (basepoint_map, circles_statespace, composite_check, composite_coefficients,
                        nabla_map, reduced_complex, verify_theorem1, wilson_scalar)
from .rings import QQ, ZZ, RingSpec, determinant, mod, quantum_integer
from .rweval import evaluate, evaluate_constant, nabla_foam
from .skein import skein_polynomial
from .statespace import ComponentSpace, StateSpace, circle_space
from .sympoly import MPoly, expand_in_schur, nabla, partitions_in_box, schur


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def c1_spheres():
    for N in (2, 3, 4, 5):
        for k in range(N):
            v = evaluate_constant(sphere(1, N, MPoly.var(1, exp=k)))
            if v != (-1 if k == N - 1 else 0):
                return False, f"<X^{k} S(1)> = {v} at N={N}"
    for k, N in ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4)):
        top = tuple([N - k] * k)
        for lam in partitions_in_box(k, N - k):
            v = evaluate_constant(sphere(k, N, schur(lam, k)))
            want = (-1) ** (k * (k + 1) // 2) if tuple(lam) == top else 0
            if v != want:
                return False, f"<s_{tuple(lam)} S({k})> = {v} at N={N}"
    return True, "X^k and s_λ spheres"


def _unimodular(space: ComponentSpace) -> bool:
    for d, blk in space.blocks.items():
        if not blk.basis:
            continue
        if blk.pivots is not None:
            I, J = blk.pivots
            if abs(determinant([[blk.gram[i][j] for j in J] for i in I])) != 1:
                return False
        M = space.matrix(blk.basis, blk.dual)
        if any(M[i][j] != int(i == j) for i in range(len(blk.basis)) for j in range(len(blk.basis))):
            return False
    return True


def c2_ranks(Ns=(2, 3, 4)):
    count = 0
    for name in bundled_names():
        D = bundled(name)
        for N in Ns:
            W = D.web(N)
            for v in product((0, 1), repeat=D.n):
                st = D.resolution_states(v)
                S = StateSpace(W, st)
                g = W.graph(st)
                want = moy_polynomial(g)
                if S.rank() != want:
                    return False, f"{name} N={N} v={v}: rank {S.rank()} != {want}"
                if want != moy_state_sum(g):
                    return False, f"{name} N={N} v={v}: rewriting and state sum disagree"
                for p in S.pieces:
                    if not _unimodular(p.space):
                        return False, f"{name} N={N} v={v}: Gram block not unimodular"
                count += 1
    return True, f"{count} resolutions"


def c3_unknot():
    D = bundled("unknot")
    for N in (2, 3, 4, 5):
        H = homology(build_complex(D, N))
        want = {(0, q): (1, ()) for q in range(1 - N, N, 2)}
        if H.groups != want:
            return False, f"N={N}: {H.poincare()}"
        R = homology(reduced_complex(D, N, ZZ).complex)
        if R.groups != {(0, 0): (1, ())}:
            return False, f"reduced N={N}: {R.poincare()}"
    return True, "[N] in h=0; reduced rank 1 at (0,0)"


def trefoil_model_complex(N: int) -> BigradedComplex:
    """R[X]/X^N --N X^{N-1}--> R[X]/X^N --> 0 --> R[X]/X^N, ungraded (q = 0)."""
    gens = {h: [(0, (h, i)) for i in range(N)] for h in (0, 1, 3)}
    gens[2] = []
    diffs = {0: {0: {N - 1: N}}}
    return BigradedComplex(ZZ, gens, diffs, N)


def _summary(H):
    tors = sorted(t for _, ts in H.groups.values() for t in ts)
    return sum(r for r, _ in H.groups.values()), tors


def c4_trefoil():
    D = bundled("trefoil_right")
    for N in (2, 3, 4):
        C = build_complex(D, N)
        for R in (ZZ, QQ, mod(2), mod(3)):
            got, want = _summary(homology(C, R)), _summary(homology(trefoil_model_complex(N), R))
            if got != want:
                return False, f"N={N} over {R}: {got} != {want}"
    C = build_complex(D, 3)
    if homology(C, QQ).total_dimension() != 7 or homology(C, mod(3)).total_dimension() != 9:
        return False, "N=3 dimensions"
    for N in (2, 3):
        for R in (ZZ, QQ, mod(2), mod(3)):
            H = homology(reduced_complex(D, N, R, "p").complex)
            if H.total_dimension() != 3 or any(t for _, t in H.groups.values()):
                return False, f"reduced N={N} over {R}: {H.poincare()}"
    return True, "dims 7 (Q) and 9 (F3) at N=3; reduced R^3"


def c5_khovanov(names=("unknot", "hopf", "trefoil_left", "trefoil_right", "figure_eight")):
    for name in names:
        D = bundled(name)
        K = khovanov_homology(D.mirror())
        H = homology(build_complex(D, 2))
        if {(h, -q): g for (h, q), g in K.groups.items()} != H.groups:
            return False, f"{name}: KR2 {H.poincare()} vs Kh(m) {K.poincare()}"
    return True, ", ".join(names)


def _random_foam(rng: random.Random):
    N = rng.randint(2, 5)
    if rng.random() < 0.5:
        k = rng.randint(1, N)
        vs = list(range(1, k + 1))
        dec = MPoly.const(0)
        for _ in range(rng.randint(1, 3)):
            lam = [rng.randint(0, N - k + 1) for _ in range(k)]
            dec = dec + schur(sorted(lam, reverse=True), k) * rng.randint(-3, 3)
        return sphere(k, N, dec)
    a = rng.randint(1, N - 1)
    b = rng.randint(1, N - a)
    dec = MPoly.const(rng.randint(-2, 2))
    for f, lab in ((0, a), (1, b), (2, a + b)):
        for _ in range(rng.randint(0, 2)):
            vs = [(f, j) for j in range(1, lab + 1)]
            dec = dec * schur([rng.randint(0, 2)], lab, vs) + rng.randint(-1, 1)
    return theta_foam(a, b, N, dec, reverse=rng.random() < 0.5)


def c6_nabla(seed: int = 2026, count: int = 100, diagrams=None):
    rng = random.Random(seed)
    for i in range(count):
        F = _random_foam(rng)
        if evaluate(nabla_foam(F)) != nabla(evaluate(F)):
            return False, f"random foam {i}: <∇F> != ∇<F>"
    checked = 0
    for name in diagrams or bundled_names():
        D = bundled(name)
        for N, R in ((2, mod(2)), (3, mod(3)), (4, mod(2)), (4, mod(4))):
            C = build_complex(D, N, R)
            if not nabla_map(C).commutes_with_d():
                return False, f"{name} N={N} over {R}: ∇ d != d ∇"
            checked += 1
    return True, f"{count} random foams; {checked} complexes"


def c7_composite():
    D = bundled("trefoil_right")
    for N in (2, 3, 4, 5):
        want = "Identity" if _is_prime(N) else "Zero"
        got = str(composite_check(circles_statespace(N, 2), ("o", 0), ("o", 1), mod(N)))
        if got != want:
            return False, f"O1+O1 N={N}: {got}"
        S = StateSpace(D.web(N), D.resolution_states((1, 1, 1)))
        got = str(composite_check(S, D.basepoint_edge("p"), D.basepoint_edge("r"), mod(N)))
        if got != want:
            return False, f"trefoil resolution N={N}: {got}"
    for N in range(2, 13):
        if wilson_scalar(N) != (1 if _is_prime(N) else 0):
            return False, f"Wilson scalar at N={N}"
        cs = composite_coefficients(N)
        if cs[0] != wilson_scalar(N) or any(cs[1:]):
            return False, f"composite coefficients at N={N}: {cs}"
    return True, "Identity for 2,3,5; Zero for 4; Wilson N<=12"


def c8_basepoint_independence(names=None):
    for name in names or bundled_names():
        for P in (2, 3):
            rep = verify_theorem1(bundled(name), P)
            if not rep["passed"]:
                bad = [k for k, v in rep.items() if v is False]
                return False, f"{name} P={P}: {bad}"
    return True, "all bundled links, P=2,3"


def c9_grassmann():
    for k in (2, 3):
        for lam in partitions_in_box(k, 3):
            oracle = expand_in_schur(nabla(schur(lam, k)), k) if lam else {}
            if oracle != nabla_schur_coeffs(lam, k):
                return False, f"∇ s_{tuple(lam)} (k={k})"
    for k, N in ((1, 3), (2, 4), (2, 5), (3, 6)):
        lam = (N - k + 1,)
        if nabla_schur_coeffs(lam, k).get((N - k,)) != N:
            return False, f"boundary coefficient k={k} N={N}"
    for k, N in ((2, 4), (2, 6), (3, 6)):
        for p in (2, 3):
            if N % p:
                continue
            R = mod(p)
            box = partitions_in_box(k, N - k)
            for a, b in product(box, box):
                x, y = SchurVector.basis(a, k, N, R), SchurVector.basis(b, k, N, R)
                lhs = nabla_cohomology(cup(x, y))
                rhs = cup(nabla_cohomology(x), y) + cup(x, nabla_cohomology(y))
                if lhs != rhs:
                    return False, f"Leibniz {tuple(a)}, {tuple(b)} at (k,N)=({k},{N}) over Z/{p}"
    for k, N in ((1, 2), (1, 3), (2, 4), (3, 6)):
        _, A = iso_matrix(k, N)
        _, B = nabla_table(k, N)
        T = CircleStates(k, N)
        S = linalg.dense(T.nabla_matrix(), list(range(T.dim)), list(range(T.dim)))
        SA = linalg.compose(_sp(S), _sp(A))
        AB = linalg.compose(_sp(A), _sp(B))
        if not linalg.is_zero(linalg.add(SA, AB, -1), N):
            return False, f"iso does not intertwine ∇ at (k,N)=({k},{N})"
    return True, "coefficients, boundary N, Leibniz, iso"


def _sp(M):
    return {j: {i: M[i][j] for i in range(len(M)) if M[i][j]} for j in range(len(M[0]) if M else 0)}


def c10_properties():
    # d^2 = 0 and X_p^N = 0
    for name in bundled_names():
        D = bundled(name)
        for N in (2, 3):
            C = build_complex(D, N)
            C.check_d_squared()
            if C.euler_characteristic() != skein_polynomial(D, N):
                return False, f"Euler characteristic of {name} at N={N} differs from the skein polynomial"
            for p in sorted(set(D.basepoints)):
                if not basepoint_map(C, p).power(N).is_zero():
                    return False, f"X_{p}^N != 0 on {name}, N={N}"
                if not basepoint_map(C, p).commutes_with_d():
                    return False, f"X_{p} is not a chain map on {name}"
    # self-adjointness of basepoint operators
    D = bundled("figure_eight")
    for N in (2, 3):
        W = D.web(N)
        for v in product((0, 1), repeat=D.n):
            S = StateSpace(W, D.resolution_states(v))
            idx = list(range(S.dim))
            G = [[S._gram_pair(i, j) for j in idx] for i in idx]
            for p in ("p", "q"):
                X = linalg.dense(S.dot_operator(D.basepoint_edge(p)), idx, idx)
                GX = [[sum(G[i][k] * X[k][j] for k in idx) for j in idx] for i in idx]
                XtG = [[sum(X[k][i] * G[k][j] for k in idx) for j in idx] for i in idx]
                if GX != XtG:
                    return False, f"X_{p} not self-adjoint at v={v}, N={N}"
    # split union: two circles as one graph vs tensor square of one circle
    for N in (2, 3, 4):
        two = ComponentSpace(MoyGraph(N, circles={0: (1, 1), 1: (1, 1)}))
        one = circle_space(1, N)
        if two.rank() != one.rank() * one.rank():
            return False, f"rank of O1+O1 at N={N}"
        (t2,) = two.templates
        f0, f1 = (sl.facet for sl in t2.slots)
        (t1,) = one.templates
        (g,) = t1.slots

        def x1(a):
            return {0: MPoly.var((g.facet, 1), exp=a)}

        for a, b, c, d in product(range(N), repeat=4):
            lhs = two.pair({0: MPoly.monomial({(f0, 1): a, (f1, 1): b})},
                           {0: MPoly.monomial({(f0, 1): c, (f1, 1): d})})
            if lhs != one.pair(x1(a), x1(c)) * one.pair(x1(b), x1(d)):
                return False, f"pairing of O1+O1 does not factor at N={N}"
    for N in (2, 3):
        HL = homology(build_complex(bundled("trefoil_right"), N), QQ).q_poincare()
        HU = homology(build_complex(bundled("trefoil_unknot"), N), QQ).q_poincare()
        if HU != HL * quantum_integer(N):
            return False, f"split union homology at N={N}"
    # universal coefficients
    for name in ("trefoil_right", "figure_eight", "hopf", "trefoil_unknot"):
        for N in (2, 3):
            C = build_complex(bundled(name), N)
            HZ = homology(C)
            for p in (2, 3):
                Hp = homology(C, mod(p))
                for (h, q) in set(Hp.groups) | set(HZ.groups):
                    r = HZ.groups.get((h, q), (0, ()))[0]
                    t0 = sum(1 for t in HZ.groups.get((h, q), (0, ()))[1] if t % p == 0)
                    t1 = sum(1 for t in HZ.groups.get((h + 1, q), (0, ()))[1] if t % p == 0)
                    if Hp.rank(h, q) != r + t0 + t1:
                        return False, f"UCT fails for {name} N={N} p={p} at {(h, q)}"
    return True, "d^2=0, skein Euler characteristic, X^N=0, adjointness, split union, UCT"


def _full_gram(space: ComponentSpace):
    els = space.elements
    return [[space.pair(a[1], b[1]) for b in els] for a in els]


CRITERIA = [
    ("1 sphere relations", c1_spheres),
    ("2 state-space ranks and unimodular Gram blocks", c2_ranks),
    ("3 unknot", c3_unknot),
    ("4 right trefoil", c4_trefoil),
    ("5 N=2 against Khovanov homology of the mirror", c5_khovanov),
    ("6 nabla suite", c6_nabla),
    ("7 composite identity and Wilson scalars", c7_composite),
    ("8 basepoint independence and [P]-factorization", c8_basepoint_independence),
    ("9 Grassmannian", c9_grassmann),
    ("10 property suites", c10_properties),
]


def run_one(i: int) -> tuple[str, bool, str, float]:
    name, fn = CRITERIA[i]
    t = time.time()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, never hide
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return name, ok, detail, time.time() - t


def run_all(jobs: int = 1) -> list[tuple[str, bool, str, float]]:
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(run_one, range(len(CRITERIA))))
    return [run_one(i) for i in range(len(CRITERIA))]
