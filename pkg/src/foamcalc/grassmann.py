"""Cohomology of the Grassmannian G(k, N) in the Schur basis, with ∇.

Classes are finite sums of σ_λ over partitions in the k x (N-k) box.
Products multiply Schur polynomials and drop partitions leaving the box.
∇ lowers one part of λ; the coefficient is λ_ℓ + k - ℓ.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .operators import CharacteristicMismatch
from .rings import ZZ, RingSpec
from .statespace import StateVector, circle_space, deco_is_zero
from .sympoly import MPoly, Partition, expand_in_schur, partitions_in_box, schur


@dataclass
class SchurVector:
    k: int
    N: int
    ring: RingSpec = ZZ
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for lam, c in self.coeffs.items():
            lam = Partition(lam)
            if not lam.fits_box(self.k, self.N - self.k):
                continue
            c = self.ring.normalize(c)
            if c:
                clean[lam] = c
        self.coeffs = clean

    @classmethod
    def basis(cls, lam, k: int, N: int, ring: RingSpec = ZZ) -> "SchurVector":
        return cls(k, N, ring, {Partition(lam): 1})

    def _same(self, other):
        if (self.k, self.N, self.ring) != (other.k, other.N, other.ring):
            raise ValueError("Schur vectors over different Grassmannians or rings")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, 0) + c
        return SchurVector(self.k, self.N, self.ring, out)

    def __mul__(self, c):
        return SchurVector(self.k, self.N, self.ring, {l: x * c for l, x in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, SchurVector) and (self.k, self.N, self.ring) == (other.k, other.N, other.ring)
                and self.coeffs == other.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set:
        return {2 * lam.size for lam in self.coeffs}

    def polynomial(self) -> MPoly:
        out = MPoly.const(0)
        for lam, c in self.coeffs.items():
            out = out + schur(lam, self.k) * c
        return out


def cup(a: SchurVector, b: SchurVector) -> SchurVector:
    a._same(b)
    out: dict = {}
    for la, ca in a.coeffs.items():
        for lb, cb in b.coeffs.items():
            prod = schur(la, a.k) * schur(lb, a.k)
            for nu, c in expand_in_schur(prod, a.k).items():
                out[nu] = out.get(nu, 0) + ca * cb * c
    return SchurVector(a.k, a.N, a.ring, out)


def nabla_schur_coeffs(lam, k: int) -> dict:
    """d_λ^ν for ν obtained from λ by lowering one part by 1."""
    lam = Partition(lam)
    if len(lam) > k:
        raise ValueError(f"{tuple(lam)} has more than {k} parts")
    out = {}
    for l in range(1, len(lam) + 1):
        parts = list(lam)
        parts[l - 1] -= 1
        if l < len(lam) and parts[l - 1] < parts[l]:
            continue
        out[Partition(parts)] = lam.part(l) + k - l
    return out


def nabla_cohomology(x: SchurVector) -> SchurVector:
    p = x.ring.characteristic
    if p == 0 or x.N % p:
        raise CharacteristicMismatch(f"∇ on H*(G({x.k},{x.N})) needs char(R) dividing {x.N}; got {x.ring}")
    out: dict = {}
    for lam, c in x.coeffs.items():
        for nu, d in nabla_schur_coeffs(lam, x.k).items():
            out[nu] = out.get(nu, 0) + c * d
    return SchurVector(x.k, x.N, x.ring, out)


def nabla_table(k: int, N: int) -> tuple[list, list[list[int]]]:
    """Integer matrix of the coefficient formula on box partitions (columns = source)."""
    box = partitions_in_box(k, N - k)
    pos = {lam: i for i, lam in enumerate(box)}
    M = [[0] * len(box) for _ in box]
    for j, lam in enumerate(box):
        for nu, d in nabla_schur_coeffs(lam, k).items():
            M[pos[nu]][j] += d
    return box, M


class CircleStates:
    """F_N(O^k; R) with the s_λ-decorated discs as distinguished classes."""

    def __init__(self, k: int, N: int, ring: RingSpec = ZZ):
        self.k, self.N, self.ring = k, N, ring
        self.space = circle_space(k, N)
        tpl = self.space.templates[0]
        (slot,) = tpl.slots
        self.variables = [(slot.facet, j) for j in range(1, k + 1)]

    @property
    def dim(self) -> int:
        return len(self.space.elements)

    def degree_of(self, i: int) -> int:
        return self.space.elements[i][0]

    def _gram_pair(self, i: int, j: int) -> int:
        return self.space.pair(self.space.elements[i][1], self.space.elements[j][1])

    def disc(self, poly: MPoly) -> dict:
        """Decoration of the disc by a polynomial in the k facet variables."""
        return {0: poly.map_variables(lambda v: self.variables[v - 1]) if poly.variables() else poly}

    def vector(self, deco: dict, degree: int) -> StateVector:
        cs = self.space.coords(deco, degree)
        idx = [i for i, (d, _, _) in enumerate(self.space.elements) if d == degree]
        return StateVector(self, dict(zip(idx, cs)), degree)

    def nabla_matrix(self) -> dict:
        """∇ on the basis, computed by differentiating decorations (over ZZ)."""
        from .sympoly import nabla
        out = {}
        pos: dict = {}
        for i, (d, _, _) in enumerate(self.space.elements):
            pos.setdefault(d, []).append(i)
        for i, (d, b, _) in enumerate(self.space.elements):
            img = {br: nabla(p) for br, p in b.items()}
            col = {}
            if not deco_is_zero(img):
                for j, c in zip(pos.get(d - 2, []), self.space.coords(img, d - 2)):
                    if c:
                        col[j] = c
            out[i] = col
        return out


def iso_to_statespace(k: int, N: int, ring: RingSpec = ZZ):
    """σ_λ ↦ class of the disc decorated by s_λ; homogeneous of degree -k(N-k)."""
    target = CircleStates(k, N, ring)
    box = partitions_in_box(k, N - k)
    images = {}
    for lam in box:
        d = 2 * lam.size - k * (N - k)
        images[lam] = target.vector(target.disc(schur(lam, k)), d)

    def apply(x: SchurVector) -> list[StateVector]:
        if (x.k, x.N) != (k, N):
            raise ValueError("Schur vector from another Grassmannian")
        return [images[lam] * c for lam, c in x.coeffs.items()]

    apply.target = target
    apply.images = images
    apply.partitions = box
    return apply


def iso_matrix(k: int, N: int) -> tuple[list, list[list[int]]]:
    """Columns: coordinates of the images of σ_λ in the state-space basis."""
    f = iso_to_statespace(k, N)
    dim = f.target.dim
    M = [[0] * len(f.partitions) for _ in range(dim)]
    for j, lam in enumerate(f.partitions):
        for i, c in f.images[lam].coeffs.items():
            M[i][j] = c
    return f.partitions, M
