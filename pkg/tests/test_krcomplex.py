import pytest

from foamcalc.diagrams import DiagramError, LinkDiagram, bundled
from foamcalc.khovanov import khovanov_homology
from foamcalc.krcomplex import BigradedComplex, build_complex, edge_foam, homology, resolve
from foamcalc.moy import moy_polynomial
from foamcalc.rings import QQ, ZZ, LaurentQ, mod, quantum_integer
from foamcalc.skein import skein_polynomial


def _toy(factor, ring=ZZ):
    return BigradedComplex(ring, {0: [(0, None)], 1: [(0, None)]}, {0: {0: {0: factor}}})


def test_homology_of_small_complexes():
    H = homology(_toy(2))
    assert H.groups.get((0, 0), (0, ()))[0] == 0
    assert H.groups[(1, 0)] == (0, (2,))
    assert homology(_toy(2), QQ).total_dimension() == 0
    assert homology(_toy(2), mod(2)).total_dimension() == 2
    assert homology(_toy(0)).total_rank() == 2


def test_resolution_and_edge_foam():
    D = bundled("hopf")
    g = resolve(D, (0, 0), 3)
    assert moy_polynomial(g).at_one() > 0
    F = edge_foam(D, (0, 0), (1, 0), 3)
    assert F.degree() == 1


@pytest.mark.parametrize("name", ["unknot", "unknot_kink", "hopf", "trefoil_right", "figure_eight"])
@pytest.mark.parametrize("N", [2, 3])
def test_d_squared_and_euler_characteristic(name, N):
    D = bundled(name)
    C = build_complex(D, N)
    assert C.check_d_squared()
    assert C.euler_characteristic() == skein_polynomial(D, N)


def test_unknot_is_quantum_integer():
    for N in (2, 3, 4):
        H = homology(build_complex(bundled("unknot"), N))
        assert H.q_poincare() == quantum_integer(N)
        assert {h for h, _ in H.groups} == {0}


def test_kink_invariance():
    for N in (2, 3):
        assert homology(build_complex(bundled("unknot_kink"), N)) == homology(build_complex(bundled("unknot"), N))


def test_trefoil_dimensions():
    C = build_complex(bundled("trefoil_right"), 3)
    assert homology(C, QQ).total_dimension() == 7
    assert homology(C, mod(3)).total_dimension() == 9


def test_composite_coefficients_use_universal_coefficients():
    C = build_complex(bundled("trefoil_right"), 2)
    HZ, H6 = homology(C), homology(C, mod(6))
    torsion = sum(len(t) for _, t in HZ.groups.values())
    assert torsion > 0
    assert H6.total_dimension() == HZ.total_rank() + 2 * torsion


def test_khovanov_oracle_agrees_at_n2():
    for name in ("hopf", "trefoil_left", "figure_eight"):
        D = bundled(name)
        kr = homology(build_complex(D, 2))
        kh = khovanov_homology(D.mirror())
        assert {(h, q): g for (h, q), g in kr.groups.items()} == \
            {(h, -q): g for (h, q), g in kh.groups.items()}


def test_skein_unknot_and_mirror():
    q = LaurentQ.monomial(1)
    assert skein_polynomial(bundled("unknot"), 3) == quantum_integer(3)
    P = skein_polynomial(bundled("trefoil_right"), 2)
    assert skein_polynomial(bundled("trefoil_left"), 2) == P.bar()
    assert P != P.bar() and q != P


def test_bad_diagram():
    with pytest.raises(DiagramError):
        LinkDiagram(pd=[(1, 2, 3, 4)], signs=[1])


def test_stabilized_trefoil_diagram_gives_same_homology():
    for N in (2, 3):
        a = homology(build_complex(bundled("trefoil_right"), N))
        b = homology(build_complex(bundled("trefoil_right_4"), N))
        assert a == b
