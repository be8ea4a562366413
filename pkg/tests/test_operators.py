import pytest

from foamcalc.diagrams import bundled
from foamcalc.krcomplex import build_complex, homology
from foamcalc.operators import (CharacteristicMismatch, basepoint_map, circles_statespace,
                                composite_check, composite_coefficients, equivariance_check,
                                identity_map, nabla_map, reduced_complex, verify_theorem1,
                                wilson_scalar)
from foamcalc.rings import QQ, RingError, ZZ, mod

O0, O1, O2 = ("o", 0), ("o", 1), ("o", 2)


def test_basepoint_map_is_nilpotent_chain_map():
    C = build_complex(bundled("trefoil_right"), 3)
    X = basepoint_map(C, "p")
    assert X.commutes_with_d() and X.is_homogeneous()
    assert X.bidegree == (0, 2)
    assert X.power(3).is_zero() and not X.power(2).is_zero()
    assert X.compose(identity_map(C)).equals(X)


def test_nabla_needs_matching_characteristic():
    with pytest.raises(CharacteristicMismatch):
        nabla_map(build_complex(bundled("hopf"), 2, QQ))
    with pytest.raises(CharacteristicMismatch):
        nabla_map(build_complex(bundled("hopf"), 3, mod(2)))
    assert nabla_map(build_complex(bundled("hopf"), 3, mod(3))).commutes_with_d()


def test_reduced_complex():
    for ring in (ZZ, QQ, mod(2), mod(3)):
        R = reduced_complex(bundled("trefoil_right"), 3, ring)
        assert homology(R.complex).total_rank() == 3
    R = reduced_complex(bundled("unknot"), 4)
    H = homology(R.complex)
    assert H.groups == {(0, 0): (1, ())}
    with pytest.raises(RingError):
        reduced_complex(bundled("hopf"), 2, mod(4))


@pytest.mark.parametrize("N,verdict", [(2, "Identity"), (3, "Identity"), (4, "Zero"), (5, "Identity")])
def test_composite_on_two_circles(N, verdict):
    res = composite_check(circles_statespace(N, 2), O0, O1, mod(N))
    assert res.verdict == verdict
    assert wilson_scalar(N) == (1 if verdict == "Identity" else 0)


def test_composite_coefficients():
    assert composite_coefficients(3)[0] == wilson_scalar(3)
    assert all(c == 0 for c in composite_coefficients(4))


def test_equivariance_on_three_circles():
    assert equivariance_check(circles_statespace(3, 3), O0, O1, O2, mod(3))["holds"]


def test_basepoint_independence_report():
    rep = verify_theorem1(bundled("hopf"), 2)
    assert rep["passed"]
    assert rep["unreduced dimension"] == 2 * rep["reduced dimension"]
    with pytest.raises(CharacteristicMismatch):
        verify_theorem1(bundled("hopf"), 2, QQ)
