import pytest

from foamcalc.grassmann import (CircleStates, SchurVector, cup, iso_matrix, iso_to_statespace,
                                nabla_cohomology, nabla_schur_coeffs, nabla_table)
from foamcalc.operators import CharacteristicMismatch
from foamcalc.rings import determinant, mod


def test_coefficient_formula():
    assert nabla_schur_coeffs((2, 1), 2) == {(1, 1): 3, (2,): 1}
    assert nabla_schur_coeffs((1, 1), 2) == {(1,): 1}
    assert nabla_schur_coeffs((2, 2), 2) == {(2, 1): 2}
    assert nabla_schur_coeffs((), 3) == {}


def test_cup_product_truncates_to_box():
    s1 = SchurVector.basis((1,), 2, 4)
    assert cup(s1, s1) == SchurVector(2, 4, coeffs={(2,): 1, (1, 1): 1})
    top = SchurVector.basis((2, 2), 2, 4)
    assert cup(top, s1).is_zero()


def test_nabla_needs_characteristic_dividing_n():
    x = SchurVector.basis((2, 1), 2, 4, mod(2))
    assert nabla_cohomology(x) == SchurVector(2, 4, mod(2), {(1, 1): 1, (2,): 1})
    with pytest.raises(CharacteristicMismatch):
        nabla_cohomology(SchurVector.basis((1,), 2, 4, mod(3)))


def test_leibniz_in_cohomology():
    R = mod(4)
    a, b = SchurVector.basis((1,), 2, 4, R), SchurVector.basis((1, 1), 2, 4, R)
    assert nabla_cohomology(cup(a, b)) == cup(nabla_cohomology(a), b) + cup(a, nabla_cohomology(b))


@pytest.mark.parametrize("k,N", [(1, 3), (2, 4), (2, 5)])
def test_iso_is_unimodular_and_intertwines_nabla(k, N):
    parts, M = iso_matrix(k, N)
    assert abs(determinant(M)) == 1
    f = iso_to_statespace(k, N)
    assert f.target.dim == len(parts)
    box, T = nabla_table(k, N)
    nab = f.target.nabla_matrix()
    pos = {lam: j for j, lam in enumerate(box)}
    # M * T == nabla_on_states * M
    n = len(box)
    lhs = [[sum(M[i][l] * T[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    rhs = [[sum(nab[l].get(i, 0) * M[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    assert lhs == rhs and pos


def test_circle_states_degrees():
    cs = CircleStates(2, 4)
    assert cs.dim == 6
    assert sorted(cs.degree_of(i) for i in range(cs.dim)) == [-4, -2, 0, 0, 2, 4]
