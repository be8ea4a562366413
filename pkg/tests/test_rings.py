import pytest

from foamcalc.rings import (LaurentQ, RingError, RingSpec, ZZ, determinant, mod, quantum_binomial,
                            quantum_factorial, quantum_integer, smith_invariants, smith_normal_form, matmul)


def test_parse_and_properties():
    assert str(RingSpec.parse("Z")) == "Z"
    assert RingSpec.parse("Q").is_field
    assert mod(5).is_field and not mod(4).is_field
    assert mod(6).characteristic == 6
    assert ZZ.characteristic == 0


@pytest.mark.parametrize("text", ["Z/1", "Z/0", "R", "Z/x"])
def test_bad_rings(text):
    with pytest.raises(RingError):
        RingSpec.parse(text)


def test_modular_arithmetic():
    F7 = mod(7)
    assert F7.inverse(3) == 5
    assert F7.normalize(-1) == 6
    assert not mod(4).is_unit(2)
    with pytest.raises(RingError):
        mod(4).inverse(2)


def test_quantum_numbers():
    assert repr(quantum_integer(3)) == "q^(-2) + 1 + q^2"
    assert quantum_binomial(4, 2).at_one() == 6
    assert quantum_factorial(3) == quantum_integer(2) * quantum_integer(3)
    assert quantum_binomial(5, 0) == LaurentQ.one()


def test_laurent_ops():
    q = LaurentQ.monomial(1)
    assert q + q.bar() == quantum_integer(2)
    assert (q * q).max_exp() == 2
    assert (quantum_integer(4) * quantum_integer(3)).divmod_exact(quantum_integer(2)) == quantum_binomial(4, 2)
    assert LaurentQ.from_json(quantum_integer(4).to_json()) == quantum_integer(4)
    with pytest.raises(RingError):
        quantum_integer(3).divmod_exact(quantum_integer(2))


def test_smith_form():
    assert smith_invariants([[2, 0], [0, 3]]) == (1, 6)
    assert smith_invariants([[2, 4], [6, 8]]) == (2, 4)
    assert smith_invariants([[2, 4], [6, 8]], modulus=2) == ()
    A = [[2, 4], [6, 8]]
    inv, D, U, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    assert determinant([[1, 2], [3, 4]]) == -2


def test_quantum_integer_edge_cases():
    assert quantum_integer(0).is_zero()
    assert repr(quantum_integer(4)) == "q^(-3) + q^(-1) + q + q^3"
    with pytest.raises(ValueError):
        quantum_integer(-1)
