import pytest

from foamcalc.rings import mod
from foamcalc.sympoly import (MPoly, NotDivisible, Partition, complete, divide_exact, elementary,
                              expand_in_schur, from_schur, is_symmetric, nabla, nabla_power,
                              partitions_in_box, schur)

x, y, z = MPoly.var(1), MPoly.var(2), MPoly.var(3)


def test_arithmetic_and_degree():
    p = (x + y) ** 2
    assert p == x * x + x * y * 2 + y * y
    assert p.degree() == 2 and p.is_homogeneous()
    assert p.partial(1) == x * 2 + y * 2
    assert p.evaluate({1: 2, 2: 3}) == 25
    assert MPoly.from_json(p.to_json()) == p


def test_exact_division():
    assert divide_exact(x * x - y * y, x - y) == x + y
    with pytest.raises(NotDivisible):
        divide_exact(x * x + y, x - y)


def test_coefficients_reduce_mod_n():
    assert (x * 3).change_ring(mod(3)).is_zero()


def test_elementary_and_complete():
    assert elementary(2, 2) == x * y
    assert complete(2, 2) == x * x + x * y + y * y
    assert elementary(0, 3) == MPoly.const(1)


def test_schur_polynomials():
    assert schur((1,), 2) == x + y
    assert schur((1, 1), 3) == elementary(2, 3)
    assert schur((2,), 3) == complete(2, 3)
    assert schur((2, 1), 3).degree() == 3
    with pytest.raises(ValueError):
        schur((1, 1, 1, 1), 3)
    assert is_symmetric(schur((3, 1), 3), [1, 2, 3])


def test_expand_in_schur_littlewood_richardson():
    # s_1 * s_1 = s_2 + s_11 and s_1 * s_21 in three variables
    assert expand_in_schur(schur((1,), 2) ** 2, 2) == {(2,): 1, (1, 1): 1}
    got = expand_in_schur(schur((1,), 3) * schur((2, 1), 3), 3)
    assert got == {(3, 1): 1, (2, 2): 1, (2, 1, 1): 1}
    assert from_schur(got, 3) == schur((1,), 3) * schur((2, 1), 3)


def test_partitions_in_box():
    box = partitions_in_box(2, 2)
    assert box == [(), (1,), (1, 1), (2,), (2, 1), (2, 2)]
    assert all(isinstance(b, Partition) for b in box)
    assert Partition((2, 1)).size == 3 and Partition((2, 1)).part(3) == 0
    assert not Partition((3,)).fits_box(2, 2)


def test_nabla_is_a_derivation():
    p, q = x * x * y + z, y * z
    assert nabla(p * q) == nabla(p) * q + p * nabla(q)
    assert nabla((x + y) ** 2) == (x + y) * 4
    assert nabla(MPoly.const(7)).is_zero()
    assert nabla_power(elementary(2, 2), 2) == MPoly.const(2)
