import pytest

from foamcalc.foam import (Foam, FoamError, MoyGraph, cap, compose, cup, disjoint_union, mirror,
                           sphere, theta_foam)
from foamcalc.rings import mod
from foamcalc.rweval import (enumerate_colorings, evaluate, evaluate_constant, evaluate_in_ring,
                             nabla_foam)
from foamcalc.sympoly import MPoly, complete, elementary, schur


@pytest.mark.parametrize("N", [2, 3, 4])
def test_dotted_spheres(N):
    for k in range(N - 1):
        assert evaluate(sphere(1, N, MPoly.var(1, exp=k))).is_zero()
    top = evaluate(sphere(1, N, MPoly.var(1, exp=N - 1)))
    assert top in (MPoly.const(1), MPoly.const(-1))
    assert evaluate(sphere(1, N, MPoly.var(1, exp=N))) == top * elementary(1, N)


def test_sphere_degree_and_higher_label():
    assert sphere(1, 3).degree() == -4
    assert sphere(2, 4).degree() == -8
    assert abs(evaluate_constant(sphere(2, 4, schur((2, 2), 2)))) == 1


def test_theta_foam():
    x, y = MPoly.var((0, 1)), MPoly.var((1, 1))
    assert theta_foam(1, 1, 3).degree() == -6
    assert evaluate(theta_foam(1, 1, 3, x * x * y)) == MPoly.const(1)
    assert evaluate(theta_foam(1, 1, 3, x * y * y)) == MPoly.const(-1)
    assert evaluate(theta_foam(1, 1, 3, x ** 3)).is_zero()
    assert len(enumerate_colorings(theta_foam(1, 1, 3))) == 6


def test_gluing_cup_and_cap_gives_sphere():
    S = compose(cup(1, 3), cap(1, 3))
    assert S.is_closed and S.degree() == sphere(1, 3).degree()
    (fid,) = S.facets
    for k in range(4):
        dotted = S.with_decoration(MPoly.var(S.facet_variables(fid)[0], exp=k))
        assert evaluate(dotted) == evaluate(sphere(1, 3, MPoly.var(1, exp=k)))


def test_mirror_and_union():
    F = sphere(1, 3, MPoly.var(1, exp=2))
    assert evaluate(mirror(F)) == evaluate(F)
    assert evaluate(disjoint_union(F, F)) == evaluate(F) * evaluate(F)


def test_ring_reduction_and_nabla():
    F = sphere(1, 3, MPoly.var(1, exp=3))
    assert evaluate_in_ring(nabla_foam(F), mod(3)) == 0
    assert evaluate_constant(nabla_foam(F)) == -3


def test_json_round_trip():
    T = theta_foam(1, 2, 4, MPoly.var((0, 1), exp=2))
    assert Foam.from_json(T.to_json()).to_json() == T.to_json()


def test_errors():
    with pytest.raises(FoamError):
        evaluate(cup(1, 3))
    with pytest.raises(FoamError):
        cup(1, 3).add_dot(0, 2)
    with pytest.raises(FoamError):
        MoyGraph.from_json({"N": 3, "vertices": [], "edges": [], "circles": [[["o", 0], 4, 1]],
                            "rotation": [], "basepoints": []}).validate()
