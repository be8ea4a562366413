import os

import pytest

from foamcalc import statespace
from foamcalc.diagrams import bundled
from foamcalc.foam import FoamError, MoyGraph, Web, cap, cup, identity_foam
from foamcalc.moy import moy_polynomial
from foamcalc.rings import quantum_binomial, quantum_integer
from foamcalc.statespace import (ComponentSpace, StateSpace, StateVector, circle_space, induced_map,
                                 pair, spanning_set)

O = ("o", 0)


def test_empty_web_has_rank_one():
    S = StateSpace(Web(3, [], []), {})
    assert S.dim == 1 and S.degree_of(0) == 0


def test_circle_space_and_gram():
    S = StateSpace(Web(3, [], [0]), {})
    assert S.rank() == quantum_integer(3)
    assert [S.degree_of(i) for i in range(S.dim)] == [-2, 0, 2]
    sp = circle_space(1, 3)
    assert [sp.gram(d) for d in sp.degrees()] == [[[-1]], [[-1]], [[-1]]]
    v, w = StateVector.basis(S, 0), StateVector.basis(S, 2)
    assert pair(v, w) == -1 and pair(v, v) == 0


@pytest.mark.parametrize("k,N", [(1, 4), (2, 4), (2, 5), (3, 5)])
def test_higher_circles_match_binomials(k, N):
    assert circle_space(k, N).rank() == quantum_binomial(N, k)


def test_induced_maps_of_cup_cap_identity():
    S0, S1 = StateSpace(Web(3, [], [0]), {}), StateSpace(Web(3, [], []), {})
    assert induced_map(identity_foam(S0.graph), S0, S0) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert induced_map(cap(1, 3, O), S0, S1) == [[0, 0, -1]]
    assert induced_map(cup(1, 3, O), S1, S0) == [[1], [0], [0]]
    with pytest.raises(FoamError):
        induced_map(cap(1, 3), S0, S1)


@pytest.mark.parametrize("N", [2, 3])
def test_resolution_ranks_match_moy(N):
    D = bundled("trefoil_right")
    for v in [(0, 0, 0), (1, 1, 1), (0, 1, 0)]:
        states = D.resolution_states(v)
        S = StateSpace(D.web(N), states)
        assert S.rank() == moy_polynomial(D.web(N).graph(states))
        assert S.dim == S.rank().at_one()


def test_spanning_set_degrees():
    foams = spanning_set(Web(3, [], [0]), {})
    assert sorted(d for _, d in foams) == [-2, 0, 2]


def test_component_space_blocks_unimodular():
    g = MoyGraph(4, circles={0: (2, 1)})
    sp = ComponentSpace(g)
    assert sp.rank() == quantum_binomial(4, 2)
    for d, blk in sp.blocks.items():
        assert len(blk.basis) == sp.expected[d]


def test_disk_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FOAMCALC_CACHE_DIR", str(tmp_path))
    statespace.clear_cache()
    S = StateSpace(bundled("hopf").web(3), bundled("hopf").resolution_states((1, 1)))
    assert os.listdir(tmp_path)
    statespace.clear_cache()
    S2 = StateSpace(bundled("hopf").web(3), bundled("hopf").resolution_states((1, 1)))
    assert S2.rank() == S.rank()
    statespace.clear_cache()
