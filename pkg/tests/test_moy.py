import json

import pytest

from foamcalc.diagrams import bundled, bundled_path
from foamcalc.foam import MoyGraph, SMOOTH, WIDE, Site, Web
from foamcalc.moy import moy_polynomial, moy_rewrite, moy_state_sum
from foamcalc.rings import quantum_binomial, quantum_integer


def test_circles():
    for N in (2, 3, 5):
        g = MoyGraph(N, circles={0: (1, 1)})
        assert moy_rewrite(g) == moy_state_sum(g) == quantum_integer(N)
    g = MoyGraph(4, circles={0: (2, 1)})
    assert moy_rewrite(g) == quantum_binomial(4, 2)


def test_theta_is_digon_times_circle():
    g = Web(3, [Site(0, "l", "r", "l", "r")]).graph({0: WIDE})
    assert moy_polynomial(g) == quantum_integer(2) * quantum_binomial(3, 2)
    assert moy_state_sum(g) == moy_polynomial(g)


@pytest.mark.parametrize("name", ["trefoil_right", "figure_eight", "hopf"])
def test_rewriting_matches_state_sum(name):
    D = bundled(name)
    for N in (2, 3):
        for bits in range(2 ** D.n):
            v = tuple((bits >> c) & 1 for c in range(D.n))
            g = D.web(N).graph(D.resolution_states(v))
            assert moy_rewrite(g) == moy_state_sum(g), (name, N, v)


def test_graph_fixture():
    g = MoyGraph.from_json(json.loads(bundled_path("graph_circle2").read_text()))
    assert repr(moy_polynomial(g)) == "q^(-4) + q^(-2) + 2 + q^2 + q^4"
