from foamcalc import linalg
from foamcalc.rings import QQ, ZZ, mod


def test_sparse_helpers():
    a = {0: {0: 1, 1: 2}, 1: {1: 3}}
    b = {0: {1: 1}}
    assert linalg.compose(a, b) == {0: {1: 3}}
    assert linalg.dense(a, [0, 1], [0, 1]) == [[1, 0], [2, 3]]
    assert linalg.is_zero(linalg.add(a, a, -1))
    assert linalg.is_zero(linalg.reduce_sparse({0: {0: 4}}, 2), 2)


def test_rank_over_rings():
    M = [[2, 4], [1, 2]]
    assert linalg.rank(M, ZZ) == 1
    N = [[2, 0], [0, 3]]
    assert linalg.rank(N, QQ) == 2
    assert linalg.rank(N, mod(2)) == 1
    assert linalg.rank(N, mod(3)) == 1


def test_image_basis_coordinates():
    M = [[2, 0], [0, 2], [2, 2]]
    for ring in (ZZ, QQ, mod(3)):
        img = linalg.ImageBasis(M, 3, ring)
        assert img.rank == 2
        y = [2, 2, 4]
        c = img.coords(y)
        back = [sum(v[i] * x for v, x in zip(img.vectors, c)) for i in range(3)]
        if ring.characteristic:
            back = [b % ring.characteristic for b in back]
            y = [t % ring.characteristic for t in y]
        assert back == y
