import random

import flint
import pytest

from chowwitt.linalg import (FpAbGroup, GroupHom, determinant, diagonal, fiber_product,
                             index_of, isomorphic, order_of, smith_normal_form)


def _mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def _random_matrix(rng: random.Random):
    m, n = rng.randint(1, 6), rng.randint(1, 6)
    scale = rng.choice([2, 5, 30, 1000])
    M = [[rng.randint(-scale, scale) for _ in range(n)] for _ in range(m)]
    if rng.random() < 0.3:                      # force rank deficiency
        M.append([sum(r[j] for r in M) for j in range(n)])
    return M


def test_snf_500_random_cases():
    rng = random.Random(20240611)
    for _ in range(500):
        M = _random_matrix(rng)
        U, D, V = smith_normal_form(M)
        assert _mul(_mul(U, M), V) == D
        assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
        d = diagonal(D)
        assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
        nz = [x for x in d if x]
        assert all(x > 0 for x in nz)
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert d[:len(nz)] == nz                 # zeros trail
        S = flint.fmpz_mat(M).snf()
        ref = [abs(int(S[i, i])) for i in range(min(S.nrows(), S.ncols()))]
        assert d == ref


@pytest.mark.parametrize("rels, n, expected", [
    ([[2, 0], [0, 3]], 2, ((6,), 0)),
    ([[4, 6]], 2, ((2,), 1)),
    ([], 3, ((), 3)),
    ([[1, 1, 0]], 3, ((), 2)),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], 3, ((2, 6, 12), 0)),
])
def test_invariants(rels, n, expected):
    assert FpAbGroup(n, rels).invariants() == expected


def test_describe_and_zero():
    G = FpAbGroup.from_invariants([2, 2, 8], 1)
    assert G.describe() == "Z + (Z/2)^2 + Z/8"
    assert FpAbGroup.zero().describe() == "0"
    assert FpAbGroup(1, [[1]]).is_trivial


def test_normal_form_and_equality():
    G = FpAbGroup(2, [[3, 0], [0, 5]])
    assert G.is_zero({0: 6, 1: -10})
    assert G.equal({0: 1}, {0: 4})
    assert not G.equal({0: 1}, {1: 1})


def test_hom_kernel_cokernel_image():
    Z = FpAbGroup(1)
    Z6 = FpAbGroup(1, [[6]])
    f = GroupHom(Z, Z6, [{0: 2}])
    K, incl = f.kernel()
    assert K.invariants() == ((), 1)
    assert Z6.is_zero(f.apply(incl.images[0]))
    C, _ = f.cokernel()
    assert C.invariants() == ((2,), 0)
    im, _ = f.image()
    assert im.invariants() == ((3,), 0)
    assert not f.is_injective() and not f.is_surjective()


def test_compose_and_well_defined():
    Z4 = FpAbGroup(1, [[4]])
    Z2 = FpAbGroup(1, [[2]])
    red = GroupHom(Z4, Z2, [{0: 1}])
    assert red.is_well_defined()
    bad = GroupHom(Z2, Z4, [{0: 1}])
    assert not bad.is_well_defined()
    dbl = GroupHom(Z2, Z4, [{0: 2}])
    assert dbl.compose(red).apply({0: 1}) == {0: 2}


def test_fiber_product_of_rank_maps():
    # Z x_{Z/2} Z is the index-2 sublattice {(a, b): a = b mod 2}
    Z = FpAbGroup(1)
    Z2 = FpAbGroup(1, [[2]])
    f = GroupHom(Z, Z2, [{0: 1}])
    P, pa, pb = fiber_product(f, f)
    assert P.invariants() == ((), 2)
    pairs = [{0: pa.images[i].get(0, 0), 1: pb.images[i].get(0, 0)} for i in range(P.n)]
    assert all((v[0] - v[1]) % 2 == 0 for v in pairs)
    assert index_of(FpAbGroup(2), pairs) == 2


def test_order_and_index():
    G = FpAbGroup(2, [[4, 0]])
    assert order_of(G, {0: 1}) == 4
    assert order_of(G, {0: 2}) == 2
    assert order_of(G, {1: 1}) is None
    assert index_of(G, [{0: 1}, {1: 3}]) == 3


def test_isomorphic_ignores_presentation():
    a = FpAbGroup(2, [[2, 0], [0, 3]])
    b = FpAbGroup(1, [[6]])
    assert isomorphic(a, b)
    assert not isomorphic(a, FpAbGroup(2, [[2, 0], [0, 2]]))


def test_direct_sum_labels():
    a = FpAbGroup(1, [[2]], ["x"])
    b = FpAbGroup(1, [], ["y"])
    s = a.direct_sum(b)
    assert s.labels == ("x", "y")
    assert s.invariants() == ((2,), 1)
