"""Standard bases, Plucker coordinates, integrality classification, products."""

import random

import pytest

from soliton.combinat import leq, partitions_upto
from soliton.errors import CapTooSmall, DegenerateSpan
from soliton.grassmann import (GrassPoint, classify_integrality, homothety_equal,
                               plucker, standard_basis, subspace_product,
                               tail_intersection_dim)
from soliton.padic import make_field
from soliton.series import LaurentSeries

Q11 = make_field(11, 1, None, 24)


def L(coeffs, floor=-40):
    return LaurentSeries.from_ints(Q11, coeffs, floor)


def full_positive_tail(cap):
    """V with M(V) = Z_{>0}: basis T, T^2, ..., T^cap."""
    return standard_basis([L({k: 1}) for k in range(1, cap + 1)], cap)


def test_standard_basis_examples():
    V = standard_basis([L({2: 1}), L({2: 1, 1: 1}), L({0: 1})] +
                       [L({k: 1}) for k in range(3, 9)], 8)
    assert V.degrees()[:3] == [0, 1, 2]
    assert {0, 1, 2} <= set(V.degrees())
    # {T, 11T} -> {T}
    W = standard_basis([L({1: 1}), L({1: 11})] + [L({k: 1}) for k in range(2, 7)], 6)
    assert W.degrees() == list(range(1, 7))
    assert W.index == 0 and W.partition == ()


def test_standard_basis_idempotent():
    rng = random.Random(1)
    vecs = [L({k: 1, k - 1: rng.randrange(100), k - 3: rng.randrange(100)})
            for k in range(0, 9)]
    V = standard_basis(vecs, 10)
    V2 = standard_basis(V.basis, 10)
    for a, b in zip(V.basis, V2.basis):
        assert a.deg() == b.deg()
        for e in set(a.coeffs) | set(b.coeffs):
            assert a.coeff(e).eq_at_precision(b.coeff(e))


def test_standard_basis_condition_two():
    # v_{i, s_j} = 0 for i > j
    rng = random.Random(2)
    vecs = [L({k: 1, k - 1: rng.randrange(100), 0: rng.randrange(100)})
            for k in (0, 2, 3, 5, 6, 7, 8)]
    V = standard_basis(vecs, 8)
    degs = V.degrees()
    for i, v in enumerate(V.basis):
        for j in range(i):
            assert v.coeff(degs[j]).is_zero()


def test_canonical_maya_shape():
    # basis degrees {0} + Z_{>=3}: index -1, partition (2)
    vecs = [L({0: 1})] + [L({k: 1, k - 3: 5}) for k in range(3, 12)]
    V = standard_basis(vecs, 11)
    assert V.index == -1
    assert V.partition == (2,)


def test_plucker_kappa_is_one_and_lower_vanish():
    vecs = [L({0: 1})] + [L({k: 1, k - 3: 5}) for k in range(3, 14)]
    V = standard_basis(vecs, 13)
    one = plucker(V, V.partition)
    assert one.eq_at_precision(Q11.one())
    for lam in partitions_upto(6):
        if not leq(V.partition, lam):
            assert plucker(V, lam).is_zero(), lam


def test_plucker_full_tail():
    V = full_positive_tail(10)
    assert plucker(V, ()).eq_at_precision(Q11.one())
    for lam in [(1,), (2, 1), (3,)]:
        assert plucker(V, lam).is_zero()


def test_classify_integrality():
    vecs = [L({0: 1})] + [L({k: 1, k - 3: 5}) for k in range(3, 12)]
    V = standard_basis(vecs, 11)
    cls, Vred = classify_integrality(V)
    assert cls == "strict"
    assert Vred.maya == V.maya
    # scale one row by 1/11: bounded, not integral at that row
    bad = [v if v.deg() != 5 else v.scale(Q11.from_rational("1/11"))
           for v in V.basis]
    W = GrassPoint(Q11, bad, 11)
    cls2, Wred = classify_integrality(W)
    assert cls2 in ("integral", "bounded")
    # only finitely many non-unit rows at the bottom -> integral per Def 3.1(2)
    bad2 = [v.scale(Q11.from_rational("1/11")) if v.deg() == 0 else v
            for v in V.basis]
    U = GrassPoint(Q11, bad2, 11)
    cls3, _ = classify_integrality(U)
    assert cls3 == "integral"


def test_saturation_finds_hidden_integral_combinations():
    # v1 = T + 1/11, v2 = T^2 + 1/11: v2 - v1 is integral with degree 2
    v1 = LaurentSeries(Q11, {1: Q11.one(), 0: Q11.from_rational("1/11")})
    v2 = LaurentSeries(Q11, {2: Q11.one(), 0: Q11.from_rational("1/11")})
    tail = [L({k: 1}) for k in range(3, 8)]
    V = GrassPoint(Q11, [v1, v2] + tail, 7)
    cls, Vred = classify_integrality(V)
    assert 2 in Vred.degrees()


def test_subspace_product_unit():
    # V * V = V for the full positive tail semigroup piece with 1 adjoined
    vecs = [L({0: 1})] + [L({k: 1}) for k in range(3, 12)]
    A = standard_basis(vecs, 11)
    AA = subspace_product(A, A)
    assert homothety_equal(A, AA) or \
        [d for d in AA.degrees()] == [d for d in A.degrees() if d <= AA.cap]


def test_tail_intersection_dim():
    vecs = [L({0: 1})] + [L({k: 1, k - 3: 5}) for k in range(3, 12)]
    A = standard_basis(vecs, 11)
    dim0, cert = tail_intersection_dim(A, 0)
    assert dim0 == 1  # constants
    dim1, _ = tail_intersection_dim(A, 1)
    assert dim1 == 1  # gaps at 1 and 2
    dim3, _ = tail_intersection_dim(A, 3)
    assert dim3 == 2


def test_homothety_invariance_of_maya():
    vecs = [L({0: 1})] + [L({k: 1, k - 3: 5}) for k in range(3, 12)]
    A = standard_basis(vecs, 11)
    u = LaurentSeries(Q11, {0: Q11.one(), -1: Q11.from_int(7), -2: Q11.from_int(3)})
    scaled = [v.mul(u) for v in A.basis]
    B = standard_basis(scaled, 11)
    assert homothety_equal(A, B)
    assert B.index == A.index and B.partition == A.partition


def test_degenerate_span():
    z = LaurentSeries(Q11, {3: Q11.zero_at(0)})
    with pytest.raises((DegenerateSpan, CapTooSmall)):
        standard_basis([z], 2)
