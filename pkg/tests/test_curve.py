"""Curve models: expansions, gap data, Stohr-Viana, Hermite, Hasse-Witt."""

from fractions import Fraction
from math import comb

import pytest

from soliton.curve import (CurveModel, affine_ring, basis_dict, expand_at_basepoint,
                           hasse_witt, hermite_basis, krichever_subspace,
                           sheaf_gap_sequence, stohr_viana_matrix,
                           sv_reconstruction_ok)
from soliton.errors import BadReduction, NotOnCurve, SmallPrime, SupportCollision
from soliton.grassmann import classify_integrality
from soliton.padic import hensel_lift, make_field

K11 = make_field(11, 1, None, 24)


@pytest.fixture(scope="module")
def canonical():
    return CurveModel(K11, 5, [((0, 1), 2), ((-1, 1), 4)],
                      tag="fermat-quotient", auto_order=5)


def oracle_gaps(d, a, j):
    b = d + 1 - a
    out = []
    for i in range(d):
        v = (Fraction(i * a + j, d) % 1 + Fraction(i * b - j, d) % 1
             - Fraction(i, d) % 1)
        if v == 1:
            out.append(i)
    return tuple(out)


def test_genus_and_validation(canonical):
    assert canonical.genus == 2
    with pytest.raises(BadReduction):
        # branch roots collide mod 11: x^2 (x-11)^4 has a double root mod p
        CurveModel(K11, 5, [((0, 1), 2), ((-11, 1), 4)])


def test_expansion_congruences(canonical):
    exp = expand_at_basepoint(canonical, 30)
    assert exp["x"].deg() == 5 and exp["y"].deg() == 6
    assert exp["x_congruence_ok"] and exp["y_equals_Tx"]
    # delta-eigenweights: x invariant, y of weight 1
    assert exp["x_weight"] == 0 and exp["y_weight"] == 1


def test_affine_ring_canonical(canonical):
    A, gd = affine_ring(canonical, 36)
    assert gd.gaps == (1, 2) and gd.mu == (1, 2)
    assert A.index == -1 and A.partition == (2,)
    cls, Ared = classify_integrality(A, strict_evidence={"gap_equality": True})
    assert cls == "strict"
    assert A.strict_evidence["tier"] == "theorem-backed"


def test_gap_oracle_d5_d7():
    K29 = make_field(29, 1, None, 12)
    for d, Kd in ((5, K11), (7, K29)):
        for a in range(2, d):
            C = CurveModel(Kd, d, [((0, 1), a), ((-1, 1), d + 1 - a)],
                           tag="fermat-quotient", auto_order=d)
            _, gd = affine_ring(C, 4 * C.genus + 8)
            assert gd.gaps == oracle_gaps(d, a, 0), (d, a)


def test_krichever_twists_match_oracle(canonical):
    for j in range(1, 5):
        V = krichever_subspace(canonical, [(0, j), (1, -j)], 24)
        assert sheaf_gap_sequence(V, 2 * canonical.genus + 2) == oracle_gaps(5, 2, j)
        assert V.index == 1 - canonical.genus


def test_krichever_degenerate_cases(canonical):
    with pytest.raises(SupportCollision):
        krichever_subspace(canonical, [("infinity", 1)], 20)


def test_stohr_viana_binomials(canonical):
    e1, _ = stohr_viana_matrix(canonical, 11)
    assert e1[0][0] == comb(8, 2) == 28
    assert e1[1][1] == comb(17, 4)        # second diagonal component
    assert e1[0][1] == 0 and e1[1][0] == 0
    e2, _ = stohr_viana_matrix(canonical, 121)
    assert e2[0][0] == comb(96, 24) % K11.pN
    assert e2[1][1] == comb(193, 48) % K11.pN


def test_stohr_viana_m1_identity(canonical):
    e, _ = stohr_viana_matrix(canonical, 1)
    assert e == [[1, 0], [0, 1]]


def test_sv_reconstruction(canonical):
    for m in (3, 11):
        assert sv_reconstruction_ok(canonical, m)


def test_sv_entries_integral(canonical):
    # strict integrality forces every entry and tail coefficient into O_K
    _, parts = stohr_viana_matrix(canonical, 11)
    for part in parts:
        assert all(isinstance(c, int) for _, c in part["a_comb"])


def test_hermite_vs_decomposition(canonical):
    _, gd = affine_ring(canonical, 36)
    herm = hermite_basis(canonical, 70)
    assert herm[0][1] == 1 and herm[0][2] == 0
    assert herm[1][1] == 0 and herm[1][2] == 1
    for m in range(1, 9):
        e, _ = stohr_viana_matrix(canonical, m)
        for i in range(2):
            for j in range(2):
                assert herm[i][m * gd.mu[j]] % K11.pN == e[i][j] % K11.pN, (m, i, j)
    assert herm[0][11] % K11.pN == 28


def test_hasse_witt_canonical(canonical):
    hw = hasse_witt(canonical, kmax=2)
    assert hw.matrix[0][0] == (28 % 11,) and hw.matrix[1][1] == (comb(17, 4) % 11,)
    assert hw.ordinary and hw.product_rule_ok


def test_hasse_witt_small_prime():
    K3 = make_field(3, 1, None, 8)
    C = CurveModel(K3, 5, [((0, 1), 2), ((-1, 1), 4)])
    with pytest.raises(SmallPrime):
        hasse_witt(C)


def test_x5x_family():
    K17 = make_field(17, 1, None, 16)
    C = CurveModel(K17, 2, [((0, 1), 1), ((1, 0, 0, 0, 1), 1)],
                   tag="hyperelliptic-x5x", auto_order=8)
    assert C.genus == 2
    _, gd = affine_ring(C, 24)
    assert gd.gaps == (1, 3)
    e, _ = stohr_viana_matrix(C, 17)
    assert e[0][0] == comb(8, 2)
    assert e[0][1] == 0 and e[1][0] == 0
    hw = hasse_witt(C, kmax=2)
    assert hw.ordinary and hw.product_rule_ok


def test_l3_families():
    K13 = make_field(13, 1, None, 16)
    C2 = CurveModel(K13, 3, [((1, 0, 0, 0, 1), 1)], tag="superelliptic",
                    auto_order=12)
    assert C2.genus == 3
    _, gd2 = affine_ring(C2, 24)
    assert gd2.gaps == (1, 2, 5)
    e2, _ = stohr_viana_matrix(C2, 13)
    assert e2[0][0] == comb(4, 3)
    K7 = make_field(7, 1, None, 16)
    C3 = CurveModel(K7, 3, [((0, 1), 2), ((1, 0, 1), 1)], tag="superelliptic",
                    auto_order=6)
    assert C3.genus == 2
    _, gd3 = affine_ring(C3, 24)
    assert gd3.gaps == (1, 2)
    e3, _ = stohr_viana_matrix(C3, 7)
    # binom(b m, (2b-1) m / 2) with m = (p-1)/l = 2, b = 1
    assert e3[0][0] == comb(2, 1) == 2


def test_affine_base_point():
    one = K11.one()
    y0 = hensel_lift([K11.from_int(-34), K11.zero(), one], K11.from_int(1))
    y0_int = y0.u[0] % K11.pN
    C = CurveModel(K11, 2, [((0, 1), 1), ((1, 0, 0, 0, 1), 1)],
                   base_point=(2, y0_int), tag="affine-base")
    assert C.genus == 2
    A, gd = affine_ring(C, 30)
    assert gd.gaps == (1, 2)
    assert A.partition == (2,)
    assert sv_reconstruction_ok(C, 5)
    hw = hasse_witt(C, kmax=2)
    assert hw.ordinary and hw.product_rule_ok
    herm = hermite_basis(C, 40)
    e3, _ = stohr_viana_matrix(C, 3)
    for i in range(2):
        for j in range(2):
            assert herm[i][3 * gd.mu[j]] % K11.pN == e3[i][j] % K11.pN
    cls, _ = classify_integrality(A, strict_evidence={"gap_equality": True})
    assert cls == "strict"


def test_affine_base_point_rejections():
    with pytest.raises(NotOnCurve):
        CurveModel(K11, 2, [((0, 1), 1), ((1, 0, 0, 0, 1), 1)], base_point=(2, 5))
    with pytest.raises(NotOnCurve):
        # x0 = 0 is a branch point
        CurveModel(K11, 2, [((0, 1), 1), ((1, 0, 0, 0, 1), 1)], base_point=(0, 0))


def test_reduction_pipeline_gap_equality(canonical):
    Cbar = canonical.reduce()
    _, gd_bar = affine_ring(Cbar, 24)
    _, gd = affine_ring(canonical, 24)
    assert gd.gaps == gd_bar.gaps
