"""Laurent/window series arithmetic, norms, reduction."""

import random

import pytest

from soliton.errors import NotIntegral
from soliton.padic import INF, make_field
from soliton.series import (LaurentSeries, NEG_INF, WindowSeries, ZSeries, arith,
                            degree_norm, reduce_mod_p)

Q11 = make_field(11, 1, None, 24)


def L(coeffs, floor=NEG_INF):
    return LaurentSeries.from_ints(Q11, coeffs, floor)


def test_polynomial_product():
    a = L({1: 1, 0: 1})       # T + 1
    b = L({1: 1, 0: -1})      # T - 1
    c = arith(a, b, "mul")
    assert c.coeff(2).eq_at_precision(Q11.one())
    assert c.coeff(0).eq_at_precision(Q11.from_int(-1))
    assert c.coeff(1).is_zero()


def test_monic_degree_d_element():
    d = 7
    a = L({d: 1, d - 1: 3})   # T^d (1 + 3 T^-1), |3| <= 1
    deg, nv = degree_norm(a)
    assert deg == d and nv == 0


def test_degree_norm_examples():
    a = L({3: 11, 1: 1})
    deg, nv = degree_norm(a)
    assert deg == 3 and nv == 0
    r = reduce_mod_p(a)
    assert r.deg() == 1
    z = L({})
    assert degree_norm(z) == (None, INF)


def test_reduce_mod_p_examples():
    a = L({2: 1, 1: 11, 0: 3})
    r = reduce_mod_p(a)
    assert r.deg() == 2 and sorted(r.coeffs) == [0, 2]
    bad = LaurentSeries(Q11, {1: Q11.from_rational("1/11")})
    with pytest.raises(NotIntegral):
        reduce_mod_p(bad)


def test_reduce_is_homomorphism_random():
    rng = random.Random(5)
    for _ in range(20):
        a = L({e: rng.randrange(-50, 50) for e in range(-3, 4)})
        b = L({e: rng.randrange(-50, 50) for e in range(-3, 4)})
        lhs = reduce_mod_p(a.mul(b))
        rhs = reduce_mod_p(a).mul(reduce_mod_p(b))
        assert {e for e in lhs.coeffs} == {e for e in rhs.coeffs}
        for e in lhs.coeffs:
            assert lhs.coeff(e).eq_at_precision(rhs.coeff(e))
        s_l = reduce_mod_p(a.add(b))
        s_r = reduce_mod_p(a).add(reduce_mod_p(b))
        for e in set(s_l.coeffs) | set(s_r.coeffs):
            assert s_l.coeff(e).eq_at_precision(s_r.coeff(e))


def test_norm_submultiplicative_random():
    rng = random.Random(9)
    for _ in range(20):
        a = L({e: rng.randrange(1, 11 ** 3) * 11 ** rng.randrange(0, 3)
               for e in range(-2, 3)})
        b = L({e: rng.randrange(1, 11 ** 3) * 11 ** rng.randrange(0, 3)
               for e in range(-2, 3)})
        prod = a.mul(b)
        if not prod.is_zero():
            assert prod.norm_val() >= a.norm_val() + b.norm_val()


def test_deg_additive_when_leads_multiply_to_unit():
    a = L({4: 3, 0: 1})
    b = L({2: 5, -1: 7})
    assert a.mul(b).deg() == 6


def test_floor_tracking_on_products():
    a = L({0: 1, -1: 2}, floor=-1)   # tail truncated below -1
    b = L({5: 1, 4: 1}, floor=4)
    prod = a.mul(b)
    assert prod.floor == max(-1 + 5, 4 + 0)


def test_zseries_mul_matches_schoolbook():
    rng = random.Random(2)
    mod = 11 ** 24
    for _ in range(15):
        a = ZSeries(mod, {e: rng.randrange(mod) for e in range(-4, 5)}, -4)
        b = ZSeries(mod, {e: rng.randrange(mod) for e in range(-3, 6)}, -3)
        prod = a.mul(b)
        # schoolbook on the guaranteed window
        for n in range(prod.floor, 12):
            acc = 0
            for e, c in a.coeffs.items():
                acc += c * b.coeffs.get(n - e, 0)
            assert prod.coeffs.get(n, 0) == acc % mod


def test_zseries_inverse():
    mod = 11 ** 24
    x = ZSeries(mod, {5: 1, 0: 4, -2: 7}, NEG_INF)
    xi = x.inv(-30)
    prod = x.mul(xi, floor=-20)
    assert prod.coeffs.get(0) == 1
    assert all(c == 0 for e, c in prod.coeffs.items() if e != 0 and e >= -20)


def test_zseries_stride_sparse():
    mod = 11 ** 10
    a = ZSeries(mod, {10: 1, 5: 2, 0: 3}, NEG_INF)
    b = ZSeries(mod, {20: 4, 15: 5}, NEG_INF)
    prod = a.mul(b)
    assert set(prod.coeffs) <= {30, 25, 20, 15}


def test_window_product_convolution_oracle():
    rng = random.Random(4)
    a = WindowSeries(Q11, -10, 10,
                     {e: Q11.from_int(rng.randrange(1, 100)) for e in range(-10, 11)})
    b = WindowSeries(Q11, -10, 10,
                     {e: Q11.from_int(rng.randrange(1, 100)) for e in range(-10, 11)})
    prod = a.mul(b)
    conv0 = Q11.zero()
    for e in range(-10, 11):
        conv0 = conv0 + a.coeff(e) * b.coeff(-e)
    assert prod.coeff(0).eq_at_precision(conv0)
    assert prod.norm_bound() >= a.norm_bound() + b.norm_bound()


def test_window_exact_zone_one_sided():
    # ascending loop (zero below 0) times a Laurent piece (zero above deg)
    h = WindowSeries(Q11, 0, 6, {e: Q11.from_int(e + 1) for e in range(7)},
                     zero_below=True)
    v = WindowSeries(Q11, -5, 3, {e: Q11.from_int(2) for e in range(-5, 4)},
                     zero_above=True)
    prod = h.mul(v)
    # pollution: h truncated above -> n > 6 + (-5); v truncated below -> n < -5 + 6
    assert prod.exact_hi == 6 - 5
    assert prod.exact_lo == -5 + 6
