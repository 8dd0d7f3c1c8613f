"""Maya/partition bijection, hooks, Schur cross-checks."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from soliton.combinat import (MayaDiagram, hook_length, hook_product,
                              hook_schur_value, leq, maya_to_pair, pair_to_maya,
                              partitions_above, partitions_upto, schur, weight)
from soliton.errors import CellOutOfShape, InsufficientCoefficients, ShapeTooLarge
from soliton.padic import make_field

Q11 = make_field(11, 1, None, 24)


def test_maya_examples():
    # M = Z_{>0}
    assert maya_to_pair(MayaDiagram([], [])) == (0, ())
    # M = {0} + Z_{>=2}
    assert maya_to_pair(MayaDiagram([0], [1])) == (0, (1,))
    # M = {0} + Z_{>= g+1}: index 1-g, partition (g)
    for g in (2, 3, 5):
        M = MayaDiagram([0], range(1, g + 1))
        assert maya_to_pair(M) == (1 - g, (g,))


@st.composite
def index_partitions(draw):
    idx = draw(st.integers(-6, 6))
    parts = draw(st.lists(st.integers(1, 8), max_size=6))
    return idx, tuple(sorted(parts, reverse=True))


@settings(max_examples=300, derandomize=True)
@given(index_partitions())
def test_maya_pair_roundtrip(pair):
    idx, kappa = pair
    M = pair_to_maya(idx, kappa)
    assert maya_to_pair(M) == (idx, kappa)


@settings(max_examples=100, derandomize=True)
@given(st.sets(st.integers(-5, 0), max_size=4), st.sets(st.integers(1, 9), max_size=5))
def test_pair_maya_roundtrip(low, gaps):
    M = MayaDiagram(low, gaps)
    idx, kappa = maya_to_pair(M)
    assert pair_to_maya(idx, kappa) == M


def test_hook_lengths():
    # single row: hooks m, m-1, ..., 1
    for m in range(1, 7):
        assert [hook_length((m,), (1, j)) for j in range(1, m + 1)] == \
            list(range(m, 0, -1))
    assert hook_length((1,), (1, 1)) == 1
    assert hook_length((2, 1), (1, 1)) == 3
    with pytest.raises(CellOutOfShape):
        hook_length((2, 1), (2, 2))


def test_schur_small_shapes():
    h = [Q11.one(), Q11.from_int(5), Q11.from_int(7), Q11.from_int(2)]
    assert schur((1,), h).eq_at_precision(h[1])
    assert schur((2,), h).eq_at_precision(h[2])
    # S_(1,1) = h1^2 - h2
    assert schur((1, 1), h).eq_at_precision(h[1] * h[1] - h[2])
    with pytest.raises(InsufficientCoefficients):
        schur((5, 3), h)


def test_hook_schur_value_examples():
    pi = Q11.from_int(11 * 3)
    assert hook_schur_value((1,), pi, 11).eq_at_precision(pi)
    # lambda = (2): hooks {2,1}, value pi^2/2
    v = hook_schur_value((2,), pi, 11)
    assert (v * Q11.from_int(2) - pi * pi).is_zero()
    with pytest.raises(ShapeTooLarge):
        hook_schur_value((11, 1), pi, 11)
    assert hook_schur_value((6, 6), pi, 11).valuation() == 12  # 6+2 <= 11 is fine


def test_schur_equals_hook_formula_for_artin_hasse_like():
    # h_i = pi^i / i! for i < p reproduces the hook-length values
    pi = Q11.from_int(11 * 2)
    h = [Q11.one()]
    fact = 1
    for i in range(1, 9):
        fact *= i
        h.append(pi ** i / Q11.from_int(fact))
    for lam in partitions_upto(6):
        if not lam:
            continue
        assert schur(lam, h).eq_at_precision(hook_schur_value(lam, pi, 11)), lam


def test_partitions_above():
    got = partitions_above((2,), 4)
    assert (2,) in got and (3, 1) in got and (2, 2) in got
    assert all(leq((2,), lam) for lam in got)
    assert (1, 1) not in got


def test_schur_norm_bound_random():
    # |S_lam(h)| <= rho^{|lam|} when |h_i| <= rho^i  (rho = |11|)
    rng = random.Random(13)
    for _ in range(10):
        h = [Q11.one()]
        for i in range(1, 9):
            h.append(Q11.from_int(rng.randrange(1, 11 ** 4) * 11 ** i))
        for lam in partitions_upto(5):
            s = schur(lam, h)
            if not s.is_zero():
                assert s.valuation() >= weight(lam)


def test_hook_product():
    assert hook_product((2,)) == 2
    assert hook_product((2, 1)) == 3  # hooks 3,1,1
