from hypothesis import given, settings
from hypothesis import strategies as st

from burnside.groups import make_generators
from burnside.laurent import LaurentPoly
from burnside.matrix import LaurentRing, RingMatrix
from burnside.truncated import (
    TruncatedRing,
    TruncationContext,
    is_in_sigma_power,
    series_coefficients,
    sigma_order,
    to_truncated,
)

from helpers import polys

X = LaurentPoly.var(2, 0)
Y = LaurentPoly.var(2, 1)
T = LaurentPoly.t(2)


def test_substitution_examples():
    assert to_truncated(1 - X, TruncationContext(2, 4)).terms() == {(1, 0, 0): -1}
    assert to_truncated(X ** -1, TruncationContext(2, 3)).terms() == {(0, 0, 0): 1, (1, 0, 0): -1, (2, 0, 0): 1}
    assert to_truncated(T ** -1, TruncationContext(2, 1, 3)).terms() == {(0, 0, 0): 1, (0, 0, 1): -1, (0, 0, 2): 1}


def test_sigma_order_examples():
    ctx = TruncationContext(2, 5)
    assert sigma_order(1 - X, ctx) == 1
    assert sigma_order((1 - X) * (1 - Y), ctx) == 2
    assert sigma_order(X, ctx) == 0
    assert sigma_order(LaurentPoly.zero(2), ctx) == 5


def test_sigma_power_examples():
    lam1 = -((1 - Y) ** 2) * (1 - X) ** 0
    assert is_in_sigma_power(lam1, 2)
    assert is_in_sigma_power(-((1 - Y) ** 2) * (1 - X), 3)
    assert not is_in_sigma_power(1 - X, 2)
    assert is_in_sigma_power(LaurentPoly.zero(2), 7)
    # negative exponents: x^-1 - 1 = x^-1 (1 - x) lies in Sigma but not Sigma^2
    assert is_in_sigma_power(X ** -1 - 1, 1) and not is_in_sigma_power(X ** -1 - 1, 2)


def test_generator_series():
    gens = make_generators(2)
    ctx = TruncationContext(2, 4, 4)
    sub = TruncatedRing(ctx.a_only())
    exp = series_coefficients(gens.g[1], ctx)
    M2 = gens.M[1].map_into(sub)
    S = gens.ShiftS.map_into(sub)
    assert exp.term(0) == M2
    assert exp.term(1) == M2 * S
    assert all(exp.term(i) == RingMatrix.scalar(sub, 2, sub.zero()) for i in (2, 3))
    inv = series_coefficients(gens.g_inv[1], ctx)
    Minv = gens.M_inv[1].map_into(sub)
    zero = RingMatrix.scalar(sub, 2, sub.zero())
    assert inv.term(1) == zero - S * Minv
    assert inv.term(2) == S * Minv


def test_identity_word_series():
    ctx = TruncationContext(2, 3, 3)
    exp = series_coefficients("", ctx)
    sub = TruncatedRing(ctx.a_only())
    assert exp.term(0) == RingMatrix.identity(sub, 2)
    assert all(exp.term(i) == RingMatrix.scalar(sub, 2, sub.zero()) for i in (1, 2))


@given(polys(max_exp=2), polys(max_exp=2))
def test_truncation_is_a_homomorphism(f, g):
    ctx = TruncationContext(2, 4, 3)
    assert to_truncated(f * g, ctx) == to_truncated(f, ctx) * to_truncated(g, ctx)
    assert to_truncated(f + g, ctx) == to_truncated(f, ctx) + to_truncated(g, ctx)


@given(polys(max_exp=2, max_terms=4), polys(max_exp=2, max_terms=4))
def test_sigma_order_is_superadditive(f, g):
    ctx = TruncationContext(2, 6)
    assert sigma_order(f * g, ctx) >= min(6, sigma_order(f, ctx) + sigma_order(g, ctx))


@settings(max_examples=60)
@given(polys(max_exp=2, max_terms=4).map(lambda f: f.at_t_one()), st.integers(0, 4))
def test_sigma_power_matches_sigma_order(f, m):
    # clear negative exponents with a unit so the truncated image is exact
    lo = f.min_exponents() if not f.is_zero() else (0, 0, 0)
    g = f.shift(tuple(-min(0, v) for v in lo))
    assert is_in_sigma_power(f, m) == (sigma_order(g, TruncationContext(2, 5)) >= m)


@settings(max_examples=40)
@given(polys(max_exp=2, max_terms=4))
def test_sigma_power_by_exact_division(f):
    # a product of two elements of Sigma lies in Sigma^2 by construction
    g = f.at_t_one() * (1 - X) * (1 - Y)
    assert is_in_sigma_power(g, 2)


def test_exact_matrix_reaches_truncated_ring():
    gens = make_generators(2)
    ctx = TruncationContext(2, 3, 3)
    W = gens.g[0] * gens.g[1] * gens.g_inv[0]
    direct = series_coefficients(W.map_into(TruncatedRing(ctx)), ctx)
    via_exact = series_coefficients(W.map_into(LaurentRing(2)), ctx)
    for i in range(3):
        assert direct.term(i) == via_exact.term(i)
