import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from burnside.ideals import (
    BurnsideParams,
    NotPrimePower,
    RankRestriction,
    UnsaturatedError,
    check_cyclotomic_inclusions,
    coordinates,
    cyclotomic_element,
    lattice_membership,
    lattice_sha256,
    read_lattice_cache,
    saturate_ideal_lattice,
    shift_vector,
)
from burnside.laurent import LaurentPoly
from burnside.lattice import IntegerLattice
from burnside.truncated import TruncationContext

X = LaurentPoly.var(2, 0)
Y = LaurentPoly.var(2, 1)
P2 = BurnsideParams.from_q(2)


def brute_span(q, c, ideal):
    """Span of the images of (1 + u + ... + u^(q-1)) w, and times (1 - x_j) for I(q)Sigma."""
    ctx = TruncationContext(2, c, 1)
    gens = []
    box = range(-c, c + 1)
    for i, j, r, s in itertools.product(box, repeat=4):
        f = cyclotomic_element(LaurentPoly.monomial(2, (i, j, 0)), q) * LaurentPoly.monomial(2, (r, s, 0))
        if ideal == "I":
            gens.append(coordinates(f, ctx))
        else:
            gens += [coordinates(f * (1 - X), ctx), coordinates(f * (1 - Y), ctx)]
    return IntegerLattice.from_generators(ctx.size, gens)


def test_params():
    assert (P2.p, P2.e, P2.phi, P2.ephi) == (2, 1, 1, 1)
    P4 = BurnsideParams.from_q(4)
    assert (P4.p, P4.e, P4.phi, P4.ephi) == (2, 2, 2, 4)
    for bad in (1, 6, 12, 0):
        with pytest.raises(NotPrimePower):
            BurnsideParams.from_q(bad)


def test_rank_restriction():
    P2.check_rank(3)
    with pytest.raises(RankRestriction):
        P2.check_rank(4)
    with pytest.raises(RankRestriction):
        check_cyclotomic_inclusions(P2, rank=4)


def test_cyclotomic_examples():
    assert cyclotomic_element(X, 2) == 1 + X
    assert cyclotomic_element(LaurentPoly.one(2), 3) == LaurentPoly.constant(2, 3)
    assert cyclotomic_element(X * Y ** -1, 2) == 1 + X * Y ** -1
    with pytest.raises(ValueError):
        cyclotomic_element(-X, 2)


def test_q2_lattices():
    I = saturate_ideal_lattice(P2, "I", 2)
    assert I.lattice.basis == ((2, 0, 0), (0, 1, 0), (0, 0, 1))
    IS = saturate_ideal_lattice(P2, "ISigma", 2)
    assert IS.lattice.basis == ((0, 2, 0), (0, 0, 2))
    for m in (2, 3, 5):
        assert saturate_ideal_lattice(P2, "Sigma", 2, m=m).lattice.rank == 0


@pytest.mark.parametrize("q,c", [(2, 3), (3, 3), (2, 4), (4, 3)])
@pytest.mark.parametrize("ideal", ["I", "ISigma"])
def test_saturation_matches_brute_span(q, c, ideal):
    lat = saturate_ideal_lattice(BurnsideParams.from_q(q), ideal, c)
    assert lat.lattice == brute_span(q, c, ideal)


def test_membership_examples():
    I = saturate_ideal_lattice(P2, "I", 2)
    assert lattice_membership(1 - X, I)
    assert not lattice_membership(LaurentPoly.one(2), I)
    assert lattice_membership(LaurentPoly.zero(2), I)
    assert lattice_membership((0, 0, 0), saturate_ideal_lattice(P2, "Sigma", 2, m=1))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("variant", ["include-unit-1", "exclude-unit-1"])
def test_ideal_closure_and_monotonicity(q, variant):
    P = BurnsideParams.from_q(q)
    c = P.ephi + 1
    I = saturate_ideal_lattice(P, "I", c, variant=variant)
    IS = saturate_ideal_lattice(P, "ISigma", c, variant=variant)
    assert IS.lattice.is_sublattice_of(I.lattice)
    ctx = I.ctx
    for lat in (I, IS):
        for row in lat.lattice.basis:
            for beta in ((1, 0), (0, 1)):
                assert lat.lattice.contains(shift_vector(row, beta, ctx))
    bigger = saturate_ideal_lattice(P, "I", c, B=3, variant=variant)
    assert bigger.lattice == I.lattice


def test_sigma_powers_nest():
    ctx_c = 5
    lats = [saturate_ideal_lattice(P2, "Sigma", ctx_c, m=m).lattice for m in range(ctx_c + 1)]
    for a, b in zip(lats[1:], lats):
        assert a.is_sublattice_of(b)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_inclusion_report(q):
    P = BurnsideParams.from_q(q)
    rep = check_cyclotomic_inclusions(P)
    assert rep["sigma_in_I"]
    assert rep["witness_exponents"] is not None and sum(rep["witness_exponents"]) == P.ephi - 1


def test_q4_prime_power_inclusion():
    rep = check_cyclotomic_inclusions(BurnsideParams.from_q(4), j=1, kdeg=3)
    assert rep["p_power"]["holds"] and not rep["p_power"]["vacuous"]


def test_unsaturated_error():
    with pytest.raises(UnsaturatedError) as info:
        saturate_ideal_lattice(BurnsideParams.from_q(3), "I", 4, B_ceiling=1)
    assert info.value.history and info.value.last is not None


def test_cache_round_trip(tmp_path):
    P = BurnsideParams.from_q(3)
    lat = saturate_ideal_lattice(P, "ISigma", 3, cache_dir=str(tmp_path))
    assert lat.cache_path and lat.cache_sha256 == lattice_sha256(lat)
    fields, L, sha = read_lattice_cache(tmp_path / lat.cache_path.split("/")[-1])
    assert L == lat.lattice and sha == lat.cache_sha256 and fields["q"] == "3"
    again = saturate_ideal_lattice(P, "ISigma", 3, cache_dir=str(tmp_path))
    assert again.lattice == lat.lattice and again.history[0][2] == "cache"


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_cyclotomic_multiples_are_members(i, j, r, s):
    I = saturate_ideal_lattice(BurnsideParams.from_q(3), "I", 3)
    f = cyclotomic_element(LaurentPoly.monomial(2, (i, j, 0)), 3) * LaurentPoly.monomial(2, (r, s, 0))
    assert lattice_membership(f, I)
