import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from burnside.lattice import IntegerLattice, hnf, xgcd

from helpers import combinations_in_box, invariant_factors_by_minors, minor_member, random_lattice


def vectors(m, lo=-6, hi=6):
    return st.tuples(*[st.integers(lo, hi)] * m)


def generator_sets(m, max_n=4):
    return st.lists(vectors(m), min_size=1, max_size=max_n)


def test_xgcd():
    for a, b in itertools.product(range(-12, 13), repeat=2):
        g, s, t = xgcd(a, b)
        assert g >= 0 and s * a + t * b == g
        assert (a % g == 0 and b % g == 0) if g else a == b == 0


def test_zero_lattice():
    Z = IntegerLattice.zero(3)
    assert Z.rank == 0 and Z.contains((0, 0, 0)) and not Z.contains((0, 1, 0))
    assert Z.quotient_structure() == (3, ())


def test_small_example():
    L = IntegerLattice.from_generators(3, [(2, 4, 6), (0, 3, 3)])
    assert L.basis == hnf(3, [(0, 3, 3), (2, 4, 6)])
    assert L.contains((2, 7, 9)) and not L.contains((1, 0, 0))
    assert L.quotient_structure() == (1, (6,))


@given(generator_sets(3))
def test_hnf_is_canonical(gens):
    L = IntegerLattice.from_generators(3, gens)
    shuffled = list(gens)
    random.Random(len(gens)).shuffle(shuffled)
    # unimodular change of generators keeps the lattice
    mixed = shuffled + [tuple(a + b for a, b in zip(shuffled[0], shuffled[-1]))]
    assert IntegerLattice.from_generators(3, mixed) == L
    pivots = L.pivots
    assert list(pivots) == sorted(set(pivots))
    for i, (r, p) in enumerate(zip(L.basis, pivots)):
        assert r[p] > 0 and all(v == 0 for v in r[:p])
        for above in L.basis[:i]:
            assert 0 <= above[p] < r[p]


@given(generator_sets(3), vectors(3, -20, 20))
def test_residue_is_canonical(gens, v):
    L = IntegerLattice.from_generators(3, gens)
    res = L.reduce(v)
    assert L.contains(tuple(a - b for a, b in zip(v, res)))
    shift = gens[0]
    assert L.reduce(tuple(a + 3 * b for a, b in zip(v, shift))) == res


@settings(max_examples=60)
@given(generator_sets(3, 3), vectors(3, -4, 4))
def test_membership_matches_minor_oracle(gens, v):
    L = IntegerLattice.from_generators(3, gens)
    assert L.contains(v) == minor_member(gens, v)


@settings(max_examples=60, deadline=None)
@given(generator_sets(4, 4))
def test_smith_form_matches_minors(gens):
    L = IntegerLattice.from_generators(4, gens)
    free, divs = L.quotient_structure()
    assert free == 4 - L.rank
    assert list(divs) == invariant_factors_by_minors([list(g) for g in gens], 4)


def test_exhaustive_small_boxes():
    rng = random.Random(5)
    for m in (1, 2, 3, 4):
        gens, L = random_lattice(rng, m, m)
        box = 2 if m == 4 else 3
        for v in itertools.product(range(-box, box + 1), repeat=m):
            assert L.contains(v) == minor_member(gens, v)
        for v in combinations_in_box(gens, 2):
            assert L.contains(v)


@given(generator_sets(3), generator_sets(3))
def test_join_and_sublattice(g1, g2):
    A = IntegerLattice.from_generators(3, g1)
    B = IntegerLattice.from_generators(3, g2)
    J = A.join(B)
    assert A.is_sublattice_of(J) and B.is_sublattice_of(J)
