"""Small independent oracles shared by the test modules."""

import itertools
import random
from math import gcd

from hypothesis import strategies as st

from burnside.laurent import LaurentPoly
from burnside.lattice import IntegerLattice


def det(M):
    """Laplace expansion; fine for the tiny matrices used here."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j, a in enumerate(M[0]):
        if a:
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            total += (-1) ** j * a * det(minor)
    return total


def minor_gcds(rows, m):
    """``[d_1, d_2, ...]``: gcd of all k x k minors, stopping at the rank."""
    out = []
    for k in range(1, min(len(rows), m) + 1):
        g = 0
        for ri in itertools.combinations(range(len(rows)), k):
            for ci in itertools.combinations(range(m), k):
                g = gcd(g, det([[rows[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def minor_member(gens, vec):
    """Exact membership: adding ``vec`` keeps the rank and the top determinantal divisor."""
    m = len(vec)
    before = minor_gcds(list(gens), m)
    after = minor_gcds(list(gens) + [tuple(vec)], m)
    return len(before) == len(after) and (not before or before[-1] == after[-1])


def invariant_factors_by_minors(rows, m):
    ds = minor_gcds(rows, m)
    prev, out = 1, []
    for d in ds:
        out.append(d // prev)
        prev = d
    return [f for f in out if f != 1]


def combinations_in_box(gens, bound):
    """All integer combinations with coefficients in ``[-bound, bound]``."""
    m = len(gens[0])
    seen = set()
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(gens)):
        acc = [0] * m
        for c, g in zip(coeffs, gens):
            for i in range(m):
                acc[i] += c * g[i]
        seen.add(tuple(acc))
    return seen


def random_lattice(rng: random.Random, m: int, n: int, lo: int = -4, hi: int = 4):
    gens = [tuple(rng.randint(lo, hi) for _ in range(m)) for _ in range(n)]
    return gens, IntegerLattice.from_generators(m, gens)


def polys(rank=2, max_terms=5, max_exp=3, max_coeff=20):
    exps = st.tuples(*[st.integers(-max_exp, max_exp)] * (rank + 1))
    coeffs = st.integers(-max_coeff, max_coeff)
    return st.dictionaries(exps, coeffs, max_size=max_terms).map(lambda d: LaurentPoly(rank, d))
