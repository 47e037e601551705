"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line.

The lines are collected in ``RESULTS`` and printed at the end of the run by
the terminal-summary hook in ``conftest.py``.  Criteria that cannot be met are
left failing rather than relaxed.
"""

import itertools
import random
import time

import pytest

from burnside.ideals import BurnsideParams, RankRestriction, coordinates
from burnside.laurent import LaurentPoly
from burnside.quotient import build_quotient_S
from burnside.truncated import TruncationContext
from burnside.verifier import SuiteSpec, derived_length_bound, run_suite

from helpers import combinations_in_box, minor_member, random_lattice

CRITERIA = {
    1: "uI+N decomposition of 500 random words",
    2: "power formula against repeated multiplication",
    3: "basic commutator lambdas and lower central orders",
    4: "bounded cyclotomic inclusions for q = 2..5",
    5: "S(2) additive structure and group closure",
    6: "derived series vanishing and sharpness",
    7: "exponent and infinite order over S(q)[t]",
    8: "(t-1)-expansion coefficients of commutators",
    9: "deep derived words: vanishing low coefficients",
    10: "integer specialization probe",
    11: "rank 3 generators and rank guard",
    12: "oracle self-tests",
}

RESULTS = {}


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {CRITERIA[num]}: {detail}")
    assert ok, detail


def part(report, prefix):
    hits = [p for p in report.parts if p.name.startswith(prefix)]
    assert hits, f"no part named {prefix!r} in {report.suite}"
    return hits[0]


def part_ok(p):
    return p.status in ("pass", "bounded-pass")


def test_criterion_01_decomposition():
    start = time.perf_counter()
    rep = run_suite(SuiteSpec("lemma1", q=2, samples=500, seed=0))
    elapsed = time.perf_counter() - start
    p = rep.parts[0]
    ok = p.status == "pass" and p.items == 500 and p.passed == 500 and elapsed < 60
    record(1, ok, f"{p.passed}/{p.items} exact in {elapsed:.1f}s")


def test_criterion_02_power_formula():
    start = time.perf_counter()
    rep = run_suite(SuiteSpec("lemma2", q=2, samples=100, seed=0))
    elapsed = time.perf_counter() - start
    p = part(rep, "power-formula")
    ok = p.status == "pass" and p.passed == 100 and elapsed < 60
    record(2, ok, f"{p.passed}/{p.items} matrices for n in 2..6, suite took {elapsed:.1f}s")


def test_criterion_03_commutator_lambdas():
    rep = run_suite(SuiteSpec("lemma2", q=2, samples=100, seed=0))
    basic = part(rep, "basic commutators")
    classes = [p for p in rep.parts if p.check == "lcs_sigma"]
    ok = basic.status == "pass" and basic.passed == 16 and classes and all(p.status == "pass" for p in classes)
    record(3, ok, f"basic {basic.passed}/16, lower central classes 2..5 "
                  f"{sum(p.passed for p in classes)}/{sum(p.items for p in classes)}")


@pytest.mark.slow
def test_criterion_04_cyclotomic_inclusions():
    lines, ok = [], True
    for q in (2, 3, 4, 5):
        start = time.perf_counter()
        rep = run_suite(SuiteSpec("lemma3i", q=q))
        elapsed = time.perf_counter() - start
        blocking = [p for p in rep.parts if p.blocking]
        good = rep.verdict == "bounded-pass" and all(part_ok(p) for p in blocking)
        witness = part(rep, f"Sigma^{BurnsideParams.from_q(q).ephi - 1} not in I(q)")
        good = good and witness.status == "pass" and witness.witnesses
        if q == 4:
            good = good and part_ok(part(rep, "2^1 Sigma^3 in I(q)"))
        limit = 10 if q <= 3 else 600
        good = good and elapsed < limit
        ok = ok and good
        lines.append(f"q={q} {rep.verdict} {elapsed:.1f}s")
    record(4, ok, "; ".join(lines))


def test_criterion_05_s2_structure():
    P = BurnsideParams.from_q(2)
    S = build_quotient_S(P)
    # hand oracle: mod Sigma^2 each (1 + u) (1 - x_j) w reduces to -2 a_j, so the
    # relation lattice is 2 a_1 Z + 2 a_2 Z inside Z 1 + Z a_1 + Z a_2
    ctx = TruncationContext(2, 2, 1)
    x, y = LaurentPoly.var(2, 0), LaurentPoly.var(2, 1)
    rels = set()
    for i, j, r, s in itertools.product(range(-1, 2), repeat=4):
        u = LaurentPoly.monomial(2, (i, j, 0))
        w = LaurentPoly.monomial(2, (r, s, 0))
        for v in (1 - x, 1 - y):
            rels.add(coordinates((1 + u) * v * w, ctx))
    hand = all(c0 == 0 and a % 2 == 0 and b % 2 == 0 for c0, a, b in rels)
    hand = hand and (0, -2, 0) in rels and (0, 0, -2) in rels
    structure = S.additive_structure()
    rep = run_suite(SuiteSpec("lemma3iii", q=2, samples=20))
    closure = part(rep, "exhaustive closure")
    ok = hand and structure == (1, (2, 2)) and closure.status == "pass"
    record(5, ok, f"hand oracle {'agrees' if hand else 'disagrees'}, SNF {structure}, {closure.witnesses or 'closure 4'}")


@pytest.mark.slow
def test_criterion_06_derived_series():
    bounds = {q: derived_length_bound(BurnsideParams.from_q(q)) for q in (2, 3, 4, 5)}
    r2 = run_suite(SuiteSpec("thm1iv", q=2))
    r3 = run_suite(SuiteSpec("thm1iv", q=3))
    r4 = run_suite(SuiteSpec("thm1iv", q=4))
    v2, v3, v4 = (part(r, "derived depth") for r in (r2, r3, r4))
    sharp3 = part(r3, "sharpness")
    ok = (bounds == {2: 2, 3: 3, 4: 4, 5: 4}
          and v2.status == "pass" and v2.passed == 200
          and v3.status == "pass" and v3.passed == 100
          and sharp3.status == "pass"
          and v4.status == "pass")
    record(6, ok, f"bounds {bounds}; q=2 {v2.passed}/{v2.items}, q=3 {v3.passed}/{v3.items} "
                  f"(sharp {sharp3.passed} survivors), q=4 {v4.passed}/{v4.items}; "
                  f"q=4 sharpness {part(r4, 'sharpness').status}")


@pytest.mark.slow
def test_criterion_07_exponent_and_infinite_order():
    lines, ok = [], True
    for q in (2, 3):
        t = run_suite(SuiteSpec("thm2", q=q))
        p = run_suite(SuiteSpec("prop3", q=q))
        zero, nonzero = part(t, "zero T-sum"), part(t, "nonzero T-sum")
        inf = part(p, "infinite order")
        good = (zero.status == "pass" and zero.passed == 100 and nonzero.status == "pass"
                and nonzero.passed == 50 and inf.status == "pass")
        ok = ok and good
        lines.append(f"q={q} zero {zero.passed}/{zero.items}, infinite {nonzero.passed}/{nonzero.items}, "
                     f"t=1 {inf.passed}/{inf.items}")
    t4 = run_suite(SuiteSpec("thm2", q=4))
    lines.append(f"q=4 report-only {t4.verdict}")
    record(7, ok, "; ".join(lines))


def test_criterion_08_commutator_expansion():
    r5 = run_suite(SuiteSpec("lemma5", q=2, samples=100))
    rr = run_suite(SuiteSpec("lemma5-remark", q=2, samples=50))
    p = r5.parts[0]
    second = rr.parts[0]
    ok = p.status in ("pass", "bounded-pass") and p.passed == 100 and not second.blocking
    record(8, ok, f"{p.passed}/{p.items} commutators; second derived A_1 order >= 3: "
                  f"{second.passed}/{second.items} (report-only)")


@pytest.mark.slow
def test_criterion_09_deep_derived():
    rep = run_suite(SuiteSpec("lemma67", q=2))
    deep = [p for p in rep.parts if p.name.startswith(("derived depth 3", "derived depth 4"))]
    ok = len(deep) == 2 and all(part_ok(p) and p.passed == p.items for p in deep)
    record(9, ok, "; ".join(f"{p.name.split(':')[0]} {p.passed}/{p.items}" for p in rep.parts))


def test_criterion_10_sanov_probe():
    rep = run_suite(SuiteSpec("sanov", q=2, samples=500))
    p = part(rep, "reduced words")
    ok = p.status == "pass" and p.passed == 500
    record(10, ok, f"{p.passed}/{p.items} non-identity, counterexamples: {len(p.witnesses)}")


def test_criterion_11_rank_three():
    rep = run_suite(SuiteSpec("tgens", q=2, samples=100))
    refused = False
    try:
        run_suite(SuiteSpec("lemma3i", q=2, k=4))
    except RankRestriction:
        refused = True
    ok = rep.verdict == "pass" and part(rep, "rank 3 decomposition").passed == 100 and refused
    record(11, ok, f"tgens {rep.verdict}, rank 3 decomposition "
                   f"{part(rep, 'rank 3 decomposition').passed}/100, guard refused k=4 at q=2: {refused}")


def _lift(S, vec):
    """Residue vector to a Laurent polynomial via a_i = x_i - 1."""
    total = LaurentPoly.zero(S.k)
    for c, e in zip(vec, S.ctx.monomials):
        if c:
            term = LaurentPoly.constant(S.k, c)
            for i, p in enumerate(e):
                term = term * (LaurentPoly.var(S.k, i) - 1) ** p
            total = total + term
    return total


def test_criterion_12_oracles():
    rng = random.Random(12)
    checked = 0
    for m in (1, 2, 3, 4):
        for _ in range(4):
            gens, L = random_lattice(rng, m, rng.randint(1, m + 1))
            box = 2 if m == 4 else 3
            for v in itertools.product(range(-box, box + 1), repeat=m):
                assert L.contains(v) == minor_member(gens, v), (gens, v)
                checked += 1
            for v in combinations_in_box(gens, 2 if len(gens) <= 3 else 1):
                assert L.contains(v)
    laws = 0
    for q in (2, 3):
        S = build_quotient_S(BurnsideParams.from_q(q))
        one = S.one()
        for _ in range(500):
            a, b, c = (S.lattice.reduce([rng.randint(-5, 5) for _ in range(S.m)]) for _ in range(3))
            assert S.mul(a, S.mul(b, c)) == S.mul(S.mul(a, b), c)
            assert S.mul(a, b) == S.mul(b, a)
            assert S.mul(a, S.add(b, c)) == S.add(S.mul(a, b), S.mul(a, c))
            assert S.mul(one, a) == a
            assert S.mul(a, b) == S.residue(_lift(S, a) * _lift(S, b))
            laws += 1
    record(12, True, f"{checked} vectors agree with the minor-based oracle; ring laws on {laws} triples")
