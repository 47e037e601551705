"""Seeded verification suites with machine-readable reports.

A suite is a list of parts.  Each part runs one named check over a list of
items (a word plus arguments); sampled items get a per-item seed string, so a
report is reproducible from its config alone and every failure carries a
witness that ``replay_witness`` re-runs in isolation.

Verdicts: ``pass`` (exact), ``bounded-pass`` (confirmed modulo a truncation),
``fail`` and ``inconclusive``.  Non-blocking parts and report-only suites are
recorded but never change the exit status.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .groups import (
    DecompositionError,
    basic_commutator_lambdas,
    basic_commutator_word,
    decompose_uN,
    element_order,
    evaluate_word,
    make_generators,
    power_formula,
)
from .ideals import (
    VARIANTS,
    BurnsideParams,
    NotPrimePower,
    RankRestriction,
    check_cyclotomic_inclusions,
    lattice_sha256,
    monomial_text,
    monomial_vector,
    saturate_ideal_lattice,
)
from .lattice import IntegerLattice
from .laurent import LaurentPoly
from .matrix import IntegerSpecialization, LaurentRing, RingMatrix
from .quotient import TRUSTED_ABSORPTION, SRing, build_quotient_S
from .truncated import TruncatedRing, TruncationContext, is_in_sigma_power, series_coefficients, sigma_order
from .words import Comm, Expr, Gen, GroupWord, Pow, Seq, comm, parse_word, random_subgroup_sample, random_word, word_t_sum

SUITES = (
    "lemma1", "lemma2", "lemma3i", "lemma3ii", "lemma3iii", "lemma4", "lemma5", "lemma5-remark",
    "lemma67", "thm1iv", "thm2", "prop3", "sanov", "appendix", "tgens",
)
EXTRA_SUITES = ("nilpotence",)
ALL_SUITES = SUITES + EXTRA_SUITES

# suites that rely on the cyclotomic machinery and so on the rank restriction
RANK_RESTRICTED = ("lemma3i", "lemma3iii", "thm1iv", "thm2", "prop3")

COVERAGE = {
    "lemma1": "words at t = 1 split as u I + N with sum lambda_i (1 - x_i) = 1 - u and v M = v",
    "lemma2": "power formula M^n = u^n + (1 + ... + u^(n-1)) N; basic commutator lambdas; "
              "lambda_i of class-j commutators lie in Sigma^(j-1); conjugation scales lambdas by u",
    "lemma3i": "Sigma^(e*phi) inside I(q) (bounded), degree e*phi - 1 non-inclusion witness, "
               "p^j Sigma^k inclusions, equality I(q) = Sigma^(e*phi) + (q) exactly when e = 1",
    "lemma3ii": "over R / Sigma^c, class-c commutators vanish and weight c - 1 basic commutators do not",
    "lemma3iii": "F(S(q)) has exponent q and is metabelian; exhaustive closure for q <= 3",
    "lemma4": "(t - 1)-expansion: constant term is the t = 1 image, expansion is multiplicative",
    "lemma5": "every coefficient A_i of a commutator lies in Sigma",
    "lemma5-remark": "second derived elements: A_1 in Sigma^3, later A_i in Sigma^2 (report only)",
    "lemma67": "k-th derived elements: A_i = 0 below d = 2^(k-2), A_i in Sigma^(2d) from d on",
    "thm1iv": "k-th derived samples vanish over S(q)[t, t^-1] for the derived-length bound k; sharpness search",
    "thm2": "zero T-sum words have W^q = 1; nonzero T-sum words have infinite order",
    "prop3": "W^q = 1 or infinite order; infinite-order W satisfy W^q = 1 at t = 1",
    "sanov": "x = 1, y = t = -1 sends nonempty reduced words to non-identity integer matrices",
    "appendix": "v M = v and the product rule u(W1 W2) = u1 u2, lambda(W1 W2) = lambda(W1) + u1 lambda(W2)",
    "tgens": "T_2..T_k commute; rank-3 decomposition; rank restriction k <= p + 1 enforced",
    "nilpotence": "probe: class-j commutators that stay non-trivial over S(q)[t, t^-1] (never a failure)",
}
OUT_OF_SCOPE = {
    "induced maps": "solvability of every image of a surjection sending R into S: quantifies over all "
                    "homomorphisms, not a finite computation",
    "full Burnside group": "solvability of the full Burnside group of exponent q: not desk-checkable",
    "imported results": "Sigma^(e*phi) inside I(q) in all degrees and the exact class of the metabelian "
                         "Burnside group: trusted, checked only in bounded degree",
}

VERDICT_RANK = {"pass": 0, "bounded-pass": 1, "inconclusive": 2, "fail": 3}


class ConfigError(ValueError):
    """Invalid suite parameters (usage error, not a mathematical failure)."""


def derived_length_bound(params: BurnsideParams) -> int:
    """Least ``k`` with ``2^(k-1) >= e*phi(q) + 1``."""
    k = 1
    while 2 ** (k - 1) < params.ephi + 1:
        k += 1
    return k


# ----- specs and reports -------------------------------------------------------


@dataclass
class SuiteSpec:
    suite: str
    q: int = 2
    k: int = 2
    c: Optional[int] = None
    D: Optional[int] = None
    samples: Optional[int] = None
    seed: int = 0
    unit_bound: int = 1
    variant: str = "include-unit-1"
    max_length: Optional[int] = None
    jobs: int = 1
    cache_dir: Optional[str] = None

    def validate(self) -> None:
        if self.suite not in ALL_SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; choose from {', '.join(ALL_SUITES)}")
        for name in ("samples", "c", "D", "max_length"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v}")
        if self.k < 2:
            raise ConfigError("rank k must be at least 2")
        if self.unit_bound < 1:
            raise ConfigError("unit bound must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        try:
            BurnsideParams.from_q(self.q)
        except NotPrimePower as exc:
            raise ConfigError(f"q={self.q} is not a prime power") from exc

    @property
    def params(self) -> BurnsideParams:
        return BurnsideParams.from_q(self.q)

    @property
    def c_eff(self) -> int:
        return self.c if self.c is not None else self.params.ephi + 2

    @property
    def D_eff(self) -> int:
        return self.D if self.D is not None else 2 * derived_length_bound(self.params) + 1

    def effective(self) -> dict:
        return {
            "suite": self.suite, "q": self.q, "k": self.k, "c": self.c_eff, "D": self.D_eff,
            "samples": self.samples, "seed": self.seed, "unit_bound": self.unit_bound,
            "variant": self.variant, "max_length": self.max_length,
        }


@dataclass
class PartResult:
    name: str
    check: str
    status: str
    blocking: bool
    items: int = 0
    passed: int = 0
    witnesses: List[dict] = field(default_factory=list)
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    suite: str
    claim: str
    params: dict
    verdict: str
    blocking: bool
    parts: List[PartResult]
    trusted: List[str] = field(default_factory=list)
    lattices: Dict[str, str] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def failed(self) -> bool:
        return self.blocking and self.verdict == "fail"

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "claim": self.claim,
            "params": self.params,
            "verdict": self.verdict,
            "blocking": self.blocking,
            "counters": {
                "parts": len(self.parts),
                "items": sum(p.items for p in self.parts),
                "passed": sum(p.passed for p in self.parts),
            },
            "parts": [p.as_dict() for p in self.parts],
            "trusted": self.trusted,
            "lattices": self.lattices,
            "extra": self.extra,
            "wall_time": round(self.wall_time, 3),
        }


# ----- evaluation environment --------------------------------------------------


class Env:
    """Rings for one (q, k, c, variant) setting; built lazily and cached per process."""

    def __init__(self, q: int, k: int, c: int, variant: str, unit_bound: int = 1, cache_dir: Optional[str] = None):
        self.params = BurnsideParams.from_q(q)
        self.q, self.k, self.c, self.variant = q, k, c, variant
        self.unit_bound = unit_bound
        self.cache_dir = cache_dir
        self._rings: Dict[str, object] = {}

    @property
    def gens(self):
        return make_generators(self.k)

    @property
    def S(self):
        return build_quotient_S(self.params, variant=self.variant, k=self.k, cache_dir=self.cache_dir,
                                B=self.unit_bound)

    def ring(self, name: str, c: Optional[int] = None):
        key = name if c is None else f"{name}:{c}"
        hit = self._rings.get(key)
        if hit is not None:
            return hit
        if name == "R":
            r = LaurentRing(self.k, with_t=False)
        elif name == "R[t]":
            r = LaurentRing(self.k, with_t=True)
        elif name == "S":
            r = SRing(self.S, with_t=False)
        elif name == "S[t]":
            r = SRing(self.S, with_t=True)
        elif name == "trunc":
            r = TruncatedRing(TruncationContext(self.k, c or self.c, 1))
        elif name == "sanov":
            r = IntegerSpecialization.sanov(self.k)
        else:
            raise ValueError(f"unknown ring {name!r}")
        self._rings[key] = r
        return r

    def eval(self, word, ring_name: str, c: Optional[int] = None) -> RingMatrix:
        return evaluate_word(word, self.ring(ring_name, c), self.gens)

    def identity(self, ring_name: str, c: Optional[int] = None) -> RingMatrix:
        return RingMatrix.identity(self.ring(ring_name, c), self.k)


@lru_cache(maxsize=64)
def get_env(q: int, k: int, c: int, variant: str, unit_bound: int = 1, cache_dir: Optional[str] = None) -> Env:
    return Env(q, k, c, variant, unit_bound, cache_dir)


# ----- checks -----------------------------------------------------------------
# Every check takes (env, word or None, args) and returns (ok, detail).

CHECKS: Dict[str, Callable] = {}


def check(name: str):
    def deco(fn):
        CHECKS[name] = fn
        return fn
    return deco


def _decompose(env: Env, word) -> Tuple[RingMatrix, object]:
    M = env.eval(word, "R")
    return M, decompose_uN(M)


@check("decompose")
def _chk_decompose(env, word, args):
    try:
        M, dec = _decompose(env, word)
    except DecompositionError as exc:
        return False, str(exc)
    N = dec.N()
    scaled = N.scale(1 - dec.u)
    if N * N != scaled:
        return False, "N^2 != (1 - u) N"
    return True, f"u = {dec.u}"


@check("product_rule")
def _chk_product_rule(env, word, args):
    other = parse_word(args["other"])
    try:
        _, d1 = _decompose(env, word)
        _, d2 = _decompose(env, other)
        _, d12 = _decompose(env, Seq((word, other)))
    except DecompositionError as exc:
        return False, str(exc)
    if d12.u != d1.u * d2.u:
        return False, "unit of the product is not u1 u2"
    for l12, l1, l2 in zip(d12.lambdas, d1.lambdas, d2.lambdas):
        if l12 != l1 + d1.u * l2:
            return False, "lambda(W1 W2) != lambda(W1) + u1 lambda(W2)"
    return True, ""


@check("power_formula")
def _chk_power_formula(env, word, args):
    M = env.eval(word, "R")
    P = M
    for n in range(2, args.get("n_max", 6) + 1):
        P = P * M
        if power_formula(M, n) != P:
            return False, f"closed form differs from the iterated product at n = {n}"
    return True, ""


@check("basic_lambdas")
def _chk_basic(env, word, args):
    a, b = args["a"], args["b"]
    _, dec = _decompose(env, word)
    expected = basic_commutator_lambdas(a, b)
    if tuple(dec.lambdas) != tuple(expected):
        return False, f"lambdas {tuple(map(str, dec.lambdas))} vs closed form {tuple(map(str, expected))}"
    return True, ""


@check("lcs_sigma")
def _chk_lcs_sigma(env, word, args):
    j = args["j"]
    _, dec = _decompose(env, word)
    for i, lam in enumerate(dec.lambdas, 1):
        if not is_in_sigma_power(lam, j - 1):
            return False, f"lambda_{i} not in Sigma^{j - 1}"
    return True, ""


@check("conjugation")
def _chk_conjugation(env, word, args):
    M_word = parse_word(args["conj"])
    _, dC = _decompose(env, word)
    _, dM = _decompose(env, M_word)
    conj = Seq((M_word, word, Pow(M_word, -1)))
    _, dX = _decompose(env, conj)
    if dX.u != dC.u:
        return False, "conjugate changed the unit"
    for lx, lc in zip(dX.lambdas, dC.lambdas):
        if lx != dM.u * lc:
            return False, "lambda(M C M^-1) != u(M) lambda(C)"
    return True, ""


@check("identity")
def _chk_identity(env, word, args):
    ring = args["ring"]
    W = env.eval(word, ring, args.get("c"))
    return W == env.identity(ring, args.get("c")), ""


@check("nonidentity")
def _chk_nonidentity(env, word, args):
    ok, _ = _chk_identity(env, word, args)
    return not ok, ""


@check("power_identity")
def _chk_power_identity(env, word, args):
    ring = args["ring"]
    W = env.eval(word, ring)
    return W ** args["n"] == env.identity(ring), ""


@check("order")
def _chk_order(env, word, args):
    res = element_order(word, env.ring(args["ring"]), gens=env.gens)
    return res.kind == "finite" and res.order == args["expect"], res.describe()


@check("infinite_order")
def _chk_infinite(env, word, args):
    ts = word_t_sum(word)
    if ts == 0:
        return False, "T-exponent sum is zero, no certificate"
    W = env.eval(word, "S[t]")
    I = env.identity("S[t]")
    P = W
    for m in range(1, args["m_max"] + 1):
        if P == I:
            return False, f"W^{m} = 1 despite T-sum {ts}"
        P = P * W
    return True, f"t-sum {ts}"


@check("prop3")
def _chk_prop3(env, word, args):
    q = env.q
    if word_t_sum(word) == 0:
        W = env.eval(word, "S[t]")
        return W ** q == env.identity("S[t]"), "zero T-sum: W^q = 1"
    W = env.eval(word, "S")
    return W ** q == env.identity("S"), "nonzero T-sum: W^q = 1 at t = 1"


@check("series")
def _chk_series(env, word, args):
    ctx = TruncationContext(env.k, args["c"], args["D"])
    E = series_coefficients(word, ctx)
    d = args.get("zero_below", 1)
    if args.get("identity_constant") and E.constant != RingMatrix.identity(E.constant.ring, env.k):
        return False, "constant term is not the identity"
    for i in range(1, min(d, E.D)):
        if not all(x.is_zero() for r in E.term(i).rows for x in r):
            return False, f"A_{i} != 0"
    orders = []
    for i in range(d, E.D):
        o = sigma_order(E.term(i))
        need = args["first_order"] if i == d and "first_order" in args else args["min_order"]
        orders.append(o)
        if o < need:
            return False, f"sigma_order(A_{i}) = {o} < {need}"
    return True, "sigma orders " + ",".join(map(str, orders))


@check("series_consistency")
def _chk_series_consistency(env, word, args):
    ctx = TruncationContext(env.k, args["c"], args["D"])
    tring = TruncatedRing(ctx)
    direct = evaluate_word(word, tring, env.gens)
    exact = env.eval(word, "R[t]").map_into(tring)
    if direct != exact:
        return False, "truncated evaluation differs from exact evaluation then truncation"
    E = series_coefficients(word, ctx)
    if E.reassemble(ctx) != direct:
        return False, "expansion does not reassemble"
    at1 = evaluate_word(word, TruncatedRing(ctx.a_only()), env.gens)
    if E.constant != at1:
        return False, "constant term differs from the t = 1 image"
    return True, ""


@check("generator_series")
def _chk_generator_series(env, word, args):
    ctx = TruncationContext(env.k, args["c"], args["D"])
    gens = env.gens
    a_ring = TruncatedRing(ctx.a_only())
    M2 = gens.M[1].map_into(a_ring)
    M2inv = gens.M_inv[1].map_into(a_ring)
    Sh = gens.ShiftS.map_into(a_ring)
    E = series_coefficients(Gen(2), ctx)
    if E.constant != M2 or E.term(1) != M2 * Sh:
        return False, "M2 T expansion is not M2 + (t - 1) M2 S"
    for i in range(2, E.D):
        if any(not x.is_zero() for r in E.term(i).rows for x in r):
            return False, f"M2 T has a nonzero coefficient A_{i}"
    Ei = series_coefficients(Gen(2, -1), ctx)
    base = Sh * M2inv
    for i in range(1, Ei.D):
        want = base.scale(-1 if i % 2 else 1)
        if Ei.term(i) != want:
            return False, f"(M2 T)^-1 coefficient A_{i} is not (-1)^{i} S M2^-1"
    return True, ""


@check("sanov")
def _chk_sanov(env, word, args):
    W = env.eval(word, "sanov")
    return not W.is_identity(), ""


@check("sanov_generators")
def _chk_sanov_gens(env, word, args):
    g1 = env.eval("g1", "sanov")
    g2 = env.eval("g2", "sanov")
    return g1.rows == ((1, 2), (0, 1)) and g2.rows == ((1, 0), (2, 1)), f"{g1.rows} {g2.rows}"


@check("t_commute")
def _chk_t_commute(env, word, args):
    gens = make_generators(args["rank"])
    for i in gens.T:
        for j in gens.T:
            if gens.T[i] * gens.T[j] != gens.T[j] * gens.T[i]:
                return False, f"T_{i} T_{j} != T_{j} T_{i}"
    return True, ""


@check("x_one_image")
def _chk_x_one(env, word, args):
    k = args["rank"]
    gens = make_generators(k)
    at = {i: 1 for i in range(k)}
    for j in range(2, k + 1):
        img = gens.g[j - 1].map(lambda f: f.specialize(at), gens.g[j - 1].ring)
        if img != gens.T[j]:
            return False, f"g_{j} at x = 1 is not T_{j}"
    return True, ""


@check("rank_guard")
def _chk_rank_guard(env, word, args):
    spec = SuiteSpec("lemma3i", q=args["q"], k=args["k"], samples=1)
    try:
        _check_rank(spec)
        refused = False
    except RankRestriction:
        refused = True
    return refused == args["expect_refusal"], "refused" if refused else "allowed"


@check("closure")
def _chk_closure(env, word, args):
    ring = env.ring("S")
    g, ginv = env.gens.images(ring)
    I = RingMatrix.identity(ring, env.k)
    seen = {I}
    frontier = [I]
    limit = args["limit"]
    while frontier and len(seen) <= limit:
        nxt = []
        for X in frontier:
            for G in list(g) + list(ginv):
                Y = X * G
                if Y not in seen:
                    seen.add(Y)
                    nxt.append(Y)
        frontier = nxt
    size = len(seen)
    return size == args["expect"], f"closure has {size} elements"


@check("lattice_nonmember")
def _chk_lattice_nonmember(env, word, args):
    lat = saturate_ideal_lattice(env.params, "I", args["c"], B=env.unit_bound, variant=args["variant"],
                                 k=env.k, cache_dir=env.cache_dir)
    vec = monomial_vector(tuple(args["exponents"]), lat.ctx)
    return not lat.lattice.contains(vec), monomial_text(args["exponents"])


def run_check(name: str, env_key: tuple, word_text: Optional[str], args: dict) -> Tuple[bool, str]:
    env = get_env(*env_key)
    word = parse_word(word_text) if word_text is not None else None
    try:
        return CHECKS[name](env, word, args)
    except DecompositionError as exc:
        return False, f"decomposition failed: {exc}"


def _run_check_star(job):
    return run_check(*job)


# ----- parts ------------------------------------------------------------------


@dataclass
class Part:
    name: str
    check: str
    items: List[Tuple[str, Optional[str], dict]]  # (label, word text, args)
    blocking: bool = True
    bounded: bool = False
    expect_any: bool = False  # a search: passes when some item passes
    env_key: Optional[tuple] = None


def _seed(spec: SuiteSpec, part: str, i: int) -> str:
    return f"{spec.suite}/{part}/q{spec.q}/k{spec.k}/seed{spec.seed}/{i}"


def sampled(spec: SuiteSpec, part: str, n: int, sampler: Callable[[random.Random], Expr], args: dict):
    out = []
    for i in range(n):
        label = _seed(spec, part, i)
        out.append((label, str(sampler(random.Random(label))), args))
    return out


def _run_part(part: Part, env_key: tuple, jobs: int) -> PartResult:
    key = part.env_key or env_key
    jobs_list = [(part.check, key, w, a) for _, w, a in part.items]
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_check_star, jobs_list, chunksize=max(1, len(jobs_list) // (4 * jobs))))
    else:
        results = [run_check(*j) for j in jobs_list]
    passed = sum(1 for ok, _ in results if ok)
    res = PartResult(part.name, part.check, "pass", part.blocking, len(results), passed)
    ok_status = "bounded-pass" if part.bounded else "pass"

    def witness(idx, kind):
        label, w, a = part.items[idx]
        return {"kind": kind, "check": part.check, "label": label, "word": w, "args": a,
                "env": list(key), "detail": results[idx][1]}

    if part.expect_any:
        hits = [i for i, (ok, _) in enumerate(results) if ok]
        if hits:
            res.status = ok_status
            res.witnesses.append(witness(hits[0], "witness"))
        else:
            res.status = "fail" if part.blocking else "inconclusive"
            res.note = f"no item out of {len(results)} satisfied the search"
    else:
        bad = [i for i, (ok, _) in enumerate(results) if not ok]
        if bad:
            res.status = "fail"
            res.witnesses.extend(witness(i, "counterexample") for i in bad[:3])
        else:
            res.status = ok_status
            if results and results[0][1]:
                res.note = results[0][1]
    return res


# ----- samplers ---------------------------------------------------------------


def _len(spec: SuiteSpec, default: int) -> int:
    return spec.max_length or default


def words(k: int, L: int):
    return lambda rng: random_word(rng, k, L).as_expr()


def derived(k: int, depth: int, L: int):
    return lambda rng: random_subgroup_sample("derived", depth, L, rng.random(), k)


def lower_central(k: int, weight: int, L: int):
    return lambda rng: random_subgroup_sample("lower-central", weight, L, rng.random(), k)


def zero_t_sum(k: int, L: int):
    def sample(rng):
        w = random_word(rng, k, L)
        ts = word_t_sum(w)
        if ts:
            w = GroupWord.from_letters(w.letters + ((2, -ts),))
        if not w.letters:
            w = GroupWord(((1, 1),))
        return w.as_expr()
    return sample


def nonzero_t_sum(k: int, L: int):
    def sample(rng):
        while True:
            w = random_word(rng, k, L)
            if word_t_sum(w):
                return w.as_expr()
    return sample


# ----- suite builders -----------------------------------------------------------


def _n(spec: SuiteSpec, default: int) -> int:
    return spec.samples if spec.samples is not None else default


def _parts_decomposition(spec):
    return [Part("decompose", "decompose", sampled(spec, "decompose", _n(spec, 500), words(spec.k, _len(spec, 16)), {}))]


def _parts_power_and_commutators(spec):
    k = spec.k
    n = _n(spec, 100)
    parts = [
        Part("power-formula n<=6", "power_formula",
             sampled(spec, "power", n, words(k, _len(spec, 16)), {"n_max": 6})),
    ]
    if k == 2:
        items = [(f"a={a},b={b}", str(basic_commutator_word(a, b)), {"a": a, "b": b})
                 for a in range(4) for b in range(4)]
        parts.append(Part("basic commutators a,b<=3", "basic_lambdas", items))
    for j in range(2, 6):
        parts.append(Part(f"class {j} lambdas in Sigma^{j - 1}", "lcs_sigma",
                          sampled(spec, f"lcs{j}", max(1, n // 5), lower_central(k, j, _len(spec, 6)), {"j": j})))
    conj_items = []
    for i in range(max(1, n // 5)):
        label = _seed(spec, "conj", i)
        rng = random.Random(label)
        C = random_subgroup_sample("derived", 1, _len(spec, 8), rng.random(), k)
        M = random_word(rng, k, _len(spec, 8))
        conj_items.append((label, str(C), {"conj": str(M)}))
    parts.append(Part("conjugation scales lambdas", "conjugation", conj_items))
    return parts


def _check_rank(spec: SuiteSpec) -> None:
    if spec.suite in RANK_RESTRICTED:
        spec.params.check_rank(spec.k)


def _parts_cyclotomic_inclusion(spec, extra):
    P = spec.params
    c = spec.c_eff
    parts = []
    variants = [spec.variant] + [v for v in VARIANTS if v != spec.variant]
    for variant in variants:
        blocking = variant == spec.variant
        rep = check_cyclotomic_inclusions(P, c=c, variant=variant, rank=spec.k, cache_dir=spec.cache_dir)
        lat = saturate_ideal_lattice(P, "I", c, B=spec.unit_bound, variant=variant, k=spec.k,
                                     cache_dir=spec.cache_dir)
        ctx = lat.ctx
        status = "bounded-pass" if rep["sigma_in_I"] else "fail"
        parts.append(PartResult(f"Sigma^{P.ephi} in I(q) + Sigma^{c} [{variant}]", "lattice_inclusion", status,
                                blocking, 1, int(rep["sigma_in_I"]),
                                note=f"stabilized at B={lat.B}, examined up to B={lat.B_examined}"))
        w = rep["witness_exponents"]
        res = PartResult(f"Sigma^{P.ephi - 1} not in I(q) [{variant}]", "lattice_nonmember",
                         "pass" if w is not None else "fail", blocking, 1, int(w is not None))
        if w is not None:
            res.witnesses.append({"kind": "witness", "check": "lattice_nonmember", "label": "degree e*phi - 1",
                                  "word": None, "args": {"c": c, "variant": variant, "exponents": list(w)},
                                  "env": [spec.q, spec.k, c, variant, spec.unit_bound, None],
                                  "detail": rep["witness"]})
        else:
            res.note = "every degree e*phi - 1 monomial lies in I(q) + Sigma^c"
        parts.append(res)
        for j in range(1, P.e):
            kdeg = P.ephi - j * (P.p ** (P.e - 1) - P.p ** (P.e - 2))
            pr = check_cyclotomic_inclusions(P, j=j, kdeg=kdeg, c=c, variant=variant, rank=spec.k,
                                             cache_dir=spec.cache_dir)["p_power"]
            parts.append(PartResult(f"{P.p}^{j} Sigma^{kdeg} in I(q) + Sigma^{c} [{variant}]", "lattice_inclusion",
                                    "bounded-pass" if pr["holds"] else "fail", blocking, 1, int(pr["holds"]),
                                    note="vacuous at this c" if pr["vacuous"] else ""))
        # equality reading: I(q) = Sigma^(e*phi) + (q), expected exactly when e = 1
        gens = [monomial_vector(a, ctx, P.q) for a in ctx.monomials]
        gens += [monomial_vector(a, ctx) for a in ctx.monomials if sum(a) >= P.ephi]
        J = IntegerLattice.from_generators(ctx.size, gens)
        equal = J == lat.lattice
        parts.append(PartResult(f"I(q) = Sigma^{P.ephi} + (q) iff e = 1 [{variant}]", "lattice_equality",
                                "bounded-pass" if equal == (P.e == 1) else "fail", blocking, 1,
                                int(equal == (P.e == 1)),
                                note=f"equal={equal}; literal I(q) = Sigma^{P.ephi} fails since q lies in I(q)"))
        extra.setdefault("lattices", {})[f"I:{variant}"] = lattice_sha256(lat)
        extra.setdefault("stabilization", {})[variant] = [list(h) for h in lat.history]
    return parts


def _parts_truncated_class(spec):
    k, c = spec.k, spec.c_eff
    n = _n(spec, 100)
    parts = [
        Part(f"class {c} commutators vanish mod Sigma^{c}", "identity",
             sampled(spec, "lcs", n, lower_central(k, c, _len(spec, 8)), {"ring": "trunc", "c": c}), bounded=True),
        Part("second derived words vanish at t = 1", "identity",
             sampled(spec, "metabelian", max(1, n // 2), derived(k, 2, _len(spec, 8)), {"ring": "R"})),
    ]
    if k == 2 and c >= 3:
        items = [(f"a={a},b={c - 3 - a}", str(basic_commutator_word(a, c - 3 - a)), {"ring": "trunc", "c": c})
                 for a in range(c - 2)]
        parts.append(Part(f"weight {c - 1} basic commutators survive mod Sigma^{c}", "nonidentity", items,
                          bounded=True))
    return parts


# exhaustive group orders of the free 2-generator groups of exponent 2 and 3
_BURNSIDE_ORDERS = {2: 4, 3: 27}


def _parts_exponent_q(spec):
    k, q = spec.k, spec.q
    n = _n(spec, 100)
    parts = [
        Part(f"W^{q} = 1 over S(q)", "power_identity",
             sampled(spec, "exponent", n, words(k, _len(spec, 16)), {"ring": "S", "n": q})),
        Part("second derived words vanish over S(q)", "identity",
             sampled(spec, "metabelian", max(1, n // 2), derived(k, 2, _len(spec, 16)), {"ring": "S"})),
        Part(f"g1 has order {q}", "order", [("g1", "g1", {"ring": "S", "expect": q})]),
    ]
    if k == 2 and q in _BURNSIDE_ORDERS:
        parts.append(Part("exhaustive closure of F(S(q))", "closure",
                          [("closure", None, {"expect": _BURNSIDE_ORDERS[q], "limit": 200})]))
    return parts


def _parts_series_basics(spec):
    c, D = spec.c_eff, spec.D_eff
    n = _n(spec, 100)
    return [
        Part("generator expansions", "generator_series", [("M2T", None, {"c": c, "D": D})]),
        Part("expansion consistency", "series_consistency",
             sampled(spec, "consistency", n, words(spec.k, _len(spec, 12)), {"c": c, "D": D}), bounded=True),
    ]


def _parts_commutator_series(spec):
    c, D = spec.c_eff, 6 if spec.D is None else spec.D
    return [Part("commutator coefficients in Sigma", "series",
                 sampled(spec, "commutator", _n(spec, 100), derived(spec.k, 1, _len(spec, 16)),
                         {"c": c, "D": D, "zero_below": 1, "min_order": 1}), bounded=True)]


def _parts_second_derived_series(spec):
    c = max(spec.c_eff, 4)
    D = 6 if spec.D is None else spec.D
    return [Part("second derived: A_1 in Sigma^3, rest in Sigma^2", "series",
                 sampled(spec, "f2", _n(spec, 50), derived(spec.k, 2, _len(spec, 16)),
                         {"c": c, "D": D, "zero_below": 1, "first_order": 3, "min_order": 2,
                          "identity_constant": True}), blocking=False, bounded=True)]


def _parts_deep_derived_series(spec):
    parts = []
    n = _n(spec, 30)
    for depth, count, L in ((2, n, 16), (3, n, 8), (4, max(1, n // 3), 4)):
        d = 2 ** (depth - 2)
        c = max(spec.c_eff, 2 * d + 1)
        D = max(spec.D_eff, d + 2)
        parts.append(Part(f"derived depth {depth}: A_i = 0 below {d}, Sigma^{2 * d} from {d}", "series",
                          sampled(spec, f"depth{depth}", count, derived(spec.k, depth, _len(spec, L)),
                                  {"c": c, "D": D, "zero_below": d, "min_order": 2 * d,
                                   "identity_constant": True}), bounded=True))
    return parts


def _default_thm1_samples(q: int) -> int:
    return {2: 200, 3: 100}.get(q, 20)


def _parts_derived_vanishing(spec, extra):
    P = spec.params
    kb = derived_length_bound(P)
    extra["derived_length_bounds"] = {str(q): derived_length_bound(BurnsideParams.from_q(q)) for q in (2, 3, 4, 5)}
    extra["derived_length_bound"] = kb
    n = _n(spec, _default_thm1_samples(spec.q))
    L = _len(spec, 16 if spec.q <= 3 else 8)
    sharp_blocking = P.e == 1 and spec.q <= 3
    return [
        Part(f"derived depth {kb} vanishes over S(q)[t]", "identity",
             sampled(spec, "vanish", n, derived(spec.k, kb, L), {"ring": "S[t]"})),
        Part(f"sharpness: a depth {kb - 1} element survives", "nonidentity",
             sampled(spec, "sharp", max(n // 2, 20), derived(spec.k, kb - 1, L), {"ring": "S[t]"}),
             blocking=sharp_blocking, expect_any=True),
    ]


def _parts_order_dichotomy(spec):
    q = spec.q
    blocking = spec.params.e == 1
    return [
        Part(f"zero T-sum: W^{q} = 1", "power_identity",
             sampled(spec, "zero", _n(spec, 100), zero_t_sum(spec.k, _len(spec, 16)), {"ring": "S[t]", "n": q}),
             blocking=blocking),
        Part(f"nonzero T-sum: infinite order, W^m != 1 for m <= {2 * q}", "infinite_order",
             sampled(spec, "nonzero", max(1, _n(spec, 100) // 2), nonzero_t_sum(spec.k, _len(spec, 16)),
                     {"m_max": 2 * q}), blocking=blocking),
    ]


def _parts_t_one_exponent(spec):
    n = _n(spec, 100)
    return [
        Part("infinite order: W^q = 1 at t = 1", "prop3",
             sampled(spec, "infinite", n, nonzero_t_sum(spec.k, _len(spec, 16)), {})),
        Part("zero T-sum: W^q = 1", "prop3",
             sampled(spec, "finite", n, zero_t_sum(spec.k, _len(spec, 16)), {}), blocking=spec.params.e == 1),
    ]


def _parts_integer_probe(spec):
    return [
        Part("Sanov generators", "sanov_generators", [("generators", None, {})]),
        Part("reduced words stay non-trivial", "sanov",
             sampled(spec, "words", _n(spec, 500), words(2, _len(spec, 12)), {})),
    ]


def _parts_general_rank(spec):
    parts = []
    n = _n(spec, 100)
    for k in sorted({spec.k, 3}):
        items = []
        for i in range(n):
            label = _seed(spec, f"rank{k}", i)
            rng = random.Random(label)
            w1 = random_word(rng, k, _len(spec, 12))
            w2 = random_word(rng, k, _len(spec, 12))
            items.append((label, str(w1), {"other": str(w2)}))
        parts.append(Part(f"rank {k}: v M = v and decomposition", "decompose", items,
                          env_key=(spec.q, k, spec.c_eff, spec.variant, spec.unit_bound, spec.cache_dir)))
        parts.append(Part(f"rank {k}: product rule", "product_rule", items,
                          env_key=(spec.q, k, spec.c_eff, spec.variant, spec.unit_bound, spec.cache_dir)))
    return parts


def _parts_t_generators(spec):
    k = max(spec.k, 3)
    env3 = (spec.q, 3, spec.c_eff, spec.variant, spec.unit_bound, spec.cache_dir)
    parts = [
        Part("T_i commute", "t_commute", [(f"rank {r}", None, {"rank": r}) for r in range(3, max(k, 4) + 1)]),
        Part("g_j at x = 1 is T_j", "x_one_image", [(f"rank {r}", None, {"rank": r}) for r in range(2, max(k, 4) + 1)]),
        Part("rank 3 decomposition", "decompose",
             sampled(spec, "rank3", _n(spec, 100), words(3, _len(spec, 16)), {}), env_key=env3),
    ]
    guard = []
    for q in (2, 3, 5):
        for r in (3, 4):
            p = BurnsideParams.from_q(q).p
            guard.append((f"q={q},k={r}", None, {"q": q, "k": r, "expect_refusal": p + 1 < r}))
    parts.append(Part("rank restriction k <= p + 1", "rank_guard", guard))
    return parts


def _parts_nilpotence(spec):
    parts = []
    n = _n(spec, 10)
    top = spec.max_length or 8
    for j in range(2, top + 1):
        items = [(f"basic weight {j}", str(comm(Gen(2), Gen(1), *([Gen(1)] * (j - 2)))), {"ring": "S[t]"})]
        items += sampled(spec, f"class{j}", n, lower_central(spec.k, j, 6), {"ring": "S[t]"})
        parts.append(Part(f"class {j} survivor", "nonidentity", items, blocking=False, expect_any=True))
    return parts


def build_parts(spec: SuiteSpec, extra: dict):
    s = spec.suite
    table = {
        "lemma1": _parts_decomposition, "lemma2": _parts_power_and_commutators, "lemma3ii": _parts_truncated_class,
        "lemma3iii": _parts_exponent_q, "lemma4": _parts_series_basics, "lemma5": _parts_commutator_series,
        "lemma5-remark": _parts_second_derived_series, "lemma67": _parts_deep_derived_series, "thm2": _parts_order_dichotomy,
        "prop3": _parts_t_one_exponent, "sanov": _parts_integer_probe, "appendix": _parts_general_rank, "tgens": _parts_t_generators,
        "nilpotence": _parts_nilpotence,
    }
    if s == "lemma3i":
        return _parts_cyclotomic_inclusion(spec, extra)
    if s == "thm1iv":
        return _parts_derived_vanishing(spec, extra)
    return table[s](spec)


def _suite_verdict(parts: Sequence[PartResult]) -> Tuple[str, bool]:
    blocking = [p for p in parts if p.blocking]
    pool = blocking or list(parts)
    worst = max(pool, key=lambda p: VERDICT_RANK[p.status]).status if pool else "pass"
    if blocking and worst == "inconclusive":
        worst = "fail"
    return worst, bool(blocking)


_USES_S = ("lemma3iii", "thm1iv", "thm2", "prop3", "nilpotence")


def run_suite(spec: SuiteSpec) -> SuiteReport:
    spec.validate()
    _check_rank(spec)
    start = time.perf_counter()
    extra: dict = {}
    env_key = (spec.q, spec.k, spec.c_eff, spec.variant, spec.unit_bound, spec.cache_dir)
    built = build_parts(spec, extra)
    results = [p if isinstance(p, PartResult) else _run_part(p, env_key, spec.jobs) for p in built]
    verdict, blocking = _suite_verdict(results)
    trusted, lattices = [], dict(extra.pop("lattices", {}))
    if spec.suite in _USES_S:
        S = get_env(*env_key).S
        trusted.append(TRUSTED_ABSORPTION)
        lattices[f"ISigma:{spec.variant}"] = lattice_sha256(S.ideal)
        extra["unit_bound_B"] = S.ideal.B
    if spec.suite == "lemma3i":
        trusted.append("bounded (adic) verification only: inclusions are checked modulo Sigma^c")
    return SuiteReport(spec.suite, COVERAGE[spec.suite], spec.effective(), verdict, blocking, results,
                       trusted, lattices, extra, time.perf_counter() - start)


# ----- aggregation --------------------------------------------------------------


def applicable_suites(q: int) -> List[str]:
    return list(SUITES)


def verify_all(profile: Optional[dict] = None, suites: Optional[Sequence[str]] = None,
               progress: Optional[Callable[[SuiteReport], None]] = None) -> dict:
    """Run the suite matrix ``q x suites`` and aggregate.  ``profile`` holds SuiteSpec fields plus ``qs``."""
    profile = dict(profile or {})
    qs = profile.pop("qs", [2, 3])
    reports = []
    start = time.perf_counter()
    for q in qs:
        for s in suites or applicable_suites(q):
            spec = SuiteSpec(s, q=q, **profile)
            rep = run_suite(spec)
            reports.append(rep)
            if progress:
                progress(rep)
    return assemble_report(reports, {"qs": list(qs), **profile}, time.perf_counter() - start)


def assemble_report(reports: Sequence[SuiteReport], config: dict, wall: float) -> dict:
    from . import __version__

    trusted = sorted({t for r in reports for t in r.trusted})
    hashes = {}
    for r in reports:
        for name, sha in r.lattices.items():
            hashes[f"q{r.params['q']}:k{r.params['k']}:{name}"] = sha
    failing = [r for r in reports if r.failed]
    summary = {
        "suites": len(reports),
        "verdicts": {v: sum(1 for r in reports if r.verdict == v) for v in VERDICT_RANK},
        "blocking_failures": [f"{r.suite}@q{r.params['q']}" for r in failing],
        "report_only": [f"{r.suite}@q{r.params['q']}:{r.verdict}" for r in reports if not r.blocking],
        "exit_code": 1 if failing else 0,
        "wall_time": round(wall, 3),
    }
    cfg = {k: v for k, v in config.items() if k not in ("jobs", "cache_dir")}
    return {
        "format": "burnside-report v1",
        "run": {"tool_version": __version__, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                "config": cfg},
        "suites": [r.as_dict() for r in reports],
        "trusted_assumptions": trusted,
        "cache_hashes": hashes,
        "coverage": {"suites": COVERAGE, "out_of_scope": OUT_OF_SCOPE},
        "summary": summary,
    }


_VOLATILE = ("timestamp", "wall_time")


def strip_volatile(obj):
    """Drop timestamps and timings so two reports can be compared byte for byte."""
    if isinstance(obj, dict):
        return {k: strip_volatile(v) for k, v in obj.items() if k not in _VOLATILE}
    if isinstance(obj, list):
        return [strip_volatile(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def iter_witnesses(report: dict):
    for s in report.get("suites", []):
        for p in s["parts"]:
            for w in p["witnesses"]:
                yield s["suite"], p, w


def replay_witness(w: dict) -> Tuple[bool, str]:
    """Re-run the check behind a witness; returns the check's (ok, detail)."""
    env = tuple(w["env"])
    return run_check(w["check"], env, w.get("word"), w.get("args", {}))


def text_summary(report: dict) -> str:
    lines = []
    for s in report["suites"]:
        flag = "" if s["blocking"] else " (report only)"
        c = s["counters"]
        lines.append(f"{s['suite']:<14} q={s['params']['q']} {s['verdict']:<13}{flag} "
                     f"{c['passed']}/{c['items']} items, {s['wall_time']:.2f}s")
        for p in s["parts"]:
            mark = p["status"] + ("" if p["blocking"] else ", non-blocking")
            lines.append(f"    - {p['name']}: {mark} ({p['passed']}/{p['items']})"
                         + (f"  {p['note']}" if p["note"] else ""))
            for w in p["witnesses"][:1]:
                lines.append(f"        {w['kind']}: {w['word'] or w['detail']} [{w['label']}]")
    sm = report["summary"]
    lines.append(f"blocking failures: {', '.join(sm['blocking_failures']) or 'none'}; "
                 f"wall time {sm['wall_time']:.1f}s")
    return "\n".join(lines) + "\n"


def default_jobs() -> int:
    return os.cpu_count() or 1
