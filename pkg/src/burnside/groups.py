"""Generators of the matrix groups and the structural algebra around them.

Rank ``k`` generators over ``R[t, t^-1]``::

    M_j = x_j I + [row j equal to v],      v = (1 - x_1, ..., 1 - x_k)
    T_i = diag(t, .., t, 1, .., 1) with 1 - t in row i left of the diagonal
    g_1 = M_1,  g_j = M_j T_j  (j >= 2)

Commutator convention: ``[g, h] = g h g^-1 h^-1``.  Under this convention
``[M2, M1]`` at ``t = 1`` equals ``I + N`` with ``lambda_1 = -(1 - y)`` and
``lambda_2 = 1 - x``, and the left-normed basic commutators satisfy the
closed forms of ``basic_commutator_lambdas``.  (The other convention,
``g^-1 h^-1 g h``, gives ``lambda_1 = x^-1 - x^-1 y^-1``.)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .laurent import LaurentPoly
from .matrix import LaurentRing, RingMatrix, poly_matrix
from .words import Comm, Expr, Gen, GroupWord, Pow, Seq, WordLike, as_expr, comm, word_t_sum


class DecompositionError(ValueError):
    pass


def _x(k: int, j: int, p: int = 1) -> LaurentPoly:
    return LaurentPoly.var(k, j - 1, p)


@dataclass
class GeneratorSet:
    rank: int
    M: List[RingMatrix]
    M_inv: List[RingMatrix]
    T: Dict[int, RingMatrix]
    T_inv: Dict[int, RingMatrix]
    shift: Dict[int, RingMatrix]
    g: List[RingMatrix]
    g_inv: List[RingMatrix]
    _images: Dict = field(default_factory=dict, repr=False)

    def images(self, ring) -> Tuple[List[RingMatrix], List[RingMatrix]]:
        """Generators and inverses pushed into ``ring`` (cached per ring)."""
        key = ring.key() if hasattr(ring, "key") else id(ring)
        hit = self._images.get(key)
        if hit is None:
            hit = ([m.map_into(ring) for m in self.g], [m.map_into(ring) for m in self.g_inv])
            self._images[key] = hit
        return hit

    @property
    def v(self) -> Tuple[LaurentPoly, ...]:
        return tuple(1 - _x(self.rank, j) for j in range(1, self.rank + 1))

    @property
    def ShiftS(self) -> RingMatrix:
        return self.shift[2]


_GEN_CACHE: Dict[int, GeneratorSet] = {}


def make_generators(k: int = 2) -> GeneratorSet:
    if k < 2:
        raise ValueError("rank must be at least 2")
    if k in _GEN_CACHE:
        return _GEN_CACHE[k]
    one = LaurentPoly.one(k)
    zero = LaurentPoly.zero(k)
    t = LaurentPoly.t(k)
    t_inv = LaurentPoly.t(k, -1)
    v = [1 - _x(k, j) for j in range(1, k + 1)]

    M, M_inv = [], []
    for j in range(1, k + 1):
        xj = _x(k, j)
        xj_inv = _x(k, j, -1)
        rows = [[(xj if r == c else zero) + (v[c] if r == j - 1 else zero) for c in range(k)] for r in range(k)]
        # (u + N)^-1 = u^-1 (I - N) because N^2 = (1 - u) N
        inv = [[xj_inv * ((one if r == c else zero) - (v[c] if r == j - 1 else zero)) for c in range(k)]
               for r in range(k)]
        M.append(poly_matrix(k, rows))
        M_inv.append(poly_matrix(k, inv))

    T, T_inv, S = {}, {}, {}
    for i in range(2, k + 1):
        rows, inv, shift = [], [], []
        for r in range(k):
            row, irow, srow = [], [], []
            for c in range(k):
                if r == c:
                    row.append(t if r < i - 1 else one)
                    irow.append(t_inv if r < i - 1 else one)
                    srow.append(1 if r < i - 1 else 0)
                elif r == i - 1 and c < i - 1:
                    row.append(1 - t)
                    irow.append(1 - t_inv)
                    srow.append(-1)
                else:
                    row.append(zero)
                    irow.append(zero)
                    srow.append(0)
            rows.append(row)
            inv.append(irow)
            shift.append(srow)
        T[i] = poly_matrix(k, rows)
        T_inv[i] = poly_matrix(k, inv)
        S[i] = poly_matrix(k, shift)

    g = [M[0]] + [M[j - 1] * T[j] for j in range(2, k + 1)]
    g_inv = [M_inv[0]] + [T_inv[j] * M_inv[j - 1] for j in range(2, k + 1)]

    for a, b in list(zip(M, M_inv)) + [(T[i], T_inv[i]) for i in T] + list(zip(g, g_inv)):
        if not (a * b).is_identity() or not (b * a).is_identity():
            raise AssertionError("generator inverse failed to validate")
    gens = GeneratorSet(k, M, M_inv, T, T_inv, S, g, g_inv)
    _GEN_CACHE[k] = gens
    return gens


def default_ring(k: int, with_t: bool = True) -> LaurentRing:
    return LaurentRing(k, with_t)


# ----- evaluation -----------------------------------------------------------


def evaluate_pair(expr: Expr, ring, gens: GeneratorSet) -> Tuple[RingMatrix, RingMatrix]:
    """Return ``(W, W^-1)`` for an expression tree, evaluated in ``ring``."""
    g, g_inv = gens.images(ring)
    memo: Dict[int, Tuple[RingMatrix, RingMatrix]] = {}

    def power(m: RingMatrix, minv: RingMatrix, n: int):
        if n >= 0:
            return m ** n, minv ** n
        return minv ** (-n), m ** (-n)

    def ev(e: Expr):
        key = id(e)
        if key in memo:
            return memo[key]
        if isinstance(e, Gen):
            if e.index > gens.rank:
                raise ValueError(f"generator g{e.index} does not exist at rank {gens.rank}")
            out = power(g[e.index - 1], g_inv[e.index - 1], e.exp)
        elif isinstance(e, Seq):
            if not e.parts:
                I = RingMatrix.identity(ring, gens.rank)
                out = (I, I)
            else:
                m, minv = ev(e.parts[0])
                for p in e.parts[1:]:
                    pm, pinv = ev(p)
                    m = m * pm
                    minv = pinv * minv
                out = (m, minv)
        elif isinstance(e, Pow):
            m, minv = ev(e.base)
            out = power(m, minv, e.n)
        elif isinstance(e, Comm):
            a, ai = ev(e.a)
            b, bi = ev(e.b)
            # [a,b] = a b a^-1 b^-1 and its inverse b a b^-1 a^-1
            out = (a * b * ai * bi, b * a * bi * ai)
        else:
            raise TypeError(f"unknown expression node {e!r}")
        memo[key] = out
        return out

    return ev(expr)


def evaluate_word(w: WordLike, ring=None, gens: Optional[GeneratorSet] = None) -> RingMatrix:
    expr = as_expr(w)
    if gens is None:
        k = ring.rank if ring is not None else max(2, expr.max_generator())
        gens = make_generators(k)
    if ring is None:
        ring = LaurentRing(gens.rank)
    return evaluate_pair(expr, ring, gens)[0]


def generator_inverse_word(w: GroupWord) -> GroupWord:
    return w.inverse()


# ----- uI + N decomposition ---------------------------------------------------


@dataclass(frozen=True)
class UNDecomposition:
    u: LaurentPoly
    lambdas: Tuple[LaurentPoly, ...]
    v: Tuple[LaurentPoly, ...]

    @property
    def rank(self) -> int:
        return len(self.lambdas)

    def N(self) -> RingMatrix:
        return poly_matrix(self.rank, [[lam * vj for vj in self.v] for lam in self.lambdas])

    def reassemble(self) -> RingMatrix:
        k = self.rank
        return RingMatrix.scalar(LaurentRing(k), k, self.u) + self.N()

    def unit_exponents(self) -> Tuple[int, ...]:
        return self.u.leading_exponent()[:-1]


def decompose_uN(M: RingMatrix) -> UNDecomposition:
    """Write ``M = u I + N`` with ``N = [lambda_i v]`` and check every side condition.

    ``M`` must have entries in ``R`` (no t).  Each ``lambda_i`` is recovered from
    an off-diagonal entry ``M[i][j] = lambda_i (1 - x_j)`` by exact division.
    """
    k = M.dim
    entries = [a for r in M.rows for a in r]
    if any(not isinstance(a, LaurentPoly) for a in entries):
        raise DecompositionError("decomposition needs Laurent polynomial entries")
    if any(a.has_t() for a in entries):
        raise DecompositionError("matrix has t in its entries; specialize t = 1 first")
    v = tuple(1 - _x(k, j) for j in range(1, k + 1))
    lambdas = []
    for i in range(k):
        j = 1 if i == 0 else 0
        try:
            lambdas.append(M.rows[i][j].div_one_minus(j))
        except ValueError as exc:
            raise DecompositionError(f"row {i + 1} is not a multiple of v: {exc}") from None
    u = M.rows[0][0] - lambdas[0] * v[0]
    if not u.is_positive_unit():
        raise DecompositionError(f"u = {u} is not a positive unit")
    dec = UNDecomposition(u, tuple(lambdas), v)
    if dec.reassemble().rows != M.map_into(LaurentRing(k)).rows:
        raise DecompositionError("u I + N does not reassemble to M")
    total = LaurentPoly.zero(k)
    for lam, vi in zip(lambdas, v):
        total = total + lam * vi
    if total != 1 - u:
        raise DecompositionError("sum lambda_i (1 - x_i) != 1 - u")
    if M.row_times(v) != v:
        raise DecompositionError("v M != v")
    return dec


def decompose_t_form(W: RingMatrix) -> Tuple[LaurentPoly, RingMatrix]:
    """Rank-2 split ``W = u I + V`` with ``u = det W = x^i y^j t^k``."""
    if W.dim != 2:
        raise DecompositionError("the t-form split is implemented for rank 2")
    det = W.rows[0][0] * W.rows[1][1] - W.rows[0][1] * W.rows[1][0]
    if not det.is_positive_unit():
        raise DecompositionError(f"det {det} is not a positive unit")
    return det, W - RingMatrix.scalar(W.ring, 2, det)


def cyclotomic_sum(u: LaurentPoly, n: int) -> LaurentPoly:
    total = LaurentPoly.zero(u.rank)
    p = LaurentPoly.one(u.rank)
    for _ in range(n):
        total = total + p
        p = p * u
    return total


def power_formula(M: RingMatrix, n: int) -> RingMatrix:
    """``M^n = u^n + (1 + u + ... + u^(n-1)) N`` for ``M = u + N``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dec = decompose_uN(M)
    k = dec.rank
    ring = LaurentRing(k)
    return RingMatrix.scalar(ring, k, dec.u ** n) + dec.N().scale(cyclotomic_sum(dec.u, n))


# ----- commutator algebra -----------------------------------------------------


def basic_commutator_lambdas(a: int, b: int) -> Tuple[LaurentPoly, LaurentPoly]:
    """Closed form for ``[M2, M1, M2 (b times), M1 (a times)]`` at rank 2."""
    if a < 0 or b < 0:
        raise ValueError("a, b must be non-negative")
    one_x = 1 - _x(2, 1)
    one_y = 1 - _x(2, 2)
    return -(one_y ** (b + 1)) * one_x ** a, one_y ** b * one_x ** (a + 1)


def basic_commutator_word(a: int, b: int) -> Expr:
    return comm(Gen(2), Gen(1), *([Gen(2)] * b), *([Gen(1)] * a))


# ----- orders -----------------------------------------------------------------


@dataclass(frozen=True)
class OrderResult:
    kind: str  # "finite" | "infinite" | "unknown"
    order: Optional[int]
    t_sum: int
    note: str = ""

    def describe(self) -> str:
        if self.kind == "finite":
            return f"finite, order {self.order}"
        if self.kind == "infinite":
            return f"infinite (t-sum certificate: exponent sum {self.t_sum} in T)"
        return f"unknown beyond cap ({self.note})"


def element_order(w: WordLike, ring, cap: Optional[int] = None, gens: Optional[GeneratorSet] = None) -> OrderResult:
    """Order of a word's image in ``S(q)[t, t^-1]`` (or any ring with a ``q``).

    A nonzero T-exponent sum certifies infinite order: sending every ``x_i`` to
    1 maps the word onto a nonzero power of the abelian group generated by the
    ``T_i``, and ``T_i^n`` carries ``t^n`` on its diagonal.  Otherwise the order
    is searched among divisors of ``q`` and then among ``n <= cap``.
    """
    expr = as_expr(w)
    ts = word_t_sum(expr)
    if ts != 0:
        return OrderResult("infinite", None, ts)
    q = ring.params.q
    cap = q if cap is None else cap
    W = evaluate_word(expr, ring, gens or make_generators(ring.rank))
    I = RingMatrix.identity(ring, W.dim)
    if W == I:
        return OrderResult("finite", 1, ts)
    p = ring.params.p
    d, P = 1, W
    while d * p <= min(q, cap):
        P = P ** p
        d *= p
        if P == I:
            # smallest divisor of q killing W is the order (it divides every other)
            return OrderResult("finite", d, ts)
    P = W
    for n in range(2, cap + 1):
        P = P * W
        if P == I:
            return OrderResult("finite", n, ts)
    return OrderResult("unknown", None, ts, note=f"no power up to {cap} is the identity")
