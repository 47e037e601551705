"""Shifted, truncated coordinates ``x_i = 1 + a_i``, ``t = 1 + s``.

Elements live in ``Z[a_1..a_k, s] / ((a)^c + (s)^D)``.  In this ring the
powers of the augmentation ideal are spanned by monomials, so membership in
``Sigma^m`` is a degree scan and the ``(t-1)``-expansion coefficients of a
matrix are just its ``s``-slices.

Coefficients are stored in numpy arrays of shape ``(n_monomials, D)``.  Products
run in int64 whenever an a-priori bound rules out overflow and fall back to
Python integers (object arrays) otherwise, so results are always exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .laurent import LaurentPoly, RankMismatch, format_poly
from .matrix import LaurentRing, RingMatrix

_INT64_SAFE = 2**62


@lru_cache(maxsize=None)
def binomial(n: int, r: int) -> int:
    """Generalized binomial coefficient ``n (n-1) ... (n-r+1) / r!`` for any integer ``n``."""
    if r < 0:
        return 0
    num = 1
    for i in range(r):
        num *= n - i
    den = 1
    for i in range(2, r + 1):
        den *= i
    return num // den


def graded_monomials(k: int, c: int) -> List[Tuple[int, ...]]:
    """Exponent vectors of total degree < c, ordered by degree then reverse-lex."""
    out = []
    for deg in range(c):
        for combo in itertools.combinations_with_replacement(range(k), deg):
            e = [0] * k
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


@dataclass(frozen=True)
class TruncationContext:
    rank: int
    c: int
    D: int = 1

    def __post_init__(self):
        if self.c < 1 or self.D < 1:
            raise ValueError(f"truncation orders must be positive (c={self.c}, D={self.D})")
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @cached_property
    def monomials(self) -> List[Tuple[int, ...]]:
        return graded_monomials(self.rank, self.c)

    @cached_property
    def index(self) -> Dict[Tuple[int, ...], int]:
        return {e: i for i, e in enumerate(self.monomials)}

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([sum(e) for e in self.monomials], dtype=np.int64)

    @cached_property
    def pair_table(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        pi, pj, pk = [], [], []
        for i, a in enumerate(self.monomials):
            for j, b in enumerate(self.monomials):
                s = tuple(x + y for x, y in zip(a, b))
                k = self.index.get(s)
                if k is not None:
                    pi.append(i)
                    pj.append(j)
                    pk.append(k)
        return np.array(pi, dtype=np.intp), np.array(pj, dtype=np.intp), np.array(pk, dtype=np.intp)

    @property
    def size(self) -> int:
        return len(self.monomials)

    def a_only(self) -> "TruncationContext":
        return TruncationContext(self.rank, self.c, 1)

    def names(self) -> Tuple[str, ...]:
        return tuple(f"a{i}" for i in range(1, self.rank + 1)) + ("s",)


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.max(np.abs(arr)))


def _normalize(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object and _maxabs(arr) < _INT64_SAFE:
        return arr.astype(np.int64)
    return arr


class TruncatedElement:
    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: TruncationContext, coeffs: np.ndarray):
        self.ctx = ctx
        self.coeffs = coeffs

    @classmethod
    def zero(cls, ctx: TruncationContext) -> "TruncatedElement":
        return cls(ctx, np.zeros((ctx.size, ctx.D), dtype=np.int64))

    @classmethod
    def constant(cls, ctx: TruncationContext, c: int) -> "TruncatedElement":
        arr = np.zeros((ctx.size, ctx.D), dtype=object if abs(c) >= _INT64_SAFE else np.int64)
        arr[0, 0] = c
        return cls(ctx, arr)

    @classmethod
    def from_terms(cls, ctx: TruncationContext, terms: Dict[Tuple[int, ...], int]) -> "TruncatedElement":
        """``terms`` maps (a-exponents..., s-degree) to integers; out-of-range terms are dropped."""
        arr = np.zeros((ctx.size, ctx.D), dtype=object)
        for e, v in terms.items():
            idx = ctx.index.get(tuple(e[:-1]))
            if idx is not None and e[-1] < ctx.D:
                arr[idx, e[-1]] += v
        return cls(ctx, _normalize(arr))

    def _check(self, other: "TruncatedElement") -> None:
        if self.ctx != other.ctx:
            raise RankMismatch(f"truncation contexts differ: {self.ctx} vs {other.ctx}")

    def _lift(self, other):
        if isinstance(other, int):
            return TruncatedElement.constant(self.ctx, other)
        return other

    def __add__(self, other):
        other = self._lift(other)
        self._check(other)
        return TruncatedElement(self.ctx, _add(self.coeffs, other.coeffs, 1))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        self._check(other)
        return TruncatedElement(self.ctx, _add(self.coeffs, other.coeffs, -1))

    def __neg__(self):
        return TruncatedElement(self.ctx, -self.coeffs)

    def __mul__(self, other):
        other = self._lift(other)
        self._check(other)
        return TruncatedElement(self.ctx, _trunc_mul(self.ctx, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = TruncatedElement.constant(self.ctx, other)
        if not isinstance(other, TruncatedElement):
            return NotImplemented
        return self.ctx == other.ctx and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self) -> int:
        return hash((self.ctx, tuple(self.coeffs.ravel().tolist())))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def terms(self) -> Dict[Tuple[int, ...], int]:
        out = {}
        rows, cols = np.nonzero(self.coeffs)
        for i, j in zip(rows.tolist(), cols.tolist()):
            out[self.ctx.monomials[i] + (j,)] = int(self.coeffs[i, j])
        return out

    def s_coefficient(self, i: int) -> "TruncatedElement":
        """Coefficient of ``s^i`` as an element of the a-only ring."""
        sub = self.ctx.a_only()
        arr = np.zeros((self.ctx.size, 1), dtype=self.coeffs.dtype)
        if i < self.ctx.D:
            arr[:, 0] = self.coeffs[:, i]
        return TruncatedElement(sub, arr)

    def sigma_order(self) -> int:
        rows = np.nonzero(np.any(self.coeffs != 0, axis=1))[0]
        if rows.size == 0:
            return self.ctx.c
        return int(self.ctx.degrees[rows].min())

    def to_poly(self) -> LaurentPoly:
        return LaurentPoly(self.ctx.rank, self.terms())

    def __str__(self) -> str:
        return format_poly(self.to_poly(), self.ctx.names())

    def __repr__(self) -> str:
        return f"TruncatedElement(c={self.ctx.c}, D={self.ctx.D}, {self})"


def _add(x: np.ndarray, y: np.ndarray, sign: int) -> np.ndarray:
    if x.dtype == object or y.dtype == object or _maxabs(x) + _maxabs(y) >= _INT64_SAFE:
        return _normalize(x.astype(object) + sign * y.astype(object))
    return x + sign * y


def _trunc_mul(ctx: TruncationContext, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    pi, pj, pk = ctx.pair_table
    nzx = np.any(X != 0, axis=1)
    nzy = np.any(Y != 0, axis=1)
    mask = nzx[pi] & nzy[pj]
    D = ctx.D
    if not mask.any():
        return np.zeros((ctx.size, D), dtype=np.int64)
    pi, pj, pk = pi[mask], pj[mask], pk[mask]
    bound = _maxabs(X) * _maxabs(Y) * (len(pi) * D)
    dtype = np.int64 if bound < _INT64_SAFE else object
    Xs = X[pi].astype(dtype)
    Ys = Y[pj].astype(dtype)
    contrib = np.zeros((len(pi), D), dtype=dtype)
    for u in range(D):
        contrib[:, u:] += Xs[:, u:u + 1] * Ys[:, : D - u]
    out = np.zeros((ctx.size, D), dtype=dtype)
    np.add.at(out, pk, contrib)
    return _normalize(out) if dtype == object else out


class TruncatedRing:
    """Ring context for word evaluation in the shifted truncated ring."""

    def __init__(self, ctx: TruncationContext):
        self.ctx = ctx
        self.rank = ctx.rank
        self.name = f"trunc(c={ctx.c},D={ctx.D})"

    def zero(self):
        return TruncatedElement.zero(self.ctx)

    def one(self):
        return TruncatedElement.constant(self.ctx, 1)

    def image(self, f: LaurentPoly) -> TruncatedElement:
        return to_truncated(f, self.ctx)

    def fmt(self, e: TruncatedElement) -> str:
        return str(e)

    def key(self):
        return ("trunc", self.ctx)


@lru_cache(maxsize=4096)
def _binomial_column(n: int, length: int) -> Tuple[int, ...]:
    return tuple(binomial(n, r) for r in range(length))


def to_truncated(f: LaurentPoly, ctx: TruncationContext) -> TruncatedElement:
    """Image of ``f`` under ``x_i -> 1 + a_i``, ``t -> 1 + s``.

    Negative powers expand as terminating geometric series, e.g.
    ``x^-1 -> 1 - a + a^2 - ...`` modulo ``(a)^c``.
    """
    if f.rank != ctx.rank:
        raise RankMismatch(f"polynomial rank {f.rank} vs context rank {ctx.rank}")
    k, c, D = ctx.rank, ctx.c, ctx.D
    mons = ctx.monomials
    arr = np.zeros((ctx.size, D), dtype=object)
    arr[:] = 0
    for e, coeff in f.terms.items():
        cols = [_binomial_column(e[i], c) for i in range(k)]
        scol = _binomial_column(e[k], D)
        avec = np.array([coeff * _prod(cols[i][m[i]] for i in range(k)) for m in mons], dtype=object)
        arr += np.outer(avec, np.array(scol, dtype=object))
    return TruncatedElement(ctx, _normalize(arr))


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def sigma_order(f, ctx: Optional[TruncationContext] = None) -> int:
    """Smallest total a-degree among the terms of the truncated image (``c`` if none)."""
    if isinstance(f, TruncatedElement):
        return f.sigma_order()
    if isinstance(f, RingMatrix):
        return min(sigma_order(a, ctx) for r in f.rows for a in r)
    if ctx is None:
        raise ValueError("a truncation context is required for LaurentPoly input")
    return to_truncated(f, ctx).sigma_order()


def is_in_sigma_power(f: LaurentPoly, m: int) -> bool:
    """Decide ``f`` in ``Sigma^m`` as an ideal of ``R = Z[x_i^±1]``.

    Negative exponents are cleared by a positive monomial (a unit, so membership
    is unchanged); the resulting polynomial is expanded exactly at
    ``x_i = 1 + a_i`` and every coefficient of degree below ``m`` must vanish.
    Coefficients of degree ``>= m`` never matter, so the expansion is only
    materialized below ``m``.
    """
    if f.has_t():
        raise ValueError("is_in_sigma_power is defined on R; the polynomial contains t")
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0 or f.is_zero():
        return True
    lo = f.min_exponents()
    cleared = f.shift(tuple(-min(0, v) for v in lo))
    return to_truncated(cleared, TruncationContext(f.rank, m, 1)).is_zero()


@dataclass
class SeriesExpansion:
    """``M = M_f + s A_1 + s^2 A_2 + ...`` with ``s = t - 1``, truncated below ``D``."""

    constant: RingMatrix
    coefficients: List[RingMatrix] = field(default_factory=list)

    def term(self, i: int) -> RingMatrix:
        return self.constant if i == 0 else self.coefficients[i - 1]

    @property
    def D(self) -> int:
        return len(self.coefficients) + 1

    def reassemble(self, ctx: TruncationContext) -> RingMatrix:
        ring = TruncatedRing(ctx)
        n = self.constant.dim
        rows = []
        for r in range(n):
            row = []
            for col in range(n):
                arr = np.zeros((ctx.size, ctx.D), dtype=object)
                for i in range(min(self.D, ctx.D)):
                    arr[:, i] = self.term(i).rows[r][col].coeffs[:, 0]
                row.append(TruncatedElement(ctx, _normalize(arr)))
            rows.append(row)
        return RingMatrix(ring, rows)


def expansion_of_matrix(M: RingMatrix) -> SeriesExpansion:
    """Split a matrix over the truncated ring into its s-slices."""
    ctx = M.ring.ctx
    sub = TruncatedRing(ctx.a_only())
    slices = [M.map(lambda e, i=i: e.s_coefficient(i), sub) for i in range(ctx.D)]
    return SeriesExpansion(slices[0], slices[1:])


def series_coefficients(W, ctx: TruncationContext) -> SeriesExpansion:
    """``(t-1)``-expansion of a word or an ``R[t]`` matrix, exact below ``D``."""
    ring = TruncatedRing(ctx)
    if isinstance(W, RingMatrix):
        if isinstance(W.ring, TruncatedRing):
            M = W
        else:
            M = W.map_into(ring)
    else:
        from .groups import evaluate_word, make_generators

        M = evaluate_word(W, ring, make_generators(ctx.rank))
    return expansion_of_matrix(M)
