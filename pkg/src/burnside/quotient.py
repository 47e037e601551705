"""The quotient ring ``S(q) = R / I(q) Sigma`` and its Laurent extension in ``t``.

``S(q)`` is realized as ``Z^m / L`` where ``Z^m`` is the truncated module
``Z[a] / (a)^c0`` and ``L`` the saturated lattice of ``I(q) Sigma``.  The
truncation ``c0 >= e*phi(q) + 1`` is harmless only because
``Sigma^(e*phi(q)) <= I(q)`` (so ``Sigma^c0 <= I(q) Sigma``); that inclusion is
imported, not proven here, and every report flags it as a trusted assumption.

Elements of ``S(q)[t, t^-1]`` are ``(tmin, array)`` pairs: row ``r`` of the
array is the canonical residue of the coefficient of ``t^(tmin + r)``.
Arithmetic is exact: products use int64 only under a proven overflow bound
and Python integers otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ideals import (
    BurnsideParams,
    IdealLattice,
    coordinates,
    lattice_sha256,
    monomial_vector,
    saturate_ideal_lattice,
    shift_vector,
)
from .laurent import LaurentPoly, format_poly
from .truncated import TruncationContext, _binomial_column, _maxabs

_SAFE = 2**62

TRUSTED_ABSORPTION = "Sigma^(e*phi(q)) <= I(q) (imported result; makes the Sigma^c0 truncation exact)"


@dataclass
class QuotientRingS:
    params: BurnsideParams
    c0: int
    variant: str
    ideal: IdealLattice
    k: int = 2

    @property
    def ctx(self) -> TruncationContext:
        return TruncationContext(self.k, self.c0, 1)

    @property
    def m(self) -> int:
        return self.ctx.size

    @property
    def lattice(self):
        return self.ideal.lattice

    @cached_property
    def _reducer(self) -> Tuple[np.ndarray, np.ndarray]:
        basis = self.lattice.basis
        H = np.array(basis, dtype=np.int64).reshape(len(basis), self.m)
        piv = np.array([next(j for j, v in enumerate(r) if v) for r in basis], dtype=np.intp)
        return H, piv

    @cached_property
    def structure(self) -> np.ndarray:
        """``C[i, j, k] = 1`` when basis monomial i times monomial j is monomial k."""
        ctx = self.ctx
        C = np.zeros((self.m, self.m, self.m), dtype=np.int64)
        pi, pj, pk = ctx.pair_table
        C[pi, pj, pk] = 1
        return C

    def reduce_rows(self, X: np.ndarray) -> np.ndarray:
        """Reduce every row of ``X`` to its canonical residue (in place when possible)."""
        H, piv = self._reducer
        if X.dtype == object:
            Hs = H.astype(object)
        else:
            Hs = H
        for r in range(H.shape[0]):
            c = piv[r]
            f = X[:, c] // Hs[r, c]
            if f.any():
                X = X - f[:, None] * Hs[r][None, :]
        return X

    def residue(self, f) -> Tuple[int, ...]:
        vec = coordinates(f, self.ctx) if not isinstance(f, tuple) else f
        return self.lattice.reduce(vec)

    def mul(self, u: Sequence[int], v: Sequence[int]) -> Tuple[int, ...]:
        out = [0] * self.m
        pi, pj, pk = self.ctx.pair_table
        for i, j, k in zip(pi.tolist(), pj.tolist(), pk.tolist()):
            if u[i] and v[j]:
                out[k] += u[i] * v[j]
        return self.lattice.reduce(out)

    def add(self, u: Sequence[int], v: Sequence[int]) -> Tuple[int, ...]:
        return self.lattice.reduce([a + b for a, b in zip(u, v)])

    def one(self) -> Tuple[int, ...]:
        return self.lattice.reduce(monomial_vector((0,) * self.k, self.ctx))

    def additive_structure(self) -> Tuple[int, Tuple[int, ...]]:
        return self.lattice.quotient_structure()

    def is_ideal_closed(self) -> bool:
        ctx = self.ctx
        for row in self.lattice.basis:
            for i in range(self.k):
                e = tuple(1 if j == i else 0 for j in range(self.k))
                if not self.lattice.contains(shift_vector(row, e, ctx)):
                    return False
        return True

    def basis_names(self) -> List[str]:
        names = self.ctx.names()[:-1]
        out = []
        for e in self.ctx.monomials:
            f = LaurentPoly.monomial(self.k, e)
            out.append(format_poly(f, names + ("t",)))
        return out

    def describe(self) -> dict:
        free, divs = self.additive_structure()
        return {
            "q": self.params.q,
            "k": self.k,
            "c0": self.c0,
            "variant": self.variant,
            "unit_bound_B": self.ideal.B,
            "unit_bound_examined": self.ideal.B_examined,
            "stabilization": self.ideal.history,
            "free_rank": free,
            "elementary_divisors": list(divs),
            "basis_monomials": self.basis_names(),
            "lattice_rows": self.lattice.rows_text(),
            "cache_sha256": lattice_sha256(self.ideal),
            "trusted": [TRUSTED_ABSORPTION],
        }


_S_CACHE: Dict[Tuple, QuotientRingS] = {}


def build_quotient_S(
    params: BurnsideParams,
    c0: Optional[int] = None,
    variant: str = "include-unit-1",
    k: int = 2,
    cache_dir: Optional[str] = None,
    B: int = 1,
) -> QuotientRingS:
    if c0 is None:
        c0 = params.ephi + 1
    if c0 < params.ephi + 1:
        raise ValueError(f"c0 must be at least e*phi(q) + 1 = {params.ephi + 1}")
    key = (params, c0, variant, k, B, cache_dir)
    if key in _S_CACHE:
        return _S_CACHE[key]
    lat = saturate_ideal_lattice(params, "ISigma", c0, B=B, variant=variant, k=k, cache_dir=cache_dir)
    S = QuotientRingS(params, c0, variant, lat, k)
    _S_CACHE[key] = S
    return S


# ----- S(q)[t, t^-1] elements -------------------------------------------------


class SLaurent:
    __slots__ = ("S", "tmin", "arr")

    def __init__(self, S: QuotientRingS, tmin: int, arr: np.ndarray, reduced: bool = False):
        if not reduced and arr.shape[0]:
            arr = S.reduce_rows(arr)
        nz = np.nonzero(np.any(arr != 0, axis=1))[0]
        if nz.size == 0:
            arr = np.zeros((0, S.m), dtype=np.int64)
            tmin = 0
        else:
            lo, hi = int(nz[0]), int(nz[-1]) + 1
            arr = arr[lo:hi]
            tmin += lo
            if arr.dtype == object and _maxabs(arr) < _SAFE:
                arr = arr.astype(np.int64)
        self.S = S
        self.tmin = tmin
        self.arr = arr

    @classmethod
    def constant_vec(cls, S: QuotientRingS, vec: Sequence[int], texp: int = 0) -> "SLaurent":
        return cls(S, texp, np.array([list(vec)], dtype=object))

    def is_zero(self) -> bool:
        return self.arr.shape[0] == 0

    @property
    def tmax(self) -> int:
        return self.tmin + self.arr.shape[0] - 1

    def _lift(self, other):
        if isinstance(other, int):
            vec = [0] * self.S.m
            vec[0] = other
            return SLaurent.constant_vec(self.S, vec)
        return other

    def _combine(self, other: "SLaurent", sign: int) -> "SLaurent":
        other = self._lift(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other if sign > 0 else -other
        lo = min(self.tmin, other.tmin)
        hi = max(self.tmax, other.tmax)
        big = _maxabs(self.arr) + _maxabs(other.arr) >= _SAFE
        dtype = object if big or self.arr.dtype == object or other.arr.dtype == object else np.int64
        out = np.zeros((hi - lo + 1, self.S.m), dtype=dtype)
        out[self.tmin - lo: self.tmin - lo + self.arr.shape[0]] += self.arr
        if sign > 0:
            out[other.tmin - lo: other.tmin - lo + other.arr.shape[0]] += other.arr
        else:
            out[other.tmin - lo: other.tmin - lo + other.arr.shape[0]] -= other.arr
        return SLaurent(self.S, lo, out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return SLaurent(self.S, self.tmin, -self.arr)

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return SLaurent(self.S, 0, np.zeros((0, self.S.m), dtype=np.int64), reduced=True)
        A, B = self.arr, other.arr
        # iterate over the shorter operand's t-rows
        if A.shape[0] > B.shape[0]:
            A, B = B, A
            swap = True
        else:
            swap = False
        nA, nB = A.shape[0], B.shape[0]
        m = self.S.m
        bound = _maxabs(A) * _maxabs(B) * m * nA
        dtype = np.int64 if bound < _SAFE else object
        C = self.S.structure if dtype == np.int64 else self.S.structure.astype(object)
        # commutative coefficients, so the operand order does not matter
        Mall = np.tensordot(A.astype(dtype), C, axes=([1], [0]))  # (nA, m, m)
        Bd = B.astype(dtype)
        out = np.zeros((nA + nB - 1, m), dtype=dtype)
        for tau in range(nA):
            row = A[tau]
            if not row.any():
                continue
            out[tau:tau + nB] += Bd @ Mall[tau]
        del swap
        return SLaurent(self.S, self.tmin + other.tmin, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._lift(other)
        if not isinstance(other, SLaurent):
            return NotImplemented
        return (
            self.tmin == other.tmin
            and self.arr.shape == other.arr.shape
            and bool(np.all(self.arr == other.arr))
        )

    def __hash__(self) -> int:
        return hash((self.tmin, tuple(map(int, self.arr.ravel()))))

    def terms(self) -> Dict[Tuple[int, ...], int]:
        out = {}
        mons = self.S.ctx.monomials
        rows, cols = np.nonzero(self.arr)
        for r, c in zip(rows.tolist(), cols.tolist()):
            out[mons[c] + (self.tmin + r,)] = int(self.arr[r, c])
        return out

    def at_t_one(self) -> "SLaurent":
        if self.is_zero():
            return self
        total = self.arr.astype(object).sum(axis=0)[None, :]
        return SLaurent(self.S, 0, total)

    def __str__(self) -> str:
        names = self.S.ctx.names()[:-1] + ("t",)
        return format_poly(LaurentPoly(self.S.k, self.terms()), names)

    def __repr__(self) -> str:
        return f"SLaurent(q={self.S.params.q}, {self})"


class SRing:
    """Ring context ``S(q)[t, t^-1]`` (``with_t=True``) or ``S(q)`` (``t -> 1``)."""

    def __init__(self, S: QuotientRingS, with_t: bool = True):
        self.S = S
        self.with_t = with_t
        self.rank = S.k
        self.params = S.params
        self.name = f"S({S.params.q})[t]" if with_t else f"S({S.params.q})"
        self._mono_cache: Dict[Tuple[int, ...], List[int]] = {}

    def zero(self) -> SLaurent:
        return SLaurent(self.S, 0, np.zeros((0, self.S.m), dtype=np.int64), reduced=True)

    def one(self) -> SLaurent:
        return SLaurent.constant_vec(self.S, self.S.one())

    def _mono(self, e: Tuple[int, ...]) -> List[int]:
        vec = self._mono_cache.get(e)
        if vec is None:
            c0 = self.S.c0
            cols = [_binomial_column(x, c0) for x in e]
            vec = []
            for a in self.S.ctx.monomials:
                v = 1
                for i, ai in enumerate(a):
                    v *= cols[i][ai]
                vec.append(v)
            self._mono_cache[e] = vec
        return vec

    def image(self, f: LaurentPoly) -> SLaurent:
        if f.rank != self.rank:
            raise ValueError(f"rank {f.rank} polynomial in rank {self.rank} ring")
        if not self.with_t:
            f = f.at_t_one()
        if f.is_zero():
            return self.zero()
        rows: Dict[int, List[int]] = {}
        for e, coeff in f.terms.items():
            acc = rows.setdefault(e[-1], [0] * self.S.m)
            for i, v in enumerate(self._mono(e[:-1])):
                if v:
                    acc[i] += coeff * v
        lo, hi = min(rows), max(rows)
        arr = np.zeros((hi - lo + 1, self.S.m), dtype=object)
        for texp, vec in rows.items():
            arr[texp - lo] = vec
        return SLaurent(self.S, lo, arr)

    def fmt(self, e: SLaurent) -> str:
        return str(e)

    def key(self):
        return ("S", self.S.params.q, self.S.c0, self.S.variant, self.S.k, self.with_t)
