"""Integer lattices in Hermite normal form.

Rows are kept in row-style HNF: pivots strictly move right, pivots are
positive, and every entry above a pivot is reduced into ``[0, pivot)``.  That
makes the basis canonical, so lattice equality is basis equality and the
residue of a vector modulo the lattice is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[int, ...]


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _pivot(row: Sequence[int]) -> int:
    for j, v in enumerate(row):
        if v:
            return j
    return -1


class _Echelon:
    """Mutable echelon basis used while folding generators in."""

    def __init__(self, m: int):
        self.m = m
        self.rows: dict = {}  # pivot column -> row (list)

    def add(self, v: Sequence[int]) -> bool:
        """Fold ``v`` in; return True when the lattice grew."""
        v = list(v)
        if len(v) != self.m:
            raise ValueError(f"vector of length {len(v)} in ambient rank {self.m}")
        grew = False
        col = _pivot(v)
        while col >= 0:
            row = self.rows.get(col)
            if row is None:
                if v[col] < 0:
                    v = [-x for x in v]
                self.rows[col] = v
                return True
            p, a = row[col], v[col]
            if a % p == 0:
                f = a // p
                v = [x - f * y for x, y in zip(v, row)]
            else:
                g, s, t = xgcd(p, a)
                new = [s * y + t * x for x, y in zip(v, row)]
                v = [(a // g) * y - (p // g) * x for x, y in zip(v, row)]
                self.rows[col] = new
                grew = True
            col = _pivot(v)
        return grew

    def basis(self) -> Tuple[Vector, ...]:
        cols = sorted(self.rows)
        rows = [list(self.rows[c]) for c in cols]
        # reduce entries above pivots; row i is zero left of its pivot, so
        # earlier columns stay reduced
        for i in range(len(rows)):
            ci = cols[i]
            p = rows[i][ci]
            for r in range(i):
                f = rows[r][ci] // p
                if f:
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[i])]
        return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class IntegerLattice:
    """Subgroup of ``Z^m`` given by its HNF basis."""

    m: int
    basis: Tuple[Vector, ...]

    @classmethod
    def from_generators(cls, m: int, gens: Iterable[Sequence[int]]) -> "IntegerLattice":
        ech = _Echelon(m)
        for g in gens:
            ech.add(g)
        return cls(m, ech.basis())

    @classmethod
    def zero(cls, m: int) -> "IntegerLattice":
        return cls(m, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(_pivot(r) for r in self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of ``v`` modulo the lattice."""
        if len(v) != self.m:
            raise ValueError(f"vector of length {len(v)} in ambient rank {self.m}")
        v = list(v)
        for row in self.basis:
            c = _pivot(row)
            f = v[c] // row[c]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def is_sublattice_of(self, other: "IntegerLattice") -> bool:
        return all(other.contains(r) for r in self.basis)

    def join(self, other: "IntegerLattice") -> "IntegerLattice":
        return IntegerLattice.from_generators(self.m, list(self.basis) + list(other.basis))

    def quotient_structure(self) -> Tuple[int, Tuple[int, ...]]:
        """``Z^m / L`` as (free rank, elementary divisors > 1) via Smith normal form."""
        free = self.m - self.rank
        if not self.basis:
            return free, ()
        from sympy import ZZ
        from sympy.polys.matrices import DomainMatrix
        from sympy.polys.matrices.normalforms import invariant_factors

        dm = DomainMatrix([[ZZ(x) for x in r] for r in self.basis], (self.rank, self.m), ZZ)
        divs = tuple(int(d) for d in invariant_factors(dm) if int(d) != 1)
        return free, divs

    def rows_text(self) -> List[str]:
        return [" ".join(str(x) for x in r) for r in self.basis]


def hnf(m: int, gens: Iterable[Sequence[int]]) -> Tuple[Vector, ...]:
    return IntegerLattice.from_generators(m, gens).basis
