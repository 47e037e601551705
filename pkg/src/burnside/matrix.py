"""Dense square matrices over the supported rings, plus the basic ring contexts.

A ring context knows its zero and one and how to map a Laurent polynomial into
the ring (``image``).  Generators are always written down as Laurent
polynomial matrices and pushed into a target ring with ``RingMatrix.map_into``;
since every ``image`` is a ring homomorphism, evaluating a word in the target
ring agrees with evaluating it over ``R[t, t^-1]`` and mapping afterwards.
"""

from __future__ import annotations

from typing import Any, Callable, Dict, Iterable, Mapping, Sequence, Tuple

from .laurent import LaurentPoly, format_poly


class ContextMismatch(ValueError):
    pass


class LaurentRing:
    """``R[t, t^-1]`` (``with_t=True``) or ``R`` obtained by ``t -> 1``."""

    def __init__(self, rank: int, with_t: bool = True):
        self.rank = rank
        self.with_t = with_t
        self.name = "R[t]" if with_t else "R"

    def zero(self):
        return LaurentPoly.zero(self.rank)

    def one(self):
        return LaurentPoly.one(self.rank)

    def image(self, f: LaurentPoly):
        return f if self.with_t else f.at_t_one()

    def fmt(self, f: LaurentPoly) -> str:
        return format_poly(f)

    def key(self):
        return ("laurent", self.rank, self.with_t)


class IntegerSpecialization:
    """Evaluate every variable at ±1, landing in the integers."""

    def __init__(self, rank: int, values: Mapping[int, int], name: str = "Z"):
        if set(values) != set(range(rank + 1)):
            raise ValueError("an integer specialization must assign every variable")
        self.rank = rank
        self.values = dict(values)
        self.name = name

    @classmethod
    def sanov(cls, rank: int = 2) -> "IntegerSpecialization":
        # x = 1, y = t = -1 for rank 2; extra variables sent to 1
        vals = {i: 1 for i in range(rank + 1)}
        vals[1] = -1
        vals[rank] = -1
        return cls(rank, vals, name="sanov")

    def zero(self):
        return 0

    def one(self):
        return 1

    def image(self, f: LaurentPoly) -> int:
        return f.specialize(self.values)

    def fmt(self, v: int) -> str:
        return str(v)

    def key(self):
        return ("int", self.rank, tuple(sorted(self.values.items())))


class RingMatrix:
    """Immutable dense ``n x n`` matrix with entries in ``ring``."""

    __slots__ = ("ring", "rows")

    def __init__(self, ring, rows: Iterable[Iterable[Any]]):
        self.ring = ring
        self.rows: Tuple[Tuple[Any, ...], ...] = tuple(tuple(r) for r in rows)
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, ring, n: int) -> "RingMatrix":
        z, o = ring.zero(), ring.one()
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, ring, n: int, value) -> "RingMatrix":
        z = ring.zero()
        return cls(ring, [[value if i == j else z for j in range(n)] for i in range(n)])

    def _check(self, other: "RingMatrix") -> None:
        if not isinstance(other, RingMatrix):
            raise TypeError(f"cannot combine RingMatrix with {type(other).__name__}")
        if other.dim != self.dim:
            raise ContextMismatch(f"dimension {self.dim} vs {other.dim}")
        if self.ring is not other.ring and _ring_key(self.ring) != _ring_key(other.ring):
            raise ContextMismatch(f"ring {self.ring.name} vs {other.ring.name}")

    def __mul__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        n = self.dim
        cols = list(zip(*other.rows))
        z = self.ring.zero()
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = z
                for a, b in zip(row, col):
                    acc = acc + a * b
                new_row.append(acc)
            out.append(new_row)
        return RingMatrix(self.ring, out)

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        return RingMatrix(self.ring, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        return RingMatrix(self.ring, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "RingMatrix":
        return RingMatrix(self.ring, [[c * a for a in r] for r in self.rows])

    def __pow__(self, n: int) -> "RingMatrix":
        if n < 0:
            raise ValueError("use an explicit inverse for negative powers")
        result = RingMatrix.identity(self.ring, self.dim)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def is_identity(self) -> bool:
        return self == RingMatrix.identity(self.ring, self.dim)

    def map(self, fn: Callable[[Any], Any], ring=None) -> "RingMatrix":
        return RingMatrix(ring or self.ring, [[fn(a) for a in r] for r in self.rows])

    def map_into(self, ring) -> "RingMatrix":
        return RingMatrix(ring, [[ring.image(a) for a in r] for r in self.rows])

    def transpose(self) -> "RingMatrix":
        return RingMatrix(self.ring, list(zip(*self.rows)))

    def row_times(self, v: Sequence[Any]) -> Tuple[Any, ...]:
        """Row vector ``v`` times this matrix."""
        z = self.ring.zero()
        out = []
        for j in range(self.dim):
            acc = z
            for i in range(self.dim):
                acc = acc + v[i] * self.rows[i][j]
            out.append(acc)
        return tuple(out)

    def to_text(self) -> str:
        fmt = getattr(self.ring, "fmt", str)
        return "[" + ", ".join("[" + ", ".join(fmt(a) for a in r) + "]" for r in self.rows) + "]"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RingMatrix({self.ring.name}, {self.to_text()})"


def _ring_key(ring):
    key = getattr(ring, "key", None)
    return key() if key else id(ring)


def mat_arith(A: RingMatrix, B: RingMatrix, op: str) -> RingMatrix:
    if op == "mul":
        return A * B
    if op == "add":
        return A + B
    if op == "sub":
        return A - B
    raise ValueError(f"unknown operation {op!r}")


def mat_eq(A: RingMatrix, B: RingMatrix) -> bool:
    A._check(B)
    return A == B


def poly_matrix(rank: int, rows: Sequence[Sequence[Any]]) -> RingMatrix:
    """Build an ``R[t]`` matrix from LaurentPoly / int entries."""
    ring = LaurentRing(rank)
    conv = [[a if isinstance(a, LaurentPoly) else LaurentPoly.constant(rank, a) for a in r] for r in rows]
    return RingMatrix(ring, conv)
