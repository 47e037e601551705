"""Sparse multivariate Laurent polynomials over the integers.

A polynomial of rank ``k`` lives in ``Z[x1^±1, ..., xk^±1, t^±1]``.  Exponent
vectors always have length ``k + 1`` with the ``t`` exponent last, so elements
of the t-free ring ``R`` are simply polynomials whose t-exponents are all zero.

For rank 2 the variables print as ``x``, ``y``, ``t``; for other ranks as
``x1 .. xk``, ``t``.  The parser accepts both spellings.
"""

from __future__ import annotations

import os
import re
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

Exponents = Tuple[int, ...]

# Debug audit: when enabled every constructed polynomial is checked for stored
# zero coefficients and exponent-vector length.
AUDIT = bool(os.environ.get("BURNSIDE_AUDIT"))


def set_audit(flag: bool) -> None:
    global AUDIT
    AUDIT = flag


def variable_names(rank: int) -> Tuple[str, ...]:
    if rank == 2:
        return ("x", "y", "t")
    return tuple(f"x{i}" for i in range(1, rank + 1)) + ("t",)


class RankMismatch(ValueError):
    pass


class LaurentPoly:
    """Immutable sparse Laurent polynomial with arbitrary-precision coefficients."""

    __slots__ = ("rank", "terms", "_hash")

    def __init__(self, rank: int, terms: Optional[Mapping[Exponents, int]] = None):
        self.rank = rank
        if terms is None:
            self.terms: Dict[Exponents, int] = {}
        else:
            self.terms = {e: c for e, c in terms.items() if c}
        self._hash = None
        if AUDIT:
            self._audit()

    @classmethod
    def _raw(cls, rank: int, terms: Dict[Exponents, int]) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj.rank = rank
        obj.terms = terms
        obj._hash = None
        if AUDIT:
            obj._audit()
        return obj

    def _audit(self) -> None:
        for e, c in self.terms.items():
            if c == 0:
                raise AssertionError(f"stored zero coefficient at {e}")
            if len(e) != self.rank + 1:
                raise AssertionError(f"exponent vector {e} has wrong length for rank {self.rank}")

    # ----- constructors -------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {})

    @classmethod
    def constant(cls, rank: int, c: int) -> "LaurentPoly":
        return cls._raw(rank, {(0,) * (rank + 1): c} if c else {})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(rank, 1)

    @classmethod
    def monomial(cls, rank: int, exps: Iterable[int], coeff: int = 1) -> "LaurentPoly":
        e = tuple(exps)
        if len(e) == rank:
            e = e + (0,)
        if len(e) != rank + 1:
            raise RankMismatch(f"exponent vector {e} does not fit rank {rank}")
        return cls._raw(rank, {e: coeff} if coeff else {})

    @classmethod
    def var(cls, rank: int, index: int, power: int = 1) -> "LaurentPoly":
        """``index`` runs 0..k-1 for x-variables and k for t."""
        e = [0] * (rank + 1)
        e[index] = power
        return cls._raw(rank, {tuple(e): 1})

    @classmethod
    def t(cls, rank: int, power: int = 1) -> "LaurentPoly":
        return cls.var(rank, rank, power)

    # ----- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_positive_unit(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) == 1

    def has_t(self) -> bool:
        return any(e[-1] for e in self.terms)

    def constant_term(self) -> int:
        return self.terms.get((0,) * (self.rank + 1), 0)

    def leading_exponent(self) -> Exponents:
        if len(self.terms) != 1:
            raise ValueError("not a monomial")
        return next(iter(self.terms))

    def min_exponents(self) -> Exponents:
        if not self.terms:
            return (0,) * (self.rank + 1)
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self) -> Exponents:
        if not self.terms:
            return (0,) * (self.rank + 1)
        return tuple(max(col) for col in zip(*self.terms))

    # ----- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.rank != self.rank:
                raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                del out[e]
        return LaurentPoly._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPoly.zero(self.rank)
        if len(a) < len(b):
            a, b = b, a
        out: Dict[Exponents, int] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return LaurentPoly._raw(self.rank, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_monomial() or abs(next(iter(self.terms.values()))) != 1:
                raise ValueError("negative powers only for unit monomials")
            return self.unit_inverse() ** (-n)
        result = LaurentPoly.one(self.rank)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ValueError(f"{self} is not a unit")
        (e, c), = self.terms.items()
        if c not in (1, -1):
            raise ValueError(f"{self} is not a unit")
        return LaurentPoly._raw(self.rank, {tuple(-i for i in e): c})

    def shift(self, exps: Exponents) -> "LaurentPoly":
        """Multiply by the positive monomial with the given exponents."""
        return LaurentPoly._raw(
            self.rank, {tuple(i + j for i, j in zip(e, exps)): c for e, c in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self.terms.items())))
        return self._hash

    # ----- ring maps ----------------------------------------------------
    def specialize(self, assignment: Mapping[int, Union[int, "LaurentPoly"]]) -> Union["LaurentPoly", int]:
        """Substitute variables (by index; ``rank`` is t) with ±1 or unit monomials.

        Unassigned variables are kept.  When every variable is assigned an
        integer the result is an ``int``.
        """
        n = self.rank + 1
        for idx, val in assignment.items():
            if not 0 <= idx < n:
                raise KeyError(f"variable index {idx} out of range")
            if isinstance(val, int):
                if val not in (1, -1):
                    raise ValueError(f"non-invertible value {val} for variable {idx}")
            elif isinstance(val, LaurentPoly):
                if val.rank != self.rank:
                    raise RankMismatch("assignment polynomial has a different rank")
                if not val.is_monomial() or abs(next(iter(val.terms.values()))) != 1:
                    raise ValueError(f"non-invertible value {val} for variable {idx}")
            else:
                raise TypeError(f"unsupported assignment value {val!r}")

        all_ints = len(assignment) == n and all(isinstance(v, int) for v in assignment.values())
        if all_ints:
            total = 0
            for e, c in self.terms.items():
                sign = 1
                for idx, val in assignment.items():
                    if val == -1 and e[idx] % 2:
                        sign = -sign
                total += sign * c
            return total

        out: Dict[Exponents, int] = {}
        for e, c in self.terms.items():
            ne = list(e)
            coeff = c
            for idx, val in assignment.items():
                p = e[idx]
                ne[idx] -= p
                if isinstance(val, int):
                    if val == -1 and p % 2:
                        coeff = -coeff
                else:
                    (ve, vc), = val.terms.items()
                    if vc == -1 and p % 2:
                        coeff = -coeff
                    for i in range(n):
                        ne[i] += p * ve[i]
            key = tuple(ne)
            out[key] = out.get(key, 0) + coeff
        return LaurentPoly._raw(self.rank, {e: c for e, c in out.items() if c})

    def augmentation(self) -> "LaurentPoly":
        """Image under every ``x_i -> 1`` (t is kept)."""
        return self.specialize({i: 1 for i in range(self.rank)})

    def at_t_one(self) -> "LaurentPoly":
        return self.specialize({self.rank: 1})

    def div_one_minus(self, index: int) -> "LaurentPoly":
        """Exact quotient ``self / (1 - v)`` for the variable ``v`` at ``index``.

        Raises ``ValueError`` if the division is not exact.
        """
        # group terms by the remaining exponents, then solve g_n - g_{n-1} = f_n
        groups: Dict[Exponents, Dict[int, int]] = {}
        for e, c in self.terms.items():
            rest = e[:index] + e[index + 1:]
            groups.setdefault(rest, {})[e[index]] = c
        out: Dict[Exponents, int] = {}
        for rest, col in groups.items():
            lo, hi = min(col), max(col)
            running = 0
            for n in range(lo, hi + 1):
                running += col.get(n, 0)
                if n < hi and running:
                    out[rest[:index] + (n,) + rest[index:]] = running
            if running:
                raise ValueError(f"{self} is not divisible by 1 - {variable_names(self.rank)[index]}")
        return LaurentPoly._raw(self.rank, out)

    # ----- text ---------------------------------------------------------
    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.rank}, {format_poly(self)!r})"


def format_poly(f: LaurentPoly, names: Optional[Tuple[str, ...]] = None) -> str:
    names = names or variable_names(f.rank)
    if not f.terms:
        return "0"
    parts = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        factors = []
        for name, p in zip(names, e):
            if p == 1:
                factors.append(name)
            elif p:
                factors.append(f"{name}^{p}")
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(\^)|(\*)|([+-])|(\()|(\)))")


def _name_index(rank: int, name: str) -> int:
    names = variable_names(rank)
    if name in names:
        return names.index(name)
    if rank == 2 and name in ("x1", "x2"):
        return int(name[1]) - 1
    if rank != 2 and name in ("x", "y"):
        return "xy".index(name)
    raise ValueError(f"unknown variable {name!r} for rank {rank}")


def parse_poly(text: str, rank: int = 2, names: Optional[Tuple[str, ...]] = None) -> LaurentPoly:
    """Parse the textual format, e.g. ``1 - x + 2*x^-1*y^3*t^-2``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        tokens.append(next((i, g) for i, g in enumerate(m.groups()) if g is not None))
        pos = m.end()
    if names is not None:
        lookup = {n: i for i, n in enumerate(names)}
    else:
        lookup = None

    def index_of(name: str) -> int:
        if lookup is not None:
            if name not in lookup:
                raise ValueError(f"unknown variable {name!r}")
            return lookup[name]
        return _name_index(rank, name)

    result: Dict[Exponents, int] = {}
    i = 0
    n = len(tokens)
    if n == 0:
        raise ValueError("empty polynomial text")
    first = True
    while i < n:
        sign = 1
        if tokens[i][0] == 4:
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ValueError("expected + or - between terms")
        first = False
        coeff = 1
        exps = [0] * (rank + 1)
        expect_factor = True
        while expect_factor:
            if i >= n:
                raise ValueError("dangling operator")
            kind, val = tokens[i]
            if kind == 0:
                coeff *= int(val)
                i += 1
            elif kind == 1:
                idx = index_of(val)
                i += 1
                power = 1
                if i < n and tokens[i][0] == 2:
                    i += 1
                    power, i = _parse_exponent(tokens, i)
                exps[idx] += power
            else:
                raise ValueError(f"unexpected token {val!r}")
            if i < n and tokens[i][0] == 3:
                i += 1
            else:
                expect_factor = False
        key = tuple(exps)
        result[key] = result.get(key, 0) + sign * coeff
    return LaurentPoly(rank, result)


def _parse_exponent(tokens, i):
    paren = False
    if i < len(tokens) and tokens[i][0] == 5:
        paren = True
        i += 1
    sign = 1
    if i < len(tokens) and tokens[i][0] == 4:
        sign = -1 if tokens[i][1] == "-" else 1
        i += 1
    if i >= len(tokens) or tokens[i][0] != 0:
        raise ValueError("expected integer exponent")
    power = sign * int(tokens[i][1])
    i += 1
    if paren:
        if i >= len(tokens) or tokens[i][0] != 6:
            raise ValueError("unbalanced parenthesis in exponent")
        i += 1
    return power, i


def lp_arith(f: LaurentPoly, g: LaurentPoly, op: str) -> LaurentPoly:
    if f.rank != g.rank:
        raise RankMismatch(f"rank {f.rank} vs rank {g.rank}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")
