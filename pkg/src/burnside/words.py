"""Group words over the generators ``g1 = M1``, ``gj = Mj Tj``.

Two representations are used:

* ``GroupWord`` is the flat, freely reduced letter sequence.
* ``Expr`` is a small expression tree (generators, products, powers and
  commutators).  Deep commutators are evaluated structurally, which keeps
  the cost linear in the tree size rather than in the flattened length.

Text format: letters ``g1 g2^-1``, commutators ``[w1,w2]`` (more arguments
nest to the left, ``[a,b,c] = [[a,b],c]``), parentheses for grouping and
``^n`` for powers.  The empty string and ``1`` denote the identity.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

Letter = Tuple[int, int]  # (generator index 1..k, nonzero exponent)


@dataclass(frozen=True)
class GroupWord:
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for i, (g, e) in enumerate(self.letters):
            if e == 0 or g < 1:
                raise ValueError(f"bad letter {(g, e)}")
            if i and self.letters[i - 1][0] == g:
                raise ValueError("adjacent letters must use distinct generators")

    @classmethod
    def from_letters(cls, letters: Sequence[Letter]) -> "GroupWord":
        """Freely reduce an arbitrary letter sequence."""
        out: List[List[int]] = []
        for g, e in letters:
            if e == 0:
                continue
            if out and out[-1][0] == g:
                out[-1][1] += e
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([g, e])
        return cls(tuple((g, e) for g, e in out))

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord.from_letters(self.letters + other.letters)

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)

    def as_expr(self) -> "Expr":
        return Seq(tuple(Gen(g, e) for g, e in self.letters))

    def __str__(self) -> str:
        return format_letters(self.letters)


def format_letters(letters) -> str:
    if not letters:
        return "1"
    return " ".join(f"g{g}" if e == 1 else f"g{g}^{e}" for g, e in letters)


class Expr:
    """Base class for word expression trees."""

    def flatten(self) -> GroupWord:
        return GroupWord.from_letters(self.letters())

    def letters(self) -> List[Letter]:
        raise NotImplementedError

    def max_generator(self) -> int:
        return self.flatten().max_generator()


@dataclass(frozen=True)
class Gen(Expr):
    index: int
    exp: int = 1

    def letters(self):
        return [(self.index, self.exp)]

    def __str__(self):
        return f"g{self.index}" if self.exp == 1 else f"g{self.index}^{self.exp}"


@dataclass(frozen=True)
class Seq(Expr):
    parts: Tuple[Expr, ...]

    def letters(self):
        out = []
        for p in self.parts:
            out.extend(p.letters())
        return out

    def __str__(self):
        return " ".join(_atom_text(p) for p in self.parts) if self.parts else "1"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    n: int

    def letters(self):
        inner = self.base.letters()
        if self.n < 0:
            inner = [(g, -e) for g, e in reversed(inner)]
        return inner * abs(self.n)

    def __str__(self):
        return f"({self.base})^{self.n}" if not isinstance(self.base, Comm) else f"{self.base}^{self.n}"


@dataclass(frozen=True)
class Comm(Expr):
    """Commutator ``[a, b] = a b a^-1 b^-1``."""

    a: Expr
    b: Expr

    def letters(self):
        a, b = self.a.letters(), self.b.letters()
        inv = lambda w: [(g, -e) for g, e in reversed(w)]
        return a + b + inv(a) + inv(b)

    def __str__(self):
        return f"[{self.a},{self.b}]"


def _atom_text(e: Expr) -> str:
    if isinstance(e, Seq) and len(e.parts) != 1:
        return f"({e})"
    return str(e)


IDENTITY = Seq(())

WordLike = Union[GroupWord, Expr, str]


def as_expr(w: WordLike) -> Expr:
    if isinstance(w, str):
        return parse_word(w)
    if isinstance(w, GroupWord):
        return w.as_expr()
    return w


def comm(*args: Expr) -> Expr:
    """Left-normed commutator ``[a1, a2, ..., an]``."""
    if len(args) < 2:
        raise ValueError("a commutator needs at least two entries")
    out = Comm(args[0], args[1])
    for a in args[2:]:
        out = Comm(out, a)
    return out


# ----- parser -------------------------------------------------------------

_TOK = re.compile(r"\s*(?:(g\d+)|(-?\d+)|(\^)|(\[)|(\])|(,)|(\()|(\)))")


class WordSyntaxError(ValueError):
    pass


def parse_word(text: str) -> Expr:
    text = text.strip()
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise WordSyntaxError(f"cannot parse word at {text[pos:]!r}")
        kind = next(i for i, g in enumerate(m.groups()) if g is not None)
        toks.append((kind, m.group(kind + 1)))
        pos = m.end()
    parser = _Parser(toks)
    expr = parser.sequence(stop=())
    if parser.i != len(toks):
        raise WordSyntaxError(f"unexpected token {toks[parser.i][1]!r}")
    return expr


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind):
        if self.peek() != kind:
            got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise WordSyntaxError(f"unexpected {got!r}")
        tok = self.toks[self.i][1]
        self.i += 1
        return tok

    def sequence(self, stop) -> Expr:
        parts = []
        while self.peek() is not None and self.peek() not in stop:
            parts.append(self.factor())
        if len(parts) == 1:
            return parts[0]
        return Seq(tuple(parts))

    def factor(self) -> Expr:
        kind = self.peek()
        if kind == 0:
            tok = self.take(0)
            idx = int(tok[1:])
            if idx < 1:
                raise WordSyntaxError("generators are numbered from 1")
            atom: Expr = Gen(idx)
        elif kind == 1:
            tok = self.take(1)
            if tok != "1":
                raise WordSyntaxError(f"unexpected integer {tok!r}")
            atom = IDENTITY
        elif kind == 3:
            self.take(3)
            args = [self.sequence(stop=(5, 4))]
            while self.peek() == 5:
                self.take(5)
                args.append(self.sequence(stop=(5, 4)))
            self.take(4)
            if len(args) < 2:
                raise WordSyntaxError("commutator needs two entries")
            atom = comm(*args)
        elif kind == 6:
            self.take(6)
            atom = self.sequence(stop=(7,))
            self.take(7)
        else:
            got = self.toks[self.i][1] if self.i < len(self.toks) else "end of input"
            raise WordSyntaxError(f"unexpected {got!r}")
        while self.peek() == 2:
            self.take(2)
            n = int(self.take(1))
            if isinstance(atom, Gen) and atom.exp == 1:
                atom = Gen(atom.index, n)
            else:
                atom = Pow(atom, n)
        return atom


# ----- sampling -----------------------------------------------------------


def random_word(rng: random.Random, k: int, max_length: int, min_length: int = 1) -> GroupWord:
    """Freely reduced random word with length in ``[min_length, max_length]``."""
    length = rng.randint(min_length, max_length)
    symbols: List[Letter] = []
    while len(symbols) < length:
        g = rng.randint(1, k)
        e = rng.choice((1, -1))
        if symbols and symbols[-1] == (g, -e):
            continue
        symbols.append((g, e))
    return GroupWord.from_letters(symbols)


def derived_sample(rng: random.Random, k: int, depth: int, max_length: int) -> Expr:
    """Element of the ``depth``-th derived subgroup built as a balanced commutator tree."""
    if depth == 0:
        return random_word(rng, k, max_length).as_expr()
    return Comm(derived_sample(rng, k, depth - 1, max_length), derived_sample(rng, k, depth - 1, max_length))


def lower_central_sample(rng: random.Random, k: int, weight: int, max_length: int) -> Expr:
    """Left-normed commutator ``[[[w1,w2],w3],...,w_weight]`` in the weight-th lower central term."""
    out = random_word(rng, k, max_length).as_expr()
    for _ in range(weight - 1):
        out = Comm(out, random_word(rng, k, max_length).as_expr())
    return out


def random_subgroup_sample(series: str, level: int, max_length: int, seed, k: int = 2) -> Expr:
    """Deterministic sample from ``F^(level)`` (series="derived") or ``F_level`` ("lower-central")."""
    rng = random.Random(seed)
    if series == "derived":
        if level < 0:
            raise ValueError("derived level must be >= 0")
        return derived_sample(rng, k, level, max_length)
    if series in ("lower-central", "lower_central", "lcs"):
        if level < 1:
            raise ValueError("lower central index must be >= 1")
        return lower_central_sample(rng, k, level, max_length)
    raise ValueError(f"unknown series {series!r}")


def word_t_sum(w: WordLike) -> int:
    """Exponent sum of the T-letters: every ``g_j`` with ``j >= 2`` carries one."""
    word = as_expr(w).flatten() if not isinstance(w, GroupWord) else w
    return sum(e for g, e in word.letters if g >= 2)
