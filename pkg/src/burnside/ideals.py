"""Cyclotomic ideals ``I(q)``, ``I(q) Sigma`` and ``Sigma^m`` as integer lattices.

Everything happens in the truncated module ``Z[a_1..a_k] / (a)^c`` with
``x_i = 1 + a_i``; a vector holds the coefficients on the graded monomial
basis.  ``I(q)`` has one generator ``1 + u + ... + u^(q-1)`` per positive unit
``u``; units are enumerated in the box ``|exponent| <= B`` and ``B`` grows until
the HNF basis survives two consecutive increments unchanged.

Modulo ``(a)^c`` the image of ``u = x^i y^j`` is a polynomial in ``(i, j)`` of
degree below ``c``, so (by finite differences) the span stabilizes once the
box contains ``c`` consecutive values in every coordinate; the stabilization
record makes this auditable for every lattice.
"""

from __future__ import annotations

import hashlib
import itertools
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .laurent import LaurentPoly, format_poly
from .lattice import IntegerLattice, _Echelon
from .truncated import TruncatedElement, TruncationContext, to_truncated

VARIANTS = ("include-unit-1", "exclude-unit-1")
IDEALS = ("I", "ISigma", "Sigma")


class NotPrimePower(ValueError):
    pass


class UnsaturatedError(RuntimeError):
    def __init__(self, message: str, last: IntegerLattice, previous: IntegerLattice, history):
        super().__init__(message)
        self.last = last
        self.previous = previous
        self.history = history


class RankRestriction(ValueError):
    pass


@dataclass(frozen=True)
class BurnsideParams:
    p: int
    e: int

    def __post_init__(self):
        if self.e < 1 or self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise NotPrimePower(f"p={self.p}, e={self.e} does not describe a prime power")

    @classmethod
    def from_q(cls, q: int) -> "BurnsideParams":
        if q < 2:
            raise NotPrimePower(f"{q} is not a prime power")
        p = next(d for d in range(2, q + 1) if q % d == 0)
        e, r = 0, q
        while r % p == 0:
            r //= p
            e += 1
        if r != 1:
            raise NotPrimePower(f"{q} is not a prime power")
        return cls(p, e)

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def phi(self) -> int:
        return self.p ** self.e - self.p ** (self.e - 1)

    @property
    def ephi(self) -> int:
        return self.e * self.phi

    def check_rank(self, k: int) -> None:
        """The imported cyclotomic inclusion results hold only for ranks ``k <= p + 1``."""
        if k > self.p + 1:
            raise RankRestriction(f"rank {k} exceeds p + 1 = {self.p + 1} for q = {self.q}")


def euler_phi(n: int) -> int:
    out, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            out -= out // d
        d += 1
    if m > 1:
        out -= out // m
    return out


def cyclotomic_element(u: LaurentPoly, n: int) -> LaurentPoly:
    """``1 + u + u^2 + ... + u^(n-1)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not u.is_positive_unit():
        raise ValueError(f"{u} is not a positive unit")
    total = LaurentPoly.zero(u.rank)
    p = LaurentPoly.one(u.rank)
    for _ in range(n):
        total = total + p
        p = p * u
    return total


# ----- vectors in the truncated module ---------------------------------------


def coordinates(f: Union[LaurentPoly, TruncatedElement], ctx: TruncationContext) -> Tuple[int, ...]:
    """Coefficient vector of ``f`` on the graded monomial basis (no ``s``/``t`` allowed)."""
    if isinstance(f, LaurentPoly):
        if f.has_t():
            raise ValueError("ideal lattices live in R; the polynomial contains t")
        f = to_truncated(f, ctx.a_only())
    if f.ctx.rank != ctx.rank or f.ctx.c != ctx.c:
        raise ValueError(f"element context {f.ctx} does not match lattice context {ctx}")
    if f.ctx.D > 1 and f.coeffs[:, 1:].any():
        raise ValueError("element has s-terms")
    return tuple(int(v) for v in f.coeffs[:, 0])


def shift_vector(vec: Sequence[int], beta: Tuple[int, ...], ctx: TruncationContext) -> Tuple[int, ...]:
    """Multiply a coordinate vector by the monomial ``a^beta`` (truncating)."""
    out = [0] * ctx.size
    for i, v in enumerate(vec):
        if v:
            idx = ctx.index.get(tuple(a + b for a, b in zip(ctx.monomials[i], beta)))
            if idx is not None:
                out[idx] += v
    return tuple(out)


def monomial_vector(alpha: Tuple[int, ...], ctx: TruncationContext, coeff: int = 1) -> Tuple[int, ...]:
    out = [0] * ctx.size
    idx = ctx.index.get(tuple(alpha))
    if idx is not None:
        out[idx] = coeff
    return tuple(out)


def unit_box(k: int, B: int, variant: str):
    for e in itertools.product(range(-B, B + 1), repeat=k):
        if variant == "exclude-unit-1" and not any(e):
            continue
        yield e


def _shell(k: int, B: int, variant: str):
    """Exponent vectors with max-norm exactly ``B``."""
    for e in unit_box(k, B, variant):
        if max((abs(x) for x in e), default=0) == B:
            yield e


def _generator_vectors(params: BurnsideParams, ideal: str, ctx: TruncationContext, units) -> List[Tuple[int, ...]]:
    k = ctx.rank
    out = []
    low = 1 if ideal == "ISigma" else 0
    betas = [b for b in ctx.monomials if sum(b) >= low]
    for e in units:
        u = LaurentPoly.monomial(k, e)
        vec = coordinates(cyclotomic_element(u, params.q), ctx)
        for beta in betas:
            out.append(shift_vector(vec, beta, ctx))
    return out


# ----- saturation and cache ---------------------------------------------------


@dataclass
class IdealLattice:
    params: BurnsideParams
    ideal: str
    k: int
    c: int
    variant: str
    B: int
    lattice: IntegerLattice
    history: List[Tuple[int, int, str]] = field(default_factory=list)  # (B, rank, basis digest)
    B_examined: int = 0
    cache_path: Optional[str] = None
    cache_sha256: Optional[str] = None

    @property
    def ctx(self) -> TruncationContext:
        return TruncationContext(self.k, self.c, 1)

    def contains(self, f) -> bool:
        return lattice_membership(f, self)


def _digest(L: IntegerLattice) -> str:
    return hashlib.sha256(repr(L.basis).encode()).hexdigest()[:16]


def _cache_file(cache_dir, params, ideal, k, c, variant) -> Path:
    return Path(cache_dir) / f"lattice_q{params.q}_k{k}_c{c}_{ideal}_{variant}.txt"


def _header(params, ideal, c, variant, B, m) -> str:
    # B is the largest unit bound examined (the basis is final from history)
    return f"burnside-lattice v1 q={params.q} c={c} ideal={ideal} variant={variant} B={B} m={m}"


def cache_bytes(lat: IdealLattice) -> bytes:
    lines = [_header(lat.params, lat.ideal, lat.c, lat.variant, lat.B_examined, lat.lattice.m)]
    lines += lat.lattice.rows_text()
    return ("\n".join(lines) + "\n").encode()


def lattice_sha256(lat: IdealLattice) -> str:
    """SHA-256 of the cache-file form of ``lat`` (whether or not it was written)."""
    return lat.cache_sha256 or hashlib.sha256(cache_bytes(lat)).hexdigest()


def write_lattice_cache(path: Path, lat: IdealLattice) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    data = cache_bytes(lat)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return hashlib.sha256(data).hexdigest()


def read_lattice_cache(path: Path) -> Tuple[Dict[str, str], IntegerLattice, str]:
    data = path.read_bytes()
    text = data.decode().splitlines()
    if not text or not text[0].startswith("burnside-lattice v1 "):
        raise ValueError(f"{path} is not a lattice cache file")
    fields = dict(tok.split("=", 1) for tok in text[0].split()[2:])
    m = int(fields["m"])
    rows = [tuple(int(x) for x in line.split()) for line in text[1:] if line.strip()]
    lat = IntegerLattice.from_generators(m, rows)
    if lat.basis != tuple(rows):
        raise ValueError(f"{path} does not hold an HNF basis")
    return fields, lat, hashlib.sha256(data).hexdigest()


def saturate_ideal_lattice(
    params: BurnsideParams,
    ideal: str,
    c: int,
    B: int = 1,
    variant: str = "include-unit-1",
    k: int = 2,
    m: int = 0,
    B_ceiling: int = 40,
    cache_dir: Optional[str] = None,
) -> IdealLattice:
    """HNF lattice of ``ideal`` (``"I"``, ``"ISigma"`` or ``"Sigma"`` with power ``m``) modulo ``Sigma^c``."""
    if c < 1 or B < 1:
        raise ValueError("c and B must be >= 1")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if ideal not in IDEALS:
        raise ValueError(f"unknown ideal {ideal!r}")
    ctx = TruncationContext(k, c, 1)

    if ideal == "Sigma":
        gens = [monomial_vector(a, ctx) for a in ctx.monomials if sum(a) >= m]
        L = IntegerLattice.from_generators(ctx.size, gens)
        return IdealLattice(params, f"Sigma^{m}", k, c, variant, 0, L, [(0, L.rank, _digest(L))])

    name = ideal
    if cache_dir:
        path = _cache_file(cache_dir, params, name, k, c, variant)
        if path.exists():
            fields, L, sha = read_lattice_cache(path)
            if int(fields["q"]) == params.q and int(fields["c"]) == c and fields["variant"] == variant:
                if L.m == ctx.size:
                    Bc = int(fields["B"])
                    return IdealLattice(params, name, k, c, variant, Bc, L, [(Bc, L.rank, "cache")],
                                        B_examined=Bc, cache_path=str(path), cache_sha256=sha)

    cert = certificate_bound(c, variant)
    ech = _Echelon(ctx.size)
    for v in _generator_vectors(params, ideal, ctx, unit_box(k, B, variant)):
        ech.add(v)
    current = IntegerLattice(ctx.size, ech.basis())
    history = [(B, current.rank, _digest(current))]
    unchanged = 0
    previous = current
    B_final = B
    while unchanged < 2 or B < cert:
        if B >= B_ceiling:
            raise UnsaturatedError(
                f"lattice for {name} (q={params.q}, c={c}) did not stabilize by B={B_ceiling}",
                current, previous, history,
            )
        B += 1
        for v in _generator_vectors(params, ideal, ctx, _shell(k, B, variant)):
            ech.add(v)
        previous, current = current, IntegerLattice(ctx.size, ech.basis())
        history.append((B, current.rank, _digest(current)))
        if current == previous:
            unchanged += 1
        else:
            unchanged = 0
            B_final = B
    out = IdealLattice(params, name, k, c, variant, B_final, current, history, B_examined=B)
    if cache_dir:
        path = _cache_file(cache_dir, params, name, k, c, variant)
        out.cache_sha256 = write_lattice_cache(path, out)
        out.cache_path = str(path)
    return out


def certificate_bound(c: int, variant: str) -> int:
    """Smallest box size whose units provably span the whole ideal modulo ``Sigma^c``.

    Coordinates of the generator for ``u = x^e`` are integer-valued
    polynomials in ``e`` of degree below ``c``; their values at ``c`` consecutive
    integers per coordinate span the values at all integers.  Without the unit
    ``u = 1`` the first coordinate uses ``1..c`` instead of a centred window.
    """
    return c if variant == "exclude-unit-1" else c // 2


def lattice_membership(f, L: Union[IdealLattice, IntegerLattice], ctx: Optional[TruncationContext] = None) -> bool:
    """Exact membership of ``f`` (polynomial, truncated element or vector) in the lattice."""
    if isinstance(L, IdealLattice):
        ctx = L.ctx
        lat = L.lattice
    else:
        lat = L
    if isinstance(f, (LaurentPoly, TruncatedElement)):
        if ctx is None:
            raise ValueError("a truncation context is needed to coordinatize the element")
        vec = coordinates(f, ctx)
    else:
        vec = tuple(f)
    if len(vec) != lat.m:
        raise ValueError(f"vector of length {len(vec)} vs lattice ambient rank {lat.m}")
    return lat.contains(vec)


# ----- cyclotomic inclusion checks --------------------------------------------


def monomial_text(alpha: Sequence[int]) -> str:
    """``a^alpha`` written in the original variables, e.g. ``(x - 1)^2*(y - 1)``."""
    k = len(alpha)
    names = ("x", "y") if k == 2 else tuple(f"x{i}" for i in range(1, k + 1))
    parts = []
    for n, p in zip(names, alpha):
        if p == 1:
            parts.append(f"({n} - 1)")
        elif p:
            parts.append(f"({n} - 1)^{p}")
    return "*".join(parts) or "1"


def check_cyclotomic_inclusions(
    params: BurnsideParams,
    j: int = 0,
    kdeg: Optional[int] = None,
    c: Optional[int] = None,
    variant: str = "include-unit-1",
    rank: int = 2,
    cache_dir: Optional[str] = None,
) -> dict:
    """Bounded (adic) verification of the cyclotomic/augmentation inclusions.

    Verdicts:
      * ``sigma_in_I``: every monomial of degree ``e*phi(q)`` .. ``c-1`` lies in
        ``I(q) + Sigma^c``;
      * ``witness``: a degree ``e*phi(q) - 1`` monomial outside ``I(q) + Sigma^c``,
        which is conclusive for ``Sigma^(e*phi(q) - 1)`` not inside ``I(q)``;
      * ``p_power``: ``p^j Sigma^kdeg`` inside ``I(q) + Sigma^c``.
    """
    params.check_rank(rank)
    ephi = params.ephi
    c = ephi + 2 if c is None else c
    lat = saturate_ideal_lattice(params, "I", c, variant=variant, k=rank, cache_dir=cache_dir)
    ctx = lat.ctx

    sigma_in_I = all(
        lat.lattice.contains(monomial_vector(a, ctx)) for a in ctx.monomials if ephi <= sum(a) < c
    )
    witness = None
    for a in ctx.monomials:
        if sum(a) == ephi - 1 and not lat.lattice.contains(monomial_vector(a, ctx)):
            witness = a
            break
    report = {
        "q": params.q,
        "c": c,
        "variant": variant,
        "B": lat.B,
        "stabilization": lat.history,
        "sigma_in_I": sigma_in_I,
        "witness": None if witness is None else monomial_text(witness),
        "witness_exponents": witness,
        "cache_sha256": lat.cache_sha256,
    }
    if kdeg is not None:
        factor = params.p ** j
        vacuous = kdeg >= c
        ok = all(
            lat.lattice.contains(monomial_vector(a, ctx, factor)) for a in ctx.monomials if kdeg <= sum(a) < c
        )
        report["p_power"] = {"j": j, "k": kdeg, "holds": ok, "vacuous": vacuous}
    return report
