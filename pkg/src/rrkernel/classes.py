"""Truncated multigraded polynomial ring of formal Chern roots.

All generators have degree 1 (Chern roots, first Chern classes of line
bundles); monomials above the ring's total-degree cap vanish identically.
Bundles are represented by their formal roots alone, so every identity
checked here is a universal polynomial identity in the roots: by the
splitting principle, exact coefficient comparison is both sound and complete
for such identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Optional, Sequence

from .exact import bernoulli
from .report import qstr
from .series import Series, todd_series

__all__ = [
    "ClassRing",
    "ClassElement",
    "FormalBundle",
    "chern_total",
    "segre_total",
    "chern_character",
    "todd_class",
    "rr_polynomial",
    "graded_piece",
    "divisor_restriction_factor",
    "inverse_todd_factor",
    "exp_class",
    "series_at",
]

Exponents = tuple[int, ...]


class ClassRing:
    """Commutative ring Q[g_1, ..., g_r] / (total degree > cap)."""

    def __init__(self, names: Sequence[str], cap: int):
        if cap < 0:
            raise ValueError("cap must be >= 0")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        self.names = tuple(names)
        self.cap = cap
        self._index = {name: i for i, name in enumerate(self.names)}
        self._used_roots: set[str] = set()

    def zero(self) -> "ClassElement":
        return ClassElement(self, {})

    def one(self) -> "ClassElement":
        return self.scalar(Fraction(1))

    def scalar(self, c: Fraction) -> "ClassElement":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return ClassElement(self, {(0,) * len(self.names): c})

    def gen(self, name: str) -> "ClassElement":
        if name not in self._index:
            raise KeyError(f"unknown generator {name!r}")
        if self.cap < 1:
            return self.zero()
        e = [0] * len(self.names)
        e[self._index[name]] = 1
        return ClassElement(self, {tuple(e): Fraction(1)})

    def bundle(self, name: str, roots: Sequence[Optional[str]]) -> "FormalBundle":
        """Register a formal bundle; distinct bundles must use disjoint roots.

        A ``None`` entry is a zero root (a trivial line-bundle factor).
        """
        real = [r for r in roots if r is not None]
        for r in real:
            if r not in self._index:
                raise KeyError(f"unknown generator {r!r}")
            if r in self._used_roots:
                raise ValueError(f"root {r!r} already used by another bundle")
        self._used_roots.update(real)
        return FormalBundle(self, name, tuple(roots))


class ClassElement:
    """Element of a ClassRing: finitely many monomials with exact rational
    coefficients, canonically stored (no zero terms, nothing above cap)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ClassRing, terms: dict[Exponents, Fraction]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c != 0 and sum(e) <= ring.cap}

    def _check(self, other: "ClassElement") -> None:
        if self.ring is not other.ring:
            raise ValueError("elements of different rings")

    def __add__(self, other: "ClassElement") -> "ClassElement":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ClassElement(self.ring, out)

    def __sub__(self, other: "ClassElement") -> "ClassElement":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return ClassElement(self.ring, out)

    def __neg__(self) -> "ClassElement":
        return ClassElement(self.ring, {e: -c for e, c in self.terms.items()})

    def scale(self, c: Fraction) -> "ClassElement":
        c = Fraction(c)
        return ClassElement(self.ring, {e: c * t for e, t in self.terms.items()})

    def __mul__(self, other: "ClassElement") -> "ClassElement":
        self._check(other)
        cap = self.ring.cap
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ClassElement(self.ring, out)

    def __pow__(self, n: int) -> "ClassElement":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassElement):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring.names), Fraction(0))

    def inverse(self) -> "ClassElement":
        """Multiplicative inverse in the truncated ring (unit constant term).

        Writes self = c (1 - u) with u of positive degree; u is nilpotent
        because of the cap, so the Neumann series terminates.
        """
        c = self.constant_term()
        if c == 0:
            raise ValueError("element with zero constant term is not invertible")
        u = self.ring.one() - self.scale(1 / c)
        acc = self.ring.one()
        power = self.ring.one()
        for _ in range(self.ring.cap):
            power = power * u
            if not power.terms:
                break
            acc = acc + power
        return acc.scale(1 / c)

    def __repr__(self) -> str:
        return f"ClassElement({canonical_class_str(self)})"


def canonical_class_str(e: ClassElement) -> str:
    """Deterministic rendering used as an identity witness."""
    if not e.terms:
        return "0"
    names = e.ring.names
    parts = []
    for exps, c in sorted(e.terms.items()):
        mono = "*".join(f"{names[i]}^{k}" for i, k in enumerate(exps) if k)
        parts.append(f"{mono or '1'}:{qstr(c)}")
    return " ".join(parts)


@dataclass(frozen=True)
class FormalBundle:
    """A bundle given by its formal Chern roots; rank = number of roots."""

    ring: ClassRing
    name: str
    roots: tuple[Optional[str], ...]

    @property
    def rank(self) -> int:
        return len(self.roots)

    def root_elements(self) -> list[ClassElement]:
        return [self.ring.zero() if r is None else self.ring.gen(r)
                for r in self.roots]


def series_at(s: Series, e: ClassElement) -> ClassElement:
    """Substitute a positive-degree element into a truncated power series."""
    if e.constant_term() != 0:
        raise ValueError("substitution requires zero constant term")
    ring = e.ring
    acc = ring.scalar(s[0])
    power = ring.one()
    for k in range(1, min(s.order, ring.cap) + 1):
        power = power * e
        if not power.terms:
            break
        if s[k] != 0:
            acc = acc + power.scale(s[k])
    return acc


def exp_class(e: ClassElement) -> ClassElement:
    """exp of a positive-degree element, truncated by the ring cap."""
    ring = e.ring
    return series_at(Series(ring.cap, [Fraction(1, factorial(k))
                                       for k in range(ring.cap + 1)]), e)


def chern_total(e: FormalBundle) -> ClassElement:
    """Total Chern class: product of (1 + root) over the formal roots."""
    out = e.ring.one()
    for r in e.root_elements():
        out = out * (e.ring.one() + r)
    return out


def segre_total(e: FormalBundle) -> ClassElement:
    """Total Segre class: the inverse of the total Chern class."""
    return chern_total(e).inverse()


def chern_character(e: FormalBundle) -> ClassElement:
    """ch(E) = sum of exp(root); its degree-0 part is the rank."""
    out = e.ring.zero()
    for r in e.root_elements():
        out = out + exp_class(r)
    return out


def todd_class(e: FormalBundle) -> ClassElement:
    """Td(E) = product over roots of the Todd series at that root."""
    ring = e.ring
    td = todd_series(ring.cap)
    out = ring.one()
    for r in e.root_elements():
        out = out * series_at(td, r)
    return out


def rr_polynomial(tangent: FormalBundle, e: FormalBundle) -> ClassElement:
    """Td(T) * ch(E), the multiplicative source of every twisted-determinant
    degree computed here; usually formed in a ring capped at dim + 1."""
    if tangent.ring is not e.ring:
        raise ValueError("bundles live in different rings")
    return todd_class(tangent) * chern_character(e)


def graded_piece(e: ClassElement, k: int) -> ClassElement:
    """The total-degree-k homogeneous part."""
    if not 0 <= k <= e.ring.cap:
        raise ValueError(f"degree {k} outside 0..{e.ring.cap}")
    return ClassElement(e.ring, {exps: c for exps, c in e.terms.items()
                                 if sum(exps) == k})


def divisor_restriction_factor(d: ClassElement, cap: int) -> ClassElement:
    """sum_j ((-1)^j / j!) B_j d^j for d the first Chern class of the divisor
    bundle restricted to the divisor.

    Equals the Todd series evaluated at -d (that is, d/(e^d - 1)); note that
    exp(d) times this factor recovers the Todd series at +d.  It is *not* the
    multiplicative inverse of the Todd series; for that, see
    ``inverse_todd_factor``.
    """
    coeffs = [Fraction((-1) ** j) * bernoulli(j) / factorial(j)
              for j in range(cap + 1)]
    return series_at(Series(cap, coeffs), d)


def inverse_todd_factor(d: ClassElement, cap: int) -> ClassElement:
    """(1 - e^{-d})/d = sum_j (-1)^j d^j/(j+1)!: the exact reciprocal of the
    Todd series at d.  Dividing an ambient Todd class by the Todd class of a
    line bundle (conormal twist) multiplies by this factor."""
    coeffs = [Fraction((-1) ** j, factorial(j + 1)) for j in range(cap + 1)]
    return series_at(Series(cap, coeffs), d)
