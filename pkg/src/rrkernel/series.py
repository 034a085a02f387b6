"""Truncated univariate power series over exact rationals.

Hosts the Todd generating function x/(1-e^{-x}), line-bundle exponentials,
and the R-genus style series whose coefficients mix exact rationals with
opaque zeta-derivative atoms.  A series of order N keeps the coefficients of
x^0..x^N; every operation respects the truncation (coefficient k of a product
depends only on coefficients 0..k of the factors).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import NamedTuple, Sequence

from .exact import bernoulli, harmonic

__all__ = [
    "Series",
    "ZetaSeries",
    "ZetaValue",
    "GSItem3",
    "todd_series",
    "exp_series",
    "r_genus",
    "gs_constant_item2",
    "gs_constant_item3",
]


class Series:
    """Truncated power series; immutable, with exact rational coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Fraction]):
        if order < 0:
            raise ValueError("order must be >= 0")
        cs = [Fraction(c) for c in coeffs[:order + 1]]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls(order, [])

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls(order, [Fraction(1)])

    @classmethod
    def x(cls, order: int) -> "Series":
        return cls(order, [Fraction(0), Fraction(1)])

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"Series(order={self.order}, coeffs={list(map(str, self.coeffs))})"

    def _coerce(self, other: "Series") -> None:
        if self.order != other.order:
            raise ValueError("series orders differ")

    def __add__(self, other: "Series") -> "Series":
        self._coerce(other)
        return Series(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Series") -> "Series":
        self._coerce(other)
        return Series(self.order, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Series":
        return Series(self.order, [-a for a in self.coeffs])

    def scale(self, c: Fraction) -> "Series":
        c = Fraction(c)
        return Series(self.order, [c * a for a in self.coeffs])

    def __mul__(self, other: "Series") -> "Series":
        self._coerce(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return Series(n, out)

    def __pow__(self, e: int) -> "Series":
        if e < 0:
            raise ValueError("negative powers: use inverse() first")
        result = Series.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "Series":
        """Multiplicative inverse; requires a unit constant term."""
        if self.coeffs[0] == 0:
            raise ValueError("series with zero constant term is not invertible")
        n = self.order
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [Fraction(0)] * n
        for m in range(1, n + 1):
            s = Fraction(0)
            for k in range(1, m + 1):
                s += self.coeffs[k] * out[m - k]
            out[m] = -inv0 * s
        return Series(n, out)

    def truncate(self, order: int) -> "Series":
        return Series(order, self.coeffs[:order + 1])


def todd_series(order: int) -> Series:
    """x/(1-e^{-x}) truncated at ``order``; coefficient k is B_k / k!."""
    return Series(order, [bernoulli(k) / factorial(k) for k in range(order + 1)])


def exp_series(c: Fraction, order: int) -> Series:
    """e^{cx} truncated at ``order``: coefficient k is c^k / k!."""
    c = Fraction(c)
    return Series(order, [c**k / factorial(k) for k in range(order + 1)])


class ZetaValue(NamedTuple):
    """One coefficient of a ZetaSeries: rational part plus the exact
    multipliers of the symbolic atoms zeta'(-n), n odd."""

    rational: Fraction
    zeta_prime: dict[int, Fraction]


@dataclass(frozen=True)
class ZetaSeries:
    """Series whose coefficients are rational plus zeta'(-n) atoms (n odd).

    The atoms are never evaluated numerically; ``zeta_prime_parts[n]`` is the
    exact rational coefficient series multiplying the atom zeta'(-n).
    Setting every atom to zero recovers ``rational_part``.
    """

    order: int
    rational_part: Series
    zeta_prime_parts: dict[int, Series]

    def __post_init__(self):
        if self.rational_part.order != self.order:
            raise ValueError("rational part has the wrong order")
        for n, s in self.zeta_prime_parts.items():
            if n < 1 or n % 2 == 0:
                raise ValueError("zeta-prime atoms carry odd indices only")
            if s.order != self.order:
                raise ValueError("atom series has the wrong order")

    def with_atoms_zero(self) -> Series:
        return self.rational_part

    def mul_series(self, s: Series) -> "ZetaSeries":
        return ZetaSeries(
            self.order,
            self.rational_part * s,
            {n: part * s for n, part in self.zeta_prime_parts.items()},
        )

    def scale(self, c: Fraction) -> "ZetaSeries":
        return ZetaSeries(
            self.order,
            self.rational_part.scale(c),
            {n: part.scale(c) for n, part in self.zeta_prime_parts.items()},
        )

    def coefficient(self, k: int) -> ZetaValue:
        atoms = {n: part[k] for n, part in sorted(self.zeta_prime_parts.items())
                 if part[k] != 0}
        return ZetaValue(self.rational_part[k], atoms)


def zeta_negative_odd(n: int) -> Fraction:
    """zeta(-n) = -B_{n+1}/(n+1) for odd n >= 1, exactly."""
    if n < 1 or n % 2 == 0:
        raise ValueError("defined for odd n >= 1 only")
    return -bernoulli(n + 1) / (n + 1)


def r_genus(order: int) -> ZetaSeries:
    """The odd genus series sum_{n odd} (H_n zeta(-n) + 2 zeta'(-n)) x^n/n!.

    zeta(-n) is substituted exactly into the rational part; the zeta'(-n)
    stay symbolic with multiplier 2/n! recorded per atom.
    """
    rational = [Fraction(0)] * (order + 1)
    atoms: dict[int, Series] = {}
    for n in range(1, order + 1, 2):
        rational[n] = harmonic(n) * zeta_negative_odd(n) / factorial(n)
        atom_coeffs = [Fraction(0)] * (order + 1)
        atom_coeffs[n] = Fraction(2, factorial(n))
        atoms[n] = Series(order, atom_coeffs)
    return ZetaSeries(order, Series(order, rational), atoms)


def gs_constant_item2(n: int) -> ZetaValue:
    """Coefficient of x^n in (n+1) (x/(1-e^{-x}))^{n+1} R(x).

    Returned as an exact rational part together with the exact multipliers of
    each zeta'(-m) atom.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    td_pow = todd_series(n) ** (n + 1)
    return r_genus(n).mul_series(td_pow).scale(Fraction(n + 1)).coefficient(n)


class GSItem3(NamedTuple):
    harmonic_part: Fraction
    integral_part: Fraction


def gs_constant_item3(n: int) -> GSItem3:
    """The two exact rational constants attached to the rank-(n+1)
    projective bundle: a harmonic multiple of the top Todd-power coefficient,
    and a termwise-integrated remainder.

    harmonic_part = (sum_{i<=n} H_i) * [ (x/(1-e^{-x}))^{n+1} ]_{n+1}.

    integral_part is the x^n coefficient of int_0^1 (phi(t) - phi(0))/t dt
    for phi(t) = (1/(tx) - e^{-tx}/(1-e^{-tx})) (x/(1-e^{-x}))^{n+1}.  With
    B~_m = (-1)^m B_m (the B_1 = -1/2 convention) one has
    phi(t) - phi(0) = -sum_{m>=2} B~_m (tx)^{m-1}/m! * (x/(1-e^{-x}))^{n+1},
    so each monomial t^{m-2} integrates to 1/(m-1) and everything stays
    rational.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    harmonic_factor = sum((harmonic(i) for i in range(1, n + 1)), Fraction(0))
    td_top = todd_series(n + 1) ** (n + 1)
    harmonic_part = harmonic_factor * td_top[n + 1]

    td_pow = todd_series(n) ** (n + 1)
    integral = Fraction(0)
    for m in range(2, n + 2):
        b_tilde = Fraction((-1) ** m) * bernoulli(m)
        if b_tilde == 0:
            continue
        # x^(m-1) times the Todd power contributes at coefficient n
        integral -= b_tilde / (factorial(m) * (m - 1)) * td_pow[n + 1 - m]
    return GSItem3(harmonic_part, integral)
