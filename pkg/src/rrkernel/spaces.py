"""Concrete model spaces with exact fibre integration and an independent
Euler-characteristic oracle.

Supported models: projective spaces P^n, products of projective spaces, and
degree-k hypersurfaces in P^n.  Classes on a model are polynomials in its
hyperplane generators with the relations h_i^(n_i+1) = 0; integration reads
off the top monomial (with fundamental-class weight k on a hypersurface).

The Euler characteristic of a twist is computed by closed-form binomial
counting, fully independent of the class calculus, so that comparing the two
sides of the index formula is a genuine two-route check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence, Union

from .exact import binomial
from .report import IdentityReport, make_report, qstr
from .series import Series, todd_series, exp_series

__all__ = [
    "ProjSpace",
    "Product",
    "Hypersurface",
    "ModelSpace",
    "EulerOracle",
    "space_dim",
    "num_twists",
    "integrate",
    "tangent_todd",
    "ch_line",
    "euler_characteristic",
    "hrr_check",
    "pairing_degree",
    "lambda_family_degree",
]


@dataclass(frozen=True)
class ProjSpace:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("projective space dimension must be >= 0")


@dataclass(frozen=True)
class Product:
    factors: tuple[ProjSpace, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("empty product")


@dataclass(frozen=True)
class Hypersurface:
    ambient: ProjSpace
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("hypersurface degree must be >= 1")
        if self.ambient.n < 1:
            raise ValueError("ambient must be at least a line")


ModelSpace = Union[ProjSpace, Product, Hypersurface]

# Classes on a model space: exponent tuple (one slot per hyperplane
# generator) -> rational coefficient.
Poly = dict[tuple[int, ...], Fraction]


def _caps(space: ModelSpace) -> tuple[int, ...]:
    if isinstance(space, ProjSpace):
        return (space.n,)
    if isinstance(space, Product):
        return tuple(f.n for f in space.factors)
    return (space.ambient.n - 1,)


def space_dim(space: ModelSpace) -> int:
    return sum(_caps(space))


def num_twists(space: ModelSpace) -> int:
    return len(_caps(space))


def _mul(a: Poly, b: Poly, caps: tuple[int, ...]) -> Poly:
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if any(x > cap for x, cap in zip(e, caps)):
                continue
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def _from_factor_series(series_by_factor: Sequence[Series],
                        caps: tuple[int, ...]) -> Poly:
    """Outer product of one univariate series per hyperplane generator."""
    out: Poly = {(): Fraction(1)}
    for pos, s in enumerate(series_by_factor):
        nxt: Poly = {}
        for e, c in out.items():
            for k in range(caps[pos] + 1):
                if s[k] == 0:
                    continue
                nxt[e + (k,)] = nxt.get(e + (k,), Fraction(0)) + c * s[k]
        out = nxt
    return {e: c for e, c in out.items() if c != 0}


def integrate(space: ModelSpace, cls: Poly) -> Fraction:
    """Exact fibre integral: the coefficient of the top monomial, times the
    fundamental-class weight.  Vanishes on anything not of top degree."""
    caps = _caps(space)
    weight = space.degree if isinstance(space, Hypersurface) else 1
    return cls.get(caps, Fraction(0)) * weight


def tangent_todd(space: ModelSpace) -> Poly:
    """Todd class of the relative tangent bundle.

    P^n carries (h/(1-e^{-h}))^(n+1); a product multiplies its factors; a
    degree-k hypersurface divides the ambient Todd class by the Todd class of
    the degree-k bundle (conormal twist), i.e. multiplies by
    (1-e^{-kh})/(kh).
    """
    caps = _caps(space)
    if isinstance(space, ProjSpace):
        return _from_factor_series([todd_series(space.n) ** (space.n + 1)], caps)
    if isinstance(space, Product):
        return _from_factor_series(
            [todd_series(f.n) ** (f.n + 1) for f in space.factors], caps)
    n, k = space.ambient.n, space.degree
    cap = n - 1
    ambient = todd_series(cap) ** (n + 1)
    conormal = Series(cap, [Fraction((-k) ** j, factorial(j + 1))
                            for j in range(cap + 1)])
    return _from_factor_series([ambient * conormal], caps)


def ch_line(space: ModelSpace, twist: Sequence[int]) -> Poly:
    """Chern character exp(sum d_i h_i) of the twist bundle O(d_1, ..)."""
    caps = _caps(space)
    if len(twist) != len(caps):
        raise ValueError(f"expected {len(caps)} twist entries, got {len(twist)}")
    return _from_factor_series(
        [exp_series(Fraction(d), cap) for d, cap in zip(twist, caps)], caps)


def c1_line(space: ModelSpace, twist: Sequence[int]) -> Poly:
    caps = _caps(space)
    if len(twist) != len(caps):
        raise ValueError(f"expected {len(caps)} twist entries, got {len(twist)}")
    out: Poly = {}
    for i, d in enumerate(twist):
        if d == 0 or caps[i] < 1:
            continue
        e = tuple(int(j == i) for j in range(len(caps)))
        out[e] = Fraction(d)
    return out


def euler_characteristic(space: ModelSpace, twist: Sequence[int]) -> Fraction:
    """Closed-form binomial oracle for chi(space, O(twist)).

    P^n: binom(n+d, n), extended polynomially to all integers d; products
    multiply; a degree-k hypersurface in P^n subtracts the d-k count.
    Independent of the class calculus by construction.
    """
    if len(twist) != num_twists(space):
        raise ValueError(f"expected {num_twists(space)} twist entries")
    if isinstance(space, ProjSpace):
        return binomial(space.n + twist[0], space.n)
    if isinstance(space, Product):
        out = Fraction(1)
        for f, d in zip(space.factors, twist):
            out *= binomial(f.n + d, f.n)
        return out
    n, k, d = space.ambient.n, space.degree, twist[0]
    return binomial(n + d, n) - binomial(n + d - k, n)


@dataclass(frozen=True)
class EulerOracle:
    """Euler-characteristic oracle bound to one model space."""

    space: ModelSpace

    def chi(self, twist: Sequence[int]) -> Fraction:
        return euler_characteristic(self.space, twist)


def _space_params(space: ModelSpace) -> dict[str, int]:
    if isinstance(space, ProjSpace):
        return {"n": space.n}
    if isinstance(space, Product):
        return {f"n{i + 1}": f.n for i, f in enumerate(space.factors)}
    return {"n": space.ambient.n, "k": space.degree}


def _hrr_id(space: ModelSpace) -> str:
    if isinstance(space, ProjSpace):
        return "EQ-HRR-PN"
    if isinstance(space, Product):
        return "EQ-HRR-PRODUCT"
    return "EQ-HRR-HYP"


def hrr_check(space: ModelSpace, twist: Sequence[int]) -> IdentityReport:
    """Assert integral of Td(T) ch(O(twist)) equals the chi oracle, exactly."""
    caps = _caps(space)
    lhs = integrate(space, _mul(tangent_todd(space), ch_line(space, twist), caps))
    rhs = euler_characteristic(space, twist)
    params = _space_params(space)
    params.update({f"d{i + 1}": d for i, d in enumerate(twist)}
                  if len(twist) > 1 else {"d": twist[0]})
    return make_report(_hrr_id(space), params, qstr(lhs), qstr(rhs))


def pairing_degree(space: ModelSpace, line_bundles: Sequence[Sequence[int]]) -> Fraction:
    """Integral of the product of first Chern classes: the scalar shadow of
    the multilinear pairing of dim(space) line bundles on the model."""
    if len(line_bundles) != space_dim(space):
        raise ValueError(
            f"need exactly {space_dim(space)} bundles, got {len(line_bundles)}")
    caps = _caps(space)
    acc: Poly = {(0,) * len(caps): Fraction(1)}
    for twist in line_bundles:
        acc = _mul(acc, c1_line(space, twist), caps)
    return integrate(space, acc)


def lambda_family_degree(n: int, a: int, b: int) -> Fraction:
    """Degree of the determinant of cohomology of O(a, b) along the trivial
    family P^n x P^1 -> P^1: equals b * binom(n+a, n).

    Valid for a >= 0, where the fibrewise higher cohomology vanishes and the
    push-forward is an honest bundle of rank binom(n+a, n).
    """
    if a < 0:
        raise ValueError(f"oracle needs a >= 0, got {a}")
    return Fraction(b) * binomial(n + a, n)
