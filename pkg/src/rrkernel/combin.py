"""Vandermonde matrices on integer nodes, their exact inverses, and the
interpolation-coefficient machinery built on them.

The matrices live on the nodes 0..n: ``V^n[i][j] = i^j`` (with 0^0 = 1), and
``A^n`` denotes the exact inverse.  Row ``j`` of ``A^n`` extracts the ``x^j``
coefficient of any polynomial of degree <= n from its values at 0..n; this is
the engine used to invert coefficient relations between twisted determinant
degrees and characteristic-class pairings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Sequence

from .exact import binomial, bernoulli, power_zero_convention
from .report import IdentityReport, make_report, qstr

__all__ = [
    "QMatrix",
    "InterpCoeffs",
    "InternalInconsistencyError",
    "vandermonde",
    "inverse_vandermonde",
    "interp_coeffs",
    "closed_form_interp_coeff",
    "interp_coeff_discrepancies",
    "apply_A_to_samples",
    "power_sum",
    "partial_polarization_check",
]


class InternalInconsistencyError(RuntimeError):
    """Two supposedly equivalent computation paths disagreed."""


class QMatrix:
    """Dense matrix of exact rationals, stored row-major and immutable."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[Fraction]):
        if rows < 1 or cols < 1:
            raise ValueError("QMatrix dimensions must be >= 1")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = tuple(Fraction(e) for e in entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Fraction]]) -> "QMatrix":
        flat = [x for row in rows for x in row]
        return cls(len(rows), len(rows[0]), flat)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                out.append(sum((self[i, k] * other[k, j] for k in range(self.cols)),
                               Fraction(0)))
        return QMatrix(self.rows, other.cols, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(qstr(x) for x in self.row(i)) for i in range(self.rows))
        return f"QMatrix({self.rows}x{self.cols}: {body})"

    def det(self) -> Fraction:
        """Exact determinant by Gaussian elimination with rational pivots."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = [list(self.row(i)) for i in range(n)]
        det = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                f = m[r][col] * inv
                if f == 0:
                    continue
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
        return det

    def inverse(self) -> "QMatrix":
        """Exact inverse by Gauss-Jordan elimination.

        No pivots heuristics are needed: arithmetic is exact, so any nonzero
        pivot is as good as any other.
        """
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        m = [list(self.row(i)) + [Fraction(int(i == j)) for j in range(n)]
             for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            m[col], m[piv] = m[piv], m[col]
            inv = 1 / m[col][col]
            m[col] = [x * inv for x in m[col]]
            for r in range(n):
                if r == col or m[r][col] == 0:
                    continue
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return QMatrix(n, n, [m[i][n + j] for i in range(n) for j in range(n)])


def vandermonde(n: int) -> QMatrix:
    """The (n+1) x (n+1) matrix with entry (i, j) = i^j, 0^0 = 1."""
    if n < 0:
        raise ValueError(f"vandermonde: n must be >= 0, got {n}")
    return QMatrix(n + 1, n + 1,
                   [power_zero_convention(i, j)
                    for i in range(n + 1) for j in range(n + 1)])


@lru_cache(maxsize=None)
def inverse_vandermonde(n: int) -> QMatrix:
    """Exact inverse A^n of vandermonde(n); always invertible."""
    return vandermonde(n).inverse()


@dataclass(frozen=True)
class InterpCoeffs:
    """Coefficients of binom(x, b) as a polynomial in x: values[j] = [x^j]."""

    b: int
    values: tuple[Fraction, ...]

    def evaluate(self, m: int) -> Fraction:
        return sum((c * m**j for j, c in enumerate(self.values)), Fraction(0))


def interp_coeffs(b: int) -> InterpCoeffs:
    """Expand binom(x, b) = x(x-1)...(x-b+1)/b! into monomial coefficients.

    This operational definition (rather than any closed form) is what makes
    coefficient extraction by A^n rows an exact theorem of Lagrange
    interpolation; see ``interp_coeff_discrepancies`` for the closed form it
    is checked against.
    """
    if b < 0:
        raise ValueError(f"interp_coeffs: b must be >= 0, got {b}")
    # poly[j] = coefficient of x^j in the falling factorial, built one factor
    # at a time
    poly = [Fraction(1)]
    for r in range(b):
        shifted = [Fraction(0)] + poly           # * x
        scaled = [-r * c for c in poly] + [Fraction(0)]  # * (-r)
        poly = [a + c for a, c in zip(shifted, scaled)]
    fb = factorial(b)
    return InterpCoeffs(b, tuple(c / fb for c in poly))


def closed_form_interp_coeff(b: int, j: int) -> Fraction:
    """Alternative closed form ((-1)^(b-j)/b!) [ (x-1)...(x-(b-1)) ]_(j-1).

    Kept only as a diagnostic: it disagrees in sign with the
    interpolation-forced value at some (b, j), e.g. (2, 1).  Undefined for
    b = 0 (empty product with a shifted index), hence the b >= 1 guard.
    """
    if b < 1:
        raise ValueError("closed form is undefined for b = 0")
    if j < 0 or j > b:
        raise ValueError(f"j must lie in 0..{b}")
    poly = [Fraction(1)]
    for r in range(1, b):
        shifted = [Fraction(0)] + poly
        scaled = [-r * c for c in poly] + [Fraction(0)]
        poly = [a + c for a, c in zip(shifted, scaled)]
    coeff = poly[j - 1] if 0 <= j - 1 < len(poly) else Fraction(0)
    return Fraction((-1) ** (b - j)) * coeff / factorial(b)


def interp_coeff_discrepancies(b_max: int) -> list[tuple[int, int, Fraction, Fraction]]:
    """All (b, j, forced, closed_form) where the two definitions differ.

    Surfaces the sign inconsistency instead of silently adopting either
    value; the package itself always uses the interpolation-forced ones.
    """
    out = []
    for b in range(1, b_max + 1):
        forced = interp_coeffs(b).values
        for j in range(b + 1):
            closed = closed_form_interp_coeff(b, j)
            if closed != forced[j]:
                out.append((b, j, forced[j], closed))
    return out


def apply_A_to_samples(n: int, j: int, f_samples: Sequence[Fraction]) -> Fraction:
    """sum_k A^n[j][k] * f(k): the x^j coefficient of the degree-<=n
    polynomial interpolating the samples f(0), ..., f(n).

    The caller is responsible for the degree precondition; for samples of a
    higher-degree function this silently returns the interpolant's
    coefficient.
    """
    if not 0 <= j <= n:
        raise ValueError(f"j must lie in 0..{n}")
    if len(f_samples) != n + 1:
        raise ValueError(f"expected {n + 1} samples, got {len(f_samples)}")
    row = inverse_vandermonde(n).row(j)
    return sum((a * Fraction(f) for a, f in zip(row, f_samples)), Fraction(0))


def power_sum(p: int, n: int) -> Fraction:
    """sum_{k=1..n} k^p, computed twice: directly and by the Bernoulli
    closed form (1/(p+1)) sum_j binom(p+1,j) B_j n^(p+1-j).

    The two paths must agree; a mismatch means the Bernoulli convention has
    been broken somewhere and is raised rather than returned.
    """
    if p < 0 or n < 0:
        raise ValueError("power_sum: p and n must be >= 0")
    direct = sum((Fraction(k**p) for k in range(1, n + 1)), Fraction(0))
    closed = sum((binomial(p + 1, j) * bernoulli(j) * n**(p + 1 - j)
                  for j in range(p + 1)), Fraction(0)) / (p + 1)
    if direct != closed:
        raise InternalInconsistencyError(
            f"power_sum({p}, {n}): direct {qstr(direct)} != closed {qstr(closed)}")
    return direct


def _poly2_str(terms: dict[tuple[int, int], Fraction]) -> str:
    if not terms:
        return "0"
    parts = [f"x^{i}*y^{j}:{qstr(c)}" for (i, j), c in sorted(terms.items())]
    return " ".join(parts)


def partial_polarization_check(n: int, max_probe: int) -> IdentityReport:
    """Verify x*y^n = (1/(n+1)) sum_j A^n[n][j] (x+jy)^(n+1) - (n/2) y^(n+1)
    as an exact identity in Q[x,y] truncated at total degree ``max_probe``.

    The identity is homogeneous of degree n+1, so any max_probe >= n+1
    exercises it fully; failure is a report outcome, not an exception.
    """
    if n < 1:
        raise ValueError(f"partial polarization needs n >= 1, got {n}")

    def trunc(terms: dict[tuple[int, int], Fraction]) -> dict[tuple[int, int], Fraction]:
        return {e: c for e, c in terms.items() if sum(e) <= max_probe and c != 0}

    lhs = trunc({(1, n): Fraction(1)})
    a_last = inverse_vandermonde(n).row(n)
    rhs: dict[tuple[int, int], Fraction] = {}
    for j in range(n + 1):
        if a_last[j] == 0:
            continue
        # (x + j y)^(n+1) expanded binomially
        for m in range(n + 2):
            e = (n + 1 - m, m)
            c = a_last[j] * binomial(n + 1, m) * Fraction(j**m)
            rhs[e] = rhs.get(e, Fraction(0)) + c
    rhs = {e: c / (n + 1) for e, c in rhs.items()}
    e_top = (0, n + 1)
    rhs[e_top] = rhs.get(e_top, Fraction(0)) - Fraction(n, 2)
    rhs = trunc(rhs)
    return make_report("EQ-PARTPOL", {"n": n, "max_probe": max_probe},
                       _poly2_str(lhs), _poly2_str(rhs))
