"""Exact rational arithmetic and the elementary combinatorial functions.

Everything here is computed with arbitrary-precision rationals; no value is
ever rounded.  Conventions used throughout the package:

* ``0^0 = 1`` and ``binom(0,0) = 1``;
* Bernoulli numbers follow the ``B_1 = +1/2`` convention, i.e. they are the
  coefficients of ``t/(1-e^{-t}) = sum_m B_m t^m / m!``.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

__all__ = [
    "Rational",
    "BernoulliTable",
    "binomial",
    "bernoulli",
    "power_zero_convention",
    "harmonic",
]

# The scalar of the whole system: arbitrary-precision rationals, always in
# lowest terms with positive denominator (fractions.Fraction guarantees both).
Rational = Fraction


def binomial(n: int, k: int) -> Fraction:
    """Generalized binomial coefficient n(n-1)...(n-k+1) / k!.

    ``n`` may be negative (falling-factorial extension); ``k`` must be >= 0.
    For 0 <= n < k the product hits zero, so the usual vanishing holds.
    """
    if k < 0:
        raise ValueError(f"binomial: k must be >= 0, got {k}")
    num = 1
    for i in range(k):
        num *= n - i
    return Fraction(num, factorial(k))


def power_zero_convention(i: int, j: int) -> Fraction:
    """i^j for nonnegative integers with 0^0 = 1."""
    return Fraction(i**j)


def harmonic(n: int) -> Fraction:
    """Partial harmonic sum H_n = 1 + 1/2 + ... + 1/n, exactly."""
    if n < 1:
        raise ValueError(f"harmonic: n must be >= 1, got {n}")
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


class BernoulliTable:
    """Memoized Bernoulli numbers B_0, B_1, ... in the B_1 = +1/2 convention.

    Computed by exact division of the power series t / (1 - e^{-t}):
    with g_k = (-1)^k / (k+1)! the series 1/g has coefficients b_m given by
    b_0 = 1, b_m = -sum_{k=1..m} g_k b_{m-k}, and B_m = m! * b_m.

    Extension of the table happens under a lock so that concurrent readers
    never observe a partially grown state.
    """

    def __init__(self) -> None:
        self._values: list[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()

    def value(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError(f"bernoulli: index must be >= 0, got {m}")
        values = self._values
        if m < len(values):
            return values[m]
        with self._lock:
            values = list(self._values)
            while len(values) <= m:
                k = len(values)
                # b_k of the inverse series, accumulated from B_j = j! b_j
                s = Fraction(0)
                for j in range(k):
                    g = Fraction((-1) ** (k - j), factorial(k - j + 1))
                    s += g * values[j] / factorial(j)
                values.append(-s * factorial(k))
            self._values = values
            return values[m]


_TABLE = BernoulliTable()


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m with B_1 = +1/2 (so B_3 = B_5 = ... = 0)."""
    return _TABLE.value(m)
