"""Numeric verification of push-forwards along branched covers of relative
dimension 0.

A parametric polynomial family p_s(z) defines a cover {p_s = 0} -> s; the
push-forward of a test function g is the multiplicity-weighted sum of g over
the fiber.  Roots are found simultaneously (Aberth-Ehrlich iteration) and
grouped into weighted points by a clustering tolerance.  All floating point
in the package is confined to this module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_RESIDUAL",
    "DEFAULT_TAU_GROUP",
    "PolyFamily",
    "WeightedFiber",
    "SolverError",
    "FamilyParseError",
    "parse_family",
    "fiber_at",
    "pushforward",
    "continuity_probe",
    "multiplicity_constancy",
    "ContinuityReport",
    "MultiplicityReport",
    "test_function",
    "TEST_FUNCTION_NAMES",
]

# Both tolerances are relative to the coefficient scale of the evaluated
# polynomial; they are surfaced as CLI flags.
DEFAULT_RESIDUAL = 1e-12
DEFAULT_TAU_GROUP = 1e-6
_MAX_ITERATIONS = 400


class SolverError(RuntimeError):
    """Root solver failed to converge or the family degenerated."""

    def __init__(self, message: str, *, s: complex | None = None,
                 residual: float | None = None, iterations: int | None = None):
        detail = message
        if s is not None:
            detail += f" at s={s!r}"
        if residual is not None:
            detail += f" (residual {residual:.3e}"
            if iterations is not None:
                detail += f" after {iterations} iterations"
            detail += ")"
        super().__init__(detail)
        self.s = s
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class PolyFamily:
    """Polynomial in z whose coefficients are exact polynomials in s.

    ``coeff_fns[i][j]`` is the rational coefficient of z^i s^j.  The leading
    z-coefficient must not vanish on the probed parameter domain; evaluation
    raises SolverError if it does.
    """

    coeff_fns: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.coeff_fns) < 2:
            raise ValueError("family must have degree >= 1 in z")
        if all(c == 0 for c in self.coeff_fns[-1]):
            raise ValueError("leading z-coefficient is identically zero")

    @property
    def degree(self) -> int:
        return len(self.coeff_fns) - 1

    def coefficients_at(self, s: complex) -> np.ndarray:
        """Complex coefficients of p_s, ascending in z."""
        out = np.empty(self.degree + 1, dtype=np.complex128)
        for i, poly in enumerate(self.coeff_fns):
            acc = 0j
            for c in reversed(poly):
                acc = acc * s + complex(c)
            out[i] = acc
        return out


@dataclass(frozen=True)
class WeightedFiber:
    """Roots grouped into (point, multiplicity) pairs.

    ``residual`` is the largest |p(root)| accepted; ``condition`` is the
    coefficient scale divided by the smallest |p'(root)|, a proxy for how
    trustworthy the cluster multiplicities are near collisions.
    """

    points: tuple[tuple[complex, int], ...]
    residual: float
    condition: float

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.points)


def _aberth_roots(coeffs: np.ndarray, residual_tol: float,
                  s: complex) -> tuple[np.ndarray, float, int]:
    """All roots of the polynomial with the given ascending coefficients."""
    d = len(coeffs) - 1
    scale = float(np.max(np.abs(coeffs)))
    lead = coeffs[-1]
    if abs(lead) <= 1e-14 * scale:
        raise SolverError("leading coefficient vanished", s=s)
    monic = coeffs / lead
    deriv = monic[1:] * np.arange(1, d + 1)

    if d == 1:
        root = np.array([-monic[0]], dtype=np.complex128)
        res = abs(np.polyval(coeffs[::-1], root[0]))
        return root, float(res), 0

    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    angles = 2.0 * math.pi * (np.arange(d) + 0.25) / d + 0.5 / d
    z = radius * np.exp(1j * angles)

    residual_cut = residual_tol * max(scale, 1.0)
    best_z, best_worst = z.copy(), math.inf
    prev_worst = math.inf
    accepted_at: int | None = None
    for it in range(1, _MAX_ITERATIONS + 1):
        pz = np.polyval(monic[::-1], z)
        dpz = np.polyval(deriv[::-1], z)
        w = np.where(dpz != 0, pz / np.where(dpz == 0, 1.0, dpz), pz)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - w * inv.sum(axis=1)
        step = np.where(np.abs(denom) > 1e-300, w / denom, w)
        z = z - step
        worst = float(np.max(np.abs(np.polyval(coeffs[::-1], z))))
        if worst < best_worst:
            best_z, best_worst = z.copy(), worst
        if worst <= residual_cut:
            # Keep polishing while the residual still drops: multiple roots
            # converge only linearly, and tightening them well below the
            # clustering tolerance keeps multiplicity grouping honest.
            if accepted_at is None:
                accepted_at = it
            if worst == 0.0 or worst >= prev_worst or it - accepted_at >= 32:
                return best_z, best_worst, it
        prev_worst = worst
    if accepted_at is not None:
        return best_z, best_worst, _MAX_ITERATIONS
    raise SolverError("root iteration did not converge", s=s,
                      residual=best_worst, iterations=_MAX_ITERATIONS)


def _cluster(roots: np.ndarray, tau: float) -> list[tuple[complex, int]]:
    """Group roots whose mutual distance chains below tau; multiplicities are
    cluster sizes and each cluster is represented by its centroid."""
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    parent = list(range(len(roots)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a_pos, i in enumerate(order):
        for j in order[a_pos + 1:]:
            if abs(roots[i] - roots[j]) <= tau:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(len(roots)):
        groups.setdefault(find(i), []).append(complex(roots[i]))
    clusters = [(sum(g) / len(g), len(g)) for g in groups.values()]
    clusters.sort(key=lambda pm: (pm[0].real, pm[0].imag))
    return clusters


def fiber_at(family: PolyFamily, s: complex,
             tau_group: float = DEFAULT_TAU_GROUP,
             residual: float = DEFAULT_RESIDUAL) -> WeightedFiber:
    """All roots of p_s grouped by the clustering tolerance.

    Tolerances are relative: the clustering radius is ``tau_group`` times the
    coefficient scale, the accepted residual ``residual`` times the scale.
    """
    coeffs = family.coefficients_at(s)
    scale = max(float(np.max(np.abs(coeffs))), 1.0)
    roots, worst, _ = _aberth_roots(coeffs, residual, s)
    deriv = (coeffs[1:] * np.arange(1, family.degree + 1))
    dvals = np.abs(np.polyval(deriv[::-1], roots))
    condition = scale / max(float(np.min(dvals)), 1e-300) if len(dvals) else 1.0
    clusters = _cluster(roots, tau_group * scale)
    return WeightedFiber(tuple(clusters), worst, condition)


def pushforward(family: PolyFamily, g: Callable[[complex], complex], s: complex,
                tau_group: float = DEFAULT_TAU_GROUP,
                residual: float = DEFAULT_RESIDUAL) -> complex:
    """Multiplicity-weighted fiber sum of g over the roots of p_s."""
    fiber = fiber_at(family, s, tau_group, residual)
    return sum(m * complex(g(z)) for z, m in fiber.points)


@dataclass(frozen=True)
class ContinuityReport:
    center: complex
    h_center: complex
    rows: tuple[tuple[float, float], ...]  # (radius, oscillation)
    slack: float

    @property
    def passed(self) -> bool:
        oscs = [o for _, o in self.rows]
        return all(b <= a + self.slack for a, b in zip(oscs, oscs[1:]))


def continuity_probe(family: PolyFamily, g: Callable[[complex], complex],
                     center: complex, radii: Sequence[float],
                     samples_per_circle: int = 16, slack: float = 1e-8,
                     tau_group: float = DEFAULT_TAU_GROUP,
                     residual: float = DEFAULT_RESIDUAL) -> ContinuityReport:
    """Oscillation osc(rho) = max |h(s) - h(center)| over sampled circles of
    shrinking radius rho; continuity of the fiber sum h means the recorded
    oscillations decay (checked as non-increase within the slack)."""
    rs = [float(r) for r in radii]
    if any(b >= a for a, b in zip(rs, rs[1:])) or any(r <= 0 for r in rs):
        raise ValueError("radii must be strictly decreasing and positive")
    h0 = pushforward(family, g, center, tau_group, residual)
    rows = []
    for rho in rs:
        osc = 0.0
        for k in range(samples_per_circle):
            s = center + rho * cmath.exp(2j * math.pi * k / samples_per_circle)
            osc = max(osc, abs(pushforward(family, g, s, tau_group, residual) - h0))
        rows.append((rho, osc))
    return ContinuityReport(center, h0, tuple(rows), slack)


@dataclass(frozen=True)
class MultiplicityReport:
    disk_center: complex
    disk_radius: float
    counts: tuple[tuple[complex, int], ...]  # (parameter, roots inside disk)
    inconclusive: bool
    boundary_margin: float
    max_condition: float

    @property
    def passed(self) -> bool:
        values = {c for _, c in self.counts}
        return not self.inconclusive and len(values) == 1


def _parameter_samples(center: complex, radius: float, count: int) -> list[complex]:
    # deterministic sunflower layout, no RNG
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    out = []
    for j in range(count):
        r = radius * math.sqrt((j + 0.5) / count)
        theta = 2.0 * math.pi * j / golden
        out.append(center + r * cmath.exp(1j * theta))
    return out


def multiplicity_constancy(family: PolyFamily, disk_center: complex,
                           disk_radius: float, samples: int,
                           param_center: complex | None = None,
                           param_radius: float | None = None,
                           margin_frac: float = 0.01,
                           tau_group: float = DEFAULT_TAU_GROUP,
                           residual: float = DEFAULT_RESIDUAL) -> MultiplicityReport:
    """Count roots inside the fixed z-disk at each sampled parameter.

    Parameters default to a sweep over the disk of one quarter the radius
    around the same center.  A root within ``margin_frac * disk_radius`` of
    the disk boundary at any sample makes the report inconclusive rather
    than failed: the count cannot be certified there.
    """
    if disk_radius <= 0 or samples < 1:
        raise ValueError("need a positive disk radius and at least one sample")
    if param_center is None:
        param_center = disk_center
    if param_radius is None:
        param_radius = disk_radius / 4.0
    margin = margin_frac * disk_radius
    counts = []
    inconclusive = False
    max_condition = 0.0
    for s in _parameter_samples(param_center, param_radius, samples):
        fiber = fiber_at(family, s, tau_group, residual)
        max_condition = max(max_condition, fiber.condition)
        inside = 0
        for z, m in fiber.points:
            dist = abs(z - disk_center)
            if abs(dist - disk_radius) <= margin:
                inconclusive = True
            if dist < disk_radius:
                inside += m
        counts.append((s, inside))
    return MultiplicityReport(disk_center, disk_radius, tuple(counts),
                              inconclusive, margin, max_condition)


# ---------------------------------------------------------------------------
# Test-function catalog

TEST_FUNCTION_NAMES = ("z", "z2", "abs2", "re", "const")


def test_function(name: str) -> Callable[[complex], complex]:
    """Catalog lookup; ``poly:c0,c1,...`` builds a polynomial in z with
    rational coefficients (e.g. ``poly:0,3/2,1`` is (3/2)z + z^2)."""
    fixed: dict[str, Callable[[complex], complex]] = {
        "z": lambda z: z,
        "z2": lambda z: z * z,
        "abs2": lambda z: complex(abs(z) ** 2),
        "re": lambda z: complex(z.real),
        "const": lambda z: 1.0 + 0.0j,
    }
    if name in fixed:
        return fixed[name]
    if name.startswith("poly:"):
        try:
            coeffs = [Fraction(part) for part in name[5:].split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad polynomial spec {name!r}: {exc}") from None

        def poly(z: complex, _cs=tuple(coeffs)) -> complex:
            acc = 0j
            for c in reversed(_cs):
                acc = acc * z + complex(c)
            return acc

        return poly
    raise ValueError(f"unknown test function {name!r}; "
                     f"choose from {TEST_FUNCTION_NAMES} or poly:c0,c1,...")


# ---------------------------------------------------------------------------
# Family parser: integer-coefficient polynomials in z and s with + - * ^ ()

class FamilyParseError(ValueError):
    """Parse failure with the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (position {pos})")
        self.pos = pos


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> FamilyParseError:
        return FamilyParseError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    # polynomials as {(z_power, s_power): int}
    def parse(self) -> dict[tuple[int, int], int]:
        poly = self.expr()
        if self.peek():
            raise self.error(f"unexpected character {self.peek()!r}")
        return poly

    def expr(self) -> dict[tuple[int, int], int]:
        if self.peek() == "-":
            self.take()
            acc = _pneg(self.term())
        else:
            acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            acc = _padd(acc, _pneg(rhs) if op == "-" else rhs)
        return acc

    def term(self) -> dict[tuple[int, int], int]:
        acc = self.factor()
        while self.peek() == "*":
            self.take()
            acc = _pmul(acc, self.factor())
        return acc

    def factor(self) -> dict[tuple[int, int], int]:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            e = self.integer()
            out = {(0, 0): 1}
            for _ in range(e):
                out = _pmul(out, base)
            return out
        return base

    def atom(self) -> dict[tuple[int, int], int]:
        ch = self.peek()
        if ch == "(":
            self.take()
            inner = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.take()
            return inner
        if ch == "z":
            self.take()
            return {(1, 0): 1}
        if ch == "s":
            self.take()
            return {(0, 1): 1}
        if ch.isdigit():
            return {(0, 0): self.integer()}
        raise self.error(f"expected 'z', 's', a number or '(', got {ch!r}")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c != 0}


def _pneg(a: dict) -> dict:
    return {e: -c for e, c in a.items()}


def _pmul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, int], int] = {}
    for (z1, s1), c1 in a.items():
        for (z2, s2), c2 in b.items():
            e = (z1 + z2, s1 + s2)
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c != 0}


def parse_family(text: str) -> PolyFamily:
    """Parse e.g. ``"z^2 - s"`` or ``"z^3 - 3*s*z + 2*s"`` into a family."""
    poly = _Parser(text).parse()
    if not poly:
        raise FamilyParseError("empty polynomial", 0)
    deg_z = max(z for z, _ in poly)
    if deg_z < 1:
        raise FamilyParseError("family must depend on z", 0)
    deg_s = max((s for _, s in poly), default=0)
    coeffs = [[Fraction(0)] * (deg_s + 1) for _ in range(deg_z + 1)]
    for (zp, sp), c in poly.items():
        coeffs[zp][sp] = Fraction(c)
    return PolyFamily(tuple(tuple(row) for row in coeffs))
