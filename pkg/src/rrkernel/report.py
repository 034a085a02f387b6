"""Machine-readable outcome of one identity check.

Reports are the common currency of the identity batteries: every check
produces one, the CLI prints one line per report and can dump them as JSON.
To keep JSON output byte-stable across runs and thread counts, rationals are
serialized as decimal-free ``p/q`` strings and ``elapsed_ms`` is zeroed in
the serialized form (wall-clock timing is inherently non-reproducible).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

__all__ = ["IdentityReport", "qstr", "make_report"]


def qstr(x: Fraction) -> str:
    """Canonical decimal-free rendering of a rational: ``p`` or ``p/q``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check.

    ``lhs``/``rhs`` are canonical serialized witnesses; ``passed`` is true
    iff they are exactly equal.  ``inconclusive`` marks numeric cells whose
    precondition could not be certified (boundary crossings); such cells
    never count as failures.
    """

    id: str
    params: Mapping[str, int]
    passed: bool
    lhs: str
    rhs: str
    elapsed_ms: int = 0
    inconclusive: bool = False

    def sort_key(self) -> tuple:
        return (self.id, tuple(sorted(self.params.items())))

    def to_json_dict(self) -> dict:
        d = {
            "id": self.id,
            "params": dict(sorted(self.params.items())),
            "passed": self.passed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "elapsed_ms": 0,
        }
        if self.inconclusive:
            d["inconclusive"] = True
        return d

    def line(self) -> str:
        status = "INCONCLUSIVE" if self.inconclusive else ("PASS" if self.passed else "FAIL")
        params = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        out = f"{status:12s} {self.id} [{params}]"
        if not self.passed and not self.inconclusive:
            out += f"  lhs={self.lhs}  rhs={self.rhs}"
        return out


def make_report(check_id: str, params: Mapping[str, int], lhs: str, rhs: str,
                started: float | None = None) -> IdentityReport:
    """Build a report; ``passed`` is exact string equality of the witnesses."""
    elapsed = 0 if started is None else int((time.perf_counter() - started) * 1000)
    return IdentityReport(
        id=check_id,
        params=dict(params),
        passed=(lhs == rhs),
        lhs=lhs,
        rhs=rhs,
        elapsed_ms=elapsed,
    )
