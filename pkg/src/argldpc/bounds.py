"""Closed-form rate, completion and girth bounds for the construction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .construct import ConstructionParams, StallEvent

#: Relative tolerance used when printing / comparing real-valued bounds.
REL_TOL = 1e-12


def design_rate(p: int, q: int) -> Fraction:
    """Lower bound ``1 - p/q`` on the rate of any code built with ratio ``p:q``."""
    if not 0 < p < q:
        raise ValueError(f"need 0 < p < q, got p={p}, q={q}")
    return 1 - Fraction(p, q)


def feasibility_threshold(m: int, p: int, q: int) -> tuple[float, int]:
    """Largest ``d`` for which the construction is guaranteed to finish.

    Returns the real threshold ``(m+3) / (3(p+q))`` and its floor.
    """
    if m <= 1 or not 0 < p < q:
        raise ValueError(f"need m > 1 and 0 < p < q, got m={m}, p={p}, q={q}")
    denom = 3 * (p + q)
    return (m + 3) / denom, (m + 3) // denom


def girth_lower_bound(m: int, p: int, q: int, d: int) -> float:
    """``2 * log_{pqd^2}(1 + m(pqd^2 - 1) / (2(pd + 1)))``."""
    base = p * q * d * d
    if base <= 1:
        raise ValueError(f"degenerate logarithm base p*q*d^2 = {base}")
    return 2 * math.log(1 + m * (base - 1) / (2 * (p * d + 1))) / math.log(base)


def stall_consistency_check(event: StallEvent, params: ConstructionParams) -> bool:
    """Necessary condition for any stall: ``(m+3)/3 < i+j`` (odd edge) or ``(n+3)/3 < i+j`` (even).

    A stall failing this test means the implementation, not the parameters,
    is at fault.
    """
    size = params.m if event.odd else params.n
    return size + 3 < 3 * (event.i + event.j)


@dataclass(frozen=True)
class BoundReport:
    design_rate: Fraction
    feasibility_threshold: float
    max_guaranteed_d: int
    girth_lower_bound: float

    @classmethod
    def for_params(cls, m: int, p: int, q: int, d: int) -> "BoundReport":
        threshold, max_d = feasibility_threshold(m, p, q)
        return cls(design_rate(p, q), threshold, max_d, girth_lower_bound(m, p, q, d))

    def to_text(self) -> str:
        return (
            f"design_rate = {self.design_rate}\n"
            f"feasibility_threshold = {self.feasibility_threshold:.12g}\n"
            f"max_guaranteed_d = {self.max_guaranteed_d}\n"
            f"girth_lower_bound = {self.girth_lower_bound:.12g}\n"
        )
