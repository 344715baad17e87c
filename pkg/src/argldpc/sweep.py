"""Search for the smallest block length reaching a target girth."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd

from .construct import (BestEffortWarning, ConstructionStalled, TieBreakPolicy, construct,
                        validate_params)
from .graph import girth

#: (average left degree, girth, block length) for rate-1/2 codes found by
#: experiment with this construction; used as default search ranges.
RATE_HALF_REFERENCE = (
    (3, 6, 40),
    (4, 6, 80),
    (5, 6, 172),
    (3, 8, 252),
    (4, 8, 940),
    (3, 10, 1490),
)


@dataclass(frozen=True)
class SweepRow:
    d: int
    target_girth: int
    n: int | None
    achieved_girth: float | None
    attempts: int

    @property
    def found(self) -> bool:
        return self.n is not None

    def to_line(self) -> str:
        if not self.found:
            return f"{self.d} {self.target_girth} not-found - {self.attempts}"
        return f"{self.d} {self.target_girth} {self.n} {self.achieved_girth} {self.attempts}"


SWEEP_HEADER = "# d target_girth n achieved_girth attempts"


def block_lengths(p: int, q: int, n_start: int | None, n_max: int, step: int | None):
    """Candidate ``n`` values keeping ``m = n p / q`` integral and ``m > 1``."""
    unit = q // gcd(p, q)
    step = unit if step is None else step
    if step < 1 or step % unit:
        raise ValueError(f"step must be a positive multiple of {unit} so that m stays integral")
    smallest = 2 * unit
    n = smallest if n_start is None else max(n_start, smallest)
    n = -(-n // unit) * unit
    while n <= n_max:
        yield n
        n += step


def sweep(d: int, target_girth: int, p: int = 1, q: int = 2, *, n_start: int | None = None,
          n_max: int = 4000, step: int | None = None,
          policy: TieBreakPolicy = TieBreakPolicy(), seeds: int = 0,
          seed_base: int = 0) -> SweepRow:
    """Smallest tried ``n`` whose graph has girth >= ``target_girth``.

    Each ``n`` is built with ``policy`` and then, if ``seeds`` > 0, with that
    many seeded-random policies; the best girth counts.  Stalled builds count
    as misses.  Forests have infinite girth and always qualify.
    """
    attempts = 0
    overall = None
    policies = [policy] + [TieBreakPolicy.seeded(seed_base + s) for s in range(seeds)]
    for n in block_lengths(p, q, n_start, n_max, step):
        params = validate_params(n, n * p // q, p, q, d)
        for pol in policies:
            attempts += 1
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", BestEffortWarning)
                    graph, _ = construct(params, pol)
            except ConstructionStalled:
                continue
            g = girth(graph)
            overall = g if overall is None else max(overall, g)
            if g >= target_girth:
                return SweepRow(d, target_girth, n, g, attempts)
    return SweepRow(d, target_girth, None, overall, attempts)
