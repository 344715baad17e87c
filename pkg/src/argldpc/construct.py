"""Almost-regular high-girth Tanner graph construction.

Edges are added one at a time.  Edge ``e`` belongs to left phase
``ceil(e/n)`` and right phase ``ceil(e/m)``.  Odd edges start at a
minimum-degree left vertex, even edges at a minimum-degree right vertex;
the other endpoint is the farthest vertex on the opposite side that is not
already a neighbour and whose degree is still below the current phase + 1.

Two engines produce identical edge sequences:

* :func:`construct` runs the whole loop inside a numba kernel;
* :func:`construct_reference` drives :func:`select_edge` step by step on a
  :class:`~argldpc.graph.BipartiteGraph` with a plain-Python BFS.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numba import njit

from .graph import UNREACHABLE, BipartiteGraph, Side, VertexRef, bfs_distances

_MASK64 = (1 << 64) - 1


class InvalidParameters(ValueError):
    """Construction parameters violate a structural requirement.

    ``rule`` names the violated condition: ``"positive"``, ``"n>m>1"``,
    ``"p<q"`` or ``"np=mq"``.
    """

    def __init__(self, rule: str, message: str):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule


class BestEffortWarning(UserWarning):
    """Parameters exceed the completion guarantee; the run may stall."""


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    m: int
    p: int
    q: int
    d: int

    @property
    def threshold(self) -> float:
        return (self.m + 3) / (3 * (self.p + self.q))

    @property
    def guaranteed(self) -> bool:
        # d <= (m+3) / (3(p+q)), evaluated exactly in integers
        return 3 * (self.p + self.q) * self.d <= self.m + 3

    @property
    def left_degree(self) -> int:
        return self.p * self.d

    @property
    def right_degree(self) -> int:
        return self.q * self.d

    @property
    def total_edges(self) -> int:
        return self.n * self.p * self.d


def validate_params(n: int, m: int, p: int, q: int, d: int) -> ConstructionParams:
    values = dict(n=n, m=m, p=p, q=q, d=d)
    for name, value in values.items():
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise InvalidParameters("positive", f"{name} must be a positive integer, got {value!r}")
    if not n > m > 1:
        raise InvalidParameters("n>m>1", f"need n > m > 1, got n={n}, m={m}")
    if not p < q:
        raise InvalidParameters("p<q", f"need p < q, got p={p}, q={q}")
    if n * p != m * q:
        raise InvalidParameters("np=mq", f"need n*p == m*q, got {n}*{p}={n * p} vs {m}*{q}={m * q}")
    return ConstructionParams(int(n), int(m), int(p), int(q), int(d))


def phase_of(e: int, n: int, m: int) -> tuple[int, int]:
    """Left and right phase ``(ceil(e/n), ceil(e/m))`` of edge number ``e``."""
    return -(-e // n), -(-e // m)


@dataclass(frozen=True)
class PhaseState:
    e: int
    i: int
    j: int

    @classmethod
    def at(cls, e: int, n: int, m: int) -> "PhaseState":
        return cls(e, *phase_of(e, n, m))


@njit(cache=True)
def _splitmix64(x):
    z = x + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _tie_key(randomized, seed, e, v):
    if not randomized:
        return np.uint64(v)
    return _splitmix64(_splitmix64(seed ^ (np.uint64(e) << np.uint64(32))) ^ np.uint64(v))


@dataclass(frozen=True)
class TieBreakPolicy:
    """How ties are broken among equally good sources and targets.

    Sources: lowest degree first.  Targets: largest distance, then lowest
    degree.  Remaining ties go to the lowest index (``deterministic``) or to
    a uniformly random order keyed by ``(seed, e, vertex)``.
    """

    mode: str = "deterministic"
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("deterministic", "seeded-random"):
            raise ValueError(f"unknown tie-break mode {self.mode!r}")

    @classmethod
    def deterministic(cls) -> "TieBreakPolicy":
        return cls()

    @classmethod
    def seeded(cls, seed: int) -> "TieBreakPolicy":
        return cls("seeded-random", seed)

    @property
    def randomized(self) -> bool:
        return self.mode == "seeded-random"

    @property
    def seed64(self) -> np.uint64:
        return np.uint64(self.seed & _MASK64)

    def key(self, e: int, vertex: int) -> int:
        """Tie-break key for 0-based joint vertex id (left ``0..n-1``, right ``n..``)."""
        return int(_tie_key(self.randomized, self.seed64, e, vertex))


@dataclass(frozen=True)
class TraceRecord:
    e: int
    i: int
    j: int
    source: VertexRef
    target: VertexRef
    distance: float
    candidates: int | None = None

    def to_line(self) -> str:
        dist = "inf" if self.distance == UNREACHABLE else str(int(self.distance))
        size = "-" if self.candidates is None else str(self.candidates)
        return f"{self.e} {self.i} {self.j} {self.source} {self.target} {size} {dist}"

    @classmethod
    def from_line(cls, line: str) -> "TraceRecord":
        e, i, j, src, tgt, size, dist = line.split()
        return cls(
            int(e), int(i), int(j), VertexRef.parse(src), VertexRef.parse(tgt),
            UNREACHABLE if dist == "inf" else int(dist),
            None if size == "-" else int(size),
        )


@dataclass(frozen=True)
class StallEvent:
    e: int
    i: int
    j: int
    source: VertexRef

    @property
    def source_side(self) -> Side:
        return self.source.side

    @property
    def odd(self) -> bool:
        return self.e % 2 == 1

    def __str__(self) -> str:
        parity = "odd" if self.odd else "even"
        return (f"candidate set empty at edge {self.e} ({parity}), phase ({self.i}, {self.j}), "
                f"source {self.source}")


TRACE_HEADER = "# e i j source target candidates distance"


@dataclass
class ConstructionTrace:
    records: list[TraceRecord] = field(default_factory=list)
    stall: StallEvent | None = None

    def __len__(self) -> int:
        return len(self.records)

    def to_text(self) -> str:
        lines = [TRACE_HEADER] + [r.to_line() for r in self.records]
        if self.stall is not None:
            s = self.stall
            lines.append(f"# stall {s.e} {s.i} {s.j} {s.source}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ConstructionTrace":
        trace = cls()
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("# stall"):
                _, _, e, i, j, src = line.split()
                trace.stall = StallEvent(int(e), int(i), int(j), VertexRef.parse(src))
            elif line and not line.startswith("#"):
                trace.records.append(TraceRecord.from_line(line))
        return trace

    def edges(self) -> list[tuple[VertexRef, VertexRef]]:
        """``(left, right)`` pairs in insertion order."""
        return [(r.source, r.target) if r.source.side is Side.LEFT else (r.target, r.source)
                for r in self.records]


class Construction(NamedTuple):
    graph: BipartiteGraph
    trace: ConstructionTrace


class ConstructionStalled(RuntimeError):
    """The candidate set became empty before all edges were placed."""

    def __init__(self, event: StallEvent, graph: BipartiteGraph, trace: ConstructionTrace):
        super().__init__(str(event))
        self.event = event
        self.graph = graph
        self.trace = trace


def select_edge(g: BipartiteGraph, state: PhaseState,
                policy: TieBreakPolicy = TieBreakPolicy()) -> TraceRecord | StallEvent:
    """Choose edge number ``state.e`` for graph ``g`` without mutating it."""
    e, i, j = state.e, state.i, state.j
    if e != g.edge_count + 1:
        raise ValueError(f"edge counter {e} inconsistent with {g.edge_count} edges")
    if e % 2:
        side, cap = Side.LEFT, j + 1
        src_deg, dst_deg = g.left_degrees(), g.right_degrees()
        src_off, dst_off = 0, g.n_left
    else:
        side, cap = Side.RIGHT, i + 1
        src_deg, dst_deg = g.right_degrees(), g.left_degrees()
        src_off, dst_off = g.n_left, 0

    k = min(range(len(src_deg)), key=lambda x: (src_deg[x], policy.key(e, src_off + x)))
    source = VertexRef(side, k + 1)
    dm = bfs_distances(g, source)
    far = dm.right if side is Side.LEFT else dm.left
    candidates = [z for z in range(len(dst_deg)) if far[z] > 1 and dst_deg[z] < cap]
    if not candidates:
        return StallEvent(e, i, j, source)
    y = min(candidates, key=lambda z: (-far[z], dst_deg[z], policy.key(e, dst_off + z)))
    return TraceRecord(e, i, j, source, VertexRef(side.other, y + 1), far[y], len(candidates))


def _warn_if_best_effort(params: ConstructionParams) -> None:
    if not params.guaranteed:
        warnings.warn(
            f"d={params.d} exceeds the completion threshold {params.threshold:.4g} for "
            f"m={params.m}, p={params.p}, q={params.q}; construction is best-effort",
            BestEffortWarning, stacklevel=3,
        )


def construct_reference(params: ConstructionParams,
                        policy: TieBreakPolicy = TieBreakPolicy()) -> Construction:
    """Pure-Python construction via repeated :func:`select_edge`.  Slow; small inputs only."""
    _warn_if_best_effort(params)
    g = BipartiteGraph(params.n, params.m)
    trace = ConstructionTrace()
    for e in range(1, params.total_edges + 1):
        outcome = select_edge(g, PhaseState.at(e, params.n, params.m), policy)
        if isinstance(outcome, StallEvent):
            trace.stall = outcome
            raise ConstructionStalled(outcome, g, trace)
        g.add_edge(outcome.source, outcome.target)
        trace.records.append(outcome)
    return Construction(g, trace)


@njit(cache=True)
def _construct_kernel(n, m, total, cap, randomized, seed):
    nv = n + m
    deg = np.zeros(nv, dtype=np.int64)
    adj = np.empty((nv, cap), dtype=np.int64)
    src = np.empty(total, dtype=np.int64)
    dst = np.empty(total, dtype=np.int64)
    far_rec = np.empty(total, dtype=np.int64)
    size_rec = np.empty(total, dtype=np.int64)
    dist = np.empty(nv, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    big = np.iinfo(np.int64).max

    for e in range(1, total + 1):
        i = (e + n - 1) // n
        j = (e + m - 1) // m
        if e % 2 == 1:
            lo, hi, tlo, thi, limit = 0, n, n, nv, j + 1
        else:
            lo, hi, tlo, thi, limit = n, nv, 0, n, i + 1

        s = -1
        s_deg = big
        s_key = np.uint64(0)
        for x in range(lo, hi):
            k = _tie_key(randomized, seed, e, x)
            if deg[x] < s_deg or (deg[x] == s_deg and k < s_key):
                s, s_deg, s_key = x, deg[x], k

        dist[:] = -1
        dist[s] = 0
        head, tail = 0, 1
        queue[0] = s
        while head < tail:
            x = queue[head]
            head += 1
            for p in range(deg[x]):
                w = adj[x, p]
                if dist[w] < 0:
                    dist[w] = dist[x] + 1
                    queue[tail] = w
                    tail += 1

        t = -1
        t_far = -1
        t_deg = big
        t_key = np.uint64(0)
        count = 0
        for z in range(tlo, thi):
            dz = dist[z]
            if dz == 1 or deg[z] >= limit:
                continue
            count += 1
            f = big if dz < 0 else dz
            if f < t_far:
                continue
            k = _tie_key(randomized, seed, e, z)
            if f > t_far or deg[z] < t_deg or (deg[z] == t_deg and k < t_key):
                t, t_far, t_deg, t_key = z, f, deg[z], k

        if count == 0:
            return src[: e - 1], dst[: e - 1], far_rec[: e - 1], size_rec[: e - 1], e, s

        src[e - 1] = s
        dst[e - 1] = t
        far_rec[e - 1] = -1 if t_far == big else t_far
        size_rec[e - 1] = count
        adj[s, deg[s]] = t
        deg[s] += 1
        adj[t, deg[t]] = s
        deg[t] += 1

    return src, dst, far_rec, size_rec, 0, -1


def _joint_to_ref(v: int, n: int) -> VertexRef:
    return VertexRef(Side.LEFT, v + 1) if v < n else VertexRef(Side.RIGHT, v - n + 1)


def construct(params: ConstructionParams,
              policy: TieBreakPolicy = TieBreakPolicy()) -> Construction:
    """Build the Tanner graph for ``params``.

    Raises :class:`ConstructionStalled` if the candidate set empties, which
    cannot happen when ``params.guaranteed`` holds.
    """
    _warn_if_best_effort(params)
    n, m = params.n, params.m
    # degrees never exceed the final phase + 1 on either side
    cap = max(params.left_degree, params.right_degree) + 1
    src, dst, far, size, stall_e, stall_src = _construct_kernel(
        n, m, params.total_edges, cap, policy.randomized, policy.seed64)

    g = BipartiteGraph(n, m)
    trace = ConstructionTrace()
    for e, (s, t, f, c) in enumerate(zip(src.tolist(), dst.tolist(), far.tolist(), size.tolist()), 1):
        source, target = _joint_to_ref(s, n), _joint_to_ref(t, n)
        g.add_edge(source, target)
        i, j = phase_of(e, n, m)
        trace.records.append(
            TraceRecord(e, i, j, source, target, UNREACHABLE if f < 0 else f, c))
    if stall_e:
        event = StallEvent(stall_e, *phase_of(stall_e, n, m), _joint_to_ref(stall_src, n))
        trace.stall = event
        raise ConstructionStalled(event, g, trace)
    return Construction(g, trace)


@dataclass
class PhaseReport:
    ok: bool
    left_phases_checked: int
    right_phases_checked: int
    edges_checked: int
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_phase_invariants(trace: ConstructionTrace, params: ConstructionParams) -> PhaseReport:
    """Replay ``trace`` and check the degree windows at every phase boundary.

    At the end of left phase ``i`` every left degree lies in ``[i-1, i+1]`` and
    the number of vertices at ``i-1`` equals the number at ``i+1`` (at most
    ``n // 2``); likewise on the right.  During phase ``(i, j)`` no left degree
    exceeds ``i+1`` and no right degree exceeds ``j+1``.  The first violation
    is reported with its phase and vertex.
    """
    n, m = params.n, params.m
    left = [0] * n
    right = [0] * m
    seen = set()
    report = PhaseReport(True, 0, 0, 0)

    def fail(msg: str) -> PhaseReport:
        report.ok = False
        report.violation = msg
        return report

    def window(degs, phase, side, size):
        for k, dg in enumerate(degs):
            if not phase - 1 <= dg <= phase + 1:
                return f"end of {side} phase {phase}: vertex {side[0].upper()}{k + 1} has degree {dg}"
        low = sum(1 for dg in degs if dg == phase - 1)
        high = sum(1 for dg in degs if dg == phase + 1)
        if low != high or low > size // 2:
            return (f"end of {side} phase {phase}: {low} vertices at degree {phase - 1} "
                    f"vs {high} at degree {phase + 1}")
        return None

    for pos, rec in enumerate(trace.records, 1):
        e, i, j = rec.e, rec.i, rec.j
        if e != pos or (i, j) != phase_of(e, n, m):
            return fail(f"edge {pos}: recorded as e={e}, phase ({i}, {j})")
        want = Side.LEFT if e % 2 else Side.RIGHT
        if rec.source.side is not want or rec.target.side is want:
            return fail(f"edge {e}: source {rec.source} on wrong side for {'odd' if e % 2 else 'even'} edge")
        if not rec.distance > 1:
            return fail(f"edge {e}: target {rec.target} at distance {rec.distance} from {rec.source}")
        lv, rv = (rec.source, rec.target) if want is Side.LEFT else (rec.target, rec.source)
        if not (1 <= lv.index <= n and 1 <= rv.index <= m):
            return fail(f"edge {e}: vertex out of range")
        if (lv, rv) in seen:
            return fail(f"edge {e}: {lv} and {rv} are already adjacent")
        seen.add((lv, rv))
        target_deg = right[rv.index - 1] if want is Side.LEFT else left[lv.index - 1]
        target_cap = j + 1 if want is Side.LEFT else i + 1
        if target_deg >= target_cap:
            return fail(f"phase ({i}, {j}), edge {e}: target {rec.target} already has degree "
                        f"{target_deg} >= {target_cap}")
        left[lv.index - 1] += 1
        right[rv.index - 1] += 1
        if left[lv.index - 1] > i + 1:
            return fail(f"phase ({i}, {j}), edge {e}: vertex {lv} exceeds degree {i + 1}")
        if right[rv.index - 1] > j + 1:
            return fail(f"phase ({i}, {j}), edge {e}: vertex {rv} exceeds degree {j + 1}")
        if e % n == 0:
            msg = window(left, e // n, "left", n)
            if msg:
                return fail(msg)
            report.left_phases_checked += 1
        if e % m == 0:
            msg = window(right, e // m, "right", m)
            if msg:
                return fail(msg)
            report.right_phases_checked += 1
        report.edges_checked += 1
    return report
