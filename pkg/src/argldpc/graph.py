"""Bipartite Tanner graphs: adjacency, BFS distances and exact girth.

Vertices are addressed as ``VertexRef(side, index)`` with 1-based indices,
matching the usual ``v1..vn`` / ``c1..cm`` naming of variable and check
nodes.  Internally neighbour lists are 0-based and kept in insertion order
so that construction traces replay deterministically.
"""

from __future__ import annotations

import enum
import math
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np
from numba import njit

#: Distance to a vertex in another connected component.  Compares greater
#: than every finite distance, so "farthest" selection prefers it.
UNREACHABLE = math.inf

#: Girth of a forest.
ACYCLIC = math.inf


class Side(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True, order=True)
class VertexRef:
    side: Side
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"vertex index must be >= 1, got {self.index}")

    def __str__(self) -> str:
        return f"{self.side.value}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "VertexRef":
        """Parse ``"L3"`` / ``"R12"``."""
        text = text.strip()
        try:
            return cls(Side(text[0].upper()), int(text[1:]))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad vertex reference {text!r}") from exc


def L(index: int) -> VertexRef:
    return VertexRef(Side.LEFT, index)


def R(index: int) -> VertexRef:
    return VertexRef(Side.RIGHT, index)


class GraphError(ValueError):
    """Invalid graph operation (bad size, vertex out of range, parallel edge)."""


class BipartiteGraph:
    """Simple bipartite graph over ``n_left`` variable and ``n_right`` check vertices."""

    def __init__(self, n_left: int, n_right: int):
        if n_left < 1 or n_right < 1:
            raise GraphError(
                f"both sides need at least one vertex, got n_left={n_left}, n_right={n_right}"
            )
        self.n_left = int(n_left)
        self.n_right = int(n_right)
        self._left: list[list[int]] = [[] for _ in range(self.n_left)]
        self._right: list[list[int]] = [[] for _ in range(self.n_right)]
        self._edges: list[tuple[int, int]] = []
        self._edge_set: set[tuple[int, int]] = set()

    def __repr__(self) -> str:
        return f"BipartiteGraph(n_left={self.n_left}, n_right={self.n_right}, edges={self.edge_count})"

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def n_vertices(self) -> int:
        return self.n_left + self.n_right

    def _check(self, v: VertexRef) -> None:
        size = self.n_left if v.side is Side.LEFT else self.n_right
        if not 1 <= v.index <= size:
            raise GraphError(f"vertex {v} out of range (side size {size})")

    def add_edge(self, u: VertexRef, v: VertexRef) -> "BipartiteGraph":
        """Insert the edge ``u -- v``; one endpoint must be on each side.

        The endpoints may be given in either order.  Returns ``self``.
        """
        if u.side is v.side:
            raise GraphError(f"edge {u}--{v} does not cross the bipartition")
        if u.side is Side.RIGHT:
            u, v = v, u
        self._check(u)
        self._check(v)
        self._link(u.index - 1, v.index - 1)
        return self

    def _link(self, left: int, right: int) -> None:
        key = (left, right)
        if key in self._edge_set:
            raise GraphError(f"parallel edge L{left + 1}--R{right + 1}")
        self._edge_set.add(key)
        self._edges.append(key)
        self._left[left].append(right)
        self._right[right].append(left)

    def has_edge(self, u: VertexRef, v: VertexRef) -> bool:
        if u.side is Side.RIGHT:
            u, v = v, u
        return (u.index - 1, v.index - 1) in self._edge_set

    def degree(self, v: VertexRef) -> int:
        self._check(v)
        return len(self._adj(v.side)[v.index - 1])

    def neighbors(self, v: VertexRef) -> list[VertexRef]:
        self._check(v)
        other = v.side.other
        return [VertexRef(other, k + 1) for k in self._adj(v.side)[v.index - 1]]

    def _adj(self, side: Side) -> list[list[int]]:
        return self._left if side is Side.LEFT else self._right

    def left_degrees(self) -> list[int]:
        return [len(a) for a in self._left]

    def right_degrees(self) -> list[int]:
        return [len(a) for a in self._right]

    def edges(self) -> list[tuple[VertexRef, VertexRef]]:
        """All edges as ``(left, right)`` pairs, in insertion order."""
        return [(L(a + 1), R(b + 1)) for a, b in self._edges]

    def edge_indices(self) -> list[tuple[int, int]]:
        """0-based ``(left, right)`` pairs, in insertion order."""
        return list(self._edges)

    def left_neighbors(self, left: int) -> list[int]:
        """0-based right neighbours of 0-based left vertex ``left``."""
        return list(self._left[left])

    def right_neighbors(self, right: int) -> list[int]:
        """0-based left neighbours of 0-based right vertex ``right``."""
        return list(self._right[right])

    def to_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency over the joint vertex space (left ``0..n-1``, right ``n..n+m-1``)."""
        n = self.n_left
        lists = [[n + b for b in a] for a in self._left] + [list(a) for a in self._right]
        indptr = np.zeros(len(lists) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in lists])
        indices = np.fromiter((x for a in lists for x in a), dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges) -> "BipartiteGraph":
        """Build from 1-based ``(left, right)`` index pairs."""
        g = cls(n_left, n_right)
        for a, b in edges:
            g.add_edge(L(a), R(b))
        return g

    @classmethod
    def complete(cls, n_left: int, n_right: int) -> "BipartiteGraph":
        return cls.from_edges(
            n_left, n_right, [(a, b) for a in range(1, n_left + 1) for b in range(1, n_right + 1)]
        )


def new_graph(n_left: int, n_right: int) -> BipartiteGraph:
    return BipartiteGraph(n_left, n_right)


@dataclass(frozen=True)
class DistanceMap:
    """Shortest-path lengths from ``source``; ``UNREACHABLE`` marks other components."""

    source: VertexRef
    left: tuple
    right: tuple

    def __getitem__(self, v: VertexRef):
        return (self.left if v.side is Side.LEFT else self.right)[v.index - 1]


def bfs_distances(g: BipartiteGraph, source: VertexRef) -> DistanceMap:
    g._check(source)
    dist = {Side.LEFT: [UNREACHABLE] * g.n_left, Side.RIGHT: [UNREACHABLE] * g.n_right}
    dist[source.side][source.index - 1] = 0
    queue = deque([(source.side, source.index - 1)])
    while queue:
        side, k = queue.popleft()
        d = dist[side][k] + 1
        other = side.other
        far = dist[other]
        for w in g._adj(side)[k]:
            if far[w] == UNREACHABLE:
                far[w] = d
                queue.append((other, w))
    return DistanceMap(source, tuple(dist[Side.LEFT]), tuple(dist[Side.RIGHT]))


@njit(cache=True)
def _girth_kernel(indptr, indices, n_left):
    # For every edge (u, v): shortest u->v path avoiding that edge, plus one.
    nv = indptr.size - 1
    dist = np.full(nv, -1, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    best = -1
    for u in range(n_left):
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            # A cycle through (u, v) shorter than best needs a path of length <= best - 2.
            limit = nv if best < 0 else best - 2
            dist[u] = 0
            head = 0
            tail = 0
            queue[tail] = u
            tail += 1
            found = -1
            while head < tail and found < 0:
                x = queue[head]
                head += 1
                dx = dist[x]
                if dx >= limit:
                    break
                for q in range(indptr[x], indptr[x + 1]):
                    w = indices[q]
                    if x == u and w == v:
                        continue
                    if dist[w] < 0:
                        dist[w] = dx + 1
                        if w == v:
                            found = dx + 1
                            break
                        queue[tail] = w
                        tail += 1
            for t in range(tail):
                dist[queue[t]] = -1
            dist[v] = -1
            if found > 0 and (best < 0 or found + 1 < best):
                best = found + 1
                if best == 4:
                    return best
    return best


def girth(g: BipartiteGraph) -> float:
    """Exact length of the shortest cycle, or ``ACYCLIC`` for a forest."""
    if g.edge_count < 4:
        return ACYCLIC
    indptr, indices = g.to_csr()
    value = int(_girth_kernel(indptr, indices, g.n_left))
    if value < 0:
        return ACYCLIC
    assert value >= 4 and value % 2 == 0, value
    return value


def degree_profile(g: BipartiteGraph) -> tuple[dict[int, int], dict[int, int]]:
    """Degree histograms ``{degree: count}`` for the left and right sides."""
    return dict(sorted(Counter(g.left_degrees()).items())), dict(
        sorted(Counter(g.right_degrees()).items())
    )
