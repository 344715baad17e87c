"""Text formats: alist parity-check matrices, Graphviz DOT and construction traces.

All writers emit ``\\n`` line endings and a trailing newline.
"""

from __future__ import annotations

from .construct import ConstructionTrace
from .gf2 import SparseMatrixGF2
from .graph import BipartiteGraph


class AlistError(ValueError):
    """Malformed alist document."""


class AlistDimensionError(AlistError):
    """Header sizes disagree with the body."""


class AlistDegreeError(AlistError):
    """A degree entry disagrees with its neighbour list or the declared maximum."""


class AlistIndexError(AlistError):
    """A neighbour index is out of range or repeated."""


class AlistConsistencyError(AlistError):
    """Column lists and row lists describe different matrices."""


def _padded(values: list[int], width: int) -> str:
    # an empty line would vanish on reading, so width is at least one
    width = max(width, 1)
    return " ".join(str(v) for v in values + [0] * (width - len(values)))


def write_alist(h: SparseMatrixGF2) -> str:
    """Canonical alist with zero-padded neighbour lists (1-based indices)."""
    cols = h.columns()
    col_deg = [len(c) for c in cols]
    row_deg = h.row_weights()
    max_col = max(col_deg, default=0)
    max_row = max(row_deg, default=0)
    lines = [
        f"{h.n_cols} {h.n_rows}",
        f"{max_col} {max_row}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    lines += [_padded([r + 1 for r in c], max_col) for c in cols]
    lines += [_padded([c + 1 for c in r], max_row) for r in h.rows]
    return "\n".join(lines) + "\n"


def _ints(line: str, what: str) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise AlistError(f"{what}: non-integer token in {line!r}") from exc


def _neighbour_lists(lines, degrees, declared_max, bound, label):
    out = []
    for k, (line, degree) in enumerate(zip(lines, degrees), 1):
        entries = [v for v in _ints(line, f"{label} {k}") if v != 0]
        if len(entries) != degree:
            raise AlistDegreeError(f"{label} {k}: degree {degree} but {len(entries)} entries")
        if degree > declared_max:
            raise AlistDegreeError(f"{label} {k}: degree {degree} exceeds declared maximum {declared_max}")
        if len(set(entries)) != len(entries):
            raise AlistIndexError(f"{label} {k}: duplicate index in {entries}")
        bad = [v for v in entries if not 1 <= v <= bound]
        if bad:
            raise AlistIndexError(f"{label} {k}: index {bad[0]} outside 1..{bound}")
        out.append(sorted(v - 1 for v in entries))
    return out


def read_alist(data: str | bytes) -> SparseMatrixGF2:
    """Parse an alist document; zero-padded and unpadded lists are both accepted."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    lines = [ln for ln in data.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise AlistDimensionError("alist needs at least four header lines")
    header = _ints(lines[0], "line 1")
    maxima = _ints(lines[1], "line 2")
    if len(header) != 2 or len(maxima) != 2:
        raise AlistDimensionError("lines 1 and 2 must hold two integers each")
    n, m = header
    max_col, max_row = maxima
    if n < 1 or m < 1:
        raise AlistDimensionError(f"bad dimensions n={n}, m={m}")
    col_deg = _ints(lines[2], "column degrees")
    row_deg = _ints(lines[3], "row degrees")
    if len(col_deg) != n or len(row_deg) != m:
        raise AlistDimensionError(
            f"expected {n} column and {m} row degrees, got {len(col_deg)} and {len(row_deg)}")
    if len(lines) < 4 + n + m:
        raise AlistDimensionError(f"expected {n + m} neighbour lists, got {len(lines) - 4}")
    if sum(col_deg) != sum(row_deg):
        raise AlistDegreeError(f"column degrees sum to {sum(col_deg)}, row degrees to {sum(row_deg)}")

    cols = _neighbour_lists(lines[4:4 + n], col_deg, max_col, m, "column")
    rows = _neighbour_lists(lines[4 + n:4 + n + m], row_deg, max_row, n, "row")
    from_cols = {(r, c) for c, rs in enumerate(cols) for r in rs}
    from_rows = {(r, c) for r, cs in enumerate(rows) for c in cs}
    if from_cols != from_rows:
        r, c = min(from_cols ^ from_rows)
        raise AlistConsistencyError(
            f"entry (row {r + 1}, column {c + 1}) appears in only one of the two list blocks")
    return SparseMatrixGF2.from_rows(m, n, rows)


def write_dot(g: BipartiteGraph) -> str:
    """Undirected DOT; variables ``v1..vn``, checks ``c1..cm``, edges in insertion order."""
    lines = ["graph tanner {"]
    lines += [f"v{k};" for k in range(1, g.n_left + 1)]
    lines += [f"c{k} [shape=box];" for k in range(1, g.n_right + 1)]
    lines += [f"v{a + 1} -- c{b + 1};" for a, b in g.edge_indices()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_trace(trace: ConstructionTrace) -> str:
    return trace.to_text()


def read_trace(data: str) -> ConstructionTrace:
    return ConstructionTrace.from_text(data)
