"""Command-line interface: ``construct``, ``analyze``, ``sweep`` and ``simulate``."""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import BoundReport
from .channel import ChannelConfig, StoppingRule, measured_rate, run_monte_carlo
from .construct import (ConstructionStalled, InvalidParameters, TieBreakPolicy, construct,
                        validate_params, verify_phase_invariants)
from .decoder import VARIANTS, DecoderConfig
from .formats import AlistError, read_alist, write_alist, write_dot
from .gf2 import SparseMatrixGF2, parity_matrix, rank_gf2
from .graph import ACYCLIC, BipartiteGraph, degree_profile, girth
from .sweep import RATE_HALF_REFERENCE, SWEEP_HEADER, sweep

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_STALL = 4
EXIT_NOT_FOUND = 5
EXIT_IO = 6
EXIT_CHECK_FAILED = 7


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _emit(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
        return
    try:
        Path(dest).write_text(text, encoding="ascii", newline="\n")
    except OSError as exc:
        raise CliError(f"cannot write {dest}: {exc}", EXIT_IO) from exc


def _slurp(src: str) -> str:
    if src == "-":
        return sys.stdin.read()
    try:
        return Path(src).read_text(encoding="ascii")
    except OSError as exc:
        raise CliError(f"cannot read {src}: {exc}", EXIT_IO) from exc


def _policy(args) -> TieBreakPolicy:
    return TieBreakPolicy() if args.seed is None else TieBreakPolicy.seeded(args.seed)


def _fmt_girth(g) -> str:
    return "acyclic" if g == ACYCLIC else str(g)


def _build(args):
    params = validate_params(args.n, args.m, args.p, args.q, args.d)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            graph, trace = construct(params, _policy(args))
        except ConstructionStalled as exc:
            raise CliError(f"construction stalled: {exc.event}", EXIT_STALL) from exc
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return params, graph, trace


def _add_params(parser, required=True):
    for flag in ("n", "m", "p", "q", "d"):
        parser.add_argument(f"-{flag}", type=int, required=required)
    parser.add_argument("--seed", type=int, default=None,
                        help="break ties in seeded-random order (default: lowest index)")


def cmd_construct(args) -> int:
    params, graph, trace = _build(args)
    h = parity_matrix(graph)
    if args.out_alist:
        _emit(write_alist(h), args.out_alist)
    if args.out_dot:
        _emit(write_dot(graph), args.out_dot)
    if args.out_trace:
        _emit(trace.to_text(), args.out_trace)
    left, right = degree_profile(graph)
    summary = (f"constructed n={params.n} m={params.m} edges={graph.edge_count} "
               f"girth={_fmt_girth(girth(graph))} left_degrees={left} right_degrees={right}\n")
    # keep stdout clean when a file format is streamed there
    stream = sys.stderr if "-" in (args.out_alist, args.out_dot, args.out_trace) else sys.stdout
    stream.write(summary)
    return EXIT_OK


def _infer_pqd(h: SparseMatrixGF2, args) -> tuple[int, int, int]:
    if args.p is not None and args.q is not None and args.d is not None:
        return args.p, args.q, args.d
    ratio = Fraction(h.n_rows, h.n_cols)
    p, q = ratio.numerator, ratio.denominator
    edges = h.weight
    if edges % (h.n_cols * p):
        raise CliError("cannot infer d from the matrix; pass -p, -q and -d", EXIT_INVALID)
    return p, q, edges // (h.n_cols * p)


def analyze_matrix(h: SparseMatrixGF2, p: int, q: int, d: int) -> tuple[list[tuple[str, str]], bool]:
    """Key-value report lines and overall pass flag for a parity-check matrix."""
    graph = BipartiteGraph.from_edges(
        h.n_cols, h.n_rows, [(c + 1, r + 1) for r, cols in enumerate(h.rows) for c in cols])
    g = girth(graph)
    left, right = degree_profile(graph)
    rank = rank_gf2(h)
    rate = 1 - rank / h.n_cols
    report = BoundReport.for_params(h.n_rows, p, q, d)
    pd, qd = p * d, q * d
    window_ok = (all(pd - 1 <= k <= pd + 1 for k in left)
                 and all(qd - 1 <= k <= qd + 1 for k in right))
    girth_ok = g >= report.girth_lower_bound
    rate_ok = Fraction(h.n_cols - rank, h.n_cols) >= report.design_rate
    lines = [
        ("n", str(h.n_cols)), ("m", str(h.n_rows)), ("edges", str(h.weight)),
        ("p", str(p)), ("q", str(q)), ("d", str(d)),
        ("girth", _fmt_girth(g)),
        ("left_degrees", " ".join(f"{k}:{v}" for k, v in left.items())),
        ("right_degrees", " ".join(f"{k}:{v}" for k, v in right.items())),
        ("rank", str(rank)), ("measured_rate", f"{rate:.12g}"),
    ]
    lines += [tuple(s.strip() for s in ln.split("=", 1)) for ln in report.to_text().splitlines()]
    lines += [
        ("check_degree_window", "pass" if window_ok else "FAIL"),
        ("check_girth_bound", "pass" if girth_ok else "FAIL"),
        ("check_rate", "pass" if rate_ok else "FAIL"),
    ]
    return lines, window_ok and girth_ok and rate_ok


def cmd_analyze(args) -> int:
    if args.alist:
        try:
            h = read_alist(_slurp(args.alist))
        except AlistError as exc:
            raise CliError(f"{args.alist}: {exc}", EXIT_INVALID) from exc
        p, q, d = _infer_pqd(h, args)
        phase_ok = None
    else:
        missing = [f for f in "nmpqd" if getattr(args, f) is None]
        if missing:
            raise CliError("analyze needs an alist file or all of -n -m -p -q -d", EXIT_USAGE)
        params, graph, trace = _build(args)
        h = parity_matrix(graph)
        p, q, d = params.p, params.q, params.d
        phase_ok = verify_phase_invariants(trace, params)
    lines, ok = analyze_matrix(h, p, q, d)
    if phase_ok is not None:
        lines.append(("check_phase_invariants", "pass" if phase_ok else f"FAIL ({phase_ok.violation})"))
        ok = ok and phase_ok.ok
    sys.stdout.write("".join(f"{k} = {v}\n" for k, v in lines))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    if args.table:
        jobs = [(d, g, args.n_max or 2 * n) for d, g, n in RATE_HALF_REFERENCE]
    elif args.d is None or args.g is None:
        raise CliError("sweep needs -d and -g, or --table", EXIT_USAGE)
    else:
        jobs = [(args.d, args.g, args.n_max or 4000)]
    policy = TieBreakPolicy() if args.seed is None else TieBreakPolicy.seeded(args.seed)
    print(SWEEP_HEADER, flush=True)
    status = EXIT_OK
    for d, g, n_max in jobs:
        row = sweep(d, g, args.p, args.q, n_start=args.n_start, n_max=n_max, step=args.step,
                    policy=policy, seeds=args.seeds, seed_base=args.seed_base)
        print(row.to_line(), flush=True)
        if not row.found:
            status = EXIT_NOT_FOUND
    return status


def parse_grid(text: str) -> tuple[float, ...]:
    """``"1:4:0.5"`` (inclusive) or ``"1,2,3"``."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + k * step, 10) for k in range(count))
    return tuple(float(x) for x in text.split(","))


def cmd_simulate(args) -> int:
    try:
        h = read_alist(_slurp(args.alist))
    except AlistError as exc:
        raise CliError(f"{args.alist}: {exc}", EXIT_INVALID) from exc
    rate = 1 - h.n_rows / h.n_cols if args.design_rate else measured_rate(h)
    try:
        cfg = ChannelConfig(parse_grid(args.ebno), rate, all_zero_mode=not args.encode,
                            seed=args.seed)
        rule = StoppingRule(args.min_errors, args.max_trials)
        dec = DecoderConfig(args.max_iter, args.llr_clip, args.variant)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from exc
    curve = run_monte_carlo(h, cfg, rule, dec, workers=args.workers)
    _emit(curve.to_csv(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argldpc", description="Near-regular high-girth LDPC code construction and evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a Tanner graph")
    _add_params(c)
    c.add_argument("--out-alist", metavar="PATH", help="parity-check matrix in alist format ('-' = stdout)")
    c.add_argument("--out-dot", metavar="PATH", help="Tanner graph in DOT format")
    c.add_argument("--out-trace", metavar="PATH", help="edge-by-edge construction trace")
    c.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="girth, degrees, rank and bound checks")
    a.add_argument("alist", nargs="?", help="alist file ('-' = stdin); omit to construct from -n..-d")
    _add_params(a, required=False)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="smallest block length reaching a target girth")
    s.add_argument("-d", type=int)
    s.add_argument("-g", type=int, help="target girth")
    s.add_argument("-p", type=int, default=1)
    s.add_argument("-q", type=int, default=2)
    s.add_argument("--table", action="store_true", help="run every rate-1/2 reference row")
    s.add_argument("--n-start", type=int, default=None)
    s.add_argument("--n-max", type=int, default=None)
    s.add_argument("--step", type=int, default=None)
    s.add_argument("--seed", type=int, default=None, help="seeded-random primary policy")
    s.add_argument("--seeds", type=int, default=0, help="extra random retries per block length")
    s.add_argument("--seed-base", type=int, default=0)
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("simulate", help="BPSK/AWGN bit and word error rates")
    m.add_argument("alist")
    m.add_argument("--ebno", default="1:4:0.5", help="start:stop:step (inclusive) or comma list, in dB")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--min-errors", type=int, default=100)
    m.add_argument("--max-trials", type=int, default=10**7)
    m.add_argument("--max-iter", type=int, default=100)
    m.add_argument("--llr-clip", type=float, default=25.0)
    m.add_argument("--variant", choices=VARIANTS, default="sum-product")
    m.add_argument("--design-rate", action="store_true",
                   help="normalise Eb/N0 with 1 - m/n instead of the measured rate")
    m.add_argument("--encode", action="store_true",
                   help="transmit encoded random messages instead of the zero codeword")
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--out", default="-", help="CSV destination ('-' = stdout)")
    m.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except InvalidParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
