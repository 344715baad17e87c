"""Flooding belief-propagation decoding in the LLR domain.

LLRs are ``log P(bit=0) / P(bit=1)``.  Messages live on the edges of the
Tanner graph, ordered row by row as in :meth:`SparseMatrixGF2.edge_arrays`.
One iteration updates every check node, then every variable node.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .gf2 import SparseMatrixGF2

VARIANTS = ("sum-product", "min-sum")


@dataclass(frozen=True)
class DecoderConfig:
    max_iterations: int = 100
    llr_clip: float = 25.0
    variant: str = "sum-product"

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.llr_clip > 0:
            raise ValueError("llr_clip must be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @property
    def min_sum(self) -> bool:
        return self.variant == "min-sum"


@dataclass(frozen=True)
class DecodeResult:
    hard_decision: np.ndarray
    converged: bool
    iterations_used: int
    llr: np.ndarray


class TannerIndex:
    """Edge bookkeeping for a parity-check matrix (checks in CSR, variables in CSC order)."""

    def __init__(self, h: SparseMatrixGF2):
        self.matrix = h
        self.n = h.n_cols
        self.m = h.n_rows
        rows, cols = h.edge_arrays()
        self.edge_var = cols
        self.check_ptr = np.zeros(self.m + 1, dtype=np.int64)
        self.check_ptr[1:] = np.cumsum(h.row_weights())
        order = np.argsort(cols, kind="stable")
        self.var_edges = order.astype(np.int64)
        self.var_ptr = np.zeros(self.n + 1, dtype=np.int64)
        self.var_ptr[1:] = np.cumsum(np.bincount(cols, minlength=self.n))

    @property
    def n_edges(self) -> int:
        return int(self.edge_var.size)


def hard_decision(llrs) -> np.ndarray:
    """Bit ``0`` where the LLR is non-negative, ``1`` where it is negative."""
    return (np.asarray(llrs) < 0).astype(np.uint8)


@njit(cache=True, error_model="numpy")
def _check_update(check_ptr, v2c, c2v, clip, min_sum):
    widest = 0
    for c in range(check_ptr.size - 1):
        widest = max(widest, check_ptr[c + 1] - check_ptr[c])
    tanh_half = np.empty(widest)
    for c in range(check_ptr.size - 1):
        lo = check_ptr[c]
        hi = check_ptr[c + 1]
        if min_sum:
            sign = 1.0
            min1 = np.inf
            min2 = np.inf
            arg = -1
            for e in range(lo, hi):
                x = v2c[e]
                if x < 0:
                    sign = -sign
                a = abs(x)
                if a < min1:
                    min2 = min1
                    min1 = a
                    arg = e
                elif a < min2:
                    min2 = a
            for e in range(lo, hi):
                mag = min(min2 if e == arg else min1, clip)
                c2v[e] = -sign * mag if v2c[e] < 0 else sign * mag
        else:
            # leave-one-out products of tanh(x/2) via prefix and suffix passes
            for e in range(lo, hi):
                x = np.exp(v2c[e])
                tanh_half[e - lo] = (x - 1.0) / (x + 1.0)
            acc = 1.0
            for e in range(lo, hi):
                c2v[e] = acc
                acc *= tanh_half[e - lo]
            acc = 1.0
            for e in range(hi - 1, lo - 1, -1):
                prod = c2v[e] * acc
                acc *= tanh_half[e - lo]
                # 2 atanh(prod); prod = +-1 gives +-inf, which the clip absorbs
                c2v[e] = min(max(np.log((1.0 + prod) / (1.0 - prod)), -clip), clip)


@njit(cache=True)
def _variable_update(var_ptr, var_edges, channel, c2v, v2c, posterior, clip):
    for v in range(var_ptr.size - 1):
        total = channel[v]
        for k in range(var_ptr[v], var_ptr[v + 1]):
            total += c2v[var_edges[k]]
        posterior[v] = total
        for k in range(var_ptr[v], var_ptr[v + 1]):
            e = var_edges[k]
            v2c[e] = min(max(total - c2v[e], -clip), clip)


@njit(cache=True)
def _is_codeword(check_ptr, edge_var, posterior):
    # a zero LLR is not a decision, so it never counts as converged
    for v in range(posterior.size):
        if posterior[v] == 0.0:
            return False
    for c in range(check_ptr.size - 1):
        parity = 0
        for e in range(check_ptr[c], check_ptr[c + 1]):
            if posterior[edge_var[e]] < 0:
                parity ^= 1
        if parity:
            return False
    return True


@njit(cache=True)
def _decode_kernel(check_ptr, edge_var, var_ptr, var_edges, channel, max_iter, clip, min_sum):
    n = channel.size
    ch = np.empty(n)
    for v in range(n):
        ch[v] = min(max(channel[v], -clip), clip)
    posterior = ch.copy()
    if _is_codeword(check_ptr, edge_var, posterior):
        return posterior, 0, True
    v2c = np.empty(edge_var.size)
    for e in range(edge_var.size):
        v2c[e] = ch[edge_var[e]]
    c2v = np.zeros(edge_var.size)
    for it in range(1, max_iter + 1):
        _check_update(check_ptr, v2c, c2v, clip, min_sum)
        _variable_update(var_ptr, var_edges, ch, c2v, v2c, posterior, clip)
        if _is_codeword(check_ptr, edge_var, posterior):
            return posterior, it, True
    return posterior, max_iter, False


@njit(cache=True)
def _decode_many(check_ptr, edge_var, var_ptr, var_edges, channel, sent, count_mask,
                 max_iter, clip, min_sum):
    """Decode each row of ``channel``; count bit errors (masked) and word errors vs ``sent``."""
    trials = channel.shape[0]
    bit_errors = np.zeros(trials, dtype=np.int64)
    word_errors = np.zeros(trials, dtype=np.int64)
    iterations = np.zeros(trials, dtype=np.int64)
    for t in range(trials):
        post, it, _ = _decode_kernel(check_ptr, edge_var, var_ptr, var_edges, channel[t],
                                     max_iter, clip, min_sum)
        iterations[t] = it
        wrong = 0
        for v in range(post.size):
            bit = 1 if post[v] < 0 else 0
            if bit != sent[t, v]:
                wrong += 1
                if count_mask[v]:
                    bit_errors[t] += 1
        word_errors[t] = 1 if wrong else 0
    return bit_errors, word_errors, iterations


class BPDecoder:
    """Reusable decoder bound to one parity-check matrix."""

    def __init__(self, h: SparseMatrixGF2, cfg: DecoderConfig = DecoderConfig()):
        self.index = TannerIndex(h)
        self.cfg = cfg

    def decode(self, channel) -> DecodeResult:
        channel = np.ascontiguousarray(channel, dtype=np.float64)
        if channel.shape != (self.index.n,):
            raise ValueError(f"channel LLR shape {channel.shape} != ({self.index.n},)")
        ix, cfg = self.index, self.cfg
        post, it, ok = _decode_kernel(ix.check_ptr, ix.edge_var, ix.var_ptr, ix.var_edges,
                                      channel, cfg.max_iterations, cfg.llr_clip, cfg.min_sum)
        return DecodeResult(hard_decision(post), bool(ok), int(it), post)

    def count_errors(self, channel, sent, count_mask=None):
        """Decode a batch and return per-trial ``(bit_errors, word_errors, iterations)``."""
        channel = np.ascontiguousarray(channel, dtype=np.float64)
        sent = np.ascontiguousarray(np.broadcast_to(sent, channel.shape), dtype=np.uint8)
        if channel.ndim != 2 or channel.shape[1] != self.index.n:
            raise ValueError(f"channel batch shape {channel.shape} incompatible with n={self.index.n}")
        if count_mask is None:
            count_mask = np.ones(self.index.n, dtype=np.bool_)
        ix, cfg = self.index, self.cfg
        return _decode_many(ix.check_ptr, ix.edge_var, ix.var_ptr, ix.var_edges, channel, sent,
                            np.ascontiguousarray(count_mask, dtype=np.bool_),
                            cfg.max_iterations, cfg.llr_clip, cfg.min_sum)


def decode(h: SparseMatrixGF2, channel, cfg: DecoderConfig = DecoderConfig()) -> DecodeResult:
    return BPDecoder(h, cfg).decode(channel)


@dataclass(frozen=True)
class BPState:
    """Message state for stepping the decoder one iteration at a time."""

    index: TannerIndex
    cfg: DecoderConfig
    channel: np.ndarray
    v2c: np.ndarray
    c2v: np.ndarray
    posterior: np.ndarray
    iteration: int = 0

    @classmethod
    def initial(cls, h: SparseMatrixGF2 | TannerIndex, channel,
                cfg: DecoderConfig = DecoderConfig()) -> "BPState":
        index = h if isinstance(h, TannerIndex) else TannerIndex(h)
        ch = np.clip(np.asarray(channel, dtype=np.float64), -cfg.llr_clip, cfg.llr_clip)
        if ch.shape != (index.n,):
            raise ValueError(f"channel LLR shape {ch.shape} != ({index.n},)")
        return cls(index, cfg, ch, ch[index.edge_var].copy(), np.zeros(index.n_edges), ch.copy())

    def edge(self, row: int, col: int) -> int:
        """Position of the message slot for the one at ``(row, col)``."""
        ix = self.index
        for e in range(ix.check_ptr[row], ix.check_ptr[row + 1]):
            if ix.edge_var[e] == col:
                return e
        raise KeyError((row, col))


def bp_iteration(state: BPState) -> BPState:
    """One check-node pass followed by one variable-node pass; returns a new state."""
    ix, cfg = state.index, state.cfg
    v2c, c2v, post = state.v2c.copy(), state.c2v.copy(), state.posterior.copy()
    _check_update(ix.check_ptr, v2c, c2v, cfg.llr_clip, cfg.min_sum)
    _variable_update(ix.var_ptr, ix.var_edges, state.channel, c2v, v2c, post, cfg.llr_clip)
    return replace(state, v2c=v2c, c2v=c2v, posterior=post, iteration=state.iteration + 1)
