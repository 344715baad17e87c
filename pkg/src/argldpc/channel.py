"""BPSK over AWGN Monte Carlo: bit and word error rates per Eb/N0 point.

Trial noise is reproducible and independent of execution order: trial ``t``
at grid point ``g`` draws from the stream seeded by
``(seed, g, t // batch_size)``, row ``t % batch_size``.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decoder import BPDecoder, DecoderConfig
from .gf2 import GeneratorMatrix, SparseMatrixGF2, encode, rank_gf2, systematic_generator

_Z95 = 1.959963984540054
CSV_HEADER = "ebno_db,trials,bits,bit_errors,word_errors,ber,wer,ci_low,ci_high"
DEFAULT_BATCH = 256


def noise_variance(ebno_db: float, rate: float) -> float:
    if not 0 < rate <= 1:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


def awgn_llr(codeword, ebno_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    """Channel LLRs ``2y / sigma^2`` for ``y = (1 - 2b) + noise``."""
    sigma2 = noise_variance(ebno_db, rate)
    x = 1.0 - 2.0 * np.asarray(codeword, dtype=np.float64)
    y = x + math.sqrt(sigma2) * rng.standard_normal(x.shape)
    return 2.0 * y / sigma2


def wilson_interval(errors: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials < 1:
        raise ValueError("wilson_interval needs at least one trial")
    if not 0 <= errors <= trials:
        raise ValueError(f"errors={errors} outside [0, {trials}]")
    p = errors / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    low = 0.0 if errors == 0 else max(0.0, center - half)
    high = 1.0 if errors == trials else min(1.0, center + half)
    return low, high


def measured_rate(h: SparseMatrixGF2) -> float:
    return 1.0 - rank_gf2(h) / h.n_cols


@dataclass(frozen=True)
class ChannelConfig:
    ebno_db_grid: tuple[float, ...]
    rate_for_normalization: float
    all_zero_mode: bool = True
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(x) for x in self.ebno_db_grid)
        object.__setattr__(self, "ebno_db_grid", grid)
        if not grid:
            raise ValueError("empty Eb/N0 grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("Eb/N0 grid must be strictly increasing")
        if not 0 < self.rate_for_normalization <= 1:
            raise ValueError("rate must be in (0, 1]")


@dataclass(frozen=True)
class StoppingRule:
    min_word_errors: int | None = 100
    max_trials: int | None = 10**7

    def __post_init__(self):
        if self.min_word_errors is None and self.max_trials is None:
            raise ValueError("stopping rule needs a word-error target or a trial cap")


@dataclass(frozen=True)
class BerPoint:
    ebno_db: float
    trials: int
    bits: int
    bit_errors: int
    word_errors: int
    iterations: int = field(default=0, compare=False)

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def wer(self) -> float:
        return self.word_errors / self.trials if self.trials else 0.0

    @property
    def interval(self) -> tuple[float, float]:
        """95% Wilson interval on the word error rate (trials are independent, bits are not)."""
        return wilson_interval(self.word_errors, self.trials)


@dataclass
class BerCurve:
    points: list[BerPoint]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for p in self.points:
            lo, hi = p.interval
            out.write(f"{p.ebno_db:.6g},{p.trials},{p.bits},{p.bit_errors},{p.word_errors},"
                      f"{p.ber:.6g},{p.wer:.6g},{lo:.6g},{hi:.6g}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "BerCurve":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0].strip() != CSV_HEADER:
            raise ValueError("not a BER curve CSV")
        points = []
        for ln in lines[1:]:
            f = ln.split(",")
            points.append(BerPoint(float(f[0]), int(f[1]), int(f[2]), int(f[3]), int(f[4])))
        return cls(points)


def _simulate_point(h, gen, ebno_db, grid_index, cfg, rule, decoder_cfg, batch_size):
    decoder = BPDecoder(h, decoder_cfg)
    n = h.n_cols
    if cfg.all_zero_mode:
        mask = np.ones(n, dtype=np.bool_)
    else:
        mask = np.zeros(n, dtype=np.bool_)
        mask[gen.info_positions] = True
    bits_per_word = int(mask.sum())
    seed = cfg.seed & ((1 << 64) - 1)
    cap = rule.max_trials if rule.max_trials is not None else math.inf
    target = rule.min_word_errors if rule.min_word_errors is not None else math.inf

    trials = bit_errors = word_errors = iterations = 0
    batch = 0
    while trials < cap and word_errors < target:
        rng = np.random.default_rng([seed, grid_index, batch])
        if cfg.all_zero_mode:
            sent = np.zeros((batch_size, n), dtype=np.uint8)
        else:
            sent = encode(gen, rng.integers(0, 2, size=(batch_size, gen.k), dtype=np.uint8))
        llr = awgn_llr(sent, ebno_db, cfg.rate_for_normalization, rng)
        take = int(min(batch_size, cap - trials))
        be, we, it = decoder.count_errors(llr[:take], sent[:take], mask)
        if word_errors + int(we.sum()) >= target:
            # stop at the trial that reaches the word-error target
            take = int(np.searchsorted(np.cumsum(we), target - word_errors)) + 1
        trials += take
        bit_errors += int(be[:take].sum())
        word_errors += int(we[:take].sum())
        iterations += int(it[:take].sum())
        batch += 1
    return BerPoint(ebno_db, trials, trials * bits_per_word, bit_errors, word_errors, iterations)


def run_monte_carlo(h: SparseMatrixGF2, cfg: ChannelConfig, rule: StoppingRule = StoppingRule(),
                    decoder_cfg: DecoderConfig = DecoderConfig(),
                    generator: GeneratorMatrix | None = None, *,
                    workers: int = 1, batch_size: int = DEFAULT_BATCH) -> BerCurve:
    """Simulate every grid point until ``rule`` fires.

    All-zero mode transmits the zero codeword and counts every position;
    otherwise random messages are encoded and only information positions
    are counted.  Results depend only on the inputs, not on ``workers``.
    """
    if not cfg.all_zero_mode and generator is None:
        generator = systematic_generator(h)
    jobs = [(h, generator, eb, g, cfg, rule, decoder_cfg, batch_size)
            for g, eb in enumerate(cfg.ebno_db_grid)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_simulate_star, jobs))
    else:
        points = [_simulate_point(*job) for job in jobs]
    return BerCurve(points)


def _simulate_star(job):
    return _simulate_point(*job)
