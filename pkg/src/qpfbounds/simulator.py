"""Monte Carlo simulation of period finding with continued-fraction post-processing.

Measurements are drawn by inverse-CDF lookup in the full distribution over
the upper register. Trials are cut into fixed-size chunks; chunk ``c`` draws
its uniforms from a Philox stream keyed by ``(seed, c)``, so every draw is
fixed by the seed and its trial index and the result does not depend on how
many worker threads process the chunks.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .errors import CapacityError, DomainError
from .probability import CircuitParams

__all__ = [
    "SAMPLER_MAX_N",
    "Sampler",
    "SimulationConfig",
    "SimulationResult",
    "TrialRecord",
    "build_sampler",
    "chunk_generator",
    "run_simulation",
    "simulate_trials",
]

SAMPLER_MAX_N = 26
CDF_TOLERANCE = 1e-9
CHUNK_SIZE = 8192


class Sampler:
    """Immutable inverse-CDF sampler over ell in [0, 2^n - 1]; safe to share between threads."""

    def __init__(self, params: CircuitParams):
        if params.n > SAMPLER_MAX_N:
            raise CapacityError(f"sampler table supports n <= {SAMPLER_MAX_N}, got n={params.n}")
        self.params = params
        ell = np.arange(params.two_n, dtype=np.int64)
        cdf = np.cumsum(_backend.measure_prob_array(ell, params.n, params.r, params.L))
        self.raw_total = float(cdf[-1])
        if abs(self.raw_total - 1.0) > CDF_TOLERANCE:
            raise DomainError(f"measurement distribution sums to {self.raw_total!r}, not 1")
        cdf /= cdf[-1]
        cdf[-1] = 1.0
        cdf.flags.writeable = False
        self.cdf = cdf

    def draw(self, uniforms) -> np.ndarray:
        """Map uniforms in [0, 1) to measurement outcomes."""
        return np.searchsorted(self.cdf, uniforms, side="right").astype(np.int64)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        return self.draw(rng.random(size))


def build_sampler(params: CircuitParams) -> Sampler:
    return Sampler(params)


def chunk_generator(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed) | (int(chunk) << 64)))


@dataclass(frozen=True)
class SimulationConfig:
    """``tolerance`` selects the success rule: None or 2^q runs the
    continued-fraction post-processor; any other M counts a trial as a
    success when the outcome lies within M of a non-zero peak centre."""

    params: CircuitParams
    trials: int
    seed: int = 0
    workers: int = 1
    tolerance: Optional[int] = None

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials must be a positive integer, got {self.trials!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 1 << 64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise DomainError(f"workers must be a positive integer, got {self.workers!r}")
        if self.params.n > SAMPLER_MAX_N:
            raise CapacityError(f"simulation supports n <= {SAMPLER_MAX_N}, got n={self.params.n}")
        if self.tolerance is not None and (int(self.tolerance) != self.tolerance or self.tolerance < 1):
            raise DomainError(f"tolerance must be a positive integer, got {self.tolerance!r}")

    @property
    def window(self) -> int:
        return (1 << self.params.q) if self.tolerance is None else int(self.tolerance)

    @property
    def uses_continued_fractions(self) -> bool:
        return self.window == 1 << self.params.q


@dataclass(frozen=True)
class TrialRecord:
    ell_hat: int
    divisor: Optional[int]
    in_window: bool

    @property
    def success(self) -> bool:
        return self.divisor is not None


@dataclass(frozen=True)
class SimulationResult:
    successes: int
    trials: int
    cf_successes: int
    window_successes: int
    criterion: str

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        p = self.estimate
        return math.sqrt(p * (1.0 - p) / self.trials)


def _chunk_bounds(trials):
    return [(c, c * CHUNK_SIZE, min(trials, (c + 1) * CHUNK_SIZE)) for c in range((trials + CHUNK_SIZE - 1) // CHUNK_SIZE)]


def _run_chunk(sampler: Sampler, config: SimulationConfig, chunk: int, size: int):
    p = config.params
    ell = sampler.sample(size, chunk_generator(config.seed, chunk))
    divisors = _backend.cf_batch(ell, p.n, p.m, p.r)
    hits = _backend.window_batch(ell, p.n, p.r, config.window)
    return ell, divisors, hits


def _map_chunks(config: SimulationConfig, sampler: Optional[Sampler]):
    sampler = sampler if sampler is not None else build_sampler(config.params)
    jobs = _chunk_bounds(config.trials)
    if config.workers == 1 or len(jobs) == 1:
        return [_run_chunk(sampler, config, c, hi - lo) for c, lo, hi in jobs]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda j: _run_chunk(sampler, config, j[0], j[2] - j[1]), jobs))


def run_simulation(config: SimulationConfig, sampler: Optional[Sampler] = None) -> SimulationResult:
    """Run ``config.trials`` simulated measurements and count successes."""
    cf = win = 0
    for _, divisors, hits in _map_chunks(config, sampler):
        cf += int(np.count_nonzero(divisors))
        win += int(np.count_nonzero(hits))
    if config.uses_continued_fractions:
        return SimulationResult(cf, config.trials, cf, win, "continued_fraction")
    return SimulationResult(win, config.trials, cf, win, "window")


def simulate_trials(config: SimulationConfig, sampler: Optional[Sampler] = None) -> list[TrialRecord]:
    """Per-trial records, in trial order, for auditing small runs."""
    records = []
    for ell, divisors, hits in _map_chunks(config, sampler):
        for e, d, h in zip(ell.tolist(), divisors.tolist(), hits.tolist()):
            records.append(TrialRecord(ell_hat=e, divisor=d or None, in_window=bool(h)))
    return records
