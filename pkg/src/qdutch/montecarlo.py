"""Seeded Monte Carlo cross-check of the exact succession engine.

States are sampled per measure in the only two coordinates that matter for
a fixed projective yes/no measurement: the larger eigenvalue ``lambda1`` of
the single-qubit state and ``t = cos(beta)**2`` of the rotation placing the
eigenbasis relative to the measured projector.  Under the rotation-invariant
part of every measure ``t`` is uniform on [0, 1], so the single-trial
success probability is ``q = lambda1*t + (1 - lambda1)*(1 - t)``; the two
remaining rotation angles never enter and are integrated out analytically.

Determinism contract: for a fixed (seed, samples, chunk) the output is
bit-identical regardless of worker count.  Chunk ``c`` always covers samples
``[c*chunk, (c+1)*chunk)`` and draws from an independent substream seeded by
``[seed, c]``; chunk results are reduced in chunk order.  Fan-out across
chunks is controlled by the ``QDUTCH_THREADS`` environment variable.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Iterator

import numpy as np

from .exchangeable import Measure, RunSpec, run_probability
from .rationals import format_rational


class UnstableRatioWarning(UserWarning):
    """The ratio estimator's denominator is too close to zero for its error bar."""


@dataclass(frozen=True)
class SampleConfig:
    measure: Measure
    seed: int = 42
    samples: int = 1_000_000
    chunk: int = 131_072

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.chunk < 1:
            raise ValueError("chunk size must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class StateSample:
    """One sampled state, reduced to the measurement-relevant coordinates."""

    lambda1: float          # larger eigenvalue, in [1/2, 1]
    t: float                # cos(beta)**2, uniform on [0, 1]

    @property
    def success_probability(self) -> float:
        return self.lambda1 * self.t + (1.0 - self.lambda1) * (1.0 - self.t)


@dataclass(frozen=True)
class SampleBatch:
    lambda1: np.ndarray
    t: np.ndarray
    proposals: int          # rejection proposals consumed (== size except Bures)

    @property
    def success_probability(self) -> np.ndarray:
        return self.lambda1 * self.t + (1.0 - self.lambda1) * (1.0 - self.t)

    @property
    def acceptance_rate(self) -> float:
        return len(self.lambda1) / self.proposals

    def __len__(self) -> int:
        return len(self.lambda1)


def _bures_eigenvalues(rng: np.random.Generator, count: int) -> tuple[np.ndarray, int]:
    """Rejection sampler for the Bures eigenvalue density.

    Proposal: arcsine(lam) = 1/(pi sqrt(lam(1-lam))); target over proposal is
    2*(2*lam-1)**2 <= 2, so with bound M=2 the acceptance test is a uniform
    draw against (2*lam-1)**2 and the expected acceptance rate is 1/2.
    """
    out = np.empty(count)
    filled = 0
    proposals = 0
    while filled < count:
        need = count - filled
        u = rng.random(need)
        v = rng.random(need)
        lam = np.square(np.sin(0.5 * np.pi * u))
        keep = v < np.square(2.0 * lam - 1.0)
        taken = int(np.count_nonzero(keep))
        out[filled : filled + taken] = lam[keep]
        filled += taken
        proposals += need
    return out, proposals


def _sample_arrays(
    measure: Measure, rng: np.random.Generator, count: int
) -> tuple[np.ndarray, np.ndarray, int]:
    # Draw order (eigenvalues first, then t) is part of the determinism contract.
    if measure is Measure.PURE_UNIFORM:
        lam1 = np.ones(count)
        proposals = count
    elif measure is Measure.FLAT:
        lam = rng.random(count)
        lam1 = np.maximum(lam, 1.0 - lam)
        proposals = count
    else:
        lam, proposals = _bures_eigenvalues(rng, count)
        lam1 = np.maximum(lam, 1.0 - lam)
    t = rng.random(count)
    return lam1, t, proposals


def sample_state(config: SampleConfig, rng: np.random.Generator) -> StateSample:
    """Draw a single state from the configured measure using ``rng``."""
    lam1, t, _ = _sample_arrays(config.measure, rng, 1)
    return StateSample(float(lam1[0]), float(t[0]))


def _chunk_jobs(config: SampleConfig) -> list[tuple[int, int]]:
    jobs = []
    start = 0
    index = 0
    while start < config.samples:
        count = min(config.chunk, config.samples - start)
        jobs.append((index, count))
        start += count
        index += 1
    return jobs


def _worker_count() -> int:
    raw = os.environ.get("QDUTCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _iter_chunks(config: SampleConfig) -> Iterator[tuple[np.ndarray, np.ndarray, int]]:
    """Yield per-chunk sample arrays in chunk order (possibly computed in parallel)."""
    jobs = _chunk_jobs(config)

    def compute(job):
        index, count = job
        rng = np.random.default_rng([config.seed, index])
        return _sample_arrays(config.measure, rng, count)

    workers = _worker_count()
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(compute, jobs)
    else:
        for job in jobs:
            yield compute(job)


def draw_samples(config: SampleConfig) -> SampleBatch:
    """Materialize the full deterministic sample set for the configuration."""
    lams, ts, proposals = [], [], 0
    for lam1, t, prop in _iter_chunks(config):
        lams.append(lam1)
        ts.append(t)
        proposals += prop
    return SampleBatch(np.concatenate(lams), np.concatenate(ts), proposals)


def estimate_run_probability(
    config: SampleConfig, spec: RunSpec
) -> tuple[float, float]:
    """Monte Carlo estimate (mean, standard error) of the exact run probability.

    Averages q**k (1-q)**(n-k) over sampled states; unbiased by construction.
    """
    if config.samples < 100:
        raise ValueError("need at least 100 samples for a run-probability estimate")
    n = config.samples
    sum_x = 0.0
    sum_xx = 0.0
    for lam1, t, _ in _iter_chunks(config):
        q = lam1 * t + (1.0 - lam1) * (1.0 - t)
        x = q**spec.k * (1.0 - q) ** (spec.n - spec.k)
        sum_x += float(x.sum())
        sum_xx += float((x * x).sum())
    mean = sum_x / n
    var = max(0.0, (sum_xx - n * mean * mean) / (n - 1))
    return mean, sqrt(var / n)


def estimate_succession(config: SampleConfig, spec: RunSpec) -> tuple[float, float]:
    """Estimate (value, standard error) of the predictive success probability.

    Numerator (one extra success) and denominator share one sample set, so
    the ratio benefits from their positive correlation; the standard error
    comes from the delta method.  Emits :class:`UnstableRatioWarning` when
    the denominator mean is within 5 standard errors of zero.
    """
    if config.samples < 1000:
        raise ValueError("need at least 1000 samples for a succession estimate")
    n = config.samples
    sums = np.zeros(5)  # x, y, xx, yy, xy
    for lam1, t, _ in _iter_chunks(config):
        q = lam1 * t + (1.0 - lam1) * (1.0 - t)
        x = q**spec.k * (1.0 - q) ** (spec.n - spec.k)
        y = x * q
        sums += [x.sum(), y.sum(), (x * x).sum(), (y * y).sum(), (x * y).sum()]
    mean_x = sums[0] / n
    mean_y = sums[1] / n
    var_x = max(0.0, (sums[2] - n * mean_x**2) / (n - 1))
    var_y = max(0.0, (sums[3] - n * mean_y**2) / (n - 1))
    cov = (sums[4] - n * mean_x * mean_y) / (n - 1)
    se_x = sqrt(var_x / n)
    if mean_x < 5.0 * se_x:
        warnings.warn(
            f"denominator estimate {mean_x:.3e} is below 5x its standard error "
            f"{se_x:.3e}; the succession ratio is unstable",
            UnstableRatioWarning,
            stacklevel=2,
        )
    ratio = mean_y / mean_x
    var_ratio = (var_y - 2.0 * ratio * cov + ratio**2 * var_x) / (n * mean_x**2)
    return ratio, sqrt(max(0.0, var_ratio))


@dataclass(frozen=True)
class ComparisonReport:
    measure: Measure
    n: int
    k: int
    exact: Fraction
    estimate: float
    stderr: float
    z: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "n": self.n,
            "k": self.k,
            "exact": format_rational(self.exact),
            "estimate": self.estimate,
            "stderr": self.stderr,
            "z": self.z,
            "pass": self.passed,
        }


def compare_exact_vs_mc(
    config: SampleConfig, spec: RunSpec, *, z_threshold: float = 4.0
) -> ComparisonReport:
    """Run-probability agreement check between the exact engine and sampling."""
    exact = run_probability(config.measure, spec)
    estimate, stderr = estimate_run_probability(config, spec)
    diff = abs(float(exact) - estimate)
    if stderr == 0.0:
        z = 0.0 if diff == 0.0 else float("inf")
    else:
        z = diff / stderr
    return ComparisonReport(
        measure=config.measure,
        n=spec.n,
        k=spec.k,
        exact=exact,
        estimate=estimate,
        stderr=stderr,
        z=z,
        passed=z <= z_threshold,
    )
