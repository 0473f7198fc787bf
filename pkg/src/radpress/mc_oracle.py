"""Seeded photon-counting Monte Carlo.

This models the photon-counting picture only: each photon reflected off the
mirror transfers momentum ``2 w`` per bounce.  It serves as an oracle for the
stress-tensor results through their proven route equivalence; it is not an
independent field simulation.

Samples are drawn in chunks; chunk ``k`` uses a generator seeded by
``SeedSequence(seed, spawn_key=(k,))`` and chunk moments are reduced in chunk
order, so results depend only on ``(seed, config)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MODEL_NOTE",
    "ACCEPTANCE_SAMPLES",
    "McConfig",
    "Estimate",
    "CoherentResult",
    "NumberStateResult",
    "SplitArmsResult",
    "simulate_coherent",
    "simulate_number_state",
    "simulate_split_arms",
]

MODEL_NOTE = ("photon-counting model only; validates stress-tensor results "
              "through route equivalence, not an independent field simulation")
ACCEPTANCE_SAMPLES = 10_000


@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    seed: int = 42
    mean_photons: float = 100.0
    omega: float = 1.0
    bounces: int = 1
    splitter: bool = False
    chunk_size: int = 1 << 17

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least two samples")
        if self.mean_photons < 0 or self.omega < 0 or self.bounces < 1:
            raise ValueError("need mean_photons >= 0, omega >= 0, bounces >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")
        if self.samples < ACCEPTANCE_SAMPLES:
            warnings.warn(
                f"{self.samples} samples is below acceptance-grade sample count ({ACCEPTANCE_SAMPLES})",
                stacklevel=3,
            )

    @property
    def kick(self) -> float:
        """Momentum per photon over all bounces, ``2 b w``."""
        return 2.0 * self.bounces * self.omega


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float

    def within(self, target: float, nsigma: float = 3.0) -> bool:
        return abs(self.value - target) <= nsigma * self.stderr


@dataclass(frozen=True)
class CoherentResult:
    mean: Estimate
    variance: Estimate
    samples: int


@dataclass(frozen=True)
class NumberStateResult:
    mean: float
    variance: float
    samples: int


@dataclass(frozen=True)
class SplitArmsResult:
    variance1: Estimate
    variance2: Estimate
    covariance: Estimate
    correlation: float
    samples: int


def _chunks(cfg: McConfig):
    """Yield (chunk generator, chunk length) in order."""
    for k, start in enumerate(range(0, cfg.samples, cfg.chunk_size)):
        ss = np.random.SeedSequence(cfg.seed, spawn_key=(k,))
        yield np.random.Generator(np.random.PCG64(ss)), min(cfg.chunk_size, cfg.samples - start)


def _shifted_power_sums(x: np.ndarray, shift: float) -> np.ndarray:
    d = x - shift
    d2 = d * d
    return np.array([d.sum(), d2.sum(), (d2 * d).sum(), (d2 * d2).sum()])


def _moments(sums: np.ndarray, n: int) -> tuple[float, float, float]:
    """Mean offset, variance and fourth central moment from shifted power sums."""
    m1, m2, m3, m4 = (float(v) for v in sums / n)
    var = m2 - m1 * m1
    mu4 = m4 - 4 * m3 * m1 + 6 * m2 * m1 * m1 - 3 * m1 ** 4
    return m1, var, mu4


def simulate_coherent(cfg: McConfig) -> CoherentResult:
    """Poisson photon counts per window; ``p = 2 b w n``.

    numpy's Poisson sampler uses inversion for small means and the PTRS
    transformed-rejection method above, both exact in distribution.
    """
    shift = cfg.kick * cfg.mean_photons
    sums = np.zeros(4)
    for rng, m in _chunks(cfg):
        p = cfg.kick * rng.poisson(cfg.mean_photons, m).astype(float)
        sums += _shifted_power_sums(p, shift)
    n = cfg.samples
    m1, var, mu4 = _moments(sums, n)
    var_unbiased = var * n / (n - 1)
    var_se = math.sqrt(max(mu4 - var * var, 0.0) / n)
    return CoherentResult(
        mean=Estimate(shift + m1, math.sqrt(max(var, 0.0) / n)),
        variance=Estimate(var_unbiased, var_se),
        samples=n,
    )


def simulate_number_state(n: int, omega: float, bounces: int = 1, samples: int = 1000) -> NumberStateResult:
    """Every sample carries exactly ``n`` photons, so the variance is identically zero."""
    if int(n) != n or n < 0:
        raise ValueError("n must be a non-negative integer")
    p = np.full(samples, 2.0 * bounces * omega * n)
    return NumberStateResult(float(p.mean()), float(p.var()), samples)


def simulate_split_arms(cfg: McConfig) -> SplitArmsResult:
    """Poisson total count thinned binomially (p = 1/2) into two arms."""
    shift = cfg.kick * cfg.mean_photons / 2
    sx, sy, cross = np.zeros(4), np.zeros(4), np.zeros(2)
    for rng, m in _chunks(cfg):
        total = rng.poisson(cfg.mean_photons, m)
        n1 = rng.binomial(total, 0.5)
        x = cfg.kick * n1.astype(float)
        y = cfg.kick * (total - n1).astype(float)
        sx += _shifted_power_sums(x, shift)
        sy += _shifted_power_sums(y, shift)
        dxy = (x - shift) * (y - shift)
        cross += [dxy.sum(), (dxy * dxy).sum()]
    n = cfg.samples
    mx, vx, qx = _moments(sx, n)
    my, vy, qy = _moments(sy, n)
    cov = cross[0] / n - mx * my
    # E[dx^2 dy^2] about the shift; the shift sits within O(1/sqrt n) of the means
    se_cov = math.sqrt(max(cross[1] / n - cov * cov, 0.0) / n)
    rho = cov / math.sqrt(vx * vy) if vx > 0 and vy > 0 else 0.0
    scale = n / (n - 1)
    return SplitArmsResult(
        variance1=Estimate(vx * scale, math.sqrt(max(qx - vx * vx, 0.0) / n)),
        variance2=Estimate(vy * scale, math.sqrt(max(qy - vy * vy, 0.0) / n)),
        covariance=Estimate(cov * scale, se_cov),
        correlation=float(rho),
        samples=n,
    )
