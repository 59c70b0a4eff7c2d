"""Discrete-time Poisson arrival processes over sample time.

A spike train is modeled as arrivals with constant rate ``lam``, the
expected number of spikes per presented sample. Two generative views are
provided:

* `simulate` draws a binary train, one Bernoulli(lam) indicator per sample.
  This matches the data: a node either fires on a sample or it does not,
  so ``lam`` must lie in [0, 1].
* `simulate_counts` draws per-sample arrival counts as independent
  Poisson(lam) increments. This is the exact discrete skeleton of the
  Poisson process: window sums are Poisson distributed, the Fano factor is
  one in expectation, and rates add without saturation. Superposition and
  decomposition operate on this representation so the algebra is exact.

A Bernoulli train is the ``lam -> 0`` limit of the count process; at
moderate rates its window counts are binomial, with variance shrunk by the
factor ``1 - lam``. Calibration studies that rely on the Fano factor being
one under the null should therefore use `simulate_counts`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArrivalNotReached, InsufficientData
from .spikecore import IsiSequence, SpikeTrain

__all__ = [
    "PoissonModel",
    "CountSequence",
    "fit_rate",
    "empirical_rate",
    "simulate",
    "simulate_counts",
    "superpose",
    "decompose",
    "clip_to_binary",
    "poisson_pmf",
    "fit_isi_geometric",
    "memoryless_check",
    "kth_arrival_time",
]


@dataclass(frozen=True)
class PoissonModel:
    """Fitted constant-rate arrival model for one binary spike train.

    ``rate`` is the expected number of spikes per sample, which for a
    binary train equals the per-sample firing probability and so lies in
    [0, 1]. ``n_fit`` records how many samples the estimate used.
    """

    rate: float
    n_fit: int

    def __post_init__(self):
        if not (0.0 <= self.rate <= 1.0):
            raise ValueError(f"rate must be in [0, 1], got {self.rate}")
        if self.n_fit < 1:
            raise ValueError("n_fit must be at least 1")


@dataclass(frozen=True)
class CountSequence:
    """Per-sample arrival counts; a spike train generalized beyond 0/1.

    Superposing trains can place several arrivals on one sample, so counts
    are non-negative integers without an upper bound.
    """

    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size < 1:
            raise ValueError("counts must be a non-empty 1-D integer sequence")
        if counts.min() < 0:
            raise ValueError("arrival counts must be non-negative")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_train(cls, train):
        return cls(train.bits.astype(np.int64))

    @property
    def n(self):
        return self.counts.size

    @property
    def total(self):
        return int(self.counts.sum())


def fit_rate(train):
    """Maximum-likelihood rate of a binary train: spikes per sample."""
    return PoissonModel(rate=float(train.bits.mean()), n_fit=train.n)


def empirical_rate(counts):
    """Mean arrivals per sample of a count sequence.

    Unlike `fit_rate` this is a bare number: superposed sequences can
    exceed one arrival per sample, which no binary-train model admits.
    """
    return float(counts.counts.mean())


def simulate(lam, n, seed):
    """Draw a binary train of length `n` with firing probability `lam`.

    Each sample spikes independently with probability ``lam``; the draw
    comes from ``numpy.random.default_rng(seed)``.
    """
    lam = float(lam)
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lam must be in [0, 1], got {lam}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    bits = (rng.random(n) < lam).astype(np.uint8)
    return SpikeTrain(bits)


def simulate_counts(lam, n, seed):
    """Draw `n` independent Poisson(`lam`) arrival counts.

    The superposable form of the process: window sums are exactly Poisson,
    so this is the reference object for Fano-factor calibration. ``lam``
    may exceed 1 here because several arrivals can share a sample.
    """
    lam = float(lam)
    if lam < 0.0 or not math.isfinite(lam):
        raise ValueError(f"lam must be finite and >= 0, got {lam}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    return CountSequence(rng.poisson(lam, size=n).astype(np.int64))


def superpose(a, b):
    """Merge two arrival streams by adding per-sample counts.

    The result of superposing independent Poisson streams is Poisson with
    the summed rate, and on counts the identity is exact: totals add.
    """
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    return CountSequence(a.counts + b.counts)


def decompose(counts, p, seed):
    """Split an arrival stream by independent thinning.

    Each arrival is routed to the first output with probability `p`, else
    to the second, so per-sample counts are conserved exactly. Thinning a
    Poisson stream yields independent Poisson streams with rates
    ``p * lam`` and ``(1 - p) * lam``.
    """
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    kept = rng.binomial(counts.counts, p).astype(np.int64)
    return CountSequence(kept), CountSequence(counts.counts - kept)


def clip_to_binary(counts):
    """Collapse a count sequence to a binary train (any arrivals -> 1).

    Lossy whenever a sample holds more than one arrival; rate additivity
    does not survive the clip. Useful only to compare a superposed stream
    against binary-train tooling.
    """
    return SpikeTrain(np.minimum(counts.counts, 1).astype(np.uint8))


def poisson_pmf(lam, t, k):
    """P(N(t) = k) for a rate-`lam` process observed over `t` samples.

    Computed in log space as exp(k log(lam t) - lam t - log k!), which
    stays accurate for means and counts in the hundreds.
    """
    lam = float(lam)
    t = float(t)
    if lam < 0.0 or t < 0.0:
        raise ValueError("lam and t must be non-negative")
    if k < 0 or k != int(k):
        raise ValueError(f"k must be a non-negative integer, got {k}")
    k = int(k)
    mu = lam * t
    if mu == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(mu) - mu - math.lgamma(k + 1))


def fit_isi_geometric(intervals):
    """Fit the geometric interarrival law; returns the per-sample rate.

    For a Bernoulli(lam) train the interarrival time T satisfies
    P(T = t) = lam (1 - lam)^(t-1), with mean 1/lam, so the estimate is
    the reciprocal mean interval. Needs at least two spikes (one interval).

    Parameters
    ----------
    intervals : IsiSequence

    Returns
    -------
    float
        Estimated rate in (0, 1].
    """
    if intervals.insufficient:
        raise InsufficientData(
            f"need at least 2 spikes to fit intervals, got {intervals.spike_count}"
        )
    return float(1.0 / intervals.intervals.mean())


def memoryless_check(intervals, s, t):
    """Empirical test of P(T > s + t | T > s) = P(T > t) on interval data.

    Returns the pair (conditional tail, marginal tail) estimated from the
    observed interarrival intervals. For a Poisson train both numbers
    estimate (1 - lam)^t and should agree up to sampling noise; a periodic
    train drives them apart. Requires 30 intervals overall and 30 beyond
    `s` so the conditional estimate is not vacuous.
    """
    if s < 0 or t < 0:
        raise ValueError("s and t must be non-negative")
    iv = intervals.intervals
    if iv.size < 30:
        raise InsufficientData(f"need >= 30 intervals, got {iv.size}")
    beyond_s = iv > s
    n_beyond = int(beyond_s.sum())
    if n_beyond < 30:
        raise InsufficientData(
            f"need >= 30 intervals exceeding s={s}, got {n_beyond}"
        )
    conditional = float((iv > s + t).sum() / n_beyond)
    marginal = float((iv > t).mean())
    return conditional, marginal


def kth_arrival_time(train, k):
    """1-based sample position of the k-th spike of a binary train.

    The smallest t with N(t) >= k. Raises `ArrivalNotReached`, carrying
    the total spike count, when the train holds fewer than `k` spikes.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    positions = train.spike_positions()
    if positions.size < k:
        raise ArrivalNotReached(requested=k, total=positions.size)
    return int(positions[k - 1])
