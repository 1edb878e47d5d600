"""Surrogate-data generation, percentile significance tests, and link
classification from the redundancy/synergy balance.

Shuffle surrogates permute each symbolic channel independently, preserving
marginals while destroying all interactions; they form the null of the
unconditional (IS) test. The conditional (cIS) test for symbolic data uses a
stratified variant that permutes one tested channel within the strata of the
conditioning channels, so the null carries the same conditioning bias as the
estimate. iAAFT surrogates preserve a series' amplitude distribution exactly
and its spectrum approximately, applied independently per channel.
Significance of a statistic is a strict comparison against the (1-alpha)
percentile of its surrogate distribution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import SymbolDataset

LINK_ISOLATED = "isolated"
LINK_COMMON_DRIVE = "common-drive-or-cascade"
LINK_COMMON_TARGET = "common-target"
LINK_CONNECTED = "connected"

SURROGATE_METHODS = ("shuffle", "iaaft")


@dataclass(frozen=True)
class SurrogateConfig:
    """Settings of the surrogate significance test.

    Surrogate r draws from a deterministic stream seeded by
    (master_seed, r), so results are bit-reproducible for a fixed seed.
    """

    count: int = 100
    alpha: float = 0.05
    method: str = "shuffle"
    iaaft_max_iter: int = 100
    master_seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("surrogate count must be positive")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.count * self.alpha < 1.0:
            raise ValueError(
                f"count * alpha = {self.count * self.alpha:.3g} < 1: the "
                f"(1-alpha) percentile is not resolvable with {self.count} surrogates")
        if self.method not in SURROGATE_METHODS:
            raise ValueError(f"method must be one of {SURROGATE_METHODS}")
        if self.iaaft_max_iter < 1:
            raise ValueError("iaaft_max_iter must be positive")

    def rng_for(self, r: int) -> np.random.Generator:
        return np.random.default_rng([int(self.master_seed) & (2**63 - 1), int(r)])


@dataclass(frozen=True)
class LinkResult:
    """Per node-pair measures, significance flags, and link class."""

    i: int
    j: int
    is_value: float
    cis_value: float
    is_significant: bool
    cis_significant: bool
    b_index: float = field(init=False)
    link_class: str = field(init=False)

    def __post_init__(self):
        b, cls = classify_link(self.is_value, self.cis_value,
                               self.is_significant, self.cis_significant)
        object.__setattr__(self, "b_index", b)
        object.__setattr__(self, "link_class", cls)

    @property
    def nis_value(self) -> float:
        return self.is_value - self.cis_value

    @property
    def connected(self) -> bool:
        return self.link_class == LINK_CONNECTED


def shuffle_surrogate(dataset: SymbolDataset, rng: np.random.Generator) -> SymbolDataset:
    """Independently permute every channel; per-channel marginals are kept."""
    if dataset.n < 2:
        raise ValueError("need at least two observations to shuffle")
    data = np.empty_like(dataset.data)
    for j in range(dataset.m):
        data[:, j] = dataset.data[rng.permutation(dataset.n), j]
    return SymbolDataset(data, dataset.alphabet_sizes, dataset.channel_names)


def conditional_shuffle_surrogate(dataset: SymbolDataset, channel: int,
                                  strata_channels: Sequence[int],
                                  rng: np.random.Generator) -> SymbolDataset:
    """Permute one channel within the joint strata of the given channels.

    Null for conditional independence: the permutation preserves the joint
    distribution of (channel, strata) and leaves every other channel in place,
    destroying only the dependence of ``channel`` on the rest given the strata.
    """
    strata_channels = tuple(int(c) for c in strata_channels)
    if channel in strata_channels:
        raise ValueError("channel cannot be part of its own conditioning strata")
    if dataset.n < 2:
        raise ValueError("need at least two observations to shuffle")
    codes = np.zeros(dataset.n, dtype=np.int64)
    for c in strata_channels:
        codes = codes * dataset.alphabet_sizes[c] + dataset.data[:, c]
    col = dataset.data[:, channel]
    # two sorts grouped by stratum: original within-group order vs an order by
    # random keys; mapping one onto the other permutes uniformly per stratum
    original_order = np.argsort(codes, kind="stable")
    random_order = np.lexsort((rng.random(dataset.n), codes))
    out = np.empty_like(col)
    out[original_order] = col[random_order]
    data = dataset.data.copy()
    data[:, channel] = out
    return SymbolDataset(data, dataset.alphabet_sizes, dataset.channel_names)


def iaaft_surrogate(channel: np.ndarray, rng: np.random.Generator,
                    max_iter: int = 100) -> np.ndarray:
    """Iterative amplitude-adjusted Fourier transform surrogate of one channel.

    Alternates a spectrum step (impose the original Fourier amplitudes on the
    current phases) with an amplitude step (rank-remap onto the sorted original
    values) until the rank ordering stabilizes or ``max_iter`` is hit. The last
    step is always the amplitude adjustment, so the sorted output equals the
    sorted input exactly.
    """
    x = np.asarray(channel, dtype=np.float64).reshape(-1)
    n = x.size
    if n < 4:
        raise ValueError("need at least 4 samples for an iAAFT surrogate")
    sorted_x = np.sort(x)
    target_amp = np.abs(np.fft.rfft(x))

    y = x[rng.permutation(n)]
    prev_order = None
    for _ in range(max_iter):
        spec = np.fft.rfft(y)
        mag = np.abs(spec)
        zero = mag == 0.0
        scale = np.divide(target_amp, mag, out=np.ones_like(mag), where=~zero)
        spec = spec * scale
        spec[zero] = target_amp[zero]  # undefined phase: take phase 0
        z = np.fft.irfft(spec, n=n)
        order = np.argsort(z, kind="stable")
        y = np.empty(n)
        y[order] = sorted_x
        if prev_order is not None and np.array_equal(order, prev_order):
            break
        prev_order = order
    return y


def percentile_test(original: float, surrogate_values: Sequence[float],
                    alpha: float) -> bool:
    """True iff ``original`` strictly exceeds the ceil((1-alpha)*count)-th
    order statistic of the surrogate values."""
    values = np.sort(np.asarray(surrogate_values, dtype=np.float64))
    if values.size == 0:
        raise ValueError("surrogate_values must be non-empty")
    # guard float round-up when (1-alpha)*count is an exact integer
    k = math.ceil((1.0 - alpha) * values.size - 1e-12)
    k = min(max(k, 1), values.size)
    return bool(original > values[k - 1])


def classify_link(is_value: float, cis_value: float,
                  is_sig: bool, cis_sig: bool) -> tuple[float, str]:
    """B-index and link class from the two measures and their significance.

    Both significant: B = (IS - cIS) / max(IS, cIS), class connected. Only IS:
    B = 1, common drive or cascade. Only cIS: B = -1, common target. Neither:
    B = NaN, isolated.
    """
    if is_value < 0.0 or cis_value < 0.0:
        raise ValueError("IS and cIS must be non-negative")
    if is_sig and cis_sig:
        denom = max(is_value, cis_value)
        if denom <= 0.0:
            raise ValueError("both measures significant but max(IS, cIS) = 0")
        return (is_value - cis_value) / denom, LINK_CONNECTED
    if is_sig:
        return 1.0, LINK_COMMON_DRIVE
    if cis_sig:
        return -1.0, LINK_COMMON_TARGET
    return math.nan, LINK_ISOLATED
