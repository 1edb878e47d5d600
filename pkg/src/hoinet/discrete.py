"""Plug-in information measures for discrete variables.

Probabilities are estimated as frequencies of symbol combinations and plugged
into the entropy-based identities. All quantities are in nats. Conditional MI
is always derived from entropies of one shared table, so the chain rule
I(X;Y,Z) = I(X;Z) + I(X;Y|Z) holds to machine precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import SymbolDataset
from .errors import TableTooLargeError

# Dense tables only; anything bigger is a curse-of-dimensionality error, not a
# silent memory blow-up.
DEFAULT_TABLE_CAP = 2**20


@dataclass(frozen=True)
class ProbabilityTable:
    """Dense joint pmf over an ordered subset of channels.

    ``probabilities`` has one axis per channel in ``channel_subset``, with axis
    length equal to that channel's alphabet size.
    """

    channel_subset: tuple[int, ...]
    probabilities: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=np.float64)
        subset = tuple(int(c) for c in self.channel_subset)
        if probs.ndim != len(subset):
            raise ValueError("table dimensionality must equal the subset size")
        if probs.min() < 0.0 or probs.max() > 1.0 + 1e-12:
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {probs.sum()!r}")
        object.__setattr__(self, "channel_subset", subset)
        object.__setattr__(self, "probabilities", probs)

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return self.probabilities.shape

    def _axes_of(self, channels: Sequence[int]) -> tuple[int, ...]:
        try:
            return tuple(self.channel_subset.index(int(c)) for c in channels)
        except ValueError:
            raise ValueError(f"channels {tuple(channels)} not all present in table "
                             f"over {self.channel_subset}") from None

    def marginal(self, channels: Sequence[int]) -> "ProbabilityTable":
        """Marginal table over ``channels`` (given in dataset-channel indices)."""
        keep = self._axes_of(channels)
        if len(set(keep)) != len(keep) or not keep:
            raise ValueError("marginal channels must be non-empty and distinct")
        drop = tuple(ax for ax in range(self.probabilities.ndim) if ax not in keep)
        probs = self.probabilities.sum(axis=drop) if drop else self.probabilities
        # summing leaves surviving axes in original order; permute to requested order
        sorted_keep = sorted(keep)
        probs = np.transpose(probs, axes=[sorted_keep.index(k) for k in keep])
        return ProbabilityTable(tuple(int(c) for c in channels), probs)


def _validate_subset(dataset: SymbolDataset, subset: Sequence[int]) -> tuple[int, ...]:
    subset = tuple(int(c) for c in subset)
    if not subset:
        raise ValueError("channel subset must be non-empty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"duplicate channel indices in subset {subset}")
    for c in subset:
        if not 0 <= c < dataset.m:
            raise ValueError(f"channel index {c} out of range for M={dataset.m}")
    return subset


def joint_pmf(dataset: SymbolDataset, subset: Sequence[int],
              max_cells: int = DEFAULT_TABLE_CAP) -> ProbabilityTable:
    """Empirical joint pmf of the given channels: counts / N."""
    subset = _validate_subset(dataset, subset)
    sizes = tuple(dataset.alphabet_sizes[c] for c in subset)
    if np.prod(sizes, dtype=np.float64) > max_cells:
        raise TableTooLargeError(
            f"product alphabet of subset {subset} has {np.prod(sizes, dtype=np.float64):.3g} "
            f"cells, exceeding the cap of {max_cells}")
    cells = int(np.prod(sizes))
    flat = np.ravel_multi_index(tuple(dataset.data[:, c] for c in subset), sizes)
    counts = np.bincount(flat, minlength=cells)
    probs = counts.reshape(sizes) / dataset.n
    return ProbabilityTable(subset, probs)


def entropy(table: ProbabilityTable) -> float:
    """Shannon entropy -sum p log p in nats, with 0 log 0 = 0."""
    p = table.probabilities.reshape(-1)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


def entropy_of(table: ProbabilityTable, channels: Sequence[int]) -> float:
    """Entropy of the marginal of ``table`` over the given channels."""
    return entropy(table.marginal(channels))


def mutual_information_from_table(table: ProbabilityTable, i: int, j: int) -> float:
    """I(X;Y) = H(X) + H(Y) - H(X,Y) from one shared table."""
    if i == j:
        raise ValueError("mutual information of a channel with itself is not a link")
    return entropy_of(table, (i,)) + entropy_of(table, (j,)) - entropy_of(table, (i, j))


def conditional_mutual_information_from_table(table: ProbabilityTable, i: int, j: int,
                                              zset: Sequence[int]) -> float:
    """I(X;Y|Z) = I(X;{Y,Z}) - I(X;Z), all terms from one shared table."""
    zset = tuple(int(c) for c in zset)
    if i == j or i in zset or j in zset:
        raise ValueError(f"channels i={i}, j={j} must be distinct and outside zset={zset}")
    if not zset:
        return mutual_information_from_table(table, i, j)
    h_x = entropy_of(table, (i,))
    h_yz = entropy_of(table, (j,) + zset)
    h_xyz = entropy_of(table, (i, j) + zset)
    h_z = entropy_of(table, zset)
    h_xz = entropy_of(table, (i,) + zset)
    i_x_yz = h_x + h_yz - h_xyz
    i_x_z = h_x + h_z - h_xz
    return i_x_yz - i_x_z


def mutual_information(dataset: SymbolDataset, i: int, j: int) -> float:
    """Plug-in mutual information between channels i and j, in nats."""
    table = joint_pmf(dataset, (i, j))
    return mutual_information_from_table(table, i, j)


def conditional_mutual_information(dataset: SymbolDataset, i: int, j: int,
                                   zset: Sequence[int],
                                   max_cells: int = DEFAULT_TABLE_CAP) -> float:
    """Plug-in conditional mutual information I(i;j|zset), in nats."""
    zset = tuple(int(c) for c in zset)
    if i == j or i in zset or j in zset:
        raise ValueError(f"channels i={i}, j={j} must be distinct and outside zset={zset}")
    table = joint_pmf(dataset, (i, j) + zset, max_cells=max_cells)
    return conditional_mutual_information_from_table(table, i, j, zset)
