"""Dataset containers for static (symbolic) and dynamic (real-valued) observations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataValidationError


def _default_names(m: int) -> list[str]:
    return [f"S{i + 1}" for i in range(m)]


@dataclass(frozen=True)
class SymbolDataset:
    """N observations x M channels of discrete symbols.

    Column i takes values in {0, ..., alphabet_sizes[i] - 1}. Symbols carry no
    order; all measures computed from them are relabeling-invariant.
    """

    data: np.ndarray
    alphabet_sizes: tuple[int, ...]
    channel_names: tuple[str, ...] = ()

    def __post_init__(self):
        data = np.ascontiguousarray(np.asarray(self.data, dtype=np.int64))
        if data.ndim != 2:
            raise DataValidationError("symbol data must be a 2-D array")
        n, m = data.shape
        if n < 1 or m < 2:
            raise DataValidationError(f"need N >= 1 and M >= 2, got N={n}, M={m}")
        sizes = tuple(int(q) for q in self.alphabet_sizes)
        if len(sizes) != m or any(q < 1 for q in sizes):
            raise DataValidationError("alphabet_sizes must list one positive size per channel")
        for j, q in enumerate(sizes):
            col = data[:, j]
            if col.min() < 0 or col.max() >= q:
                raise DataValidationError(
                    f"channel {j}: symbols must lie in [0, {q}), found range "
                    f"[{col.min()}, {col.max()}]"
                )
        names = tuple(self.channel_names) if self.channel_names else tuple(_default_names(m))
        if len(names) != m:
            raise DataValidationError("channel_names length must match channel count")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "alphabet_sizes", sizes)
        object.__setattr__(self, "channel_names", names)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_columns(cls, columns, channel_names=None) -> "SymbolDataset":
        """Stack 1-D symbol columns; alphabets inferred as max+1 per column."""
        data = np.column_stack([np.asarray(c, dtype=np.int64) for c in columns])
        sizes = tuple(int(data[:, j].max()) + 1 if data.shape[0] else 1 for j in range(data.shape[1]))
        return cls(data, sizes, tuple(channel_names) if channel_names else ())


@dataclass(frozen=True)
class SeriesDataset:
    """N samples x M channels of real-valued, synchronously observed series."""

    data: np.ndarray
    channel_names: tuple[str, ...] = ()

    def __post_init__(self):
        data = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64))
        if data.ndim != 2:
            raise DataValidationError("series data must be a 2-D array")
        n, m = data.shape
        if n < 1 or m < 1:
            raise DataValidationError(f"need N >= 1 and M >= 1, got N={n}, M={m}")
        if not np.isfinite(data).all():
            bad = np.argwhere(~np.isfinite(data))[0]
            raise DataValidationError(f"non-finite value at row {bad[0]}, channel {bad[1]}")
        names = tuple(self.channel_names) if self.channel_names else tuple(_default_names(m))
        if len(names) != m:
            raise DataValidationError("channel_names length must match channel count")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "channel_names", names)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def m(self) -> int:
        return self.data.shape[1]
