"""Beat-to-beat cardiovascular derivations.

Turns beat-annotated parameter series (heart period, systolic/diastolic
pressure, respiration amplitude, impedance-derived quantities) into the
discrete variables and hemodynamic series used by the network analyses:

* HV_n = [HP_{n+1} > HP_n]   (1 = deceleration), n = 2..N-1
* SV_n = [SP_n > SP_{n-1}],                      n = 2..N-1
* RP_n = [RA_{n+1} > RA_{n+2}],                  n = 2..N-2
* CO_n = 60 * beta * Z'max_n * LVET_n / HP_{n-1} (HP, LVET in ms), n >= 2
* PR_n = MAP_n / CO_n

Indices above are 1-based beat counters; ties always map to 0. RP needs one
extra future amplitude, so the aligned three-variable range is n = 2..N-2.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .data import SymbolDataset
from .errors import DataValidationError

DISCRETE_KINDS = ("hv", "sv", "rp")
SERIES_KINDS = ("co", "pr")


@dataclass(frozen=True)
class BeatSeries:
    """Synchronous per-beat parameter columns; any subset may be present.

    Units: hp and lvet in ms, pressures in mmHg, zmax in Ohm/s, ra arbitrary.
    """

    hp: np.ndarray | None = None
    sp: np.ndarray | None = None
    dp: np.ndarray | None = None
    ra: np.ndarray | None = None
    map: np.ndarray | None = None
    zmax: np.ndarray | None = None
    lvet: np.ndarray | None = None

    def __post_init__(self):
        n = None
        for f in fields(self):
            col = getattr(self, f.name)
            if col is None:
                continue
            col = np.asarray(col, dtype=np.float64).reshape(-1)
            if not np.isfinite(col).all():
                bad = int(np.flatnonzero(~np.isfinite(col))[0])
                raise DataValidationError(
                    f"non-finite value in column {f.name.upper()} at beat {bad + 1}")
            if f.name in ("hp", "lvet") and col.size and col.min() <= 0.0:
                bad = int(np.flatnonzero(col <= 0.0)[0])
                raise DataValidationError(
                    f"column {f.name.upper()} must be positive (beat {bad + 1})")
            if n is None:
                n = col.size
            elif col.size != n:
                raise DataValidationError("all beat columns must have equal length")
            object.__setattr__(self, f.name, col)
        if n is None:
            raise DataValidationError("beat series has no columns")
        object.__setattr__(self, "_n", n)

    @property
    def n(self) -> int:
        return self._n

    def require(self, *names: str) -> list[np.ndarray]:
        cols = []
        for name in names:
            col = getattr(self, name)
            if col is None:
                raise DataValidationError(f"derivation requires column {name.upper()}")
            cols.append(col)
        return cols


def derive_discrete(kind: str, series: BeatSeries) -> np.ndarray:
    """One binary beat-to-beat variable; ties map to 0.

    HV and SV cover beats n = 2..N-1 (length N-2); RP covers n = 2..N-2
    (length N-3) because its rule looks two beats ahead.
    """
    kind = kind.lower()
    if kind not in DISCRETE_KINDS:
        raise ValueError(f"kind must be one of {DISCRETE_KINDS}")
    n = series.n
    if kind == "hv":
        if n < 3:
            raise DataValidationError("HV needs at least 3 beats")
        (hp,) = series.require("hp")
        return (hp[2:] > hp[1:-1]).astype(np.int64)
    if kind == "sv":
        if n < 3:
            raise DataValidationError("SV needs at least 3 beats")
        (sp,) = series.require("sp")
        return (sp[1:-1] > sp[:-2]).astype(np.int64)
    if n < 4:
        raise DataValidationError("RP needs at least 4 beats")
    (ra,) = series.require("ra")
    return (ra[2:-1] > ra[3:]).astype(np.int64)


def derive_all_discrete(series: BeatSeries) -> SymbolDataset:
    """HV, SV, RP aligned on the common beat range n = 2..N-2."""
    hv = derive_discrete("hv", series)[:-1]
    sv = derive_discrete("sv", series)[:-1]
    rp = derive_discrete("rp", series)
    return SymbolDataset.from_columns([hv, sv, rp], ["HV", "SV", "RP"])


def derive_cardiac_output(series: BeatSeries, beta: float = 1.0) -> np.ndarray:
    """CO_n = 60 * SV_n / HP_{n-1} with stroke volume beta * Z'max_n * LVET_n.

    HP and LVET are converted from ms to s, so 60/HP is beats per minute and
    CO carries beta's calibration unit per minute. Defined for n = 2..N.
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    zmax, lvet, hp = series.require("zmax", "lvet", "hp")
    if series.n < 2:
        raise DataValidationError("CO needs at least 2 beats")
    stroke = beta * zmax * (lvet / 1000.0)
    return 60.0 * stroke[1:] / (hp[:-1] / 1000.0)


def derive_peripheral_resistance(series: BeatSeries, co: np.ndarray) -> np.ndarray:
    """PR = MAP / CO on the trailing common beat range."""
    (mean_ap,) = series.require("map")
    co = np.asarray(co, dtype=np.float64).reshape(-1)
    if co.size == 0 or co.size > series.n:
        raise ValueError("CO length must be positive and no longer than the beat series")
    if co.min() <= 0.0:
        raise DataValidationError("CO must be positive to derive PR")
    return mean_ap[series.n - co.size:] / co


def derive_hemodynamic_series(series: BeatSeries, beta: float = 1.0):
    """The five-channel {HP, SP, DP, CO, PR} process aligned on beats 2..N."""
    from .data import SeriesDataset

    hp, sp, dp = series.require("hp", "sp", "dp")
    co = derive_cardiac_output(series, beta)
    pr = derive_peripheral_resistance(series, co)
    data = np.column_stack([hp[1:], sp[1:], dp[1:], co, pr])
    return SeriesDataset(data, ("HP", "SP", "DP", "CO", "PR"))
