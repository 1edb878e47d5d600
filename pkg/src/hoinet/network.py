"""Per-link analysis over all node pairs, network reconstruction, and the
sensitivity/specificity benchmark harness.

For every unordered pair (i, j) the information shared (IS) and the
conditional information shared given all remaining channels (cIS) are
estimated, tested against surrogate nulls, and classified through the B-index.
An edge enters the reconstructed network iff both measures are significant.
"""
from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .data import SeriesDataset, SymbolDataset
from .discrete import DEFAULT_TABLE_CAP, entropy, joint_pmf, mutual_information
from .errors import HoinetError
from .generators import generate_for_benchmark
from .surrogates import (
    LinkResult,
    SurrogateConfig,
    conditional_shuffle_surrogate,
    iaaft_surrogate,
    percentile_test,
    shuffle_surrogate,
)
from .varmodel import fit_var, pairwise_rate_matrices

log = logging.getLogger(__name__)

MODES = ("static", "dynamic")


@dataclass(frozen=True)
class NetworkResult:
    """All per-link measures of one analyzed network plus the config snapshot."""

    mode: str
    channel_names: tuple[str, ...]
    links: dict
    config: dict
    metadata: dict

    @property
    def m(self) -> int:
        return len(self.channel_names)

    def link(self, i: int, j: int) -> LinkResult:
        return self.links[(min(i, j), max(i, j))]

    def _matrix(self, getter, fill=np.nan) -> np.ndarray:
        mat = np.full((self.m, self.m), fill)
        for (i, j), link in self.links.items():
            mat[i, j] = mat[j, i] = getter(link)
        return mat

    @property
    def is_matrix(self) -> np.ndarray:
        return self._matrix(lambda l: l.is_value)

    @property
    def cis_matrix(self) -> np.ndarray:
        return self._matrix(lambda l: l.cis_value)

    @property
    def nis_matrix(self) -> np.ndarray:
        return self._matrix(lambda l: l.nis_value)

    @property
    def b_matrix(self) -> np.ndarray:
        return self._matrix(lambda l: l.b_index)

    @property
    def adjacency(self) -> np.ndarray:
        mat = np.zeros((self.m, self.m), dtype=bool)
        for (i, j), link in self.links.items():
            mat[i, j] = mat[j, i] = link.connected
        return mat


def reconstruct(result: NetworkResult) -> np.ndarray:
    """Adjacency of the reconstructed network: edge iff IS and cIS are both
    significant (the connected link class)."""
    return result.adjacency


def _pairs(m: int):
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def _config_snapshot(mode: str, config: SurrogateConfig, **extra) -> dict:
    snap = {
        "mode": mode,
        "surrogates": config.count,
        "alpha": config.alpha,
        "method": config.method,
        "iaaft_max_iter": config.iaaft_max_iter,
        "seed": int(config.master_seed),
    }
    snap.update(extra)
    return snap


def _entropy_of(probs: np.ndarray, keep) -> float:
    drop = tuple(ax for ax in range(probs.ndim) if ax not in keep)
    p = (probs.sum(axis=drop) if drop else probs).reshape(-1)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


def _static_pair_stats(dataset: SymbolDataset, max_cells: int):
    """IS/cIS for all pairs from one shared empirical pmf over all channels.

    Returns the two matrices plus the entropies of the complement marginals,
    which the conditional surrogate fast path reuses (only the full-table
    entropy changes when one channel is permuted within its strata).
    """
    m = dataset.m
    probs = joint_pmf(dataset, tuple(range(m)), max_cells=max_cells).probabilities
    h_all = _entropy_of(probs, tuple(range(m)))
    h_single = [_entropy_of(probs, (i,)) for i in range(m)]
    h_not = [_entropy_of(probs, tuple(k for k in range(m) if k != i)) for i in range(m)]
    is_mat = np.full((m, m), np.nan)
    cis_mat = np.full((m, m), np.nan)
    h_not_pair = {}
    for i, j in _pairs(m):
        h_ij = _entropy_of(probs, (i, j))
        h_not_ij = _entropy_of(probs, tuple(k for k in range(m) if k not in (i, j)))
        is_mat[i, j] = h_single[i] + h_single[j] - h_ij
        cis_mat[i, j] = h_not[j] + h_not[i] - h_not_ij - h_all
        h_not_pair[(i, j)] = h_not_ij
    aux = {"h_all": h_all, "h_not": h_not, "h_not_pair": h_not_pair}
    return is_mat, cis_mat, aux


def analyze_static(dataset: SymbolDataset, config: SurrogateConfig,
                   max_cells: int = DEFAULT_TABLE_CAP) -> NetworkResult:
    """Full static analysis: plug-in IS/cIS for every pair, shuffle-surrogate
    significance for IS, conditional-permutation significance for cIS, link
    classification, and reconstruction metadata. Deterministic given the seed.
    """
    if dataset.m < 3:
        raise ValueError("static network analysis needs M >= 3 channels")
    if config.method != "shuffle":
        raise ValueError("static analysis uses shuffle surrogates")
    m = dataset.m
    is0, cis0, aux = _static_pair_stats(dataset, max_cells)

    # IS null: one fully shuffled dataset per surrogate, shared by all links
    is_null = np.empty((config.count, m, m))
    for r in range(config.count):
        rng = np.random.default_rng([config.master_seed & (2**63 - 1), 0, r])
        surr = shuffle_surrogate(dataset, rng)
        for i, j in _pairs(m):
            is_null[r, i, j] = mutual_information(surr, i, j)

    # cIS null: per link, permute channel i within the strata of the
    # conditioning channels; only the full-table entropy changes
    links = {}
    for i, j in _pairs(m):
        zset = tuple(k for k in range(m) if k not in (i, j))
        base = aux["h_not"][j] + aux["h_not"][i] - aux["h_not_pair"][(i, j)]
        cis_null = np.empty(config.count)
        for r in range(config.count):
            rng = np.random.default_rng([config.master_seed & (2**63 - 1), 1, i, j, r])
            surr = conditional_shuffle_surrogate(dataset, i, zset, rng)
            h_all_surr = entropy(joint_pmf(surr, tuple(range(m)), max_cells=max_cells))
            cis_null[r] = base - h_all_surr
        is_sig = percentile_test(is0[i, j], is_null[:, i, j], config.alpha)
        cis_sig = percentile_test(cis0[i, j], cis_null, config.alpha)
        links[(i, j)] = LinkResult(i, j, max(0.0, is0[i, j]), max(0.0, cis0[i, j]),
                                   is_sig, cis_sig)

    return NetworkResult(
        mode="static",
        channel_names=dataset.channel_names,
        links=links,
        config=_config_snapshot("static", config),
        metadata={"n": dataset.n, "alphabet_sizes": list(dataset.alphabet_sizes)},
    )


def analyze_dynamic(series: SeriesDataset, config: SurrogateConfig,
                    p_max: int = 20, q: int = 20) -> NetworkResult:
    """Full dynamic analysis: VAR identification, model-based MIR/cMIR for
    every pair, and significance from per-channel iAAFT surrogates with the
    whole pipeline re-estimated on each surrogate set.
    """
    if series.m < 3:
        raise ValueError("dynamic network analysis needs M >= 3 channels")
    if config.method != "iaaft":
        raise ValueError("dynamic analysis uses iAAFT surrogates")
    m = series.m
    model = fit_var(series, p_max)
    is0, cis0 = pairwise_rate_matrices(model, q)

    null_is, null_cis = [], []
    failures = 0
    for r in range(config.count):
        rng = config.rng_for(r)
        surr = np.column_stack([
            iaaft_surrogate(series.data[:, c], rng, config.iaaft_max_iter)
            for c in range(m)
        ])
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                smodel = fit_var(SeriesDataset(surr), p_max)
                s_is, s_cis = pairwise_rate_matrices(smodel, q)
        except HoinetError as exc:
            failures += 1
            log.debug("surrogate %d failed: %s", r, exc)
            continue
        null_is.append(s_is)
        null_cis.append(s_cis)

    completed = len(null_is)
    if completed * config.alpha < 1.0:
        raise HoinetError(
            f"only {completed} of {config.count} surrogate pipelines succeeded; "
            "the percentile test is not resolvable")
    null_is = np.stack(null_is)
    null_cis = np.stack(null_cis)

    links = {}
    for i, j in _pairs(m):
        is_sig = percentile_test(is0[i, j], null_is[:, i, j], config.alpha)
        cis_sig = percentile_test(cis0[i, j], null_cis[:, i, j], config.alpha)
        links[(i, j)] = LinkResult(i, j, max(0.0, is0[i, j]), max(0.0, cis0[i, j]),
                                   is_sig, cis_sig)

    return NetworkResult(
        mode="dynamic",
        channel_names=series.channel_names,
        links=links,
        config=_config_snapshot("dynamic", config, p_max=p_max, q=q),
        metadata={
            "n": series.n,
            "selected_p": model.p,
            "spectral_radius": model.spectral_radius,
            "stable_fit": model.is_stable,
            "surrogate_failures": failures,
            "surrogates_completed": completed,
        },
    )


# ---------------------------------------------------------------------------
# benchmark harness


def confusion_counts(predicted: np.ndarray, truth: np.ndarray) -> tuple[int, int, int, int]:
    """(TP, FP, TN, FN) over unordered pairs of a predicted vs true adjacency."""
    predicted = np.asarray(predicted, dtype=bool)
    truth = np.asarray(truth, dtype=bool)
    if predicted.shape != truth.shape or predicted.ndim != 2:
        raise ValueError("adjacency matrices must share a square shape")
    iu = np.triu_indices(predicted.shape[0], k=1)
    pred, true = predicted[iu], truth[iu]
    tp = int((pred & true).sum())
    fp = int((pred & ~true).sum())
    tn = int((~pred & ~true).sum())
    fn = int((~pred & true).sum())
    return tp, fp, tn, fn


@dataclass(frozen=True)
class ScenarioPoint:
    label: str
    generator: str
    params: dict


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    mode: str
    points: tuple[ScenarioPoint, ...]


DEFAULT_STAR_ARMS = (0.1, 0.3, 0.5, 0.7, 0.9)


def standard_scenario(name: str, arms: Sequence[float] | None = None,
                      gammas: Mapping[str, float] | None = None) -> Scenario:
    """Benchmark scenarios of the simulation studies.

    ``binary10`` sweeps nothing (one point at the default gate reliabilities);
    the two ``var-stars-*`` scenarios sweep the hub arm weight with
    other_arm = 1 - hub_out.
    """
    if name == "binary10":
        params = dict(gammas) if gammas else {}
        return Scenario("binary10", "static", (ScenarioPoint("default", "binary10", params),))
    if name in ("var-stars-competing", "var-stars-propagation"):
        structure = name.split("-")[-1]
        arms = tuple(arms) if arms is not None else DEFAULT_STAR_ARMS
        points = tuple(
            ScenarioPoint(f"hub_out={a:g}", "var-stars",
                          {"structure": structure, "hub_out": float(a),
                           "other_arm": round(1.0 - a, 12)})
            for a in arms)
        return Scenario(name, "dynamic", points)
    raise ValueError(f"unknown scenario {name!r}")


@dataclass(frozen=True)
class RunRecord:
    point_label: str
    n: int
    run_index: int
    failed: bool
    error: str | None
    tp: int
    fp: int
    tn: int
    fn: int
    false_positive_pairs: tuple
    false_negative_pairs: tuple


@dataclass(frozen=True)
class BenchmarkCell:
    point_label: str
    n: int
    requested: int
    completed: int
    failed: int
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def sensitivity(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else float("nan")

    @property
    def specificity(self) -> float:
        return self.tn / (self.tn + self.fp) if self.tn + self.fp else float("nan")


@dataclass
class BenchmarkReport:
    scenario_id: str
    mode: str
    lengths: tuple[int, ...]
    runs: int
    config: dict
    records: list = field(default_factory=list)

    def records_for(self, point_label: str, n: int) -> list:
        return [r for r in self.records
                if r.point_label == point_label and r.n == n and not r.failed]

    def cells(self) -> list[BenchmarkCell]:
        out = []
        seen = []
        for rec in self.records:
            key = (rec.point_label, rec.n)
            if key not in seen:
                seen.append(key)
        for point_label, n in seen:
            group = [r for r in self.records if (r.point_label, r.n) == (point_label, n)]
            ok = [r for r in group if not r.failed]
            out.append(BenchmarkCell(
                point_label, n, len(group), len(ok), len(group) - len(ok),
                sum(r.tp for r in ok), sum(r.fp for r in ok),
                sum(r.tn for r in ok), sum(r.fn for r in ok)))
        return out


@dataclass(frozen=True)
class _BenchmarkTask:
    mode: str
    point: ScenarioPoint
    n: int
    run_index: int
    gen_seed: int
    analysis_seed: int
    count: int
    alpha: float
    iaaft_max_iter: int
    p_max: int
    q: int


def _run_benchmark_task(task: _BenchmarkTask) -> RunRecord:
    try:
        dataset, truth = generate_for_benchmark(
            task.point.generator, task.point.params, task.n, task.gen_seed)
        method = "shuffle" if task.mode == "static" else "iaaft"
        config = SurrogateConfig(task.count, task.alpha, method,
                                 task.iaaft_max_iter, task.analysis_seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            if task.mode == "static":
                result = analyze_static(dataset, config)
            else:
                result = analyze_dynamic(dataset, config, task.p_max, task.q)
        predicted = reconstruct(result)
        tp, fp, tn, fn = confusion_counts(predicted, truth)
        iu = zip(*np.triu_indices(truth.shape[0], k=1))
        fps, fns = [], []
        for i, j in iu:
            if predicted[i, j] and not truth[i, j]:
                fps.append((int(i), int(j)))
            elif truth[i, j] and not predicted[i, j]:
                fns.append((int(i), int(j)))
        return RunRecord(task.point.label, task.n, task.run_index, False, None,
                         tp, fp, tn, fn, tuple(fps), tuple(fns))
    except HoinetError as exc:
        return RunRecord(task.point.label, task.n, task.run_index, True,
                         f"{type(exc).__name__}: {exc}", 0, 0, 0, 0, (), ())


def benchmark(scenario: Scenario, lengths: Sequence[int], runs: int,
              config: SurrogateConfig | None = None, *,
              p_max: int = 20, q: int = 20, jobs: int = 1,
              progress: Callable | None = None) -> BenchmarkReport:
    """Monte-Carlo reconstruction benchmark over (parameter point, N, run).

    Each run generates a fresh dataset with a derived seed, runs the full
    analysis, and scores the reconstructed adjacency against the generator's
    ground truth. Failed runs (e.g. non-stationary fits) are recorded,
    excluded from the aggregates, and counted.
    """
    if runs < 1:
        raise ValueError("need at least one run")
    method = "shuffle" if scenario.mode == "static" else "iaaft"
    if config is None:
        config = SurrogateConfig(method=method)
    base_seed = int(config.master_seed) & (2**63 - 1)

    tasks = []
    for pi, point in enumerate(scenario.points):
        for ni, n in enumerate(lengths):
            for r in range(runs):
                ss = np.random.SeedSequence([base_seed, pi, ni, r])
                gen_seed, ana_seed = (int(s) for s in ss.generate_state(2, np.uint64))
                tasks.append(_BenchmarkTask(
                    scenario.mode, point, int(n), r,
                    gen_seed & (2**63 - 1), ana_seed & (2**63 - 1),
                    config.count, config.alpha, config.iaaft_max_iter, p_max, q))

    records = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rec in pool.map(_run_benchmark_task, tasks):
                records.append(rec)
                if progress:
                    progress(rec, len(records), len(tasks))
    else:
        for task in tasks:
            rec = _run_benchmark_task(task)
            records.append(rec)
            if progress:
                progress(rec, len(records), len(tasks))

    records.sort(key=lambda r: (r.point_label, r.n, r.run_index))
    return BenchmarkReport(scenario.scenario_id, scenario.mode, tuple(int(n) for n in lengths),
                           runs, _config_snapshot(scenario.mode, config, p_max=p_max, q=q),
                           records)
