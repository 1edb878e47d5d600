"""Generators and exact oracles for the simulated network systems.

Four systems: a three-node static (binary) and dynamic (Gaussian VAR) triple
with tunable couplings and analytically known measures, a ten-node binary
network mixing noisy copies with noisy-OR gates, and six-node VAR star
networks with two hubs in competing or propagation arrangements.

Every generator is deterministic given its parameters and seed/rng. The
exact_* oracles evaluate the same measures the estimators target, directly
from the generative rules (8-state pmf enumeration for the static triple,
covariance propagation of the true model for the dynamic one).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .data import SeriesDataset, SymbolDataset
from .discrete import (
    ProbabilityTable,
    conditional_mutual_information_from_table,
    mutual_information_from_table,
)
from .surrogates import LinkResult
from .varmodel import VarModel, cmir, mir, simulate_var

# exact oracles classify a measure as structurally zero below these
EXACT_STATIC_TOL = 1e-12
EXACT_DYNAMIC_TOL = 1e-9

# identical stable AR(2) self-dynamics for every star-network node
# (complex poles at radius sqrt(0.2), so each process has nontrivial spectrum)
STAR_SELF_LAG1 = 0.4
STAR_SELF_LAG2 = -0.2


@dataclass(frozen=True)
class ThreeNodeStaticParams:
    """Copy probabilities of the binary triple S1 -> S2, {S1, S2} -> S3.

    At 0.5 a parent exerts no influence; the paper's sweep uses
    alpha in [0.5, 1], gamma = 1.5 - alpha, beta = 0.9.
    """

    alpha: float
    beta: float = 0.9
    gamma: float = 0.9

    def __post_init__(self):
        for name, v in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)):
            if not 0.5 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0.5, 1], got {v}")


@dataclass(frozen=True)
class ThreeNodeDynamicParams:
    """Lag-1 couplings of the trivariate VAR: S1 -> S2 (a), S1 -> S3 (b),
    S2 -> S3 (c); all self-terms zero, unit innovations."""

    a: float
    b: float = 1.0
    c: float = 0.5


@dataclass(frozen=True)
class Binary10Params:
    gamma1: float = 0.9   # noisy-OR gate reliability (S2, S8)
    gamma2: float = 0.9   # copy reliability S5 -> S6, S5 -> S7
    gamma3: float = 0.8   # copy reliability S9 -> S10
    n: int = 1000
    seed: int = 0

    def __post_init__(self):
        for name, v in (("gamma1", self.gamma1), ("gamma2", self.gamma2),
                        ("gamma3", self.gamma3)):
            if not 0.5 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0.5, 1], got {v}")
        if self.n < 1:
            raise ValueError("n must be positive")


@dataclass(frozen=True)
class VarStarsParams:
    """Six-node VAR(2) star networks with hubs S1 and S6.

    S1 sends to the leaves S2..S5 with lag-1 weight ``hub_out``. In the
    competing structure S6 also sends to the leaves (weight ``other_arm``);
    in the propagation structure the leaves send to S6 instead.
    """

    structure: str
    hub_out: float = 0.5
    other_arm: float = 0.5
    n: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.structure not in ("competing", "propagation"):
            raise ValueError("structure must be 'competing' or 'propagation'")
        if self.n < 1:
            raise ValueError("n must be positive")


def _exact_link(i, j, is_value, cis_value, tol) -> LinkResult:
    is_value = max(0.0, float(is_value))
    cis_value = max(0.0, float(cis_value))
    return LinkResult(i, j, is_value, cis_value, is_value > tol, cis_value > tol)


def _pairs(m):
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def _truth_matrix(m, edges) -> np.ndarray:
    truth = np.zeros((m, m), dtype=bool)
    for i, j in edges:
        truth[i, j] = truth[j, i] = True
    return truth


# ---------------------------------------------------------------------------
# three-node static triple


def three_node_static_table(params: ThreeNodeStaticParams) -> ProbabilityTable:
    """Exact 8-state joint pmf enumerated from the generative rules.

    S3's gate picks one parent per observation with equal probability and
    copies it with that parent's reliability (beta for S1, gamma for S2).
    """
    a, b, g = params.alpha, params.beta, params.gamma
    probs = np.zeros((2, 2, 2))
    for s1 in (0, 1):
        for s2 in (0, 1):
            p12 = 0.5 * (a if s2 == s1 else 1.0 - a)
            for s3 in (0, 1):
                gate = 0.5 * (b if s3 == s1 else 1.0 - b) \
                    + 0.5 * (g if s3 == s2 else 1.0 - g)
                probs[s1, s2, s3] = p12 * gate
    return ProbabilityTable((0, 1, 2), probs)


def three_node_static_truth(params: ThreeNodeStaticParams) -> np.ndarray:
    edges = []
    if params.alpha > 0.5:
        edges.append((0, 1))
    if params.beta > 0.5:
        edges.append((0, 2))
    if params.gamma > 0.5:
        edges.append((1, 2))
    return _truth_matrix(3, edges)


def gen_three_node_static(params: ThreeNodeStaticParams, n: int,
                          rng: np.random.Generator) -> tuple[SymbolDataset, np.ndarray]:
    s1 = rng.integers(0, 2, n)
    s2 = np.where(rng.random(n) < params.alpha, s1, 1 - s1)
    parent_is_s2 = rng.integers(0, 2, n) == 1
    src = np.where(parent_is_s2, s2, s1)
    rel = np.where(parent_is_s2, params.gamma, params.beta)
    s3 = np.where(rng.random(n) < rel, src, 1 - src)
    ds = SymbolDataset(np.column_stack([s1, s2, s3]), (2, 2, 2))
    return ds, three_node_static_truth(params)


def exact_three_node_static(params: ThreeNodeStaticParams) -> dict[tuple[int, int], LinkResult]:
    """Exact IS/cIS/nIS/B for each link of the static triple."""
    table = three_node_static_table(params)
    links = {}
    for i, j in _pairs(3):
        k = ({0, 1, 2} - {i, j}).pop()
        is_value = mutual_information_from_table(table.marginal((i, j)), i, j)
        cis_value = conditional_mutual_information_from_table(table, i, j, (k,))
        links[(i, j)] = _exact_link(i, j, is_value, cis_value, EXACT_STATIC_TOL)
    return links


# ---------------------------------------------------------------------------
# three-node dynamic triple


def three_node_dynamic_model(params: ThreeNodeDynamicParams) -> VarModel:
    coeffs = np.zeros((1, 3, 3))
    coeffs[0, 1, 0] = params.a
    coeffs[0, 2, 0] = params.b
    coeffs[0, 2, 1] = params.c
    return VarModel(coeffs, np.eye(3))


def three_node_dynamic_truth(params: ThreeNodeDynamicParams) -> np.ndarray:
    edges = []
    if params.a != 0.0:
        edges.append((0, 1))
    if params.b != 0.0:
        edges.append((0, 2))
    if params.c != 0.0:
        edges.append((1, 2))
    return _truth_matrix(3, edges)


def gen_three_node_dynamic(params: ThreeNodeDynamicParams, n: int,
                           rng: np.random.Generator) -> tuple[SeriesDataset, np.ndarray]:
    series = simulate_var(three_node_dynamic_model(params), n, rng)
    return series, three_node_dynamic_truth(params)


def exact_three_node_dynamic(params: ThreeNodeDynamicParams,
                             q: int = 20) -> dict[tuple[int, int], LinkResult]:
    """Model-exact MIR/cMIR/B for each link, via covariance propagation."""
    model = three_node_dynamic_model(params)
    links = {}
    for i, j in _pairs(3):
        k = ({0, 1, 2} - {i, j}).pop()
        is_value = mir(model, i, j, q=q)
        cis_value = cmir(model, i, j, (k,), q=q)
        links[(i, j)] = _exact_link(i, j, is_value, cis_value, EXACT_DYNAMIC_TOL)
    return links


# ---------------------------------------------------------------------------
# ten-node binary network

BINARY10_EDGES = ((1, 2), (1, 3), (1, 4), (4, 5), (4, 6), (5, 7), (6, 7), (8, 9))


def binary10_truth() -> np.ndarray:
    return _truth_matrix(10, BINARY10_EDGES)


def _noisy_copy(src, reliability, rng):
    return np.where(rng.random(src.shape[0]) < reliability, src, 1 - src)


def _noisy_or(inputs, reliability, rng):
    # Pearl-style noisy OR: each active input independently activates the
    # output with probability ``reliability``; no leak when all inputs are 0
    active = np.sum(inputs, axis=0)
    p_on = 1.0 - (1.0 - reliability) ** active
    return (rng.random(active.shape[0]) < p_on).astype(np.int64)


def gen_binary10(params: Binary10Params) -> tuple[SymbolDataset, np.ndarray]:
    """Ten binary channels: five i.i.d. sources, noisy copies S5->{S6,S7} and
    S9->S10, and noisy-OR gates S2 = OR(S3,S4,S5), S8 = OR(S6,S7)."""
    rng = np.random.default_rng([params.seed])
    n = params.n
    s1, s3, s4, s5, s9 = (rng.integers(0, 2, n) for _ in range(5))
    s2 = _noisy_or([s3, s4, s5], params.gamma1, rng)
    s6 = _noisy_copy(s5, params.gamma2, rng)
    s7 = _noisy_copy(s5, params.gamma2, rng)
    s8 = _noisy_or([s6, s7], params.gamma1, rng)
    s10 = _noisy_copy(s9, params.gamma3, rng)
    data = np.column_stack([s1, s2, s3, s4, s5, s6, s7, s8, s9, s10])
    return SymbolDataset(data, (2,) * 10), binary10_truth()


# ---------------------------------------------------------------------------
# six-node VAR star networks


def var_stars_model(params: VarStarsParams) -> VarModel:
    a1 = np.zeros((6, 6))
    a2 = np.zeros((6, 6))
    np.fill_diagonal(a1, STAR_SELF_LAG1)
    np.fill_diagonal(a2, STAR_SELF_LAG2)
    for leaf in range(1, 5):
        a1[leaf, 0] = params.hub_out
        if params.structure == "competing":
            a1[leaf, 5] = params.other_arm
        else:
            a1[5, leaf] = params.other_arm
    return VarModel(np.stack([a1, a2]), np.eye(6))


def var_stars_truth(params: VarStarsParams) -> np.ndarray:
    edges = []
    for leaf in range(1, 5):
        if params.hub_out != 0.0:
            edges.append((0, leaf))
        if params.other_arm != 0.0:
            edges.append((leaf, 5))
    return _truth_matrix(6, edges)


def gen_var_stars(params: VarStarsParams) -> tuple[SeriesDataset, np.ndarray]:
    model = var_stars_model(params)
    series = simulate_var(model, params.n, np.random.default_rng([params.seed]))
    return series, var_stars_truth(params)


# ---------------------------------------------------------------------------
# benchmark dispatch (picklable: plain names and parameter mappings)

GENERATORS = ("three-node-static", "three-node-dynamic", "binary10", "var-stars")


def generate_for_benchmark(generator: str, params: Mapping, n: int,
                           seed: int) -> tuple[SymbolDataset | SeriesDataset, np.ndarray]:
    """Generate one dataset + ground-truth adjacency for a benchmark run."""
    if generator == "binary10":
        return gen_binary10(Binary10Params(**params, n=n, seed=seed))
    if generator == "var-stars":
        return gen_var_stars(VarStarsParams(**params, n=n, seed=seed))
    if generator == "three-node-static":
        rng = np.random.default_rng([seed])
        return gen_three_node_static(ThreeNodeStaticParams(**params), n, rng)
    if generator == "three-node-dynamic":
        rng = np.random.default_rng([seed])
        return gen_three_node_dynamic(ThreeNodeDynamicParams(**params), n, rng)
    raise ValueError(f"unknown generator {generator!r}; expected one of {GENERATORS}")
