"""Quantification and significance testing of high-order (redundant or
synergistic) interactions between every pair of units in a network of observed
variables or time series, with functional structure reconstruction."""

from .data import SeriesDataset, SymbolDataset
from .discrete import (
    ProbabilityTable,
    conditional_mutual_information,
    entropy,
    joint_pmf,
    mutual_information,
)
from .network import (
    NetworkResult,
    analyze_dynamic,
    analyze_static,
    benchmark,
    confusion_counts,
    reconstruct,
    standard_scenario,
)
from .surrogates import (
    LinkResult,
    SurrogateConfig,
    classify_link,
    conditional_shuffle_surrogate,
    iaaft_surrogate,
    percentile_test,
    shuffle_surrogate,
)
from .varmodel import (
    CovSequence,
    RestrictedModel,
    VarModel,
    cmir,
    entropy_rate,
    fit_var,
    mir,
    model_covariances,
    pairwise_rate_matrices,
    restricted_model,
    restricted_residual_cov,
    simulate_var,
)

__version__ = "0.1.0"

__all__ = [
    "SeriesDataset", "SymbolDataset", "ProbabilityTable",
    "conditional_mutual_information", "entropy", "joint_pmf", "mutual_information",
    "NetworkResult", "analyze_dynamic", "analyze_static", "benchmark",
    "confusion_counts", "reconstruct", "standard_scenario",
    "LinkResult", "SurrogateConfig", "classify_link", "conditional_shuffle_surrogate",
    "iaaft_surrogate", "percentile_test", "shuffle_surrogate",
    "CovSequence", "RestrictedModel", "VarModel", "cmir", "entropy_rate", "fit_var",
    "mir", "model_covariances", "pairwise_rate_matrices", "restricted_model",
    "restricted_residual_cov", "simulate_var",
]
