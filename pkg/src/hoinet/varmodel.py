"""Linear-Gaussian dynamic analysis.

Vector autoregressions identified by least squares with Akaike order
selection, stationary covariance sequences from the companion-form Lyapunov
equation, restricted (subset) models solved from block-Toeplitz Yule-Walker
systems, and the Gaussian entropy-rate formulas that turn residual
covariances into mutual information rates. All rates are in nats per sample.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .data import SeriesDataset
from .errors import CovarianceError, IdentificationError, NonStationaryModelError

LOG_2PIE = math.log(2.0 * math.pi * math.e)

# Lyapunov doubling stops when the max-abs increment falls below this.
LYAPUNOV_TOL = 1e-12
_SPD_MIN_EIG = -1e-10
_SPD_MIN_DET = 1e-300
_NEG_RATE_TOL = 1e-9


def companion_matrix(coeffs: np.ndarray) -> np.ndarray:
    """Stack lag matrices [A_1 ... A_p] over a shifted identity block."""
    p, m, _ = coeffs.shape
    top = np.hstack(list(coeffs))
    if p == 1:
        return top
    eye = np.eye(m * (p - 1))
    return np.vstack([top, np.hstack([eye, np.zeros((m * (p - 1), m))])])


def spectral_radius(coeffs: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvals(companion_matrix(coeffs))).max())


@dataclass(frozen=True)
class VarModel:
    """VAR(p) parameters: S_n = sum_k A_k S_{n-k} + U_n, U_n ~ (0, sigma_u).

    ``coeffs[k-1][i, j]`` is the effect of channel j at lag k on channel i.
    The process is taken as zero-mean; identification removes the sample mean.
    """

    coeffs: np.ndarray
    sigma_u: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        sigma = np.asarray(self.sigma_u, dtype=np.float64)
        if coeffs.ndim != 3 or coeffs.shape[1] != coeffs.shape[2]:
            raise ValueError("coeffs must have shape (p, M, M)")
        m = coeffs.shape[1]
        if sigma.shape != (m, m):
            raise ValueError("sigma_u must be M x M")
        if np.abs(sigma - sigma.T).max() > 1e-10:
            raise ValueError("sigma_u must be symmetric within 1e-10")
        sigma = 0.5 * (sigma + sigma.T)
        if np.linalg.eigvalsh(sigma).min() <= 0.0:
            raise ValueError("sigma_u must be positive definite")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "sigma_u", sigma)

    @property
    def m(self) -> int:
        return self.coeffs.shape[1]

    @property
    def p(self) -> int:
        return self.coeffs.shape[0]

    @cached_property
    def spectral_radius(self) -> float:
        return spectral_radius(self.coeffs)

    @property
    def is_stable(self) -> bool:
        return self.spectral_radius < 1.0


@dataclass(frozen=True)
class CovSequence:
    """Stationary covariance sequence Gamma_0 ... Gamma_q of an M-variate process.

    ``lags[k] = E[S_n S_{n-k}^T]``; negative lags are ``lags[k].T`` and are
    exposed through :meth:`lag`.
    """

    lags: np.ndarray  # (q+1, M, M)

    @property
    def q(self) -> int:
        return self.lags.shape[0] - 1

    @property
    def m(self) -> int:
        return self.lags.shape[1]

    def lag(self, k: int) -> np.ndarray:
        return self.lags[k] if k >= 0 else self.lags[-k].T


@dataclass(frozen=True)
class RestrictedModel:
    """Order-q autoregression of a channel subset with its residual covariance."""

    subset: tuple[int, ...]
    q: int
    coeffs: np.ndarray        # (q, d, d)
    residual_cov: np.ndarray  # (d, d), symmetric positive definite


def _guard_spd(mat: np.ndarray, context: str) -> np.ndarray:
    """Symmetrize and guard positive definiteness of a residual covariance.

    Finite-q truncation can leave marginal matrices: a determinant at or below
    1e-300 or an eigenvalue below -1e-10 triggers one round of diagonal jitter
    (1e-10 * trace / dim); persistent failure is an error.
    """
    sym = 0.5 * (mat + mat.T)
    for attempt in (0, 1):
        eig = np.linalg.eigvalsh(sym)
        if eig[0] > 0.0 and eig[0] > _SPD_MIN_EIG:
            if float(np.log(eig).sum()) > math.log(_SPD_MIN_DET):
                return sym
        if attempt == 0:
            jitter = 1e-10 * np.trace(sym) / sym.shape[0]
            sym = sym + jitter * np.eye(sym.shape[0])
    raise CovarianceError(f"{context}: residual covariance is not positive definite "
                          f"(eigenvalues {np.linalg.eigvalsh(sym)})")


def _logdet(mat: np.ndarray, context: str) -> float:
    sign, logdet = np.linalg.slogdet(mat)
    if sign <= 0.0:
        raise CovarianceError(f"{context}: non-positive determinant")
    return float(logdet)


def fit_var(series: SeriesDataset, p_max: int = 20) -> VarModel:
    """Least-squares identification with AIC order selection over 1..p_max.

    The sample mean of each channel is removed and no intercept is fitted.
    Candidate orders are compared on the common sample (rows p_max..N-1) with
    AIC(p) = ln det Sigma_hat(p) + 2 p M^2 / N; the winner is refitted on its
    maximal sample. A fitted model with companion spectral radius >= 1 is
    returned flagged (``is_stable``) after a warning.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    x = series.data - series.data.mean(axis=0)
    n, m = x.shape
    if n - p_max <= m * p_max + 1:
        raise IdentificationError(
            f"series too short for identification: need N - p_max > M*p_max + 1, "
            f"got N={n}, M={m}, p_max={p_max}")

    def gram(p_top):
        rows = n - p_top
        lagged = np.empty((rows, m * p_top))
        for k in range(1, p_top + 1):
            lagged[:, (k - 1) * m:k * m] = x[p_top - k:n - k]
        y = x[p_top:]
        return lagged.T @ lagged, lagged.T @ y, y.T @ y, rows

    def solve_order(gxx, gxy, gyy, rows, p):
        kdim = m * p
        gxx_p = gxx[:kdim, :kdim]
        try:
            np.linalg.cholesky(gxx_p)
        except np.linalg.LinAlgError:
            raise IdentificationError(
                f"rank-deficient regressor matrix at order p={p}") from None
        b = np.linalg.solve(gxx_p, gxy[:kdim])
        ee = gyy - gxy[:kdim].T @ b
        sigma = 0.5 * (ee + ee.T) / rows
        return b, sigma

    gxx, gxy, gyy, rows = gram(p_max)
    best_p, best_aic = 1, math.inf
    for p in range(1, p_max + 1):
        _, sigma = solve_order(gxx, gxy, gyy, rows, p)
        sign, logdet = np.linalg.slogdet(sigma)
        if sign <= 0:
            raise IdentificationError(
                f"non-positive-definite residual covariance at order p={p}")
        aic = logdet + 2.0 * p * m * m / n
        if aic < best_aic:
            best_p, best_aic = p, aic

    gxx, gxy, gyy, rows = gram(best_p)
    b, sigma = solve_order(gxx, gxy, gyy, rows, best_p)
    if np.linalg.eigvalsh(sigma).min() <= 0.0:
        raise IdentificationError("non-positive-definite residual covariance")
    coeffs = np.stack([b[(k - 1) * m:k * m].T for k in range(1, best_p + 1)])
    model = VarModel(coeffs, sigma)
    if not model.is_stable:
        warnings.warn(
            f"fitted VAR({best_p}) is non-stationary "
            f"(spectral radius {model.spectral_radius:.4f})", RuntimeWarning)
    return model


def simulate_var(model: VarModel, n: int, rng: np.random.Generator,
                 burn: int | None = None) -> SeriesDataset:
    """Draw n samples of the stationary process after a burn-in transient."""
    if not model.is_stable:
        raise NonStationaryModelError(
            f"cannot simulate: spectral radius {model.spectral_radius:.4f} >= 1")
    m, p = model.m, model.p
    if burn is None:
        burn = max(100, 20 * p)
    chol = np.linalg.cholesky(model.sigma_u)
    u = rng.standard_normal((burn + n, m)) @ chol.T
    s = np.zeros((p + burn + n, m))
    coeffs_t = [a.T for a in model.coeffs]
    for t in range(p, p + burn + n):
        acc = u[t - p]
        for k in range(p):
            acc = acc + s[t - 1 - k] @ coeffs_t[k]
        s[t] = acc
    return SeriesDataset(s[p + burn:])


def model_covariances(model: VarModel, q: int) -> CovSequence:
    """Covariance sequence Gamma_0..Gamma_q of the stationary VAR process.

    Solves the companion-form discrete Lyapunov equation by iterative doubling
    and extends beyond lag p-1 with Gamma_k = sum_j A_j Gamma_{k-j}.
    """
    if q < model.p:
        raise ValueError(f"need q >= p, got q={q}, p={model.p}")
    if not model.is_stable:
        raise NonStationaryModelError(
            f"spectral radius {model.spectral_radius:.4f} >= 1; "
            "stationary covariances do not exist")
    m, p = model.m, model.p
    abar = companion_matrix(model.coeffs)
    qbar = np.zeros_like(abar)
    qbar[:m, :m] = model.sigma_u

    x = qbar.copy()
    a = abar.copy()
    for _ in range(100):
        delta = a @ x @ a.T
        x = x + delta
        if np.abs(delta).max() < LYAPUNOV_TOL:
            break
        a = a @ a
    else:
        raise CovarianceError("Lyapunov doubling did not converge")

    lags = np.empty((q + 1, m, m))
    lags[0] = 0.5 * (x[:m, :m] + x[:m, :m].T)
    for k in range(1, min(p, q + 1)):
        lags[k] = x[:m, k * m:(k + 1) * m]
    for k in range(p, q + 1):
        acc = np.zeros((m, m))
        for j in range(1, p + 1):
            gam = lags[k - j] if k - j >= 0 else lags[j - k].T
            acc += model.coeffs[j - 1] @ gam
        lags[k] = acc
    return CovSequence(lags)


def _validate_subset(subset: Sequence[int], m: int) -> tuple[int, ...]:
    subset = tuple(int(c) for c in subset)
    if not subset:
        raise ValueError("subset must be non-empty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"duplicate channels in subset {subset}")
    if any(not 0 <= c < m for c in subset):
        raise ValueError(f"subset {subset} out of range for M={m}")
    return subset


def restricted_model(cov: CovSequence, subset: Sequence[int], q: int) -> RestrictedModel:
    """Order-q autoregression of a channel subset, derived from the covariance
    sequence of the full process.

    The coefficients solve the block-Toeplitz Yule-Walker system built from the
    subset's auto/cross covariances; the residual covariance is
    Gamma^s_0 - sum_k A^s_k (Gamma^s_k)^T.
    """
    subset = _validate_subset(subset, cov.m)
    if q < 1:
        raise ValueError("restricted order q must be >= 1")
    if cov.q < q:
        raise ValueError(f"covariance sequence only holds lags up to {cov.q} < q={q}")
    d = len(subset)
    idx = np.ix_(subset, subset)
    gam = np.stack([cov.lags[k][idx] for k in range(q + 1)])

    # block (r, c) of the Toeplitz system is Gamma^s_{c-r} (transposed when negative)
    delta = np.arange(q)[None, :] - np.arange(q)[:, None]
    blocks = gam[np.abs(delta)]
    neg = delta < 0
    blocks[neg] = np.transpose(blocks[neg], (0, 2, 1))
    big = blocks.transpose(0, 2, 1, 3).reshape(d * q, d * q)
    rhs = np.hstack(list(gam[1:q + 1]))
    try:
        coeffs_flat = np.linalg.solve(big, rhs.T).T
    except np.linalg.LinAlgError:
        raise CovarianceError(
            f"singular block-Toeplitz system for subset {subset}: deterministic "
            "linear dependence among channels") from None
    coeffs = np.stack([coeffs_flat[:, k * d:(k + 1) * d] for k in range(q)])
    resid = gam[0] - np.einsum("kij,klj->il", coeffs, gam[1:q + 1])
    resid = _guard_spd(resid, f"restricted model for subset {subset}")
    return RestrictedModel(subset, q, coeffs, resid)


def restricted_residual_cov(cov: CovSequence, subset: Sequence[int], q: int) -> np.ndarray:
    return restricted_model(cov, subset, q).residual_cov


def entropy_rate(residual_cov: np.ndarray, dim: int | None = None) -> float:
    """Gaussian entropy rate 0.5 log((2 pi e)^dim det(residual_cov)), in nats/sample."""
    mat = np.atleast_2d(np.asarray(residual_cov, dtype=np.float64))
    if dim is None:
        dim = mat.shape[0]
    if mat.shape != (dim, dim):
        raise ValueError(f"residual covariance must be {dim} x {dim}")
    return 0.5 * (dim * LOG_2PIE + _logdet(mat, "entropy rate"))


def _clip_rate(value: float, context: str) -> float:
    if value < 0.0:
        if value < -_NEG_RATE_TOL:
            raise CovarianceError(f"{context} is negative beyond tolerance: {value}")
        return 0.0
    return value


def _pair_rate(cov: CovSequence, sigma_logdets: dict, i: int, j: int, q: int) -> float:
    def logdet_of(subset):
        key = tuple(sorted(subset))
        if key not in sigma_logdets:
            sigma_logdets[key] = _logdet(
                restricted_residual_cov(cov, key, q), f"subset {key}")
        return sigma_logdets[key]

    return 0.5 * (logdet_of((i,)) + logdet_of((j,)) - logdet_of((i, j)))


def mir(model: VarModel, i: int, j: int, q: int = 20) -> float:
    """Mutual information rate between channels i and j of a stationary VAR."""
    if i == j:
        raise ValueError("mutual information rate of a channel with itself is not a link")
    cov = model_covariances(model, q)
    return _clip_rate(_pair_rate(cov, {}, i, j, q), f"MIR({i};{j})")


def pairwise_rate_matrices(model: VarModel, q: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """MIR and cMIR (conditioned on all remaining channels) for every pair.

    One covariance propagation and one restricted solve per distinct subset
    serve all pairs; returns symmetric matrices with NaN diagonals.
    """
    m = model.m
    cov = model_covariances(model, q)
    cache: dict = {}

    def logdet_of(subset):
        key = tuple(sorted(subset))
        if key not in cache:
            cache[key] = _logdet(restricted_residual_cov(cov, key, q), f"subset {key}")
        return cache[key]

    logdet_full = _logdet(model.sigma_u, "full innovation covariance")
    mir_mat = np.full((m, m), np.nan)
    cmir_mat = np.full((m, m), np.nan)
    for i in range(m):
        for j in range(i + 1, m):
            zset = tuple(k for k in range(m) if k not in (i, j))
            val = 0.5 * (logdet_of((i,)) + logdet_of((j,)) - logdet_of((i, j)))
            mir_mat[i, j] = mir_mat[j, i] = _clip_rate(val, f"MIR({i};{j})")
            if not zset:
                cmir_mat[i, j] = cmir_mat[j, i] = mir_mat[i, j]
                continue
            i_x_yz = 0.5 * (logdet_of((i,)) + logdet_of((j,) + zset) - logdet_full)
            i_x_z = 0.5 * (logdet_of((i,)) + logdet_of(zset) - logdet_of((i,) + zset))
            cmir_mat[i, j] = cmir_mat[j, i] = _clip_rate(
                i_x_yz - i_x_z, f"cMIR({i};{j}|rest)")
    return mir_mat, cmir_mat


def cmir(model: VarModel, i: int, j: int, zset: Sequence[int], q: int = 20) -> float:
    """Conditional mutual information rate I(i;j | zset) of a stationary VAR.

    Computed as I(i; {j} u Z) - I(i; Z), each term from restricted-model
    residual covariances; the joint entropy rate of the full process enters
    through the innovation covariance of the full model.
    """
    zset = tuple(int(c) for c in zset)
    if i == j or i in zset or j in zset:
        raise ValueError(f"channels i={i}, j={j} must be distinct and outside zset={zset}")
    cov = model_covariances(model, q)
    cache: dict = {}
    if not zset:
        return _clip_rate(_pair_rate(cov, cache, i, j, q), f"MIR({i};{j})")
    if set((i, j) + zset) == set(range(model.m)):
        logdet_full = _logdet(model.sigma_u, "full innovation covariance")
    else:
        full = tuple(sorted((i, j) + zset))
        logdet_full = _logdet(restricted_residual_cov(cov, full, q), f"subset {full}")

    def logdet_of(subset):
        key = tuple(sorted(subset))
        if key not in cache:
            cache[key] = _logdet(restricted_residual_cov(cov, key, q), f"subset {key}")
        return cache[key]

    i_x_yz = 0.5 * (logdet_of((i,)) + logdet_of((j,) + zset) - logdet_full)
    i_x_z = 0.5 * (logdet_of((i,)) + logdet_of(zset) - logdet_of((i,) + zset))
    return _clip_rate(i_x_yz - i_x_z, f"cMIR({i};{j}|{zset})")
