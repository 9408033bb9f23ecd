"""Linear-Gaussian surrogate transmission model for a retained cache subset.

The retained keys K (c x d) and value-induced output directions U (m x c)
define a channel Y = U K q + eps with q ~ N(mu, Lambda) and
eps ~ N(0, Sigma). `exact_capacity` evaluates the mutual information
between q and Y in closed form; `mc_capacity` estimates the same quantity
by sampling and serves as its independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import SpdFactor, cholesky_factorize, log_det, symmetrize
from .rng import make_rng

LOG_2PI_E = math.log(2.0 * math.pi * math.e)

_MC_BATCHES = 10


def _check_symmetric(name: str, a: np.ndarray) -> None:
    if np.linalg.norm(a - a.T) > 1e-9 * max(1.0, np.linalg.norm(a)):
        raise ValueError(f"{name} must be symmetric")


@dataclass(frozen=True)
class ChannelSpec:
    """Channel parameters: keys (c x d), outputs (m x c), query covariance
    (d x d), noise covariance (m x m), query mean (d,)."""

    keys: np.ndarray
    outputs: np.ndarray
    query_cov: np.ndarray
    noise_cov: np.ndarray
    query_mean: np.ndarray

    def __post_init__(self):
        for name in ("keys", "outputs", "query_cov", "noise_cov", "query_mean"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        c, d = self.keys.shape
        m, c2 = self.outputs.shape
        if c2 != c:
            raise DimensionMismatch(f"outputs have {c2} columns, keys have {c} rows")
        if self.query_cov.shape != (d, d):
            raise DimensionMismatch(f"query_cov shape {self.query_cov.shape}, expected ({d}, {d})")
        if self.noise_cov.shape != (m, m):
            raise DimensionMismatch(f"noise_cov shape {self.noise_cov.shape}, expected ({m}, {m})")
        if self.query_mean.shape != (d,):
            raise DimensionMismatch(f"query_mean shape {self.query_mean.shape}, expected ({d},)")
        _check_symmetric("query_cov", self.query_cov)
        _check_symmetric("noise_cov", self.noise_cov)

    @property
    def effective_matrix(self) -> np.ndarray:
        """The m x d map applied to the query: outputs @ keys."""
        return self.outputs @ self.keys


@dataclass(frozen=True)
class McEstimate:
    """Sampled capacity estimate in nats with a batch-means standard error."""

    value: float
    standard_error: float
    samples: int


def exact_capacity(spec: ChannelSpec) -> float:
    """Closed-form capacity 0.5 * log det(I + inv(Sigma) U K Lambda K.T U.T).

    Evaluated as the entropy difference
    0.5 * (log det(Sigma + M Lambda M.T) - log det(Sigma)) with M = U K,
    which only requires factoring SPD matrices. The query mean never enters,
    so the result is invariant to it by construction.
    """
    m = spec.effective_matrix
    signal = symmetrize(m @ spec.query_cov @ m.T)
    noise_factor = cholesky_factorize(spec.noise_cov, 0.0)
    total_factor = cholesky_factorize(spec.noise_cov + signal, 0.0)
    return max(0.0, 0.5 * (log_det(total_factor) - log_det(noise_factor)))


def _psd_sqrt(cov: np.ndarray) -> np.ndarray:
    """Square root of a PSD matrix via eigendecomposition, tolerant of
    singular covariances (e.g. a zero query covariance)."""
    vals, vecs = np.linalg.eigh(symmetrize(cov))
    return vecs * np.sqrt(np.clip(vals, 0.0, None))


def _covariance_logdet(samples: np.ndarray) -> float:
    cov = np.cov(samples.T, ddof=1)
    cov = np.atleast_2d(cov)
    return log_det(cholesky_factorize(symmetrize(cov), 0.0))


def mc_capacity(spec: ChannelSpec, samples: int, seed: int) -> McEstimate:
    """Monte-Carlo capacity oracle.

    Draws q and eps, forms Y = M q + eps, and plugs the empirical covariance
    of Y into the Gaussian entropy difference
    0.5 * (log det cov(Y) - log det Sigma). Y is exactly Gaussian under the
    surrogate, so the plug-in is unbiased up to covariance-estimation error.
    Samples are split into fixed batches with seeds derived per batch, so
    the estimate is reproducible and independent of any thread partitioning;
    the standard error is the batch-means error.
    """
    if samples < 1000:
        raise ValueError("mc_capacity needs at least 1000 samples")
    m = spec.effective_matrix
    out_dim = m.shape[0]
    query_sqrt = _psd_sqrt(spec.query_cov)
    noise_factor = cholesky_factorize(spec.noise_cov, 0.0)
    noise_lower = noise_factor.lower
    noise_logdet = log_det(noise_factor)

    base = samples // _MC_BATCHES
    counts = [base + (1 if b < samples % _MC_BATCHES else 0) for b in range(_MC_BATCHES)]
    estimates = []
    for batch, count in enumerate(counts):
        rng = make_rng(seed, batch)
        q = spec.query_mean + rng.standard_normal((count, spec.keys.shape[1])) @ query_sqrt.T
        eps = rng.standard_normal((count, out_dim)) @ noise_lower.T
        y = q @ m.T + eps
        estimates.append(0.5 * (_covariance_logdet(y) - noise_logdet))
    estimates = np.asarray(estimates)
    weights = np.asarray(counts, dtype=np.float64) / samples
    value = float(estimates @ weights)
    stderr = float(np.std(estimates, ddof=1) / math.sqrt(_MC_BATCHES))
    return McEstimate(value=value, standard_error=stderr, samples=samples)


def small_noise_capacity(a, query_var: float, noise_var: float) -> float:
    """Spectral capacity under isotropic covariances.

    For query covariance query_var * I and noise covariance noise_var * I,
    capacity = 0.5 * sum_j log(1 + (query_var / noise_var) * lambda_j) over
    the eigenvalues lambda_j of a @ a.T. Only directions with positive
    eigenvalues contribute, which is what makes redundant channel rows
    worthless.
    """
    if query_var <= 0.0 or noise_var <= 0.0:
        raise ValueError("query_var and noise_var must be positive")
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0:
        return 0.0
    lam = np.clip(np.linalg.eigvalsh(symmetrize(a @ a.T)), 0.0, None)
    return float(0.5 * np.sum(np.log1p((query_var / noise_var) * lam)))


def gaussian_entropy(cov_factor: SpdFactor) -> float:
    """Differential entropy 0.5 * (dim * log(2 pi e) + log det cov) in nats."""
    return 0.5 * (cov_factor.dim * LOG_2PI_E + log_det(cov_factor))
