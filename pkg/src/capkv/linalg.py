"""Dense symmetric-positive-definite kernels.

Matrices and vectors are plain float64 numpy arrays (row major). `SpdFactor`
wraps the lower Cholesky factor L of an SPD matrix A = L @ L.T and is the
workhorse for log-determinants, solves, quadratic forms, and rank-one
determinant updates. Everything here is a pure function; factors are
immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, NotPositiveDefinite

# Relative tolerance for accepting an input matrix as symmetric.
SYMMETRY_RTOL = 1e-9

# Escalation ladder used by robust_factorize when a plain factorization
# fails: near-duplicate rows make Gram matrices numerically singular.
JITTER_LADDER = (1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3)


def symmetrize(a: np.ndarray) -> np.ndarray:
    """0.5 * (A + A.T); kills round-off asymmetry in products."""
    return 0.5 * (a + a.T)


def _as_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


@dataclass(frozen=True)
class SpdFactor:
    """Lower Cholesky factor of a symmetric positive-definite matrix."""

    dim: int
    lower: np.ndarray

    def __post_init__(self):
        if self.lower.shape != (self.dim, self.dim):
            raise DimensionMismatch("factor shape disagrees with dim")
        if self.dim and not np.all(np.diagonal(self.lower) > 0.0):
            raise NotPositiveDefinite("factor diagonal must be strictly positive")

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T


def cholesky_factorize(a, jitter: float = 0.0) -> SpdFactor:
    """Factor (a + jitter * I) as L @ L.T.

    `a` must be square and symmetric within SYMMETRY_RTOL. Raises
    NotPositiveDefinite when a pivot is non-positive even after the jitter.
    """
    a = _as_square(a)
    if jitter < 0.0:
        raise ValueError("jitter must be non-negative")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > SYMMETRY_RTOL * max(1.0, scale):
        raise ValueError("matrix is not symmetric within tolerance")
    target = symmetrize(a)
    if jitter:
        target = target + jitter * np.eye(a.shape[0])
    try:
        lower = np.linalg.cholesky(target)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"factorization failed at jitter={jitter:g}") from exc
    return SpdFactor(dim=a.shape[0], lower=lower)


def robust_factorize(a) -> SpdFactor:
    """Factor `a`, escalating jitter through JITTER_LADDER on failure.

    The first attempt uses no jitter so well-posed inputs factor exactly;
    the ladder tops out at 1e-3 before NotPositiveDefinite propagates.
    """
    try:
        return cholesky_factorize(a, 0.0)
    except NotPositiveDefinite:
        pass
    for jitter in JITTER_LADDER[:-1]:
        try:
            return cholesky_factorize(a, jitter)
        except NotPositiveDefinite:
            continue
    return cholesky_factorize(a, JITTER_LADDER[-1])


def log_det(f: SpdFactor) -> float:
    """Natural-log determinant of the factored matrix: 2 * sum(log diag L)."""
    return 2.0 * float(np.sum(np.log(np.diagonal(f.lower))))


def spd_solve(f: SpdFactor, b) -> np.ndarray:
    """Solve A x = b via two triangular solves."""
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != f.dim:
        raise DimensionMismatch(f"rhs has dim {b.shape[0]}, factor has dim {f.dim}")
    if f.dim == 0:
        return b.copy()
    y = solve_triangular(f.lower, b, lower=True)
    return solve_triangular(f.lower.T, y, lower=False)


def quadratic_form(f: SpdFactor, u) -> float:
    """u.T @ inv(A) @ u, computed as ||inv(L) u||^2 for stability."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (f.dim,):
        raise DimensionMismatch(f"vector has shape {u.shape}, factor has dim {f.dim}")
    if f.dim == 0:
        return 0.0
    x = solve_triangular(f.lower, u, lower=True)
    return float(x @ x)


def rank_one_logdet_gain(f: SpdFactor, u, w: float) -> float:
    """Exact gain log det(A + w u u.T) - log det(A) = log(1 + w u.T inv(A) u).

    The first-order score w * u.T inv(A) u upper-bounds this exact value
    (log(1 + x) <= x), which is what makes leverage scores optimistic.
    """
    if w < 0.0:
        raise ValueError("rank-one weight must be non-negative")
    return math.log1p(w * quadratic_form(f, u))


def gram(m) -> np.ndarray:
    """m @ m.T, symmetrized; PSD by construction."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    return symmetrize(m @ m.T)


def logdet_eye_plus_gram(m) -> float:
    """log det(I + m @ m.T), formed in whichever Gram orientation is smaller.

    det(I + M M.T) = det(I + M.T M), so the cost is bounded by min(rows,
    cols) cubed regardless of which side is long.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0.0
    side = m if rows <= cols else m.T
    g = gram(side)
    return log_det(robust_factorize(np.eye(g.shape[0]) + g))
