"""Dense complex matrix kernels used by beamforming and SINR evaluation.

Every matrix in the simulator is tiny (at most 8x8), so these routines
favor explicit conditioning checks and numerical robustness over speed.
All functions are pure: no shared state, same inputs give bit-identical
outputs.
"""

from __future__ import annotations

import numpy as np

# Reciprocal-condition estimate below which a fading draw counts as
# degenerate and must be resampled by the caller.  i.i.d. Rayleigh draws
# essentially never trip this.
RCOND_THRESHOLD = 1e-10

HERMITIAN_TOL = 1e-8


class RankDeficientError(ValueError):
    """Matrix is numerically rank deficient; the fading draw should be resampled."""


class NotPositiveDefiniteError(ValueError):
    """Matrix that must be positive definite is not."""


def pseudo_inverse(a: np.ndarray, rcond: float = RCOND_THRESHOLD) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a tall matrix with full column rank.

    For a of shape (m, k), k <= m, returns the (k, m) matrix A+ with
    A+ @ a = I_k up to rounding.  Raises RankDeficientError when the
    smallest singular value falls below ``rcond`` times the largest.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] < a.shape[1]:
        raise ValueError(f"expected a tall (m >= k) matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    if s[-1] <= rcond * s[0]:
        raise RankDeficientError(
            f"singular value ratio {s[-1] / max(s[0], np.finfo(float).tiny):.3e} "
            f"below rcond {rcond:.1e}")
    return (vh.conj().T / s) @ u.conj().T


def hermitian_solve(s: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve s @ x = b for Hermitian positive definite s.

    The positive-definiteness check runs through a Cholesky factorization;
    a failure raises NotPositiveDefiniteError (it signals a malformed
    covariance, which should be impossible for identity-plus-PSD inputs).
    """
    s = np.asarray(s, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    asym = np.linalg.norm(s - s.conj().T)
    if asym > HERMITIAN_TOL * max(np.linalg.norm(s), 1.0):
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    try:
        np.linalg.cholesky(s)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc
    return np.linalg.solve(s, b)


def rank_one_update(s: np.ndarray, a: np.ndarray, c: float) -> np.ndarray:
    """Return s + c * a a^H, symmetrized so the result is exactly Hermitian."""
    s = np.asarray(s, dtype=complex)
    a = np.asarray(a, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    if a.shape != (s.shape[0],):
        raise ValueError(f"vector shape {a.shape} does not match matrix {s.shape}")
    if c < 0:
        raise ValueError("scale must be nonnegative")
    r = s + c * np.outer(a, a.conj())
    return 0.5 * (r + r.conj().T)
