"""Helpers for dense complex operators (Hermiticity, density-matrix checks)."""
from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def hermitize(a: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian part, (A + A^dag)/2."""
    return 0.5 * (a + a.conj().T)


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.abs(a - a.conj().T).max() <= tol)


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, name: str = "operator") -> None:
    dev = np.abs(a - a.conj().T).max()
    if dev > tol:
        raise ValueError(f"{name} is not Hermitian: max|A - A^dag| = {dev:.3e} > {tol:.0e}")


def require_density_matrix(rho: np.ndarray, *, trace_tol: float = TRACE_TOL,
                           eig_tol: float = POSITIVITY_TOL, name: str = "rho") -> None:
    """Check Hermiticity, unit trace, and positive semidefiniteness (to tolerance)."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {rho.shape}")
    require_hermitian(rho, name=name)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"{name} trace deviates from 1 by {abs(tr - 1.0):.3e} > {trace_tol:.0e}")
    wmin = np.linalg.eigvalsh(hermitize(rho)).min()
    if wmin < -eig_tol:
        raise ValueError(f"{name} has negative eigenvalue {wmin:.3e} < -{eig_tol:.0e}")


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values (nuclear norm)."""
    return float(np.linalg.svd(a, compute_uv=False).sum())
