"""Reference matrix functions used to check the fixed-point solver.

Nothing here touches a cost ledger or shares code with the solver path:
the symmetric functions go through a self-contained cyclic Jacobi
eigensolver, and the near-identity logarithm through its power series.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dense import as_matrix

__all__ = [
    "EigenDecomposition",
    "JacobiConvergenceError",
    "jacobi_eigendecomposition",
    "logm_oracle",
    "expm_oracle",
    "SeriesLog",
    "taylor_log_series",
]

MAX_SWEEPS = 50
OFF_DIAGONAL_TOL = 1e-14
SYMMETRY_TOL = 1e-12


class JacobiConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns

    def apply(self, fn) -> np.ndarray:
        """``V diag(fn(eigenvalues)) V^T``."""
        v = self.eigenvectors
        return (v * fn(self.eigenvalues)) @ v.T


def _off(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigendecomposition(a) -> EigenDecomposition:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius mass is at most
    ``1e-14 * ||a||_F``; more than 50 sweeps raises
    :class:`JacobiConvergenceError`.
    """
    a = as_matrix(a)
    norm_a = float(np.linalg.norm(a))
    if np.linalg.norm(a - a.T) > SYMMETRY_TOL * norm_a:
        raise ValueError("jacobi_eigendecomposition requires a symmetric matrix")
    n = a.shape[0]
    work = 0.5 * (a + a.T)
    v = np.eye(n)
    tol = OFF_DIAGONAL_TOL * norm_a

    for _ in range(MAX_SWEEPS + 1):
        if _off(work) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = work[p, q]
                if apq == 0.0:
                    continue
                tau = (work[q, q] - work[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                idx = [p, q]
                work[:, idx] = work[:, idx] @ rot
                work[idx, :] = rot.T @ work[idx, :]
                work[p, q] = work[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    else:
        raise JacobiConvergenceError(f"off-diagonal mass {_off(work):.3e} after {MAX_SWEEPS} sweeps")

    lam = np.diag(work).copy()
    order = np.argsort(lam, kind="stable")
    return EigenDecomposition(lam[order], v[:, order])


def logm_oracle(a) -> np.ndarray:
    """Principal logarithm of a symmetric positive definite matrix."""
    eig = jacobi_eigendecomposition(a)
    if eig.eigenvalues[0] <= 0.0:
        raise ValueError(f"matrix has a non-positive eigenvalue {eig.eigenvalues[0]!r}")
    return eig.apply(np.log)


def expm_oracle(a) -> np.ndarray:
    """Exponential of a symmetric matrix via its eigen-decomposition."""
    return jacobi_eigendecomposition(a).apply(np.exp)


@dataclass(frozen=True)
class SeriesLog:
    x: np.ndarray
    in_domain: bool  # ||I - a||_F < 1, sufficient for convergence


def taylor_log_series(a, terms: int) -> SeriesLog:
    """``ln a = -sum_{n=1}^{terms} (I - a)^n / n``, truncated."""
    a = as_matrix(a)
    if terms < 1:
        raise ValueError("terms must be positive")
    e = np.eye(a.shape[0]) - a
    in_domain = float(np.linalg.norm(e)) < 1.0
    if not in_domain:
        warnings.warn("||I - a||_F >= 1: the log series may not converge", RuntimeWarning, stacklevel=2)
    power = e.copy()
    total = -power
    for n in range(2, terms + 1):
        power = power @ e
        total -= power / n
    return SeriesLog(total, in_domain)
