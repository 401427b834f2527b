"""Dense real square matrices with multiplication-cost accounting.

Matrices are plain ``float64`` numpy arrays of shape ``(n, n)``. The only
operation charged to a :class:`CostLedger` is the matrix-matrix product;
additions, norms and solves are free.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO, Union

import numpy as np

__all__ = [
    "Cost",
    "CostLedger",
    "SingularMatrixError",
    "as_matrix",
    "identity",
    "multiply",
    "add",
    "subtract",
    "scale",
    "add_scaled_identity",
    "frobenius_norm",
    "solve",
    "inverse",
    "householder_matrix",
    "householder_similarity",
    "commutator_residual",
    "read_matrix",
    "write_matrix",
    "format_matrix",
    "parse_matrix",
]

INVERSE_RESIDUAL_CONSTANT = 10.0
"""Constant ``c`` in ``||a M - I||_F <= c * n * eps_mach * ||a||_F * ||M||_F``."""


class Cost(enum.Enum):
    FIXED_POINT = "fixed_point"
    EXP = "exp"


@dataclass
class CostLedger:
    """Counts of matrix-matrix products, split by what they were spent on."""

    fixed_point_muls: int = 0
    exp_muls: int = 0

    @property
    def total(self) -> int:
        return self.fixed_point_muls + self.exp_muls

    def charge(self, category: Cost, count: int = 1) -> None:
        if count < 0:
            raise ValueError("ledger counts never decrease")
        if category is Cost.FIXED_POINT:
            self.fixed_point_muls += count
        elif category is Cost.EXP:
            self.exp_muls += count
        else:
            raise ValueError(f"unknown cost category {category!r}")

    def copy(self) -> "CostLedger":
        return CostLedger(self.fixed_point_muls, self.exp_muls)


class SingularMatrixError(ArithmeticError):
    pass


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a finite square matrix and return a float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("matrix dimension must be positive")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n)


def _check_same(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def multiply(
    a: np.ndarray,
    b: np.ndarray,
    ledger: Optional[CostLedger] = None,
    category: Cost = Cost.FIXED_POINT,
) -> np.ndarray:
    """Matrix product ``a @ b``, charging one multiplication to ``ledger``.

    Passing ``ledger=None`` performs an unaccounted product, used for
    diagnostics that are not part of the algorithm being costed.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same(a, b)
    if ledger is not None:
        ledger.charge(category)
    return a @ b


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    _check_same(a, b)
    return a + b


def subtract(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    _check_same(a, b)
    return a - b


def scale(a: np.ndarray, c: float) -> np.ndarray:
    return float(c) * np.asarray(a, dtype=np.float64)


def add_scaled_identity(a: np.ndarray, c: float) -> np.ndarray:
    """Return ``a + c * I``."""
    out = np.array(a, dtype=np.float64, copy=True)
    out[np.diag_indices_from(out)] += c
    return out


def frobenius_norm(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    # scaled to avoid overflow for large entries
    amax = float(np.max(np.abs(a))) if a.size else 0.0
    if amax == 0.0 or not math.isfinite(amax):
        return amax
    return amax * math.sqrt(float(np.sum((a / amax) ** 2)))


def solve(a: np.ndarray, b: np.ndarray, pivot_floor: float = 1e-300) -> np.ndarray:
    """Solve ``a X = b`` by Gaussian elimination with partial pivoting.

    A pivot is rejected as singular when its magnitude does not exceed
    ``pivot_floor`` times the largest row norm of ``a``.
    """
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    vector_rhs = b.ndim == 1
    rhs = b.reshape(n, -1).copy()
    lu = a.copy()
    threshold = pivot_floor * max(float(np.max(np.linalg.norm(a, axis=1))), 1.0)

    for col in range(n):
        p = col + int(np.argmax(np.abs(lu[col:, col])))
        if abs(lu[p, col]) <= threshold:
            raise SingularMatrixError(f"pivot {lu[p, col]!r} in column {col} below floor")
        if p != col:
            lu[[col, p]] = lu[[p, col]]
            rhs[[col, p]] = rhs[[p, col]]
        factors = lu[col + 1 :, col] / lu[col, col]
        lu[col + 1 :, col:] -= np.outer(factors, lu[col, col:])
        rhs[col + 1 :] -= np.outer(factors, rhs[col])

    x = np.empty_like(rhs)
    for row in range(n - 1, -1, -1):
        x[row] = (rhs[row] - lu[row, row + 1 :] @ x[row + 1 :]) / lu[row, row]
    return x.ravel() if vector_rhs else x


def inverse(a: np.ndarray, pivot_floor: float = 1e-300) -> np.ndarray:
    a = as_matrix(a)
    return solve(a, np.eye(a.shape[0]), pivot_floor=pivot_floor)


def householder_matrix(v) -> np.ndarray:
    """Reflector ``Q = I - 2 v v^T`` for a unit vector ``v``."""
    v = np.asarray(v, dtype=np.float64).ravel()
    if abs(float(v @ v) - 1.0) > 1e-12:
        raise ValueError(f"householder vector must have unit length, |v|^2 = {float(v @ v)!r}")
    return np.eye(v.size) - 2.0 * np.outer(v, v)


def householder_similarity(d, v) -> np.ndarray:
    """Return ``Q^T D Q`` with ``Q = I - 2 v v^T``.

    ``d`` may be a diagonal matrix or the vector of its diagonal entries.
    """
    d = np.asarray(d, dtype=np.float64)
    if d.ndim == 2:
        d = as_matrix(d)
        if np.any(d - np.diag(np.diag(d))):
            raise ValueError("householder_similarity expects a diagonal matrix")
        d = np.diag(d)
    q = householder_matrix(v)
    if q.shape[0] != d.size:
        raise ValueError(f"dimension mismatch: {d.size} vs {q.shape[0]}")
    # Q is symmetric; Q^T diag(d) Q == (Q * d) @ Q
    out = (q * d) @ q
    return 0.5 * (out + out.T)


def commutator_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of ``ab - ba``."""
    a, b = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    _check_same(a, b)
    return frobenius_norm(a @ b - b @ a)


# ---------------------------------------------------------------------------
# text format: '#' comments, a line with n, then n rows of n floats


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty matrix file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from None
    if n <= 0:
        raise ValueError("matrix dimension must be positive")
    rows = lines[1:]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, found {len(rows)}")
    data = []
    for i, row in enumerate(rows):
        fields = row.split()
        if len(fields) != n:
            raise ValueError(f"row {i} has {len(fields)} entries, expected {n}")
        data.append([float(x) for x in fields])
    return as_matrix(data)


def format_matrix(a: np.ndarray, comment: Optional[str] = None) -> str:
    a = as_matrix(a)
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(str(a.shape[0]))
    # repr() gives the shortest string that round-trips exactly
    out.extend(" ".join(repr(float(x)) for x in row) for row in a)
    return "\n".join(out) + "\n"


def read_matrix(source: Union[str, Path, TextIO]) -> np.ndarray:
    if hasattr(source, "read"):
        return parse_matrix(source.read())
    return parse_matrix(Path(source).read_text())


def write_matrix(dest: Union[str, Path, TextIO], a: np.ndarray, comment: Optional[str] = None) -> None:
    text = format_matrix(a, comment)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)
