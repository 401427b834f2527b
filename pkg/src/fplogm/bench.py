"""Benchmark harness: random SPD test matrices, threshold sweeps, statistics.

Each test matrix is ``Q^T diag(lam) Q`` with a random Householder reflector
``Q`` and eigenvalues drawn from a uniform or truncated exponential law on
``[1e-8, 1]``. The random stream of a sample depends only on
``(master_seed, dim, sample_index)``, so the same matrix is reused across
the whole threshold sweep and results do not depend on execution order.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import norm

from .dense import CostLedger, householder_similarity
from .logm import FixedPointConfig, Init, LogmDivergenceError, error_estimate, fixed_point_logm, refine

__all__ = [
    "Distribution",
    "EigenvalueDistribution",
    "BenchConfig",
    "SampleRecord",
    "SummaryRow",
    "sample_stream",
    "sample_spectrum",
    "build_test_matrix",
    "run_sample",
    "run_experiment",
    "summarize",
    "median_ci",
    "write_records_csv",
    "write_summary_csv",
    "RECORD_HEADER",
    "SUMMARY_HEADER",
]

RECORD_HEADER = ["dim", "eps", "sample", "converged", "iterations", "fp_muls", "exp_muls", "total_muls", "error", "error_refined"]
SUMMARY_HEADER = ["dim", "eps", "mean_total", "std_total", "mean_fp", "std_fp", "median_err", "ci_lo", "ci_hi", "conv_rate"]

REFINE_EPS = 1e-16


class Distribution(str, enum.Enum):
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class EigenvalueDistribution:
    kind: Distribution = Distribution.UNIFORM
    interval: Tuple[float, float] = (1e-8, 1.0)
    rate: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Distribution(self.kind))
        lo, hi = self.interval
        if not 0.0 <= lo < hi:
            raise ValueError(f"interval must satisfy 0 <= a < b, got {self.interval}")
        if self.rate <= 0.0:
            raise ValueError("rate must be positive")

    def inverse_cdf(self, u):
        """Map uniform variates in [0, 1) onto the distribution."""
        lo, hi = self.interval
        u = np.asarray(u, dtype=np.float64)
        if self.kind is Distribution.UNIFORM:
            x = lo + u * (hi - lo)
        else:
            mass = -np.expm1(-self.rate * (hi - lo))
            x = lo - np.log1p(-u * mass) / self.rate
        return np.clip(x, lo, hi)


@dataclass
class BenchConfig:
    dims: Sequence[int] = (4, 8, 16)
    samples: int = 100
    eps_values: Sequence[float] = (1e-2, 1e-4, 1e-6, 1e-8, 1e-10)
    distribution: EigenvalueDistribution = field(default_factory=EigenvalueDistribution)
    master_seed: int = 0
    refine: bool = False

    def __post_init__(self):
        if not self.dims or not self.eps_values:
            raise ValueError("dims and eps_values must be non-empty")
        if any(d < 1 for d in self.dims):
            raise ValueError("dims must be positive")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if any(not 0.0 < e < 1.0 for e in self.eps_values):
            raise ValueError("every eps must lie in (0, 1)")


@dataclass(frozen=True)
class SampleRecord:
    dim: int
    eps: float
    sample_index: int
    converged: bool
    iterations: int
    fixed_point_muls: int
    exp_muls: int
    total_muls: int
    error_estimate: float
    error_after_refine: Optional[float] = None


@dataclass(frozen=True)
class SummaryRow:
    dim: int
    eps: float
    mean_total_muls: float
    std_total_muls: float
    mean_fp_muls: float
    std_fp_muls: float
    median_error: float
    median_ci_low: float
    median_ci_high: float
    convergence_rate: float


def sample_stream(master_seed: int, dim: int, sample_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed & 0xFFFFFFFFFFFFFFFF, spawn_key=(dim, sample_index))
    return np.random.Generator(np.random.PCG64(seq))


def sample_spectrum(dist: EigenvalueDistribution, dim: int, stream: np.random.Generator) -> np.ndarray:
    return dist.inverse_cdf(stream.random(dim))


def build_test_matrix(spectrum, stream: np.random.Generator) -> np.ndarray:
    """Symmetric matrix ``Q^T diag(spectrum) Q`` for a random reflector ``Q``."""
    spectrum = np.asarray(spectrum, dtype=np.float64)
    if np.any(spectrum <= 0.0):
        raise ValueError("spectrum must be positive")
    v = stream.standard_normal(spectrum.size)
    v /= np.linalg.norm(v)
    return householder_similarity(spectrum, v)


def sample_matrix(config: BenchConfig, dim: int, sample_index: int) -> np.ndarray:
    stream = sample_stream(config.master_seed, dim, sample_index)
    return build_test_matrix(sample_spectrum(config.distribution, dim, stream), stream)


def run_sample(a: np.ndarray, eps: float, sample_index: int = 0, do_refine: bool = False) -> SampleRecord:
    cfg = FixedPointConfig(eps=eps, init=Init.PAPER)
    try:
        result = fixed_point_logm(a, cfg)
    except LogmDivergenceError as exc:
        result = exc.result
    report = result.report
    refined = None
    if do_refine and report.converged:
        refined = error_estimate(a, refine(a, result.x, REFINE_EPS, CostLedger()))
    ledger = report.ledger
    return SampleRecord(
        dim=a.shape[0],
        eps=eps,
        sample_index=sample_index,
        converged=report.converged,
        iterations=report.iterations,
        fixed_point_muls=ledger.fixed_point_muls,
        exp_muls=ledger.exp_muls,
        total_muls=ledger.total,
        error_estimate=error_estimate(a, result.x),
        error_after_refine=refined,
    )


def run_experiment(config: BenchConfig) -> Tuple[List[SampleRecord], List[SummaryRow]]:
    records = []
    for dim in config.dims:
        for idx in range(config.samples):
            a = sample_matrix(config, dim, idx)
            for eps in config.eps_values:
                records.append(run_sample(a, eps, idx, config.refine))
    records.sort(key=lambda r: (r.dim, -r.eps, r.sample_index))
    return records, summarize(records)


def median_ci(values: Iterable[float], level: float = 0.95) -> Tuple[float, float, float]:
    """Sample median with a distribution-free confidence interval.

    The bounds are order statistics at ranks ``floor((n - z sqrt(n)) / 2)``
    and ``ceil(1 + (n + z sqrt(n)) / 2)`` (1-based, clamped to ``[1, n]``).
    """
    x = np.sort(np.asarray(list(values), dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("median_ci needs at least one value")
    z = float(norm.ppf(0.5 + level / 2.0))
    half = z * math.sqrt(n)
    lo = min(max(math.floor((n - half) / 2.0), 1), n)
    hi = min(max(math.ceil(1.0 + (n + half) / 2.0), 1), n)
    return float(np.median(x)), float(x[lo - 1]), float(x[hi - 1])


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=np.float64)
    return float(arr.mean()), float(arr.std(ddof=1)) if arr.size > 1 else 0.0


def summarize(records: Sequence[SampleRecord]) -> List[SummaryRow]:
    """Aggregate per ``(dim, eps)``; non-converged samples only count in the rate."""
    groups = {}
    for r in records:
        groups.setdefault((r.dim, r.eps), []).append(r)
    rows = []
    for (dim, eps), group in sorted(groups.items(), key=lambda kv: (kv[0][0], -kv[0][1])):
        ok = [r for r in group if r.converged]
        mean_total, std_total = _mean_std([r.total_muls for r in ok])
        mean_fp, std_fp = _mean_std([r.fixed_point_muls for r in ok])
        med, lo, hi = median_ci([r.error_estimate for r in ok]) if ok else (math.nan,) * 3
        rows.append(SummaryRow(dim, eps, mean_total, std_total, mean_fp, std_fp, med, lo, hi, len(ok) / len(group)))
    return rows


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.17g}"


def write_records_csv(records: Sequence[SampleRecord], dest: Union[str, Path]) -> None:
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for r in records:
            w.writerow([_fmt(v) for v in (
                r.dim, r.eps, r.sample_index, r.converged, r.iterations, r.fixed_point_muls,
                r.exp_muls, r.total_muls, r.error_estimate, r.error_after_refine,
            )])


def write_summary_csv(rows: Sequence[SummaryRow], dest: Union[str, Path]) -> None:
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for s in rows:
            w.writerow([_fmt(v) for v in (
                s.dim, s.eps, s.mean_total_muls, s.std_total_muls, s.mean_fp_muls, s.std_fp_muls,
                s.median_error, s.median_ci_low, s.median_ci_high, s.convergence_rate,
            )])
