"""Mean multiplication counts against the stopping threshold.

Prints fixed-point and total multiplications per (dim, eps) and writes the
records and summary CSVs. Use --samples 1000 for the full-size run.
"""

import argparse
from pathlib import Path

from fplogm.bench import BenchConfig, EigenvalueDistribution, run_experiment, write_records_csv, write_summary_csv


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--dist", choices=["uniform", "exponential"], default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results/costs")
    args = p.parse_args()

    config = BenchConfig(samples=args.samples, distribution=EigenvalueDistribution(args.dist), master_seed=args.seed)
    records, summary = run_experiment(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_records_csv(records, out / f"records_{args.dist}.csv")
    write_summary_csv(summary, out / f"summary_{args.dist}.csv")

    print(f"{'dim':>4} {'eps':>8} {'fp':>8} {'total':>8} {'conv':>5}")
    for row in summary:
        print(f"{row.dim:>4} {row.eps:>8.0e} {row.mean_fp_muls:>8.2f} {row.mean_total_muls:>8.2f} {row.convergence_rate:>5.2f}")


if __name__ == "__main__":
    main()
