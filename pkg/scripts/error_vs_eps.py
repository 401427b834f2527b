"""Median round-trip error against the stopping threshold, before and after refinement.

Also fits the log-log slope of median error against eps for each dim.
"""

import argparse

import numpy as np

from fplogm.bench import BenchConfig, EigenvalueDistribution, median_ci, run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--dist", choices=["uniform", "exponential"], default="uniform")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    config = BenchConfig(samples=args.samples, distribution=EigenvalueDistribution(args.dist), master_seed=args.seed, refine=True)
    records, _ = run_experiment(config)

    for dim in config.dims:
        print(f"dim {dim}")
        meds = []
        for eps in config.eps_values:
            rs = [r for r in records if r.dim == dim and r.eps == eps and r.converged]
            med, lo, hi = median_ci([r.error_estimate for r in rs])
            med_ref = np.median([r.error_after_refine for r in rs])
            meds.append(med)
            print(f"  eps {eps:.0e}  median {med:.2e} [{lo:.2e}, {hi:.2e}]  refined {med_ref:.2e}")
        slope = np.polyfit(np.log10(config.eps_values), np.log10(meds), 1)[0]
        print(f"  slope {slope:.3f}")


if __name__ == "__main__":
    main()
