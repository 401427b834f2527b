"""Sample the scalar convergence indicator on a grid and write it as CSV.

Points with f <= 0 lie in the region where a single eigenvalue deviation
does not grow. Also prints the crossing on the negative real axis.
"""

import argparse
import math

import numpy as np

from fplogm.scalar import negative_real_boundary, region_grid, write_grid_csv


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--half-width", type=float, default=math.pi)
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--out", default="region.csv")
    args = p.parse_args()

    w = args.half_width
    grid = region_grid((-w, w), (-w, w), args.resolution)
    write_grid_csv(grid, args.out)
    inside = np.mean(grid.values <= 0.0)
    print(f"wrote {args.resolution}^2 points to {args.out}; fraction with f <= 0: {inside:.3f}")
    print(f"negative real boundary: {negative_real_boundary():.12f}")


if __name__ == "__main__":
    main()
