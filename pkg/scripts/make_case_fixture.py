#!/usr/bin/env python3
"""Generate the synthetic case-study cohort CSV.

Writes a small two-group cohort with known ground truth (three signal
features, null group drawn from the same law) for use with
``python3 -m bermkit case run``.
"""

import argparse

from bermkit.fixture import make_synthetic_cohort


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output", help="destination CSV path")
    ap.add_argument("--n-fit", type=int, default=120, help="fitting-group rows")
    ap.add_argument("--n-null", type=int, default=60, help="null-group rows")
    ap.add_argument("--seed", type=int, default=0, help="generation seed")
    args = ap.parse_args()
    truth = make_synthetic_cohort(
        args.output, n_fit=args.n_fit, n_null=args.n_null, seed=args.seed
    )
    print(f"wrote {truth.path}: {truth.n_fit}+{truth.n_null} rows")
    print(f"true model: {truth.intercept:g} + "
          + " + ".join(f"{c:g}*{f}" for f, c in truth.true_coefficients.items())
          + f" + noise(sd={truth.noise_sd:g})")


if __name__ == "__main__":
    main()
