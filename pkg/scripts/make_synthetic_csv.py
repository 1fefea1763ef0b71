#!/usr/bin/env python3
"""Write the calibrated synthetic stand-in table to a CSV file.

The real combined heart-disease CSV is a user-supplied input; this stand-in
reproduces its published shape (1190 rows, class balance, gender split,
feature-target correlation profile) for development and CI.
"""

import argparse

from heartstack.synthetic import DEFAULT_DATA_SEED, write_dataset_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("path", nargs="?", default="data/heart_synthetic.csv")
    parser.add_argument("--seed", type=int, default=DEFAULT_DATA_SEED)
    args = parser.parse_args()

    from pathlib import Path

    Path(args.path).parent.mkdir(parents=True, exist_ok=True)
    ds = write_dataset_csv(args.path, seed=args.seed)
    print(f"wrote {ds.n_rows} rows to {args.path}")


if __name__ == "__main__":
    main()
