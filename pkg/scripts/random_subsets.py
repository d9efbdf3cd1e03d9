"""Discrepancy of random invariant subsets of Fix_n at several sizes.

Subsets of size ~|Fix_n|^a keep a defect near (1 - a) h, so the square-root
term dominates the bound; the fitted constant should stay bounded in n.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sftequi.harness import ExperimentConfig, run_theorem_bound, write_report


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--matrix", type=Path, default=ROOT / "data" / "golden_mean.txt")
    p.add_argument("--nmax", type=int, default=14)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    for a in (0.5, 0.75, 0.9):
        cfg = ExperimentConfig(matrix=args.matrix, mode="bound", n_min=4, n_max=args.nmax,
                               subsets=("random",), subset_exponent=a, subset_trials=10,
                               seed=args.seed)
        rep = run_theorem_bound(cfg)
        write_report(rep, ROOT / "results" / f"random_subsets_a{a}.csv")
        s = rep.summary
        print(f"exponent {a}: ratio max {s['ratio_max']:.4f}  median {s['ratio_median']:.4f}  "
              f"bounded(<=64x median) {s['ratio_bounded']}")


if __name__ == "__main__":
    main()
