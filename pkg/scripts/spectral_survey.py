"""Fitted transfer-operator contraction rates against |lambda_2| / lambda."""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sftequi import ParryMeasure, TransferOperator, TransitionMatrix, estimate_gap

MATRICES = {
    "golden mean": TransitionMatrix.golden_mean(),
    "full 2-shift": TransitionMatrix.full_shift(2),
    "three state": TransitionMatrix(((0, 1, 1), (1, 0, 1), (1, 1, 1))),
    "slow 3-cycle": TransitionMatrix(((0, 1, 0), (0, 0, 1), (1, 1, 0))),
    "4-state": TransitionMatrix(((1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 1))),
}


def main(depths=(1, 2, 3), trials=8, steps=60, seed=0):
    print(f"{'matrix':<14} {'|l2|/l':>8} " + " ".join(f"rho(k={k})" for k in depths))
    for name, A in MATRICES.items():
        ev = np.sort(np.abs(np.linalg.eigvals(A.array)))[::-1]
        L = TransferOperator(ParryMeasure.of(A))
        rhos = [estimate_gap(L, trials, k, steps, seed).rho_hat for k in depths]
        print(f"{name:<14} {ev[1] / ev[0]:8.4f} " + " ".join(f"{r:8.4f}" for r in rhos))


if __name__ == "__main__":
    main()
