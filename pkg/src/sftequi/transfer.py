"""Normalised transfer operator of the Parry measure on locally constant
functions, and spectral-gap estimation by iteration."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import LocallyConstantFunction, lipschitz_seminorm, sup_norm, theta_norm
from .errors import DegenerateFit
from .parry import ParryMeasure, integrate

NORM_FLOOR = 1e-14


class TransferOperator:
    """``(Lf)(z) = sum_i f(i z) u_i / (lambda u_{z_0})`` over predecessors i.

    A depth-k table is mapped to a depth ``max(k - 1, 1)`` table; the
    action at each depth is a fixed sparse-ish matrix, cached.
    """

    def __init__(self, measure: ParryMeasure):
        self.measure = measure
        self.matrix = measure.matrix
        self._action = lru_cache(maxsize=None)(self._build_action)

    def predecessor_weights(self, z0: int) -> dict[int, float]:
        m = self.measure
        return {i: m.u[i] / (m.lam * m.u[z0]) for i in self.matrix.predecessors(z0)}

    def _build_action(self, depth: int) -> np.ndarray:
        A = self.matrix
        src = A.admissible_words(depth)
        index = {w: j for j, w in enumerate(src)}
        out_depth = max(depth - 1, 1)
        dst = A.admissible_words(out_depth)
        M = np.zeros((len(dst), len(src)))
        for r, z in enumerate(dst):
            tail = z if depth > 1 else ()
            for i, wt in self.predecessor_weights(z[0]).items():
                M[r, index[(i,) + tail]] += wt
        M.flags.writeable = False
        return M

    def action_matrix(self, depth: int) -> np.ndarray:
        return self._action(depth)

    def __call__(self, f: LocallyConstantFunction) -> LocallyConstantFunction:
        return apply(self, f)


def apply(L: TransferOperator, f: LocallyConstantFunction) -> LocallyConstantFunction:
    if f.matrix != L.matrix:
        raise ValueError("function and operator live on different matrices")
    out = L.action_matrix(f.depth) @ f.vector
    return LocallyConstantFunction.from_vector(f.matrix, max(f.depth - 1, 1), out)


@dataclass(frozen=True)
class IterateStep:
    function: LocallyConstantFunction = field(repr=False)
    sup_norm: float
    theta_seminorm: float

    @property
    def theta_norm(self) -> float:
        return self.sup_norm + self.theta_seminorm


def iterate(L: TransferOperator, f: LocallyConstantFunction, n: int,
            theta: float) -> list[IterateStep]:
    """``[f, Lf, ..., L^n f]`` with both norm components per step."""
    if n < 0:
        raise ValueError("n must be >= 0")
    steps = []
    g = f
    for j in range(n + 1):
        if j:
            g = apply(L, g)
        steps.append(IterateStep(g, sup_norm(g), lipschitz_seminorm(g, theta)))
    return steps


def fit_rate(norms, floor: float = NORM_FLOOR) -> tuple[float, float]:
    """Least-squares fit ``log norm_n ~ log C + n log rho`` over steps above
    ``floor``. Returns (C, rho)."""
    norms = np.asarray(norms, dtype=float)
    steps = np.flatnonzero(norms > floor)
    if steps.size < 2:
        raise DegenerateFit(f"only {steps.size} norms above {floor}")
    slope, intercept = np.polyfit(steps, np.log(norms[steps]), 1)
    return float(np.exp(intercept)), float(np.exp(slope))


@dataclass
class GapEstimate:
    C_hat: float
    rho_hat: float
    per_trial: list[dict]


def random_mean_zero(L: TransferOperator, depth: int,
                     rng: np.random.Generator) -> LocallyConstantFunction:
    """Table values uniform on [-1, 1], then the Parry mean subtracted."""
    f = LocallyConstantFunction.random(L.matrix, depth, rng)
    return f - integrate(L.measure, f)


def estimate_gap(L: TransferOperator, trials: int, depth: int, n_max: int,
                 seed: int, theta: float = 0.5) -> GapEstimate:
    """Worst fitted contraction rate of ``||L^n f||_theta`` over random
    mean-zero depth-k functions drawn from ``default_rng(seed)``.

    A trial whose norms collapse below the floor within one step reports
    rate 0 (exact annihilation).
    """
    if trials < 1 or n_max < 4:
        raise ValueError("need trials >= 1 and n_max >= 4")
    rng = np.random.default_rng(seed)
    per_trial = []
    for t in range(trials):
        f = random_mean_zero(L, depth, rng)
        norms = [theta_norm(step.function, theta) for step in iterate(L, f, n_max, theta)]
        try:
            C, rho = fit_rate(norms)
            degenerate = False
        except DegenerateFit:
            C, rho, degenerate = norms[0], 0.0, True
        per_trial.append({"trial": t, "C_hat": C, "rho_hat": rho,
                          "degenerate": degenerate, "norms": norms})
    worst = max(per_trial, key=lambda r: r["rho_hat"])
    return GapEstimate(worst["C_hat"], worst["rho_hat"], per_trial)
