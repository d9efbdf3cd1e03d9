"""Perron eigendata and the Parry measure of maximal entropy."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .core import LocallyConstantFunction, TransitionMatrix, Word
from .errors import NoConvergence, NotIrreducible, NotPrimitive

DEFAULT_TOL = 1e-13
MAX_ITER = 10**6


@dataclass(frozen=True, eq=False)
class PerronData:
    """Spectral radius with positive left/right eigenvectors.

    ``v`` has unit 1-norm and ``u`` is scaled so that ``sum(u * v) == 1``.
    """

    matrix: TransitionMatrix
    lam: float
    u: np.ndarray
    v: np.ndarray
    left_residual: float
    right_residual: float
    iterations: int

    @property
    def entropy(self) -> float:
        return entropy(self)

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "u": self.u.tolist(),
            "v": self.v.tolist(),
            "residuals": {"left": self.left_residual, "right": self.right_residual},
            "iterations": self.iterations,
        }


def compute_perron(A: TransitionMatrix, tol: float = DEFAULT_TOL,
                   max_iter: int = MAX_ITER) -> PerronData:
    """Power iteration from the all-ones vector, 1-norm renormalised.

    Converged once successive eigenvalue estimates and both eigenvector
    residuals (max-norm, unit 1-norm vectors) drop below ``tol``.
    """
    if not A.irreducible:
        raise NotIrreducible("transition matrix is not irreducible")
    if not A.primitive:
        raise NotPrimitive("transition matrix is irreducible but not primitive")
    a = A.array
    at = a.T.copy()
    s = A.s
    v = np.full(s, 1.0 / s)
    u = np.full(s, 1.0 / s)
    lam_v = lam_u = 0.0
    for it in range(1, max_iter + 1):
        av = a @ v
        au = at @ u
        new_v, new_u = av.sum(), au.sum()
        res_v = np.max(np.abs(av - new_v * v))
        res_u = np.max(np.abs(au - new_u * u))
        done = (abs(new_v - lam_v) < tol and abs(new_u - lam_u) < tol
                and res_v < tol and res_u < tol)
        lam_v, lam_u = new_v, new_u
        v = av / new_v
        u = au / new_u
        if done:
            break
    else:
        raise NoConvergence(f"power iteration did not converge in {max_iter} steps")

    lam = float(lam_v)
    v = v / v.sum()
    u = u / float(u @ v)
    right = float(np.max(np.abs(a @ v - lam * v)))
    left = float(np.max(np.abs(at @ u - lam * u)))
    u.flags.writeable = False
    v.flags.writeable = False
    return PerronData(A, lam, u, v, left, right, it)


def entropy(pd: PerronData) -> float:
    """Topological entropy ``log(lambda)``."""
    return math.log(pd.lam)


@dataclass(frozen=True, eq=False)
class ParryMeasure:
    perron: PerronData

    @classmethod
    def of(cls, A: TransitionMatrix, tol: float = DEFAULT_TOL) -> "ParryMeasure":
        return cls(compute_perron(A, tol))

    @property
    def matrix(self) -> TransitionMatrix:
        return self.perron.matrix

    @property
    def lam(self) -> float:
        return self.perron.lam

    @property
    def u(self) -> np.ndarray:
        return self.perron.u

    @property
    def v(self) -> np.ndarray:
        return self.perron.v

    @cached_property
    def p(self) -> np.ndarray:
        return self.u * self.v

    @cached_property
    def P(self) -> np.ndarray:
        v = self.v
        return self.matrix.array * v[None, :] / (self.lam * v[:, None])

    @property
    def entropy(self) -> float:
        return entropy(self.perron)

    def cylinder_measure(self, w) -> float:
        return cylinder_measure(self, w)

    def to_dict(self) -> dict:
        d = self.perron.to_dict()
        d["p"] = self.p.tolist()
        d["P"] = self.P.tolist()
        return d


def _symbols(w) -> tuple[int, ...]:
    if isinstance(w, Word):
        return w.symbols
    return tuple(int(a) for a in w)


def cylinder_measure(m: ParryMeasure, w: Word | Sequence[int]) -> float:
    """Mass ``u[w_0] v[w_k] / lambda**k`` of the cylinder of a word of
    length k+1; zero for an inadmissible word."""
    w = _symbols(w)
    if not w:
        raise ValueError("cylinder of the empty word")
    if not m.matrix.is_admissible(w):
        return 0.0
    k = len(w) - 1
    return float(m.u[w[0]] * m.v[w[-1]] / m.lam**k)


def cylinder_vector(m: ParryMeasure, depth: int) -> np.ndarray:
    """Cylinder masses of all admissible words of ``depth``, in table order."""
    words = m.matrix.admissible_words(depth)
    first = np.array([w[0] for w in words])
    last = np.array([w[-1] for w in words])
    return m.u[first] * m.v[last] / m.lam ** (depth - 1)


def integrate(m: ParryMeasure, f: LocallyConstantFunction) -> float:
    if f.matrix != m.matrix:
        raise ValueError("function and measure live on different matrices")
    return float(cylinder_vector(m, f.depth) @ f.vector)


def information_function(m: ParryMeasure) -> LocallyConstantFunction:
    """Depth-2 table ``log(lambda) + log u[b] - log u[a]`` on words (a, b)."""
    log_u = np.log(m.u)
    log_lam = math.log(m.lam)
    return LocallyConstantFunction.from_callable(
        m.matrix, 2, lambda w: log_lam + log_u[w[1]] - log_u[w[0]]
    )


def conditional_first_symbol(m: ParryMeasure, next_symbol: int) -> np.ndarray:
    """Distribution of x_0 given x_1 = ``next_symbol``: ``u_i / (lambda u_next)``
    over admissible predecessors i."""
    mask = m.matrix.array[:, next_symbol]
    return mask * m.u / (m.lam * m.u[next_symbol])


def markov_entropy(m: ParryMeasure) -> float:
    """Entropy ``-sum p_i P_ij log P_ij`` of the Markov chain (p, P)."""
    P = m.P
    logs = np.log(np.where(P > 0, P, 1.0))
    return float(-(m.p[:, None] * P * logs).sum())
