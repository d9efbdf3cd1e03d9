"""Finitely supported invariant measures and the entropy toolkit used to
control their distance from the Parry measure."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .core import (Block, LocallyConstantFunction, PeriodicPoint, TransitionMatrix,
                   iter_points, minimal_period, prefix)
from .errors import (EmptySet, HTooSmall, InfiniteDivergence, NotDecreasing,
                     NotInvariant)
from .orbits import OrbitSet, enumerate_fix
from .parry import ParryMeasure, conditional_first_symbol

WEIGHT_TOL = 1e-12


def _key(block: Block) -> Block:
    return block[: minimal_period(block)]


@dataclass(frozen=True, eq=False)
class FiniteInvariantMeasure:
    """Shift-invariant probability measure on finitely many periodic points.

    Points are identified by their minimal block; construction rejects
    duplicates and weights that vary along a shift orbit.
    """

    matrix: TransitionMatrix
    blocks: tuple[Block, ...]
    weights: np.ndarray

    def __post_init__(self):
        blocks = tuple(tuple(int(a) for a in b) for b in self.blocks)
        weights = np.asarray(self.weights, dtype=float).copy()
        if not blocks:
            raise EmptySet("empty support")
        if weights.shape != (len(blocks),):
            raise ValueError("one weight per support point required")
        if np.any(weights < 0):
            raise ValueError("negative weight")
        if abs(weights.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {weights.sum()!r}, not 1")
        weight_of: dict[Block, float] = {}
        for b, w in zip(blocks, weights):
            PeriodicPoint(b, self.matrix)
            k = _key(b)
            if k in weight_of:
                raise ValueError(f"point {b} listed twice")
            weight_of[k] = w
        for k, w in weight_of.items():
            img = k[1:] + k[:1]
            if img not in weight_of or abs(weight_of[img] - w) > WEIGHT_TOL:
                raise NotInvariant(f"weight not constant along the orbit of {k}")
        weights.flags.writeable = False
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def symmetrize(cls, matrix: TransitionMatrix, blocks: Sequence[Sequence[int]],
                   weights: Sequence[float]) -> "FiniteInvariantMeasure":
        """Spread each point's weight evenly over its shift orbit and
        renormalise; the result is invariant by construction."""
        acc: dict[Block, float] = defaultdict(float)
        for b, w in zip(blocks, weights):
            k = _key(tuple(int(a) for a in b))
            orbit = [k[i:] + k[:i] for i in range(len(k))]
            for r in orbit:
                acc[r] += w / len(orbit)
        keys = sorted(acc)
        total = sum(acc.values())
        return cls(matrix, tuple(keys), np.array([acc[k] / total for k in keys]))

    @property
    def support(self) -> list[PeriodicPoint]:
        return list(iter_points(self.blocks, self.matrix))

    @cached_property
    def _prefix_cache(self) -> dict[int, dict[Block, float]]:
        return {}

    def cylinder_masses(self, depth: int) -> dict[Block, float]:
        """Mass of every depth-``depth`` cylinder met by the support."""
        cache = self._prefix_cache
        if depth not in cache:
            masses: dict[Block, float] = defaultdict(float)
            for b, w in zip(self.blocks, self.weights):
                masses[prefix(b, depth)] += float(w)
            cache[depth] = dict(masses)
        return cache[depth]


def uniform_measure(I: OrbitSet) -> FiniteInvariantMeasure:
    if len(I) == 0:
        raise EmptySet("cannot put a uniform measure on an empty set")
    keys = sorted({_key(b) for b in I.blocks})
    return FiniteInvariantMeasure(I.matrix, tuple(keys), np.full(len(keys), 1.0 / len(keys)))


def integrate_measure(mu: FiniteInvariantMeasure, f: LocallyConstantFunction) -> float:
    if f.matrix != mu.matrix:
        raise ValueError("function and measure live on different matrices")
    return math.fsum(float(w) * f(prefix(b, f.depth)) for b, w in zip(mu.blocks, mu.weights))


def cylinder_prob(mu: FiniteInvariantMeasure, w: Sequence[int]) -> float:
    w = tuple(int(a) for a in getattr(w, "symbols", w))
    if not w:
        raise ValueError("cylinder of the empty word")
    return mu.cylinder_masses(len(w)).get(w, 0.0)


def _shannon(masses) -> float:
    return -math.fsum(p * math.log(p) for p in masses if p > 0)


def partition_entropy(mu: FiniteInvariantMeasure, N: int) -> float:
    """Entropy of the partition into depth-N cylinders; 0 for N = 0."""
    if N < 0:
        raise ValueError("depth must be >= 0")
    if N == 0:
        return 0.0
    return _shannon(mu.cylinder_masses(N).values())


def conditional_entropy(mu: FiniteInvariantMeasure, N: int) -> float:
    """Entropy of x_0 given x_1..x_N, as H(depth N+1) - H(depth N)."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return partition_entropy(mu, N + 1) - partition_entropy(mu, N)


def phi_p(p: Sequence[float], q: Sequence[float]) -> float:
    """``sum q_i log(q_i / p_i)``, with zero-q terms dropped."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("length mismatch")
    live = q > 0
    if np.any(p[live] <= 0):
        raise InfiniteDivergence("q charges a symbol that p does not")
    return float(np.sum(q[live] * np.log(q[live] / p[live])))


def total_variation_l1(p: Sequence[float], q: Sequence[float]) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("length mismatch")
    return float(np.abs(q - p).sum())


def kl_average_over_atoms(mu: FiniteInvariantMeasure, m: ParryMeasure, N: int) -> float:
    """mu-average over the atoms of x_1..x_N of ``phi_p(p, q)``, where p is
    the Parry conditional law of x_0 and q the empirical one under mu.

    For invariant mu and N >= 1 this equals ``log(lambda)`` minus the
    conditional entropy of depth N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    s = mu.matrix.s
    joint = mu.cylinder_masses(N + 1)
    atoms: dict[Block, np.ndarray] = defaultdict(lambda: np.zeros(s))
    for word, mass in joint.items():
        atoms[word[1:]][word[0]] += mass
    total = []
    for tail, q in atoms.items():
        weight = q.sum()
        if weight <= 0:
            continue
        p = conditional_first_symbol(m, tail[0])
        total.append(weight * phi_p(p, q / weight))
    return math.fsum(total)


@dataclass(frozen=True)
class AveragingCheck:
    lhs: float
    rhs: float
    ok: bool


def averaging_gap_check(a: Sequence[float], h: float, n: int) -> AveragingCheck:
    """Compare ``2 (h - mean(a[:n]))`` with ``h - a[n // 2]`` for a
    decreasing nonnegative sequence ``a`` and ``h >= a[0]``."""
    a = [float(x) for x in a]
    if n < 1 or len(a) < n or len(a) <= n // 2:
        raise ValueError("sequence too short for this n")
    if any(x < 0 for x in a):
        raise NotDecreasing("sequence has a negative term")
    if any(y > x for x, y in zip(a, a[1:])):
        raise NotDecreasing("sequence is not decreasing")
    if h < a[0]:
        raise HTooSmall(f"h = {h} is below a_0 = {a[0]}")
    lhs = 2.0 * (h - math.fsum(a[:n]) / n)
    rhs = h - a[n // 2]
    return AveragingCheck(lhs, rhs, lhs >= rhs - 1e-12)


def random_invariant_measure(A: TransitionMatrix, rng: np.random.Generator,
                             max_period: int = 8, max_orbits: int = 6) -> FiniteInvariantMeasure:
    """Random convex combination of uniform measures on a few periodic orbits."""
    blocks, weights = [], []
    for _ in range(int(rng.integers(1, max_orbits + 1))):
        n = int(rng.integers(1, max_period + 1))
        fix = enumerate_fix(A, n)
        if not len(fix):
            continue
        blocks.append(fix.blocks[int(rng.integers(len(fix)))])
        weights.append(float(rng.uniform(0.05, 1.0)))
    if not blocks:
        blocks, weights = [enumerate_fix(A, A.s).blocks[0]], [1.0]
    return FiniteInvariantMeasure.symmetrize(A, blocks, weights)
