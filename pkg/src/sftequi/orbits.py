"""Periodic points: exact counts, enumeration and shift-invariant subsets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .core import Block, PeriodicPoint, TransitionMatrix, iter_points, minimal_period
from .errors import CapExceeded, EmptySubset, InadmissiblePoint

DEFAULT_CAP = 2**24

IntMatrix = list[list[int]]


def _int_matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(a[i], bt[j])) for j in range(n)] for i in range(n)]


def int_matrix_power(A: TransitionMatrix, n: int) -> IntMatrix:
    """Exact ``A**n`` over Python integers by repeated squaring."""
    if n < 0:
        raise ValueError("negative power")
    s = A.s
    result = [[int(i == j) for j in range(s)] for i in range(s)]
    base = [list(row) for row in A.entries]
    while n:
        if n & 1:
            result = _int_matmul(result, base)
        n >>= 1
        if n:
            base = _int_matmul(base, base)
    return result


def count_fix(A: TransitionMatrix, n: int) -> int:
    """``|Fix_n| = trace(A**n)``, exact."""
    if n < 1:
        raise ValueError("period must be >= 1")
    power = int_matrix_power(A, n)
    return sum(power[i][i] for i in range(A.s))


def count_words(A: TransitionMatrix, n: int) -> int:
    """Number of admissible words of length n."""
    return sum(map(sum, int_matrix_power(A, n - 1)))


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def count_primitive(A: TransitionMatrix, n: int) -> int:
    """Points of least period exactly n, by Mobius inversion of the traces."""
    if n < 1:
        raise ValueError("period must be >= 1")
    return sum(mobius(d) * count_fix(A, n // d) for d in divisors(n))


def rotations(block: Block) -> list[Block]:
    return [block[i:] + block[:i] for i in range(len(block))]


@dataclass(frozen=True)
class OrbitSet:
    """A shift-invariant set of points of ``Fix_n``.

    Every point is stored as its length-n block, sorted lexicographically.
    Use :func:`orbit_closure` or the enumerators to build one.
    """

    matrix: TransitionMatrix
    n: int
    blocks: tuple[Block, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter_points(self.blocks, self.matrix)

    def __contains__(self, x) -> bool:
        block = x.block if isinstance(x, PeriodicPoint) else tuple(x)
        if self.n % len(block):
            return False
        return block * (self.n // len(block)) in self._index

    @cached_property
    def _index(self) -> frozenset[Block]:
        return frozenset(self.blocks)

    @property
    def points(self) -> list[PeriodicPoint]:
        return list(self)

    def orbits(self) -> list[tuple[Block, ...]]:
        """Decomposition into shift orbits, each led by its least rotation."""
        seen: set[Block] = set()
        out = []
        for b in self.blocks:
            if b in seen:
                continue
            d = minimal_period(b)
            orbit = tuple(sorted(set(rotations(b[:d] * (self.n // d)))))
            seen.update(orbit)
            out.append(orbit)
        return out

    def union(self, other: "OrbitSet") -> "OrbitSet":
        if other.matrix != self.matrix or other.n != self.n:
            raise ValueError("incompatible orbit sets")
        return OrbitSet(self.matrix, self.n, tuple(sorted(self._index | other._index)))


def _check_cap(A: TransitionMatrix, n: int, cap: int) -> None:
    candidates = count_words(A, n)
    if candidates > cap:
        raise CapExceeded(
            f"{candidates} admissible words of length {n} exceed the cap {cap}"
        )


def _closed_words(A: TransitionMatrix, n: int) -> list[Block]:
    entries = A.entries
    return [w for w in A.admissible_words(n) if entries[w[-1]][w[0]]]


def enumerate_fix(A: TransitionMatrix, n: int, cap: int = DEFAULT_CAP) -> OrbitSet:
    """All of ``Fix_n`` in lexicographic order.

    ``cap`` bounds the number of admissible length-n words visited.
    """
    if n < 1:
        raise ValueError("period must be >= 1")
    _check_cap(A, n, cap)
    return OrbitSet(A, n, tuple(_closed_words(A, n)))


def enumerate_primitive(A: TransitionMatrix, n: int, cap: int = DEFAULT_CAP) -> OrbitSet:
    if n < 1:
        raise ValueError("period must be >= 1")
    _check_cap(A, n, cap)
    blocks = tuple(w for w in _closed_words(A, n) if minimal_period(w) == n)
    return OrbitSet(A, n, blocks)


def orbit_closure(points: Iterable[PeriodicPoint | Sequence[int]], n: int,
                  matrix: TransitionMatrix | None = None) -> OrbitSet:
    """Smallest shift-closed subset of ``Fix_n`` containing ``points``."""
    pts = list(points)
    if matrix is None:
        if not pts or not isinstance(pts[0], PeriodicPoint):
            raise ValueError("matrix required when points are bare blocks")
        matrix = pts[0].matrix
    blocks: set[Block] = set()
    for x in pts:
        if not isinstance(x, PeriodicPoint):
            x = PeriodicPoint(tuple(x), matrix)
        elif x.matrix != matrix:
            raise InadmissiblePoint("point lives on a different matrix")
        if n % x.period:
            raise InadmissiblePoint(f"period {x.period} of {x.block} does not divide {n}")
        blocks.update(rotations(x.block * (n // x.period)))
    return OrbitSet(matrix, n, tuple(sorted(blocks)))


def random_invariant_subset(A: TransitionMatrix, n: int, target: int,
                            rng: np.random.Generator, cap: int = DEFAULT_CAP) -> OrbitSet:
    """Union of whole shift orbits of ``Fix_n``, drawn without replacement
    until at least ``target`` points are covered."""
    orbits = enumerate_fix(A, n, cap).orbits()
    if not orbits or target < 1:
        raise EmptySubset("nothing to sample")
    chosen: list[Block] = []
    for idx in rng.permutation(len(orbits)):
        chosen.extend(orbits[idx])
        if len(chosen) >= target:
            break
    return OrbitSet(A, n, tuple(sorted(chosen)))
