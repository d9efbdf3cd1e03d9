"""Symbolic core: transition matrices, words, periodic points and
locally constant functions on the one-sided shift space.

Symbols are 0-based throughout. A point of the shift space is only ever
materialised as a periodic point (a repeating block); test functions are
locally constant of finite depth, so every quantity is finitely computable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InadmissiblePoint, InadmissibleWord, InvalidMatrix, TableError

Block = tuple[int, ...]


@lru_cache(maxsize=None)
def _admissible_words(entries: tuple[Block, ...], k: int) -> tuple[Block, ...]:
    s = len(entries)
    succ = [[j for j in range(s) if entries[i][j]] for i in range(s)]
    words: list[Block] = [(i,) for i in range(s)]
    for _ in range(k - 1):
        words = [w + (j,) for w in words for j in succ[w[-1]]]
    return tuple(words)


@dataclass(frozen=True)
class TransitionMatrix:
    """An s x s zero/one matrix; ``entries[i][j] == 1`` lets j follow i."""

    entries: tuple[Block, ...]

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        s = len(rows)
        if s < 2:
            raise InvalidMatrix(f"need at least 2 symbols, got {s}")
        if any(len(row) != s for row in rows):
            raise InvalidMatrix("matrix is not square")
        if any(a not in (0, 1) for row in rows for a in row):
            raise InvalidMatrix("entries must be 0 or 1")
        if any(sum(row) == 0 for row in rows):
            raise InvalidMatrix("some symbol has no admissible successor")
        if any(sum(row[j] for row in rows) == 0 for j in range(s)):
            raise InvalidMatrix("some symbol has no admissible predecessor")

    @classmethod
    def from_array(cls, a) -> "TransitionMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in np.asarray(a)))

    @classmethod
    def full_shift(cls, s: int) -> "TransitionMatrix":
        return cls(tuple((1,) * s for _ in range(s)))

    @classmethod
    def golden_mean(cls) -> "TransitionMatrix":
        return cls(((1, 1), (1, 0)))

    @property
    def s(self) -> int:
        return len(self.entries)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.entries, dtype=float)
        a.flags.writeable = False
        return a

    def __call__(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def successors(self, i: int) -> list[int]:
        return [j for j in range(self.s) if self.entries[i][j]]

    def predecessors(self, j: int) -> list[int]:
        return [i for i in range(self.s) if self.entries[i][j]]

    def is_admissible(self, symbols: Sequence[int]) -> bool:
        if any(not 0 <= a < self.s for a in symbols):
            return False
        return all(self.entries[a][b] for a, b in zip(symbols, symbols[1:]))

    def admissible_words(self, k: int) -> tuple[Block, ...]:
        """All admissible words of length ``k`` in lexicographic order."""
        if k < 1:
            raise ValueError("word length must be >= 1")
        return _admissible_words(self.entries, k)

    @cached_property
    def irreducible(self) -> bool:
        return is_irreducible(self)

    @cached_property
    def primitive(self) -> bool:
        return is_primitive(self)

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, row)) for row in self.entries)


def _reachable(succ: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in succ[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def is_irreducible(A: TransitionMatrix) -> bool:
    """True iff the transition graph is strongly connected."""
    s = A.s
    fwd = [A.successors(i) for i in range(s)]
    bwd = [A.predecessors(i) for i in range(s)]
    return len(_reachable(fwd, 0)) == s and len(_reachable(bwd, 0)) == s


def is_primitive(A: TransitionMatrix) -> bool:
    """True iff some power of A is entrywise positive.

    Powers are checked up to the Wielandt bound ``(s-1)**2 + 1``.
    """
    s = A.s
    a = A.array > 0
    power = a.copy()
    for _ in range((s - 1) ** 2 + 1):
        if power.all():
            return True
        power = (power.astype(np.int64) @ a.astype(np.int64)) > 0
    return bool(power.all())


def has_all_self_loops(A: TransitionMatrix) -> bool:
    """The stronger condition A(i, i) = 1 for every symbol."""
    return all(A.entries[i][i] for i in range(A.s))


@dataclass(frozen=True)
class Word:
    symbols: Block
    matrix: TransitionMatrix

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(a) for a in self.symbols))
        if not self.symbols:
            raise InadmissibleWord("empty word")
        if not self.matrix.is_admissible(self.symbols):
            raise InadmissibleWord(f"word {self.symbols} is not admissible")

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


def minimal_period(block: Sequence[int]) -> int:
    n = len(block)
    for d in range(1, n):
        if n % d == 0 and all(block[i] == block[i % d] for i in range(d, n)):
            return d
    return n


@dataclass(frozen=True, eq=False)
class PeriodicPoint:
    """The infinite sequence ``block block block ...``.

    Equality is equality of the infinite sequences, so ``(0, 1)`` and
    ``(0, 1, 0, 1)`` denote the same point.
    """

    block: Block
    matrix: TransitionMatrix

    def __post_init__(self):
        block = tuple(int(a) for a in self.block)
        object.__setattr__(self, "block", block)
        if not block:
            raise InadmissiblePoint("empty block")
        if not self.matrix.is_admissible(block + block[:1]):
            raise InadmissiblePoint(f"block {block} is not wrap-admissible")

    @classmethod
    def _trusted(cls, block: Block, matrix: TransitionMatrix) -> "PeriodicPoint":
        obj = object.__new__(cls)
        object.__setattr__(obj, "block", block)
        object.__setattr__(obj, "matrix", matrix)
        return obj

    @property
    def period(self) -> int:
        return len(self.block)

    @cached_property
    def minimal_period(self) -> int:
        return minimal_period(self.block)

    @cached_property
    def key(self) -> Block:
        """Minimal repeating block; identifies the sequence."""
        return self.block[: self.minimal_period]

    def __getitem__(self, i: int) -> int:
        return self.block[i % len(self.block)]

    def prefix(self, k: int) -> Block:
        return prefix(self.block, k)

    def __eq__(self, other):
        if not isinstance(other, PeriodicPoint):
            return NotImplemented
        return self.matrix == other.matrix and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"PeriodicPoint({self.block})"


def prefix(block: Block, k: int) -> Block:
    n = len(block)
    if k <= n:
        return block[:k]
    return tuple(block[i % n] for i in range(k))


def shift(x: PeriodicPoint) -> PeriodicPoint:
    return PeriodicPoint._trusted(x.block[1:] + x.block[:1], x.matrix)


def theta_distance(x: PeriodicPoint, y: PeriodicPoint, theta: float) -> float:
    """``theta ** t`` with t the first index where x and y disagree."""
    _check_theta(theta)
    horizon = math.lcm(x.period, y.period)
    for t in range(horizon):
        if x[t] != y[t]:
            return theta**t
    return 0.0


def _check_theta(theta: float) -> None:
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")


@dataclass(frozen=True)
class LocallyConstantFunction:
    """A function of the first ``depth`` coordinates, tabulated on the
    admissible words of that length."""

    matrix: TransitionMatrix
    depth: int
    values: Mapping[Block, float] = field(repr=False)

    def __post_init__(self):
        if self.depth < 1:
            raise TableError("depth must be >= 1")
        vals = {tuple(int(a) for a in w): float(v) for w, v in self.values.items()}
        words = self.matrix.admissible_words(self.depth)
        if set(vals) != set(words):
            missing = set(words) - set(vals)
            extra = set(vals) - set(words)
            raise TableError(
                f"table keys differ from admissible {self.depth}-words "
                f"(missing {sorted(missing)[:3]}, extra {sorted(extra)[:3]})"
            )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_vector(cls, matrix, depth, vector) -> "LocallyConstantFunction":
        words = matrix.admissible_words(depth)
        vector = np.asarray(vector, dtype=float)
        if vector.shape != (len(words),):
            raise TableError(f"expected {len(words)} values, got {vector.shape}")
        return cls(matrix, depth, dict(zip(words, vector.tolist())))

    @classmethod
    def from_callable(cls, matrix, depth, fn) -> "LocallyConstantFunction":
        return cls(matrix, depth, {w: fn(w) for w in matrix.admissible_words(depth)})

    @classmethod
    def constant(cls, matrix, c: float, depth: int = 1) -> "LocallyConstantFunction":
        return cls.from_callable(matrix, depth, lambda w: c)

    @classmethod
    def indicator(cls, matrix, symbol: int) -> "LocallyConstantFunction":
        """Depth-1 indicator of ``x_0 == symbol``."""
        return cls.from_callable(matrix, 1, lambda w: 1.0 if w[0] == symbol else 0.0)

    @classmethod
    def random(cls, matrix, depth: int, rng: np.random.Generator) -> "LocallyConstantFunction":
        n = len(matrix.admissible_words(depth))
        return cls.from_vector(matrix, depth, rng.uniform(-1.0, 1.0, size=n))

    @cached_property
    def words(self) -> tuple[Block, ...]:
        return self.matrix.admissible_words(self.depth)

    @cached_property
    def vector(self) -> np.ndarray:
        v = np.array([self.values[w] for w in self.words])
        v.flags.writeable = False
        return v

    def __call__(self, word: Sequence[int]) -> float:
        key = tuple(word[: self.depth])
        try:
            return self.values[key]
        except KeyError:
            raise TableError(f"word {key} not in table") from None

    def lift(self, depth: int) -> "LocallyConstantFunction":
        """The same function tabulated at a larger depth."""
        if depth < self.depth:
            raise ValueError("cannot lift to a smaller depth")
        return LocallyConstantFunction.from_callable(
            self.matrix, depth, lambda w: self.values[w[: self.depth]]
        )

    def _aligned(self, other):
        if self.matrix != other.matrix:
            raise TableError("functions live on different matrices")
        d = max(self.depth, other.depth)
        return self.lift(d), other.lift(d)

    def __add__(self, other):
        if isinstance(other, LocallyConstantFunction):
            a, b = self._aligned(other)
            return LocallyConstantFunction.from_vector(a.matrix, a.depth, a.vector + b.vector)
        return LocallyConstantFunction.from_vector(self.matrix, self.depth, self.vector + other)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c: float):
        return LocallyConstantFunction.from_vector(self.matrix, self.depth, c * self.vector)

    __rmul__ = __mul__


def evaluate(f: LocallyConstantFunction, x: PeriodicPoint) -> float:
    if f.matrix != x.matrix:
        raise TableError("function and point live on different matrices")
    return f(prefix(x.block, f.depth))


def sup_norm(f: LocallyConstantFunction) -> float:
    return float(np.max(np.abs(f.vector)))


def lipschitz_seminorm(f: LocallyConstantFunction, theta: float) -> float:
    """Least Lipschitz constant of f for ``d_theta``.

    Grouping words by their length-m prefix, the spread of f inside a group
    over ``theta**m`` dominates every pair agreeing on at least m symbols,
    and equals the ratio for pairs disagreeing exactly at m; the max over m
    is therefore the max over all pairs.
    """
    _check_theta(theta)
    best = 0.0
    for m in range(f.depth):
        lo: dict[Block, float] = {}
        hi: dict[Block, float] = {}
        for w, val in f.values.items():
            head = w[:m]
            if head in lo:
                lo[head] = min(lo[head], val)
                hi[head] = max(hi[head], val)
            else:
                lo[head] = hi[head] = val
        spread = max(hi[h] - lo[h] for h in lo)
        best = max(best, spread / theta**m)
    return best


def theta_norm(f: LocallyConstantFunction, theta: float) -> float:
    return lipschitz_seminorm(f, theta) + sup_norm(f)


def iter_points(blocks: Iterable[Block], matrix: TransitionMatrix):
    for b in blocks:
        yield PeriodicPoint._trusted(b, matrix)
