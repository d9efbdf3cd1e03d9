"""Shared strategies and matrix samples for the test suite."""
import functools
import itertools

import numpy as np
from hypothesis import strategies as st

from sftequi import PeriodicPoint, TransitionMatrix

GOLDEN = (1 + 5**0.5) / 2


def random_primitive_matrices(s, count, seed):
    """Seeded primitive 0/1 matrices, rejection-sampled."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a = rng.integers(0, 2, size=(s, s))
        try:
            A = TransitionMatrix.from_array(a)
        except ValueError:
            continue
        if A.primitive and A not in out:
            out.append(A)
    return out


PRIMITIVE_MATRICES = [
    TransitionMatrix.golden_mean(),
    TransitionMatrix.full_shift(2),
    TransitionMatrix.full_shift(3),
    TransitionMatrix(((0, 1, 1), (1, 0, 1), (1, 1, 1))),
    TransitionMatrix(((0, 1, 0), (0, 0, 1), (1, 1, 0))),
    TransitionMatrix(((1, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 1))),
]

matrices = st.sampled_from(PRIMITIVE_MATRICES)


@functools.lru_cache(maxsize=None)
def closed_blocks(matrix, max_period):
    out = []
    for n in range(1, max_period + 1):
        out.extend(w for w in itertools.product(range(matrix.s), repeat=n)
                   if matrix.is_admissible(w + w[:1]))
    return tuple(out)


@st.composite
def periodic_points(draw, matrix, max_period=6):
    """A wrap-admissible block of period at most ``max_period``."""
    return PeriodicPoint(draw(st.sampled_from(closed_blocks(matrix, max_period))), matrix)
