import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sftequi import (LocallyConstantFunction, PeriodicPoint, TransitionMatrix, Word,
                     evaluate, has_all_self_loops, is_irreducible, is_primitive,
                     lipschitz_seminorm, shift, sup_norm, theta_distance, theta_norm)
from sftequi.errors import InadmissiblePoint, InadmissibleWord, InvalidMatrix, TableError

from .helpers import PRIMITIVE_MATRICES, matrices, periodic_points


def brute_primitive(A, max_power=50):
    a = np.array(A.entries, dtype=object)
    power = a.copy()
    for _ in range(max_power):
        if all(x > 0 for x in power.flat):
            return True
        power = power.dot(a)
    return False


def brute_seminorm(f, theta):
    best = 0.0
    for w, w2 in itertools.combinations(f.words, 2):
        t = next(i for i in range(f.depth) if w[i] != w2[i])
        best = max(best, abs(f.values[w] - f.values[w2]) / theta**t)
    return best


class TestTransitionMatrix:
    def test_rejects_bad_shapes(self):
        with pytest.raises(InvalidMatrix):
            TransitionMatrix(((1,),))
        with pytest.raises(InvalidMatrix):
            TransitionMatrix(((1, 1), (1,)))
        with pytest.raises(InvalidMatrix):
            TransitionMatrix(((1, 2), (1, 0)))

    def test_rejects_dead_symbols(self):
        with pytest.raises(InvalidMatrix):
            TransitionMatrix(((1, 1), (0, 0)))
        with pytest.raises(InvalidMatrix):
            TransitionMatrix(((1, 0), (1, 0)))

    def test_admissible_words_lexicographic(self, golden):
        assert golden.admissible_words(2) == ((0, 0), (0, 1), (1, 0))
        assert len(golden.admissible_words(5)) == 13

    @pytest.mark.parametrize("entries,expected", [
        (((1, 1), (1, 0)), True),
        (((1, 0), (0, 1)), False),
        (((1, 1, 1),) * 3, True),
        (((0, 1), (1, 0)), True),
        (((1, 1), (0, 1)), False),
    ])
    def test_irreducible(self, entries, expected):
        A = TransitionMatrix(entries)
        assert is_irreducible(A) is expected
        assert A.irreducible is expected

    @pytest.mark.parametrize("entries,expected", [
        (((1, 1), (1, 0)), True),
        (((0, 1), (1, 0)), False),
        (((1, 1), (1, 1)), True),
        (((0, 1, 0), (0, 0, 1), (1, 1, 0)), True),
        (((0, 1, 0), (0, 0, 1), (1, 0, 0)), False),
    ])
    def test_primitive(self, entries, expected):
        A = TransitionMatrix(entries)
        assert is_primitive(A) is expected
        assert brute_primitive(A) is expected

    def test_primitive_matches_brute_force_on_all_3x3(self):
        for bits in itertools.product((0, 1), repeat=9):
            try:
                A = TransitionMatrix.from_array(np.reshape(bits, (3, 3)))
            except InvalidMatrix:
                continue
            assert is_primitive(A) == brute_primitive(A), A.entries

    def test_self_loop_condition_is_stronger(self, golden, full2):
        assert has_all_self_loops(full2)
        assert not has_all_self_loops(golden)
        assert golden.primitive


class TestPoints:
    def test_word_admissibility(self, golden):
        assert len(Word((0, 1, 0), golden)) == 3
        with pytest.raises(InadmissibleWord):
            Word((1, 1), golden)

    def test_periodic_point_wrap(self, golden):
        PeriodicPoint((0, 1), golden)
        with pytest.raises(InadmissiblePoint):
            PeriodicPoint((1,), golden)
        with pytest.raises(InadmissiblePoint):
            PeriodicPoint((1, 0, 1), golden)

    def test_coordinates_wrap(self, golden):
        x = PeriodicPoint((0, 0, 1), golden)
        assert [x[i] for i in range(7)] == [0, 0, 1, 0, 0, 1, 0]

    def test_sequence_equality(self, full2):
        assert PeriodicPoint((0, 1), full2) == PeriodicPoint((0, 1, 0, 1), full2)
        assert hash(PeriodicPoint((0, 1), full2)) == hash(PeriodicPoint((0, 1, 0, 1), full2))
        assert PeriodicPoint((0, 1), full2) != PeriodicPoint((1, 0), full2)

    def test_shift(self, full2):
        assert shift(PeriodicPoint((0, 1, 1), full2)).block == (1, 1, 0)
        assert shift(PeriodicPoint((0,), full2)).block == (0,)
        x = PeriodicPoint((0, 1, 1, 0, 1), full2)
        y = x
        for _ in range(5):
            y = shift(y)
        assert y == x

    def test_theta_distance_examples(self, full2):
        x = PeriodicPoint((0, 1), full2)
        assert theta_distance(x, x, 0.5) == 0.0
        assert theta_distance(x, PeriodicPoint((1,), full2), 0.5) == 1.0
        # 010101... vs 011011... agree on indices 0 and 1, differ at 2
        y = PeriodicPoint((0, 1, 1), full2)
        expanded = [(x[i], y[i]) for i in range(math.lcm(2, 3))]
        t = next(i for i, (a, b) in enumerate(expanded) if a != b)
        assert t == 2
        assert theta_distance(x, y, 0.5) == 0.25
        # same sequence under different blocks
        assert theta_distance(x, PeriodicPoint((0, 1, 0, 1, 0, 1), full2), 0.3) == 0.0

    def test_theta_distance_late_disagreement(self, full2):
        x = PeriodicPoint((0, 0, 0, 1), full2)
        y = PeriodicPoint((0, 0, 0, 1, 0, 0, 0, 0), full2)
        # sequences first differ at index 7
        assert theta_distance(x, y, 0.5) == 0.5**7

    def test_theta_range_checked(self, full2):
        x = PeriodicPoint((0,), full2)
        with pytest.raises(ValueError):
            theta_distance(x, x, 1.0)


@settings(max_examples=200, deadline=None)
@given(data=st.data(), A=matrices, theta=st.floats(0.05, 0.95))
def test_theta_distance_is_ultrametric(data, A, theta):
    x, y, z = (data.draw(periodic_points(A)) for _ in range(3))
    dxy, dyz, dxz = (theta_distance(x, y, theta), theta_distance(y, z, theta),
                     theta_distance(x, z, theta))
    assert dxy == theta_distance(y, x, theta)
    assert (dxy == 0) == (x == y)
    assert dxz <= max(dxy, dyz) + 1e-15


class TestFunctions:
    def test_table_must_match_words(self, golden):
        with pytest.raises(TableError):
            LocallyConstantFunction(golden, 2, {(0, 0): 1.0, (0, 1): 2.0})
        with pytest.raises(TableError):
            LocallyConstantFunction(golden, 2, {(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 4})

    def test_evaluate(self, golden, full2):
        f = LocallyConstantFunction(full2, 1, {(0,): 2.0, (1,): -1.0})
        assert evaluate(f, PeriodicPoint((0,), full2)) == 2.0
        g = LocallyConstantFunction(golden, 2, {(0, 0): 1.0, (0, 1): 7.0, (1, 0): 3.0})
        assert evaluate(g, PeriodicPoint((0, 1), golden)) == 7.0
        h = LocallyConstantFunction.from_callable(golden, 3, lambda w: 100 * w[0] + 10 * w[1] + w[2])
        assert evaluate(h, PeriodicPoint((0,), golden)) == 0.0
        assert evaluate(h, PeriodicPoint((1, 0), golden)) == 101.0

    def test_seminorm_examples(self, full2):
        assert lipschitz_seminorm(LocallyConstantFunction.constant(full2, 3.0, 3), 0.5) == 0.0
        ind = LocallyConstantFunction(full2, 1, {(0,): 0.0, (1,): 1.0})
        for theta in (0.1, 0.5, 0.9):
            assert lipschitz_seminorm(ind, theta) == 1.0
        f = LocallyConstantFunction(full2, 2, {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1})
        assert brute_seminorm(f, 0.5) == 2.0
        assert lipschitz_seminorm(f, 0.5) == 2.0

    def test_norm_examples(self, full2):
        assert theta_norm(LocallyConstantFunction.constant(full2, -4.0), 0.5) == 4.0
        assert theta_norm(LocallyConstantFunction.indicator(full2, 0), 0.5) == 2.0
        f = LocallyConstantFunction.random(full2, 3, np.random.default_rng(1))
        assert theta_norm(2 * f, 0.3) == pytest.approx(2 * theta_norm(f, 0.3), rel=1e-15)

    def test_lift_preserves_values(self, golden):
        f = LocallyConstantFunction.random(golden, 2, np.random.default_rng(0))
        g = f.lift(4)
        assert all(g.values[w] == f.values[w[:2]] for w in g.words)
        assert lipschitz_seminorm(g, 0.5) == lipschitz_seminorm(f, 0.5)


@settings(max_examples=150, deadline=None)
@given(A=matrices, depth=st.integers(1, 4), seed=st.integers(0, 2**32 - 1),
       theta=st.floats(0.05, 0.95))
def test_seminorm_matches_pairwise_brute_force(A, depth, seed, theta):
    f = LocallyConstantFunction.random(A, depth, np.random.default_rng(seed))
    assert lipschitz_seminorm(f, theta) == pytest.approx(brute_seminorm(f, theta), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(data=st.data(), A=matrices, depth=st.integers(1, 4), seed=st.integers(0, 2**32 - 1),
       theta=st.floats(0.05, 0.95))
def test_lipschitz_bound_on_points(data, A, depth, seed, theta):
    f = LocallyConstantFunction.random(A, depth, np.random.default_rng(seed))
    x, y = data.draw(periodic_points(A)), data.draw(periodic_points(A))
    lip = lipschitz_seminorm(f, theta)
    assert abs(evaluate(f, x) - evaluate(f, y)) <= lip * theta_distance(x, y, theta) + 1e-12


@settings(max_examples=100, deadline=None)
@given(data=st.data(), A=matrices, depth=st.integers(1, 3), seed=st.integers(0, 2**32 - 1))
def test_shifted_evaluation_reads_coordinates_one_to_k(data, A, depth, seed):
    f = LocallyConstantFunction.random(A, depth, np.random.default_rng(seed))
    x = data.draw(periodic_points(A))
    assert evaluate(f, shift(x)) == f(tuple(x[i] for i in range(1, depth + 1)))


@settings(max_examples=100, deadline=None)
@given(A=matrices, depth=st.integers(1, 3), seed=st.integers(0, 2**32 - 1),
       c=st.floats(-5, 5), theta=st.floats(0.05, 0.95))
def test_theta_norm_is_a_norm(A, depth, seed, c, theta):
    rng = np.random.default_rng(seed)
    f = LocallyConstantFunction.random(A, depth, rng)
    g = LocallyConstantFunction.random(A, depth, rng)
    assert theta_norm(f + g, theta) <= theta_norm(f, theta) + theta_norm(g, theta) + 1e-12
    assert theta_norm(c * f, theta) == pytest.approx(abs(c) * theta_norm(f, theta), abs=1e-12)
    assert sup_norm(f) <= theta_norm(f, theta)
