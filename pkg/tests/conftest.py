import pytest

from sftequi import ParryMeasure, TransitionMatrix


@pytest.fixture
def golden():
    return TransitionMatrix.golden_mean()


@pytest.fixture
def full2():
    return TransitionMatrix.full_shift(2)


@pytest.fixture
def full3():
    return TransitionMatrix.full_shift(3)


@pytest.fixture
def three_state():
    return TransitionMatrix(((0, 1, 1), (1, 0, 1), (1, 1, 1)))


@pytest.fixture
def golden_parry(golden):
    return ParryMeasure.of(golden)


@pytest.fixture
def full2_parry(full2):
    return ParryMeasure.of(full2)


