import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from inertia_eval import DataError
from inertia_eval.flips import (
    negative_flips_categorical,
    nfi_categorical,
    nfr_categorical,
    nfr_scalar,
)
from inertia_eval.inertia import symmetrize

OLD = [1, 1, 0, 0]
NEW = [0, 1, 0, 1]


def test_categorical_example():
    assert nfr_categorical(OLD, NEW) == 0.25
    assert nfi_categorical(OLD, NEW) == 0.5


def test_categorical_identity_and_nothing_to_lose():
    assert nfr_categorical(OLD, OLD) == 0.0
    assert nfr_categorical([0, 0, 0], [1, 0, 1]) == 0.0
    assert nfi_categorical([0, 0, 0], [1, 0, 1]) == 0.0


def test_nfi_undefined_for_perfect_model():
    with pytest.raises(DataError, match="NFI undefined: new model is perfect"):
        nfi_categorical([1, 0, 1], [1, 1, 1])


def test_categorical_validation():
    with pytest.raises(DataError):
        nfr_categorical([1, 2], [1, 0])
    with pytest.raises(DataError):
        nfr_categorical([1, 0, 1], [1, 0])


def test_symmetrized_nfr():
    forward, backward = nfr_categorical(OLD, NEW), nfr_categorical(NEW, OLD)
    assert backward == 0.25
    assert symmetrize(forward, backward) == 0.25


def test_scalar_identity():
    old = [[3.0, 3.2], [5.0, 4.8]]
    assert nfr_scalar(old, old) == 0.0


def test_scalar_one_of_three_unanimous():
    old = [[4.0, 4.0], [3.0, 3.0], [5.0, 5.0]]
    new = [[3.8, 3.0], [3.0, 3.2], [5.0, 6.0]]
    assert nfr_scalar(old, new) == pytest.approx(1 / 3)


def test_scalar_requires_unanimity():
    old = [[4.0, 4.0]]
    assert nfr_scalar(old, [[3.8, 4.0]]) == 0.0
    assert nfr_scalar(old, [[3.8, 4.2]]) == 0.0
    assert nfr_scalar(old, [[3.8, 3.8]]) == 1.0


def test_scalar_validation(caplog):
    with pytest.raises(DataError):
        nfr_scalar([[7.0, 1.0]], [[1.0, 1.0]])
    with pytest.raises(DataError):
        nfr_scalar([[2.0, 2.0]], [[2.0, 2.0, 2.0]])
    with caplog.at_level(logging.WARNING):
        assert nfr_scalar([[2.05, 2.0]], [[2.0, 1.8]]) == 1.0
    assert "0.2 grid" in caplog.text


labels = st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=40)


@given(labels)
def test_flip_count_bounded_by_new_errors(pairs):
    old = np.array([p[0] for p in pairs])
    new = np.array([p[1] for p in pairs])
    flips = negative_flips_categorical(old, new).sum()
    assert flips <= (new == 0).sum()
    assert nfr_categorical(old, old) == 0.0
    if (new == 0).any():
        assert nfr_categorical(old, new) == pytest.approx(nfi_categorical(old, new) * (new == 0).sum() / len(new))
