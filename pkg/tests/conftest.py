"""Shared fixtures: canonical datasets, random generators, brute-force oracles."""

from __future__ import annotations

import numpy as np
import pytest

from qperceptron import FeatureVector
from qperceptron.linops import StateVector

# Truth-table datasets.  XOR: output -1 on agreeing inputs; AND: +1 only on (1,1).
XOR_DATA = [
    FeatureVector((0, 0), -1),
    FeatureVector((0, 1), +1),
    FeatureVector((1, 0), +1),
    FeatureVector((1, 1), -1),
]
AND_DATA = [
    FeatureVector((0, 0), -1),
    FeatureVector((0, 1), -1),
    FeatureVector((1, 0), -1),
    FeatureVector((1, 1), +1),
]


def basis_state(dim: int, index: int) -> StateVector:
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def noisy_xor_data(flips: int, copies: int) -> list[FeatureVector]:
    """XOR dataset where each nominal pattern appears ``copies`` times and
    the first feature is flipped in ``flips`` of them (flip rate
    delta = flips/copies).  Labels are never affected."""
    assert 0 <= flips <= copies
    data = []
    for x1, x2, label in ((0, 0, -1), (0, 1, +1), (1, 0, +1), (1, 1, -1)):
        for k in range(copies):
            flipped = 1 - x1 if k < flips else x1
            data.append(FeatureVector((flipped, x2), label))
    return data


def noisy_xor_expected(delta: float) -> tuple[np.ndarray, np.ndarray]:
    """The flip-noise XOR operator pair built directly from its closed form,
    independent of the training path."""
    agree = np.zeros((4, 4), dtype=np.complex128)
    agree[0, 0] = agree[3, 3] = 1.0
    differ = np.zeros((4, 4), dtype=np.complex128)
    differ[1, 1] = differ[2, 2] = 1.0
    p_minus = (1.0 - delta) * agree + delta * differ
    p_plus = (1.0 - delta) * differ + delta * agree
    return p_minus, p_plus


def naive_expectation(matrix: np.ndarray, amps: np.ndarray) -> float:
    """Triple-loop oracle for <x|P|x>; deliberately avoids numpy reductions."""
    total = 0.0 + 0.0j
    n = len(amps)
    for i in range(n):
        for j in range(n):
            total += amps[i].conjugate() * matrix[i, j] * amps[j]
    return total.real


def random_unit_state(rng: np.random.Generator, dim: int) -> StateVector:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(vec / np.linalg.norm(vec))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2.0


@pytest.fixture
def np_rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
