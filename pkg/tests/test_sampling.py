"""Seeded measurement simulation: PRNG correctness and outcome statistics."""

import dataclasses
import math

import numpy as np
import pytest

from conftest import XOR_DATA, basis_state, noisy_xor_data
from qperceptron import FeatureVector
from qperceptron.encoding import EncodingScheme
from qperceptron.errors import (InvalidInputError, NoSupportError,
                                UnphysicalModelError)
from qperceptron.linops import Operator, StateVector
from qperceptron.perceptron import NormalizationMode, train
from qperceptron.sampling import (RandomSource, empirical_accuracy,
                                  outcome_distribution, sample_outcome,
                                  sample_outcomes)

# Reference outputs of the published splitmix64 algorithm for seed 1234567.
SPLITMIX64_REFERENCE = [
    6457827717110365317,
    3203168211198807973,
    9817491932198370423,
]


def reference_splitmix64(seed: int, count: int) -> list[int]:
    """Independent in-test transcription of the published stepping."""
    mask = (1 << 64) - 1
    outputs = []
    state = seed
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        outputs.append((z ^ (z >> 31)) & mask)
    return outputs


# ------------------------------------------------------------------ PRNG

def test_splitmix64_published_vectors():
    rng = RandomSource(1234567)
    assert [rng.next_uint64() for _ in range(3)] == SPLITMIX64_REFERENCE
    assert reference_splitmix64(1234567, 3) == SPLITMIX64_REFERENCE


def test_splitmix64_matches_reference_for_many_seeds():
    for seed in (0, 1, 42, 2**63, 2**64 - 1):
        rng = RandomSource(seed)
        assert [rng.next_uint64() for _ in range(16)] == \
            reference_splitmix64(seed, 16)


def test_uniforms_batch_equals_scalar_stepping():
    a, b = RandomSource(99), RandomSource(99)
    batch = a.uniforms(257)
    scalar = np.array([b.next_uniform() for _ in range(257)])
    assert np.array_equal(batch, scalar)
    assert a._state == b._state


def test_uniforms_are_in_unit_interval():
    u = RandomSource(5).uniforms(10_000)
    assert np.all(u >= 0.0) and np.all(u < 1.0)


def test_rejects_bad_seed():
    with pytest.raises(InvalidInputError):
        RandomSource(-1)
    with pytest.raises(InvalidInputError):
        RandomSource(2**64)


def test_split_produces_independent_streams():
    parent = RandomSource(7)
    child = parent.split()
    assert child.seed == reference_splitmix64(7, 1)[0]
    assert not np.array_equal(parent.uniforms(8), RandomSource(7).uniforms(8))


def test_permutation_is_a_permutation():
    perm = RandomSource(3).permutation(20)
    assert sorted(perm) == list(range(20))


def test_normals_have_plausible_moments():
    z = RandomSource(11).normals(100_001)
    assert z.shape == (100_001,)
    # 4-sigma bounds on mean and variance of 1e5 standard normals
    assert abs(z.mean()) < 4.0 / math.sqrt(z.size)
    assert abs(z.var() - 1.0) < 4.0 * math.sqrt(2.0 / z.size)


# ------------------------------------------------------------- sampling

def test_degenerate_distribution_always_returns_minus():
    model = train(XOR_DATA, EncodingScheme.QUBIT, NormalizationMode.UNIT)
    rng = RandomSource(123)
    outcomes = sample_outcomes(model, basis_state(4, 0), rng, 500)
    assert np.all(outcomes == -1)


def test_noisy_xor_distribution_is_one_minus_delta():
    model = train(noisy_xor_data(1, 5), EncodingScheme.QUBIT,
                  NormalizationMode.RESCALE)
    probs = outcome_distribution(model, basis_state(4, 0))
    assert probs[-1] == pytest.approx(0.8, abs=1e-12)
    assert probs[+1] == pytest.approx(0.2, abs=1e-12)
    assert probs[0] == pytest.approx(0.0, abs=1e-12)


def test_outcome_frequencies_converge_to_expectations():
    # 4-sigma binomial bound at N = 1e5 per frequency; flakiness is not a
    # concern because the seed is fixed.
    n = 100_000
    model = train(noisy_xor_data(1, 5), EncodingScheme.QUBIT,
                  NormalizationMode.RESCALE)
    state = basis_state(4, 0)
    probs = outcome_distribution(model, state)
    outcomes = sample_outcomes(model, state, RandomSource(2024), n)
    for label, p in probs.items():
        freq = float(np.count_nonzero(outcomes == label)) / n
        bound = 4.0 * math.sqrt(p * (1.0 - p) / n)
        assert abs(freq - p) <= bound, (label, freq, p)


def test_equal_expectations_sample_evenly():
    data = [FeatureVector((0.0,), -1), FeatureVector((1.0,), +1)]
    model = train(data, EncodingScheme.QUBIT, NormalizationMode.UNIT)
    state = StateVector(np.array([1.0, 1.0]) / math.sqrt(2.0))
    outcomes = sample_outcomes(model, state, RandomSource(8), 100_000)
    freq_minus = float(np.count_nonzero(outcomes == -1)) / outcomes.size
    assert 0.494 <= freq_minus <= 0.506


def test_sampling_is_seed_deterministic():
    model = train(noisy_xor_data(1, 4), EncodingScheme.QUBIT,
                  NormalizationMode.RESCALE)
    state = basis_state(4, 1)
    a = sample_outcomes(model, state, RandomSource(77), 1000)
    b = sample_outcomes(model, state, RandomSource(77), 1000)
    assert np.array_equal(a, b)
    assert sample_outcome(model, state, RandomSource(77)) == int(a[0])


def test_sampled_labels_always_have_support():
    model = train(noisy_xor_data(1, 4), EncodingScheme.QUBIT,
                  NormalizationMode.RESCALE)
    state = basis_state(4, 3)
    probs = outcome_distribution(model, state)
    outcomes = sample_outcomes(model, state, RandomSource(5), 10_000)
    for label in set(int(v) for v in outcomes):
        assert probs[label] > 0.0


def test_no_support_raises():
    base = train(XOR_DATA, EncodingScheme.QUBIT, NormalizationMode.UNIT)
    zero = Operator(np.zeros((4, 4)))
    hollow = dataclasses.replace(base, p_minus=zero, p_plus=zero, p_zero=zero)
    with pytest.raises(NoSupportError):
        sample_outcome(hollow, basis_state(4, 0), RandomSource(1))


def test_unphysical_model_raises():
    data = [FeatureVector((1, 0), -1), FeatureVector((1, 1), +1)]
    model = train(data, EncodingScheme.DIRECT, NormalizationMode.UNIT)
    assert not model.regime.physical
    # state along P0's negative eigendirection has expectation ~ -1/sqrt(2)
    eigvals, eigvecs = np.linalg.eigh(model.p_zero.entries)
    state = StateVector(eigvecs[:, 0])
    with pytest.raises(UnphysicalModelError):
        sample_outcome(model, state, RandomSource(1))


# ----------------------------------------------------- empirical accuracy

def test_pure_xor_accuracy_is_one():
    model = train(XOR_DATA, EncodingScheme.QUBIT, NormalizationMode.UNIT)
    accuracy = empirical_accuracy(model, XOR_DATA, 250, RandomSource(3))
    assert accuracy == 1.0


def test_noisy_xor_accuracy_is_one_minus_delta():
    model = train(noisy_xor_data(1, 5), EncodingScheme.QUBIT,
                  NormalizationMode.RESCALE)
    accuracy = empirical_accuracy(model, XOR_DATA, 25_000, RandomSource(41))
    assert accuracy == pytest.approx(0.8, abs=0.01)


def test_coin_flip_accuracy_is_half():
    data = [FeatureVector((0.0,), -1), FeatureVector((1.0,), +1)]
    model = train(data, EncodingScheme.QUBIT, NormalizationMode.UNIT)
    flip = [FeatureVector((0.5,), -1)]
    accuracy = empirical_accuracy(model, flip, 100_000, RandomSource(13))
    assert accuracy == pytest.approx(0.5, abs=0.01)


def test_accuracy_requires_labeled_nonempty_data():
    model = train(XOR_DATA, EncodingScheme.QUBIT, NormalizationMode.UNIT)
    with pytest.raises(InvalidInputError):
        empirical_accuracy(model, [], 10, RandomSource(1))
