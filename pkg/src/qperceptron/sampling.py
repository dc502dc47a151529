"""Measurement-statistics simulation.

Outcomes are drawn with probabilities proportional to the class expectation
values, normalized by their sum.  The normalization keeps the three-outcome
rule consistent with the complete two-outcome case, where the expectations
already sum to one.

Randomness comes from an explicit splitmix64 generator rather than a global
or library-versioned source, so every stochastic path in the package is
bit-exactly reproducible from a 64-bit seed.  The stepping is documented on
``RandomSource``; statistical tests fix their total draw counts so the
tolerances stay principled.
"""

from __future__ import annotations

import math
from typing import Dict, Sequence

import numpy as np

from . import _kernels
from .encoding import FeatureVector, encode
from .errors import DataError, InvalidInputError, NoSupportError, UnphysicalModelError
from .linops import StateVector
from .perceptron import (LABEL_ORDER, ClassificationResult, PerceptronModel,
                         raw_expectations)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TO_UNIT = 1.0 / (1 << 53)


class RandomSource:
    """Deterministic pseudorandom source: splitmix64.

    Stepping: every 64-bit output advances the internal state by the fixed
    odd constant 0x9E3779B97F4A7C15 (mod 2**64) and mixes the new state
    through two xor-shift-multiply rounds.  One uniform deviate consumes
    exactly one output: the top 53 bits scaled into [0, 1).  Derived
    helpers consume uniforms in documented amounts: ``normals(n)`` burns
    2*ceil(n/2), ``permutation(n)`` burns n-1.

    Identical seeds produce identical sequences, bit for bit.  A source is
    single-caller state; concurrent consumers must each own a source,
    e.g. via ``split()``.
    """

    algorithm = "splitmix64"

    def __init__(self, seed: int):
        seed = int(seed)
        if not (0 <= seed <= _MASK64):
            raise InvalidInputError(
                f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = seed
        self._state = seed

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def uniforms(self, n: int) -> np.ndarray:
        """Next ``n`` uniform deviates in [0, 1) as float64.

        Vectorized but sequence-identical to ``n`` single steps: state
        after k outputs is seed + k*gamma mod 2**64, so the whole batch is
        computed from an arange and the state advanced once.
        """
        if n < 0:
            raise InvalidInputError(f"n must be non-negative, got {n}")
        if n == 0:
            return np.empty(0, dtype=np.float64)
        steps = np.arange(1, n + 1, dtype=np.uint64)
        z = (np.uint64(self._state) + steps * np.uint64(_GAMMA))
        self._state = int(z[-1])
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
        return (z >> np.uint64(11)).astype(np.float64) * _TO_UNIT

    def next_uniform(self) -> float:
        return (self.next_uint64() >> 11) * _TO_UNIT

    def normals(self, n: int) -> np.ndarray:
        """Next ``n`` standard normal deviates via Box-Muller."""
        pairs = (n + 1) // 2
        u = self.uniforms(2 * pairs)
        r = np.sqrt(-2.0 * np.log1p(-u[0::2]))
        theta = 2.0 * math.pi * u[1::2]
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates permutation of range(n), high index down."""
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = int(self.next_uniform() * (i + 1))
            perm[i], perm[j] = perm[j], perm[i]
        return perm

    def split(self) -> "RandomSource":
        """Child source seeded from this stream; streams stay independent."""
        return RandomSource(self.next_uint64())


def outcome_distribution(model: PerceptronModel, state: StateVector) -> Dict[int, float]:
    """Outcome probabilities e_d / sum(e_d) in the fixed label order.

    Negative-within-tolerance expectations are clamped to 0 before
    normalization.

    Raises
    ------
    UnphysicalModelError
        If any expectation is below -eps_eig (the operator triple is not a
        physical POVM, e.g. a unit-mode model with negative P0).
    NoSupportError
        If every expectation is at most eps_zero.
    """
    raw = raw_expectations(model, state)
    eps_eig = model.policy.eps_eig
    eps_zero = model.policy.eps_zero
    clamped: Dict[int, float] = {}
    for label, value in raw.items():
        if value < -eps_eig:
            raise UnphysicalModelError(
                f"expectation of class {label:+d} is {value!r}; the model is "
                f"not a physical POVM (consider rescale normalization)")
        clamped[label] = max(value, 0.0)
    total = sum(clamped.values())
    if all(value <= eps_zero for value in clamped.values()):
        raise NoSupportError("every class expectation is numerically zero")
    return {label: clamped[label] / total for label in LABEL_ORDER}


def sample_outcomes(model: PerceptronModel, state: StateVector,
                    rng: RandomSource, n: int) -> np.ndarray:
    """Draw ``n`` classification outcomes; one uniform consumed per draw."""
    probs = outcome_distribution(model, state)
    cum = np.cumsum([probs[label] for label in LABEL_ORDER])
    idx = _kernels.draw_outcomes(cum, rng.uniforms(n))
    return np.asarray(LABEL_ORDER, dtype=np.int64)[idx]


def sample_outcome(model: PerceptronModel, state: StateVector,
                   rng: RandomSource) -> int:
    """Draw one outcome label with probability e_d / sum(e_d)."""
    return int(sample_outcomes(model, state, rng, 1)[0])


def classify_probabilistic(model: PerceptronModel, state: StateVector,
                           rng: RandomSource) -> ClassificationResult:
    """One sampled outcome packaged with the outcome distribution."""
    probs = outcome_distribution(model, state)
    label = sample_outcome(model, state, rng)
    return ClassificationResult(label=label, expectations=probs,
                                mode="probabilistic")


def empirical_accuracy(model: PerceptronModel, data: Sequence[FeatureVector],
                       trials: int, rng: RandomSource) -> float:
    """Fraction of sampled outcomes matching the true labels.

    Each datum is sampled ``trials`` times, in data order; datum i consumes
    uniforms [i*trials, (i+1)*trials) of the stream.
    """
    if len(data) == 0:
        raise InvalidInputError("empirical_accuracy needs at least one datum")
    if trials < 1:
        raise InvalidInputError(f"trials must be positive, got {trials}")
    matches = 0
    for i, fv in enumerate(data):
        if fv.label is None:
            raise DataError(f"datum {i} has no label to score against")
        state = encode(fv, model.encoding, allow_negative=model.allow_negative)
        outcomes = sample_outcomes(model, state, rng, trials)
        matches += int(np.count_nonzero(outcomes == fv.label))
    return matches / (len(data) * trials)
