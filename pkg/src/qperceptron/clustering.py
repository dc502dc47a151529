"""Unsupervised two-class protocol over state vectors.

The first vector seeds class -1 as a rank-1 projector; class +1 starts out
as the formal complement I - P(-1).  Each later vector is assigned to the
class with the larger expectation and its projector added to that class's
sum; the first vector falling on the complement side seeds class +1 proper.
Ties go to the new/+1 branch, which keeps the "distant enough" reading and
makes the procedure deterministic.

Assignments depend on presentation order, which is inherent to the
protocol: first-seen vectors define the classes.  ``cluster_consensus``
quantifies that sensitivity by re-running over seeded permutations and
scoring pairwise co-clustering agreement.

Once both classes are seeded, later vectors are compared against the two
growing unnormalized projector sums, which biases toward the larger
cluster; ``count_normalized=True`` switches the comparison to per-member
means instead.  The unnormalized comparison is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import DataError, InvalidInputError
from .linops import StateVector
from .policy import DEFAULT_POLICY, NumericPolicy
from .sampling import RandomSource


@dataclass(frozen=True)
class SeparabilityResult:
    separable: bool
    witness: Optional[tuple[int, int]]


@dataclass(frozen=True)
class ClusterState:
    """Final operators and the assignment list of one protocol run."""

    p_minus: np.ndarray
    p_plus: Optional[np.ndarray]  # None while class +1 is only the formal complement
    assignments: tuple[tuple[int, int], ...]

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(label for _, label in self.assignments)


@dataclass(frozen=True)
class ConsensusReport:
    """Pairwise co-clustering fractions over permutation re-runs.

    ``co_cluster[i, j]`` is the fraction of runs in which vectors i and j
    landed in the same class; ``agreement`` is the mean over pairs of
    max(f, 1 - f), so 1.0 means every run produced the same partition.
    """

    co_cluster: np.ndarray
    agreement: float
    runs: int


def separability_check(vectors: Sequence[StateVector],
                       policy: NumericPolicy = DEFAULT_POLICY) -> SeparabilityResult:
    """Whether any pair satisfies <x|(I - 2|y><y|)|x> >= 0.

    Equivalently |<x|y>|^2 <= 1/2 for some pair: the protocol can only ever
    seed a second class when such a pair exists.  The comparison allows
    ``eps_zero`` slack so an exact mathematical boundary (overlap 1/2) is
    classified as separable despite last-ulp rounding.  Returns the first
    witness pair in index order when separable.
    """
    if len(vectors) < 2:
        raise InvalidInputError("separability check needs at least 2 vectors")
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            overlap = abs(np.vdot(vectors[i].amplitudes, vectors[j].amplitudes)) ** 2
            if 1.0 - 2.0 * overlap >= -policy.eps_zero:
                return SeparabilityResult(separable=True, witness=(i, j))
    return SeparabilityResult(separable=False, witness=None)


def _expectation(matrix: np.ndarray, state: StateVector) -> float:
    return _kernels.expectation(matrix, state.amplitudes).real


def cluster(vectors: Sequence[StateVector],
            count_normalized: bool = False) -> ClusterState:
    """Assign vectors to two classes in presentation order."""
    if len(vectors) == 0:
        raise InvalidInputError("cluster needs at least one vector")
    dim = vectors[0].dim
    for i, v in enumerate(vectors):
        if v.dim != dim:
            raise DataError(
                f"dimension mismatch: vector 0 has dim {dim}, vector {i} has {v.dim}")

    p_minus = np.zeros((dim, dim), dtype=np.complex128)
    _kernels.accumulate_outer(p_minus, vectors[0].amplitudes, 1.0)
    n_minus = 1
    p_plus: Optional[np.ndarray] = None
    n_plus = 0
    eye = np.eye(dim, dtype=np.complex128)
    assignments = [(0, -1)]

    for idx in range(1, len(vectors)):
        v = vectors[idx]
        if p_plus is None:
            e_minus = _expectation(p_minus, v)
            e_plus = _expectation(eye - p_minus, v)
        elif count_normalized:
            e_minus = _expectation(p_minus, v) / n_minus
            e_plus = _expectation(p_plus, v) / n_plus
        else:
            e_minus = _expectation(p_minus, v)
            e_plus = _expectation(p_plus, v)

        if e_minus > e_plus:
            _kernels.accumulate_outer(p_minus, v.amplitudes, 1.0)
            n_minus += 1
            assignments.append((idx, -1))
        else:
            if p_plus is None:
                p_plus = np.zeros((dim, dim), dtype=np.complex128)
            _kernels.accumulate_outer(p_plus, v.amplitudes, 1.0)
            n_plus += 1
            assignments.append((idx, +1))

    return ClusterState(p_minus=p_minus, p_plus=p_plus,
                        assignments=tuple(assignments))


def cluster_consensus(vectors: Sequence[StateVector], permutations: int,
                      rng: RandomSource,
                      count_normalized: bool = False) -> ConsensusReport:
    """Run the protocol over seeded shuffles and score order sensitivity.

    The given order is always the first run; the remaining
    ``permutations - 1`` runs use Fisher-Yates shuffles from ``rng``.
    """
    if len(vectors) < 2:
        raise InvalidInputError("consensus needs at least 2 vectors")
    if permutations < 1:
        raise InvalidInputError(f"permutations must be positive, got {permutations}")

    n = len(vectors)
    together = np.zeros((n, n), dtype=np.float64)
    for run in range(permutations):
        order = list(range(n)) if run == 0 else rng.permutation(n)
        labels_by_original = [0] * n
        run_labels = cluster([vectors[k] for k in order],
                             count_normalized=count_normalized).labels
        for pos, k in enumerate(order):
            labels_by_original[k] = run_labels[pos]
        same = np.equal.outer(labels_by_original, labels_by_original)
        together += same

    co_cluster = together / permutations
    pair_fractions = co_cluster[np.triu_indices(n, k=1)]
    agreement = float(np.mean(np.maximum(pair_fractions, 1.0 - pair_fractions)))
    return ConsensusReport(co_cluster=co_cluster, agreement=agreement,
                           runs=permutations)
