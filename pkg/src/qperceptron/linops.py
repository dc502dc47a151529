"""Dense complex operator algebra: states, projectors, expectations.

This is the numeric substrate every other module builds on.  Values are
immutable after construction (the wrapped arrays are marked read-only), and
every operation is a pure function, so concurrent read-only use is safe.

Storage is dense complex128 throughout.  Target dimensions stay small
(at most 2**10), so simplicity wins over sparsity, and complex arithmetic
is kept even for the all-real constructions to stay forward compatible
with complex amplitude encodings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidInputError, NumericIntegrityError
from .policy import DEFAULT_POLICY, NumericPolicy

# Absolute imaginary part permitted in a Hermitian expectation value before
# the computation is declared corrupt.
IMAG_TOLERANCE = 1e-10


def _as_complex_vector(values: Iterable[complex]) -> np.ndarray:
    arr = np.array(list(values) if not isinstance(values, np.ndarray) else values,
                   dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidInputError(f"state vector must be 1-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex amplitude vector.

    Invariants are enforced on construction: the L2 norm must equal 1
    within 1e-12 and the dimension must be at least 1.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = _as_complex_vector(self.amplitudes)
        if arr.size < 1:
            raise InvalidInputError("state vector must have dimension >= 1")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-12:
            raise InvalidInputError(
                f"state vector must be unit norm, got ||v|| = {norm!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def normalized(cls, values: Iterable[complex]) -> "StateVector":
        """Build a state from arbitrary amplitudes by L2 normalization."""
        arr = _as_complex_vector(values)
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise InvalidInputError("cannot normalize the zero vector")
        return cls(arr / norm)


@dataclass(frozen=True)
class Operator:
    """Hermitian matrix acting on the state space.

    Hermiticity is checked elementwise within ``policy.eps_herm`` at
    construction; nothing downstream re-checks it.
    """

    entries: np.ndarray
    policy: NumericPolicy = field(default=DEFAULT_POLICY, compare=False)

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidInputError(f"operator must be square, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise InvalidInputError("operator must have dimension >= 1")
        defect = float(np.max(np.abs(arr - arr.conj().T)))
        if defect > self.policy.eps_herm:
            raise InvalidInputError(
                f"operator is not Hermitian: max |A - A^dag| = {defect:.3e}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def identity(dim: int) -> Operator:
    if dim < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {dim}")
    return Operator(np.eye(dim, dtype=np.complex128))


def projector(state: StateVector) -> Operator:
    """Rank-1 projector |x><x| of a unit state.

    The result is Hermitian, idempotent and has trace 1.
    """
    amps = state.amplitudes
    return Operator(np.outer(amps, amps.conj()))


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product of two states; the index of ``a`` varies slowest."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def expectation(op: Operator, state: StateVector) -> float:
    """Expectation value <x| P |x> of a Hermitian operator, as a real number.

    The imaginary part of the sandwich is guaranteed tiny for Hermitian
    input; it is checked against IMAG_TOLERANCE and then discarded.

    Raises
    ------
    InvalidInputError
        If operator and state dimensions disagree.
    NumericIntegrityError
        If the imaginary part is not negligible.
    """
    if op.dim != state.dim:
        raise InvalidInputError(
            f"dimension mismatch: operator is {op.dim}, state is {state.dim}")
    value = _kernels.expectation(op.entries, state.amplitudes)
    if abs(value.imag) >= IMAG_TOLERANCE:
        raise NumericIntegrityError(
            f"expectation of a Hermitian operator came out complex: {value!r}")
    return value.real


def eig_extrema(op: Operator) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian operator."""
    eigenvalues = np.linalg.eigvalsh(op.entries)
    return float(eigenvalues[0]), float(eigenvalues[-1])


def frobenius_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, "fro"))


def projector_sum(states: Sequence[StateVector], weights: Sequence[float] | None = None,
                  dim: int | None = None) -> np.ndarray:
    """Accumulate sum_k w_k |x_k><x_k| as a raw complex matrix.

    Helper for training and clustering; returns a writable ndarray rather
    than an Operator so callers can keep accumulating.
    """
    if dim is None:
        if not states:
            raise InvalidInputError("projector_sum needs states or an explicit dim")
        dim = states[0].dim
    acc = np.zeros((dim, dim), dtype=np.complex128)
    if weights is None:
        for s in states:
            _kernels.accumulate_outer(acc, s.amplitudes, 1.0)
    else:
        for s, w in zip(states, weights):
            _kernels.accumulate_outer(acc, s.amplitudes, float(w))
    return acc
