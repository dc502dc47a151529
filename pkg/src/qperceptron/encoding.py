"""Classical feature vectors and their amplitude encodings.

Two schemes are supported:

* ``qubit``: each feature x in [0, 1] becomes the single-qubit state
  sqrt(1-x)|0> + sqrt(x)|1>, and the full state is the tensor product in
  feature order, so n features live in a 2**n dimensional space.  Binary
  features reduce exactly to computational basis states.
* ``direct``: the raw non-negative feature vector is L2-normalized and used
  as real amplitudes in an n-dimensional space.  The normalization makes
  classification scale invariant, which is what proportional-control
  applications need.

The qubit amplitude map for fractional features is a declared choice of
this library: it is the continuous interpolation that collapses to basis
states at the endpoints.  Alternatives can be added as new scheme values.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, FeatureRangeError, InvalidInputError
from .linops import StateVector

VALID_LABELS = (-1, +1)


@dataclass(frozen=True)
class FeatureVector:
    """Raw classical features with an optional class label in {-1, +1}."""

    features: tuple[float, ...]
    label: Optional[int] = None

    def __post_init__(self) -> None:
        feats = tuple(float(x) for x in self.features)
        if len(feats) == 0:
            raise InvalidInputError("feature vector must not be empty")
        if self.label is not None and self.label not in VALID_LABELS:
            raise InvalidInputError(
                f"label must be -1 or +1 when present, got {self.label!r}")
        object.__setattr__(self, "features", feats)

    @property
    def arity(self) -> int:
        return len(self.features)


class EncodingScheme(str, enum.Enum):
    QUBIT = "qubit"
    DIRECT = "direct"


def encode_qubit(fv: FeatureVector) -> StateVector:
    """Tensor-product qubit encoding of features normalized to [0, 1].

    Raises FeatureRangeError naming the offending index if any feature
    falls outside the unit interval.
    """
    state = np.ones(1, dtype=np.complex128)
    for i, x in enumerate(fv.features):
        if not (0.0 <= x <= 1.0):
            raise FeatureRangeError(
                f"qubit encoding requires features in [0, 1]; "
                f"feature {i} is {x!r}")
        qubit = np.array([math.sqrt(1.0 - x), math.sqrt(x)], dtype=np.complex128)
        state = np.kron(state, qubit)
    return StateVector(state)


def encode_direct(fv: FeatureVector, allow_negative: bool = False) -> StateVector:
    """Channel-normalized encoding: features divided by their L2 norm.

    Signals are treated as non-negative channel amplitudes; pass
    ``allow_negative=True`` to lift that restriction.

    Raises
    ------
    FeatureRangeError
        If a feature is negative while ``allow_negative`` is False.
    DegenerateInputError
        If every feature is zero.
    """
    arr = np.array(fv.features, dtype=np.float64)
    if not allow_negative:
        bad = np.nonzero(arr < 0.0)[0]
        if bad.size:
            raise FeatureRangeError(
                f"direct encoding requires non-negative features; "
                f"feature {int(bad[0])} is {arr[bad[0]]!r}")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise DegenerateInputError("direct encoding of an all-zero feature vector")
    return StateVector((arr / norm).astype(np.complex128))


def encode(fv: FeatureVector, scheme: EncodingScheme,
           allow_negative: bool = False) -> StateVector:
    """Dispatch to the encoder for ``scheme``."""
    if scheme == EncodingScheme.QUBIT:
        return encode_qubit(fv)
    if scheme == EncodingScheme.DIRECT:
        return encode_direct(fv, allow_negative=allow_negative)
    raise InvalidInputError(f"unknown encoding scheme {scheme!r}")


def encoded_dim(scheme: EncodingScheme, arity: int) -> int:
    """State dimension produced by ``scheme`` on ``arity`` features."""
    return 2 ** arity if scheme == EncodingScheme.QUBIT else arity
