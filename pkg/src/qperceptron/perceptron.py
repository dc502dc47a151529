"""Projector-sum POVM perceptron.

Training sums the projectors of the encoded samples per class, applies a
normalization mode, and completes the pair with the residual operator
P0 = I - P(-1) - P(+1).  No iterative optimization is involved.

The trained pair lands in one of four regimes, diagnosed from two defect
norms and reported with the numeric evidence:

* A: orthogonal and complete      -- error-free two-class classification
* B: orthogonal, incomplete       -- a genuine third "unseen" class exists
* C: overlapping, complete        -- probabilistic two-class classification
* D: overlapping, incomplete      -- the general case; P0 may have negative
                                     eigenvalues, making the triple
                                     unrealizable as a physical measurement

Normalization modes resolve the underdetermined per-class constants:

* ``unit``    -- raw projector sums, no division.  Reproduces the textbook
                 XOR/AND operators and permits the unphysical-P0 phenomenon.
* ``count``   -- each class operator is the mean of its sample projectors.
* ``rescale`` -- count means jointly divided by the largest eigenvalue of
                 their sum, which forces P(-1) + P(+1) <= I and therefore a
                 positive semidefinite P0.  The default.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Sequence

import numpy as np

from .encoding import EncodingScheme, FeatureVector, encode
from .errors import DataError, InvalidInputError, TrainingError
from .linops import Operator, StateVector, eig_extrema, expectation, frobenius_norm, projector_sum
from .policy import DEFAULT_POLICY, NumericPolicy

# Deterministic label order: used for argmax tie-breaking and for the
# cumulative-probability layout in sampling.
LABEL_ORDER = (-1, +1, 0)


class NormalizationMode(str, enum.Enum):
    COUNT = "count"
    RESCALE = "rescale"
    UNIT = "unit"


@dataclass(frozen=True)
class RegimeReport:
    """Four-way diagnosis of a trained operator pair, with evidence.

    ``orthogonality_defect`` is ||P(-1) P(+1)||_F, ``completeness_defect``
    is ||P(-1) + P(+1) - I||_F; a defect counts as zero when it is at most
    ``eps_zero`` of the policy in force.  ``physical`` records whether P0
    is positive semidefinite within eigenvalue slack.
    """

    case: str
    orthogonality_defect: float
    completeness_defect: float
    p_zero_min_eig: float
    physical: bool


@dataclass(frozen=True)
class ClassificationResult:
    """Label decision plus per-class expectation values.

    Expectations below ``eps_zero`` are flushed to exact zeros, so noise
    never shows up as a spurious nonzero score.  ``mode`` records how the
    label was produced ("argmax" or "probabilistic").
    """

    label: int
    expectations: Dict[int, float]
    mode: str


@dataclass(frozen=True)
class PerceptronModel:
    """Trained POVM triple plus encoding and normalization configuration."""

    p_minus: Operator
    p_plus: Operator
    p_zero: Operator
    encoding: EncodingScheme
    norm_mode: NormalizationMode
    regime: RegimeReport
    dim: int
    n_features: int
    allow_negative: bool = False
    policy: NumericPolicy = field(default=DEFAULT_POLICY, compare=False)

    def operator_for(self, label: int) -> Operator:
        if label == -1:
            return self.p_minus
        if label == +1:
            return self.p_plus
        if label == 0:
            return self.p_zero
        raise InvalidInputError(f"no class operator for label {label!r}")


def diagnose_regime(p_minus: Operator, p_plus: Operator,
                    policy: NumericPolicy = DEFAULT_POLICY) -> RegimeReport:
    """Classify an operator pair into regime A/B/C/D from its defect norms."""
    if p_minus.dim != p_plus.dim:
        raise InvalidInputError(
            f"operator dimensions disagree: {p_minus.dim} vs {p_plus.dim}")
    a, b = p_minus.entries, p_plus.entries
    orth = frobenius_norm(a @ b)
    compl = frobenius_norm(a + b - np.eye(p_minus.dim))
    orthogonal = orth <= policy.eps_zero
    complete = compl <= policy.eps_zero
    if orthogonal and complete:
        case = "A"
    elif orthogonal:
        case = "B"
    elif complete:
        case = "C"
    else:
        case = "D"
    p_zero = residual_operator(p_minus, p_plus)
    min_eig, _ = eig_extrema(p_zero)
    return RegimeReport(
        case=case,
        orthogonality_defect=orth,
        completeness_defect=compl,
        p_zero_min_eig=min_eig,
        physical=min_eig >= -policy.eps_eig,
    )


def residual_operator(p_minus: Operator, p_plus: Operator) -> Operator:
    """The completion operator P0 = I - P(-1) - P(+1)."""
    dim = p_minus.dim
    return Operator(np.eye(dim, dtype=np.complex128) - p_minus.entries - p_plus.entries)


def train(data: Sequence[FeatureVector],
          encoding: EncodingScheme = EncodingScheme.QUBIT,
          norm_mode: NormalizationMode = NormalizationMode.RESCALE,
          *,
          allow_negative: bool = False,
          policy: NumericPolicy = DEFAULT_POLICY) -> PerceptronModel:
    """Build the POVM triple from labeled feature vectors.

    Every sample is encoded and its projector added to its class sum, so
    duplicate samples contribute multiplicity; this is exactly how noisy
    label/feature frequencies end up as fractional operator weights.

    Raises
    ------
    TrainingError
        If the data is empty or one of the two classes is absent.
    DataError
        If samples disagree on feature arity or a sample is unlabeled.
    """
    if len(data) == 0:
        raise TrainingError("training data is empty")
    arity = data[0].arity
    for i, fv in enumerate(data):
        if fv.label is None:
            raise DataError(f"training sample {i} has no label")
        if fv.arity != arity:
            raise DataError(
                f"inconsistent feature arity: sample 0 has {arity}, "
                f"sample {i} has {fv.arity}")
    by_class: Dict[int, list[StateVector]] = {-1: [], +1: []}
    for fv in data:
        by_class[fv.label].append(encode(fv, encoding, allow_negative=allow_negative))
    for label in (-1, +1):
        if not by_class[label]:
            raise TrainingError(f"training data contains no samples with label {label:+d}")

    dim = by_class[-1][0].dim
    sums = {label: projector_sum(states, dim=dim) for label, states in by_class.items()}

    if norm_mode == NormalizationMode.UNIT:
        minus, plus = sums[-1], sums[+1]
    elif norm_mode == NormalizationMode.COUNT:
        minus = sums[-1] / len(by_class[-1])
        plus = sums[+1] / len(by_class[+1])
    elif norm_mode == NormalizationMode.RESCALE:
        minus = sums[-1] / len(by_class[-1])
        plus = sums[+1] / len(by_class[+1])
        _, lam_max = eig_extrema(Operator(minus + plus, policy=policy))
        minus = minus / lam_max
        plus = plus / lam_max
    else:
        raise InvalidInputError(f"unknown normalization mode {norm_mode!r}")

    p_minus = Operator(minus, policy=policy)
    p_plus = Operator(plus, policy=policy)
    return PerceptronModel(
        p_minus=p_minus,
        p_plus=p_plus,
        p_zero=residual_operator(p_minus, p_plus),
        encoding=encoding,
        norm_mode=norm_mode,
        regime=diagnose_regime(p_minus, p_plus, policy),
        dim=dim,
        n_features=arity,
        allow_negative=allow_negative,
        policy=policy,
    )


def regime(model: PerceptronModel) -> RegimeReport:
    """The stored regime report; recomputable idempotently from the operators."""
    return model.regime


def raw_expectations(model: PerceptronModel, state: StateVector) -> Dict[int, float]:
    """Unclamped expectation values for the three class operators."""
    if state.dim != model.dim:
        raise InvalidInputError(
            f"dimension mismatch: model is {model.dim}, state is {state.dim}")
    return {label: expectation(model.operator_for(label), state)
            for label in LABEL_ORDER}


def _flush(value: float, eps_zero: float) -> float:
    return 0.0 if value < eps_zero else value


def classify(model: PerceptronModel, state: StateVector,
             mode: str = "argmax") -> ClassificationResult:
    """Deterministic classification by maximal expectation value.

    Expectations below ``eps_zero`` are reported as exact zeros.  Ties are
    broken in the fixed order -1, +1, 0.
    """
    if mode != "argmax":
        raise InvalidInputError(
            f"classify supports mode='argmax'; use the sampling module for "
            f"probabilistic classification (got {mode!r})")
    raw = raw_expectations(model, state)
    cleaned = {label: _flush(value, model.policy.eps_zero)
               for label, value in raw.items()}
    best = max(LABEL_ORDER, key=lambda label: cleaned[label])
    return ClassificationResult(label=best, expectations=cleaned, mode="argmax")


def classify_feature(model: PerceptronModel, fv: FeatureVector,
                     mode: str = "argmax") -> ClassificationResult:
    """Encode a feature vector with the model's scheme, then classify."""
    if fv.arity != model.n_features:
        raise InvalidInputError(
            f"feature arity mismatch: model expects {model.n_features}, got {fv.arity}")
    state = encode(fv, model.encoding, allow_negative=model.allow_negative)
    return classify(model, state, mode=mode)
