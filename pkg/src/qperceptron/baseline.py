"""Classical Rosenblatt perceptron, the comparison baseline.

Implements the literal error-correcting rule with no learning rate: on a
mismatch the weights move by (d - o) * x, an effective step of 2x.  The
sign convention maps a zero weighted sum to -1.

There is no bias term in the basic rule, so the separating hyperplane
passes through the origin; pass ``bias=True`` to append an always-1 feature
(AND, for instance, is only separable with it).  Samples are visited in
input order each epoch unless ``shuffle`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .encoding import FeatureVector
from .errors import InvalidInputError, TrainingError
from .sampling import RandomSource

UpdateTrace = tuple[tuple[int, tuple[float, ...]], ...]


@dataclass(frozen=True)
class LinearWeights:
    """Learned weights, one per feature plus the optional trailing bias."""

    weights: tuple[float, ...]
    update_count: int
    bias: bool = False
    updates: Optional[UpdateTrace] = field(default=None, repr=False, compare=False)

    @property
    def arity(self) -> int:
        return len(self.weights) - (1 if self.bias else 0)


@dataclass(frozen=True)
class NonConvergence:
    """Training exhausted its update budget without an error-free pass."""

    update_count: int
    weights: tuple[float, ...]
    bias: bool = False
    updates: Optional[UpdateTrace] = field(default=None, repr=False, compare=False)


def _inputs(fv: FeatureVector, bias: bool) -> list[float]:
    x = list(fv.features)
    if bias:
        x.append(1.0)
    return x


def predict_classical(w: LinearWeights, fv: FeatureVector) -> int:
    """sign(sum_i a_i x_i) with sign(y) = +1 for y > 0, -1 for y <= 0."""
    if fv.arity != w.arity:
        raise InvalidInputError(
            f"feature arity mismatch: weights expect {w.arity}, got {fv.arity}")
    x = _inputs(fv, w.bias)
    total = sum(a * xi for a, xi in zip(w.weights, x))
    return +1 if total > 0.0 else -1


def train_classical(data: Sequence[FeatureVector], max_updates: int,
                    rng: RandomSource, *, bias: bool = False,
                    shuffle: bool = False,
                    initial_weights: Sequence[float] | None = None,
                    record_updates: bool = False,
                    ) -> Union[LinearWeights, NonConvergence]:
    """Run the error-correcting rule until an error-free pass or budget out.

    Initial weights are drawn uniformly from [-1, 1] via ``rng`` unless
    ``initial_weights`` is given (length must include the bias slot when
    ``bias`` is on).  Returns ``LinearWeights`` on convergence, else
    ``NonConvergence`` carrying the exhausted update count.

    With ``record_updates`` the result's ``updates`` field holds the
    (sample_index, delta) pairs actually applied, for instrumentation.
    """
    if len(data) == 0:
        raise TrainingError("training data is empty")
    if max_updates < 1:
        raise InvalidInputError(f"max_updates must be positive, got {max_updates}")
    arity = data[0].arity
    for i, fv in enumerate(data):
        if fv.label is None:
            raise TrainingError(f"training sample {i} has no label")
        if fv.arity != arity:
            raise TrainingError(
                f"inconsistent feature arity at sample {i}: {fv.arity} != {arity}")

    n_weights = arity + (1 if bias else 0)
    if initial_weights is not None:
        if len(initial_weights) != n_weights:
            raise InvalidInputError(
                f"initial_weights must have length {n_weights}, got {len(initial_weights)}")
        weights = [float(v) for v in initial_weights]
    else:
        weights = [2.0 * u - 1.0 for u in rng.uniforms(n_weights)]

    samples = [(_inputs(fv, bias), fv.label) for fv in data]
    order = list(range(len(samples)))
    update_count = 0
    history: list[tuple[int, tuple[float, ...]]] = []

    def trace() -> Optional[UpdateTrace]:
        return tuple(history) if record_updates else None

    while True:
        if shuffle:
            order = rng.permutation(len(samples))
        clean_pass = True
        for k in order:
            x, d = samples[k]
            total = sum(a * xi for a, xi in zip(weights, x))
            o = +1 if total > 0.0 else -1
            if o == d:
                continue
            clean_pass = False
            if update_count >= max_updates:
                return NonConvergence(update_count=update_count,
                                      weights=tuple(weights), bias=bias,
                                      updates=trace())
            delta = tuple((d - o) * xi for xi in x)
            for i, dv in enumerate(delta):
                weights[i] += dv
            update_count += 1
            if record_updates:
                history.append((k, delta))
        if clean_pass:
            return LinearWeights(weights=tuple(weights),
                                 update_count=update_count, bias=bias,
                                 updates=trace())
