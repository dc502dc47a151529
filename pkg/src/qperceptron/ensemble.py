"""Multi-perceptron ensemble: n independent learners, one per degree of
freedom, each trained only on single-DOF activity with direct encoding.

Because each learner's class operators occupy subspaces rather than
splitting the whole space, an input that activates two DOFs at once shows
nonzero expectation on both learners simultaneously.  The ensemble
therefore recognizes two-DOF superposition classes it never saw in
training: n learners cover the 2n trained classes plus 2n(n-1) pairwise
combinations.

A DOF counts as active when its winning expectation clears a threshold
expressed as a fraction of that learner's mean training self-expectation
(recorded at training time), which makes "nonzero" meaningful under noise
and keeps decisions scale free.  The raw winning expectations are exposed
as the proportional-control signal; calibrating them to physical magnitudes
is out of scope.

``generate_synthetic`` stands in for real multichannel EMG recordings:
non-negative per-class template vectors plus truncated-at-zero Gaussian
channel noise, fully seed-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, NamedTuple, Sequence

import numpy as np

from .encoding import EncodingScheme, FeatureVector, encode_direct
from .errors import DataError, InvalidInputError
from .linops import expectation
from .perceptron import NormalizationMode, PerceptronModel, train
from .policy import DEFAULT_POLICY, NumericPolicy
from .sampling import RandomSource

SIGNS = (-1, +1)
DEFAULT_THRESHOLD = 0.5


class ClassCapacity(NamedTuple):
    originals: int
    superpositions: int


def class_capacity(n: int) -> ClassCapacity:
    """Class counts for an ensemble of ``n`` perceptrons.

    ``originals`` is the 2n single-DOF classes seen in training;
    ``superpositions`` counts the unseen two-DOF combinations,
    n(2n - 1) - n, the overflow-free form of (2n)!/(2(2n-2)!) - n.
    """
    if n < 1:
        raise InvalidInputError(f"ensemble size must be >= 1, got {n}")
    return ClassCapacity(originals=2 * n, superpositions=n * (2 * n - 1) - n)


@dataclass(frozen=True)
class EnsembleModel:
    """Per-DOF perceptrons plus their activation references."""

    perceptrons: tuple[PerceptronModel, ...]
    dof_names: tuple[str, ...]
    references: tuple[float, ...]
    n_features: int

    def __post_init__(self) -> None:
        if len(self.perceptrons) < 1:
            raise InvalidInputError("ensemble needs at least one perceptron")
        if not (len(self.perceptrons) == len(self.dof_names) == len(self.references)):
            raise InvalidInputError("per-DOF field lengths disagree")
        for i, p in enumerate(self.perceptrons):
            if p.encoding != EncodingScheme.DIRECT:
                raise InvalidInputError(f"DOF {i} model does not use direct encoding")
            if p.n_features != self.n_features:
                raise InvalidInputError(
                    f"DOF {i} expects {p.n_features} features, ensemble has "
                    f"{self.n_features}")

    @property
    def n_dof(self) -> int:
        return len(self.perceptrons)


@dataclass(frozen=True)
class EnsembleDecision:
    """Per-DOF labels and activations plus the derived decision kind.

    ``kind`` is "single" when exactly one DOF is active, "superposition"
    for two or more, "none" otherwise.  ``active_set`` holds the
    (dof_index, sign) pairs of the active DOFs; activations are the raw
    winning expectations regardless of thresholding.
    """

    per_dof: tuple[tuple[int, float], ...]
    kind: str
    active_set: frozenset[tuple[int, int]]


def train_ensemble(datasets: Sequence[Sequence[FeatureVector]],
                   norm_mode: NormalizationMode = NormalizationMode.RESCALE,
                   dof_names: Sequence[str] | None = None,
                   policy: NumericPolicy = DEFAULT_POLICY) -> EnsembleModel:
    """Train one perceptron per DOF on its own single-DOF dataset."""
    if len(datasets) < 1:
        raise InvalidInputError("train_ensemble needs at least one dataset")
    if dof_names is None:
        dof_names = tuple(f"dof{i}" for i in range(len(datasets)))
    if len(dof_names) != len(datasets):
        raise InvalidInputError("dof_names length must match the dataset count")

    arity = datasets[0][0].arity if len(datasets[0]) else 0
    perceptrons = []
    references = []
    for i, dataset in enumerate(datasets):
        try:
            model = train(dataset, encoding=EncodingScheme.DIRECT,
                          norm_mode=norm_mode, policy=policy)
        except Exception as exc:
            raise type(exc)(f"DOF {i}: {exc}") from exc
        if model.n_features != arity:
            raise DataError(
                f"DOF {i} dataset has feature arity {model.n_features}, "
                f"expected {arity}")
        self_expectations = [
            expectation(model.operator_for(fv.label), encode_direct(fv))
            for fv in dataset
        ]
        perceptrons.append(model)
        references.append(float(np.mean(self_expectations)))

    return EnsembleModel(perceptrons=tuple(perceptrons),
                         dof_names=tuple(dof_names),
                         references=tuple(references),
                         n_features=arity)


def classify_ensemble(model: EnsembleModel, fv: FeatureVector,
                      threshold: float = DEFAULT_THRESHOLD) -> EnsembleDecision:
    """Per-DOF argmax over {-1, +1} with threshold-gated activation.

    The input is encoded once (direct mode, so the decision is invariant
    under positive rescaling of the features).  A DOF's label is zeroed
    when its winning expectation falls below ``threshold`` times that
    DOF's training reference.
    """
    if not (0.0 <= threshold <= 1.0):
        raise InvalidInputError(f"threshold must lie in [0, 1], got {threshold!r}")
    if fv.arity != model.n_features:
        raise InvalidInputError(
            f"feature arity mismatch: ensemble expects {model.n_features}, "
            f"got {fv.arity}")
    state = encode_direct(fv)

    per_dof = []
    active = []
    for i, (p, reference) in enumerate(zip(model.perceptrons, model.references)):
        e_minus = expectation(p.p_minus, state)
        e_plus = expectation(p.p_plus, state)
        sign = -1 if e_minus >= e_plus else +1
        activation = max(e_minus, e_plus)
        label = sign if activation >= threshold * reference else 0
        per_dof.append((label, activation))
        if label != 0:
            active.append((i, sign))

    n_active = len(active)
    kind = "none" if n_active == 0 else ("single" if n_active == 1 else "superposition")
    return EnsembleDecision(per_dof=tuple(per_dof), kind=kind,
                            active_set=frozenset(active))


@dataclass(frozen=True)
class SyntheticEmgConfig:
    """Template-plus-noise generator configuration.

    ``templates`` maps (dof_index, sign) to a non-negative amplitude vector
    of length ``channels``; templates must be pairwise distinct and every
    (dof, sign) pair for dofs 0..n-1 must be present.
    """

    channels: int
    templates: Dict[tuple[int, int], tuple[float, ...]]
    noise_sigma: float
    seed: int

    def __post_init__(self) -> None:
        if self.channels < 1:
            raise InvalidInputError(f"channels must be >= 1, got {self.channels}")
        if self.noise_sigma < 0.0:
            raise InvalidInputError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        dofs = {dof for dof, _ in self.templates}
        if dofs != set(range(len(dofs))) or not dofs:
            raise InvalidInputError("template DOF indices must be 0..n-1")
        normalized: Dict[tuple[int, int], tuple[float, ...]] = {}
        for dof in sorted(dofs):
            for sign in SIGNS:
                if (dof, sign) not in self.templates:
                    raise InvalidInputError(f"missing template for ({dof}, {sign:+d})")
                t = tuple(float(v) for v in self.templates[(dof, sign)])
                if len(t) != self.channels:
                    raise InvalidInputError(
                        f"template ({dof}, {sign:+d}) has {len(t)} channels, "
                        f"expected {self.channels}")
                if any(v < 0.0 for v in t):
                    raise InvalidInputError(
                        f"template ({dof}, {sign:+d}) has negative entries")
                if all(v == 0.0 for v in t):
                    raise InvalidInputError(
                        f"template ({dof}, {sign:+d}) is all zero")
                normalized[(dof, sign)] = t
        seen = list(normalized.values())
        if len(set(seen)) != len(seen):
            raise InvalidInputError("templates must be pairwise distinct")
        object.__setattr__(self, "templates", normalized)

    @property
    def n_dof(self) -> int:
        return len(self.templates) // 2

    @classmethod
    def channel_disjoint(cls, channels: int, dofs: int, noise_sigma: float,
                         seed: int, amplitude: float = 1.0) -> "SyntheticEmgConfig":
        """One-hot templates on disjoint channels: (d, +1) -> channel 2d,
        (d, -1) -> channel 2d+1.  Needs channels >= 2*dofs."""
        if channels < 2 * dofs:
            raise InvalidInputError(
                f"channel-disjoint templates need channels >= 2*dofs "
                f"({channels} < {2 * dofs})")
        templates = {}
        for d in range(dofs):
            for sign, offset in ((+1, 0), (-1, 1)):
                t = [0.0] * channels
                t[2 * d + offset] = amplitude
                templates[(d, sign)] = tuple(t)
        return cls(channels=channels, templates=templates,
                   noise_sigma=noise_sigma, seed=seed)


class CombinedTrial(NamedTuple):
    features: tuple[float, ...]
    active: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class SyntheticDataset:
    """Per-DOF labeled training sets plus the held-out combined set."""

    training: tuple[tuple[FeatureVector, ...], ...]
    combined: tuple[CombinedTrial, ...]


def _noisy(template: np.ndarray, sigma: float, rng: RandomSource) -> np.ndarray:
    if sigma == 0.0:
        return template.copy()
    return np.clip(template + sigma * rng.normals(template.size), 0.0, None)


def generate_synthetic(config: SyntheticEmgConfig,
                       trials_per_class: int) -> SyntheticDataset:
    """Deterministic synthetic data: training singles and combined pairs.

    Generation order (fixed for reproducibility): training sets by dof then
    sign (-1 first) then trial; combined trials by dof pair (i < j), then
    first sign, then second sign, then trial.
    """
    if trials_per_class < 1:
        raise InvalidInputError(
            f"trials_per_class must be positive, got {trials_per_class}")
    rng = RandomSource(config.seed)
    n = config.n_dof
    templates = {key: np.array(value, dtype=np.float64)
                 for key, value in config.templates.items()}

    training = []
    for dof in range(n):
        dataset = []
        for sign in SIGNS:
            base = templates[(dof, sign)]
            for _ in range(trials_per_class):
                sample = _noisy(base, config.noise_sigma, rng)
                dataset.append(FeatureVector(tuple(sample), label=sign))
        training.append(tuple(dataset))

    combined = []
    for d1 in range(n):
        for d2 in range(d1 + 1, n):
            for s1 in SIGNS:
                for s2 in SIGNS:
                    base = templates[(d1, s1)] + templates[(d2, s2)]
                    truth = frozenset({(d1, s1), (d2, s2)})
                    for _ in range(trials_per_class):
                        sample = _noisy(base, config.noise_sigma, rng)
                        combined.append(CombinedTrial(tuple(sample), truth))

    return SyntheticDataset(training=tuple(training), combined=tuple(combined))
