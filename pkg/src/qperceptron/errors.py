"""Exception hierarchy.

The CLI maps these onto its exit-code contract: usage errors exit 1,
data/ingest errors exit 2, numerical or regime errors exit 3.
"""


class QuantumPerceptronError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(QuantumPerceptronError):
    """Malformed argument: wrong dimension, empty input, bad enum value."""


class FeatureRangeError(InvalidInputError):
    """A feature value falls outside the range the encoding admits."""


class DegenerateInputError(InvalidInputError):
    """Input carries no usable signal (e.g. an all-zero feature vector)."""


class NumericIntegrityError(QuantumPerceptronError):
    """An internal numeric guarantee was violated (non-real expectation)."""


class TrainingError(QuantumPerceptronError):
    """Training data cannot produce a model (empty, or a class is missing)."""


class DataError(QuantumPerceptronError):
    """Dataset-level problem: ragged rows, bad cells, inconsistent arity."""


class NoSupportError(QuantumPerceptronError):
    """All class expectations vanish; there is nothing to sample from."""


class UnphysicalModelError(QuantumPerceptronError):
    """An expectation is negative beyond tolerance; the operator triple is
    not a physical POVM (typically a unit-mode model with negative P0)."""


class ModelFormatError(QuantumPerceptronError):
    """A persisted model file is unreadable or fails revalidation."""
