"""Numpy implementations of the hot kernels.

This backend is always available; the compiled extension in ``_ckernels.pyx``
implements the same three functions with identical semantics.  Keep the two
in sync: the test suite cross-checks them whenever the extension is built.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def expectation(op: np.ndarray, state: np.ndarray) -> complex:
    """Return the sandwich <state| op |state> as a complex number.

    No Hermiticity or normalization checks happen here; callers validate.
    """
    return complex(np.vdot(state, op @ state))


def accumulate_outer(acc: np.ndarray, state: np.ndarray, weight: float) -> None:
    """In-place acc += weight * |state><state|."""
    acc += weight * np.outer(state, state.conj())


def draw_outcomes(cumprobs: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Map uniform deviates in [0, 1) to outcome indices.

    Outcome for u is the first index i with u < cumprobs[i]; a u at or above
    the final cumulative value (possible when the probabilities do not sum
    exactly to 1) maps to the last index.  Must match the compiled scan
    bit for bit given identical inputs.
    """
    idx = np.searchsorted(cumprobs, uniforms, side="right")
    return np.minimum(idx, len(cumprobs) - 1).astype(np.int64)
