"""Operator algebra: construction invariants and brute-force agreement."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import naive_expectation, random_hermitian, random_unit_state
from qperceptron.errors import InvalidInputError, NumericIntegrityError
from qperceptron.linops import (Operator, StateVector, eig_extrema, expectation,
                                frobenius_norm, identity, projector,
                                tensor_product)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def unit_states(max_dim=8):
    """Hypothesis strategy: normalized complex state of dim 1..max_dim."""
    def build(parts):
        re, im = parts
        vec = np.array(re, dtype=np.float64) + 1j * np.array(im, dtype=np.float64)
        norm = np.linalg.norm(vec)
        if norm < 1e-3:
            vec = vec + 1.0
            norm = np.linalg.norm(vec)
        return StateVector(vec / norm)

    comps = st.floats(-1.0, 1.0, allow_nan=False)
    return st.integers(1, max_dim).flatmap(
        lambda d: st.tuples(
            st.lists(comps, min_size=d, max_size=d),
            st.lists(comps, min_size=d, max_size=d),
        )
    ).map(build)


# ------------------------------------------------------------ construction

def test_state_vector_rejects_non_unit_norm():
    with pytest.raises(InvalidInputError):
        StateVector(np.array([1.0, 1.0]))


def test_state_vector_rejects_empty():
    with pytest.raises(InvalidInputError):
        StateVector(np.array([], dtype=complex))


def test_operator_rejects_non_hermitian():
    with pytest.raises(InvalidInputError):
        Operator(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_operator_rejects_non_square():
    with pytest.raises(InvalidInputError):
        Operator(np.zeros((2, 3)))


def test_values_are_immutable():
    s = StateVector(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        s.amplitudes[0] = 2.0
    op = projector(s)
    with pytest.raises(ValueError):
        op.entries[0, 0] = 5.0


# -------------------------------------------------------------- projector

def test_projector_basis_state():
    p = projector(StateVector(np.array([1.0, 0.0])))
    assert_allclose(p.entries, np.array([[1, 0], [0, 0]]), atol=0)


def test_projector_plus_state():
    p = projector(StateVector(np.array([INV_SQRT2, INV_SQRT2])))
    assert_allclose(p.entries, np.full((2, 2), 0.5), atol=1e-15)


def test_projector_four_dim_basis():
    p = projector(StateVector(np.array([0.0, 1.0, 0.0, 0.0])))
    expected = np.zeros((4, 4))
    expected[1, 1] = 1.0
    assert_allclose(p.entries, expected, atol=0)


@settings(deadline=None)
@given(unit_states(max_dim=16))
def test_projector_idempotent_trace_one(state):
    p = projector(state).entries
    assert frobenius_norm(p @ p - p) < 1e-10
    assert abs(np.trace(p).real - 1.0) <= 1e-12
    # rank 1: second-largest eigenvalue vanishes
    eigs = np.sort(np.linalg.eigvalsh(p))
    assert abs(eigs[-1] - 1.0) < 1e-10
    if len(eigs) > 1:
        assert abs(eigs[-2]) < 1e-10


# --------------------------------------------------------- tensor product

def test_tensor_product_basis_cases():
    zero = StateVector(np.array([1.0, 0.0]))
    one = StateVector(np.array([0.0, 1.0]))
    assert_allclose(tensor_product(zero, one).amplitudes, [0, 1, 0, 0], atol=0)
    assert_allclose(tensor_product(zero, zero).amplitudes, [1, 0, 0, 0], atol=0)


def test_tensor_product_superposed_first_factor():
    plus = StateVector(np.array([INV_SQRT2, INV_SQRT2]))
    zero = StateVector(np.array([1.0, 0.0]))
    assert_allclose(tensor_product(plus, zero).amplitudes,
                    [INV_SQRT2, 0, INV_SQRT2, 0], atol=0)


@settings(deadline=None)
@given(unit_states(max_dim=6), unit_states(max_dim=6))
def test_tensor_product_norm_and_ordering(a, b):
    t = tensor_product(a, b)
    assert t.dim == a.dim * b.dim
    assert abs(np.linalg.norm(t.amplitudes) - 1.0) <= 1e-12
    # index of a varies slowest
    expected = np.array([x * y for x in a.amplitudes for y in b.amplitudes])
    assert_allclose(t.amplitudes, expected, atol=1e-15)


# ------------------------------------------------------------ expectation

def test_expectation_eigenstate():
    zero = StateVector(np.array([1.0, 0.0]))
    assert expectation(projector(zero), zero) == pytest.approx(1.0, abs=1e-15)


def test_expectation_orthogonal_state():
    zero = StateVector(np.array([1.0, 0.0]))
    one = StateVector(np.array([0.0, 1.0]))
    assert expectation(projector(zero), one) == pytest.approx(0.0, abs=1e-15)


def test_expectation_xor_minus_operator_on_01():
    # The two-qubit XOR "agree" operator has no support on |01>.
    p_minus = np.zeros((4, 4), dtype=complex)
    p_minus[0, 0] = p_minus[3, 3] = 1.0
    state = StateVector(np.array([0.0, 1.0, 0.0, 0.0]))
    assert expectation(Operator(p_minus), state) == pytest.approx(0.0, abs=1e-15)


def test_expectation_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        expectation(identity(2), StateVector(np.array([0.0, 1.0, 0.0, 0.0])))


def test_expectation_imag_guard(monkeypatch):
    from qperceptron import linops

    monkeypatch.setattr(linops._kernels, "expectation",
                        lambda op, state: 0.5 + 1e-8j)
    with pytest.raises(NumericIntegrityError):
        expectation(identity(2), StateVector(np.array([1.0, 0.0])))


@settings(deadline=None, max_examples=60)
@given(unit_states(max_dim=16))
def test_expectation_within_eigen_bounds(state):
    rng = np.random.default_rng(7 + state.dim)
    op = Operator(random_hermitian(rng, state.dim))
    value = expectation(op, state)
    lo, hi = eig_extrema(op)
    assert lo - 1e-10 <= value <= hi + 1e-10


def test_expectation_matches_naive_triple_loop(np_rng):
    for _ in range(50):
        dim = int(np_rng.integers(1, 17))
        op = Operator(random_hermitian(np_rng, dim))
        state = random_unit_state(np_rng, dim)
        fast = expectation(op, state)
        slow = naive_expectation(op.entries, state.amplitudes)
        assert fast == pytest.approx(slow, abs=1e-12)


# ------------------------------------------------------------ eig extrema

def test_eig_extrema_identity():
    assert eig_extrema(identity(2)) == (pytest.approx(1.0), pytest.approx(1.0))


def test_eig_extrema_projector():
    lo, hi = eig_extrema(projector(StateVector(np.array([1.0, 0.0]))))
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(1.0, abs=1e-12)


def test_eig_extrema_projector_sum_closed_form():
    # |0><0| + |+><+| = [[1.5, 0.5], [0.5, 0.5]]; characteristic-polynomial
    # oracle: eigenvalues (tr +/- sqrt(tr^2 - 4 det)) / 2 = 1 -/+ 1/sqrt(2).
    matrix = np.array([[1.5, 0.5], [0.5, 0.5]], dtype=complex)
    tr = matrix[0, 0].real + matrix[1, 1].real
    det = (matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]).real
    disc = math.sqrt(tr * tr - 4.0 * det)
    expected_lo, expected_hi = (tr - disc) / 2.0, (tr + disc) / 2.0
    assert expected_lo == pytest.approx(1.0 - INV_SQRT2, abs=1e-15)
    assert expected_hi == pytest.approx(1.0 + INV_SQRT2, abs=1e-15)

    lo, hi = eig_extrema(Operator(matrix))
    assert lo == pytest.approx(expected_lo, abs=1e-12)
    assert hi == pytest.approx(expected_hi, abs=1e-12)
    assert lo == pytest.approx(0.29289321881345254, abs=1e-12)
    assert hi == pytest.approx(1.7071067811865475, abs=1e-12)


def _power_iteration_max(matrix: np.ndarray, iters: int = 20_000) -> float:
    """Brute-force dominant eigenvalue of a PSD matrix by power iteration."""
    rng = np.random.default_rng(99)
    v = rng.standard_normal(matrix.shape[0]) + 1j * rng.standard_normal(matrix.shape[0])
    v /= np.linalg.norm(v)
    previous = None
    for _ in range(iters):
        w = matrix @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        rayleigh = float(np.vdot(v, matrix @ v).real)
        if previous is not None and abs(rayleigh - previous) < 1e-13:
            break
        previous = rayleigh
    return rayleigh


def test_eig_extrema_against_power_iteration_oracle(np_rng):
    for _ in range(25):
        dim = int(np_rng.integers(2, 17))
        herm = random_hermitian(np_rng, dim)
        # shift to PSD so power iteration on P targets the maximum, then
        # iterate on max_eig*I - P to recover the minimum
        shift = frobenius_norm(herm) + 1.0
        shifted = herm + shift * np.eye(dim)
        max_eig = _power_iteration_max(shifted) - shift
        flipped = (max_eig + shift) * np.eye(dim) - shifted
        min_eig = max_eig - _power_iteration_max(flipped)
        lo, hi = eig_extrema(Operator(herm))
        assert hi == pytest.approx(max_eig, abs=1e-8)
        assert lo == pytest.approx(min_eig, abs=1e-8)
