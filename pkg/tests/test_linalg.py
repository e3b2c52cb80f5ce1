import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geamlab.linalg import (
    PAULI_X,
    PAULI_Z,
    BipartiteDims,
    DensityMatrix,
    EigenConvergenceError,
    InvalidStateError,
    as_hermitian,
    dump_matrix,
    haar_unitaries,
    hermitian_eig,
    load_matrix,
    make_rng,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    purity,
    sample,
    special_operators,
    tensor_product,
)

from conftest import random_hermitian


def test_eig_identity():
    dec = hermitian_eig(np.eye(2))
    assert np.allclose(dec.eigenvalues, [1, 1])
    assert dec.orthonormality_error() < 1e-12


def test_eig_diagonal():
    dec = hermitian_eig(np.diag([0.25, 0.75]))
    assert np.allclose(dec.eigenvalues, [0.75, 0.25], atol=1e-15)
    assert np.allclose(np.abs(dec.eigenvectors), [[0, 1], [1, 0]])


def test_eig_pauli_x():
    dec = hermitian_eig(PAULI_X)
    assert np.allclose(dec.eigenvalues, [1, -1], atol=1e-14)
    v = dec.eigenvectors
    assert abs(abs(np.vdot(v[:, 0], np.array([1, 1]) / np.sqrt(2))) - 1) < 1e-12
    assert abs(abs(np.vdot(v[:, 1], np.array([1, -1]) / np.sqrt(2))) - 1) < 1e-12


@given(st.integers(1, 12), st.integers(0, 2 ** 32 - 1))
def test_eig_reconstruction_and_oracle(d, seed):
    a = random_hermitian(make_rng(seed), d)
    dec = hermitian_eig(a)
    assert dec.residual(a) <= 1e-10
    assert dec.orthonormality_error() <= 1e-10
    assert np.all(np.diff(dec.eigenvalues) <= 0)
    # independent LAPACK oracle
    assert np.allclose(dec.eigenvalues, np.linalg.eigvalsh(a)[::-1], atol=1e-10)


def test_eig_degenerate_and_large():
    rng = make_rng(3)
    u = haar_unitaries(40, 1, rng)[0]
    a = u @ np.diag([2.0] * 20 + [-1.0] * 20) @ u.conj().T
    dec = hermitian_eig(a)
    assert dec.residual(a) <= 1e-10
    a = random_hermitian(rng, 64)
    assert hermitian_eig(a).residual(a) <= 1e-10


def test_eig_nonconvergence_reports_residual():
    a = random_hermitian(make_rng(1), 10)
    with pytest.raises(EigenConvergenceError) as info:
        hermitian_eig(a, max_sweeps=1)
    assert info.value.residual > 0


def test_hermitian_input_checks():
    with pytest.raises(ValueError):
        as_hermitian(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        as_hermitian(np.ones((2, 3)))
    h = as_hermitian(np.array([[1, 1 + 1e-11], [1, 2]]))
    assert np.max(np.abs(h - h.conj().T)) == 0


def test_tensor_product_examples():
    assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(tensor_product(PAULI_Z, np.eye(2)), np.diag([1, 1, -1, -1]))
    ket00 = np.array([1, 0, 0, 0])
    assert np.array_equal(tensor_product(PAULI_X, PAULI_X) @ ket00, [0, 0, 0, 1])


@given(st.integers(0, 2 ** 32 - 1))
def test_tensor_product_properties(seed):
    rng = make_rng(seed)
    # Gaussian-integer entries make every product exact, so associativity is bitwise
    a, b, c = (rng.integers(-9, 10, (k, k)) + 1j * rng.integers(-9, 10, (k, k)) for k in (2, 3, 2))
    assert np.array_equal(tensor_product(tensor_product(a, b), c), tensor_product(a, tensor_product(b, c)))
    a, b = random_hermitian(rng, 2), random_hermitian(rng, 3)
    assert abs(np.trace(tensor_product(a, b)) - np.trace(a) * np.trace(b)) < 1e-12


def test_partial_trace_examples():
    phi = special_operators(2, "max-entangled")
    red = partial_trace(np.outer(phi, phi.conj()), (2, 2), "A")
    assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-15)
    swap = special_operators(2, "swap")
    for x in (-1.0, 0.0, 0.3, 1.0):
        w = ((2 - x) * np.eye(4) + (2 * x - 1) * swap) / 6
        # explicit 4x4 index sum as the oracle
        oracle = np.array([[sum(w[2 * i + k, 2 * j + k] for k in range(2)) for j in range(2)] for i in range(2)])
        assert np.allclose(partial_trace(w, (2, 2), "A").matrix, oracle)
        assert np.allclose(oracle, np.eye(2) / 2)


@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2 ** 32 - 1))
def test_partial_trace_product(da, db, seed):
    rng = make_rng(seed)
    ra = sample("ginibre-mixed", da, rng=rng)
    rb = sample("ginibre-mixed", db, rng=rng)
    ab = tensor_product(ra.matrix, rb.matrix)
    out_a = partial_trace(ab, BipartiteDims(da, db), "A")
    out_b = partial_trace(ab, (da, db), "B")
    assert np.max(np.abs(out_a.matrix - ra.matrix)) <= 1e-12
    assert np.max(np.abs(out_b.matrix - rb.matrix)) <= 1e-12
    assert abs(np.trace(out_a.matrix) - 1) <= 1e-12


def test_partial_trace_errors():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, (2, 3))
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, (2, 2), "C")


def test_density_matrix_validation():
    with pytest.raises(InvalidStateError):
        DensityMatrix(np.eye(2))
    with pytest.raises(InvalidStateError) as info:
        DensityMatrix(np.diag([1.5, -0.5]))
    assert "-5.000e-01" in str(info.value)
    rho = DensityMatrix(np.diag([0.75, 0.25]))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_purity_examples():
    assert abs(purity(DensityMatrix.maximally_mixed(3)) - 1 / 3) < 1e-15
    assert abs(purity(DensityMatrix.pure([1, 1j])) - 1) < 1e-15
    assert abs(purity(DensityMatrix(np.diag([0.75, 0.25]))) - 5 / 8) < 1e-15


def test_sampling_contracts():
    rho = sample("ginibre-mixed", 4, seed=1, rank=1)
    assert abs(rho.purity - 1) <= 1e-12
    u = sample("haar-unitary", 5, seed=2)
    assert np.max(np.abs(u.conj().T @ u - np.eye(5))) <= 1e-10
    a = sample("ginibre-mixed", 3, seed=9).matrix
    b = sample("ginibre-mixed", 3, seed=9).matrix
    assert a.tobytes() == b.tobytes()
    with pytest.raises(ValueError):
        sample("ginibre-mixed", 3, seed=1, rank=4)
    with pytest.raises(ValueError):
        sample("bogus", 3)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_haar_first_moment(d):
    u = haar_unitaries(d, 10000, make_rng(11))
    g = np.abs(u[:, 0, 0]) ** 2
    assert abs(g.mean() - 1 / d) <= 4 * g.std(ddof=1) / np.sqrt(len(g))


def test_special_operators():
    swap = special_operators(2, "swap")
    assert np.array_equal(swap, np.eye(4)[[0, 2, 1, 3]])
    for d in (2, 3, 4):
        f = special_operators(d, "swap")
        assert np.array_equal(f @ f, np.eye(d * d))
        assert np.trace(f) == d
        e = np.eye(d)
        assert np.array_equal(f @ np.kron(e[0], e[d - 1]), np.kron(e[d - 1], e[0]))
        assert abs(np.linalg.norm(special_operators(d, "max-entangled")) - 1) < 1e-15
    with pytest.raises(ValueError):
        special_operators(3, "singlet")


def test_matrix_json_roundtrip(tmp_path):
    a = sample("ginibre-mixed", 3, seed=4).matrix
    assert np.array_equal(matrix_from_json(json.loads(json.dumps(matrix_to_json(a)))), a)
    path = tmp_path / "m.json"
    dump_matrix(a, path)
    assert np.array_equal(load_matrix(path), a)
    with pytest.raises(ValueError):
        matrix_from_json([[1, 2], [3]])
