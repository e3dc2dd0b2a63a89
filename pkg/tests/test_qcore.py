"""Linear-algebra primitive tests, cross-checked against independent oracles."""
import numpy as np
import pytest
from scipy.linalg import expm

from fdlab.qcore import (PAULI, gue_hermitian, haar_unitary, is_unitary, kron,
                         matexp_hermitian, partial_trace, pauli_string)


def random_hermitian(dim, rng, scale=1.0):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (a + a.conj().T) / 2


class TestKron:
    def test_identity_case(self):
        assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_pauli_blocks(self):
        got = kron(PAULI["x"], PAULI["z"])
        want = np.zeros((4, 4), dtype=complex)
        want[:2, 2:] = PAULI["z"]
        want[2:, :2] = PAULI["z"]
        assert np.array_equal(got, want)

    def test_dimension_arithmetic(self):
        assert kron(np.eye(2), np.eye(4)).shape == (8, 8)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            kron(np.ones((2, 3)), np.eye(2))

    def test_associativity_exact_on_integers(self):
        rng = np.random.default_rng(5)
        a, b, c = (rng.integers(-4, 5, size=(2, 2)) for _ in range(3))
        assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))


class TestMatexpHermitian:
    def test_sigma_z_pi(self):
        got = matexp_hermitian(PAULI["z"], np.pi)
        assert np.allclose(got, -np.eye(2), atol=1e-12)

    def test_zero_time_is_identity(self):
        rng = np.random.default_rng(1)
        h = random_hermitian(6, rng)
        assert np.allclose(matexp_hermitian(h, 0.0), np.eye(6), atol=1e-12)

    def test_against_scaling_and_squaring_oracle(self):
        # scipy's expm is an independent Pade/scaling-squaring route
        rng = np.random.default_rng(2)
        h = random_hermitian(8, rng)
        got = matexp_hermitian(h, 0.37)
        assert is_unitary(got)
        assert np.max(np.abs(got - expm(-1j * h * 0.37))) < 1e-8

    def test_group_property(self):
        rng = np.random.default_rng(3)
        h = random_hermitian(5, rng)
        s, t = 0.41, -1.3
        lhs = matexp_hermitian(h, s) @ matexp_hermitian(h, t)
        assert np.max(np.abs(lhs - matexp_hermitian(h, s + t))) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            matexp_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


class TestPauliString:
    def test_empty_spec_is_identity(self):
        assert np.array_equal(pauli_string([], 2), np.eye(4))

    def test_single_z(self):
        assert np.array_equal(pauli_string([(0, "z")], 1), np.diag([1, -1]).astype(complex))

    def test_two_z_diagonal(self):
        got = pauli_string([(0, "z"), (1, "z")], 2)
        assert np.array_equal(got, np.diag([1, -1, -1, 1]).astype(complex))

    def test_qubit_zero_is_most_significant(self):
        # z on qubit 0 of 2 flips sign on the high-order bit
        got = pauli_string([(0, "z")], 2)
        assert np.array_equal(np.diagonal(got), np.array([1, 1, -1, -1], dtype=complex))

    def test_rejects_duplicate_qubit(self):
        with pytest.raises(ValueError):
            pauli_string([(0, "x"), (0, "z")], 2)


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(4)
        rho_a = np.diag([0.75, 0.25]).astype(complex)
        u = haar_unitary(3, rng)
        rho_b = u @ np.diag([0.5, 0.3, 0.2]).astype(complex) @ u.conj().T
        got = partial_trace(np.kron(rho_a, rho_b), keep=[0], dims=[2, 3])
        assert np.allclose(got, rho_a, atol=1e-12)

    def test_bell_state_reduces_to_mixed(self):
        psi = np.zeros(4, dtype=complex)
        psi[0] = psi[3] = 1 / np.sqrt(2)
        got = partial_trace(np.outer(psi, psi.conj()), keep=[0], dims=[2, 2])
        assert np.allclose(got, np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(6)
        h = random_hermitian(4, rng)
        rho = expm(-h @ h.conj().T)  # positive definite
        rho /= np.trace(rho)
        got = partial_trace(rho, keep=[1], dims=[2, 2])
        assert abs(np.trace(got) - 1.0) < 1e-12

    def test_linearity(self):
        rng = np.random.default_rng(7)
        r1 = random_hermitian(4, rng)
        r2 = random_hermitian(4, rng)
        a, b = 0.3, -1.7
        lhs = partial_trace(a * r1 + b * r2, [0], [2, 2])
        rhs = a * partial_trace(r1, [0], [2, 2]) + b * partial_trace(r2, [0], [2, 2])
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, keep=[0], dims=[2, 3])


class TestHaarUnitary:
    def test_unitarity(self):
        rng = np.random.default_rng(8)
        for dim in (1, 2, 5, 16):
            assert is_unitary(haar_unitary(dim, rng))

    def test_same_seed_reproduces(self):
        u1 = haar_unitary(6, np.random.default_rng(99))
        u2 = haar_unitary(6, np.random.default_rng(99))
        assert np.array_equal(u1, u2)

    def test_cue_first_trace_moment(self):
        # E|Tr U|^2 = 1 for the CUE; Monte-Carlo check at dim 8
        rng = np.random.default_rng(10)
        vals = np.array([np.abs(np.trace(haar_unitary(8, rng))) ** 2 for _ in range(10_000)])
        se = vals.std(ddof=1) / np.sqrt(len(vals))
        assert abs(vals.mean() - 1.0) < 3 * se


def test_pure_state_validator():
    from fdlab.qcore import check_pure_state
    check_pure_state(np.array([1.0, 0.0], dtype=complex))
    with pytest.raises(ValueError):
        check_pure_state(np.array([1.0, 1.0], dtype=complex))


def test_density_validator():
    from fdlab.qcore import check_density
    check_density(np.eye(4, dtype=complex) / 4)
    with pytest.raises(ValueError):
        check_density(np.eye(4, dtype=complex))  # trace 4
    with pytest.raises(ValueError):
        check_density(np.diag([1.5, -0.5]).astype(complex))  # negative eigenvalue


def test_gue_is_hermitian_and_scaled():
    rng = np.random.default_rng(11)
    h = gue_hermitian(64, rng)
    assert np.array_equal(h, h.conj().T)
    # semicircle support [-2, 2]: extreme eigenvalues close to the edge
    w = np.linalg.eigvalsh(h)
    assert 1.5 < np.max(np.abs(w)) < 2.5
