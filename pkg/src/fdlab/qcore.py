"""Dense complex linear algebra and quantum-state primitives.

Conventions used throughout the package:

* Qubit 0 is the most significant tensor factor: basis state ``|b>`` of a
  K-qubit register has qubit 0's bit in the highest position of the index.
* Single-qubit rotations follow exp(-i theta n.sigma / 2).
* All matrices are dense ``complex128`` numpy arrays; generators are
  explicit ``numpy.random.Generator`` arguments, never global state.

Tolerances: unitarity is enforced at 1e-10 and hermiticity / trace
normalization at 1e-12 in the max-abs-entry norm, two orders of magnitude
above double-precision noise at the dimensions handled here (<= 2^12).
"""
from __future__ import annotations

import numpy as np

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def max_abs(a: np.ndarray) -> float:
    """Max-abs-entry norm; 0.0 for empty input."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    n = u.shape[0]
    return u.shape == (n, n) and max_abs(u.conj().T @ u - np.eye(n)) <= tol


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return h.ndim == 2 and h.shape[0] == h.shape[1] and max_abs(h - h.conj().T) <= tol


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL, what: str = "matrix") -> np.ndarray:
    if not is_unitary(u, tol):
        raise ValueError(f"{what} is not unitary to {tol:g} in max-abs norm")
    return u


def check_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL, what: str = "matrix") -> np.ndarray:
    if not is_hermitian(h, tol):
        raise ValueError(f"{what} is not Hermitian to {tol:g} in max-abs norm")
    return h


def check_density(rho: np.ndarray, tol: float = TRACE_TOL) -> np.ndarray:
    """Validate a density operator: Hermitian, unit trace, eigenvalues >= -1e-10."""
    check_hermitian(rho, tol, "density operator")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError("density operator trace differs from 1")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density operator has a negative eigenvalue")
    return rho


def check_pure_state(psi: np.ndarray, tol: float = TRACE_TOL) -> np.ndarray:
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError("state vector is not normalized")
    return psi


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices; block (i, j) is a[i, j] * b."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("kron: first operand is not a square matrix")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("kron: second operand is not a square matrix")
    return np.kron(a, b)


def kron_all(mats) -> np.ndarray:
    """Kronecker product of a sequence, first factor most significant."""
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def matexp_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(-i h t) for Hermitian h, via eigendecomposition.

    The eigendecomposition route gives exactly unitary output up to
    rounding; non-Hermitian input is rejected rather than patched.
    """
    h = np.asarray(h, dtype=complex)
    check_hermitian(h, what="matexp_hermitian input")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def pauli_string(spec, num_qubits: int) -> np.ndarray:
    """Tensor product with the given Pauli at each listed qubit, identity elsewhere.

    ``spec`` is an iterable of (qubit index, axis) with axis in {x, y, z, I};
    duplicate qubit indices are rejected.
    """
    axes = {}
    for q, ax in spec:
        if not 0 <= q < num_qubits:
            raise ValueError(f"qubit index {q} outside [0, {num_qubits})")
        if q in axes:
            raise ValueError(f"duplicate qubit index {q} in Pauli string")
        if ax not in PAULI:
            raise ValueError(f"unknown Pauli axis {ax!r}")
        axes[q] = ax
    return kron_all(PAULI[axes.get(q, "I")] for q in range(num_qubits))


def partial_trace(rho: np.ndarray, keep, dims) -> np.ndarray:
    """Reduced operator on the kept tensor factors.

    ``dims`` lists the factor dimensions (their product must match rho's
    dimension); ``keep`` lists the factor indices to retain, and the result
    is ordered by ascending kept index.
    """
    dims = list(dims)
    keep = sorted(set(int(k) for k in np.atleast_1d(keep)))
    n = len(dims)
    if int(np.prod(dims)) != rho.shape[0] or rho.shape[0] != rho.shape[1]:
        raise ValueError("partial_trace: factor dimensions do not match the operator")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError("partial_trace: kept index out of range")
    traced = [i for i in range(n) if i not in keep]
    if not traced:
        return rho.copy()
    r = rho.reshape(dims + dims)
    in_idx = list(range(2 * n))
    for t in traced:
        in_idx[n + t] = t
    out_idx = keep + [n + k for k in keep]
    d = int(np.prod([dims[k] for k in keep]))
    return np.einsum(r, in_idx, out_idx).reshape(d, d)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Sample from the Haar (CUE) measure on U(dim).

    QR of a complex Ginibre matrix, with the R-diagonal phase correction
    that makes the distribution exactly Haar.
    """
    if dim < 1:
        raise ValueError("haar_unitary: dim must be >= 1")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def gue_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    """GUE sample normalized so the spectrum fills [-2, 2] (semicircle)."""
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / (2.0 * np.sqrt(dim))
