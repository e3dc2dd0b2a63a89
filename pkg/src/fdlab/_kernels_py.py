"""Pure-numpy implementation of the echo-trace kernels.

Same contracts as the compiled module ``fdlab._kernels``; selected as a
fallback when the extension is unavailable (see ``fdlab.kernels``).
"""
from __future__ import annotations

import numpy as np


def echo_traces(u: np.ndarray, pu: np.ndarray, n: int) -> np.ndarray:
    """t_m = Tr[(u^m)^dag (pu)^m] for m = 0..n, via two running products."""
    dim = u.shape[0]
    out = np.empty(n + 1, dtype=complex)
    out[0] = dim
    a = np.eye(dim, dtype=complex)
    b = np.eye(dim, dtype=complex)
    for m in range(1, n + 1):
        a = a @ u
        b = b @ pu
        out[m] = np.vdot(a, b)  # sum conj(a_ij) b_ij = Tr(a^dag b)
    return out


def echo_operator(u: np.ndarray, pu: np.ndarray, n: int) -> np.ndarray:
    """W = (u^n)^dag (pu)^n."""
    dim = u.shape[0]
    a = np.eye(dim, dtype=complex)
    b = np.eye(dim, dtype=complex)
    for _ in range(n):
        a = a @ u
        b = b @ pu
    return a.conj().T @ b
