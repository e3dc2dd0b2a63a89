"""Engineered-environment decoherence factors and their rate scaling.

A probe couples to an environment through H = H_E + A_S (x) B_E with
A_S = diag(lambda). In the coupling eigenbasis the probe's off-diagonal
(j, k) entry decays by gamma_jk(t); the Trotterized estimator

    gamma_jk = (1/N_E) Tr[ (e^{+i d (H_E + l_j B)})^m
                           (e^{-i d (l_j - l_k) B} e^{-i d (H_E + l_j B)})^m ]

is exactly the echo trace measured by the DQC1 circuit with one Trotter
slice as the map and the coupling kick as the perturbation (first-order
asymmetric splitting, m = t/d slices). The exact-evolution partial-trace
route is kept alongside as its oracle. In the FGR regime the fitted decay
rate of |gamma_jk| grows quadratically in the eigenvalue gap l_j - l_k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from . import kernels
from .fidelity import fit_log_decay
from .qcore import check_density, check_hermitian, kron, matexp_hermitian, partial_trace


@dataclass(frozen=True)
class EnvironmentModel:
    """Environment self-Hamiltonian, coupling operator, and the system
    coupling eigenvalues (diagonal of A_S)."""

    h_env: np.ndarray
    coupling: np.ndarray
    lambdas: tuple

    def __post_init__(self):
        check_hermitian(self.h_env, what="environment Hamiltonian")
        check_hermitian(self.coupling, what="coupling operator")
        if self.h_env.shape != self.coupling.shape:
            raise ValueError("H_E and B must share a dimension")
        if len(self.lambdas) < 2:
            raise ValueError("need at least two coupling eigenvalues")

    @property
    def dim(self) -> int:
        return self.h_env.shape[0]


@dataclass(frozen=True)
class DecoherenceFactor:
    gamma: complex
    t: float
    delta: float
    j: int
    k: int

    def __post_init__(self):
        if abs(self.gamma) > 1.0 + 1e-9:
            raise ValueError("decoherence factor magnitude exceeds 1")


def _slice_count(t: float, delta: float) -> int:
    m = t / delta
    if m < 1 or abs(m - round(m)) > 1e-9 * max(1.0, abs(m)):
        raise ValueError(f"t/delta = {m!r} is not a positive integer")
    return int(round(m))


def _slice_factors(env: EnvironmentModel, j: int, k: int, delta: float):
    """One-slice map U = e^{-i d (H_E + l_j B)} and kick P = e^{-i d (l_j - l_k) B}."""
    lj, lk = env.lambdas[j], env.lambdas[k]
    u = matexp_hermitian(env.h_env + lj * env.coupling, delta)
    p = matexp_hermitian((lj - lk) * env.coupling, delta)
    return u, p


def trotter_decoherence_curve(env: EnvironmentModel, j: int, k: int,
                              t_max: float, delta: float) -> np.ndarray:
    """gamma_jk at times s * delta for s = 0..t_max/delta, from running products."""
    m = _slice_count(t_max, delta)
    u, p = _slice_factors(env, j, k, delta)
    traces = kernels.echo_traces(np.ascontiguousarray(u), np.ascontiguousarray(p @ u), m)
    return traces / env.dim


def trotter_decoherence_factor(env: EnvironmentModel, j: int, k: int,
                               t: float, delta: float) -> DecoherenceFactor:
    """Trotterized gamma_jk(t) with step delta (t/delta slices)."""
    gamma = trotter_decoherence_curve(env, j, k, t, delta)[-1]
    return DecoherenceFactor(complex(gamma), t, delta, j, k)


def exact_decoherence_factor(env: EnvironmentModel, rho_env: np.ndarray, j: int, k: int,
                             t: float, probe_state: np.ndarray | None = None) -> DecoherenceFactor:
    """Oracle: evolve probe (x) environment under the full H, trace out the
    environment, return rho_S(t)[j, k] / rho_S(0)[j, k].

    The probe starts in the uniform superposition of the coupling
    eigenstates unless ``probe_state`` overrides it.
    """
    check_density(rho_env)
    if rho_env.shape[0] != env.dim:
        raise ValueError("environment state dimension mismatch")
    d = len(env.lambdas)
    if probe_state is None:
        probe_state = np.full(d, 1.0 / np.sqrt(d), dtype=complex)
    rho_probe = np.outer(probe_state, probe_state.conj())
    if abs(rho_probe[j, k]) == 0.0:
        raise ValueError(f"probe state has vanishing ({j},{k}) coherence; ratio undefined")
    ham = kron(np.eye(d, dtype=complex), env.h_env) + kron(np.diag(env.lambdas).astype(complex),
                                                           env.coupling)
    u = matexp_hermitian(ham, t)
    rho_t = u @ kron(rho_probe, rho_env) @ u.conj().T
    rho_s = partial_trace(rho_t, keep=[0], dims=[d, env.dim])
    return DecoherenceFactor(complex(rho_s[j, k] / rho_probe[j, k]), t, 0.0, j, k)


def map_log_hamiltonian(u: np.ndarray) -> np.ndarray:
    """Hermitian H with u = exp(-i H): chaotic-map route to an environment
    Hamiltonian (alternative to a GUE draw)."""
    t, z = schur(np.asarray(u, dtype=complex), output="complex")
    h = (z * -np.angle(np.diagonal(t))) @ z.conj().T
    return (h + h.conj().T) / 2.0


@dataclass(frozen=True)
class RateScanPoint:
    delta_lambda: float
    rate: float
    residual: float
    j: int
    k: int


def decoherence_rate_scan(env: EnvironmentModel, pairs, t_max: float, delta: float,
                          fit_start_time: float = 1.0,
                          fit_threshold: float = 0.35) -> list[RateScanPoint]:
    """|gamma_jk(t)| curves and their fitted exponential rates per pair.

    The fit skips the initial quadratic (Zeno) transient (t < fit_start_time)
    and stops at the first crossing of ``fit_threshold``, i.e. roughly the
    first e-fold, before the finite-size plateau. Rates are per unit time.
    Pairs are canonicalized to (max, min) index order first: the model's
    |gamma_jk| = |gamma_kj| symmetry is exact, so both orders must report
    the same rate. Fit failures propagate with the pair attached.
    """
    m = _slice_count(t_max, delta)
    start = max(1, int(round(fit_start_time / delta)))
    out = []
    for (j, k) in pairs:
        jj, kk = (j, k) if j >= k else (k, j)
        gam = np.abs(trotter_decoherence_curve(env, jj, kk, t_max, delta))
        stop = m + 1
        for i in range(start, m + 1):
            if gam[i] < fit_threshold:
                stop = i
                break
        stop = max(stop, start + 4)
        try:
            fit = fit_log_decay(np.arange(m + 1) * delta, gam, (start, min(stop, m + 1)))
        except ValueError as exc:
            raise ValueError(f"rate fit failed for pair ({j}, {k}): {exc}") from exc
        dl = env.lambdas[jj] - env.lambdas[kk]
        out.append(RateScanPoint(float(dl), fit.rate, fit.residual, j, k))
    return out
