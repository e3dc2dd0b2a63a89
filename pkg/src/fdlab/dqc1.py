"""One-clean-qubit (DQC1) measurement protocol for normalized unitary traces.

A pseudo-pure probe rho_eps = (1-eps)/2 I + eps|0><0| controls the echo
operator W applied to a maximally mixed register; reading the probe's sigma_x
(sigma_y) after the final rotation gives the real (imaginary) part of
eps * Tr(W) / N. Signs follow the positive convention

    <sigma_x> + i <sigma_y> = eps * Tr(W) / N,

enforced against a direct-trace oracle in the tests. The maximally mixed
register is represented exactly by trace algebra; ``trace_from_basis_states``
retains the independent sampling-over-basis-states estimator as an oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .perturb import Perturbation
from .qcore import PAULI, kron

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S_DAG = np.diag([1.0, -1.0j])


@dataclass(frozen=True)
class ProbeState:
    """Pseudo-pure probe polarization eps in (0, 1]."""

    epsilon: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError("probe polarization must be in (0, 1]")

    def density(self) -> np.ndarray:
        return np.diag([(1.0 + self.epsilon) / 2.0, (1.0 - self.epsilon) / 2.0]).astype(complex)


@dataclass(frozen=True)
class Dqc1Outcome:
    """Probe readout: re = <sigma_x>, im = <sigma_y>, with binomial standard
    errors (zero in exact mode, shots == 0)."""

    re: float
    im: float
    epsilon: float
    shots: int
    stderr_re: float = 0.0
    stderr_im: float = 0.0

    def trace_estimate(self, dim: int) -> complex:
        """Tr(W) implied by the readout (divides out eps and the 1/N)."""
        return (self.re + 1j * self.im) * dim / self.epsilon


def build_echo_operator(u: np.ndarray, p: Perturbation | np.ndarray, n: int) -> np.ndarray:
    """W = (u^n)^dag (Pu)^n."""
    pm = p.matrix if isinstance(p, Perturbation) else p
    if u.shape != pm.shape:
        raise ValueError("build_echo_operator: dimension mismatch")
    if n < 0:
        raise ValueError("build_echo_operator: n must be >= 0")
    return kernels.echo_operator(np.ascontiguousarray(u, dtype=complex),
                                 np.ascontiguousarray(pm @ u, dtype=complex), n)


def _protocol_state(w: np.ndarray, probe: ProbeState) -> np.ndarray:
    """Joint state after Hadamard on the probe and the controlled-W."""
    dim = w.shape[0]
    rho = kron(_HADAMARD @ probe.density() @ _HADAMARD,
               np.eye(dim, dtype=complex) / dim)
    ctrl = np.eye(2 * dim, dtype=complex)
    ctrl[dim:, dim:] = w
    return ctrl @ rho @ ctrl.conj().T


def _probe_z(rho: np.ndarray, rotation: np.ndarray) -> float:
    """<sigma_z> of the probe after applying the final probe rotation."""
    dim = rho.shape[0] // 2
    r = kron(rotation, np.eye(dim, dtype=complex))
    meas = kron(PAULI["z"], np.eye(dim, dtype=complex))
    return float(np.trace(meas @ r @ rho @ r.conj().T).real)


def dqc1_expectation(w: np.ndarray, probe: ProbeState = ProbeState()) -> Dqc1Outcome:
    """Exact protocol simulation: probe Hadamard, controlled-W, rotated readout.

    Returns re + i*im = eps * Tr(w) / N; zero standard error.
    """
    rho = _protocol_state(w, probe)
    re = _probe_z(rho, _HADAMARD)           # maps sigma_x readout onto sigma_z
    im = _probe_z(rho, _HADAMARD @ _S_DAG)  # maps sigma_y readout onto sigma_z
    eps = probe.epsilon
    if abs(re) > eps + 1e-12 or abs(im) > eps + 1e-12:
        raise AssertionError("protocol readout exceeded the polarization bound")
    return Dqc1Outcome(re, im, eps, shots=0)


def dqc1_sampled(w: np.ndarray, probe: ProbeState, shots: int,
                 rng: np.random.Generator) -> Dqc1Outcome:
    """Finite-shot readout: Bernoulli draws from the two probe distributions.

    Half the shots (rounding up) measure the x basis and half the y basis;
    means are empirical with binomial standard errors. With a single shot the
    y estimate carries no information (stderr inf).
    """
    if shots < 1:
        raise ValueError("dqc1_sampled needs shots >= 1")
    exact = dqc1_expectation(w, probe)
    n_x = shots - shots // 2
    n_y = shots // 2

    def draw(mean: float, n: int) -> tuple:
        if n == 0:
            return 0.0, float("inf")
        p = (1.0 + mean) / 2.0
        k = rng.binomial(n, p)
        p_hat = k / n
        return 2.0 * p_hat - 1.0, 2.0 * np.sqrt(p_hat * (1.0 - p_hat) / n)

    re, se_re = draw(exact.re, n_x)
    im, se_im = draw(exact.im, n_y)
    return Dqc1Outcome(re, im, probe.epsilon, shots, se_re, se_im)


def trace_from_basis_states(w: np.ndarray, samples: int,
                            rng: np.random.Generator) -> tuple[complex, float]:
    """Unbiased Tr(w)/N estimator from random computational basis states.

    Averages <b|w|b> over uniformly drawn b; returns (mean, standard error).
    Kept as an independent oracle for the trace-algebra route.
    """
    if samples < 2:
        raise ValueError("trace_from_basis_states needs samples >= 2")
    idx = rng.integers(0, w.shape[0], size=samples)
    vals = np.diagonal(w)[idx]
    mean = complex(vals.mean())
    se = float(np.sqrt((np.abs(vals - mean) ** 2).mean() / (samples - 1)))
    return mean, se
