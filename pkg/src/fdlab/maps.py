"""Generators of the system dynamics.

Two families:

* pseudo-random maps: r repetitions of (random single-qubit rotations,
  then a fixed nearest-neighbour sigma_z sigma_z coupling layer); the
  ensemble converges to the Haar measure as r grows,
* regular maps: exp(-i H dt) for a z-diagonal NMR-like Hamiltonian
  H = sum_j (w_j/2) sz_j + sum_{j<k} (pi J_jk / 2) sz_j sz_k, which is
  diagonal and hence integrable.

The default regular-Hamiltonian numbers are placeholder configuration
values (a plausible 4-spin chain), not measured molecular data.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qcore import PAULI, check_unitary, kron_all

DEFAULT_DEPTH = 4  # map iterations; enough for near-uniform trace statistics


def _basis_signs(num_qubits: int) -> np.ndarray:
    """signs[b, j] = +1/-1 for bit j of basis state b (qubit 0 most significant)."""
    b = np.arange(2 ** num_qubits)
    shifts = num_qubits - 1 - np.arange(num_qubits)
    return 1.0 - 2.0 * ((b[:, None] >> shifts[None, :]) & 1)


@dataclass(frozen=True)
class RegularHamiltonianParams:
    """z-diagonal Hamiltonian data: per-qubit shifts (rad/s), symmetric
    coupling matrix (Hz), and evolution timestep (s)."""

    shifts: tuple = (500.0, 300.0, 200.0, 100.0)  # placeholder values
    couplings: tuple = ()  # rows of the symmetric J matrix; () = nearest-neighbour default
    coupling: float = 40.0 / (2.0 * np.pi)  # placeholder nearest-neighbour J
    timestep: float = 1e-3

    def coupling_matrix(self) -> np.ndarray:
        k = len(self.shifts)
        if self.couplings:
            j = np.asarray(self.couplings, dtype=float)
            if j.shape != (k, k):
                raise ValueError("coupling matrix shape does not match qubit count")
        else:
            j = np.zeros((k, k))
            for i in range(k - 1):
                j[i, i + 1] = j[i + 1, i] = self.coupling
        if np.max(np.abs(j - j.T)) > 0 or np.any(np.diag(j) != 0):
            raise ValueError("coupling matrix must be symmetric with zero diagonal")
        return j


@dataclass(frozen=True)
class MapSpec:
    """Declarative recipe for a dynamical map; equal specs build equal matrices."""

    kind: str  # "pseudo_random" | "regular"
    qubits: int
    iterations: int = DEFAULT_DEPTH
    seed: int = 0
    regular_params: RegularHamiltonianParams = field(default_factory=RegularHamiltonianParams)

    def __post_init__(self):
        if self.kind not in ("pseudo_random", "regular"):
            raise ValueError(f"unknown map kind {self.kind!r}")
        if self.qubits < 1:
            raise ValueError("qubits must be >= 1")
        if self.kind == "pseudo_random" and self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


def coupling_layer(num_qubits: int) -> np.ndarray:
    """exp[+i (pi/4) sum_{j} sz_j sz_{j+1}] over the open chain; diagonal."""
    if num_qubits < 2:
        raise ValueError("coupling_layer needs at least 2 qubits")
    s = _basis_signs(num_qubits)
    phase = (np.pi / 4.0) * np.sum(s[:, :-1] * s[:, 1:], axis=1)
    return np.diag(np.exp(1j * phase))


def random_qubit_rotation(rng: np.random.Generator) -> np.ndarray:
    """exp(-i theta n.sigma / 2) with axis uniform on the sphere, theta uniform on [0, 2pi)."""
    z = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    s = np.sqrt(1.0 - z * z)
    n_sigma = s * np.cos(phi) * PAULI["x"] + s * np.sin(phi) * PAULI["y"] + z * PAULI["z"]
    return np.cos(theta / 2.0) * PAULI["I"] - 1j * np.sin(theta / 2.0) * n_sigma


def pseudo_random_map(spec: MapSpec) -> np.ndarray:
    """Product over spec.iterations of (coupling layer . random single-qubit layer)."""
    if spec.kind != "pseudo_random":
        raise ValueError("spec.kind must be pseudo_random")
    if spec.qubits < 2:
        raise ValueError("pseudo_random_map needs at least 2 qubits")
    rng = np.random.default_rng(spec.seed)
    coupling = coupling_layer(spec.qubits)
    u = np.eye(2 ** spec.qubits, dtype=complex)
    for _ in range(spec.iterations):
        layer = kron_all(random_qubit_rotation(rng) for _ in range(spec.qubits))
        u = coupling @ layer @ u
    return u


def regular_map(spec: MapSpec) -> np.ndarray:
    """exp(-i H dt) for the z-diagonal Hamiltonian; returned as a diagonal unitary."""
    if spec.kind != "regular":
        raise ValueError("spec.kind must be regular")
    p = spec.regular_params
    shifts = np.asarray(p.shifts, dtype=float)
    if len(shifts) != spec.qubits:
        raise ValueError("shifts length does not match qubit count")
    j = p.coupling_matrix()
    s = _basis_signs(spec.qubits)
    diag = s @ (shifts / 2.0)
    for a in range(spec.qubits):
        for b in range(a + 1, spec.qubits):
            diag = diag + (np.pi * j[a, b] / 2.0) * s[:, a] * s[:, b]
    return np.diag(np.exp(-1j * diag * p.timestep))


def build_map(spec: MapSpec) -> np.ndarray:
    u = pseudo_random_map(spec) if spec.kind == "pseudo_random" else regular_map(spec)
    return check_unitary(u, what=f"{spec.kind} map")


def ensemble_trace_moment(num_qubits: int, iterations: int, samples: int,
                          seed: int) -> tuple[float, float]:
    """Monte-Carlo (mean |Tr U|^2, standard error) over the pseudo-random ensemble.

    Per-sample map seeds derive deterministically from (seed, sample index),
    so the estimate is reproducible and parallelizable.
    """
    if samples < 2:
        raise ValueError("ensemble_trace_moment needs samples >= 2")
    vals = np.empty(samples)
    for i in range(samples):
        sub = np.random.SeedSequence([seed, i]).generate_state(1)[0]
        spec = MapSpec("pseudo_random", num_qubits, iterations, int(sub))
        vals[i] = np.abs(np.trace(pseudo_random_map(spec))) ** 2
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))
