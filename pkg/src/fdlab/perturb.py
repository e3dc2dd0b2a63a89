"""Perturbation operators P = exp(-i V) and the eigenvalue-variance rate quantity.

Perturbations are built about the z axis (diagonal V = delta * sum of
weighted sz on the target qubits) and may then be conjugated to the x or y
axis by per-target rotations; conjugation preserves the spectrum and hence
the decay rate set by the eigenvalue variance.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .maps import _basis_signs
from .qcore import check_hermitian, kron_all, matexp_hermitian

_AXES = ("x", "y", "z")


@dataclass(frozen=True)
class PerturbationSpec:
    """Strength delta (radians), rotation axis, target qubits (None = all),
    and per-qubit weights (default 1)."""

    strength: float
    axis: str = "z"
    targets: tuple | None = None
    weights: tuple | None = None

    def __post_init__(self):
        if not np.isfinite(self.strength):
            raise ValueError("perturbation strength must be finite")
        if self.axis not in _AXES:
            raise ValueError(f"axis must be one of {_AXES}")
        if self.targets is not None and len(self.targets) == 0:
            raise ValueError("target set must be non-empty")

    def resolve_targets(self, num_qubits: int) -> tuple:
        targets = tuple(range(num_qubits)) if self.targets is None else tuple(self.targets)
        if any(t < 0 or t >= num_qubits for t in targets):
            raise ValueError("perturbation target outside the register")
        if len(set(targets)) != len(targets):
            raise ValueError("duplicate perturbation target")
        return targets


@dataclass(frozen=True)
class Perturbation:
    """P = exp(-i V) together with its generator and the spec that built it."""

    matrix: np.ndarray
    generator: np.ndarray
    spec: PerturbationSpec
    qubits: int


def build_z_perturbation(spec: PerturbationSpec, num_qubits: int) -> Perturbation:
    """V = delta * sum_{j in targets} w_j sz_j; P = exp(-i V), diagonal."""
    if spec.axis != "z":
        raise ValueError("build_z_perturbation requires axis z")
    targets = spec.resolve_targets(num_qubits)
    weights = np.ones(len(targets)) if spec.weights is None else np.asarray(spec.weights, float)
    if weights.shape != (len(targets),):
        raise ValueError("weights length does not match target count")
    s = _basis_signs(num_qubits)
    diag = spec.strength * (s[:, list(targets)] @ weights)
    return Perturbation(np.diag(np.exp(-1j * diag)), np.diag(diag.astype(complex)),
                        spec, num_qubits)


def conjugate_axis(p: Perturbation, axis: str) -> Perturbation:
    """R P R^dag with R the per-target rotation taking sz to the requested axis.

    x: R = exp(-i (pi/4) sy) per target; y: R = exp(+i (pi/4) sx) per target.
    The generator transforms identically, so the spectrum is unchanged.
    """
    if p.spec.axis != "z":
        raise ValueError("conjugate_axis expects a z-built perturbation")
    if axis == "z":
        return p
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {_AXES}")
    targets = set(p.spec.resolve_targets(p.qubits))
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    r1 = matexp_hermitian(sy, np.pi / 4) if axis == "x" else matexp_hermitian(sx, -np.pi / 4)
    rot = kron_all(r1 if q in targets else np.eye(2) for q in range(p.qubits))
    spec = PerturbationSpec(p.spec.strength, axis, p.spec.targets, p.spec.weights)
    return Perturbation(rot @ p.matrix @ rot.conj().T,
                        rot @ p.generator @ rot.conj().T, spec, p.qubits)


def build_perturbation(spec: PerturbationSpec, num_qubits: int) -> Perturbation:
    """Build about z, then conjugate to the requested axis."""
    z_spec = PerturbationSpec(spec.strength, "z", spec.targets, spec.weights)
    p = build_z_perturbation(z_spec, num_qubits)
    return conjugate_axis(p, spec.axis)


def eigenvalue_variance(v: np.ndarray) -> float:
    """Population variance of the eigenvalues of Hermitian v; sets the FGR rate."""
    check_hermitian(v, what="eigenvalue_variance input")
    lam = np.linalg.eigvalsh(v)
    return float(lam.var())
