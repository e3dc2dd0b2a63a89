"""Fidelity-decay curves, exponential-rate fits, and the finite-size saturation level.

The per-state decay after m steps is |<psi| (U^m)^dag (PU)^m |psi>|^2; its
average over Haar-distributed initial states depends only on the echo trace
t_m = Tr[(U^m)^dag (PU)^m]:

    Fbar(m) = (|t_m|^2 + N) / (N^2 + N)

which decays toward the 1/N floor reached when the echo operator's trace
statistics match a random unitary's.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .perturb import Perturbation


def saturation_level(dim: int) -> float:
    """Long-time ensemble-average floor (1 + N)/(N^2 + N) = 1/N."""
    if dim < 2:
        raise ValueError("saturation_level needs dim >= 2")
    return (1.0 + dim) / (dim ** 2 + dim)


def fidelity_from_trace(trace, dim: int):
    """Haar-averaged fidelity implied by an echo trace: (|t|^2 + N)/(N^2 + N)."""
    return (np.abs(trace) ** 2 + dim) / (dim ** 2 + dim)


@dataclass(frozen=True)
class DecayCurve:
    """Echo traces and averaged fidelities per step, with build metadata."""

    steps: np.ndarray
    traces: np.ndarray
    fidelities: np.ndarray
    dim: int
    meta: dict

    def __post_init__(self):
        if not abs(self.fidelities[0] - 1.0) <= 1e-12:
            raise ValueError("decay curve must start at fidelity 1")
        expect = fidelity_from_trace(self.traces, self.dim)
        if not np.all(np.abs(expect - self.fidelities) <= 1e-12):
            raise ValueError("stored fidelities inconsistent with stored traces")


@dataclass(frozen=True)
class FitResult:
    """Exponential decay rate per step, log-domain intercept and RMS residual,
    and the fitted step window [start, stop)."""

    rate: float
    intercept: float
    residual: float
    window: tuple


def state_fidelity(u: np.ndarray, p: Perturbation | np.ndarray, psi: np.ndarray,
                   n: int) -> np.ndarray:
    """F_m = |<psi|(u^m)^dag (Pu)^m|psi>|^2 for m = 0..n.

    Both evolutions are iterated on state vectors; u^m is never formed.
    ``psi`` may hold one state per column to evaluate a batch at once.
    """
    pm = p.matrix if isinstance(p, Perturbation) else p
    if u.shape[0] != pm.shape[0] or psi.shape[0] != u.shape[0]:
        raise ValueError("state_fidelity: dimension mismatch")
    if n < 0:
        raise ValueError("state_fidelity: n must be >= 0")
    if not np.allclose(np.linalg.norm(psi, axis=0), 1.0, atol=1e-12):
        raise ValueError("state_fidelity: states must be normalized")
    pu = pm @ u
    a = psi.astype(complex).copy()
    b = psi.astype(complex).copy()
    out = np.empty((n + 1,) + psi.shape[1:])
    out[0] = np.abs(np.sum(a.conj() * b, axis=0)) ** 2
    for m in range(1, n + 1):
        a = u @ a
        b = pu @ b
        out[m] = np.abs(np.sum(a.conj() * b, axis=0)) ** 2
    return out


def _is_diagonal(a: np.ndarray) -> bool:
    return np.count_nonzero(a - np.diag(np.diagonal(a))) == 0


def average_fidelity(u: np.ndarray, p: Perturbation | np.ndarray, n: int,
                     meta: dict | None = None) -> DecayCurve:
    """Haar-averaged decay curve from the echo traces t_m = Tr[(u^m)^dag (Pu)^m].

    Powers are built incrementally (two running products, O(n N^3)); when u
    and P are both diagonal the traces reduce to Tr P^m (U cancels) and are
    evaluated in O(n N).
    """
    pm = p.matrix if isinstance(p, Perturbation) else p
    dim = u.shape[0]
    if pm.shape[0] != dim:
        raise ValueError("average_fidelity: dimension mismatch")
    if n < 0:
        raise ValueError("average_fidelity: n must be >= 0")
    if _is_diagonal(u) and _is_diagonal(pm):
        phases = np.diagonal(pm)
        traces = np.array([np.sum(phases ** m) for m in range(n + 1)])
    else:
        traces = kernels.echo_traces(np.ascontiguousarray(u, dtype=complex),
                                     np.ascontiguousarray(pm @ u, dtype=complex), n)
    return DecayCurve(np.arange(n + 1), traces, fidelity_from_trace(traces, dim),
                      dim, dict(meta or {}))


def default_fit_window(curve: DecayCurve, margin: float = 3.0) -> tuple:
    """Step 1 up to the first crossing of margin * saturation (skipping the
    step-0 transient); at least 3 points."""
    floor = saturation_level(curve.dim)
    stop = len(curve.fidelities)
    for i in range(1, len(curve.fidelities)):
        if curve.fidelities[i] < margin * floor:
            stop = i
            break
    stop = max(stop, 4)
    return 1, min(stop, len(curve.fidelities))


def fit_log_decay(steps: np.ndarray, values: np.ndarray, window: tuple) -> FitResult:
    """Least-squares line fit of ln(values) vs steps over [start, stop)."""
    start, stop = window
    if stop - start < 2:
        raise ValueError("fit window must contain at least 2 points")
    x = np.asarray(steps[start:stop], dtype=float)
    y = np.asarray(values[start:stop], dtype=float)
    if np.any(y <= 0):
        raise ValueError("fit window contains a non-positive value")
    ly = np.log(y)
    slope, intercept = np.polyfit(x, ly, 1)
    resid = ly - (slope * x + intercept)
    return FitResult(-float(slope), float(intercept),
                     float(np.sqrt(np.mean(resid ** 2))), (start, stop))


def fit_exponential(curve: DecayCurve, window: tuple | None = None,
                    margin: float = 2.0) -> FitResult:
    """Fit ln Fbar vs n over the window; rate = -slope.

    The window defaults to ``default_fit_window``, which stops at the first
    crossing of 3 x saturation. Windows containing a non-positive fidelity,
    or lying entirely below margin * saturation (margin configurable,
    default 2), are rejected with a diagnostic.
    """
    if window is None:
        window = default_fit_window(curve)
    start, stop = window
    if not 0 <= start < stop <= len(curve.fidelities):
        raise ValueError(f"invalid fit window {window}")
    vals = curve.fidelities[start:stop]
    if np.any(vals <= 0):
        raise ValueError("fit window contains fidelity <= 0")
    floor = margin * saturation_level(curve.dim)
    if np.all(vals <= floor):
        raise ValueError(
            f"fit window [{start}, {stop}) lies entirely below {margin:g} x "
            f"saturation = {floor:.3g}; nothing left to fit above the plateau")
    return fit_log_decay(curve.steps, curve.fidelities, (start, stop))
