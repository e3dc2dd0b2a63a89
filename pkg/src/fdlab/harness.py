"""Experiment orchestration: configs, seeded ensemble campaigns, CSV/JSON output.

Campaigns derive one generator per ensemble member from
(master_seed, member index), compute members independently (optionally in
parallel, capped by ``FDLAB_THREADS``), and emit records in member order,
so identical configs produce byte-identical output files regardless of
scheduling.

Config files are flat ``key = value`` text, one experiment per file;
``#`` starts a comment and unknown keys are rejected.
"""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from .decoherence import EnvironmentModel, decoherence_rate_scan
from .dqc1 import ProbeState, dqc1_expectation, dqc1_sampled
from .fidelity import average_fidelity, fidelity_from_trace
from .maps import MapSpec, RegularHamiltonianParams, build_map, ensemble_trace_moment
from .perturb import PerturbationSpec, build_perturbation
from .qcore import gue_hermitian, haar_unitary

EXPERIMENTS = ("decay", "dqc1", "decohere", "converge")

CSV_HEADER = ("experiment_id,map_seed,step,re_trace,im_trace,fidelity,"
              "ensemble_mean,ensemble_std,shots,stderr")

HAAR_REFERENCE_DEPTH = -1  # depth column value marking the Haar reference row


class ConfigError(ValueError):
    """Invalid experiment configuration (bad value, unknown key, ...)."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "decay"
    qubits: int = 4
    steps: int = 30
    map_kind: str = "pseudo_random"
    iterations: int = 4
    shifts: tuple = (500.0, 300.0, 200.0, 100.0)
    coupling: float = 40.0 / (2.0 * np.pi)
    timestep: float = 1e-3
    delta: float = 0.3
    axis: str = "z"
    targets: tuple | None = None
    weights: tuple | None = None
    ensemble: int = 20
    master_seed: int = 0
    epsilon: float = 1.0
    shots: int = 0
    output: str = ""
    format: str = "csv"
    # decohere-specific knobs
    env_dim: int = 16
    lambdas: tuple = (0.0, 0.25, 0.35, 0.5)
    pairs: tuple = ()  # () = all (j, k) with j > k
    t_max: float = 25.0
    trotter_delta: float = 0.05

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.qubits < 1:
            raise ConfigError("qubits must be >= 1")
        if self.map_kind not in ("pseudo_random", "regular"):
            raise ConfigError(f"unknown map kind {self.map_kind!r}")
        if self.map_kind == "pseudo_random" and self.qubits < 2:
            raise ConfigError("pseudo_random maps need qubits >= 2")
        if self.steps < 0:
            raise ConfigError("steps must be >= 0")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.ensemble < 1:
            raise ConfigError("ensemble size must be >= 1")
        if self.shots < 0:
            raise ConfigError("shots must be >= 0 (0 = exact)")
        if not 0.0 < self.epsilon <= 1.0:
            raise ConfigError("epsilon must be in (0, 1]")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.format!r}")
        if self.axis not in ("x", "y", "z"):
            raise ConfigError(f"unknown perturbation axis {self.axis!r}")
        if not np.isfinite(self.delta):
            raise ConfigError("delta must be finite")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be a non-negative integer")
        if self.env_dim < 2:
            raise ConfigError("env_dim must be >= 2")
        if len(self.lambdas) < 2:
            raise ConfigError("need at least two coupling eigenvalues")
        if self.trotter_delta <= 0 or self.t_max <= 0:
            raise ConfigError("t_max and trotter_delta must be positive")
        return self

    def map_spec(self, seed: int) -> MapSpec:
        params = RegularHamiltonianParams(self.shifts, (), self.coupling, self.timestep)
        return MapSpec(self.map_kind, self.qubits, self.iterations, seed, params)

    def perturbation_spec(self) -> PerturbationSpec:
        return PerturbationSpec(self.delta, self.axis, self.targets, self.weights)


@dataclass(frozen=True)
class ExperimentRecord:
    experiment_id: str
    map_seed: int | None
    step: int
    re_trace: float | None
    im_trace: float | None
    fidelity: float | None
    ensemble_mean: float | None
    ensemble_std: float | None
    shots: int
    stderr: float | None


@dataclass(frozen=True)
class ConvergenceRecord:
    depth: int  # map iterations; HAAR_REFERENCE_DEPTH marks the Haar row
    moment: float
    stderr: float


# --- config file parsing -------------------------------------------------

_LIST_KEYS = {"shifts", "weights", "lambdas"}
_INT_LIST_KEYS = {"targets"}
_PAIR_KEYS = {"pairs"}


def _coerce(key: str, raw: str):
    kinds = {f.name: f.type for f in fields(ExperimentConfig)}
    if key not in kinds:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        if key in _LIST_KEYS:
            return tuple(float(x) for x in raw.split(",") if x.strip())
        if key in _INT_LIST_KEYS:
            return tuple(int(x) for x in raw.split(",") if x.strip())
        if key in _PAIR_KEYS:
            return tuple(tuple(int(p) for p in item.split(":"))
                         for item in raw.split(",") if item.strip())
        default = getattr(ExperimentConfig, key)
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc


def parse_config_text(text: str) -> dict:
    """Flat key = value lines into a config field dict; unknown keys rejected."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        out[key.strip()] = _coerce(key.strip(), raw.strip())
    return out


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        values = parse_config_text(fh.read())
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return ExperimentConfig(**values).validate()


# --- campaign machinery ---------------------------------------------------


def _worker_count() -> int:
    env = os.environ.get("FDLAB_THREADS", "")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _parallel_map(fn, indices):
    """Index-ordered results; parallel when FDLAB_THREADS allows."""
    workers = _worker_count()
    if workers == 1:
        return [fn(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, indices))


def _member_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1)[0])


def _experiment_id(cfg: ExperimentConfig) -> str:
    return f"{cfg.experiment}:{cfg.master_seed}"


def _member_records(cfg: ExperimentConfig, index: int) -> list[ExperimentRecord]:
    seed = _member_seed(cfg.master_seed, index)
    u = build_map(cfg.map_spec(seed))
    p = build_perturbation(cfg.perturbation_spec(), cfg.qubits)
    dim = u.shape[0]
    eid = _experiment_id(cfg)
    records = []
    if cfg.experiment == "decay" and cfg.shots == 0:
        # direct trace computation, no measurement model
        curve = average_fidelity(u, p, cfg.steps)
        for m in range(cfg.steps + 1):
            t = curve.traces[m]
            records.append(ExperimentRecord(eid, seed, m, float(t.real), float(t.imag),
                                            float(curve.fidelities[m]), None, None, 0, 0.0))
        return records
    # measure the echo trace through the one-clean-qubit protocol
    probe = ProbeState(cfg.epsilon)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, index, 1]))
    a = np.eye(dim, dtype=complex)
    b = np.eye(dim, dtype=complex)
    pu = p.matrix @ u
    for m in range(cfg.steps + 1):
        if m > 0:
            a = a @ u
            b = b @ pu
        echo = a.conj().T @ b
        if cfg.shots == 0:
            outcome = dqc1_expectation(echo, probe)
            se = 0.0
        else:
            outcome = dqc1_sampled(echo, probe, cfg.shots, rng)
            se = float(np.hypot(outcome.stderr_re, outcome.stderr_im) * dim / cfg.epsilon)
        t = outcome.trace_estimate(dim)
        records.append(ExperimentRecord(eid, seed, m, float(t.real), float(t.imag),
                                        float(fidelity_from_trace(t, dim)),
                                        None, None, cfg.shots, se))
    return records


def run_decay_campaign(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Per-map decay records plus per-step ensemble aggregate rows.

    Per-map rows carry the measured traces and their shot-noise stderr;
    aggregate rows carry the across-map mean and unbiased standard deviation
    of the fidelity (the two error sources are reported separately).
    """
    cfg.validate()
    per_map = _parallel_map(lambda i: _member_records(cfg, i), range(cfg.ensemble))
    records = [r for member in per_map for r in member]
    eid = _experiment_id(cfg)
    for m in range(cfg.steps + 1):
        vals = np.array([member[m].fidelity for member in per_map])
        std = float(vals.std(ddof=1)) if cfg.ensemble > 1 else None
        records.append(ExperimentRecord(eid, None, m, None, None, None,
                                        float(vals.mean()), std, cfg.shots, None))
    return records


def run_convergence_campaign(cfg: ExperimentConfig) -> list[ConvergenceRecord]:
    """mean |Tr U|^2 against depth r in {1, 2, 4, 8}, plus a Haar reference row."""
    cfg.validate()
    records = []
    for r in (1, 2, 4, 8):
        seed = _member_seed(cfg.master_seed, r)
        moment, stderr = ensemble_trace_moment(cfg.qubits, r, cfg.ensemble, seed)
        records.append(ConvergenceRecord(r, moment, stderr))
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, 0xFFFF]))
    dim = 2 ** cfg.qubits
    vals = np.array([np.abs(np.trace(haar_unitary(dim, rng))) ** 2
                     for _ in range(cfg.ensemble)])
    records.append(ConvergenceRecord(HAAR_REFERENCE_DEPTH, float(vals.mean()),
                                     float(vals.std(ddof=1) / np.sqrt(cfg.ensemble))))
    return records


@dataclass(frozen=True)
class ScanRecord:
    delta_lambda: float
    rate: float
    residual: float


def run_decoherence_campaign(cfg: ExperimentConfig) -> list[ScanRecord]:
    """GUE-environment rate scan; one (delta_lambda, rate, residual) row per pair."""
    cfg.validate()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.master_seed, 0]))
    env = EnvironmentModel(gue_hermitian(cfg.env_dim, rng),
                           gue_hermitian(cfg.env_dim, rng), tuple(cfg.lambdas))
    pairs = cfg.pairs or tuple((j, k) for j in range(len(cfg.lambdas)) for k in range(j))
    points = decoherence_rate_scan(env, pairs, cfg.t_max, cfg.trotter_delta)
    return [ScanRecord(p.delta_lambda, p.rate, p.residual) for p in points]


def run_experiment(cfg: ExperimentConfig):
    cfg.validate()
    if cfg.experiment in ("decay", "dqc1"):
        return run_decay_campaign(cfg)
    if cfg.experiment == "converge":
        return run_convergence_campaign(cfg)
    return run_decoherence_campaign(cfg)


# --- serialization --------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _record_fields(record) -> list[tuple]:
    return [(f.name, getattr(record, f.name)) for f in fields(record)]


def write_records(records, path: str, fmt: str = "csv") -> None:
    """Emit records as CSV (17 significant digits) or JSON (flat objects).

    The CSV header is fixed per record type; for decay records it is exactly
    ``experiment_id,map_seed,...,stderr``. Missing values are empty CSV
    fields / JSON nulls. I/O failures are re-raised with the path attached.
    """
    rows = [_record_fields(r) for r in records]
    try:
        if fmt == "csv":
            header = ",".join(name for name, _ in rows[0]) if rows else CSV_HEADER
            lines = [header]
            lines += [",".join(_fmt(v) for _, v in row) for row in rows]
            payload = "\n".join(lines) + "\n"
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(payload)
        elif fmt == "json":
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                json.dump([dict(row) for row in rows], fh, indent=1)
                fh.write("\n")
        else:
            raise ConfigError(f"unknown output format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write records to {path!r}: {exc}") from exc


def _typed(value, kind):
    if value in (None, ""):
        return None
    return kind(value)


def read_records(path: str, fmt: str = "csv") -> list[ExperimentRecord]:
    """Parse decay-campaign output back into records (round-trip inverse)."""
    kinds = {"experiment_id": str, "map_seed": int, "step": int, "shots": int,
             "re_trace": float, "im_trace": float, "fidelity": float,
             "ensemble_mean": float, "ensemble_std": float, "stderr": float}
    if fmt == "csv":
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln]
        names = lines[0].split(",")
        raw = [dict(zip(names, ln.split(","))) for ln in lines[1:]]
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    return [ExperimentRecord(**{k: _typed(row[k], kinds[k]) for k in kinds}) for row in raw]
