"""One-clean-qubit protocol: circuit correctness, shot statistics, oracles."""
import numpy as np
import pytest

from fdlab.dqc1 import (ProbeState, build_echo_operator, dqc1_expectation,
                        dqc1_sampled, trace_from_basis_states)
from fdlab.fidelity import average_fidelity, fidelity_from_trace
from fdlab.maps import MapSpec, RegularHamiltonianParams, pseudo_random_map, regular_map
from fdlab.perturb import PerturbationSpec, build_z_perturbation
from fdlab.qcore import haar_unitary


class TestEchoOperator:
    def test_zero_steps_is_identity(self):
        rng = np.random.default_rng(0)
        u = haar_unitary(8, rng)
        p = haar_unitary(8, rng)
        assert np.array_equal(build_echo_operator(u, p, 0), np.eye(8, dtype=complex))

    def test_identity_perturbation_cancels(self):
        rng = np.random.default_rng(1)
        u = haar_unitary(8, rng)
        w = build_echo_operator(u, np.eye(8, dtype=complex), 7)
        assert np.max(np.abs(w - np.eye(8))) < 1e-10

    def test_commuting_case_gives_perturbation_powers(self):
        u = regular_map(MapSpec("regular", 3, regular_params=RegularHamiltonianParams(
            shifts=(500.0, 300.0, 200.0))))
        p = build_z_perturbation(PerturbationSpec(0.3), 3)
        w = build_echo_operator(u, p, 6)
        assert np.max(np.abs(w - np.linalg.matrix_power(p.matrix, 6))) < 1e-10


class TestExactProtocol:
    def test_identity_full_polarization(self):
        out = dqc1_expectation(np.eye(8, dtype=complex), ProbeState(1.0))
        assert out.re == pytest.approx(1.0, abs=1e-12)
        assert out.im == pytest.approx(0.0, abs=1e-12)

    def test_global_phase(self):
        phi = 1.1
        out = dqc1_expectation(np.exp(1j * phi) * np.eye(4, dtype=complex), ProbeState(0.5))
        assert out.re + 1j * out.im == pytest.approx(0.5 * np.exp(1j * phi), abs=1e-12)

    def test_matches_direct_trace_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            w = haar_unitary(8, rng)
            out = dqc1_expectation(w, ProbeState(0.8))
            want = 0.8 * np.trace(w) / 8
            assert abs((out.re + 1j * out.im) - want) < 1e-10

    def test_linear_in_polarization(self):
        rng = np.random.default_rng(3)
        w = haar_unitary(8, rng)
        full = dqc1_expectation(w, ProbeState(1.0))
        part = dqc1_expectation(w, ProbeState(0.3))
        assert abs(part.re - 0.3 * full.re) < 1e-12
        assert abs(part.im - 0.3 * full.im) < 1e-12

    def test_polarization_bound(self):
        rng = np.random.default_rng(4)
        w = haar_unitary(16, rng)
        out = dqc1_expectation(w, ProbeState(0.05))
        assert abs(out.re) <= 0.05 + 1e-12
        assert abs(out.im) <= 0.05 + 1e-12

    def test_reconstructs_average_fidelity(self):
        # protocol outcomes, divided by eps, rebuild the decay curve
        u = pseudo_random_map(MapSpec("pseudo_random", 3, 4, 5))
        p = build_z_perturbation(PerturbationSpec(0.4), 3)
        curve = average_fidelity(u, p, 6)
        eps = 0.7
        for m in (0, 2, 5, 6):
            w = build_echo_operator(u, p, m)
            out = dqc1_expectation(w, ProbeState(eps))
            fid = fidelity_from_trace(out.trace_estimate(8), 8)
            assert abs(fid - curve.fidelities[m]) < 1e-10


class TestSampledProtocol:
    def test_extremal_outcome_deterministic(self):
        out = dqc1_sampled(np.eye(8, dtype=complex), ProbeState(1.0), shots=64,
                           rng=np.random.default_rng(0))
        assert out.re == 1.0
        assert out.stderr_re == 0.0

    def test_fixed_seed_reproduces(self):
        rng_w = np.random.default_rng(5)
        w = haar_unitary(8, rng_w)
        a = dqc1_sampled(w, ProbeState(1.0), 100, np.random.default_rng(42))
        b = dqc1_sampled(w, ProbeState(1.0), 100, np.random.default_rng(42))
        assert (a.re, a.im, a.stderr_re, a.stderr_im) == (b.re, b.im, b.stderr_re, b.stderr_im)

    def test_unbiased_against_exact(self):
        rng = np.random.default_rng(6)
        w = haar_unitary(8, rng)
        exact = dqc1_expectation(w, ProbeState(1.0))
        reps = 100
        res = [dqc1_sampled(w, ProbeState(1.0), 400, np.random.default_rng(1000 + i))
               for i in range(reps)]
        means = np.array([r.re for r in res])
        se = means.std(ddof=1) / np.sqrt(reps)
        assert abs(means.mean() - exact.re) < 3 * se + 1e-12

    def test_four_x_shots_halve_stderr(self):
        rng = np.random.default_rng(7)
        w = haar_unitary(8, rng)
        se_small = np.mean([dqc1_sampled(w, ProbeState(1.0), 256,
                                         np.random.default_rng(i)).stderr_re
                            for i in range(60)])
        se_big = np.mean([dqc1_sampled(w, ProbeState(1.0), 1024,
                                       np.random.default_rng(i)).stderr_re
                          for i in range(60)])
        assert se_small / se_big == pytest.approx(2.0, rel=0.15)

    def test_single_shot_measures_x_only(self):
        rng = np.random.default_rng(8)
        w = haar_unitary(4, rng)
        out = dqc1_sampled(w, ProbeState(1.0), 1, np.random.default_rng(0))
        assert out.im == 0.0 and np.isinf(out.stderr_im)

    def test_rejects_zero_shots(self):
        with pytest.raises(ValueError):
            dqc1_sampled(np.eye(2, dtype=complex), ProbeState(1.0), 0,
                         np.random.default_rng(0))


def test_basis_state_sampling_oracle():
    # independent route to Tr(W)/N: average diagonal entries over random basis states
    rng = np.random.default_rng(9)
    w = haar_unitary(16, rng)
    mean, se = trace_from_basis_states(w, 4000, np.random.default_rng(10))
    assert abs(mean - np.trace(w) / 16) < 3 * se + 1e-12


def test_probe_state_validation():
    with pytest.raises(ValueError):
        ProbeState(0.0)
    with pytest.raises(ValueError):
        ProbeState(1.5)
