"""fdlab: a desk-scale laboratory for fidelity decay under perturbed quantum maps.

Builds pseudo-random (chaotic) and regular dynamical maps, applies
controlled perturbations, measures the Haar-averaged fidelity decay through
the one-clean-qubit trace circuit, fits exponential (Fermi-golden-rule)
decay rates, and evaluates engineered-environment decoherence factors.
"""
from .decoherence import (DecoherenceFactor, EnvironmentModel, decoherence_rate_scan,
                          exact_decoherence_factor, trotter_decoherence_curve,
                          trotter_decoherence_factor)
from .dqc1 import (Dqc1Outcome, ProbeState, build_echo_operator, dqc1_expectation,
                   dqc1_sampled, trace_from_basis_states)
from .fidelity import (DecayCurve, FitResult, average_fidelity, default_fit_window,
                       fit_exponential, fit_log_decay, saturation_level, state_fidelity)
from .harness import (ConvergenceRecord, ExperimentConfig, ExperimentRecord, ScanRecord,
                      load_config, read_records, run_convergence_campaign,
                      run_decay_campaign, run_decoherence_campaign, run_experiment,
                      write_records)
from .kernels import USING_COMPILED
from .maps import (MapSpec, RegularHamiltonianParams, build_map, coupling_layer,
                   ensemble_trace_moment, pseudo_random_map, regular_map)
from .perturb import (Perturbation, PerturbationSpec, build_perturbation,
                      build_z_perturbation, conjugate_axis, eigenvalue_variance)
from .qcore import (gue_hermitian, haar_unitary, kron, matexp_hermitian, partial_trace,
                    pauli_string)

__version__ = "0.1.0"
