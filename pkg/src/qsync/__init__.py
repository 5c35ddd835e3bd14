"""Two dissipative qubits coupled to a lossy resonator.

Builds the rotating-wave Hamiltonian with a tunable qubit-qubit coupling,
identifies the noise-protected state, evolves the Lindblad master equation by
blocked matrix exponentiation (with an independent integrator cross-check),
and reproduces the reference scenarios: synchronization through resonator
loss, its degradation under local qubit noise, the coherence sweep over
(kappa_B, gamma_r), and microcanonical relaxation under pure dephasing.
"""

from ._version import __version__
from .config import (ScenarioConfig, SweepConfig, load_config, load_preset,
                     parse_config, preset_names, serialize_config)
from .errors import (ConfigError, InvalidTruncationError, InvariantViolationError,
                     PositivityError, QsyncError, SingularCouplingError,
                     StiffnessError, TruncationLeakageError)
from .hilbert import (HilbertSpace, build_space, coherent_state, identity,
                      ladder_ops, number_operator, pauli_ops)
from .liouvillian import (Channel, Liouvillian, apply_rhs, build_liouvillian,
                          channels, dissipator_apply, unvec, vec)
from .model import (ExcitationBlock, ModelParams, ProtectedPair, build_hamiltonian,
                    excitation_blocks, protected_pair, tuned_kappa_AB)
from .observables import (ObservableRecord, SyncReport, block_populations, entropies,
                          expectation, make_context, pair_diagnostics, sync_diagnostics)
from .propagate import Trajectory, propagate_expm, propagate_integrator
from .scenarios import (ScenarioResult, SweepResult, emit_sweep_csv,
                        emit_trajectory_csv, run_scenario, run_sweep,
                        sweep_cell_config)
from .steady import (StationarySet, dephasing_uniqueness_caveats, kernel_dimension,
                     microcanonical_state, stationarity_residual)

__all__ = [
    "__version__",
    "ScenarioConfig", "SweepConfig", "load_config", "load_preset", "parse_config",
    "preset_names", "serialize_config",
    "ConfigError", "InvalidTruncationError", "InvariantViolationError",
    "PositivityError", "QsyncError", "SingularCouplingError", "StiffnessError",
    "TruncationLeakageError",
    "HilbertSpace", "build_space", "coherent_state", "identity", "ladder_ops",
    "number_operator", "pauli_ops",
    "Channel", "Liouvillian", "apply_rhs", "build_liouvillian", "channels",
    "dissipator_apply", "unvec", "vec",
    "ExcitationBlock", "ModelParams", "ProtectedPair", "build_hamiltonian",
    "excitation_blocks", "protected_pair", "tuned_kappa_AB",
    "ObservableRecord", "SyncReport", "block_populations", "entropies",
    "expectation", "make_context", "pair_diagnostics", "sync_diagnostics",
    "Trajectory", "propagate_expm", "propagate_integrator",
    "ScenarioResult", "SweepResult", "emit_sweep_csv", "emit_trajectory_csv",
    "run_scenario", "run_sweep", "sweep_cell_config",
    "StationarySet", "dephasing_uniqueness_caveats", "kernel_dimension",
    "microcanonical_state", "stationarity_residual",
]
