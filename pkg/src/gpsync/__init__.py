"""Geometric phases of dissipatively evolving spin systems.

Core pipeline: build a Lindblad model, propagate it on an equidistant grid,
and extract the kinematic geometric phase of the resulting density-matrix
path. Ships a spin-1 limit-cycle oscillator with a slowly rotating
quantization axis, closed-form oracles for its entrained steady state and
phases, synchronization measures in phase space, an interferometric
visibility/phase analysis, and a sweep CLI producing CSV tables and SVG
heatmaps.
"""
from .errors import (ConfigError, DegeneratePopulations, GpsyncError, IllConditionedPhase,
                     LabelingError, NonUniqueSteadyState, TraceDriftError)
from .evolver import (LindbladModel, Trajectory, evolve, liouvillian_apply,
                      liouvillian_superoperator, steady_state)
from .gp import (EigenPath, GpResult, accumulate_connection, differentiate_eigenvectors,
                 eigen_decompose_path, geometric_phase, geometric_phase_from_path)
from .mzi import MziResult, effective_propagator, visibility_and_phase
from .oracles import (QubitDephasingParams, RwaSteadyState, blockade_ratio,
                      gp_cyclic_with_signal, gp_no_signal, gp_noncyclic,
                      perturbative_density_matrix, qubit_dephasing_gp, qubit_dephasing_model,
                      rwa_steady_state, sync_measure_closed_form, vdp_coherences,
                      vdp_populations)
from .spinops import (ConeAxis, PhaseDistribution, coherent_spin_state, husimi_q,
                      pauli_operators, phase_distribution, rotation_operator,
                      spin1_operators, sync_measure_numeric)
from .sweep import (SweepConfig, SweepTable, emit_csv, gp_numeric_point, read_csv,
                    run_sweep)
from .heatmap import render_heatmap
from .vdp import (VdpParams, build_lab_frame_model, build_rwa_model, initial_steady_state,
                  vdp_jump_operators)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DegeneratePopulations", "GpsyncError", "IllConditionedPhase",
    "LabelingError", "NonUniqueSteadyState", "TraceDriftError",
    "LindbladModel", "Trajectory", "evolve", "liouvillian_apply",
    "liouvillian_superoperator", "steady_state",
    "EigenPath", "GpResult", "accumulate_connection", "differentiate_eigenvectors",
    "eigen_decompose_path", "geometric_phase", "geometric_phase_from_path",
    "MziResult", "effective_propagator", "visibility_and_phase",
    "QubitDephasingParams", "RwaSteadyState", "blockade_ratio", "gp_cyclic_with_signal",
    "gp_no_signal", "gp_noncyclic", "perturbative_density_matrix", "qubit_dephasing_gp",
    "qubit_dephasing_model", "rwa_steady_state", "sync_measure_closed_form",
    "vdp_coherences", "vdp_populations",
    "ConeAxis", "PhaseDistribution", "coherent_spin_state", "husimi_q", "pauli_operators",
    "phase_distribution", "rotation_operator", "spin1_operators", "sync_measure_numeric",
    "SweepConfig", "SweepTable", "emit_csv", "gp_numeric_point", "read_csv", "run_sweep",
    "render_heatmap",
    "VdpParams", "build_lab_frame_model", "build_rwa_model", "initial_steady_state",
    "vdp_jump_operators",
    "__version__",
]
