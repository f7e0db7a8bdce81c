"""Beamformer design and evaluation: minimum-variance weights with optional
l1 and mixed-norm pattern penalties, plus a reproducible simulation harness.
"""

from .arrays import (
    AngleGrid,
    ArrayGeometry,
    LobePartition,
    SteeringMatrix,
    build_steering_matrix,
    partition_lobes,
    steering_vector,
)
from .estimators import (
    MixedNormBeamformer,
    MvdrBeamformer,
    SparseBeamformer,
    check_snapshot_array,
)
from .evaluation import (
    METHODS,
    BeamPattern,
    SinrReport,
    SweepResult,
    beam_pattern,
    monte_carlo,
    sinr,
    sweep_b,
)
from .proximal import prox_l1_complex, prox_linf_complex, project_l1_ball_complex
from .simulate import (
    CovarianceMatrix,
    Scenario,
    SnapshotBlock,
    SourceSpec,
    apply_weights,
    generate_snapshots,
    reference_scenario,
    sample_covariance,
    true_covariance,
)
from .solvers import (
    PenaltySpec,
    SolveDiagnostics,
    SolverOptions,
    WeightVector,
    mixed_norm_beamformer,
    mvdr_closed_form,
    penalized_objective,
    solve_composite,
    sparse_beamformer,
)

__version__ = "0.1.0"

__all__ = [
    "AngleGrid",
    "ArrayGeometry",
    "BeamPattern",
    "CovarianceMatrix",
    "LobePartition",
    "METHODS",
    "MixedNormBeamformer",
    "MvdrBeamformer",
    "PenaltySpec",
    "Scenario",
    "SinrReport",
    "SnapshotBlock",
    "SolveDiagnostics",
    "SolverOptions",
    "SourceSpec",
    "SparseBeamformer",
    "SteeringMatrix",
    "SweepResult",
    "WeightVector",
    "apply_weights",
    "beam_pattern",
    "build_steering_matrix",
    "check_snapshot_array",
    "generate_snapshots",
    "mixed_norm_beamformer",
    "monte_carlo",
    "mvdr_closed_form",
    "partition_lobes",
    "penalized_objective",
    "project_l1_ball_complex",
    "prox_l1_complex",
    "prox_linf_complex",
    "reference_scenario",
    "sample_covariance",
    "sinr",
    "solve_composite",
    "sparse_beamformer",
    "steering_vector",
    "sweep_b",
    "true_covariance",
]
