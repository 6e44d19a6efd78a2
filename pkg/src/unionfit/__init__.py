"""unionfit: model a point set by an optimal union of low-dimensional
subspaces, with random-projection acceleration and verifiable error bounds."""

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyBundle,
    InvalidInit,
    InvalidPartition,
    InvalidSpec,
    NotNormalized,
    OutOfRange,
    UnionFitError,
    ZeroData,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    ReductionConfig,
    config_from_dict,
    derive_seed,
    load_config,
    run_experiment,
)
from .fitting import (
    AssignmentTrace,
    best_subspace,
    bundle_from_partition,
    partition_from_bundle,
)
from .io import load_dataset, save_dataset
from .metrics import (
    bundle_error,
    dist2_to_subspace,
    distance_table,
    ek_min_error,
    group_error,
    sparsity_witness_check,
)
from .model import (
    Bundle,
    DataSet,
    ModelParams,
    Partition,
    PartitionViolation,
    Subspace,
    matrix_rank,
    normalize_dataset,
    validate_partition,
)
from .pipeline import (
    LiftReport,
    SolverConfig,
    ek_perturbation_check,
    eta_admissibility_epsilon,
    gram_distortion,
    min_reduced_dim,
    reduce_solve_lift,
    theorem_bound,
)
from .projection import (
    ConcentrationReport,
    RandomSpec,
    c0,
    check_rank_preservation,
    empirical_concentration,
    sample_matrix,
)
from .solver import (
    SolveReport,
    alternate_minimize,
    brute_force_oracle,
    random_partition,
    solve_best_model,
)
from .synthetic import GroundTruth, SyntheticSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AssignmentTrace",
    "BudgetExceeded",
    "Bundle",
    "ConcentrationReport",
    "DataSet",
    "DimensionMismatch",
    "EmptyBundle",
    "ExperimentConfig",
    "ExperimentResult",
    "GroundTruth",
    "InvalidInit",
    "InvalidPartition",
    "InvalidSpec",
    "LiftReport",
    "ModelParams",
    "NotNormalized",
    "OutOfRange",
    "Partition",
    "PartitionViolation",
    "RandomSpec",
    "ReductionConfig",
    "SolveReport",
    "SolverConfig",
    "Subspace",
    "SyntheticSpec",
    "UnionFitError",
    "ZeroData",
    "alternate_minimize",
    "best_subspace",
    "brute_force_oracle",
    "bundle_error",
    "bundle_from_partition",
    "c0",
    "check_rank_preservation",
    "config_from_dict",
    "derive_seed",
    "dist2_to_subspace",
    "distance_table",
    "ek_min_error",
    "ek_perturbation_check",
    "empirical_concentration",
    "eta_admissibility_epsilon",
    "generate_synthetic",
    "gram_distortion",
    "group_error",
    "load_config",
    "load_dataset",
    "matrix_rank",
    "min_reduced_dim",
    "normalize_dataset",
    "partition_from_bundle",
    "random_partition",
    "reduce_solve_lift",
    "run_experiment",
    "sample_matrix",
    "save_dataset",
    "solve_best_model",
    "sparsity_witness_check",
    "theorem_bound",
    "validate_partition",
]
