"""Closed-form linear and ridge regression with randomized naturality audits.

The package fits linear models from their normal-equation solutions and
certifies, through seeded commutative-diagram trials and two exact
counterexamples, which kinds of structured data transformations each fit
rule commutes with.
"""

__version__ = "0.1.0"

from .data import Dataset, dataset_from_csv, dataset_to_csv, synth_dataset
from .errors import (
    ConfigError,
    ContractViolation,
    EmptyDataset,
    InvalidHyperparameter,
    NatregError,
    NotPositiveDefinite,
    OracleDiverged,
    ParseError,
    RankDeficient,
    SamplingFailed,
)
from .linalg import (
    SeedState,
    condition_estimate,
    matmul,
    numerical_rank,
    qr_thin,
    rel_distance,
    sample_gaussian,
    solve_spd,
)
from .morphisms import (
    Axis,
    CategoryKind,
    Morphism,
    act_on_index,
    act_on_predictors,
    act_on_targets,
    model_action_target,
    model_precompose_predictor,
    sample_morphism,
    verify_morphism,
)
from .naturality import (
    AuditConfig,
    AuditReport,
    CellSummary,
    DiagramTrial,
    ScalingCounterexample,
    ShearCounterexample,
    check_index_invariance,
    check_predictor_dinaturality,
    check_target_naturality,
    counterexample_ols_shear,
    counterexample_ridge_scaling,
    expected_natural,
    run_audit,
)
from .regression import (
    AlgorithmKind,
    AlgorithmSpec,
    LinearModel,
    min_norm_ols_fit,
    ols_fit,
    ols_oracle_fit,
    predict,
    ridge_fit,
    ridge_objective,
    ridge_objective_gradient,
    sse,
    sse_gradient,
)

__all__ = [
    "AlgorithmKind",
    "AlgorithmSpec",
    "AuditConfig",
    "AuditReport",
    "Axis",
    "CategoryKind",
    "CellSummary",
    "ConfigError",
    "ContractViolation",
    "Dataset",
    "DiagramTrial",
    "EmptyDataset",
    "InvalidHyperparameter",
    "LinearModel",
    "Morphism",
    "NatregError",
    "NotPositiveDefinite",
    "OracleDiverged",
    "ParseError",
    "RankDeficient",
    "SamplingFailed",
    "ScalingCounterexample",
    "SeedState",
    "ShearCounterexample",
    "act_on_index",
    "act_on_predictors",
    "act_on_targets",
    "check_index_invariance",
    "check_predictor_dinaturality",
    "check_target_naturality",
    "condition_estimate",
    "counterexample_ols_shear",
    "counterexample_ridge_scaling",
    "dataset_from_csv",
    "dataset_to_csv",
    "expected_natural",
    "matmul",
    "min_norm_ols_fit",
    "model_action_target",
    "model_precompose_predictor",
    "numerical_rank",
    "ols_fit",
    "ols_oracle_fit",
    "predict",
    "qr_thin",
    "rel_distance",
    "ridge_fit",
    "ridge_objective",
    "ridge_objective_gradient",
    "run_audit",
    "sample_gaussian",
    "sample_morphism",
    "solve_spd",
    "sse",
    "sse_gradient",
    "synth_dataset",
    "verify_morphism",
]
