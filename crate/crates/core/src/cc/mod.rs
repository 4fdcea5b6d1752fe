//! Symmetric evaluation/interpolation multiplication algorithms on the projective line.

mod base;
mod build;
mod plan;
mod verify;

pub use base::{base_algorithm, base_algorithm_for, base_rank, BaseAlgorithm, BaseTerm};
pub use build::{build_algorithm, multiply_with, BilinearTerm, SymmetricBilinearAlgorithm};
pub use plan::{
    check_conditions, find_divisor, predicted_rank, select_plan, select_plan_with, ConditionEntry,
    ConditionReport, EvaluationPlan, PlanOptions, Strategy, BASE_DEGREES,
};
pub use verify::{verify_algorithm, VerificationReport, VerifyMode, EXHAUSTIVE_LIMIT, SHARDS};
