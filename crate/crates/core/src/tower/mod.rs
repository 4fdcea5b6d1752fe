//! Tower data and the bounds on `μ^sym_q(n)` for `q ∈ {2, 3}`.
//!
//! `T2` (over `F_2`, sub-steps `H_{i,s}`) serves `q = 2` and `E` (over `F_3`, steps
//! `G_i`) serves `q = 3`. All arithmetic is exact; `q^{1/2}` is either rewritten as
//! an integer (`q = 4`) or carried in a [`QuadraticSurd`].

mod audit;
mod bound;
mod data;
mod ineq;
mod known;
mod surd;

pub use audit::{audit, AuditEntry, AuditReport, Verdict};
pub use bound::{
    bound_formula, bound_table, pointwise_bound, select_step, stated_slope, threshold, tower_for, uniform_slope,
    BAssignment, BoundReport, BoundSource, Branch, BranchEval, Scope, SlopeReport, TraceEntry,
};
pub use data::{
    capacity_slack, condition_a, condition_a_rhs, delta_genus_lower, genus_bounds, genus_exact, genus_exact_t0,
    genus_sandwich_lower, genus_sandwich_upper, genus_tight_upper, paper_capacity, placecount_lower,
    rational_places_exact_t0, step_capacity, step_data, sublevel_upper_a, sublevel_upper_b, DeltaGenus, Mode, StepData,
    TowerId, TowerStep,
};
pub use ineq::{Inequality, Relation};
pub use known::{parse_known_values, KnownValue, KnownValues};
pub use surd::{rat_str, sqrt_q_compare, QuadraticSurd};
