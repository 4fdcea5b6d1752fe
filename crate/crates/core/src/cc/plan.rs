//! Choosing `Q`, `D` and the evaluation places.

use std::fmt;

use super::base::base_rank;
use crate::error::{Error, Result};
use crate::ff::{first_irreducible, is_irreducible, FieldSpec, Polynomial};
use crate::function_field::{evaluate_at_q, evaluation_matrix, places_of_degree, riemann_roch_basis, Divisor, Place};
use crate::linalg::Matrix;

/// Place degrees with a base algorithm.
pub const BASE_DEGREES: [usize; 3] = [1, 2, 4];

/// Order in which the greedy selector spends budget, as `(degree, multiplicity)`.
/// Multiplicity-3 classes are only used when explicitly enabled.
const CLASS_ORDER: [(usize, usize); 9] = [
    (1, 1),
    (2, 1),
    (1, 2),
    (4, 1),
    (2, 2),
    (4, 2),
    (1, 3),
    (2, 3),
    (4, 3),
];

/// Largest place degree used when searching for an auxiliary divisor.
const DIVISOR_SEARCH_DEGREE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Default,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanOptions {
    pub max_degree: usize,
    pub strategy: Strategy,
    pub max_multiplicity: usize,
}

impl PlanOptions {
    pub fn new(max_degree: usize, strategy: Strategy) -> PlanOptions {
        PlanOptions {
            max_degree,
            strategy,
            max_multiplicity: 2,
        }
    }
}

/// `(Q, D, [(P_i, u_i)])` for one run of the construction.
#[derive(Clone, PartialEq, Eq)]
pub struct EvaluationPlan {
    pub field: FieldSpec,
    pub n: usize,
    /// The degree-`n` place, as its monic irreducible polynomial.
    pub q_place: Polynomial,
    pub divisor: Divisor,
    pub places: Vec<(Place, usize)>,
}

impl fmt::Debug for EvaluationPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvaluationPlan")
            .field("n", &self.n)
            .field("Q", &self.q_place)
            .field("D", &self.divisor)
            .field("places", &self.places)
            .finish()
    }
}

impl EvaluationPlan {
    /// `Σ u_i deg P_i`.
    pub fn budget(&self) -> usize {
        self.places.iter().map(|(p, u)| p.degree() * u).sum()
    }

    pub fn needed(&self) -> usize {
        2 * self.n - 1
    }
}

pub fn predicted_rank(plan: &EvaluationPlan) -> Result<usize> {
    plan.places.iter().map(|(p, u)| base_rank(p.degree(), *u)).sum()
}

/// The candidate evaluation places: degrees `{1, 2, 4}` up to `max_degree`, minus `Q`.
fn place_pool(field: &FieldSpec, max_degree: usize, q_place: &Polynomial, with_infinity: bool) -> Vec<Place> {
    let q = Place::Finite(q_place.clone());
    BASE_DEGREES
        .iter()
        .filter(|&&k| k <= max_degree)
        .flat_map(|&k| places_of_degree(field, k))
        .filter(|p| *p != q && (with_infinity || !p.is_infinite()))
        .collect()
}

fn pool_capacity(pool: &[Place], max_mult: usize) -> usize {
    pool.iter().map(|p| p.degree() * max_mult).sum()
}

/// Greedy fill of the budget `needed` in class order.
///
/// The first pass takes every upgrade that still fits; if the budget is not yet
/// met, the second pass takes the first available upgrade regardless, so the
/// overshoot stays below the largest place degree.
fn greedy(pool: &[Place], needed: usize, max_mult: usize) -> Vec<(Place, usize)> {
    let mut mult = vec![0usize; pool.len()];
    let options: Vec<(usize, usize)> = CLASS_ORDER
        .iter()
        .filter(|(_, u)| *u <= max_mult)
        .flat_map(|&(k, u)| {
            pool.iter()
                .enumerate()
                .filter(move |(_, p)| p.degree() == k)
                .map(move |(i, _)| (i, u))
        })
        .collect();
    let mut budget = 0;
    for &(i, u) in &options {
        if budget == needed {
            break;
        }
        let k = pool[i].degree();
        if mult[i] + 1 == u && budget + k <= needed {
            mult[i] = u;
            budget += k;
        }
    }
    while budget < needed {
        let Some(&(i, u)) = options.iter().find(|&&(i, u)| mult[i] + 1 == u) else {
            break;
        };
        mult[i] = u;
        budget += pool[i].degree();
    }
    collect_plan(pool, &mult)
}

/// Minimum-rank assignment of multiplicities reaching the budget.
fn knapsack(pool: &[Place], needed: usize, max_mult: usize) -> Option<Vec<(Place, usize)>> {
    const INF: usize = usize::MAX;
    // best[i][b]: min rank using pool[i..] to add at least b more budget.
    let m = pool.len();
    let mut best = vec![vec![INF; needed + 1]; m + 1];
    best[m][0] = 0;
    for i in (0..m).rev() {
        let k = pool[i].degree();
        for b in 0..=needed {
            let mut v = INF;
            for u in 0..=max_mult {
                let cost = if u == 0 { 0 } else { base_rank(k, u).ok()? };
                let rest = best[i + 1][b.saturating_sub(u * k)];
                if rest != INF && cost + rest < v {
                    v = cost + rest;
                }
            }
            best[i][b] = v;
        }
    }
    if best[0][needed] == INF {
        return None;
    }
    let mut mult = vec![0; m];
    let mut b = needed;
    for i in 0..m {
        let k = pool[i].degree();
        for u in 0..=max_mult {
            let cost = if u == 0 { 0 } else { base_rank(k, u).ok()? };
            let rest = best[i + 1][b.saturating_sub(u * k)];
            if rest != INF && cost + rest == best[i][b] {
                mult[i] = u;
                b = b.saturating_sub(u * k);
                break;
            }
        }
    }
    Some(collect_plan(pool, &mult))
}

fn collect_plan(pool: &[Place], mult: &[usize]) -> Vec<(Place, usize)> {
    let mut out: Vec<(Place, usize)> = pool
        .iter()
        .zip(mult)
        .filter(|(_, &u)| u > 0)
        .map(|(p, &u)| (p.clone(), u))
        .collect();
    out.sort();
    out
}

/// A degree-`n − 1` divisor supported off `Q` and the used places.
///
/// Tries a multiple of a single place first, then two-place combinations
/// `a R_1 + b R_2` with `|a|, |b| ≤ 2n`, scanning places of degree at most 5 in
/// place order and coefficients by increasing absolute value.
pub fn find_divisor(field: &FieldSpec, n: usize, q_place: &Polynomial, used: &[Place]) -> Option<Divisor> {
    let target = n as i64 - 1;
    let q = Place::Finite(q_place.clone());
    let free: Vec<Place> = (1..=DIVISOR_SEARCH_DEGREE)
        .flat_map(|k| places_of_degree(field, k))
        .filter(|p| *p != q && !used.contains(p))
        .collect();
    for r in &free {
        let d = r.degree() as i64;
        if target % d == 0 {
            return Some(Divisor::single(r.clone(), target / d));
        }
    }
    let bound = 2 * n as i64;
    let coeffs: Vec<i64> = (1..=bound).flat_map(|a| [a, -a]).collect();
    for (i, r1) in free.iter().enumerate() {
        for r2 in &free[i + 1..] {
            let (d1, d2) = (r1.degree() as i64, r2.degree() as i64);
            for &a in &coeffs {
                let rest = target - a * d1;
                if rest % d2 != 0 {
                    continue;
                }
                let b = rest / d2;
                if b != 0 && b.abs() <= bound {
                    return Some(Divisor::from_terms([(r1.clone(), a), (r2.clone(), b)]));
                }
            }
        }
    }
    None
}

/// Divisor for a plan: `(n − 1) P_∞` when infinity is unused, otherwise a search.
fn divisor_for(field: &FieldSpec, n: usize, q_place: &Polynomial, places: &[(Place, usize)]) -> Option<Divisor> {
    if places.iter().all(|(p, _)| !p.is_infinite()) {
        return Some(Divisor::single(Place::Infinite, n as i64 - 1));
    }
    let used: Vec<Place> = places.iter().map(|(p, _)| p.clone()).collect();
    find_divisor(field, n, q_place, &used)
}

fn default_plan(field: &FieldSpec, n: usize, q_place: &Polynomial, opts: &PlanOptions) -> Result<EvaluationPlan> {
    let needed = 2 * n - 1;
    let mut pool = place_pool(field, opts.max_degree, q_place, false);
    if pool_capacity(&pool, opts.max_multiplicity) < needed {
        pool = place_pool(field, opts.max_degree, q_place, true);
        let available = pool_capacity(&pool, opts.max_multiplicity);
        if available < needed {
            return Err(Error::InsufficientPlaces { needed, available });
        }
    }
    let places = greedy(&pool, needed, opts.max_multiplicity);
    let divisor = divisor_for(field, n, q_place, &places)
        .ok_or_else(|| Error::ConditionsNotMet("no auxiliary divisor found".into()))?;
    Ok(EvaluationPlan {
        field: field.clone(),
        n,
        q_place: q_place.clone(),
        divisor,
        places,
    })
}

pub fn select_plan(field: &FieldSpec, n: usize, max_degree: usize, strategy: Strategy) -> Result<EvaluationPlan> {
    select_plan_with(field, n, &PlanOptions::new(max_degree, strategy))
}

pub fn select_plan_with(field: &FieldSpec, n: usize, opts: &PlanOptions) -> Result<EvaluationPlan> {
    if n < 2 {
        return Err(Error::InvalidModulus("extension degree must be at least 2".into()));
    }
    if opts.max_multiplicity == 0 || opts.max_multiplicity > 3 {
        return Err(Error::UnsupportedBase {
            k: 1,
            u: opts.max_multiplicity,
        });
    }
    let q_place = first_irreducible(field, n)?;
    let default = default_plan(field, n, &q_place, opts);
    if opts.strategy == Strategy::Default {
        return default;
    }
    let needed = 2 * n - 1;
    let pool = place_pool(field, opts.max_degree, &q_place, true);
    let mut candidates: Vec<EvaluationPlan> = default.iter().cloned().collect();
    let mut place_sets = vec![greedy(&pool, needed, opts.max_multiplicity)];
    place_sets.extend(knapsack(&pool, needed, opts.max_multiplicity));
    for places in place_sets {
        let budget: usize = places.iter().map(|(p, u)| p.degree() * u).sum();
        if budget < needed {
            continue;
        }
        if let Some(divisor) = divisor_for(field, n, &q_place, &places) {
            candidates.push(EvaluationPlan {
                field: field.clone(),
                n,
                q_place: q_place.clone(),
                divisor,
                places,
            });
        }
    }
    let mut best: Option<(usize, EvaluationPlan)> = None;
    for c in candidates {
        let r = predicted_rank(&c)?;
        if best.as_ref().is_none_or(|(br, _)| r < *br) {
            best = Some((r, c));
        }
    }
    match best {
        Some((_, plan)) => Ok(plan),
        None => default,
    }
}

/// One checked hypothesis with a human-readable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionEntry {
    pub name: &'static str,
    pub holds: bool,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn get(&self, name: &str) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.entries.iter().filter(|e| !e.holds).map(|e| e.name).collect()
    }
}

/// Evaluation matrix of `L(2D)` at the plan's places.
pub(crate) fn ev_2d(plan: &EvaluationPlan) -> Result<Matrix> {
    let basis = riemann_roch_basis(&plan.field, &plan.divisor.scale(2));
    evaluation_matrix(&plan.field, &basis.elements, &plan.places)
}

/// Columns: values at `Q` of the basis of `L(D)`.
pub(crate) fn ev_q(plan: &EvaluationPlan, d: &Divisor) -> Result<Matrix> {
    let basis = riemann_roch_basis(&plan.field, d);
    let cols = basis
        .elements
        .iter()
        .map(|f| evaluate_at_q(f, &plan.q_place))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(&plan.field, plan.n, &cols))
}

pub fn check_conditions(plan: &EvaluationPlan) -> ConditionReport {
    let n = plan.n;
    let mut entries = Vec::new();
    let mut push = |name, holds, witness: String| entries.push(ConditionEntry { name, holds, witness });

    let q_ok = plan.q_place.degree() == Some(n) && is_irreducible(&plan.q_place).unwrap_or(false);
    push(
        "degree_n_place",
        q_ok,
        format!("Q = {} irreducible of degree {n}: {q_ok}", plan.q_place),
    );
    push(
        "nonspecial_divisor",
        true,
        "genus 0: every divisor of degree -1 has dimension 0".into(),
    );
    let budget = plan.budget();
    push(
        "budget",
        budget >= 2 * n - 1,
        format!("sum u_i deg P_i = {budget} vs 2n-1 = {}", 2 * n - 1),
    );
    let q = Place::Finite(plan.q_place.clone());
    let mut all: Vec<&Place> = plan.places.iter().map(|(p, _)| p).collect();
    all.push(&q);
    let clash: Vec<String> = plan
        .divisor
        .support()
        .filter(|p| all.contains(p))
        .map(|p| format!("{p:?}"))
        .collect();
    push(
        "support_disjoint",
        clash.is_empty(),
        if clash.is_empty() {
            "supp D avoids Q and the evaluation places".into()
        } else {
            format!("supp D meets {}", clash.join(", "))
        },
    );
    let mut sorted: Vec<&Place> = plan.places.iter().map(|(p, _)| p).collect();
    sorted.sort();
    let distinct = sorted.windows(2).all(|w| w[0] != w[1]) && !sorted.contains(&&q);
    let mult_ok = plan.places.iter().all(|(_, u)| *u >= 1);
    push(
        "places_distinct",
        distinct && mult_ok,
        format!("evaluation places distinct, different from Q, multiplicities >= 1: {}", distinct && mult_ok),
    );
    let deg = plan.divisor.degree();
    push("divisor_degree", deg == n as i64 - 1, format!("deg D = {deg} vs n-1 = {}", n - 1));
    let unsupported: Vec<String> = plan
        .places
        .iter()
        .filter(|(p, u)| base_rank(p.degree(), *u).is_err())
        .map(|(p, u)| format!("({}, {u})", p.degree()))
        .collect();
    push(
        "base_table",
        unsupported.is_empty(),
        if unsupported.is_empty() {
            "every (deg P, u) has a base algorithm".into()
        } else {
            format!("unsupported (deg P, u): {}", unsupported.join(", "))
        },
    );
    match ev_q(plan, &plan.divisor) {
        Ok(m) => {
            let r = m.rank();
            push(
                "ev_q_bijective",
                r == n && m.cols() == n,
                format!("Ev_Q is {}x{} of rank {r}", m.rows(), m.cols()),
            );
        }
        Err(e) => push("ev_q_bijective", false, format!("Ev_Q undefined: {e}")),
    }
    match ev_2d(plan) {
        Ok(m) => {
            let r = m.rank();
            push(
                "ev_p_injective",
                r == 2 * n - 1 && m.cols() == 2 * n - 1,
                format!("Ev_P on L(2D) is {}x{} of rank {r}", m.rows(), m.cols()),
            );
        }
        Err(e) => push("ev_p_injective", false, format!("Ev_P undefined: {e}")),
    }
    ConditionReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn fin(field: &FieldSpec, c: &[i64]) -> Place {
        Place::Finite(Polynomial::from_ints(field, c))
    }

    #[test]
    fn default_plan_for_f8() {
        let f2 = make_field(2, 1, None).unwrap();
        let plan = select_plan(&f2, 3, 4, Strategy::Default).unwrap();
        assert_eq!(plan.divisor, Divisor::single(Place::Infinite, 2));
        assert_eq!(
            plan.places,
            vec![(fin(&f2, &[0, 1]), 2), (fin(&f2, &[1, 1]), 1), (fin(&f2, &[1, 1, 1]), 1)]
        );
        assert_eq!(plan.budget(), 5);
        assert_eq!(predicted_rank(&plan).unwrap(), 7);
        let report = check_conditions(&plan);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn default_plan_for_f4() {
        let f2 = make_field(2, 1, None).unwrap();
        let plan = select_plan(&f2, 2, 4, Strategy::Default).unwrap();
        assert_eq!(plan.divisor, Divisor::single(Place::Infinite, 1));
        assert_eq!(plan.places, vec![(fin(&f2, &[0, 1]), 2), (fin(&f2, &[1, 1]), 1)]);
        assert_eq!(predicted_rank(&plan).unwrap(), 4);
    }

    #[test]
    fn too_many_places_needed() {
        let f2 = make_field(2, 1, None).unwrap();
        assert_eq!(
            select_plan(&f2, 18, 4, Strategy::Default).unwrap_err(),
            Error::InsufficientPlaces { needed: 35, available: 34 }
        );
    }

    #[test]
    fn search_frees_the_rational_places() {
        let f2 = make_field(2, 1, None).unwrap();
        let plan = select_plan(&f2, 2, 4, Strategy::Search).unwrap();
        assert_eq!(predicted_rank(&plan).unwrap(), 3);
        assert_eq!(
            plan.divisor,
            Divisor::from_terms([(fin(&f2, &[1, 1, 0, 1]), -1), (fin(&f2, &[1, 1, 0, 0, 1]), 1)])
        );
        assert!(check_conditions(&plan).all_pass());
    }

    #[test]
    fn failing_conditions_are_reported() {
        let f2 = make_field(2, 1, None).unwrap();
        let mut plan = select_plan(&f2, 3, 4, Strategy::Default).unwrap();
        plan.places = vec![(fin(&f2, &[0, 1]), 1), (fin(&f2, &[1, 1]), 1)];
        let r = check_conditions(&plan);
        assert!(!r.get("budget").unwrap().holds);

        let mut plan = select_plan(&f2, 3, 4, Strategy::Default).unwrap();
        plan.divisor = Divisor::single(fin(&f2, &[0, 1]), 2);
        let r = check_conditions(&plan);
        assert!(!r.get("support_disjoint").unwrap().holds);
    }

    #[test]
    fn budget_slack_is_small() {
        for (q, dmax, nmax) in [(2u64, 4, 17), (3, 2, 10), (4, 2, 12), (5, 1, 3)] {
            let f = FieldSpec::of_order(q).unwrap();
            for n in 2..=nmax {
                let plan = select_plan(&f, n, dmax, Strategy::Default).unwrap();
                let b = plan.budget();
                assert!(b >= 2 * n - 1 && b <= 2 * n + 2, "q={q} n={n} budget {b}");
            }
        }
    }
}
