//! Step selection, pointwise bounds on `μ^sym_q(n)` and uniform slopes.

use num::{BigInt, BigRational, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::data::{condition_a, step_capacity, step_data, Mode, StepData, TowerId, TowerStep};
use super::ineq::{Inequality, Relation};
use super::known::KnownValues;
use super::surd::{big, rat_str, ratio, QuadraticSurd};
use crate::error::{Error, Result};

/// Steps beyond this level are never needed for `n` in any practical range.
const MAX_LEVEL: u32 = 64;

pub fn tower_for(q: u64) -> Result<TowerId> {
    match q {
        2 => Ok(TowerId::T2),
        3 => Ok(TowerId::E),
        _ => Err(Error::UnsupportedTower(format!("no tower bound for q = {q}"))),
    }
}

/// Smallest `n` handled by the towers; smaller `n` need a known-values table.
pub fn threshold(q: u64) -> Result<u64> {
    match q {
        2 => Ok(19),
        3 => Ok(13),
        _ => Err(Error::UnsupportedTower(format!("no tower bound for q = {q}"))),
    }
}

fn s_int(x: &BigInt) -> QuadraticSurd {
    QuadraticSurd::integer(x.clone())
}

/// Checks of the genus condition `(a)` and the counting condition `(c)` on one step.
fn selection_checks(data: &StepData, n: u64, b_sum: &BigInt, tag: &str) -> (Inequality, Inequality) {
    let g = data.genus_used();
    let (lhs, rhs, _) = condition_a(&data.step, n, &g);
    let a = Inequality::new(format!("{tag}: (a) 2g+1 <= b^((n-1)/2)(sqrt(b)-1) on {}", data.step.label()), lhs, Relation::Le, rhs);
    let sum = data.certified_place_sum().expect("bounded towers carry place sums");
    let c = Inequality::new(
        format!("{tag}: (c) sum k(B_k+b_k) >= 2n+2g-1 on {}", data.step.label()),
        s_int(&(sum + b_sum)),
        Relation::Ge,
        s_int(&(BigInt::from(2 * n) + &g * 2 - 1)),
    );
    (a, c)
}

/// The first step, in `(i, s)` order, meeting conditions `(a)` and `(c)` with `b = 0`.
pub fn select_step(q: u64, n: u64) -> Result<TowerStep> {
    let min = threshold(q)?;
    if n < min {
        return Err(Error::OutOfRange { n, min });
    }
    let mut step = TowerStep::new(tower_for(q)?, 0, 0)?;
    while step.i <= MAX_LEVEL {
        let (a, c) = selection_checks(&step_data(&step), n, &BigInt::zero(), "select");
        if a.holds && c.holds {
            return Ok(step);
        }
        step = step.next();
    }
    Err(Error::UnsupportedTower(format!("no step up to level {MAX_LEVEL} fits n = {n}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// The selected step with no degree-two evaluations.
    NextStep,
    /// An earlier step, topped up with derivative evaluations.
    Derivatives,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::NextStep => "next_step",
            Branch::Derivatives => "derivatives",
        }
    }
}

/// Choice of `b_k`, the number of degree-`k` places used with multiplicity 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BAssignment {
    /// `2(n − capacity)`, floored at 0.
    pub target: BigInt,
    /// `Σ k b_k` actually charged.
    pub sum: BigInt,
    /// `(b_1, b_2, b_4)` when the step's place counts are stated outright.
    pub counts: Option<[u64; 3]>,
    /// The target was rounded up to a value reachable with the available place degrees.
    pub rounded: bool,
}

/// Greedy `b_k`, largest degree first, against stated counts `(B_1, B_2, B_4)`.
fn assign_exact(counts: [u64; 3], target: u64) -> Option<[u64; 3]> {
    let degs = [1u64, 2, 4];
    let mut b = [0u64; 3];
    let mut rem = target;
    for j in (0..3).rev() {
        let take = counts[j].min(rem / degs[j]);
        b[j] += take;
        rem -= take * degs[j];
    }
    if rem > 0 {
        let j = (0..3).find(|&j| b[j] < counts[j] && degs[j] >= rem)?;
        b[j] += 1;
    }
    Some(b)
}

/// Assignment reaching `target`, or `None` if the step cannot provide it.
///
/// Without stated counts the target is rounded up to a multiple of the largest
/// place degree: any total of that form up to `Σ k B_k` is reachable whatever the
/// split of `Σ k B_k` into degrees.
fn assign_b(data: &StepData, target: &BigInt) -> Option<BAssignment> {
    let total = data.certified_place_sum()?;
    if let Some(counts) = data.exact_counts {
        let t: u64 = target.try_into().ok()?;
        let b = assign_exact(counts, t)?;
        let sum = BigInt::from(b[0] + 2 * b[1] + 4 * b[2]);
        return Some(BAssignment {
            target: target.clone(),
            rounded: sum != *target,
            sum,
            counts: Some(b),
        });
    }
    let k = BigInt::from(if data.step.tower == TowerId::E { 2 } else { 4 });
    let sum = ((target + &k - 1) / &k) * &k;
    (sum <= total).then(|| BAssignment {
        target: target.clone(),
        rounded: sum != *target,
        sum,
        counts: None,
    })
}

/// `(9/2)(n + g + 1) + (9/4)Σ k b_k` for `q = 2`, `3(n + g) + (3/2)Σ k b_k` for `q = 3`.
pub fn bound_formula(q: u64, n: u64, g: &BigInt, b_sum: &BigInt) -> BigRational {
    let n = BigInt::from(n);
    match q {
        2 => ratio(9, 2) * big(n + g + 1) + ratio(9, 4) * big(b_sum.clone()),
        _ => big((n + g) * 3) + ratio(3, 2) * big(b_sum.clone()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchEval {
    pub branch: Branch,
    pub step: TowerStep,
    pub genus: BigInt,
    pub b: Option<BAssignment>,
    /// `None` when a hypothesis of the branch fails.
    pub value: Option<BigRational>,
}

/// Which checks an inequality belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Selection,
    /// Shows the previous step is not already suitable; informational.
    Minimality,
    Branch(Branch),
    /// Recorded but not relied upon (paper mode).
    Informational,
    Result,
}

impl Scope {
    pub fn name(self) -> &'static str {
        match self {
            Scope::Selection => "selection",
            Scope::Minimality => "minimality",
            Scope::Branch(b) => b.name(),
            Scope::Informational => "informational",
            Scope::Result => "result",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub scope: Scope,
    /// Index into [`BoundReport::branches`] for branch-specific checks.
    pub candidate: Option<usize>,
    pub check: Inequality,
}

impl TraceEntry {
    fn new(scope: Scope, check: Inequality) -> TraceEntry {
        TraceEntry {
            scope,
            candidate: None,
            check,
        }
    }

    fn for_candidate(idx: usize, branch: Branch, check: Inequality) -> TraceEntry {
        TraceEntry {
            scope: Scope::Branch(branch),
            candidate: Some(idx),
            check,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundSource {
    Table { source: String },
    Tower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub q: u64,
    pub n: u64,
    pub mode: Mode,
    pub source: BoundSource,
    pub selected_step: Option<TowerStep>,
    /// The kind of branch giving the bound.
    pub branch: Option<Branch>,
    /// Index of the evaluation giving the bound.
    pub chosen: Option<usize>,
    pub branches: Vec<BranchEval>,
    pub bound: BigRational,
    pub bound_floor: BigInt,
    pub trace: Vec<TraceEntry>,
}

impl BoundReport {
    pub fn chosen(&self) -> Option<&BranchEval> {
        self.branches.get(self.chosen?)
    }

    /// Every recorded comparison recomputes to its recorded outcome, and every
    /// check the chosen bound relies on holds.
    pub fn consistent(&self) -> bool {
        self.trace.iter().all(|t| {
            let relied = match t.scope {
                Scope::Selection | Scope::Result => true,
                Scope::Branch(_) => t.candidate.is_some() && t.candidate == self.chosen,
                Scope::Minimality | Scope::Informational => false,
            };
            t.check.reverify() && (!relied || t.check.holds)
        })
    }

    pub fn to_json(&self) -> Value {
        let step_json = |s: &TowerStep| json!({"tower": s.tower.to_string(), "i": s.i, "s": s.s, "label": s.label()});
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|b| {
                json!({
                    "branch": b.branch.name(),
                    "step": step_json(&b.step),
                    "genus": b.genus.to_string(),
                    "b": b.b.as_ref().map(|a| json!({
                        "target": a.target.to_string(),
                        "sum": a.sum.to_string(),
                        "counts": a.counts,
                        "rounded": a.rounded,
                    })),
                    "value": b.value.as_ref().map(rat_str),
                })
            })
            .collect();
        let trace: Vec<Value> = self
            .trace
            .iter()
            .map(|t| {
                let mut v = t.check.to_json();
                v["scope"] = json!(t.scope.name());
                if let Some(c) = t.candidate {
                    v["candidate"] = json!(c);
                }
                v
            })
            .collect();
        json!({
            "q": self.q,
            "n": self.n,
            "mode": self.mode.to_string(),
            "source": match &self.source {
                BoundSource::Table { source } => json!({"table": source}),
                BoundSource::Tower => json!("tower"),
            },
            "selected_step": self.selected_step.as_ref().map(step_json),
            "branch": self.branch.map(Branch::name),
            "chosen": self.chosen,
            "branches": branches,
            "bound": rat_str(&self.bound),
            "bound_floor": self.bound_floor.to_string(),
            "trace": trace,
        })
    }
}

fn floor_report(n: u64, bound: &BigRational) -> TraceEntry {
    TraceEntry::new(
        Scope::Result,
        Inequality::new(
            "bound_floor >= 2n-1",
            QuadraticSurd::integer(bound.floor().to_integer()),
            Relation::Ge,
            QuadraticSurd::integer(2 * n as i64 - 1),
        ),
    )
}

/// Step `lower` with `Σ k b_k` covering `2(n − capacity)`.
fn derivative_branch(q: u64, n: u64, mode: Mode, lower: TowerStep, idx: usize, trace: &mut Vec<TraceEntry>) -> Result<BranchEval> {
    let data = step_data(&lower);
    let cap = step_capacity(&lower, mode)?;
    let diff: BigInt = BigInt::from(n) - &cap;
    let target = std::cmp::max(diff * 2u32, BigInt::zero());
    let g = data.genus_used();
    let entry = |check| TraceEntry::for_candidate(idx, Branch::Derivatives, check);
    let total = data.certified_place_sum().expect("bounded towers carry place sums");
    let assignment = assign_b(&data, &target);
    let charged = assignment.as_ref().map(|b| b.sum.clone()).unwrap_or_else(|| target.clone());
    let fits = Inequality::new(
        format!("derivatives on {}: sum k b_k <= sum k B_k", lower.label()),
        s_int(&charged),
        Relation::Le,
        s_int(&total),
    );
    let mut ok = fits.holds && assignment.is_some();
    trace.push(entry(fits));
    if ok {
        let (a, with_b) = selection_checks(&data, n, &charged, "derivatives");
        ok &= a.holds;
        trace.push(entry(a));
        trace.push(entry(Inequality::new(
            format!("derivatives on {}: sum k b_k >= 2(n - capacity), capacity = {cap}", lower.label()),
            s_int(&charged),
            Relation::Ge,
            s_int(&target),
        )));
        match mode {
            Mode::Certified => {
                ok &= with_b.holds;
                trace.push(entry(with_b));
            }
            Mode::Paper => trace.push(TraceEntry::new(Scope::Informational, with_b)),
        }
    }
    Ok(BranchEval {
        branch: Branch::Derivatives,
        step: lower,
        value: ok.then(|| bound_formula(q, n, &g, &charged)),
        genus: g,
        b: assignment,
    })
}

pub fn pointwise_bound(q: u64, n: u64, mode: Mode, known: Option<&KnownValues>) -> Result<BoundReport> {
    if let Some(kv) = known.and_then(|t| t.get(&n)) {
        let bound = big(kv.value);
        return Ok(BoundReport {
            q,
            n,
            mode,
            source: BoundSource::Table {
                source: kv.source.clone(),
            },
            selected_step: None,
            branch: None,
            chosen: None,
            branches: Vec::new(),
            bound_floor: bound.floor().to_integer(),
            trace: vec![floor_report(n, &bound)],
            bound,
        });
    }
    if n < threshold(q)? {
        return Err(Error::NoDataForN(n));
    }
    let step = select_step(q, n)?;
    let data = step_data(&step);
    let mut trace = Vec::new();
    let zero = BigInt::zero();

    let (a, c) = selection_checks(&data, n, &zero, "selected");
    trace.push(TraceEntry::new(Scope::Selection, a));
    trace.push(TraceEntry::new(Scope::Selection, c));

    let g = data.genus_used();
    let mut branches = vec![BranchEval {
        branch: Branch::NextStep,
        step,
        value: Some(bound_formula(q, n, &g, &zero)),
        genus: g,
        b: None,
    }];

    if let Some(prev) = step.prev() {
        let (pa, pc) = selection_checks(&step_data(&prev), n, &zero, "previous");
        trace.push(TraceEntry::new(Scope::Minimality, pa));
        trace.push(TraceEntry::new(Scope::Minimality, pc));
    }

    // Every earlier step can absorb the shortfall with derivative evaluations.
    let mut below = step.prev();
    while let Some(lower) = below {
        let idx = branches.len();
        branches.push(derivative_branch(q, n, mode, lower, idx, &mut trace)?);
        below = lower.prev();
    }

    let (chosen, bound) = branches
        .iter()
        .enumerate()
        .filter_map(|(i, b)| b.value.as_ref().map(|v| (i, v.clone())))
        .min_by(|x, y| x.1.cmp(&y.1))
        .expect("the next-step branch always has a value");
    trace.push(floor_report(n, &bound));
    Ok(BoundReport {
        q,
        n,
        mode,
        source: BoundSource::Tower,
        selected_step: Some(step),
        branch: Some(branches[chosen].branch),
        chosen: Some(chosen),
        branches,
        bound_floor: bound.floor().to_integer(),
        bound,
        trace,
    })
}

/// Bounds for every `n` in `from..=to`, in order.
pub fn bound_table(q: u64, from: u64, to: u64, mode: Mode, known: Option<&KnownValues>) -> Result<Vec<BoundReport>> {
    (from..=to)
        .into_par_iter()
        .map(|n| pointwise_bound(q, n, mode, known))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeReport {
    pub q: u64,
    pub mode: Mode,
    pub from: u64,
    pub to: u64,
    pub intercept: BigRational,
    /// `sup_n (bound_floor(n) − intercept)/n`.
    pub slope: BigRational,
    pub argmax: u64,
    /// The stated uniform constant this slope is compared against.
    pub target: BigRational,
    /// `slope ≤ target`.
    pub matched: bool,
}

impl SlopeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "mode": self.mode.to_string(),
            "from": self.from,
            "to": self.to,
            "intercept": rat_str(&self.intercept),
            "slope": rat_str(&self.slope),
            "slope_approx": format!("{:.6}", num::ToPrimitive::to_f64(&self.slope).unwrap_or(f64::NAN)),
            "argmax": self.argmax,
            "target": rat_str(&self.target),
            "matched": self.matched,
        })
    }
}

/// Stated uniform constants: `1035/68` (with intercept `9/2`) and `1933/250`.
pub fn stated_slope(q: u64) -> Result<(BigRational, BigRational)> {
    match q {
        2 => Ok((ratio(1035, 68), ratio(9, 2))),
        3 => Ok((ratio(1933, 250), BigRational::zero())),
        _ => Err(Error::UnsupportedTower(format!("no tower bound for q = {q}"))),
    }
}

pub fn uniform_slope(q: u64, from: u64, to: u64, mode: Mode) -> Result<SlopeReport> {
    let (target, intercept) = stated_slope(q)?;
    if from > to {
        return Err(Error::OutOfRange { n: from, min: to });
    }
    let reports = bound_table(q, from, to, mode, None)?;
    let mut best: Option<(BigRational, u64)> = None;
    for r in &reports {
        let v = (big(r.bound_floor.clone()) - &intercept) / big(r.n);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, r.n));
        }
    }
    let (slope, argmax) = best.expect("non-empty range");
    Ok(SlopeReport {
        q,
        mode,
        from,
        to,
        matched: !slope.is_positive() || slope <= target,
        intercept,
        slope,
        argmax,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::known::parse_known_values;

    fn t2(i: u32, s: u32) -> TowerStep {
        TowerStep::new(TowerId::T2, i, s).unwrap()
    }

    #[test]
    fn selects_the_stated_steps() {
        assert_eq!(select_step(2, 19).unwrap(), t2(1, 0));
        assert_eq!(select_step(2, 20).unwrap(), t2(1, 1));
        assert_eq!(select_step(3, 13).unwrap(), TowerStep::new(TowerId::E, 3, 0).unwrap());
        assert_eq!(select_step(2, 18).unwrap_err(), Error::OutOfRange { n: 18, min: 19 });
    }

    #[test]
    fn stated_bounds() {
        let r = pointwise_bound(2, 19, Mode::Certified, None).unwrap();
        assert_eq!(r.branch, Some(Branch::NextStep));
        assert_eq!(r.bound, ratio(261, 2));
        assert_eq!(r.bound_floor, BigInt::from(130));
        assert!(r.consistent());

        // G_3 with b = 0 gives 3(13 + 64). G_2 (capacity 11) with Σ k b_k = 4 gives
        // 3(13 + 16) + 6, and G_1 (g = 4, capacity 5) with Σ k b_k = 16 gives 3·17 + 24.
        let r = pointwise_bound(3, 13, Mode::Certified, None).unwrap();
        let value = |label: &str| r.branches.iter().find(|b| b.step.label() == label).unwrap().value.clone();
        assert_eq!(value("G_3"), Some(BigRational::from_integer(231.into())));
        assert_eq!(value("G_2"), Some(BigRational::from_integer(93.into())));
        assert_eq!(value("G_1"), Some(BigRational::from_integer(75.into())));
        assert_eq!(value("G_0"), None);
        assert_eq!(r.chosen().unwrap().step.label(), "G_1");
        assert_eq!(r.bound_floor, BigInt::from(75));
        assert!(r.consistent());
        assert!(r.consistent());
    }

    #[test]
    fn derivative_branch_uses_stated_counts() {
        // H_1 has certified capacity 19; one more evaluation needs Σ k b_k = 2.
        let r = pointwise_bound(2, 20, Mode::Certified, None).unwrap();
        let d = r.branches.iter().find(|b| b.branch == Branch::Derivatives).unwrap();
        let b = d.b.as_ref().unwrap();
        assert_eq!((b.target.clone(), b.sum.clone(), b.counts), (BigInt::from(2), BigInt::from(2), Some([0, 1, 0])));
        assert_eq!(d.value, Some(ratio(279, 2)));
        assert_eq!(r.branch, Some(Branch::Derivatives));
        assert!(r.consistent());
    }

    #[test]
    fn table_takes_precedence() {
        let t = parse_known_values(r#"{"2": {"value": 3, "source": "Winograd"}, "19": {"value": 100, "source": "x"}}"#).unwrap();
        assert_eq!(pointwise_bound(2, 2, Mode::Certified, Some(&t)).unwrap().bound_floor, BigInt::from(3));
        assert_eq!(pointwise_bound(2, 19, Mode::Paper, Some(&t)).unwrap().bound_floor, BigInt::from(100));
        assert_eq!(pointwise_bound(2, 5, Mode::Certified, None).unwrap_err(), Error::NoDataForN(5));
    }

    #[test]
    fn exact_assignment() {
        assert_eq!(assign_exact([4, 2, 12], 10), Some([0, 1, 2]));
        assert_eq!(assign_exact([4, 2, 12], 3), Some([1, 1, 0]));
        assert_eq!(assign_exact([0, 0, 2], 3), Some([0, 0, 1]));
        assert_eq!(assign_exact([1, 0, 0], 3), None);
    }
}
