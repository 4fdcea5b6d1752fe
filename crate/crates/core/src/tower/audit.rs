//! Exact re-derivation of the inequality chains behind the uniform bounds.
//!
//! Every entry is a single comparison evaluated in exact arithmetic together
//! with a verdict. No stated constant is taken as ground truth: the uniform
//! constants appear only as right-hand sides to be checked.

use std::collections::BTreeMap;

use num::BigInt;
use serde_json::{json, Value};

use super::bound::{select_step, stated_slope, threshold};
use super::data::{
    capacity_slack, genus_bounds, genus_exact_t0, genus_sandwich_lower, genus_sandwich_upper, genus_tight_upper,
    step_capacity, step_data, Mode, TowerId, TowerStep,
};
use super::ineq::{Inequality, Relation};
use super::surd::{pow_rat, rat_str, ratio, QuadraticSurd};
use crate::error::{Error, Result};

/// Extension degrees scanned by the step-criterion checks, past the threshold.
const CRITERIA_SPAN: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Verified,
    Refuted,
    /// A stated definition and a stated conclusion about it disagree.
    Mismatched,
    /// Deciding it needs data that is not stated (exact place counts or genera).
    DependsOnUnstatedData,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Mismatched => "mismatched",
            Verdict::DependsOnUnstatedData => "depends_on_unstated_data",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub chain: &'static str,
    pub i: Option<u32>,
    pub s: Option<u32>,
    pub n: Option<u64>,
    pub check: Inequality,
    pub verdict: Verdict,
    pub note: String,
}

impl AuditEntry {
    /// The verdict agrees with a fresh evaluation of the comparison.
    pub fn consistent(&self) -> bool {
        self.check.reverify()
            && match self.verdict {
                Verdict::Verified => self.check.holds,
                Verdict::Refuted | Verdict::Mismatched => !self.check.holds,
                Verdict::DependsOnUnstatedData => true,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub q: u64,
    pub i_max: u32,
    pub entries: Vec<AuditEntry>,
    /// Stated constants, as exact rationals.
    pub targets: Vec<(&'static str, String)>,
}

impl AuditReport {
    pub fn consistent(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(AuditEntry::consistent)
    }

    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.verdict.name()).or_insert(0) += 1;
        }
        m
    }

    pub fn with_verdict(&self, v: Verdict) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(move |e| e.verdict == v)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let mut v = e.check.to_json();
                v["chain"] = json!(e.chain);
                v["i"] = json!(e.i);
                v["s"] = json!(e.s);
                v["n"] = json!(e.n);
                v["verdict"] = json!(e.verdict.name());
                v["lhs_approx"] = json!(format!("{:.6}", e.check.lhs.to_f64()));
                v["rhs_approx"] = json!(format!("{:.6}", e.check.rhs.to_f64()));
                if !e.note.is_empty() {
                    v["note"] = json!(e.note);
                }
                v
            })
            .collect();
        let targets: serde_json::Map<String, Value> =
            self.targets.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({
            "q": self.q,
            "i_max": self.i_max,
            "consistent": self.consistent(),
            "counts": self.counts(),
            "targets": targets,
            "entries": entries,
        })
    }
}

#[derive(Default)]
struct Log {
    entries: Vec<AuditEntry>,
}

#[derive(Clone, Copy, Default)]
struct At {
    i: Option<u32>,
    s: Option<u32>,
    n: Option<u64>,
}

fn at_i(i: u32) -> At {
    At { i: Some(i), ..At::default() }
}

fn at_is(i: u32, s: u32) -> At {
    At {
        i: Some(i),
        s: Some(s),
        n: None,
    }
}

fn at_n(n: u64) -> At {
    At { n: Some(n), ..At::default() }
}

impl Log {
    /// Records `lhs rel rhs`; a failure gets `on_fail`.
    #[allow(clippy::too_many_arguments)]
    fn check(
        &mut self,
        chain: &'static str,
        at: At,
        label: &str,
        lhs: QuadraticSurd,
        rel: Relation,
        rhs: QuadraticSurd,
        on_fail: Verdict,
        note: &str,
    ) {
        let check = Inequality::new(label, lhs, rel, rhs);
        let verdict = if check.holds { Verdict::Verified } else { on_fail };
        self.push(chain, at, check, verdict, note);
    }

    fn unstated(&mut self, chain: &'static str, at: At, label: &str, lhs: QuadraticSurd, rel: Relation, rhs: QuadraticSurd, note: &str) {
        let check = Inequality::new(label, lhs, rel, rhs);
        self.push(chain, at, check, Verdict::DependsOnUnstatedData, note);
    }

    fn push(&mut self, chain: &'static str, at: At, check: Inequality, verdict: Verdict, note: &str) {
        self.entries.push(AuditEntry {
            chain,
            i: at.i,
            s: at.s,
            n: at.n,
            check,
            verdict,
            note: note.to_string(),
        });
    }
}

fn s(x: i64) -> QuadraticSurd {
    QuadraticSurd::from(x)
}

fn int(x: &BigInt) -> QuadraticSurd {
    QuadraticSurd::integer(x.clone())
}

fn r(n: i64, d: i64) -> QuadraticSurd {
    QuadraticSurd::rational(ratio(n, d))
}

/// `b^e` for integer `e`.
fn pw(b: u64, e: i64) -> QuadraticSurd {
    QuadraticSurd::rational(pow_rat(b, e))
}

/// `q^{e/2}`.
fn hq(q: u64, e: i64) -> QuadraticSurd {
    QuadraticSurd::half_power(q, e)
}

fn add(xs: &[QuadraticSurd]) -> QuadraticSurd {
    xs.iter().fold(s(0), |acc, x| &acc + x)
}

fn mul(a: &QuadraticSurd, b: &QuadraticSurd) -> QuadraticSurd {
    a * b
}

fn neg(a: &QuadraticSurd) -> QuadraticSurd {
    -a.clone()
}

fn floor_half(x: &QuadraticSurd) -> QuadraticSurd {
    int(&x.scale(&ratio(1, 2)).floor())
}

pub fn audit(q: u64, i_max: u32) -> Result<AuditReport> {
    if i_max < 2 {
        return Err(Error::OutOfRange {
            n: i_max as u64,
            min: 2,
        });
    }
    let mut log = Log::default();
    let (slope, _) = stated_slope(q)?;
    let targets = match q {
        2 => {
            audit_q2(&mut log, i_max);
            vec![("slope", rat_str(&slope)), ("intercept", "9/2".into()), ("ratio_sup", "81/34".into())]
        }
        _ => {
            audit_q3(&mut log, i_max);
            vec![("slope", rat_str(&slope)), ("intercept", "0".into()), ("printed_approximation", "38657/5000".into())]
        }
    };
    Ok(AuditReport {
        q,
        i_max,
        entries: log.entries,
        targets,
    })
}

fn sandwich(log: &mut Log, tq: u64, i_max: u32) {
    for i in 0..=i_max {
        let g = int(&genus_exact_t0(tq, i));
        let note = if i == 0 { "degenerate base step: both sides vanish" } else { "" };
        log.check("genus_sandwich", at_i(i), &format!("T0({tq}): lower < g_i"), genus_sandwich_lower(tq, i), Relation::Lt, g.clone(), Verdict::Refuted, note);
        log.check("genus_sandwich", at_i(i), &format!("T0({tq}): g_i < upper"), g.clone(), Relation::Lt, genus_sandwich_upper(tq, i), Verdict::Refuted, "");
        log.check("genus_sandwich", at_i(i), &format!("T0({tq}): g_i <= q^(i+1) - 2q^((i+1)/2) + 1"), g, Relation::Le, genus_tight_upper(tq, i), Verdict::Refuted, "");
    }
}

fn t2(i: u32, s: u32) -> TowerStep {
    TowerStep::new(TowerId::T2, i, s).expect("valid sub-step")
}

fn audit_q2(log: &mut Log, i_max: u32) {
    let (q, p) = (4u64, 2u64);
    sandwich(log, q, i_max);

    // Stated data against the formulas.
    let h1 = step_data(&t2(1, 0));
    let h11 = step_data(&t2(1, 1));
    log.check("stated_data", at_is(1, 0), "g(H_1) = g_1 of T0(4)", s(9), Relation::Eq, int(&genus_exact_t0(4, 1)), Verdict::Refuted, "");
    log.check("stated_data", at_is(1, 0), "B_1 + 2B_2 + 4B_4 of H_1 >= stated lower bound", int(&h1.certified_place_sum().unwrap()), Relation::Ge, int(&h1.weighted_place_sum_lower.clone().unwrap()), Verdict::Refuted, "");
    log.check("stated_data", at_is(1, 1), "B_1 + 2B_2 + 4B_4 of H_{1,1} >= stated lower bound", int(&h11.certified_place_sum().unwrap()), Relation::Ge, int(&h11.weighted_place_sum_lower.clone().unwrap()), Verdict::Refuted, "");
    log.check("stated_data", at_is(1, 1), "g(H_{1,1}) <= g_2/2", s(21), Relation::Le, h11.genus_upper.clone(), Verdict::Refuted, "");
    log.check("stated_data", at_is(1, 1), "g(H_{1,1}) - 1 >= p(g_1 - 1)", s(20), Relation::Ge, s(16), Verdict::Refuted, "Hurwitz");
    log.check("stated_data", at_is(1, 1), "g_2 - 1 >= p(g(H_{1,1}) - 1)", s(44), Relation::Ge, s(40), Verdict::Refuted, "Hurwitz");

    let qi = |e: i64| pw(q, e); // q^e
    let qh = |e: i64| pw(p, e); // q^{e/2} = p^e
    let pe = |e: i64| pw(p, e);
    for i in 0..=i_max {
        let ii = i as i64;
        for sl in 0..=1u32 {
            let ss = sl as i64;
            let at = at_is(i, sl);
            let step = t2(i, sl);
            let gb = add(&[qi(ii + 2), neg(&mul(&s(2), &qh(ii + 2))), s(1)]); // q^{i+2} − 2q^{i/2+1} + 1

            // Capacity lemma chain.
            if let Some(g) = step_data(&step).genus_exact {
                log.check("capacity_lemma", at, "g_{i,s} <= p^(s-2)(q^(i+2) - 2q^(i/2+1) + 1)", int(&g), Relation::Le, mul(&pe(ss - 2), &gb), Verdict::Refuted, "");
            }
            let e1 = add(&[mul(&s(12), &mul(&qi(ii), &pe(ss))), neg(&mul(&s(2), &mul(&pe(ss - 2), &gb))), s(1)]);
            let e2 = add(&[mul(&qi(ii + 2), &pe(ss)), neg(&mul(&qi(ii + 1), &pe(ss))), neg(&mul(&pe(ss - 1), &gb)), s(1)]);
            let e3 = add(&[
                mul(&qi(ii + 2), &pe(ss - 1)),
                neg(&mul(&qi(ii + 1), &pe(ss))),
                mul(&qh(ii + 2), &pe(ss)),
                neg(&pe(ss - 1)),
                s(1),
            ]);
            let e4 = add(&[mul(&mul(&qi(ii + 1), &pe(ss - 1)), &s(2)), mul(&qh(ii + 2), &pe(ss)), s(-1)]);
            let e5 = add(&[mul(&qi(ii + 1), &pe(ss)), mul(&qh(ii + 2), &pe(ss)), s(-1)]);
            log.check("capacity_lemma", at, "line 1 = line 2", e1.clone(), Relation::Eq, e2.clone(), Verdict::Refuted, "");
            log.check("capacity_lemma", at, "line 2 = line 3", e2, Relation::Eq, e3.clone(), Verdict::Refuted, "");
            log.check("capacity_lemma", at, "line 3 >= line 4", e3, Relation::Ge, e4.clone(), Verdict::Refuted, "");
            log.check("capacity_lemma", at, "line 4 = q^(i+1)p^s + q^(i/2+1)p^s - 1", e4, Relation::Eq, e5.clone(), Verdict::Refuted, "");
            log.check(
                "capacity_definition",
                at,
                "floor((sum - 2g + 1)/2) >= printed capacity bound",
                floor_half(&e1),
                Relation::Ge,
                e5.clone(),
                Verdict::Mismatched,
                "the definition halves sum - 2g + 1; the printed conclusion does not",
            );
            let cert = step_capacity(&step, Mode::Certified).expect("T2 carries capacities");
            log.check(
                "capacity_definition",
                at,
                "certified capacity >= printed capacity bound",
                int(&cert),
                Relation::Ge,
                e5.clone(),
                Verdict::Mismatched,
                "",
            );

            // Slack D_{2,i,s}.
            let d_genus = mul(&pe(ss), &add(&[mul(&s(2), &qi(ii)), neg(&mul(&s(3), &qh(ii)))]));
            let d_places = mul(&r(1, 2), &mul(&s(12), &mul(&qi(ii), &pe(ss))));
            let d_min = std::cmp::min(d_genus.clone(), d_places.clone());
            log.check("slack", at, "min{p^s(2q^i - 3q^(i/2)), q^i(q^2-q)p^s/2} = p^s(2q^i - 3q^(i/2))", d_min, Relation::Eq, d_genus.clone(), Verdict::Refuted, "");

            // Ratio chain for g_{i,s+1}/X with X = n_{2,i,s} + D_{2,i,s}.
            let num1 = add(&[mul(&pe(ss), &add(&[qi(ii + 2), neg(&mul(&s(3), &qh(ii + 2)))])), pe(ss - 1)]);
            let den1 = &e5 + &d_genus;
            let line1 = num1.div(&den1);
            let (_, next_upper) = genus_bounds(&step.next());
            log.check("ratio_q2", at, "g_{i,s+1} <= line 1 numerator", next_upper, Relation::Le, num1.clone(), Verdict::Refuted, "certified upper bound on g_{i,s+1}");
            let den2 = |half_sign: i64| {
                add(&[s(1), mul(&s(2), &qi(-1)), qh(half_sign * ii), neg(&mul(&s(3), &qh(-ii - 2))), neg(&mul(&qi(-ii - 1), &pe(-ss)))])
            };
            let num2 = |half_sign: i64| add(&[qi(1), neg(&mul(&s(3), &qh(half_sign * ii))), mul(&qi(-ii - 1), &pe(-1))]);
            log.check("ratio_q2", at, "line 2 as printed (3q^(i/2)) = line 1", num2(1).div(&den2(-1)), Relation::Eq, line1.clone(), Verdict::Refuted, "");
            log.check("ratio_q2", at, "line 2 read with 3q^(-i/2) = line 1", num2(-1).div(&den2(-1)), Relation::Eq, line1.clone(), Verdict::Refuted, "");
            let num3 = |sign: i64| add(&[qi(1), neg(&mul(&s(3), &pe(sign * ii))), mul(&qi(-ii - 1), &pe(-1))]);
            let den3 = add(&[s(1), mul(&s(2), &qi(-1)), pe(-ii)]);
            let sub = add(&[mul(&s(3), &qh(-ii - 2)), neg(&mul(&qi(-ii - 1), &pe(-ss)))]);
            log.check("ratio_q2", at, "line 3 as printed (3p^i) = line 1", num3(1).div(&(&den3 - &sub)), Relation::Eq, line1.clone(), Verdict::Refuted, "");
            log.check("ratio_q2", at, "line 3 read with 3p^(-i) = line 1", num3(-1).div(&(&den3 - &sub)), Relation::Eq, line1.clone(), Verdict::Refuted, "");
            let sub_fixed = add(&[mul(&s(3), &qh(-ii - 2)), mul(&qi(-ii - 1), &pe(-ss))]);
            log.check(
                "ratio_q2",
                at,
                "line 3 read with 3p^(-i) and +q^(-i-1)p^(-s) restored = line 1",
                num3(-1).div(&(&den3 - &sub_fixed)),
                Relation::Eq,
                line1.clone(),
                Verdict::Refuted,
                "",
            );
            log.check("ratio_q2", at, "3q^(-i/2-1) - q^(-i-1)p^(-s) <= 7/16", sub, Relation::Le, r(7, 16), Verdict::Refuted, "");
            let line4 = |sign: i64| num3(sign).div(&(&den3 - &r(7, 16)));
            log.check("ratio_q2", at, "line 4 as printed (3p^i) <= 81/34", line4(1), Relation::Le, r(81, 34), Verdict::Refuted, "");
            log.check("ratio_q2", at, "line 4 read with 3p^(-i) <= 81/34", line4(-1), Relation::Le, r(81, 34), Verdict::Refuted, "");
            log.check("ratio_q2", at, "line 1 <= 81/34", line1, Relation::Le, r(81, 34), Verdict::Refuted, "");
            let next = step_data(&step.next());
            let x_cert = int(&(cert + capacity_slack(&step, Mode::Certified).expect("T2 carries slack")));
            if x_cert.signum() == std::cmp::Ordering::Greater {
                log.check(
                    "ratio_q2",
                    at,
                    "certified g_{i,s+1}/X <= 81/34",
                    int(&next.genus_used()).div(&x_cert),
                    Relation::Le,
                    r(81, 34),
                    Verdict::Refuted,
                    "X from certified capacity and slack",
                );
            }
        }

        // Genus increments.
        let gi = int(&genus_exact_t0(q, i));
        let ii = i as i64;
        let base = add(&[mul(&s(2), &qi(ii)), neg(&mul(&s(3), &qh(ii)))]);
        let at = at_i(i);
        let prod = mul(&add(&[qh(ii), s(-1)]), &add(&[hq(q, ii + 1), s(-1)]));
        log.check("delta_genus", at, "g_i - 1 >= (q^(i/2)-1)(q^((i+1)/2)-1)", &gi - &s(1), Relation::Ge, prod.clone(), Verdict::Refuted, if i == 0 { "degenerate base step" } else { "" });
        log.check("delta_genus", at, "(q^(i/2)-1)(q^((i+1)/2)-1) = 2q^i - 3q^(i/2) + 1", prod, Relation::Eq, &base + &s(1), Verdict::Refuted, "");
        log.check("delta_genus", at, "(p-1)(g_i - 1) >= 2q^i - 3q^(i/2)", &gi - &s(1), Relation::Ge, base.clone(), Verdict::Refuted, "s = 0");
        log.check("delta_genus", at, "(p-1)p(g_i - 1) >= p(2q^i - 3q^(i/2))", mul(&s(2), &(&gi - &s(1))), Relation::Ge, mul(&s(2), &base), Verdict::Refuted, "s = 1");
        let gnext = int(&genus_exact_t0(q, i + 1));
        log.check("delta_genus", at, "g_{i+1} - 1 >= p^2(g_i - 1)", &gnext - &s(1), Relation::Ge, mul(&s(4), &(&gi - &s(1))), Verdict::Refuted, "two Hurwitz steps");
        log.check("delta_genus", at, "g_{i+1} - g_i >= (1 + p)(2q^i - 3q^(i/2))", &gnext - &gi, Relation::Ge, mul(&s(3), &base), Verdict::Refuted, "sum over s = 0, 1");
    }
    log.check("slope", At::default(), "9/2 (1 + 81/34) = 1035/68", mul(&r(9, 2), &(&s(1) + &r(81, 34))), Relation::Eq, r(1035, 68), Verdict::Refuted, "");

    criteria_q2(log);
}

/// Step criteria stated in terms of logarithms, against direct certified checks.
fn criteria_q2(log: &mut Log) {
    let lo = threshold(2).expect("q = 2 has a threshold");
    for n in lo..lo + CRITERIA_SPAN {
        let at = at_n(n);
        // (a) for every H_{i,s} with i <= (n − 13)/4.
        let mut violations = 0i64;
        for i in 0..=((n - 13) / 4).min(40) as u32 {
            for sl in 0..=1 {
                let d = step_data(&t2(i, sl));
                let (_, _, ok) = super::data::condition_a(&d.step, n, &d.genus_used());
                violations += i64::from(!ok);
            }
        }
        log.check("step_criteria", at, "(a) fails for no H_{i,s} with i <= (n-13)/4", s(violations), Relation::Eq, s(0), Verdict::Refuted, "");
        // Smallest i with i > log_4(n) − 1/2, i.e. 2·4^i > n.
        let mut i_star = 0u32;
        while 2 * 4u64.pow(i_star) <= n {
            i_star += 1;
        }
        for sl in 0..=1 {
            let d = step_data(&t2(i_star, sl));
            let lhs = int(&d.weighted_place_sum_lower.clone().unwrap());
            let rhs = int(&(BigInt::from(2 * n) + d.genus_used() * 2 - 1));
            log.check("step_criteria", at, &format!("(c) holds on H_{{{i_star},{sl}}}, smallest i > log_q(n) - 1/2"), lhs, Relation::Ge, rhs, Verdict::Refuted, "");
        }
        if n >= 21 {
            log.check("step_criteria", at, "]log_q(n) - 1/2, (n-13)/4] contains an integer", s(4 * i_star as i64), Relation::Le, s(n as i64 - 13), Verdict::Refuted, "");
        }
        let chosen = select_step(2, n).expect("n above threshold");
        let first_c = first_step_with_c(TowerId::T2, n);
        log.check(
            "step_criteria",
            at,
            "the first step meeting (c) also meets (a)",
            s(step_rank(&chosen)),
            Relation::Eq,
            s(step_rank(&first_c)),
            Verdict::Refuted,
            "",
        );
    }
}

fn step_rank(t: &TowerStep) -> i64 {
    if t.tower.has_sublevels() {
        2 * t.i as i64 + t.s as i64
    } else {
        t.i as i64
    }
}

fn first_step_with_c(tower: TowerId, n: u64) -> TowerStep {
    let mut step = TowerStep::new(tower, 0, 0).expect("base step");
    loop {
        let d = step_data(&step);
        let sum = d.certified_place_sum().expect("bounded tower");
        if sum >= BigInt::from(2 * n) + d.genus_used() * 2 - 1 {
            return step;
        }
        step = step.next();
    }
}

fn audit_q3(log: &mut Log, i_max: u32) {
    let q = 3u64;
    sandwich(log, q, i_max);
    let qi = |e: i64| pw(q, e);
    let sq = QuadraticSurd::sqrt(q);
    let e = |i: u32| TowerStep::new(TowerId::E, i, 0).expect("E step");
    let ceil_half = |i: u32| i.div_ceil(2) as i64;

    for i in 0..=i_max {
        let ii = i as i64;
        let at = at_i(i);
        let step = e(i);

        // Capacity lemma chain.
        let gb = add(&[qi(ii + 1), neg(&mul(&s(2), &hq(q, ii + 1))), s(1)]);
        let c1 = add(&[mul(&qi(ii), &s(6)), neg(&mul(&s(2), &gb)), s(1)]);
        let c2 = add(&[mul(&qi(ii + 1), &s(2)), neg(&mul(&s(2), &qi(ii + 1))), mul(&s(4), &hq(q, ii + 1)), s(-1)]);
        let c3 = add(&[mul(&qi(ii + 1), &s(q as i64 - 3)), mul(&s(4), &hq(q, ii + 1)), s(-1)]);
        let c4 = &mul(&s(4), &hq(q, ii + 1)) - &s(1);
        log.check("capacity_lemma", at, "g_i <= q^(i+1) - 2q^((i+1)/2) + 1", int(&genus_exact_t0(q, i)), Relation::Le, gb.clone(), Verdict::Refuted, "");
        log.check("capacity_lemma", at, "line 1 >= line 2", c1.clone(), Relation::Ge, c2.clone(), Verdict::Refuted, "");
        log.check("capacity_lemma", at, "line 2 = q^(i+1)(q-3) + 4q^((i+1)/2) - 1", c2, Relation::Eq, c3.clone(), Verdict::Refuted, "");
        log.check("capacity_lemma", at, "q^(i+1)(q-3) + 4q^((i+1)/2) - 1 = 4q^((i+1)/2) - 1", c3, Relation::Eq, c4.clone(), Verdict::Refuted, "");
        log.check(
            "capacity_definition",
            at,
            "floor((sum - 2g + 1)/2) >= printed capacity bound",
            floor_half(&c1),
            Relation::Ge,
            c4.clone(),
            Verdict::Mismatched,
            "the definition halves sum - 2g + 1; the printed conclusion does not",
        );
        let cert = step_capacity(&step, Mode::Certified).expect("E carries capacities");
        log.check("capacity_definition", at, "certified capacity >= printed capacity bound", int(&cert), Relation::Ge, c4.clone(), Verdict::Mismatched, "");

        // Genus increments: the displayed formula matches g_{i+1} − g_i, not g_i.
        let gi = int(&genus_exact_t0(q, i));
        let gnext = int(&genus_exact_t0(q, i + 1));
        let half_exp = if i % 2 == 0 { ii } else { ii + 1 };
        let printed = mul(&s(2), &(&qi(ii + 1) - &hq(q, half_exp)));
        log.check("delta_genus", at, "displayed formula equals g_i", printed.clone(), Relation::Eq, gi.clone(), Verdict::Refuted, "");
        log.check("delta_genus", at, "displayed formula equals g_{i+1} - g_i", printed, Relation::Eq, &gnext - &gi, Verdict::Refuted, "");
        let d_genus = mul(&s(2), &(&qi(ii + 1) - &qi(ceil_half(i))));
        log.check("delta_genus", at, "g_{i+1} - g_i >= (q-1)(q^(i+1) - q^ceil(i/2))", &gnext - &gi, Relation::Ge, d_genus.clone(), Verdict::Refuted, "");

        // Slack D_{3,i}.
        let d_places = mul(&r(1, 2), &mul(&qi(ii), &s(6)));
        if i >= 2 {
            let d_min = std::cmp::min(d_genus.clone(), d_places.clone());
            log.check("slack", at, "min{(q-1)(q^(i+1) - q^ceil(i/2)), q^i(q^2-q)/2} = (q-1)(q^(i+1) - q^ceil(i/2))", d_min, Relation::Eq, d_genus.clone(), Verdict::Refuted, "");
            log.unstated(
                "slack",
                at,
                "(q-1)(q^(i+1) - q^ceil(i/2)) <= (1/2) sum k B_k, at the stated lower bound",
                d_genus.clone(),
                Relation::Le,
                d_places,
                "needs sum k B_k beyond its stated lower bound",
            );

            // Ratio chain for g_{i+1}/X, X = n_{3,i} + D_{3,i} as used in the argument.
            let x = &c4 + &d_genus;
            let num1 = mul(&(&hq(q, ii + 3) - &s(1)), &(&hq(q, ii + 2) - &s(1)));
            log.check("ratio_q3", at, "g_{i+1} <= (q^((i+3)/2)-1)(q^((i+2)/2)-1)", gnext.clone(), Relation::Le, num1.clone(), Verdict::Refuted, "");
            let line1 = num1.div(&x);
            let num2 = add(&[hq(q, 2 * ii + 5), neg(&mul(&hq(q, ii + 2), &(&s(1) + &sq))), s(1)]);
            let den2 = add(&[qi(ii + 2), mul(&s(4), &hq(q, ii + 1)), neg(&qi(ii + 1)), neg(&mul(&s(2), &qi(ceil_half(i)))), s(-1)]);
            let line2 = num2.div(&den2);
            log.check("ratio_q3", at, "line 1 = line 2", line1.clone(), Relation::Eq, line2.clone(), Verdict::Refuted, "");
            let tail_num = |k: i64| add(&[sq.clone(), neg(&mul(&hq(q, -k - 2), &(&s(1) + &sq))), qi(-k - 2)]);
            let tail_den = |k: i64| add(&[s(1), neg(&qi(-1)), neg(&mul(&s(2), &hq(q, -k - 3))), neg(&qi(-k - 2))]);
            let line3 = tail_num(ii).div(&(&tail_den(ii) + &mul(&s(4), &hq(q, -ii - 3))));
            let line4 = tail_num(ii).div(&tail_den(ii));
            let line5 = tail_num(2).div(&tail_den(2));
            log.check("ratio_q3", at, "line 2 <= line 3", line2, Relation::Le, line3.clone(), Verdict::Refuted, "");
            log.check("ratio_q3", at, "line 3 <= line 4 (dropping 4q^(-(i+3)/2))", line3, Relation::Le, line4.clone(), Verdict::Refuted, "");
            log.check("ratio_q3", at, "line 4 <= its value at i = 2", line4, Relation::Le, line5.clone(), Verdict::Refuted, "");
            log.check("ratio_q3", at, "g_{i+1}/X <= value at i = 2", gnext.div(&x), Relation::Le, line5, Verdict::Refuted, "exact g_{i+1}");
            let x_cert = int(&(cert + capacity_slack(&step, Mode::Certified).expect("E carries slack")));
            log.check(
                "ratio_q3",
                at,
                "3(1 + g_{i+1}/X) <= 1933/250, certified X",
                mul(&s(3), &(&s(1) + &int(&genus_exact_t0(q, i + 1)).div(&x_cert))),
                Relation::Le,
                r(1933, 250),
                Verdict::Refuted,
                "X from certified capacity and slack",
            );
        }
    }

    let tail = add(&[sq.clone(), neg(&mul(&r(1, 9), &(&s(1) + &sq))), r(1, 81)]);
    let den = add(&[r(2, 3), neg(&mul(&s(2), &hq(q, -5))), neg(&r(1, 81))]);
    let constant = mul(&s(3), &(&s(1) + &tail.div(&den)));
    log.check("slope", At::default(), "printed closed form <= 7.73145", constant.clone(), Relation::Le, r(773145, 100000), Verdict::Refuted, "the printed approximation is 7.7314");
    log.check("slope", At::default(), "printed closed form >= 7.73135", constant.clone(), Relation::Ge, r(773135, 100000), Verdict::Refuted, "the printed approximation is 7.7314");
    log.check("slope", At::default(), "printed closed form <= 1933/250", constant, Relation::Le, r(1933, 250), Verdict::Refuted, "");

    criteria_q3(log);
}

fn criteria_q3(log: &mut Log) {
    let lo = threshold(3).expect("q = 3 has a threshold");
    for n in lo..lo + CRITERIA_SPAN {
        let at = at_n(n);
        let mut violations = 0i64;
        for i in 0..=((n - 5) / 2).min(40) as u32 {
            let d = step_data(&TowerStep::new(TowerId::E, i, 0).expect("E step"));
            let (_, _, ok) = super::data::condition_a(&d.step, n, &d.genus_used());
            violations += i64::from(!ok);
        }
        log.check("step_criteria", at, "(a) fails for no G_i with i <= (n-5)/2", s(violations), Relation::Eq, s(0), Verdict::Refuted, "");
        // Smallest i >= 2 log_3(n/2 − 1), i.e. 4·3^i >= (n − 2)^2.
        let mut i_log = 0u32;
        while 4 * 3u64.pow(i_log) < (n - 2) * (n - 2) {
            i_log += 1;
        }
        let direct = first_step_with_c(TowerId::E, n);
        log.check(
            "step_criteria",
            at,
            "smallest i >= 2log_q(n/2 - 1) = smallest i meeting (c)",
            s(i_log as i64),
            Relation::Eq,
            s(direct.i as i64),
            Verdict::Mismatched,
            "",
        );
        log.check("step_criteria", at, "[2log_q(n/2 - 1), (n-5)/2] contains an integer", s(2 * i_log as i64), Relation::Le, s(n as i64 - 5), Verdict::Refuted, "");
        let chosen = select_step(3, n).expect("n above threshold");
        log.check("step_criteria", at, "the first step meeting (c) also meets (a)", s(chosen.i as i64), Relation::Eq, s(direct.i as i64), Verdict::Refuted, "");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(r: &'a AuditReport, chain: &str, label: &str, i: Option<u32>) -> &'a AuditEntry {
        r.entries
            .iter()
            .find(|e| e.chain == chain && e.check.label == label && (i.is_none() || e.i == i))
            .unwrap_or_else(|| panic!("missing {chain}/{label}"))
    }

    #[test]
    fn q2_report() {
        let r = audit(2, 6).unwrap();
        assert!(r.consistent());
        let fd = find(&r, "capacity_definition", "floor((sum - 2g + 1)/2) >= printed capacity bound", Some(2));
        assert_eq!(fd.verdict, Verdict::Mismatched);
        assert_eq!(find(&r, "slope", "9/2 (1 + 81/34) = 1035/68", None).verdict, Verdict::Verified);
        // The capacity chain itself is sound.
        for e in r.entries.iter().filter(|e| e.chain == "capacity_lemma") {
            assert_eq!(e.verdict, Verdict::Verified, "{}", e.check);
        }
        // Line 3 needs both 3p^(-i) and the sign of the last denominator term fixed to reproduce line 1.
        assert_eq!(find(&r, "ratio_q2", "line 3 read with 3p^(-i) and +q^(-i-1)p^(-s) restored = line 1", Some(3)).verdict, Verdict::Verified);
        assert_eq!(find(&r, "ratio_q2", "line 3 read with 3p^(-i) = line 1", Some(3)).verdict, Verdict::Refuted);
        assert_eq!(find(&r, "ratio_q2", "line 2 read with 3q^(-i/2) = line 1", Some(3)).verdict, Verdict::Verified);
        assert_eq!(find(&r, "ratio_q2", "line 3 as printed (3p^i) = line 1", Some(3)).verdict, Verdict::Refuted);
        // 3/4 − 1/4 > 7/16 at i = s = 0.
        assert_eq!(find(&r, "ratio_q2", "3q^(-i/2-1) - q^(-i-1)p^(-s) <= 7/16", Some(0)).verdict, Verdict::Refuted);
        assert_eq!(find(&r, "ratio_q2", "3q^(-i/2-1) - q^(-i-1)p^(-s) <= 7/16", Some(1)).verdict, Verdict::Verified);
        assert_eq!(find(&r, "genus_sandwich", "T0(4): lower < g_i", Some(0)).verdict, Verdict::Refuted);
    }

    #[test]
    fn q3_report() {
        let r = audit(3, 6).unwrap();
        assert!(r.consistent());
        assert_eq!(find(&r, "delta_genus", "displayed formula equals g_i", Some(2)).verdict, Verdict::Refuted);
        assert_eq!(find(&r, "delta_genus", "displayed formula equals g_{i+1} - g_i", Some(2)).verdict, Verdict::Verified);
        assert_eq!(find(&r, "slack", "min{(q-1)(q^(i+1) - q^ceil(i/2)), q^i(q^2-q)/2} = (q-1)(q^(i+1) - q^ceil(i/2))", Some(2)).verdict, Verdict::Refuted);
        let n13 = r
            .entries
            .iter()
            .find(|e| e.n == Some(13) && e.check.label.starts_with("smallest i"))
            .unwrap();
        assert_eq!((n13.check.lhs.clone(), n13.check.rhs.clone()), (s(4), s(3)));
        assert_eq!(n13.verdict, Verdict::Mismatched);
    }
}
