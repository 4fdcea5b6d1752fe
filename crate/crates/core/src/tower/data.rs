//! Tower descriptions, genus formulas and place-count bounds.

use std::fmt;

use num::{BigInt, BigRational, Integer, Signed, Zero};

use super::surd::{rat, QuadraticSurd};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerId {
    /// `x_{i+1}^q + x_{i+1} = x_i^q/(x_i^{q−1} + 1)` over `F_{q²}`.
    T0 { q: u64 },
    /// Intermediate steps of `T0(4)` over `F_16`, via `t_{i+1}² + t_{i+1} = x_i⁴/(x_i³ + 1)`.
    T1,
    /// `T1` descended to `F_2`.
    T2,
    /// `T0(3)` descended to `F_3`.
    E,
}

impl TowerId {
    /// The parameter `q` of the genus and place formulas.
    pub fn q(self) -> u64 {
        match self {
            TowerId::T0 { q } => q,
            TowerId::T1 | TowerId::T2 => 4,
            TowerId::E => 3,
        }
    }

    /// Characteristic; also the degree of each intermediate step for `T1`/`T2`.
    pub fn p(self) -> u64 {
        match self {
            TowerId::T0 { q } => crate::ff::prime_power(q).map(|(p, _)| p).unwrap_or(q),
            TowerId::T1 | TowerId::T2 => 2,
            TowerId::E => 3,
        }
    }

    pub fn constant_field_order(self) -> u64 {
        match self {
            TowerId::T0 { q } => q * q,
            TowerId::T1 => 16,
            TowerId::T2 => 2,
            TowerId::E => 3,
        }
    }

    pub fn has_sublevels(self) -> bool {
        matches!(self, TowerId::T1 | TowerId::T2)
    }

    fn step_symbol(self) -> &'static str {
        match self {
            TowerId::T0 { .. } => "F",
            TowerId::T1 => "F",
            TowerId::T2 => "H",
            TowerId::E => "G",
        }
    }
}

impl fmt::Display for TowerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerId::T0 { q } => write!(f, "T0({q})"),
            TowerId::T1 => write!(f, "T1"),
            TowerId::T2 => write!(f, "T2"),
            TowerId::E => write!(f, "E"),
        }
    }
}

/// A step `i` (and sub-step `s` for `T1`/`T2`) of a tower.
///
/// The two flags are imported facts about these towers, not computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TowerStep {
    pub tower: TowerId,
    pub i: u32,
    pub s: u32,
    pub ordinary: bool,
    pub nonspecial_divisor_g_minus_1: bool,
}

impl TowerStep {
    /// `s = 2` is the next full step and is normalized to `(i + 1, 0)`.
    pub fn new(tower: TowerId, i: u32, s: u32) -> Result<TowerStep> {
        let (i, s) = match (tower.has_sublevels(), s) {
            (_, 0) => (i, 0),
            (true, 1) => (i, 1),
            (true, 2) => (i + 1, 0),
            _ => return Err(Error::UnsupportedTower(format!("{tower} has no sub-step {s}"))),
        };
        Ok(TowerStep {
            tower,
            i,
            s,
            ordinary: true,
            nonspecial_divisor_g_minus_1: true,
        })
    }

    pub fn next(&self) -> TowerStep {
        let (i, s) = if self.tower.has_sublevels() && self.s == 0 {
            (self.i, 1)
        } else {
            (self.i + 1, 0)
        };
        TowerStep { i, s, ..*self }
    }

    pub fn prev(&self) -> Option<TowerStep> {
        let (i, s) = match (self.i, self.s) {
            (0, 0) => return None,
            (i, 1) => (i, 0),
            (i, _) if self.tower.has_sublevels() => (i - 1, 1),
            (i, _) => (i - 1, 0),
        };
        Some(TowerStep { i, s, ..*self })
    }

    pub fn label(&self) -> String {
        let sym = self.tower.step_symbol();
        if self.tower.has_sublevels() && self.s > 0 {
            format!("{sym}_{{{},{}}}", self.i, self.s)
        } else {
            format!("{sym}_{}", self.i)
        }
    }
}

impl PartialOrd for TowerStep {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerStep {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.tower, self.i, self.s).cmp(&(other.tower, other.i, other.s))
    }
}

pub(crate) fn pow(b: u64, e: u32) -> BigInt {
    num::pow(BigInt::from(b), e as usize)
}

fn surd_int(n: BigInt) -> QuadraticSurd {
    QuadraticSurd::integer(n)
}

/// `q^{e/2}`.
fn hp(q: u64, e: i64) -> QuadraticSurd {
    QuadraticSurd::half_power(q, e)
}

pub fn genus_exact_t0(q: u64, i: u32) -> BigInt {
    if i % 2 == 1 {
        let a = pow(q, (i + 1) / 2) - 1;
        &a * &a
    } else {
        (pow(q, i / 2) - 1) * (pow(q, (i + 2) / 2) - 1)
    }
}

/// `(q^{i/2} − 1)(q^{(i+1)/2} − 1)`, a strict lower bound for `i ≥ 1`.
pub fn genus_sandwich_lower(q: u64, i: u32) -> QuadraticSurd {
    let one = QuadraticSurd::from(1);
    &(&hp(q, i as i64) - &one) * &(&hp(q, i as i64 + 1) - &one)
}

/// `(q^{(i+2)/2} − 1)(q^{(i+1)/2} − 1)`, a strict upper bound.
pub fn genus_sandwich_upper(q: u64, i: u32) -> QuadraticSurd {
    let one = QuadraticSurd::from(1);
    &(&hp(q, i as i64 + 2) - &one) * &(&hp(q, i as i64 + 1) - &one)
}

/// `q^{i+1} − 2q^{(i+1)/2} + 1`.
pub fn genus_tight_upper(q: u64, i: u32) -> QuadraticSurd {
    &(&surd_int(pow(q, i + 1)) - &hp(q, i as i64 + 1).scale(&rat(2))) + &QuadraticSurd::from(1)
}

/// `g_{i,s} ≤ g_{i+1}/p^{2−s}`.
pub fn sublevel_upper_a(i: u32, s: u32) -> BigRational {
    BigRational::new(genus_exact_t0(4, i + 1), pow(2, 2 - s))
}

/// `g_{i,s} ≤ p^{s−2}(q^{i+2} − 2q^{i/2+1}) + p^{s−2}` with `q^{i/2} = p^i`.
pub fn sublevel_upper_b(i: u32, s: u32) -> BigRational {
    let inner = pow(4, i + 2) - pow(2, i) * 8 + 1;
    BigRational::new(inner, pow(2, 2 - s))
}

/// Genus data stated outright for two steps of `T2`: `(i, s, g, [B_1, B_2, B_4])`.
const STATED_T2: [(u32, u32, i64, [u64; 3]); 2] = [(1, 0, 9, [4, 2, 12]), (1, 1, 21, [4, 2, 25])];

fn stated(step: &TowerStep) -> Option<(i64, [u64; 3])> {
    if step.tower != TowerId::T2 {
        return None;
    }
    STATED_T2
        .iter()
        .find(|(i, s, _, _)| *i == step.i && *s == step.s)
        .map(|&(_, _, g, c)| (g, c))
}

pub fn genus_exact(step: &TowerStep) -> Option<BigInt> {
    if step.s == 0 {
        return Some(genus_exact_t0(step.tower.q(), step.i));
    }
    stated(step).map(|(g, _)| BigInt::from(g))
}

/// Certified `(lower, upper)` genus bounds.
///
/// Full steps use the sandwich lower bound and the tight upper bound. Sub-steps of
/// `T1`/`T2` use Hurwitz `g_{i,1} − 1 ≥ p(g_i − 1)` below and the smaller of the
/// two sub-step bounds above.
pub fn genus_bounds(step: &TowerStep) -> (QuadraticSurd, QuadraticSurd) {
    let q = step.tower.q();
    if step.s == 0 {
        return (genus_sandwich_lower(q, step.i), genus_tight_upper(q, step.i));
    }
    let gi = genus_exact_t0(q, step.i);
    let hurwitz: BigInt = (gi - 1u32) * 2u32 + 1u32;
    let hurwitz = std::cmp::max(hurwitz, BigInt::zero());
    let upper = sublevel_upper_a(step.i, step.s).min(sublevel_upper_b(step.i, step.s));
    (QuadraticSurd::integer(hurwitz), QuadraticSurd::rational(upper))
}

/// Lower bound on `Σ_k k B_k`: `q^i(q² − q)p^s` for `T2`, `q^i(q² − q)` for `E`.
pub fn placecount_lower(step: &TowerStep) -> Result<BigInt> {
    match step.tower {
        TowerId::T2 => Ok(pow(4, step.i) * 12 * pow(2, step.s)),
        TowerId::E => Ok(pow(3, step.i) * 6),
        t => Err(Error::UnsupportedTower(format!("no place-count bound for {t}"))),
    }
}

/// Rational places of the `n`-th step of `T0(q)`.
pub fn rational_places_exact_t0(q: u64, n: u32) -> Result<BigInt> {
    if n <= 2 {
        return Err(Error::StepTooSmall);
    }
    let (p, _) = crate::ff::prime_power(q).ok_or(Error::NonPrimeCharacteristic(q))?;
    let tail = if p == 2 { 2 * q * q } else { 2 * q };
    Ok(pow(q, n) * (q * q - q) + tail)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepData {
    pub step: TowerStep,
    pub genus_exact: Option<BigInt>,
    pub genus_lower: QuadraticSurd,
    pub genus_upper: QuadraticSurd,
    /// Certified lower bound on `Σ_k k B_k`, where one is known.
    pub weighted_place_sum_lower: Option<BigInt>,
    /// `(B_1, B_2, B_4)` where stated outright.
    pub exact_counts: Option<[u64; 3]>,
}

impl StepData {
    /// The genus used in certified checks: exact if known, else the integer part of the upper bound.
    pub fn genus_used(&self) -> BigInt {
        self.genus_exact.clone().unwrap_or_else(|| self.genus_upper.floor())
    }

    /// `Σ k B_k` from exact counts when stated, else the certified lower bound.
    pub fn certified_place_sum(&self) -> Option<BigInt> {
        match self.exact_counts {
            Some([b1, b2, b4]) => Some(BigInt::from(b1 + 2 * b2 + 4 * b4)),
            None => self.weighted_place_sum_lower.clone(),
        }
    }
}

pub fn step_data(step: &TowerStep) -> StepData {
    let (genus_lower, genus_upper) = genus_bounds(step);
    let weighted_place_sum_lower = match step.tower {
        TowerId::T2 | TowerId::E => placecount_lower(step).ok(),
        TowerId::T0 { q } if step.i > 2 => rational_places_exact_t0(q, step.i).ok(),
        TowerId::T0 { q } if step.i == 0 => Some(BigInt::from(q * q + 1)),
        _ => None,
    };
    StepData {
        step: *step,
        genus_exact: genus_exact(step),
        genus_lower,
        genus_upper,
        weighted_place_sum_lower,
        exact_counts: stated(step).map(|(_, c)| c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Certified,
    Paper,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Certified => "certified",
            Mode::Paper => "paper",
        })
    }
}

fn require_bounded_tower(step: &TowerStep) -> Result<()> {
    match step.tower {
        TowerId::T2 | TowerId::E => Ok(()),
        t => Err(Error::UnsupportedTower(format!("{t} carries no capacity data"))),
    }
}

/// Largest `m` with `2m + 2g − 1 ≤ Σ k B_k` (certified), or the printed lower bound (paper).
///
/// Certified mode uses [`StepData::certified_place_sum`] and [`StepData::genus_used`],
/// and clamps at 0.
pub fn step_capacity(step: &TowerStep, mode: Mode) -> Result<BigInt> {
    require_bounded_tower(step)?;
    match mode {
        Mode::Certified => {
            let d = step_data(step);
            let sum = d.certified_place_sum().expect("bounded towers carry place sums");
            let m: BigInt = sum - d.genus_used() * 2u32 + 1u32;
            let m = m.div_floor(&BigInt::from(2));
            Ok(m.max(BigInt::zero()))
        }
        Mode::Paper => Ok(paper_capacity(step).ceil()),
    }
}

/// `q^{i+1}p^s + q^{i/2+1}p^s − 1` for `T2`, `4q^{(i+1)/2} − 1` for `E`.
pub fn paper_capacity(step: &TowerStep) -> QuadraticSurd {
    match step.tower {
        TowerId::E => &hp(3, step.i as i64 + 1).scale(&rat(4)) - &QuadraticSurd::from(1),
        _ => {
            let ps = pow(2, step.s);
            QuadraticSurd::integer(pow(4, step.i + 1) * &ps + pow(2, step.i) * 4 * &ps - 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaGenus {
    /// The formula value, possibly negative for small `i`.
    pub raw: BigInt,
    /// `max(raw, 0)`.
    pub value: BigInt,
    pub clamped: bool,
}

/// Lower bound on the genus increase to the next step.
///
/// `T2`: `p^s(2q^i − 3q^{i/2})`; `E`: `(q − 1)(q^{i+1} − q^{⌈i/2⌉})`.
pub fn delta_genus_lower(step: &TowerStep) -> Result<DeltaGenus> {
    require_bounded_tower(step)?;
    let raw: BigInt = match step.tower {
        TowerId::E => (pow(3, step.i + 1) - pow(3, step.i.div_ceil(2))) * 2,
        _ => pow(2, step.s) * (pow(4, step.i) * 2 - pow(2, step.i) * 3),
    };
    let clamped = raw.is_negative();
    let value = if clamped { BigInt::zero() } else { raw.clone() };
    Ok(DeltaGenus { raw, value, clamped })
}

/// `min(Δg lower bound, ⌊placecount_lower/2⌋)`.
///
/// Paper mode returns the value the argument asserts for this minimum: the genus
/// term for `T2`, and for `E` the genus term once `i ≥ 2`.
pub fn capacity_slack(step: &TowerStep, mode: Mode) -> Result<BigInt> {
    let delta = delta_genus_lower(step)?.value;
    let half = placecount_lower(step)? / 2;
    let paper_takes_delta = step.tower == TowerId::T2 || step.i >= 2;
    Ok(match mode {
        Mode::Paper if paper_takes_delta => delta,
        _ => delta.min(half),
    })
}

/// Right-hand side of the genus condition: `b^{(n−1)/2}(√b − 1)`.
pub fn condition_a_rhs(b: u64, n: u64) -> QuadraticSurd {
    let e = n as i64 - 1;
    &hp(b, e + 1) - &hp(b, e)
}

/// `2g + 1 ≤ b^{(n−1)/2}(√b − 1)` with `b` the constant field size.
pub fn condition_a(step: &TowerStep, n: u64, g: &BigInt) -> (QuadraticSurd, QuadraticSurd, bool) {
    let lhs = QuadraticSurd::integer(g * 2 + 1);
    let rhs = condition_a_rhs(step.tower.constant_field_order(), n);
    let holds = lhs <= rhs;
    (lhs, rhs, holds)
}

#[cfg(test)]
mod tests {
    use super::super::surd::ratio;
    use super::*;

    fn t2(i: u32, s: u32) -> TowerStep {
        TowerStep::new(TowerId::T2, i, s).unwrap()
    }

    fn e(i: u32) -> TowerStep {
        TowerStep::new(TowerId::E, i, 0).unwrap()
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_exact_t0(4, 1), BigInt::from(9));
        assert_eq!(genus_exact_t0(4, 2), BigInt::from(45));
        assert_eq!(genus_exact_t0(3, 0), BigInt::from(0));
        assert_eq!(genus_exact_t0(4, 3), BigInt::from(225));
        assert_eq!(genus_sandwich_lower(4, 3), QuadraticSurd::from(105));
        assert_eq!(genus_tight_upper(4, 3), QuadraticSurd::from(225));
    }

    #[test]
    fn sublevel_bounds() {
        let d = step_data(&t2(1, 1));
        assert_eq!(sublevel_upper_a(1, 1), ratio(45, 2));
        assert_eq!(d.genus_upper, QuadraticSurd::rational(ratio(45, 2)));
        assert_eq!(d.genus_exact, Some(BigInt::from(21)));
        assert!(d.genus_lower < QuadraticSurd::from(21));
        assert_eq!(d.exact_counts, Some([4, 2, 25]));
        assert_eq!(step_data(&t2(0, 0)).genus_exact, Some(BigInt::zero()));
        assert_eq!(t2(0, 2), t2(1, 0));
    }

    #[test]
    fn place_counts() {
        assert_eq!(placecount_lower(&t2(1, 0)).unwrap(), BigInt::from(48));
        assert_eq!(step_data(&t2(1, 0)).certified_place_sum(), Some(BigInt::from(56)));
        assert_eq!(placecount_lower(&e(2)).unwrap(), BigInt::from(54));
        assert_eq!(rational_places_exact_t0(4, 3).unwrap(), BigInt::from(800));
        assert_eq!(rational_places_exact_t0(3, 3).unwrap(), BigInt::from(168));
        assert_eq!(rational_places_exact_t0(4, 2).unwrap_err(), Error::StepTooSmall);
    }

    #[test]
    fn capacities() {
        assert_eq!(step_capacity(&t2(2, 0), Mode::Paper).unwrap(), BigInt::from(79));
        assert_eq!(step_capacity(&e(3), Mode::Paper).unwrap(), BigInt::from(35));
        // 4·3^{3/2} − 1 ≈ 19.78.
        assert_eq!(step_capacity(&e(2), Mode::Paper).unwrap(), BigInt::from(20));
        // ⌊(54 − 2·16 + 1)/2⌋.
        assert_eq!(step_capacity(&e(2), Mode::Certified).unwrap(), BigInt::from(11));
        // Stated counts: ⌊(56 − 18 + 1)/2⌋.
        assert_eq!(step_capacity(&t2(1, 0), Mode::Certified).unwrap(), BigInt::from(19));
    }

    #[test]
    fn deltas_and_slack() {
        assert_eq!(delta_genus_lower(&t2(1, 0)).unwrap().value, BigInt::from(2));
        assert_eq!(delta_genus_lower(&e(2)).unwrap().value, BigInt::from(48));
        let d0 = delta_genus_lower(&t2(0, 0)).unwrap();
        assert_eq!((d0.raw, d0.value, d0.clamped), (BigInt::from(-1), BigInt::zero(), true));
        assert_eq!(capacity_slack(&t2(1, 0), Mode::Certified).unwrap(), BigInt::from(2));
        assert_eq!(capacity_slack(&e(2), Mode::Certified).unwrap(), BigInt::from(27));
        assert_eq!(capacity_slack(&e(2), Mode::Paper).unwrap(), BigInt::from(48));
        assert_eq!(capacity_slack(&e(4), Mode::Certified).unwrap(), BigInt::from(243));
    }

    #[test]
    fn condition_a_for_g3() {
        let (lhs, rhs, ok) = condition_a(&e(3), 13, &BigInt::from(64));
        assert_eq!(lhs, QuadraticSurd::from(129));
        assert_eq!(rhs, QuadraticSurd::new(rat(-729), rat(729), 3));
        assert!(ok);
    }

    #[test]
    fn step_order() {
        assert_eq!(t2(0, 0).next(), t2(0, 1));
        assert_eq!(t2(0, 1).next(), t2(1, 0));
        assert_eq!(t2(1, 0).prev(), Some(t2(0, 1)));
        assert_eq!(e(3).prev(), Some(e(2)));
        assert_eq!(e(0).prev(), None);
        assert_eq!(t2(1, 1).label(), "H_{1,1}");
        assert!(TowerStep::new(TowerId::E, 1, 1).is_err());
    }
}
