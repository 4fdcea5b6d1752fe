use num::bigint::Sign;
use num::{BigInt, BigRational, Signed, Zero};
use proptest::prelude::*;
use symrank::tower::{
    condition_a, genus_exact_t0, genus_sandwich_lower, genus_sandwich_upper, genus_tight_upper, parse_known_values,
    pointwise_bound, select_step, step_capacity, step_data, Mode, QuadraticSurd, TowerId, TowerStep,
};

/// Sign of `a + b sqrt(r)` from a 100-digit truncation of `sqrt(r)`, or `None`
/// when the enclosing interval straddles zero.
fn sign_by_digits(a: &BigRational, b: &BigRational, r: u64) -> Option<Sign> {
    let scale = BigInt::from(10).pow(100);
    let lo = (BigInt::from(r) * &scale * &scale).sqrt();
    let hi = &lo + 1;
    let at = |s: &BigInt| a + b * BigRational::new(s.clone(), scale.clone());
    let (x, y) = (at(&lo), at(&hi));
    let sign = |v: &BigRational| {
        if v.is_zero() {
            Sign::NoSign
        } else if v.is_positive() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    };
    (sign(&x) == sign(&y)).then(|| sign(&x))
}

fn ordering_of(s: Sign) -> std::cmp::Ordering {
    match s {
        Sign::Minus => std::cmp::Ordering::Less,
        Sign::NoSign => std::cmp::Ordering::Equal,
        Sign::Plus => std::cmp::Ordering::Greater,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn surd_sign_matches_high_precision(
        an in -10_000i64..10_000, ad in 1i64..200,
        bn in -10_000i64..10_000, bd in 1i64..200,
        r in prop::sample::select(vec![2u64, 3, 5, 6, 7]),
    ) {
        let a = BigRational::new(an.into(), ad.into());
        let b = BigRational::new(bn.into(), bd.into());
        let x = QuadraticSurd::new(a.clone(), b.clone(), r);
        if b.is_zero() {
            prop_assert_eq!(x.signum(), a.cmp(&BigRational::zero()));
        } else if let Some(s) = sign_by_digits(&a, &b, r) {
            prop_assert_eq!(x.signum(), ordering_of(s));
        }
    }
}

#[test]
fn genus_sandwich_for_three_and_four() {
    for q in [3u64, 4] {
        for i in 1..=30 {
            let g = QuadraticSurd::integer(genus_exact_t0(q, i));
            assert!(genus_sandwich_lower(q, i) < g, "q={q} i={i}");
            assert!(g <= genus_sandwich_upper(q, i), "q={q} i={i}");
            assert!(g <= genus_tight_upper(q, i), "q={q} i={i}");
        }
    }
}

fn steps(tower: TowerId, count: usize) -> Vec<TowerStep> {
    let mut out = vec![TowerStep::new(tower, 0, 0).unwrap()];
    while out.len() < count {
        let next = out.last().unwrap().next();
        out.push(next);
    }
    out
}

#[test]
fn certified_capacity_is_the_largest_fitting_degree() {
    for tower in [TowerId::T2, TowerId::E] {
        for step in steps(tower, 40) {
            let d = step_data(&step);
            let cap = step_capacity(&step, Mode::Certified).unwrap();
            let sum = d.certified_place_sum().unwrap();
            let g = d.genus_used();
            let need = |m: &BigInt| m * 2 + &g * 2 - 1;
            if cap.is_positive() {
                assert!(need(&cap) <= sum, "{}", step.label());
            } else {
                assert!(cap.is_zero());
            }
            assert!(need(&(&cap + 1)) > sum, "{}", step.label());
        }
    }
}

/// `2g + 1 <= b^{(n-1)/2} (sqrt(b) - 1)`, decided by squaring.
fn condition_a_by_squares(b: u64, n: u64, g: &BigInt) -> bool {
    let l = g * 2 + 1;
    let b = BigInt::from(b);
    if n % 2 == 1 {
        let c = b.pow(((n - 1) / 2) as u32);
        let t = &l + &c;
        &t * &t <= &c * &c * &b
    } else {
        let c = b.pow(((n - 2) / 2) as u32);
        let t: BigInt = &c * &b - &l;
        !t.is_negative() && &c * &c * &b <= &t * &t
    }
}

fn fits(step: &TowerStep, n: u64) -> bool {
    let d = step_data(step);
    let g = d.genus_used();
    let b = step.tower.constant_field_order();
    let (_, _, holds) = condition_a(step, n, &g);
    assert_eq!(holds, condition_a_by_squares(b, n, &g), "{} n={n}", step.label());
    holds && d.certified_place_sum().unwrap() >= BigInt::from(2 * n) + &g * 2 - 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn selected_step_is_the_first_that_fits(q in 2u64..=3, n in 13u64..5000) {
        let min = if q == 2 { 19 } else { 13 };
        prop_assume!(n >= min);
        let step = select_step(q, n).unwrap();
        prop_assert!(fits(&step, n));
        if let Some(prev) = step.prev() {
            prop_assert!(!fits(&prev, n));
        }
    }

    #[test]
    fn bound_reports_are_sound(q in 2u64..=3, n in 13u64..5000, paper in any::<bool>()) {
        let min = if q == 2 { 19 } else { 13 };
        prop_assume!(n >= min);
        let mode = if paper { Mode::Paper } else { Mode::Certified };
        let r = pointwise_bound(q, n, mode, None).unwrap();
        prop_assert!(r.bound_floor >= BigInt::from(2 * n - 1));
        prop_assert!(r.consistent());
        for e in &r.trace {
            prop_assert!(e.check.reverify());
        }
    }

    #[test]
    fn table_values_take_precedence(q in 2u64..=3, n in 2u64..60, value in 0u64..1000) {
        let known = parse_known_values(&format!(r#"{{"{n}": {{"value": {value}, "source": "test"}}}}"#)).unwrap();
        let r = pointwise_bound(q, n, Mode::Certified, Some(&known)).unwrap();
        prop_assert_eq!(r.bound_floor, BigInt::from(value));
    }
}
