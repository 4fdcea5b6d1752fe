use proptest::prelude::*;
use symrank::ff::{first_irreducible, FieldSpec, Polynomial};
use symrank::function_field::{
    evaluate_at_q, local_expansion, places_of_degree, riemann_roch_basis, Divisor, Place, RationalFunction,
};
use symrank::linalg::Matrix;

fn field(q: u64) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

fn poly(f: &FieldSpec, coeffs: &[u32]) -> Polynomial {
    Polynomial::from_coeffs(f, coeffs.iter().map(|c| c % f.order()).collect()).unwrap()
}

fn some_places(f: &FieldSpec) -> Vec<Place> {
    (1..=3).flat_map(|k| places_of_degree(f, k)).collect()
}

fn divisor_strategy() -> impl Strategy<Value = (u64, Vec<(prop::sample::Index, i64)>)> {
    (
        prop::sample::select(vec![2u64, 3]),
        prop::collection::vec((any::<prop::sample::Index>(), -4i64..=4), 0..=4),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn riemann_roch_dimension((q, raw) in divisor_strategy()) {
        let f = field(q);
        let places = some_places(&f);
        let d = Divisor::from_terms(raw.iter().map(|(i, a)| (places[i.index(places.len())].clone(), *a)));
        prop_assume!(d.degree().abs() <= 12);
        let basis = riemann_roch_basis(&f, &d);
        prop_assert_eq!(basis.dim() as i64, (d.degree() + 1).max(0));
        for g in &basis.elements {
            prop_assert!(g.in_riemann_roch_space(&d));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn local_expansion_is_linear(
        q in prop::sample::select(vec![2u64, 3, 4]),
        a in prop::collection::vec(0u32..4, 0..=10),
        b in prop::collection::vec(0u32..4, 0..=10),
        den in prop::collection::vec(0u32..4, 1..=4),
        pick in any::<prop::sample::Index>(),
        u in 1usize..=3,
    ) {
        let f = field(q);
        let places = some_places(&f);
        let place = &places[pick.index(places.len())];
        let den = poly(&f, &den);
        prop_assume!(!den.is_zero());
        let x = RationalFunction::new(poly(&f, &a), den.clone()).unwrap();
        let y = RationalFunction::new(poly(&f, &b), den).unwrap();
        let (ex, ey) = match (local_expansion(&x, place, u), local_expansion(&y, place, u)) {
            (Ok(ex), Ok(ey)) => (ex, ey),
            _ => return Err(TestCaseError::reject("pole at the place")),
        };
        let sum = local_expansion(&x.add(&y).unwrap(), place, u).unwrap();
        let expected: Vec<u32> = ex
            .flatten()
            .iter()
            .zip(ey.flatten())
            .map(|(&s, t)| {
                let s = f.element(s).unwrap();
                s.add(&f.element(t).unwrap()).unwrap().value()
            })
            .collect();
        prop_assert_eq!(sum.flatten(), expected);
    }
}

#[test]
fn evaluation_at_q_is_bijective_on_low_degree() {
    for q in [2u64, 3, 4] {
        let f = field(q);
        for n in 1..=12usize {
            let q_place = first_irreducible(&f, n).unwrap();
            let basis = riemann_roch_basis(&f, &Divisor::single(Place::Infinite, n as i64 - 1));
            assert_eq!(basis.dim(), n);
            let columns: Vec<Vec<u32>> = basis.elements.iter().map(|g| evaluate_at_q(g, &q_place).unwrap()).collect();
            let m = Matrix::from_columns(&f, n, &columns);
            assert_eq!(m.rank(), n, "q={q} n={n}");
            // Each basis element is a monomial of degree < n, so the matrix is a permutation.
            for c in &columns {
                assert_eq!(c.iter().filter(|&&v| v != 0).count(), 1);
            }
        }
    }
}
