use proptest::prelude::*;
use symrank::ff::{
    enumerate_irreducibles, field_arith, is_irreducible, make_field, necklace_count, poly_divmod, reconstruct,
    residue_coords, FieldOp, FieldSpec, Polynomial,
};

fn field(q: u64) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

fn poly(f: &FieldSpec, coeffs: &[u32]) -> Polynomial {
    let order = f.order();
    Polynomial::from_coeffs(f, coeffs.iter().map(|c| c % order).collect()).unwrap()
}

#[test]
fn irreducible_counts_up_to_degree_eight() {
    for q in [2u64, 3] {
        let f = field(q);
        for k in 1..=8usize {
            let list = enumerate_irreducibles(&f, k);
            assert_eq!(list.len() as u64, necklace_count(q, k as u32), "q={q} k={k}");
            let mut seen = std::collections::HashSet::new();
            for p in &list {
                assert!(p.is_monic() && p.degree() == Some(k));
                assert!(seen.insert(p.coeffs().to_vec()));
            }
            // The per-polynomial test is slower; spot-check it on the smaller degrees.
            if k <= 6 {
                assert!(list.iter().all(|p| is_irreducible(p).unwrap()));
            }
        }
    }
}

#[test]
fn field_axioms_on_every_pair_up_to_81() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81] {
        let f = field(q);
        let elems: Vec<_> = f.elements().collect();
        for a in &elems {
            if !a.is_zero() {
                let inv = field_arith(a, a, FieldOp::Inv).unwrap();
                assert_eq!(a.mul(&inv).unwrap(), f.one());
            }
            for b in &elems {
                // One fixed third operand per pair keeps this quadratic.
                let c = &elems[(a.value() as usize * 7 + b.value() as usize * 3 + 1) % elems.len()];
                let lhs = a.mul(&b.add(c).unwrap()).unwrap();
                let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "q={q}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn residue_coords_reconstruct(
        q in prop::sample::select(vec![2u64, 3, 4]),
        coeffs in prop::collection::vec(0u32..4, 0..=21),
        k in 1usize..=3,
        pick in any::<prop::sample::Index>(),
        u in 1usize..=3,
    ) {
        let f = field(q);
        let g = poly(&f, &coeffs);
        let irr = enumerate_irreducibles(&f, k);
        let p = &irr[pick.index(irr.len())];
        let back = reconstruct(&residue_coords(&g, p, u).unwrap(), p);
        let m = p.pow(u as u32);
        prop_assert_eq!(back, g.rem(&m).unwrap());
    }
}

proptest! {
    #[test]
    fn divmod_is_unique(
        q in prop::sample::select(vec![2u64, 3, 5, 9]),
        a in prop::collection::vec(0u32..9, 0..=20),
        b in prop::collection::vec(0u32..9, 1..=8),
    ) {
        let f = field(q);
        let num = poly(&f, &a);
        let den = poly(&f, &b);
        prop_assume!(!den.is_zero());
        let (quo, rem) = poly_divmod(&num, &den).unwrap();
        if let Some(dr) = rem.degree() {
            prop_assert!(dr < den.degree().unwrap());
        }
        let recombined = quo.mul(&den).unwrap().add(&rem).unwrap();
        prop_assert!(num.sub(&recombined).unwrap().is_zero());
    }

    #[test]
    fn large_field_distributivity(
        (p, k) in prop::sample::select(vec![(2u64, 8u32), (3, 5), (5, 3), (2, 12)]),
        xs in prop::array::uniform3(any::<u32>()),
    ) {
        let f = make_field(p, k, None).unwrap();
        let [a, b, c] = xs.map(|x| f.element(x % f.order()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), f.one());
        }
    }
}
