//! Small symmetric bilinear algorithms used at each evaluation place.
//!
//! A place of degree `k` evaluated with multiplicity `u` needs the product in
//! `F_{q^k}[t]/(t^u)`. That product is assembled from two integer schemes: a
//! truncated-product scheme over any commutative ring (the outer `t`-layer) and a
//! Karatsuba polynomial product followed by reduction modulo the place polynomial
//! (the inner `F_{q^k}` layer).

use crate::error::{Error, Result};
use crate::ff::{first_irreducible, FieldSpec, Polynomial};

/// A symmetric bilinear scheme with integer coefficients:
/// `a ⋆ b = Σ_l form_l(a) form_l(b) output_l`.
#[derive(Debug, Clone)]
struct IntScheme {
    forms: Vec<Vec<i64>>,
    outputs: Vec<Vec<i64>>,
}

/// Karatsuba scheme for the full product of two polynomials with `k` coefficients.
fn poly_product_scheme(k: usize) -> Option<IntScheme> {
    match k {
        1 => Some(IntScheme {
            forms: vec![vec![1]],
            outputs: vec![vec![1]],
        }),
        2 => Some(IntScheme {
            forms: vec![vec![1, 0], vec![1, 1], vec![0, 1]],
            outputs: vec![vec![1, -1, 0], vec![0, 1, 0], vec![0, -1, 1]],
        }),
        4 => {
            // Split a = A0 + x^2 A1 and run Karatsuba on the halves with the
            // two-coefficient scheme inside.
            let outer = poly_product_scheme(2)?;
            let inner = poly_product_scheme(2)?;
            let mut forms = Vec::new();
            let mut outputs = Vec::new();
            for (of, oo) in outer.forms.iter().zip(&outer.outputs) {
                for (inf, ino) in inner.forms.iter().zip(&inner.outputs) {
                    let mut form = vec![0; 4];
                    for (h, &lam) in of.iter().enumerate() {
                        for (c, &psi) in inf.iter().enumerate() {
                            form[2 * h + c] += lam * psi;
                        }
                    }
                    let mut out = vec![0; 7];
                    for (h, &mu) in oo.iter().enumerate() {
                        for (c, &v) in ino.iter().enumerate() {
                            out[2 * h + c] += mu * v;
                        }
                    }
                    forms.push(form);
                    outputs.push(out);
                }
            }
            Some(IntScheme { forms, outputs })
        }
        _ => None,
    }
}

/// Scheme for the product in `R[t]/(t^u)` over any commutative ring `R`.
fn truncated_scheme(u: usize) -> Option<IntScheme> {
    match u {
        1 => Some(IntScheme {
            forms: vec![vec![1]],
            outputs: vec![vec![1]],
        }),
        2 => Some(IntScheme {
            forms: vec![vec![1, 0], vec![1, 1], vec![0, 1]],
            outputs: vec![vec![1, -1], vec![0, 1], vec![0, -1]],
        }),
        3 => Some(IntScheme {
            forms: vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 1, 0],
                vec![1, 0, 1],
            ],
            outputs: vec![
                vec![1, -1, -1],
                vec![0, -1, 1],
                vec![0, 0, -1],
                vec![0, 1, 0],
                vec![0, 0, 1],
            ],
        }),
        _ => None,
    }
}

/// Rank of the base algorithm for residue degree `k` and multiplicity `u`.
pub fn base_rank(k: usize, u: usize) -> Result<usize> {
    let mu = match k {
        1 => 1,
        2 => 3,
        4 => 9,
        _ => return Err(Error::UnsupportedBase { k, u }),
    };
    let m = match u {
        1 => 1,
        2 => 3,
        3 => 5,
        _ => return Err(Error::UnsupportedBase { k, u }),
    };
    Ok(mu * m)
}

/// One term `(form, output)` of a base algorithm over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseTerm {
    pub form: Vec<u32>,
    pub output: Vec<u32>,
}

/// A symmetric algorithm for multiplication in `(F_q[x]/(P))[t]/(t^u)`.
///
/// Inputs and outputs are flattened as in [`crate::ff::ResidueRingCoords::flatten`].
#[derive(Debug, Clone)]
pub struct BaseAlgorithm {
    pub k: usize,
    pub u: usize,
    /// The residue-field modulus `P`, of degree `k`.
    pub modulus: Polynomial,
    pub terms: Vec<BaseTerm>,
}

impl BaseAlgorithm {
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn field(&self) -> &FieldSpec {
        self.modulus.field()
    }

    /// Evaluates the algorithm on two flattened inputs.
    pub fn apply(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0; self.k * self.u];
        for t in &self.terms {
            let fa = dot(f, &t.form, a);
            let fb = dot(f, &t.form, b);
            let s = f.mul(fa, fb);
            if s == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(&t.output) {
                *o = f.add(*o, f.mul(s, v));
            }
        }
        out
    }

    /// Reference product in `(F_q[x]/(P))[t]/(t^u)`.
    pub fn reference_product(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field();
        let k = self.k;
        let coeff = |v: &[u32], j: usize| Polynomial::from_raw(f, v[j * k..(j + 1) * k].to_vec());
        let mut out = Vec::with_capacity(k * self.u);
        for j in 0..self.u {
            let mut acc = Polynomial::zero(f);
            for i in 0..=j {
                acc = acc.add_raw(&coeff(a, i).mul_raw(&coeff(b, j - i)));
            }
            out.extend(acc.rem_raw(&self.modulus).padded(k));
        }
        out
    }

    /// Checks the algorithm against [`Self::reference_product`] on every pair of inputs.
    pub fn verify_exhaustive(&self) -> bool {
        let q = self.field().order() as u64;
        let len = self.k * self.u;
        let total = q.pow(len as u32);
        let all: Vec<Vec<u32>> = (0..total).map(|i| digits(i, q, len)).collect();
        all.iter().all(|a| {
            all.iter()
                .all(|b| self.apply(a, b) == self.reference_product(a, b))
        })
    }
}

pub(crate) fn dot(f: &FieldSpec, a: &[u32], b: &[u32]) -> u32 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| if x == 0 || y == 0 { acc } else { f.add(acc, f.mul(x, y)) })
}

pub(crate) fn digits(mut i: u64, q: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (i % q) as u32;
        i /= q;
    }
    out
}

/// Base algorithm for a place with residue modulus `modulus` and multiplicity `u`.
pub fn base_algorithm_for(modulus: &Polynomial, u: usize) -> Result<BaseAlgorithm> {
    let f = modulus.field();
    let k = modulus.degree().unwrap_or(0);
    let (Some(inner), Some(outer)) = (poly_product_scheme(k), truncated_scheme(u)) else {
        return Err(Error::UnsupportedBase { k, u });
    };
    // Inner layer over F_q: Karatsuba forms, outputs reduced modulo the place polynomial.
    let inner_terms: Vec<(Vec<u32>, Vec<u32>)> = inner
        .forms
        .iter()
        .zip(&inner.outputs)
        .map(|(form, out)| {
            let form = form.iter().map(|&c| f.from_int(c)).collect();
            let out = Polynomial::from_ints(f, out).rem_raw(modulus).padded(k);
            (form, out)
        })
        .collect();
    let mut terms = Vec::with_capacity(inner_terms.len() * outer.forms.len());
    for (lam, mu) in outer.forms.iter().zip(&outer.outputs) {
        for (psi, v) in &inner_terms {
            let mut form = vec![0; k * u];
            let mut output = vec![0; k * u];
            for j in 0..u {
                let (l, m) = (f.from_int(lam[j]), f.from_int(mu[j]));
                for c in 0..k {
                    form[j * k + c] = f.mul(l, psi[c]);
                    output[j * k + c] = f.mul(m, v[c]);
                }
            }
            terms.push(BaseTerm { form, output });
        }
    }
    Ok(BaseAlgorithm {
        k,
        u,
        modulus: modulus.clone(),
        terms,
    })
}

/// Base algorithm for `(k, u)` with the default residue field `F_q[x]/(P)`,
/// `P` the smallest monic irreducible of degree `k`.
pub fn base_algorithm(field: &FieldSpec, k: usize, u: usize) -> Result<BaseAlgorithm> {
    base_rank(k, u)?;
    let modulus = first_irreducible(field, k)?;
    base_algorithm_for(&modulus, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn ranks_follow_the_table() {
        let f2 = make_field(2, 1, None).unwrap();
        for (k, u, r) in [(1, 1, 1), (2, 1, 3), (4, 1, 9), (1, 2, 3), (2, 2, 9), (4, 2, 27), (1, 3, 5)] {
            let alg = base_algorithm(&f2, k, u).unwrap();
            assert_eq!(alg.rank(), r, "k={k} u={u}");
            assert_eq!(base_rank(k, u).unwrap(), r);
        }
        assert_eq!(base_algorithm(&f2, 3, 1).unwrap_err(), Error::UnsupportedBase { k: 3, u: 1 });
        assert_eq!(base_algorithm(&f2, 1, 4).unwrap_err(), Error::UnsupportedBase { k: 1, u: 4 });
    }

    #[test]
    fn truncated_square_matches_the_textbook_formulas() {
        let f2 = make_field(2, 1, None).unwrap();
        let alg = base_algorithm(&f2, 1, 2).unwrap();
        // m1 = a0 b0, m2 = (a0 + a1)(b0 + b1), m3 = a1 b1.
        let forms: Vec<_> = alg.terms.iter().map(|t| t.form.clone()).collect();
        assert_eq!(forms, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        // c0 = m1, c1 = m2 - m1 - m3.
        let outs: Vec<_> = alg.terms.iter().map(|t| t.output.clone()).collect();
        assert_eq!(outs, vec![vec![1, 1], vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn exhaustive_small_tables() {
        let f2 = make_field(2, 1, None).unwrap();
        for (k, u) in [(1, 1), (2, 1), (4, 1), (1, 2), (2, 2), (4, 2), (1, 3), (2, 3)] {
            assert!(base_algorithm(&f2, k, u).unwrap().verify_exhaustive(), "F_2 k={k} u={u}");
        }
        let f3 = make_field(3, 1, None).unwrap();
        for (k, u) in [(1, 1), (2, 1), (1, 2), (2, 2), (1, 3)] {
            assert!(base_algorithm(&f3, k, u).unwrap().verify_exhaustive(), "F_3 k={k} u={u}");
        }
    }

    #[test]
    fn every_degree_two_modulus_works() {
        let f3 = make_field(3, 1, None).unwrap();
        for p in crate::ff::enumerate_irreducibles(&f3, 2) {
            assert!(base_algorithm_for(&p, 2).unwrap().verify_exhaustive(), "{p}");
        }
    }
}
