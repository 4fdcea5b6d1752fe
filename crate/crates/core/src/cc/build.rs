//! Flattening a plan into an explicit symmetric bilinear algorithm.

use std::fmt;

use super::base::{base_algorithm_for, dot};
use super::plan::{check_conditions, ev_2d, ev_q, EvaluationPlan};
use crate::error::{Error, Result};
use crate::ff::{FieldSpec, Polynomial};
use crate::function_field::{evaluation_matrix, riemann_roch_basis, Place};
use crate::linalg::Matrix;

/// `φ(x) φ(y) w` for one rank-one term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearTerm {
    /// Linear form on the coordinates of `F_{q^n}` over `F_q`.
    pub phi: Vec<u32>,
    /// Output element of `F_{q^n}`, as coordinates.
    pub w: Vec<u32>,
}

/// A symmetric algorithm `xy = Σ_l φ_l(x) φ_l(y) w_l` for `F_{q^n} = F_q[x]/(Q)`.
///
/// Elements of `F_{q^n}` are coordinate vectors on `1, x, …, x^{n-1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricBilinearAlgorithm {
    pub field: FieldSpec,
    pub n: usize,
    pub modulus: Polynomial,
    pub terms: Vec<BilinearTerm>,
    pub plan: Option<EvaluationPlan>,
}

impl fmt::Debug for SymmetricBilinearAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetricBilinearAlgorithm")
            .field("field", &self.field)
            .field("n", &self.n)
            .field("Q", &self.modulus)
            .field("rank", &self.rank())
            .finish()
    }
}

impl SymmetricBilinearAlgorithm {
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    fn check_element(&self, x: &[u32]) -> Result<()> {
        if x.len() != self.n || x.iter().any(|&c| c >= self.field.order()) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// All `φ_l(x)`.
    pub fn forms_at(&self, x: &[u32]) -> Vec<u32> {
        self.terms.iter().map(|t| dot(&self.field, &t.phi, x)).collect()
    }

    /// `Σ_l a_l b_l w_l` from precomputed form values.
    pub(crate) fn combine(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = vec![0; self.n];
        for ((t, &x), &y) in self.terms.iter().zip(a).zip(b) {
            let s = f.mul(x, y);
            if s == 0 {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(&t.w) {
                if w != 0 {
                    *o = f.add(*o, f.mul(s, w));
                }
            }
        }
        out
    }
}

pub fn multiply_with(alg: &SymmetricBilinearAlgorithm, x: &[u32], y: &[u32]) -> Result<Vec<u32>> {
    alg.check_element(x)?;
    alg.check_element(y)?;
    Ok(alg.combine(&alg.forms_at(x), &alg.forms_at(y)))
}

/// Builds the algorithm of a plan.
///
/// `x ∈ F_{q^n}` is lifted to `f ∈ L(D)` through the inverse of `Ev_Q`; the forms
/// evaluate the local expansions of `f` and feed them to each place's base
/// algorithm. The product `fg ∈ L(2D)` is recovered from `2n − 1` independent
/// evaluation rows and reduced modulo `Q`, which gives the outputs.
pub fn build_algorithm(plan: &EvaluationPlan) -> Result<SymmetricBilinearAlgorithm> {
    let report = check_conditions(plan);
    if !report.all_pass() {
        return Err(Error::ConditionsNotMet(report.failures().join(", ")));
    }
    let field = &plan.field;
    let n = plan.n;
    let m = 2 * n - 1;

    let mq = ev_q(plan, &plan.divisor)?;
    let mq_inv = mq.inverse().ok_or_else(|| Error::ConditionsNotMet("Ev_Q singular".into()))?;
    let basis_d = riemann_roch_basis(field, &plan.divisor);
    let lift = evaluation_matrix(field, &basis_d.elements, &plan.places)?.mul(&mq_inv);

    let e2 = ev_2d(plan)?;
    let rows = e2.independent_rows();
    debug_assert_eq!(rows.len(), m);
    let e2_inv = e2
        .select_rows(&rows)
        .inverse()
        .ok_or_else(|| Error::ConditionsNotMet("Ev_P not injective".into()))?;
    let mq2 = ev_q(plan, &plan.divisor.scale(2))?;
    let partial = mq2.mul(&e2_inv);
    let mut recon = Matrix::zeros(field, n, e2.rows());
    for (i, &r) in rows.iter().enumerate() {
        for c in 0..n {
            recon.set(c, r, partial.get(c, i));
        }
    }

    let mut terms = Vec::new();
    let mut offset = 0;
    for (place, u) in &plan.places {
        let modulus = match place {
            Place::Finite(p) => p.clone(),
            Place::Infinite => Polynomial::x(field),
        };
        let base = base_algorithm_for(&modulus, *u)?;
        let len = place.degree() * u;
        let block: Vec<usize> = (offset..offset + len).collect();
        let lift_block = lift.select_rows(&block);
        let recon_block = recon.select_columns(&block);
        for t in &base.terms {
            terms.push(BilinearTerm {
                phi: lift_block.vec_mul(&t.form),
                w: recon_block.mul_vec(&t.output),
            });
        }
        offset += len;
    }
    Ok(SymmetricBilinearAlgorithm {
        field: field.clone(),
        n,
        modulus: plan.q_place.clone(),
        terms,
        plan: Some(plan.clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::plan::{predicted_rank, select_plan, Strategy};
    use crate::ff::make_field;

    #[test]
    fn f8_algorithm_multiplies() {
        let f2 = make_field(2, 1, None).unwrap();
        let plan = select_plan(&f2, 3, 4, Strategy::Default).unwrap();
        let alg = build_algorithm(&plan).unwrap();
        assert_eq!(alg.rank(), predicted_rank(&plan).unwrap());
        assert_eq!(alg.rank(), 7);
        let a = [0, 1, 0];
        let a2 = [0, 0, 1];
        // Q = x^3 + x + 1, so a^3 = a + 1.
        assert_eq!(multiply_with(&alg, &a, &a2).unwrap(), vec![1, 1, 0]);
        assert_eq!(multiply_with(&alg, &a, &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(multiply_with(&alg, &a, &[1, 0, 0]).unwrap(), a.to_vec());
        assert_eq!(multiply_with(&alg, &a, &[0, 2, 0]).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn rejects_failing_plan() {
        let f2 = make_field(2, 1, None).unwrap();
        let mut plan = select_plan(&f2, 3, 4, Strategy::Default).unwrap();
        plan.places.pop();
        assert!(matches!(build_algorithm(&plan), Err(Error::ConditionsNotMet(_))));
    }
}
