//! Checking an algorithm against schoolbook multiplication modulo `Q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::base::digits;
use super::build::SymmetricBilinearAlgorithm;
use crate::ff::FieldSpec;

/// Random samples are split into this many independently seeded shards, so the
/// sampled pairs do not depend on the number of worker threads.
pub const SHARDS: u64 = 16;

/// Exhaustive checking is the default up to this many pairs.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;

/// Failing pairs kept in the report.
const KEPT_FAILURES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Random { count: u64, seed: u64 },
}

impl VerifyMode {
    /// Exhaustive when `q^{2n}` is within [`EXHAUSTIVE_LIMIT`], random otherwise.
    pub fn auto(alg: &SymmetricBilinearAlgorithm, count: u64, seed: u64) -> VerifyMode {
        match pair_count(alg) {
            Some(p) if p <= EXHAUSTIVE_LIMIT => VerifyMode::Exhaustive,
            _ => VerifyMode::Random { count, seed },
        }
    }
}

fn pair_count(alg: &SymmetricBilinearAlgorithm) -> Option<u64> {
    (alg.field.order() as u64).checked_pow(2 * alg.n as u32)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub pairs_checked: u64,
    pub failure_count: u64,
    /// The first few failing pairs in sample order.
    pub failures: Vec<(Vec<u32>, Vec<u32>)>,
    pub commutativity_failures: u64,
    pub rank: usize,
    /// `2n − 1`.
    pub rank_floor: usize,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failure_count == 0 && self.commutativity_failures == 0 && self.rank >= self.rank_floor
    }
}

/// Schoolbook product of two coordinate vectors modulo the monic `q_coeffs`.
pub(crate) fn mul_mod(f: &FieldSpec, q_coeffs: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len();
    let mut prod = vec![0u32; 2 * n - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.add(prod[i + j], f.mul(x, y));
        }
    }
    for top in (n..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (j, &m) in q_coeffs[..n].iter().enumerate() {
            prod[top - n + j] = f.sub(prod[top - n + j], f.mul(c, m));
        }
    }
    prod.truncate(n);
    prod
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    failures: u64,
    kept: Vec<(Vec<u32>, Vec<u32>)>,
    noncommuting: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.failures += other.failures;
        self.noncommuting += other.noncommuting;
        for f in other.kept {
            if self.kept.len() < KEPT_FAILURES {
                self.kept.push(f);
            }
        }
        self
    }

    fn check(&mut self, alg: &SymmetricBilinearAlgorithm, q: &[u32], x: &[u32], y: &[u32], fx: &[u32], fy: &[u32]) {
        self.pairs += 1;
        let xy = alg.combine(fx, fy);
        let yx = alg.combine(fy, fx);
        if xy != yx {
            self.noncommuting += 1;
        }
        if xy != mul_mod(&alg.field, q, x, y) {
            self.failures += 1;
            if self.kept.len() < KEPT_FAILURES {
                self.kept.push((x.to_vec(), y.to_vec()));
            }
        }
    }
}

pub fn verify_algorithm(alg: &SymmetricBilinearAlgorithm, mode: VerifyMode) -> VerificationReport {
    let q_coeffs = alg.modulus.coeffs().to_vec();
    let qn = alg.field.order() as u64;
    let n = alg.n;
    let tally = match mode {
        VerifyMode::Exhaustive => {
            let size = qn.pow(n as u32);
            let elems: Vec<Vec<u32>> = (0..size).map(|i| digits(i, qn, n)).collect();
            let forms: Vec<Vec<u32>> = elems.par_iter().map(|x| alg.forms_at(x)).collect();
            (0..elems.len())
                .into_par_iter()
                .map(|i| {
                    let mut t = Tally::default();
                    for j in 0..elems.len() {
                        t.check(alg, &q_coeffs, &elems[i], &elems[j], &forms[i], &forms[j]);
                    }
                    t
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold(Tally::default(), Tally::merge)
        }
        VerifyMode::Random { count, seed } => (0..SHARDS)
            .into_par_iter()
            .map(|shard| {
                let share = count / SHARDS + u64::from(shard < count % SHARDS);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(shard);
                let mut t = Tally::default();
                for _ in 0..share {
                    let x: Vec<u32> = (0..n).map(|_| rng.gen_range(0..qn as u32)).collect();
                    let y: Vec<u32> = (0..n).map(|_| rng.gen_range(0..qn as u32)).collect();
                    let (fx, fy) = (alg.forms_at(&x), alg.forms_at(&y));
                    t.check(alg, &q_coeffs, &x, &y, &fx, &fy);
                }
                t
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Tally::default(), Tally::merge),
    };
    VerificationReport {
        mode,
        pairs_checked: tally.pairs,
        failure_count: tally.failures,
        failures: tally.kept,
        commutativity_failures: tally.noncommuting,
        rank: alg.rank(),
        rank_floor: 2 * n - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::{build_algorithm, select_plan, Strategy};
    use crate::ff::make_field;

    #[test]
    fn f8_exhaustive_and_tampering() {
        let f2 = make_field(2, 1, None).unwrap();
        let alg = build_algorithm(&select_plan(&f2, 3, 4, Strategy::Default).unwrap()).unwrap();
        let r = verify_algorithm(&alg, VerifyMode::Exhaustive);
        assert_eq!((r.pairs_checked, r.failure_count), (64, 0));
        assert!(r.ok());

        let mut bad = alg.clone();
        let l = bad.terms.iter().position(|t| t.w.iter().any(|&c| c != 0)).unwrap();
        bad.terms[l].w = vec![0; 3];
        let r = verify_algorithm(&bad, VerifyMode::Exhaustive);
        assert!(r.failure_count > 0 && !r.ok());
    }

    #[test]
    fn random_mode_is_reproducible() {
        let f3 = make_field(3, 1, None).unwrap();
        let alg = build_algorithm(&select_plan(&f3, 5, 2, Strategy::Default).unwrap()).unwrap();
        let mode = VerifyMode::Random { count: 1000, seed: 7 };
        let a = verify_algorithm(&alg, mode);
        assert_eq!(a, verify_algorithm(&alg, mode));
        assert_eq!(a.pairs_checked, 1000);
        assert!(a.ok());
    }
}
