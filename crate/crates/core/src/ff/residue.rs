//! Coordinates of `F_q[x]/(p^u)` as truncated power series in `t = p(x)`.
//!
//! The ring `F_q[x]/(p^u)` is isomorphic to `F_{q^k}[t]/(t^u)` with `k = deg p`.
//! The isomorphism sends `t` to `p` and a residue class `c in F_q[x]/(p)` to its
//! Teichmüller lift `ω(c)`, the unique root of `X^{q^k} = X` above `c`. Using the
//! lift rather than the naive degree-`< k` representative keeps the map a ring
//! isomorphism, so products of expansions are expansions of products.

use super::field::FieldSpec;
use super::poly::{is_irreducible, Polynomial};
use crate::error::{Error, Result};

/// A class of `F_q[x]/(p^u)` written as `Σ_{j<u} ω(c_j) p^j`.
///
/// Each `c_j` lies in `F_{q^k} = F_q[x]/(p)` and is stored by its coordinates on
/// `1, x̄, …, x̄^{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRingCoords {
    pub k: usize,
    pub u: usize,
    pub coeffs: Vec<Vec<u32>>,
}

impl ResidueRingCoords {
    /// All `k·u` coordinates over `F_q`, ordered by power of `t` then residue coordinate.
    pub fn flatten(&self) -> Vec<u32> {
        self.coeffs.iter().flatten().copied().collect()
    }

    pub fn from_flat(k: usize, u: usize, flat: &[u32]) -> ResidueRingCoords {
        assert_eq!(flat.len(), k * u);
        ResidueRingCoords {
            k,
            u,
            coeffs: flat.chunks(k.max(1)).map(<[u32]>::to_vec).collect(),
        }
    }
}

/// `ω(c) mod p^u`: any lift of `c` raised to `q^{k j}` once `q^{k j} ≥ u`.
pub fn teichmuller_lift(c: &Polynomial, p: &Polynomial, u: usize) -> Polynomial {
    let field = p.field();
    let k = p.degree().expect("nonzero local parameter");
    let modulus = p.pow(u as u32);
    let c = c.rem_raw(p);
    if k == 1 || u == 1 {
        // Constants are fixed by Frobenius, and u = 1 needs no lift.
        return c;
    }
    let qk = (field.order() as u64).pow(k as u32);
    let mut reach = 1u64;
    let mut out = c;
    while reach < u as u64 {
        out = out.pow_mod(qk, &modulus).expect("nonzero modulus");
        reach = reach.saturating_mul(qk);
    }
    out
}

/// Local expansion of `f` in powers of the irreducible `p`, truncated at `p^u`.
pub fn residue_coords(f: &Polynomial, p: &Polynomial, u: usize) -> Result<ResidueRingCoords> {
    if f.field() != p.field() {
        return Err(Error::MixedFields);
    }
    match p.degree() {
        Some(d) if d >= 1 && p.is_monic() => {}
        _ => return Err(Error::ReducibleLocalParameter),
    }
    if !is_irreducible(p)? {
        return Err(Error::ReducibleLocalParameter);
    }
    if u == 0 {
        return Err(Error::InvalidModulus("multiplicity must be at least 1".into()));
    }
    Ok(residue_coords_unchecked(f, p, u))
}

/// [`residue_coords`] without validating `p`.
pub(crate) fn residue_coords_unchecked(f: &Polynomial, p: &Polynomial, u: usize) -> ResidueRingCoords {
    let k = p.degree().expect("nonzero local parameter");
    let modulus = p.pow(u as u32);
    let mut r = f.rem_raw(&modulus);
    let mut coeffs = Vec::with_capacity(u);
    for j in 0..u {
        let c = r.rem_raw(p);
        coeffs.push(c.padded(k));
        if j + 1 < u {
            let lifted = teichmuller_lift(&c, p, u - j);
            let (q, rest) = r.sub_raw(&lifted).divmod_raw(p).expect("nonzero divisor");
            debug_assert!(rest.is_zero());
            r = q;
        }
    }
    ResidueRingCoords { k, u, coeffs }
}

/// Inverse of [`residue_coords`]: `Σ ω(c_j) p^j mod p^u`.
pub fn reconstruct(coords: &ResidueRingCoords, p: &Polynomial) -> Polynomial {
    let field: &FieldSpec = p.field();
    let modulus = p.pow(coords.u as u32);
    let mut acc = Polynomial::zero(field);
    let mut pj = Polynomial::one(field);
    for c in &coords.coeffs {
        let c = Polynomial::from_raw(field, c.clone());
        let term = teichmuller_lift(&c, p, coords.u).mul_raw(&pj);
        acc = acc.add_raw(&term);
        pj = pj.mul_raw(p);
    }
    acc.rem_raw(&modulus)
}
