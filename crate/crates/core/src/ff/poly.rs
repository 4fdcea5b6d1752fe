use std::cmp::Ordering;
use std::fmt;

use super::field::FieldSpec;
use crate::error::{Error, Result};

/// Univariate polynomial over a [`FieldSpec`], coefficients low-to-high.
///
/// Always canonical: no trailing zero coefficients, so the zero polynomial has
/// an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Polynomial {
    pub fn from_coeffs(field: &FieldSpec, mut coeffs: Vec<u32>) -> Result<Polynomial> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.order()) {
            return Err(Error::InvalidCoefficient {
                value: bad as u64,
                order: field.order(),
            });
        }
        trim(&mut coeffs);
        Ok(Polynomial {
            field: field.clone(),
            coeffs,
        })
    }

    /// Builds from coefficients already known to be reduced.
    pub(crate) fn from_raw(field: &FieldSpec, mut coeffs: Vec<u32>) -> Polynomial {
        trim(&mut coeffs);
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds from signed integers mapped into the prime subfield.
    pub fn from_ints(field: &FieldSpec, coeffs: &[i64]) -> Polynomial {
        let raw = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Polynomial::from_raw(field, raw)
    }

    pub fn zero(field: &FieldSpec) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldSpec) -> Polynomial {
        Polynomial::constant(field, 1)
    }

    pub fn constant(field: &FieldSpec, c: u32) -> Polynomial {
        Polynomial::from_raw(field, vec![c])
    }

    /// `x^e`.
    pub fn monomial(field: &FieldSpec, e: usize) -> Polynomial {
        let mut coeffs = vec![0; e + 1];
        coeffs[e] = 1;
        Polynomial {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn x(field: &FieldSpec) -> Polynomial {
        Polynomial::monomial(field, 1)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Coefficients padded (or truncated) to exactly `len` entries.
    pub fn padded(&self, len: usize) -> Vec<u32> {
        let mut v = self.coeffs.clone();
        v.resize(len, 0);
        v
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.add_raw(other))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.sub_raw(other))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.mul_raw(other))
    }

    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check(divisor)?;
        self.divmod_raw(divisor)
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(divisor)?.1)
    }

    pub(crate) fn add_raw(&self, other: &Polynomial) -> Polynomial {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Polynomial::from_raw(f, out)
    }

    pub(crate) fn sub_raw(&self, other: &Polynomial) -> Polynomial {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let out = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Polynomial::from_raw(f, out)
    }

    pub(crate) fn mul_raw(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Polynomial::from_raw(f, out)
    }

    pub(crate) fn divmod_raw(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let f = &self.field;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, lead_inv);
            quot[top - dd] = factor;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(factor, d));
            }
        }
        rem.truncate(dd);
        Ok((Polynomial::from_raw(f, quot), Polynomial::from_raw(f, rem)))
    }

    pub(crate) fn rem_raw(&self, divisor: &Polynomial) -> Polynomial {
        self.divmod_raw(divisor).expect("nonzero divisor").1
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = &self.field;
        Polynomial::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.field;
        Polynomial::from_raw(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.field.inv(self.leading()) {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    /// Horner evaluation at a field element index.
    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem_raw(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Inverse modulo `m`, if `self` and `m` are coprime.
    pub fn inv_mod(&self, m: &Polynomial) -> Result<Option<Polynomial>> {
        self.check(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        // Extended Euclid tracking only the coefficient of `self`.
        let (mut r0, mut r1) = (m.clone(), self.rem_raw(m));
        let (mut s0, mut s1) = (Polynomial::zero(f), Polynomial::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divmod_raw(&r1)?;
            let s = s0.sub_raw(&q.mul_raw(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return Ok(None);
        }
        let c = f.inv(r0.leading()).expect("unit");
        Ok(Some(s0.scale(c).rem_raw(m)))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Polynomial) -> Result<Polynomial> {
        self.check(m)?;
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut base = self.rem_raw(m);
        let mut acc = Polynomial::one(&self.field).rem_raw(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_raw(&base).rem_raw(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_raw(&base).rem_raw(m);
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.field);
        for _ in 0..e {
            acc = acc.mul_raw(self);
        }
        acc
    }

    /// Reverses the coefficient vector: `x^deg f(1/x)`.
    pub fn reversed(&self) -> Polynomial {
        let mut c = self.coeffs.clone();
        c.reverse();
        Polynomial::from_raw(&self.field, c)
    }

    /// Largest `e` with `p^e | self`; `None` for the zero polynomial.
    pub fn valuation_at(&self, p: &Polynomial) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divmod_raw(p).expect("nonzero divisor");
            if !r.is_zero() {
                return Some(v);
            }
            cur = q;
            v += 1;
        }
    }
}

/// Order used for places and deterministic enumeration: by degree, then by the
/// base-`q` value of the coefficient vector.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(quotient, remainder)` of `f` by `g`.
pub fn poly_divmod(f: &Polynomial, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
    f.divmod(g)
}

pub fn poly_mul(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.mul(g)
}

/// Exact irreducibility test for a monic polynomial of positive degree.
///
/// `f` of degree `d` is irreducible iff `gcd(x^{q^i} - x, f) = 1` for every
/// `1 <= i <= d/2`.
pub fn is_irreducible(f: &Polynomial) -> Result<bool> {
    let d = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::NonMonic),
    };
    if d == 1 {
        return Ok(true);
    }
    let field = f.field();
    let q = field.order() as u64;
    let x = Polynomial::x(field);
    let mut h = x.rem_raw(f);
    for _ in 1..=d / 2 {
        h = h.pow_mod(q, f)?;
        let g = h.sub_raw(&x).gcd(f)?;
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic polynomials of degree `k` in increasing base-`q` order.
pub(crate) struct MonicIter {
    field: FieldSpec,
    digits: Vec<u32>,
    done: bool,
}

impl MonicIter {
    pub(crate) fn new(field: &FieldSpec, k: usize) -> MonicIter {
        MonicIter {
            field: field.clone(),
            digits: vec![0; k],
            done: false,
        }
    }
}

impl Iterator for MonicIter {
    type Item = Polynomial;

    fn next(&mut self) -> Option<Polynomial> {
        if self.done {
            return None;
        }
        let mut coeffs = self.digits.clone();
        coeffs.push(1);
        let out = Polynomial::from_raw(&self.field, coeffs);
        let q = self.field.order();
        let mut carry = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < q {
                carry = false;
                break;
            }
            *d = 0;
        }
        self.done = carry;
        Some(out)
    }
}

/// All monic irreducible polynomials of degree `k`, smallest base-`q` value first.
pub fn enumerate_irreducibles(field: &FieldSpec, k: usize) -> Vec<Polynomial> {
    if k == 0 {
        return Vec::new();
    }
    MonicIter::new(field, k)
        .filter(|f| is_irreducible(f).expect("monic of positive degree"))
        .collect()
}

/// The smallest monic irreducible of degree `k`.
pub fn first_irreducible(field: &FieldSpec, k: usize) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::NoIrreducibleFound(0));
    }
    MonicIter::new(field, k)
        .find(|f| is_irreducible(f).expect("monic of positive degree"))
        .ok_or(Error::NoIrreducibleFound(k))
}

/// Number of monic irreducibles of degree `k` over a field with `q` elements,
/// by the Möbius necklace formula.
pub fn necklace_count(q: u64, k: u32) -> u64 {
    fn mobius(mut n: u32) -> i64 {
        let mut result = 1;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                result = -result;
            }
            d += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    let total: i128 = (1..=k)
        .filter(|d| k % d == 0)
        .map(|d| mobius(d) as i128 * (q as i128).pow(k / d))
        .sum();
    (total / k as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn f2() -> FieldSpec {
        make_field(2, 1, None).unwrap()
    }

    fn f3() -> FieldSpec {
        make_field(3, 1, None).unwrap()
    }

    fn p(field: &FieldSpec, c: &[i64]) -> Polynomial {
        Polynomial::from_ints(field, c)
    }

    #[test]
    fn multiplication_examples() {
        let f = f2();
        assert_eq!(p(&f, &[1, 1]).mul(&p(&f, &[1, 1])).unwrap(), p(&f, &[1, 0, 1]));
        let g = f3();
        assert_eq!(p(&g, &[1, 1]).mul(&p(&g, &[2, 1])).unwrap(), p(&g, &[2, 0, 1]));
        assert!(p(&g, &[1, 2, 1]).mul(&Polynomial::zero(&g)).unwrap().is_zero());
        assert_eq!(p(&f, &[1]).mul(&p(&g, &[1])).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn division_examples() {
        let f = f2();
        let x3 = p(&f, &[0, 0, 0, 1]);
        let (q, r) = x3.divmod(&p(&f, &[1, 0, 1])).unwrap();
        assert_eq!(q, p(&f, &[0, 1]));
        assert_eq!(r, p(&f, &[0, 1]));
        let (q, r) = x3.divmod(&x3).unwrap();
        assert!(q.is_one() && r.is_zero());
        let small = p(&f, &[1, 1]);
        let (q, r) = small.divmod(&x3).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, small);
        assert_eq!(
            x3.divmod(&Polynomial::zero(&f)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn irreducibility_examples() {
        let f = f2();
        assert!(is_irreducible(&p(&f, &[1, 1, 1])).unwrap());
        assert!(!is_irreducible(&p(&f, &[1, 0, 1])).unwrap());
        assert!(is_irreducible(&p(&f3(), &[1, 0, 1])).unwrap());
        assert_eq!(
            is_irreducible(&p(&f3(), &[1, 0, 2])).unwrap_err(),
            Error::NonMonic
        );
    }

    #[test]
    fn enumeration_examples() {
        let f = f2();
        assert_eq!(enumerate_irreducibles(&f, 2), vec![p(&f, &[1, 1, 1])]);
        assert_eq!(
            enumerate_irreducibles(&f, 4),
            vec![
                p(&f, &[1, 1, 0, 0, 1]),
                p(&f, &[1, 0, 0, 1, 1]),
                p(&f, &[1, 1, 1, 1, 1]),
            ]
        );
        let g = f3();
        assert_eq!(
            enumerate_irreducibles(&g, 1),
            vec![p(&g, &[0, 1]), p(&g, &[1, 1]), p(&g, &[2, 1])]
        );
    }

    /// Brute-force oracle: a monic polynomial is irreducible iff no monic
    /// polynomial of degree 1..=deg/2 divides it.
    fn irreducible_by_trial_division(f: &Polynomial) -> bool {
        let d = f.degree().unwrap();
        (1..=d / 2).all(|k| MonicIter::new(f.field(), k).all(|g| !f.rem(&g).unwrap().is_zero()))
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for field in [f2(), f3(), make_field(2, 2, None).unwrap()] {
            for k in 1..=5 {
                if (field.order() as u64).pow(k as u32) > 3000 {
                    continue;
                }
                for f in MonicIter::new(&field, k) {
                    assert_eq!(is_irreducible(&f).unwrap(), irreducible_by_trial_division(&f), "{f}");
                }
            }
        }
    }

    #[test]
    fn counts_match_necklace_formula() {
        for (q, field) in [(2u64, f2()), (3, f3())] {
            for k in 1..=8 {
                let all = enumerate_irreducibles(&field, k);
                assert_eq!(all.len() as u64, necklace_count(q, k as u32), "q={q} k={k}");
                let mut dedup = all.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn inverse_mod() {
        let f = f3();
        let m = p(&f, &[1, 0, 1]);
        let a = p(&f, &[2, 1]);
        let inv = a.inv_mod(&m).unwrap().unwrap();
        assert!(a.mul(&inv).unwrap().rem(&m).unwrap().is_one());
        let reducible = p(&f, &[2, 0, 1]); // (x+1)(x+2)
        assert_eq!(p(&f, &[1, 1]).inv_mod(&reducible).unwrap(), None);
    }
}
