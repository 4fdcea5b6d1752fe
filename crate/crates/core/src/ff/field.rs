//! Prime fields and their extensions `F_p[x]/(m(x))`.
//!
//! An element of `F_{p^k}` is stored as a single `u32` index: the coefficients
//! of its residue polynomial read as base-`p` digits, lowest degree first. This
//! keeps elements `Copy` and makes polynomial code over any finite field work on
//! plain `Vec<u32>` coefficient vectors.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fields of at most this order get precomputed addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    k: u32,
    order: u32,
    /// Monic modulus over `F_p`, low-to-high, length `k + 1`. Empty when `k == 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A validated finite field `F_{p^k}`. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.k.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.k == 1 {
            write!(f, "F_{}", self.inner.p)
        } else {
            write!(f, "F_{}^{}{:?}", self.inner.p, self.inner.k, self.inner.modulus)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, k)`; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Builds `F_{p^k}`.
///
/// When `k > 1` and no modulus is given, the monic irreducible of degree `k`
/// with the smallest base-`p` value (coefficients read low-to-high) is used.
pub fn make_field(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NonPrimeCharacteristic(p));
    }
    if k == 0 {
        return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
    }
    let order = (p as u128).checked_pow(k).filter(|&o| o <= u32::MAX as u128);
    let Some(order) = order else {
        return Err(Error::FieldTooLarge { p, k });
    };
    let prime = FieldSpec::prime_unchecked(p as u32);
    if k == 1 {
        if let Some(m) = modulus {
            // A degree-one modulus carries no information; accept `x + c`.
            if m.len() != 2 || m[1] != 1 {
                return Err(Error::InvalidModulus("expected a monic degree-one modulus".into()));
            }
        }
        return Ok(prime);
    }
    let modulus = match modulus {
        Some(m) => {
            let poly = crate::ff::Polynomial::from_coeffs(&prime, m.to_vec())?;
            if poly.degree() != Some(k as usize) {
                return Err(Error::InvalidModulus(format!("degree must be {k}")));
            }
            if !poly.is_monic() {
                return Err(Error::InvalidModulus("modulus must be monic".into()));
            }
            if !crate::ff::is_irreducible(&poly)? {
                return Err(Error::ReducibleModulus);
            }
            poly.coeffs().to_vec()
        }
        None => crate::ff::first_irreducible(&prime, k as usize)?.coeffs().to_vec(),
    };
    let mut inner = Inner {
        p: p as u32,
        k,
        order: order as u32,
        modulus,
        tables: None,
    };
    if inner.order <= TABLE_LIMIT {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(FieldSpec {
        inner: Arc::new(inner),
    })
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.order as usize;
    let mut add = vec![0; q * q];
    let mut mul = vec![0; q * q];
    for a in 0..q as u32 {
        for b in 0..q as u32 {
            add[a as usize * q + b as usize] = slow_add(inner, a, b);
            mul[a as usize * q + b as usize] = slow_mul(inner, a, b);
        }
    }
    let neg = (0..q as u32).map(|a| slow_neg(inner, a)).collect();
    let mut inv = vec![0; q];
    for a in 1..q {
        for b in 1..q {
            if mul[a * q + b] == 1 {
                inv[a] = b as u32;
                break;
            }
        }
    }
    Tables { add, mul, neg, inv }
}

fn digits(inner: &Inner, mut a: u32) -> Vec<u32> {
    let mut out = vec![0; inner.k as usize];
    for d in out.iter_mut() {
        *d = a % inner.p;
        a /= inner.p;
    }
    out
}

fn from_digits(inner: &Inner, ds: &[u32]) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * inner.p + d)
}

fn slow_add(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p;
    let (da, db) = (digits(inner, a), digits(inner, b));
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    from_digits(inner, &sum)
}

fn slow_neg(inner: &Inner, a: u32) -> u32 {
    let p = inner.p;
    let d: Vec<u32> = digits(inner, a).iter().map(|&x| (p - x) % p).collect();
    from_digits(inner, &d)
}

fn slow_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    let k = inner.k as usize;
    let (da, db) = (digits(inner, a), digits(inner, b));
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // Reduce with x^k = -(m_0 + ... + m_{k-1} x^{k-1}).
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (j, &m) in inner.modulus[..k].iter().enumerate() {
            let idx = top - k + j;
            prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
        }
    }
    let ds: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
    from_digits(inner, &ds)
}

impl FieldSpec {
    fn prime_unchecked(p: u32) -> FieldSpec {
        let mut inner = Inner {
            p,
            k: 1,
            order: p,
            modulus: Vec::new(),
            tables: None,
        };
        if p <= TABLE_LIMIT && p > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec {
            inner: Arc::new(inner),
        }
    }

    /// The field with `q` elements for a prime power `q`, using the default modulus.
    pub fn of_order(q: u64) -> Result<FieldSpec> {
        match prime_power(q) {
            Some((p, k)) => make_field(p, k, None),
            None => Err(Error::NonPrimeCharacteristic(q)),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    /// Number of elements `q = p^k`.
    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// The defining modulus over `F_p`, low-to-high; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.inner.k > 1).then_some(self.inner.modulus.as_slice())
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    /// Base-`p` digits of an element index.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits(&self.inner, a)
    }

    /// The element index with the given base-`p` digits.
    pub fn from_digits(&self, ds: &[u32]) -> u32 {
        from_digits(&self.inner, ds)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.inner.p as i64) as u32
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.k == 1 {
            let s = a as u64 + b as u64;
            let p = inner.p as u64;
            return if s >= p { (s - p) as u32 } else { s as u32 };
        }
        match &inner.tables {
            Some(t) => t.add[(a * inner.order + b) as usize],
            None => slow_add(inner, a, b),
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        let inner = &*self.inner;
        if inner.k == 1 {
            return if a == 0 { 0 } else { inner.p - a };
        }
        match &inner.tables {
            Some(t) => t.neg[a as usize],
            None => slow_neg(inner, a),
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.k == 1 {
            if inner.p == 2 {
                return a & b;
            }
            return ((a as u64 * b as u64) % inner.p as u64) as u32;
        }
        match &inner.tables {
            Some(t) => t.mul[(a * inner.order + b) as usize],
            None => slow_mul(inner, a, b),
        }
    }

    pub(crate) fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub(crate) fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.inner.tables {
            return Some(t.inv[a as usize]);
        }
        Some(self.pow(a, self.inner.order as u64 - 2))
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::InvalidCoefficient {
                value: value as u64,
                order: self.order(),
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 1,
        }
    }

    /// The class of `x` in `F_p[x]/(m)`; the generator of the extension when `k > 1`.
    pub fn generator(&self) -> FieldElement {
        let value = if self.inner.k == 1 { 1 } else { self.inner.p };
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |v| FieldElement {
            field: self.clone(),
            value: v,
        })
    }
}

/// An element of a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldSpec,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Binary and unary operations accepted by [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    /// Inverse of the first operand; the second is ignored.
    Inv,
    /// First operand raised to the index of the second, read as an integer.
    Pow,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// The element index (base-`p` digits packed into one integer).
    pub fn value(&self) -> u32 {
        self.value
    }

    /// Coordinates on `1, x, ..., x^{k-1}`.
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.with(self.field.pow(self.value, e))
    }
}

/// Applies `op` to `a` and `b`.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Inv => {
            a.check(b)?;
            a.inv()
        }
        FieldOp::Pow => {
            a.check(b)?;
            Ok(a.pow(b.value as u64))
        }
    }
}
