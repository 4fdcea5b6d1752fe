//! Exact numbers of the form `a + b·√r` with rational `a`, `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::integer::Roots;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigRational,
    b: BigRational,
    r: u64,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `"n"` or `"n/d"`.
pub fn rat_str(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn isqrt_exact(r: u64) -> Option<u64> {
    let s = r.sqrt();
    (s * s == r).then_some(s)
}

impl QuadraticSurd {
    /// `a + b√r`; a perfect-square radicand folds into the rational part.
    pub fn new(a: BigRational, b: BigRational, r: u64) -> QuadraticSurd {
        match isqrt_exact(r) {
            Some(s) => QuadraticSurd {
                a: a + b * big(s),
                b: BigRational::zero(),
                r: 1,
            },
            None => QuadraticSurd { a, b, r },
        }
    }

    pub fn rational(a: BigRational) -> QuadraticSurd {
        QuadraticSurd {
            a,
            b: BigRational::zero(),
            r: 1,
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> QuadraticSurd {
        QuadraticSurd::rational(big(n))
    }

    /// `√r`.
    pub fn sqrt(r: u64) -> QuadraticSurd {
        QuadraticSurd::new(BigRational::zero(), BigRational::one(), r)
    }

    /// `r^{e/2}` for integer `e` (negative allowed).
    pub fn half_power(r: u64, e: i64) -> QuadraticSurd {
        let whole = pow_rat(r, e.div_euclid(2));
        if e.rem_euclid(2) == 0 {
            QuadraticSurd::rational(whole)
        } else {
            QuadraticSurd::new(BigRational::zero(), whole, r)
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.r
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    fn radicand_with(&self, other: &QuadraticSurd) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, _) => other.r,
            (_, true) => self.r,
            _ => {
                assert_eq!(self.r, other.r, "surds with different radicands");
                self.r
            }
        }
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (_, Ordering::Equal) => sa,
            (Ordering::Equal, _) => sb,
            (x, y) if x == y => x,
            _ => {
                // Opposite signs: compare a² with b²r.
                let a2 = &self.a * &self.a;
                let b2r = &self.b * &self.b * big(self.r);
                match a2.cmp(&b2r) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> QuadraticSurd {
        QuadraticSurd {
            a: &self.a * c,
            b: &self.b * c,
            r: self.r,
        }
    }

    /// Division by a nonzero surd with the same radicand.
    pub fn div(&self, other: &QuadraticSurd) -> QuadraticSurd {
        // (a + b√r)/(c + d√r) = (a + b√r)(c − d√r)/(c² − d²r).
        let r = self.radicand_with(other);
        let conj = QuadraticSurd {
            a: other.a.clone(),
            b: -other.b.clone(),
            r,
        };
        let norm = &other.a * &other.a - &other.b * &other.b * big(r);
        assert!(!norm.is_zero(), "division by zero surd");
        (self * &conj).scale(&(BigRational::one() / norm))
    }

    pub fn floor(&self) -> BigInt {
        let approx = self.approx_floor();
        let mut k = approx;
        while self.cmp(&QuadraticSurd::integer(k.clone())) == Ordering::Less {
            k -= 1;
        }
        while self.cmp(&QuadraticSurd::integer(&k + 1)) != Ordering::Less {
            k += 1;
        }
        k
    }

    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    /// Within a couple of units of the true floor.
    fn approx_floor(&self) -> BigInt {
        let fa = self.a.floor().to_integer();
        if self.b.is_zero() {
            return fa;
        }
        let v = (&self.b * &self.b * big(self.r)).floor().to_integer();
        let s = v.sqrt();
        if self.b.is_negative() {
            fa - s - 1
        } else {
            fa + s
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.r as f64).sqrt()
    }
}

pub(crate) fn pow_rat(base: u64, e: i64) -> BigRational {
    let p = num::pow(BigInt::from(base), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact comparison of two surds over the same radicand.
pub fn sqrt_q_compare(lhs: &QuadraticSurd, rhs: &QuadraticSurd) -> Ordering {
    lhs.cmp(rhs)
}

impl<'a> Add<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, o: &QuadraticSurd) -> QuadraticSurd {
        let r = self.radicand_with(o);
        QuadraticSurd {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            r,
        }
    }
}

impl<'a> Sub<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, o: &QuadraticSurd) -> QuadraticSurd {
        let r = self.radicand_with(o);
        QuadraticSurd {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            r,
        }
    }
}

impl<'a> Mul<&'a QuadraticSurd> for &'a QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, o: &QuadraticSurd) -> QuadraticSurd {
        let r = self.radicand_with(o);
        QuadraticSurd {
            a: &self.a * &o.a + &self.b * &o.b * big(r),
            b: &self.a * &o.b + &self.b * &o.a,
            r,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $m(self, o: QuadraticSurd) -> QuadraticSurd {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd {
            a: -self.a,
            b: -self.b,
            r: self.r,
        }
    }
}

impl From<BigRational> for QuadraticSurd {
    fn from(a: BigRational) -> QuadraticSurd {
        QuadraticSurd::rational(a)
    }
}

impl From<i64> for QuadraticSurd {
    fn from(a: i64) -> QuadraticSurd {
        QuadraticSurd::rational(rat(a))
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", rat_str(&self.a));
        }
        let mag = self.b.abs();
        let coeff = if mag.is_one() {
            String::new()
        } else {
            format!("{}*", rat_str(&mag))
        };
        let neg = self.b.is_negative();
        match (self.a.is_zero(), neg) {
            (true, false) => write!(f, "{coeff}sqrt({})", self.r),
            (true, true) => write!(f, "-{coeff}sqrt({})", self.r),
            (false, false) => write!(f, "{} + {coeff}sqrt({})", rat_str(&self.a), self.r),
            (false, true) => write!(f, "{} - {coeff}sqrt({})", rat_str(&self.a), self.r),
        }
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (~{:.6})", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        let two = QuadraticSurd::from(2);
        let s3 = QuadraticSurd::sqrt(3);
        assert_eq!(sqrt_q_compare(&two, &s3), Ordering::Greater);
        assert_eq!(sqrt_q_compare(&s3, &s3), Ordering::Equal);
        // 3^6 (√3 − 1) − 129 > 0.
        let rhs = &(&s3 - &QuadraticSurd::from(1)).scale(&rat(729)) - &QuadraticSurd::from(129);
        assert_eq!(rhs.signum(), Ordering::Greater);
    }

    #[test]
    fn perfect_squares_fold() {
        let s4 = QuadraticSurd::sqrt(4);
        assert!(s4.is_rational());
        assert_eq!(s4, QuadraticSurd::from(2));
        assert_eq!(QuadraticSurd::half_power(3, 3), QuadraticSurd::new(rat(0), rat(3), 3));
        assert_eq!(QuadraticSurd::half_power(4, -3), QuadraticSurd::rational(ratio(1, 8)));
    }

    #[test]
    fn floors_and_ceilings() {
        let x = QuadraticSurd::new(rat(-1), rat(4), 3); // 4√3 − 1 ≈ 5.93
        assert_eq!(x.floor(), BigInt::from(5));
        assert_eq!(x.ceil(), BigInt::from(6));
        let y = QuadraticSurd::new(rat(10), rat(-3), 2); // ≈ 5.757
        assert_eq!(y.floor(), BigInt::from(5));
        assert_eq!((-y).floor(), BigInt::from(-6));
        assert_eq!(QuadraticSurd::from(7).floor(), BigInt::from(7));
    }

    #[test]
    fn division() {
        let x = QuadraticSurd::new(rat(1), rat(1), 3);
        let y = QuadraticSurd::new(rat(2), rat(-1), 3);
        let z = x.div(&y);
        assert_eq!(&z * &y, x);
    }

    #[test]
    fn display() {
        let x = QuadraticSurd::new(rat(28), rat(-6), 3);
        assert_eq!(x.to_string(), "28 - 6*sqrt(3)");
        assert_eq!((-QuadraticSurd::sqrt(2)).to_string(), "-sqrt(2)");
        assert_eq!(QuadraticSurd::new(ratio(1, 2), ratio(3, 4), 5).to_string(), "1/2 + 3/4*sqrt(5)");
    }
}
