//! Places, divisors and Riemann-Roch spaces of the rational function field `F_q(x)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{enumerate_irreducibles, is_irreducible, residue_coords_unchecked, FieldSpec, Polynomial, ResidueRingCoords};
use crate::linalg::Matrix;

/// A place of `F_q(x)`: a monic irreducible polynomial or the pole of `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Infinite,
    Finite(Polynomial),
}

impl Place {
    /// Validates that `p` is monic irreducible.
    pub fn finite(p: Polynomial) -> Result<Place> {
        if !is_irreducible(&p)? {
            return Err(Error::ReducibleLocalParameter);
        }
        Ok(Place::Finite(p))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Infinite => 1,
            Place::Finite(p) => p.degree().expect("nonzero place polynomial"),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }

    pub fn poly(&self) -> Option<&Polynomial> {
        match self {
            Place::Infinite => None,
            Place::Finite(p) => Some(p),
        }
    }
}

/// Infinite place first, then finite places by degree and coefficient value.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinite, Place::Infinite) => Ordering::Equal,
            (Place::Infinite, _) => Ordering::Less,
            (_, Place::Infinite) => Ordering::Greater,
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "P_inf"),
            Place::Finite(p) => write!(f, "P({p})"),
        }
    }
}

/// All places of degree `k`, infinite place first when `k = 1`.
pub fn places_of_degree(field: &FieldSpec, k: usize) -> Vec<Place> {
    let mut out = Vec::new();
    if k == 1 {
        out.push(Place::Infinite);
    }
    out.extend(enumerate_irreducibles(field, k).into_iter().map(Place::Finite));
    out
}

/// A formal sum of places with nonzero integer coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, a)| format!("{a}*{p:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Place, i64)>>(terms: I) -> Divisor {
        let mut d = Divisor::zero();
        for (p, a) in terms {
            d.add_term(p, a);
        }
        d
    }

    pub fn single(place: Place, a: i64) -> Divisor {
        Divisor::from_terms([(place, a)])
    }

    pub fn add_term(&mut self, place: Place, a: i64) {
        let entry = self.terms.entry(place.clone()).or_insert(0);
        *entry += a;
        if *entry == 0 {
            self.terms.remove(&place);
        }
    }

    pub fn coefficient(&self, place: &Place) -> i64 {
        self.terms.get(place).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, a)| a * p.degree() as i64).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &a)| (p, a))
    }

    pub fn scale(&self, c: i64) -> Divisor {
        Divisor::from_terms(self.terms.iter().map(|(p, &a)| (p.clone(), a * c)))
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, a) in other.terms() {
            d.add_term(p.clone(), a);
        }
        d
    }
}

/// `num / den` with `den` monic and nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::MixedFields);
        }
        let lead = den.field().inv(den.leading()).expect("nonzero");
        Ok(RationalFunction {
            num: num.scale(lead),
            den: den.monic(),
        })
    }

    pub fn polynomial(p: Polynomial) -> RationalFunction {
        let one = Polynomial::one(p.field());
        RationalFunction { num: p, den: one }
    }

    pub fn field(&self) -> &FieldSpec {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Lowest terms.
    pub fn reduced(&self) -> RationalFunction {
        let g = self.num.gcd(&self.den).expect("same field");
        if g.is_one() || self.num.is_zero() {
            if self.num.is_zero() {
                return RationalFunction::polynomial(self.num.clone());
            }
            return self.clone();
        }
        let num = self.num.divmod_raw(&g).expect("nonzero").0;
        let den = self.den.divmod_raw(&g).expect("nonzero").0;
        RationalFunction::new(num, den).expect("nonzero denominator")
    }

    pub fn add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        Ok(RationalFunction::new(num, self.den.mul(&other.den)?)?.reduced())
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        Ok(RationalFunction::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)?.reduced())
    }

    pub fn scale(&self, c: u32) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `v_P(f)`; `None` for the zero function.
    pub fn valuation(&self, place: &Place) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        match place {
            Place::Infinite => Some(self.den.degree()? as i64 - self.num.degree()? as i64),
            Place::Finite(p) => {
                Some(self.num.valuation_at(p)? as i64 - self.den.valuation_at(p)? as i64)
            }
        }
    }

    /// Whether `D + (f) ≥ 0`, checked on `supp D` and at every zero of `den` and at infinity.
    pub fn in_riemann_roch_space(&self, d: &Divisor) -> bool {
        if self.is_zero() {
            return true;
        }
        let f = self.reduced();
        let mut places: Vec<Place> = d.support().cloned().collect();
        places.push(Place::Infinite);
        places.extend(pole_places(&f.den));
        places
            .iter()
            .all(|p| d.coefficient(p) + f.valuation(p).expect("nonzero") >= 0)
    }
}

/// Distinct monic irreducible factors of `h`, by trial division over increasing degree.
fn pole_places(h: &Polynomial) -> Vec<Place> {
    let mut out = Vec::new();
    let mut rest = h.monic();
    let mut k = 1;
    while rest.degree().unwrap_or(0) > 0 {
        if 2 * k > rest.degree().unwrap_or(0) {
            out.push(Place::Finite(rest.clone()));
            break;
        }
        for p in enumerate_irreducibles(h.field(), k) {
            if rest.rem_raw(&p).is_zero() {
                while rest.rem_raw(&p).is_zero() {
                    rest = rest.divmod_raw(&p).expect("nonzero").0;
                }
                out.push(Place::Finite(p));
            }
        }
        k += 1;
    }
    out
}

/// A basis of `L(D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRBasis {
    pub divisor: Divisor,
    pub elements: Vec<RationalFunction>,
}

impl RRBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// A basis of `L(D)` on the genus-0 curve.
///
/// With `h = Π p_P^{a_P}` over positive finite coefficients and `N = Π p_P^{-a_P}`
/// over negative ones, `L(D) = { N g / h : deg g ≤ deg h + a_∞ − deg N }`, so the
/// functions `N x^j / h` form a basis of dimension `max(deg D + 1, 0)`.
pub fn riemann_roch_basis(field: &FieldSpec, d: &Divisor) -> RRBasis {
    let mut h = Polynomial::one(field);
    let mut nn = Polynomial::one(field);
    let mut a_inf = 0i64;
    for (p, a) in d.terms() {
        match p {
            Place::Infinite => a_inf = a,
            Place::Finite(poly) if a > 0 => h = h.mul_raw(&poly.pow(a as u32)),
            Place::Finite(poly) => nn = nn.mul_raw(&poly.pow((-a) as u32)),
        }
    }
    let top = h.degree().unwrap() as i64 + a_inf - nn.degree().unwrap() as i64;
    let elements = (0..=top)
        .map(|j| RationalFunction {
            num: nn.mul_raw(&Polynomial::monomial(field, j as usize)),
            den: h.clone(),
        })
        .collect();
    RRBasis {
        divisor: d.clone(),
        elements,
    }
}

/// First `u` coefficients of the expansion of `f` at `place`.
///
/// Finite places use the place polynomial as local parameter, the infinite place
/// uses `1/x`.
pub fn local_expansion(f: &RationalFunction, place: &Place, u: usize) -> Result<ResidueRingCoords> {
    match place {
        Place::Finite(p) => {
            let f = f.reduced();
            if !f.num.is_zero() && f.den.rem_raw(p).is_zero() {
                return Err(Error::PoleAtPlace);
            }
            let m = p.pow(u as u32);
            let value = if f.den.is_one() {
                f.num.clone()
            } else {
                let inv = f.den.inv_mod(&m)?.expect("coprime to the place");
                f.num.mul_raw(&inv).rem_raw(&m)
            };
            Ok(residue_coords_unchecked(&value, p, u))
        }
        Place::Infinite => {
            if f.num.is_zero() {
                return Ok(ResidueRingCoords {
                    k: 1,
                    u,
                    coeffs: vec![vec![0]; u],
                });
            }
            let v = f.valuation(place).expect("nonzero");
            if v < 0 {
                return Err(Error::PoleAtPlace);
            }
            // f = s^v · rev(num)(s) / rev(den)(s) with s = 1/x.
            let series = power_series_div(&f.num.reversed(), &f.den.reversed(), u);
            let mut coeffs = vec![vec![0]; u];
            for (j, c) in series.into_iter().enumerate() {
                if j + (v as usize) < u {
                    coeffs[j + v as usize] = vec![c];
                }
            }
            Ok(ResidueRingCoords { k: 1, u, coeffs })
        }
    }
}

/// First `u` coefficients of `a / b` as power series, `b(0) ≠ 0`.
fn power_series_div(a: &Polynomial, b: &Polynomial, u: usize) -> Vec<u32> {
    let f = a.field();
    let b0_inv = f.inv(b.coeff(0)).expect("unit constant term");
    let mut out = vec![0u32; u];
    for j in 0..u {
        let mut acc = a.coeff(j);
        for i in 1..=j {
            acc = f.sub(acc, f.mul(b.coeff(i), out[j - i]));
        }
        out[j] = f.mul(acc, b0_inv);
    }
    out
}

/// Rows: places in the given order, then power of the local parameter, then
/// residue-field coordinate. Columns: basis elements.
pub fn evaluation_matrix(
    field: &FieldSpec,
    basis: &[RationalFunction],
    places: &[(Place, usize)],
) -> Result<Matrix> {
    let rows: usize = places.iter().map(|(p, u)| p.degree() * u).sum();
    let mut columns = Vec::with_capacity(basis.len());
    for f in basis {
        let mut col = Vec::with_capacity(rows);
        for (p, u) in places {
            col.extend(local_expansion(f, p, *u)?.flatten());
        }
        columns.push(col);
    }
    Ok(Matrix::from_columns(field, rows, &columns))
}

/// The class of `f` in `F_q[x]/(Q)`, as coordinates on `1, x, …, x^{n-1}`.
pub fn reduce_mod_q(f: &Polynomial, q_place: &Polynomial) -> Vec<u32> {
    let n = q_place.degree().expect("nonzero modulus");
    f.rem_raw(q_place).padded(n)
}

/// Value of a rational function at the degree-`n` place `Q`.
pub fn evaluate_at_q(f: &RationalFunction, q_place: &Polynomial) -> Result<Vec<u32>> {
    let inv = f.den.inv_mod(q_place)?.ok_or(Error::PoleAtPlace)?;
    Ok(reduce_mod_q(&f.num.mul_raw(&inv), q_place))
}
