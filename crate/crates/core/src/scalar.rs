//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Elements are residues in Q[t]/(Phi_N(t)) with t standing for a fixed
//! primitive N-th root of unity. Every element carries a handle to its field,
//! which owns the modulus and a table of reduced powers of t.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial over Q, coefficients from low to high degree.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    fn lead(&self) -> &BigRational {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        let lead = divisor.lead();
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = &rem[k] / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &c * d;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Extended Euclid: returns `(g, s)` with `s*self = g (mod modulus)` and
    /// `g` the monic gcd.
    fn gcd_with_cofactor(&self, modulus: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (modulus.clone(), self.clone());
        let (mut s0, mut s1) = (Self::zero(), Self::from_ints(&[1]));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let scale = Self::new(vec![r0.lead().recip()]);
        (r0.mul(&scale), s0.mul(&scale))
    }
}

/// The N-th cyclotomic polynomial, computed by dividing `t^N - 1` by every
/// `Phi_d` with `d | N`, `d < N`.
pub fn cyclotomic_polynomial(order: u32) -> UniPoly {
    assert!(order >= 1, "cyclotomic order must be positive");
    let mut coeffs = vec![0i64; order as usize + 1];
    coeffs[0] = -1;
    coeffs[order as usize] = 1;
    let mut acc = UniPoly::from_ints(&coeffs);
    for d in 1..order {
        if order % d == 0 {
            let (q, r) = acc.div_rem(&cyclotomic_polynomial(d));
            debug_assert!(r.is_zero());
            acc = q;
        }
    }
    acc
}

/// The field Q(zeta_N) realised as Q[t]/(Phi_N).
#[derive(Debug)]
pub struct CycField {
    order: u32,
    modulus: UniPoly,
    /// `powers[k]` is `t^k mod Phi_N` as a length-`dim` coefficient vector.
    powers: Vec<Vec<BigRational>>,
}

impl CycField {
    pub fn new(order: u32) -> Arc<Self> {
        let modulus = cyclotomic_polynomial(order);
        let dim = modulus.degree().unwrap();
        let count = (order as usize).max(2 * dim);
        let mut powers = Vec::with_capacity(count);
        let mut cur = UniPoly::from_ints(&[1]);
        let t = UniPoly::from_ints(&[0, 1]);
        for _ in 0..count {
            powers.push((0..dim).map(|k| cur.coeff(k)).collect());
            cur = cur.mul(&t).div_rem(&modulus).1;
        }
        Arc::new(CycField { order, modulus, powers })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q, i.e. Euler's phi of the order.
    pub fn dim(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> CycRat {
        CycRat { field: self.clone(), coeffs: vec![BigRational::zero(); self.dim()] }
    }

    pub fn one(self: &Arc<Self>) -> CycRat {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> CycRat {
        self.from_rational(BigRational::from_integer(v.into()))
    }

    pub fn from_rational(self: &Arc<Self>, v: BigRational) -> CycRat {
        let mut out = self.zero();
        out.coeffs[0] = v;
        out
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycRat {
        let idx = k.rem_euclid(self.order as i64) as usize;
        CycRat { field: self.clone(), coeffs: self.powers[idx].clone() }
    }

    /// Reduce an arbitrary residue polynomial (coefficients low to high).
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[BigRational]) -> CycRat {
        let red = UniPoly::new(coeffs.to_vec()).div_rem(&self.modulus).1;
        CycRat { field: self.clone(), coeffs: (0..self.dim()).map(|k| red.coeff(k)).collect() }
    }
}

/// An element of Q(zeta_N), stored as the unique reduced residue mod Phi_N.
#[derive(Clone)]
pub struct CycRat {
    field: Arc<CycField>,
    coeffs: Vec<BigRational>,
}

impl CycRat {
    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    fn check_field(&self, other: &CycRat) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order,
            "mixing Q(zeta_{}) and Q(zeta_{})",
            self.field.order,
            other.field.order
        );
    }

    pub fn scale(&self, c: &BigRational) -> CycRat {
        CycRat { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn inv(&self) -> Result<CycRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(q.recip()));
        }
        let a = UniPoly::new(self.coeffs.clone());
        let (g, s) = a.gcd_with_cofactor(&self.field.modulus);
        // Phi_N is irreducible, so any nonzero residue is coprime to it.
        debug_assert_eq!(g.degree(), Some(0));
        Ok(self.field.from_coeffs(s.coeffs()))
    }

    pub fn pow(&self, e: i64) -> Result<CycRat> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// True if the string form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() > 1
    }
}

impl PartialEq for CycRat {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycRat {}

impl std::hash::Hash for CycRat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycRat[{}]({})", self.field.order, self)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders `1 - 2*z + z^2`, ascending powers of `z`.
impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let power = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), power)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycRat> for &'a CycRat {
    type Output = CycRat;
    fn add(self, rhs: &CycRat) -> CycRat {
        self.check_field(rhs);
        CycRat {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycRat> for &'a CycRat {
    type Output = CycRat;
    fn sub(self, rhs: &CycRat) -> CycRat {
        self.check_field(rhs);
        CycRat {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycRat> for &'a CycRat {
    type Output = CycRat;
    fn mul(self, rhs: &CycRat) -> CycRat {
        self.check_field(rhs);
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        let dim = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * dim - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..dim].to_vec();
        for (k, c) in prod.iter().enumerate().skip(dim) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.field.powers[k]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        CycRat { field: self.field.clone(), coeffs: out }
    }
}

impl Neg for &CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Neg for CycRat {
    type Output = CycRat;
    fn neg(mut self) -> CycRat {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycRat> for CycRat {
            type Output = CycRat;
            fn $m(self, rhs: CycRat) -> CycRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycRat> for CycRat {
            type Output = CycRat;
            fn $m(self, rhs: &CycRat) -> CycRat {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycRat> for CycRat {
    fn add_assign(&mut self, rhs: &CycRat) {
        self.check_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycRat> for CycRat {
    fn sub_assign(&mut self, rhs: &CycRat) {
        self.check_field(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&CycRat> for CycRat {
    fn mul_assign(&mut self, rhs: &CycRat) {
        *self = &*self * rhs;
    }
}

/// Parse an exact rational literal such as `3`, `-7`, `5/2`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => match s.split_once('.') {
            Some((int, frac)) if frac.chars().all(|c| c.is_ascii_digit()) && !(int.is_empty() && frac.is_empty()) => {
                let digits: BigInt = format!("{int}{frac}").parse().ok()?;
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                Some(BigRational::new(digits, scale))
            }
            Some(_) => None,
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        },
    }
}
