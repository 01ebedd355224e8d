//! Sparse multivariate polynomials over Q(zeta_N).
//!
//! Variables live in one flat index space. Computations on the doubled ring
//! S = k[x, y] and the tripled ring k[x, y, z] use the block layout of
//! [`Block`]: with `n` base variables, `x_i` is index `i`, `y_i` is `n + i`,
//! `z_i` is `2n + i` (all 0-based).

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{CycField, CycRat};

pub use parse::parse_poly;

/// Exponent vector. Ordered by degrevlex: total degree first, ties broken in
/// favour of the smaller exponent in the last differing variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[idx] = 1;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn resized(&self, nvars: usize) -> Monomial {
        let mut v = self.0.clone();
        v.resize(nvars, 0);
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable block of the doubled/tripled layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    X,
    Y,
    Z,
}

impl Block {
    pub fn offset(self, n: usize) -> usize {
        match self {
            Block::X => 0,
            Block::Y => n,
            Block::Z => 2 * n,
        }
    }

    /// Flat index of the `i`-th variable (0-based) of this block.
    pub fn var(self, i: usize, n: usize) -> usize {
        self.offset(n) + i
    }
}

/// Default variable names for the tripled layout: the user's base names for
/// the x block, then `y1..yn`, `z1..zn`.
pub fn layout_names(base: &[String], nvars: usize) -> Vec<String> {
    let n = base.len();
    (0..nvars)
        .map(|v| match (v / n.max(1), v % n.max(1)) {
            (0, i) => base[i].clone(),
            (1, i) => format!("y{}", i + 1),
            (2, i) => format!("z{}", i + 1),
            _ => format!("v{}", v + 1),
        })
        .collect()
}

#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<CycField>,
    nvars: usize,
    terms: BTreeMap<Monomial, CycRat>,
}

impl MultiPoly {
    pub fn zero(field: &Arc<CycField>, nvars: usize) -> Self {
        MultiPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: CycRat, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &Arc<CycField>, nvars: usize) -> Self {
        Self::constant(field.one(), nvars)
    }

    pub fn var(field: &Arc<CycField>, nvars: usize, idx: usize) -> Self {
        Self::term(field.one(), Monomial::var(nvars, idx))
    }

    pub fn term(c: CycRat, m: Monomial) -> Self {
        let mut p = Self::zero(c.field(), m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(
        field: &Arc<CycField>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, CycRat)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), nvars);
            p.add_term(m, &c);
        }
        p
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending degrevlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&CycRat> {
        self.terms.get(m)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycRat)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> CycRat {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Whether any of the listed variables occurs.
    pub fn involves_any(&self, vars: &[usize]) -> bool {
        self.terms.keys().any(|m| vars.iter().any(|&v| m.0[v] > 0))
    }

    pub fn add_term(&mut self, m: Monomial, c: &CycRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &CycRat) {
        self.add_term(m, &-c);
    }

    pub fn scale(&self, c: &CycRat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &CycRat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::one(&self.field, self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Re-embed into a ring with `nvars` variables. Variables beyond the new
    /// count must not occur.
    pub fn with_nvars(&self, nvars: usize) -> MultiPoly {
        if nvars == self.nvars {
            return self.clone();
        }
        if nvars < self.nvars {
            assert!(
                !self.involves_any(&(nvars..self.nvars).collect::<Vec<_>>()),
                "cannot drop variables that occur in the polynomial"
            );
        }
        MultiPoly {
            field: self.field.clone(),
            nvars,
            terms: self.terms.iter().map(|(m, c)| (m.resized(nvars), c.clone())).collect(),
        }
    }

    /// Simultaneous substitution `var -> poly`; unbound variables pass
    /// through. Bound polynomials and the result live in `out_nvars`
    /// variables (which must be at least `self.nvars` when any variable is
    /// left unbound).
    pub fn substitute(&self, bindings: &BTreeMap<usize, MultiPoly>, out_nvars: usize) -> MultiPoly {
        let mut out = Self::zero(&self.field, out_nvars);
        let mut power_cache: BTreeMap<(usize, u16), MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mono = Monomial::one(out_nvars);
            let mut factor = Self::constant(c.clone(), out_nvars);
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match bindings.get(&v) {
                    Some(p) => {
                        assert_eq!(p.nvars, out_nvars, "binding lives in the wrong ring");
                        let pw = power_cache.entry((v, e)).or_insert_with(|| p.pow(e as u32));
                        factor = &factor * &*pw;
                    }
                    None => mono.0[v] += e,
                }
            }
            for (k, a) in factor.terms {
                out.add_term(k.mul(&mono), &a);
            }
        }
        out
    }

    /// Substitution where every variable maps to a scaled variable or to
    /// zero: `v -> c * out_var` for `Some((out_var, c))`, `v -> 0` for
    /// `None`. Much cheaper than [`MultiPoly::substitute`].
    pub fn map_vars(&self, images: &[Option<(usize, CycRat)>], out_nvars: usize) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let mut out = Self::zero(&self.field, out_nvars);
        'terms: for (m, c) in &self.terms {
            let mut mono = Monomial::one(out_nvars);
            let mut coef = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match &images[v] {
                    None => continue 'terms,
                    Some((t, s)) => {
                        mono.0[*t] += e;
                        if !s.is_one() {
                            coef = &coef * &s.pow(e as i64).expect("nonzero power");
                        }
                    }
                }
            }
            out.add_term(mono, &coef);
        }
        out
    }

    /// Rescale variables by roots of unity: `v -> zeta^{twist[v]} v`.
    pub fn twist(&self, twist: &[i64]) -> MultiPoly {
        assert_eq!(twist.len(), self.nvars);
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let k: i64 = m.0.iter().zip(twist).map(|(&e, &t)| e as i64 * t).sum();
                    let c = if k.rem_euclid(self.field.order() as i64) == 0 {
                        c.clone()
                    } else {
                        c * &self.field.zeta_pow(k)
                    };
                    (m.clone(), c)
                })
                .collect(),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> MultiPoly {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut k = m.clone();
            k.0[var] -= 1;
            out.add_term(k, &c.scale(&num_rational::BigRational::from_integer(e.into())));
        }
        out
    }

    /// Exact quotient `self / divisor`; fails if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.field, self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(Error::NonExactDivision {
                    context: format!("leading monomial {:?} not divisible", m.exps()),
                });
            }
            let qm = lm.quotient_of(m);
            let qc = c * &lc_inv;
            for (dm, dc) in &divisor.terms {
                rem.sub_term(dm.mul(&qm), &(dc * &qc));
            }
            quot.add_term(qm, &qc);
        }
        Ok(quot)
    }

    /// Formatting with explicit variable names; terms in descending order.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names: Some(names) }
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PolyDisplay { poly: self, names: None }.fmt(f)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: Option<&'a [String]>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let cs = c.to_string();
            let (neg, mag) = if c.is_compound() {
                (false, format!("({cs})"))
            } else if let Some(s) = cs.strip_prefix('-') {
                (true, s.to_string())
            } else {
                (false, cs)
            };
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || mag != "1" {
                factors.push(mag);
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = match self.names {
                    Some(ns) => ns[v].clone(),
                    None => format!("x{}", v + 1),
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.sub_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl std::ops::SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars);
        for (m, c) in &rhs.terms {
            self.sub_term(m.clone(), c);
        }
    }
}

/// Divided difference of `p` in the variable block `src` towards `dst` at
/// position `j` (0-based):
///
/// `(p(dst_0..dst_j, src_{j+1}..) - p(dst_0..dst_{j-1}, src_j..)) / (dst_j - src_j)`
///
/// where `p` is regarded as a polynomial in the `src` block only. The result
/// lives in the smallest layout containing both blocks.
pub fn nabla(p: &MultiPoly, j: usize, src: Block, dst: Block, n: usize) -> Result<MultiPoly> {
    assert!(j < n, "nabla index out of range");
    let out_nvars = p.nvars.max(dst.offset(n) + n).max(src.offset(n) + n);
    let lifted = p.with_nvars(out_nvars);
    let field = p.field.clone();
    let image = |upto: usize| -> Vec<Option<(usize, CycRat)>> {
        (0..out_nvars)
            .map(|v| {
                let target = if v >= src.offset(n) && v < src.offset(n) + n && v - src.offset(n) < upto {
                    dst.var(v - src.offset(n), n)
                } else {
                    v
                };
                Some((target, field.one()))
            })
            .collect()
    };
    let upper = lifted.map_vars(&image(j + 1), out_nvars);
    let lower = lifted.map_vars(&image(j), out_nvars);
    let denom = &MultiPoly::var(&field, out_nvars, dst.var(j, n)) - &MultiPoly::var(&field, out_nvars, src.var(j, n));
    (&upper - &lower).exact_div(&denom).map_err(|e| match e {
        Error::NonExactDivision { context } => Error::NonExactDivision { context: format!("nabla_{}: {context}", j + 1) },
        other => other,
    })
}

/// `nabla_i^{y->(y,z)} nabla_j^{x->(x,y)} w` for `i <= j` (0-based), a
/// polynomial in the tripled layout.
pub fn double_nabla(w: &MultiPoly, i: usize, j: usize, n: usize) -> Result<MultiPoly> {
    if i > j || j >= n {
        return Err(Error::IndexOrder { i: i + 1, j: j + 1, n });
    }
    let first = nabla(w, j, Block::X, Block::Y, n)?;
    nabla(&first, i, Block::Y, Block::Z, n)
}

/// Outcome of the standing-assumption checks on a potential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialDiagnostics {
    /// `W(0) = 0`.
    pub vanishes_at_origin: bool,
    /// Every partial derivative vanishes at the origin.
    pub critical_at_origin: bool,
}

impl PotentialDiagnostics {
    pub fn passed(&self) -> bool {
        self.vanishes_at_origin && self.critical_at_origin
    }
}

pub fn validate_potential(w: &MultiPoly) -> PotentialDiagnostics {
    PotentialDiagnostics {
        vanishes_at_origin: w.constant_term().is_zero(),
        critical_at_origin: w.terms().all(|(m, _)| m.degree() != 1),
    }
}
