//! The graded Clifford algebra on `theta_1..theta_n`, `d_1..d_n` over a
//! polynomial ring, kept in normal order (all thetas left of all ds).
//!
//! Relations: `theta_i theta_j = -theta_j theta_i`, `d_i d_j = -d_j d_i`,
//! `d_i theta_j = -theta_j d_i + delta_ij`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::poly::MultiPoly;
use crate::scalar::{CycField, CycRat};

/// Indices of a bit mask, ascending.
pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

/// Sign of sorting a sequence of distinct odd generators into ascending
/// order, or `None` when an index repeats (the product vanishes).
pub fn sort_sign(seq: &[usize]) -> Option<(i32, u32)> {
    let mut mask = 0u32;
    let mut inversions = 0u32;
    for &i in seq {
        if mask >> i & 1 == 1 {
            return None;
        }
        inversions += (mask >> i >> 1).count_ones();
        mask |= 1 << i;
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, mask))
}

/// Sign of concatenating two ascending words `a` then `b` into ascending
/// order; `None` if they overlap.
fn merge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    // count pairs (x in a, y in b) with x > y
    let mut inv = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inv += (a >> y >> 1).count_ones();
        rest &= rest - 1;
    }
    Some(if inv % 2 == 0 { 1 } else { -1 })
}

/// Normal-ordered monomial `theta_I d_J`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    pub theta: u32,
    pub del: u32,
}

/// Lexicographic comparison of two equal-size ascending index sets: the set
/// holding the lowest differing index comes first.
fn set_lex(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b).trailing_zeros();
    if a >> low & 1 == 1 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.theta
            .count_ones()
            .cmp(&other.theta.count_ones())
            .then(self.del.count_ones().cmp(&other.del.count_ones()))
            .then(set_lex(self.theta, other.theta))
            .then(set_lex(self.del, other.del))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub const ONE: Word = Word { theta: 0, del: 0 };

    pub fn new(theta: &[usize], del: &[usize]) -> Word {
        Word { theta: mask_of(theta), del: mask_of(del) }
    }

    pub fn parity(self) -> u8 {
        ((self.theta.count_ones() + self.del.count_ones()) % 2) as u8
    }

    /// `(theta_I d_J)(theta_K d_L)` expanded in normal order.
    pub fn product(self, rhs: Word) -> Vec<(i32, Word)> {
        // move each theta_k of rhs left through d_J, in ascending k
        let mut cur: Vec<(i32, u32, u32)> = vec![(1, 0, self.del)];
        let mut rest = rhs.theta;
        while rest != 0 {
            let k = rest.trailing_zeros();
            rest &= rest - 1;
            let mut next = Vec::with_capacity(cur.len() * 2);
            for (s, a, b) in cur {
                let m = b.count_ones();
                // d_B theta_k = (-1)^{|B|} theta_k d_B  (+ contraction if k in B)
                if a >> k & 1 == 0 {
                    let sa = (a >> k >> 1).count_ones(); // theta_A theta_k reordering
                    let sign = s * pm(m + sa);
                    next.push((sign, a | 1 << k, b));
                }
                if b >> k & 1 == 1 {
                    let p = (b & ((1u32 << k) - 1)).count_ones();
                    next.push((s * pm(m - 1 - p), a, b & !(1 << k)));
                }
            }
            cur = next;
        }
        let mut out = Vec::with_capacity(cur.len());
        for (s, a, b) in cur {
            let Some(s1) = merge_sign(self.theta, a) else { continue };
            let Some(s2) = merge_sign(b, rhs.del) else { continue };
            out.push((s * s1 * s2, Word { theta: self.theta | a, del: b | rhs.del }));
        }
        out
    }

    fn fmt_word(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let th: Vec<String> = mask_indices(self.theta).iter().map(|i| format!("th[{}]", i + 1)).collect();
        let de: Vec<String> = mask_indices(self.del).iter().map(|i| format!("d[{}]", i + 1)).collect();
        match (th.is_empty(), de.is_empty()) {
            (true, true) => f.write_str("1"),
            (false, true) => f.write_str(&th.concat()),
            (true, false) => f.write_str(&de.concat()),
            (false, false) => write!(f, "{} {}", th.concat(), de.concat()),
        }
    }
}

fn pm(e: u32) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Element of the Clifford algebra with polynomial coefficients in
/// `nvars` variables.
#[derive(Clone)]
pub struct CliffordElem {
    field: Arc<CycField>,
    n: usize,
    nvars: usize,
    terms: BTreeMap<Word, MultiPoly>,
}

impl CliffordElem {
    pub fn zero(field: &Arc<CycField>, n: usize, nvars: usize) -> Self {
        CliffordElem { field: field.clone(), n, nvars, terms: BTreeMap::new() }
    }

    pub fn one(field: &Arc<CycField>, n: usize, nvars: usize) -> Self {
        Self::scalar(MultiPoly::one(field, nvars), n)
    }

    pub fn scalar(c: MultiPoly, n: usize) -> Self {
        Self::monomial(c, Word::ONE, n)
    }

    pub fn monomial(c: MultiPoly, w: Word, n: usize) -> Self {
        let mut e = Self::zero(c.field(), n, c.nvars());
        e.add_term(w, &c);
        e
    }

    /// `c * theta_{seq} d_{seq'}` for arbitrary (unsorted) index sequences.
    pub fn from_sequence(c: MultiPoly, theta: &[usize], del: &[usize], n: usize) -> Self {
        let mut e = Self::zero(c.field(), n, c.nvars());
        if let (Some((s1, t)), Some((s2, d))) = (sort_sign(theta), sort_sign(del)) {
            let c = if s1 * s2 == 1 { c } else { -&c };
            e.add_term(Word { theta: t, del: d }, &c);
        }
        e
    }

    pub fn theta(field: &Arc<CycField>, n: usize, nvars: usize, i: usize) -> Self {
        Self::monomial(MultiPoly::one(field, nvars), Word { theta: 1 << i, del: 0 }, n)
    }

    pub fn del(field: &Arc<CycField>, n: usize, nvars: usize, i: usize) -> Self {
        Self::monomial(MultiPoly::one(field, nvars), Word { theta: 0, del: 1 << i }, n)
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: Word) -> MultiPoly {
        self.terms.get(&w).cloned().unwrap_or_else(|| MultiPoly::zero(&self.field, self.nvars))
    }

    pub fn add_term(&mut self, w: Word, c: &MultiPoly) {
        assert_eq!(c.nvars(), self.nvars, "coefficient ring mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
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

    /// `Some(parity)` if homogeneous (the zero element counts as even).
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|w| w.parity());
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    /// (even part, odd part).
    pub fn split_parity(&self) -> (CliffordElem, CliffordElem) {
        let mut even = Self::zero(&self.field, self.n, self.nvars);
        let mut odd = even.clone();
        for (w, c) in &self.terms {
            if w.parity() == 0 {
                even.terms.insert(*w, c.clone());
            } else {
                odd.terms.insert(*w, c.clone());
            }
        }
        (even, odd)
    }

    pub fn map_coeffs(&self, nvars: usize, f: impl Fn(&MultiPoly) -> MultiPoly) -> CliffordElem {
        let mut out = Self::zero(&self.field, self.n, nvars);
        for (w, c) in &self.terms {
            out.add_term(*w, &f(c));
        }
        out
    }

    /// Rescale `theta_i` by `zeta^{th[i]}` and `d_i` by `zeta^{de[i]}`.
    pub fn twist_generators(&self, th: &[i64], de: &[i64]) -> CliffordElem {
        let mut out = Self::zero(&self.field, self.n, self.nvars);
        let order = self.field.order() as i64;
        for (w, c) in &self.terms {
            let k: i64 = mask_indices(w.theta).iter().map(|&i| th[i]).sum::<i64>()
                + mask_indices(w.del).iter().map(|&i| de[i]).sum::<i64>();
            if k.rem_euclid(order) == 0 {
                out.terms.insert(*w, c.clone());
            } else {
                out.add_term(*w, &c.scale(&self.field.zeta_pow(k)));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycRat) -> CliffordElem {
        self.map_coeffs(self.nvars, |p| p.scale(c))
    }

    pub fn mul_poly(&self, c: &MultiPoly) -> CliffordElem {
        self.map_coeffs(self.nvars, |p| p * c)
    }

    /// Keep only the terms without `d` factors.
    pub fn exterior_part(&self) -> CliffordElem {
        let mut out = Self::zero(&self.field, self.n, self.nvars);
        for (w, c) in &self.terms {
            if w.del == 0 {
                out.terms.insert(*w, c.clone());
            }
        }
        out
    }

    pub fn is_exterior(&self) -> bool {
        self.terms.keys().all(|w| w.del == 0)
    }

    pub fn is_del_only(&self) -> bool {
        self.terms.keys().all(|w| w.theta == 0)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> CliffordDisplay<'a> {
        CliffordDisplay { elem: self, names: Some(names) }
    }

    /// `(I, J, coefficient)` triples with 1-based indices.
    pub fn dump(&self, names: &[String]) -> Vec<(Vec<usize>, Vec<usize>, String)> {
        self.terms
            .iter()
            .map(|(w, c)| {
                (
                    mask_indices(w.theta).iter().map(|i| i + 1).collect(),
                    mask_indices(w.del).iter().map(|i| i + 1).collect(),
                    c.display_with(names).to_string(),
                )
            })
            .collect()
    }
}

pub fn clifford_mul(a: &CliffordElem, b: &CliffordElem) -> CliffordElem {
    assert_eq!(a.n, b.n);
    assert_eq!(a.nvars, b.nvars);
    let mut out = CliffordElem::zero(&a.field, a.n, a.nvars);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let prod = wa.product(*wb);
            if prod.is_empty() {
                continue;
            }
            let c = ca * cb;
            for (s, w) in prod {
                if s == 1 {
                    out.add_term(w, &c);
                } else {
                    out.add_term(w, &-&c);
                }
            }
        }
    }
    out
}

/// Action on the exterior algebra: `a * v` with every term that keeps a `d`
/// factor discarded.
pub fn apply_to_exterior(a: &CliffordElem, v: &CliffordElem) -> CliffordElem {
    debug_assert!(v.is_exterior());
    clifford_mul(a, v).exterior_part()
}

/// `Y(p1 (x) p2 (x) q1 (x) q2) = (-1)^{|q1||p2|} p1(q1) p2(q2)` extended
/// bilinearly; inhomogeneous arguments are split by parity.
pub fn upsilon(p1: &CliffordElem, p2: &CliffordElem, q1: &CliffordElem, q2: &CliffordElem) -> CliffordElem {
    let mut out = CliffordElem::zero(&p1.field, p1.n, p1.nvars);
    let (p2e, p2o) = p2.split_parity();
    let (q1e, q1o) = q1.split_parity();
    for (p2part, p2par) in [(&p2e, 0), (&p2o, 1)] {
        if p2part.is_zero() {
            continue;
        }
        let right_base = p2part;
        for (q1part, q1par) in [(&q1e, 0), (&q1o, 1)] {
            if q1part.is_zero() {
                continue;
            }
            let left = apply_to_exterior(p1, q1part);
            let right = apply_to_exterior(right_base, q2);
            let term = clifford_mul(&left, &right);
            if p2par * q1par == 1 {
                out = &out - &term;
            } else {
                out = &out + &term;
            }
        }
    }
    out
}

/// Formal sum of `c * (u (x) v)` with `u`, `v` ascending `d`-words, in the
/// graded tensor square of the `d`-algebra.
#[derive(Clone)]
pub struct TensorSum {
    field: Arc<CycField>,
    n: usize,
    nvars: usize,
    terms: BTreeMap<(u32, u32), MultiPoly>,
}

impl TensorSum {
    pub fn zero(field: &Arc<CycField>, n: usize, nvars: usize) -> Self {
        TensorSum { field: field.clone(), n, nvars, terms: BTreeMap::new() }
    }

    pub fn one(field: &Arc<CycField>, n: usize, nvars: usize) -> Self {
        let mut t = Self::zero(field, n, nvars);
        t.terms.insert((0, 0), MultiPoly::one(field, nvars));
        t
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &MultiPoly)> {
        self.terms.iter()
    }

    fn add_masked(&mut self, key: (u32, u32), c: &MultiPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    /// Add `c * (d_{u} (x) d_{v})` for index sequences in any order.
    pub fn add_term(&mut self, c: &MultiPoly, u: &[usize], v: &[usize]) {
        assert_eq!(c.nvars(), self.nvars);
        if let (Some((s1, mu)), Some((s2, mv))) = (sort_sign(u), sort_sign(v)) {
            if s1 * s2 == 1 {
                self.add_masked((mu, mv), c);
            } else {
                self.add_masked((mu, mv), &-c);
            }
        }
    }

    /// `(u (x) v)(u' (x) v') = (-1)^{|v||u'|} u u' (x) v v'`.
    pub fn mul(&self, rhs: &TensorSum) -> TensorSum {
        let mut out = TensorSum::zero(&self.field, self.n, self.nvars);
        for (&(u, v), c) in &self.terms {
            for (&(u2, v2), c2) in &rhs.terms {
                let (Some(s1), Some(s2)) = (merge_sign(u, u2), merge_sign(v, v2)) else { continue };
                let koszul = pm(v.count_ones() * u2.count_ones());
                let c = c * c2;
                if s1 * s2 * koszul == 1 {
                    out.add_masked((u | u2, v | v2), &c);
                } else {
                    out.add_masked((u | u2, v | v2), &-&c);
                }
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> TensorSum {
        let mut out = TensorSum::zero(&self.field, self.n, self.nvars);
        for (k, c) in &self.terms {
            out.add_masked(*k, &f(c));
        }
        out
    }

    /// Apply `Y(- (x) q1 (x) q2)` termwise.
    pub fn upsilon(&self, q1: &CliffordElem, q2: &CliffordElem) -> CliffordElem {
        let mut out = CliffordElem::zero(&self.field, self.n, self.nvars);
        for (&(u, v), c) in &self.terms {
            let p1 = CliffordElem::monomial(c.clone(), Word { theta: 0, del: u }, self.n);
            let p2 = CliffordElem::monomial(MultiPoly::one(&self.field, self.nvars), Word { theta: 0, del: v }, self.n);
            out = &out + &upsilon(&p1, &p2, q1, q2);
        }
        out
    }
}

impl PartialEq for TensorSum {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Debug for TensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(u, v), c)| {
                let w = |m: u32| mask_indices(m).iter().map(|i| format!("d[{}]", i + 1)).collect::<String>();
                format!("({c}) * {}(x){}", w(u), w(v))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `A^k` in the graded tensor algebra.
pub fn tensor_power_expand(a: &TensorSum, k: u32) -> TensorSum {
    let mut acc = TensorSum::one(&a.field, a.n, a.nvars);
    for _ in 0..k {
        acc = acc.mul(a);
    }
    acc
}

impl PartialEq for CliffordElem {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for CliffordElem {}

impl<'a> Add<&'a CliffordElem> for &'a CliffordElem {
    type Output = CliffordElem;
    fn add(self, rhs: &CliffordElem) -> CliffordElem {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c);
        }
        out
    }
}

impl<'a> Sub<&'a CliffordElem> for &'a CliffordElem {
    type Output = CliffordElem;
    fn sub(self, rhs: &CliffordElem) -> CliffordElem {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a CliffordElem> for &'a CliffordElem {
    type Output = CliffordElem;
    fn mul(self, rhs: &CliffordElem) -> CliffordElem {
        clifford_mul(self, rhs)
    }
}

impl Neg for &CliffordElem {
    type Output = CliffordElem;
    fn neg(self) -> CliffordElem {
        self.map_coeffs(self.nvars, |c| -c)
    }
}

pub struct CliffordDisplay<'a> {
    elem: &'a CliffordElem,
    names: Option<&'a [String]>,
}

impl fmt::Display for CliffordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return f.write_str("0");
        }
        for (idx, (w, c)) in self.elem.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            let cs = match self.names {
                Some(ns) => c.display_with(ns).to_string(),
                None => c.to_string(),
            };
            if c.len() > 1 {
                write!(f, "({cs}) * ")?;
            } else {
                write!(f, "{cs} * ")?;
            }
            w.fmt_word(f)?;
        }
        Ok(())
    }
}

impl fmt::Display for CliffordElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        CliffordDisplay { elem: self, names: None }.fmt(f)
    }
}

impl fmt::Debug for CliffordElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordElem[n={}]({})", self.n, self)
    }
}
