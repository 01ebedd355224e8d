//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use twjac_core::clifford::{mask_indices, CliffordElem};
use twjac_core::orbifold::{GroupElement, Orbifold};
use twjac_core::poly::{Monomial, MultiPoly};
use twjac_core::{CycField, CycRat};

pub fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `rho_l = (3l, 2l, l)` in the `Z/6` fixture.
pub fn rho(l: i64) -> GroupElement {
    GroupElement::new(&[3 * l, 2 * l, l], 6)
}

// ---------------------------------------------------------------------------
// Clifford algebra acting on the exterior algebra of rank n.

pub type Matrix = Vec<Vec<BigRational>>;

fn zero_matrix(dim: usize) -> Matrix {
    vec![vec![BigRational::from_integer(0.into()); dim]; dim]
}

fn identity(dim: usize) -> Matrix {
    let mut m = zero_matrix(dim);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::from_integer(1.into());
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let dim = a.len();
    let mut out = zero_matrix(dim);
    for i in 0..dim {
        for k in 0..dim {
            if a[i][k] == BigRational::from_integer(0.into()) {
                continue;
            }
            for j in 0..dim {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

/// Left exterior multiplication by `theta_i` on basis vectors `e_S`.
fn theta_matrix(n: usize, i: usize) -> Matrix {
    let dim = 1 << n;
    let mut m = zero_matrix(dim);
    for s in 0..dim {
        if s >> i & 1 == 0 {
            let before = (s & ((1 << i) - 1)).count_ones();
            let sign = if before % 2 == 0 { 1 } else { -1 };
            m[s | 1 << i][s] = BigRational::from_integer(sign.into());
        }
    }
    m
}

/// Left contraction by `d_i`.
fn del_matrix(n: usize, i: usize) -> Matrix {
    let dim = 1 << n;
    let mut m = zero_matrix(dim);
    for s in 0..dim {
        if s >> i & 1 == 1 {
            let before = (s & ((1 << i) - 1)).count_ones();
            let sign = if before % 2 == 0 { 1 } else { -1 };
            m[s & !(1 << i)][s] = BigRational::from_integer(sign.into());
        }
    }
    m
}

/// Matrix of an element with rational constant coefficients; words are
/// `theta_I d_J` with both index lists ascending.
pub fn clifford_matrix(a: &CliffordElem) -> Matrix {
    let n = a.n();
    let dim = 1 << n;
    let mut out = zero_matrix(dim);
    for (w, c) in a.terms() {
        assert!(c.is_constant());
        let c = c.constant_term().as_rational().expect("rational coefficient").clone();
        let mut m = identity(dim);
        for i in mask_indices(w.theta) {
            m = mat_mul(&m, &theta_matrix(n, i));
        }
        for j in mask_indices(w.del) {
            m = mat_mul(&m, &del_matrix(n, j));
        }
        for r in 0..dim {
            for s in 0..dim {
                out[r][s] += &c * &m[r][s];
            }
        }
    }
    out
}

/// Random element with at most `terms` words and small integer coefficients.
pub fn random_clifford<R: Rng>(rng: &mut R, field: &Arc<CycField>, n: usize, terms: usize) -> CliffordElem {
    let mut e = CliffordElem::zero(field, n, 1);
    let count = rng.gen_range(1..=terms);
    for _ in 0..count {
        let theta: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let del: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let c = rng.gen_range(-5i64..=5);
        let poly = MultiPoly::constant(field.from_int(c), 1);
        e = &e + &CliffordElem::from_sequence(poly, &theta, &del, n);
    }
    e
}

// ---------------------------------------------------------------------------
// Macaulay matrices: affine Hilbert function of an ideal from the rank of
// the span of `m * f` over a degree window.

fn monomials_up_to(active: &[usize], nvars: usize, deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fn rec(k: usize, left: u32, active: &[usize], exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if k == active.len() {
            out.push(Monomial::from_exps(exps));
            return;
        }
        for e in 0..=left {
            exps[active[k]] = e as u16;
            rec(k + 1, left - e, active, exps, out);
        }
        exps[active[k]] = 0;
    }
    rec(0, deg, active, &mut exps, &mut out);
    out
}

type Col = (Reverse<u32>, Reverse<Monomial>);

fn col(m: &Monomial) -> Col {
    (Reverse(m.degree()), Reverse(m.clone()))
}

/// Row echelon form over `m * f` with `deg <= top`; returns, per degree,
/// how many pivots live in that degree.
fn pivot_degrees(gens: &[MultiPoly], active: &[usize], top: u32) -> BTreeMap<u32, usize> {
    let nvars = gens[0].nvars();
    let mut pivots: BTreeMap<Col, BTreeMap<Col, CycRat>> = BTreeMap::new();
    for f in gens {
        let Some(df) = f.total_degree() else { continue };
        if df > top {
            continue;
        }
        for m in monomials_up_to(active, nvars, top - df) {
            let mut row: BTreeMap<Col, CycRat> = BTreeMap::new();
            for (t, c) in f.terms() {
                row.insert(col(&t.mul(&m)), c.clone());
            }
            loop {
                let Some((lead, lc)) = row.iter().next().map(|(k, v)| (k.clone(), v.clone())) else { break };
                match pivots.get(&lead) {
                    Some(p) => {
                        for (k, v) in p {
                            let e = row.entry(k.clone()).or_insert_with(|| f.field().zero());
                            *e -= &(&lc * v);
                            if e.is_zero() {
                                row.remove(k);
                            }
                        }
                    }
                    None => {
                        let inv = lc.inv().unwrap();
                        let row: BTreeMap<Col, CycRat> = row.into_iter().map(|(k, v)| (k, &v * &inv)).collect();
                        pivots.insert(lead, row);
                        break;
                    }
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for (Reverse(d), _) in pivots.keys() {
        *out.entry(*d).or_insert(0) += 1;
    }
    out
}

fn hilbert(gens: &[MultiPoly], active: &[usize], top: u32) -> Vec<usize> {
    let nvars = gens[0].nvars();
    let piv = pivot_degrees(gens, active, top);
    let mut total = 0usize;
    let mut pivots_upto = 0usize;
    (0..=top)
        .map(|d| {
            total += monomials_up_to(active, nvars, d).iter().filter(|m| m.degree() == d).count();
            pivots_upto += piv.get(&d).copied().unwrap_or(0);
            total - pivots_upto
        })
        .collect()
}

/// `dim k[active]/(gens)` from Macaulay-matrix ranks; `None` when the affine
/// Hilbert function has not stabilized below `cap`.
pub fn macaulay_dimension(gens: &[MultiPoly], active: &[usize], cap: u32) -> Option<usize> {
    if active.is_empty() {
        return Some(if gens.iter().any(|g| !g.is_zero()) { 0 } else { 1 });
    }
    let gens: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return None;
    }
    let maxdeg = gens.iter().filter_map(|g| g.total_degree()).max().unwrap();
    let plateau = |hf: &[usize], usable: usize| (0..usable).find(|&d| hf[d] == hf[d + 1]).map(|d| hf[d]);
    let mut top = maxdeg + 2;
    while top <= cap {
        let hf = hilbert(&gens, active, top);
        let wider = hilbert(&gens, active, top + 3);
        // values near the top of the window are missing relations
        let usable = (top - maxdeg) as usize;
        if let (Some(a), Some(b)) = (plateau(&hf, usable), plateau(&wider, usable)) {
            if a == b {
                return Some(a);
            }
        }
        top += 2;
    }
    None
}

// ---------------------------------------------------------------------------
// Random diagonal-invariant potentials.

pub struct RandomInstance {
    pub orb: Arc<Orbifold>,
    pub description: String,
}

pub fn random_invariant_instance<R: Rng>(rng: &mut R) -> RandomInstance {
    loop {
        let n = rng.gen_range(1..=3usize);
        let order = *[2u32, 3, 4, 6].choose(rng).unwrap();
        let ngens = rng.gen_range(1..=2usize);
        let gens: Vec<GroupElement> = (0..ngens)
            .map(|_| {
                let e: Vec<i64> = (0..n).map(|_| rng.gen_range(0..order as i64)).collect();
                GroupElement::new(&e, order)
            })
            .collect();
        if gens.iter().all(|g| g.is_identity()) {
            continue;
        }
        let all = {
            let v: Vec<usize> = (0..n).collect();
            let mut ms = monomials_up_to(&v, n, 6);
            ms.retain(|m| m.degree() >= 2);
            ms
        };
        let invariant: Vec<&Monomial> = all
            .iter()
            .filter(|m| {
                gens.iter().all(|g| {
                    let s: u64 = m.exps().iter().zip(g.exps()).map(|(&a, &b)| a as u64 * b as u64).sum();
                    s % order as u64 == 0
                })
            })
            .collect();
        if invariant.is_empty() {
            continue;
        }
        let field = CycField::new(order);
        let mut w = MultiPoly::zero(&field, n);
        let count = rng.gen_range(1..=invariant.len().min(5));
        for m in invariant.choose_multiple(rng, count) {
            let mut c = field.from_int(*[-3i64, -2, -1, 1, 2, 3, 5].choose(rng).unwrap());
            if rng.gen_bool(0.3) {
                c = &c * &field.zeta_pow(rng.gen_range(0..order as i64));
            }
            if rng.gen_bool(0.2) {
                c = c.scale(&BigRational::new(BigInt::from(1), BigInt::from(rng.gen_range(2..5))));
            }
            w.add_term((*m).clone(), &c);
        }
        let description = format!(
            "N={order} W={} gens={:?}",
            w.display_with(&names(n)),
            gens.iter().map(|g| g.to_string()).collect::<Vec<_>>()
        );
        match Orbifold::new(field, names(n), w, &gens) {
            Ok(orb) => return RandomInstance { orb: Arc::new(orb), description },
            Err(e) => panic!("generated instance rejected ({description}): {e}"),
        }
    }
}

/// The randomized corpus used by the closedness and Koszul checks.
pub fn random_corpus(seed: u64, count: usize) -> Vec<RandomInstance> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_invariant_instance(&mut rng)).collect()
}
