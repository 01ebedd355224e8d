//! Gröbner bases (degrevlex) and normal forms in Jacobian rings.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::poly::{Monomial, MultiPoly};
use crate::scalar::CycField;

/// Reduced Gröbner basis of an ideal of `k[x_v : v in active]`, stored in an
/// ambient ring of `nvars` variables. Generators are monic and sorted by
/// leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    field: Arc<CycField>,
    nvars: usize,
    active: Vec<usize>,
    gens: Vec<MultiPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Finite(usize),
    Infinite,
}

impl fmt::Display for QuotientDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDim::Finite(d) => write!(f, "{d}"),
            QuotientDim::Infinite => f.write_str("INFINITE"),
        }
    }
}

fn monic(p: &MultiPoly) -> MultiPoly {
    let (_, lc) = p.leading_term().expect("monic of zero polynomial");
    if lc.is_one() {
        p.clone()
    } else {
        p.scale(&lc.inv().expect("nonzero leading coefficient"))
    }
}

fn lm(p: &MultiPoly) -> &Monomial {
    p.leading_term().expect("nonzero polynomial").0
}

/// Full reduction of `p` modulo `basis` (each element must be monic).
fn reduce(p: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let mut rest = p.clone();
    let mut out = MultiPoly::zero(p.field(), p.nvars());
    while let Some((m, c)) = rest.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        match basis.iter().find(|g| lm(g).divides(&m)) {
            Some(g) => {
                let q = lm(g).quotient_of(&m);
                rest -= &g.mul_term(&q, &c);
            }
            None => {
                out.add_term(m.clone(), &c);
                rest -= &MultiPoly::term(c, m);
            }
        }
    }
    out
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let l = lm(f).lcm(lm(g));
    let one = f.field().one();
    &f.mul_term(&lm(f).quotient_of(&l), &one) - &g.mul_term(&lm(g).quotient_of(&l), &one)
}

/// Buchberger's algorithm with the normal selection strategy and both
/// criteria. `active` lists the variables the generators may involve.
pub fn buchberger(field: &Arc<CycField>, nvars: usize, active: &[usize], gens: &[MultiPoly]) -> GroebnerBasis {
    let mut basis: Vec<MultiPoly> = Vec::new();
    let mut pairs: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let add = |p: MultiPoly, basis: &mut Vec<MultiPoly>, pairs: &mut BTreeSet<_>, pending: &mut BTreeSet<_>| {
        let p = monic(&p);
        let k = basis.len();
        for i in 0..k {
            let lcm = lm(&basis[i]).lcm(lm(&p));
            pairs.insert((lcm, i, k));
            pending.insert((i, k));
        }
        basis.push(p);
    };

    for g in gens {
        assert_eq!(g.nvars(), nvars);
        let r = reduce(g, &basis);
        if !r.is_zero() {
            add(r, &mut basis, &mut pairs, &mut pending);
        }
    }

    while let Some((lcm, i, j)) = pairs.pop_first() {
        pending.remove(&(i, j));
        if lm(&basis[i]).is_coprime(lm(&basis[j])) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            add(r, &mut basis, &mut pairs, &mut pending);
        }
    }

    // minimize, then inter-reduce
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(o, h)| {
            o != idx && lm(h).divides(lm(g)) && (lm(h) != lm(g) || o < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by(|a, b| lm(a).cmp(lm(b)));
    let reduced: Vec<MultiPoly> = (0..minimal.len())
        .map(|i| {
            let others: Vec<MultiPoly> =
                minimal.iter().enumerate().filter(|(o, _)| *o != i).map(|(_, g)| g.clone()).collect();
            let (m, c) = minimal[i].leading_term().unwrap();
            let tail = &minimal[i] - &MultiPoly::term(c.clone(), m.clone());
            &MultiPoly::term(c.clone(), m.clone()) + &reduce(&tail, &others)
        })
        .collect();

    GroebnerBasis { field: field.clone(), nvars, active: active.to_vec(), gens: reduced }
}

/// Gröbner basis of the ideal of partial derivatives of `w` with respect to
/// the variables in `vars`. With no variables this is the zero ideal of `k`.
pub fn jacobian_ideal(w: &MultiPoly, vars: &[usize]) -> GroebnerBasis {
    let partials: Vec<MultiPoly> = vars.iter().map(|&v| w.partial_derivative(v)).collect();
    buchberger(w.field(), w.nvars(), vars, &partials)
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.gens.iter().map(lm)
    }

    /// Remainder of `p` under division by the basis.
    pub fn normal_form(&self, p: &MultiPoly) -> MultiPoly {
        reduce(&p.with_nvars(self.nvars), &self.gens)
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.gens.iter().any(|g| lm(g).divides(m))
    }

    /// Standard monomials in the active variables, ascending; `None` when
    /// the quotient is infinite dimensional.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let mut bounds = Vec::with_capacity(self.active.len());
        for &v in &self.active {
            let pure = self
                .gens
                .iter()
                .filter_map(|g| {
                    let m = lm(g);
                    let e = m.exps();
                    (e.iter().enumerate().all(|(w, &x)| w == v || x == 0)).then_some(e[v])
                })
                .min()?;
            bounds.push(pure);
        }
        if self.gens.iter().any(|g| lm(g).is_one()) {
            return Some(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur = vec![0u16; self.active.len()];
        loop {
            let mut exps = vec![0u16; self.nvars];
            for (k, &v) in self.active.iter().enumerate() {
                exps[v] = cur[k];
            }
            let m = Monomial::from_exps(&exps);
            if self.is_standard(&m) {
                out.push(m);
            }
            let mut k = 0;
            loop {
                if k == cur.len() {
                    out.sort();
                    return Some(out);
                }
                cur[k] += 1;
                if cur[k] < bounds[k] {
                    break;
                }
                cur[k] = 0;
                k += 1;
            }
        }
    }

    pub fn quotient_dimension(&self) -> QuotientDim {
        match self.standard_monomials() {
            Some(v) => QuotientDim::Finite(v.len()),
            None => QuotientDim::Infinite,
        }
    }
}

/// A class in `k[active]/I`, held by its normal form.
#[derive(Clone)]
pub struct JacClass {
    rep: MultiPoly,
    basis: Arc<GroebnerBasis>,
}

impl JacClass {
    pub fn new(p: &MultiPoly, basis: &Arc<GroebnerBasis>) -> Self {
        JacClass { rep: basis.normal_form(p), basis: basis.clone() }
    }

    pub fn rep(&self) -> &MultiPoly {
        &self.rep
    }

    pub fn basis(&self) -> &Arc<GroebnerBasis> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl PartialEq for JacClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl fmt::Debug for JacClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}
