//! Diagonal abelian group actions, sectors and the restricted potentials.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{jacobian_ideal, GroebnerBasis, QuotientDim};
use crate::poly::{validate_potential, MultiPoly};
use crate::scalar::{CycField, CycRat};

/// `g . x_i = zeta_N^{e_i} x_i`, exponents reduced mod `N`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    exps: Vec<u32>,
    order: u32,
}

impl GroupElement {
    pub fn new(exps: &[i64], order: u32) -> Self {
        assert!(order >= 1);
        GroupElement { exps: exps.iter().map(|e| e.rem_euclid(order as i64) as u32).collect(), order }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        GroupElement { exps: vec![0; n], order }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.order, other.order);
        assert_eq!(self.n(), other.n());
        GroupElement {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| (a + b) % self.order).collect(),
            order: self.order,
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { exps: self.exps.iter().map(|&e| (self.order - e) % self.order).collect(), order: self.order }
    }

    /// Exponents as signed integers, optionally negated (for `g^{-1}`).
    pub fn signed_exps(&self) -> Vec<i64> {
        self.exps.iter().map(|&e| e as i64).collect()
    }

    /// Eigenvalue `g_i = zeta^{e_i}`.
    pub fn eigenvalue(&self, field: &Arc<CycField>, i: usize) -> CycRat {
        field.zeta_pow(self.exps[i] as i64)
    }

    /// `I^g`: indices with trivial eigenvalue.
    pub fn fixed(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.exps[i] == 0).collect()
    }

    /// `I_g`: indices with nontrivial eigenvalue.
    pub fn moving(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.exps[i] != 0).collect()
    }

    pub fn d(&self) -> usize {
        self.exps.iter().filter(|&&e| e != 0).count()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.order)
    }
}

/// Closure of the generators; identity first, then lexicographic on exponents.
pub fn enumerate_group(generators: &[GroupElement], n: usize, order: u32) -> Vec<GroupElement> {
    let id = GroupElement::identity(n, order);
    let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
    seen.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in generators {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    // the zero vector is lexicographically smallest, so it is already first
    seen.into_iter().collect()
}

/// Exact half-integer, stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `d_{g,h} = (d_g + d_h - d_{gh}) / 2`.
pub fn dgh(g: &GroupElement, h: &GroupElement) -> HalfInt {
    HalfInt(g.d() as i64 + h.d() as i64 - g.compose(h).d() as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActBlock {
    X,
    Y,
    Both,
}

/// `p(x, y) -> p(g x, y)`, `p(x, g y)` or `p(g x, g y)`, with `n` base
/// variables in the block layout.
pub fn act_on_poly(g: &GroupElement, p: &MultiPoly, block: ActBlock, n: usize) -> MultiPoly {
    let e = g.signed_exps();
    let twist: Vec<i64> = (0..p.nvars())
        .map(|v| {
            let (blk, i) = (v / n, v % n);
            match (block, blk) {
                (ActBlock::X | ActBlock::Both, 0) | (ActBlock::Y | ActBlock::Both, 1) => e[i],
                _ => 0,
            }
        })
        .collect();
    p.twist(&twist)
}

/// Scalar by which `hp` acts on the formal generator of sector `h`:
/// the product over `l in I_h` of `hp_l^{-1}`.
pub fn xi_action_scalar(field: &Arc<CycField>, hp: &GroupElement, h: &GroupElement) -> CycRat {
    let k: i64 = h.moving().iter().map(|&l| -(hp.exps[l] as i64)).sum();
    field.zeta_pow(k)
}

/// Fails with the first monomial of `w` whose coefficient changes under `g`.
pub fn check_invariant(w: &MultiPoly, g: &GroupElement, names: &[String]) -> Result<()> {
    let e = g.signed_exps();
    for (m, _) in w.terms() {
        let k: i64 = m.exps().iter().zip(&e).map(|(&a, &b)| a as i64 * b).sum();
        if k.rem_euclid(g.order() as i64) != 0 {
            let single = MultiPoly::term(w.field().one(), m.clone());
            return Err(Error::NotInvariant {
                element: g.to_string(),
                monomial: single.display_with(names).to_string(),
            });
        }
    }
    Ok(())
}

/// `f^g`: set the moving variables of `g` to zero (x block only).
pub fn restrict_to_fixed(p: &MultiPoly, g: &GroupElement) -> MultiPoly {
    let field = p.field();
    let n = g.n();
    let images: Vec<_> = (0..p.nvars())
        .map(|v| if v < n && g.exps[v] != 0 { None } else { Some((v, field.one())) })
        .collect();
    p.map_vars(&images, p.nvars())
}

#[derive(Clone, Debug)]
pub struct SectorInfo {
    pub g: GroupElement,
    pub fixed: Vec<usize>,
    pub moving: Vec<usize>,
    pub d: usize,
    /// `W^g` in the base variables.
    pub w_g: MultiPoly,
    pub jac: Arc<GroebnerBasis>,
    pub parity: u8,
}

impl SectorInfo {
    pub fn jac_dimension(&self) -> QuotientDim {
        self.jac.quotient_dimension()
    }
}

pub fn sector(w: &MultiPoly, g: &GroupElement, names: &[String]) -> Result<SectorInfo> {
    check_invariant(w, g, names)?;
    let w_g = restrict_to_fixed(w, g);
    let fixed = g.fixed();
    let jac = Arc::new(jacobian_ideal(&w_g, &fixed));
    Ok(SectorInfo { g: g.clone(), moving: g.moving(), d: g.d(), parity: (g.d() % 2) as u8, fixed, w_g, jac })
}

/// A potential with a diagonal group action: the shared context for every
/// computation downstream.
#[derive(Debug)]
pub struct Orbifold {
    field: Arc<CycField>,
    names: Vec<String>,
    w: MultiPoly,
    group: Vec<GroupElement>,
    sectors: Vec<Arc<SectorInfo>>,
}

impl Orbifold {
    /// Validates the potential and invariance under every generator, then
    /// builds the group and all sectors.
    pub fn new(
        field: Arc<CycField>,
        names: Vec<String>,
        w: MultiPoly,
        generators: &[GroupElement],
    ) -> Result<Self> {
        let n = names.len();
        if w.nvars() != n {
            return Err(Error::Instance(format!("potential has {} variables, expected {n}", w.nvars())));
        }
        let diag = validate_potential(&w);
        if !diag.passed() {
            return Err(Error::Instance(format!(
                "potential must vanish to second order at the origin ({diag:?})"
            )));
        }
        for g in generators {
            if g.n() != n || g.order() != field.order() {
                return Err(Error::Instance(format!("generator {g} does not match the instance shape")));
            }
            check_invariant(&w, g, &names)?;
        }
        let group = enumerate_group(generators, n, field.order());
        let sectors = group
            .iter()
            .map(|g| sector(&w, g, &names).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        Ok(Orbifold { field, names, w, group, sectors })
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn potential(&self) -> &MultiPoly {
        &self.w
    }

    pub fn group(&self) -> &[GroupElement] {
        &self.group
    }

    pub fn sectors(&self) -> &[Arc<SectorInfo>] {
        &self.sectors
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.group.binary_search(g).ok()
    }

    pub fn sector_of(&self, g: &GroupElement) -> &Arc<SectorInfo> {
        &self.sectors[self.index_of(g).expect("element of the group")]
    }

    /// Label `g<k>` in enumeration order.
    pub fn label(&self, g: &GroupElement) -> String {
        format!("g{}", self.index_of(g).expect("element of the group"))
    }

    /// Resolve `g<k>` or an exponent vector such as `3,2,1` / `(3,2,1)`.
    pub fn resolve(&self, id: &str) -> Result<GroupElement> {
        let id = id.trim();
        if let Some(k) = id.strip_prefix('g').and_then(|s| s.parse::<usize>().ok()) {
            return self.group.get(k).cloned().ok_or_else(|| Error::UnknownElement(id.to_string()));
        }
        let body = id.trim_start_matches('(').trim_end_matches(')');
        let exps: Option<Vec<i64>> = body.split(',').map(|s| s.trim().parse().ok()).collect();
        match exps {
            Some(e) if e.len() == self.n() => {
                let g = GroupElement::new(&e, self.field.order());
                self.index_of(&g).map(|_| g).ok_or_else(|| Error::UnknownElement(id.to_string()))
            }
            _ => Err(Error::UnknownElement(id.to_string())),
        }
    }

    /// Variable names for the tripled layout.
    pub fn layout_names(&self) -> Vec<String> {
        crate::poly::layout_names(&self.names, 3 * self.n())
    }
}
