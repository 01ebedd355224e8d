//! Structure constants of the twisted Jacobian algebra from the closed
//! formula, and their comparison against cup products of matrix
//! factorization morphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{mask_of, CliffordElem, TensorSum, Word};
use crate::error::Result;
use crate::ideal::JacClass;
use crate::mf::MfEngine;
use crate::orbifold::{act_on_poly, dgh, restrict_to_fixed, xi_action_scalar, ActBlock, GroupElement, HalfInt, Orbifold};
use crate::poly::{double_nabla, nabla, Block, MultiPoly};
use crate::scalar::CycRat;

/// Where `H_{W,g}` is evaluated: at `x` or at `g' x` for another element.
#[derive(Clone, Debug)]
pub enum At {
    X,
    Twisted(GroupElement),
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub g: GroupElement,
    pub h: GroupElement,
    pub d_gh: HalfInt,
    pub formula: JacClass,
    pub mf: JacClass,
    /// `prod_{l in I_g} h_l`, the factor by which `h^{-1}` acts on `Phi(xi_g)`.
    pub scalar: CycRat,
    /// Whether acting by substitution reproduced `scalar` exactly.
    pub scalar_consistent: bool,
    pub agree: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Formula,
    Mf,
    BothAgree,
    Disagree,
}

#[derive(Clone, Debug)]
pub struct TableEntry {
    pub g: GroupElement,
    pub h: GroupElement,
    pub d_gh: HalfInt,
    pub sigma: JacClass,
    pub provenance: Provenance,
}

/// The full multiplication table of generators.
#[derive(Clone, Debug)]
pub struct TwistedAlgebra {
    pub orb: Arc<Orbifold>,
    pub entries: Vec<TableEntry>,
}

#[derive(Serialize)]
struct JsonEntry {
    g: String,
    h: String,
    g_exps: Vec<u32>,
    h_exps: Vec<u32>,
    d_gh: HalfInt,
    sigma: String,
    method_agreement: bool,
    provenance: Provenance,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    variables: &'a [String],
    root_of_unity_order: u32,
    product_convention: &'static str,
    entries: Vec<JsonEntry>,
}

impl TwistedAlgebra {
    pub fn entry(&self, g: &GroupElement, h: &GroupElement) -> &TableEntry {
        let size = self.orb.group().len();
        let (a, b) = (self.orb.index_of(g).unwrap(), self.orb.index_of(h).unwrap());
        &self.entries[a * size + b]
    }

    pub fn all_agree(&self) -> bool {
        self.entries.iter().all(|e| matches!(e.provenance, Provenance::BothAgree))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = self.orb.names();
        let table = JsonTable {
            variables: names,
            root_of_unity_order: self.orb.field().order(),
            product_convention: "generators only; general elements extend bilinearly over lifted representatives",
            entries: self
                .entries
                .iter()
                .map(|e| JsonEntry {
                    g: self.orb.label(&e.g),
                    h: self.orb.label(&e.h),
                    g_exps: e.g.exps().to_vec(),
                    h_exps: e.h.exps().to_vec(),
                    d_gh: e.d_gh,
                    sigma: e.sigma.rep().display_with(names).to_string(),
                    method_agreement: e.provenance == Provenance::BothAgree,
                    provenance: e.provenance,
                })
                .collect(),
        };
        serde_json::to_value(table).expect("serializable table")
    }
}

/// Which side(s) to compute in [`TwJac::table`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Formula,
    Mf,
    Both,
}

pub struct TwJac {
    orb: Arc<Orbifold>,
    mf: MfEngine,
}

impl TwJac {
    pub fn new(orb: Arc<Orbifold>) -> Result<Self> {
        let mf = MfEngine::new(orb.clone())?;
        Ok(TwJac { orb, mf })
    }

    pub fn orbifold(&self) -> &Arc<Orbifold> {
        &self.orb
    }

    pub fn mf(&self) -> &MfEngine {
        &self.mf
    }

    fn n(&self) -> usize {
        self.orb.n()
    }

    /// `sum_{i <= j} nabla_i^{y->(y,z)} nabla_j^{x->(x,y)} W |_{y = g x, z = x} d_j (x) d_i`.
    pub fn hessian_tensor(&self, g: &GroupElement) -> Result<TensorSum> {
        let n = self.n();
        let field = self.orb.field();
        let e = g.signed_exps();
        let images: Vec<_> = (0..3 * n)
            .map(|v| {
                let k = v % n;
                match v / n {
                    1 => Some((k, field.zeta_pow(e[k]))),
                    _ => Some((k, field.one())),
                }
            })
            .collect();
        let w3 = self.orb.potential();
        let mut out = TensorSum::zero(field, n, n);
        for j in 0..n {
            for i in 0..=j {
                let c = double_nabla(w3, i, j, n)?.map_vars(&images, n);
                out.add_term(&c, &[j], &[i]);
            }
        }
        Ok(out)
    }

    /// `H_{W,g} = sum_{i<j in I_g} 1/(1-g_i) nabla_i^{x->(x,x^g)} nabla_j^{x->(x,gx)} W d_i d_j`
    /// as an element of `R[d]`, optionally evaluated at `g' x`.
    pub fn h_correction(&self, g: &GroupElement, at: &At) -> Result<Vec<(usize, usize, MultiPoly)>> {
        let n = self.n();
        let field = self.orb.field();
        let moving = g.moving();
        let e = g.signed_exps();
        // y -> g x, collapsing to n variables
        let y_to_gx: Vec<_> = (0..2 * n)
            .map(|v| if v < n { Some((v, field.one())) } else { Some((v - n, field.zeta_pow(e[v - n]))) })
            .collect();
        // y -> x^g
        let y_to_fixed: Vec<_> = (0..2 * n)
            .map(|v| {
                if v < n {
                    Some((v, field.one()))
                } else if e[v - n] == 0 {
                    Some((v - n, field.one()))
                } else {
                    None
                }
            })
            .collect();
        let mut out = Vec::new();
        for (b, &j) in moving.iter().enumerate() {
            let inner = nabla(self.orb.potential(), j, Block::X, Block::Y, n)?.map_vars(&y_to_gx, n);
            for &i in &moving[..b] {
                let outer = nabla(&inner, i, Block::X, Block::Y, n)?.map_vars(&y_to_fixed, n);
                let factor = (&field.one() - &g.eigenvalue(field, i)).inv()?;
                let mut c = outer.scale(&factor);
                if let At::Twisted(gp) = at {
                    c = act_on_poly(gp, &c, ActBlock::X, n);
                }
                if !c.is_zero() {
                    out.push((i, j, c));
                }
            }
        }
        Ok(out)
    }

    /// `sigma_{g,h}` in `Jac(W^{gh})`.
    pub fn sigma(&self, g: &GroupElement, h: &GroupElement) -> Result<JacClass> {
        let gh = g.compose(h);
        let target = &self.orb.sector_of(&gh).jac;
        let n = self.n();
        let field = self.orb.field();
        let Some(d) = dgh(g, h).as_integer() else {
            return Ok(JacClass::new(&MultiPoly::zero(field, n), target));
        };
        let mut t = self.hessian_tensor(g)?;
        for (i, j, c) in self.h_correction(g, &At::X)? {
            t.add_term(&c, &[i, j], &[]);
        }
        for (i, j, c) in self.h_correction(h, &At::Twisted(g.clone()))? {
            t.add_term(&c, &[], &[i, j]);
        }
        // only the moving variables of gh are killed by the reduction; doing
        // it before the power keeps intermediate coefficients small
        let t = t.map_coeffs(|c| restrict_to_fixed(c, &gh));
        let power = crate::clifford::tensor_power_expand(&t, d as u32);
        let theta = |x: &GroupElement| {
            CliffordElem::monomial(MultiPoly::one(field, n), Word { theta: mask_of(&x.moving()), del: 0 }, n)
        };
        let contracted = power.upsilon(&theta(g), &theta(h));
        let coeff = contracted.coeff(Word { theta: mask_of(&gh.moving()), del: 0 });
        let fact: BigInt = (1..=d).map(BigInt::from).product();
        let coeff = coeff.scale(&field.from_rational(BigRational::new(BigInt::one(), fact)));
        Ok(JacClass::new(&restrict_to_fixed(&coeff, &gh), target))
    }

    /// `sigma(g,h) = (-1)^{d_g d_h} (prod_{l in I_g} h_l) sigma(h,g)`.
    pub fn braided_check(&self, g: &GroupElement, h: &GroupElement) -> Result<bool> {
        let lhs = self.sigma(g, h)?;
        let rhs = self.sigma(h, g)?;
        let field = self.orb.field();
        let mut scalar = xi_action_scalar(field, &h.inverse(), g);
        if (g.d() * h.d()) % 2 == 1 {
            scalar = -scalar;
        }
        Ok(lhs.rep() == &rhs.rep().scale(&scalar))
    }

    /// Both sides of `Phi(xi_g . xi_h) = h^{-1} Phi(xi_g) cup Phi(xi_h)`.
    pub fn compare_methods(&self, g: &GroupElement, h: &GroupElement) -> Result<Comparison> {
        let formula = self.sigma(g, h)?;
        let (mf, scalar, scalar_consistent) = self.mf_product(g, h)?;
        let agree = formula.rep() == mf.rep();
        Ok(Comparison { g: g.clone(), h: h.clone(), d_gh: dgh(g, h), formula, mf, scalar, scalar_consistent, agree })
    }

    /// MF side of the product: class of `h^{-1} Phi(xi_g) cup Phi(xi_h)`.
    pub fn mf_product(&self, g: &GroupElement, h: &GroupElement) -> Result<(JacClass, CycRat, bool)> {
        let hinv = h.inverse();
        let phi_g = self.mf.exp_eta_generator(&g.inverse())?;
        let phi_h = self.mf.exp_eta_generator(&hinv)?;
        let acted = self.mf.group_act(&hinv, phi_g);
        let scalar = xi_action_scalar(self.orb.field(), &hinv, g);
        let consistent = acted == phi_g.scale(&scalar);
        let cup = self.mf.cup(&acted, phi_h)?;
        let class = self.mf.class_in_jac(&cup)?;
        // the target sector is (gh)^{-1}; its ring coincides with that of gh
        let target = &self.orb.sector_of(&g.compose(h)).jac;
        Ok((JacClass::new(class.rep(), target), scalar, consistent))
    }

    /// Associativity on generators `g, h, k`: `(mf, formula)` verdicts. The
    /// formula side multiplies lifted representatives without twisting.
    pub fn associativity_probe(&self, g: &GroupElement, h: &GroupElement, k: &GroupElement) -> Result<(bool, bool)> {
        let m = &self.mf;
        let phi = |x: &GroupElement| m.exp_eta_generator(&x.inverse());
        let prod = |a: &crate::mf::Morphism, b: &crate::mf::Morphism, b_elem: &GroupElement| {
            m.cup(&m.group_act(&b_elem.inverse(), a), b)
        };
        let left = prod(&prod(phi(g)?, phi(h)?, h)?, phi(k)?, k)?;
        let right = prod(phi(g)?, &prod(phi(h)?, phi(k)?, k)?, &h.compose(k))?;
        let mf_ok = m.leading_class(&left) == m.leading_class(&right);

        let ghk = g.compose(h).compose(k);
        let target = &self.orb.sector_of(&ghk).jac;
        let a = &self.sigma(g, h)?.rep().clone() * self.sigma(&g.compose(h), k)?.rep();
        let b = &self.sigma(g, &h.compose(k))?.rep().clone() * self.sigma(h, k)?.rep();
        let formula_ok = JacClass::new(&a, target) == JacClass::new(&b, target);
        Ok((mf_ok, formula_ok))
    }

    /// Every generator product, computed in parallel.
    pub fn table(&self, method: Method) -> Result<TwistedAlgebra> {
        let group = self.orb.group();
        let pairs: Vec<(usize, usize)> = (0..group.len()).flat_map(|a| (0..group.len()).map(move |b| (a, b))).collect();
        // warm the generator cache so workers do not race to build it
        if method != Method::Formula {
            group.par_iter().try_for_each(|g| self.mf.exp_eta_generator(g).map(|_| ()))?;
        }
        let entries = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (g, h) = (&group[a], &group[b]);
                let d_gh = dgh(g, h);
                let (sigma, provenance) = match method {
                    Method::Formula => (self.sigma(g, h)?, Provenance::Formula),
                    Method::Mf => (self.mf_product(g, h)?.0, Provenance::Mf),
                    Method::Both => {
                        let c = self.compare_methods(g, h)?;
                        let p = if c.agree { Provenance::BothAgree } else { Provenance::Disagree };
                        (c.formula, p)
                    }
                };
                Ok(TableEntry { g: g.clone(), h: h.clone(), d_gh, sigma, provenance })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistedAlgebra { orb: self.orb.clone(), entries })
    }
}

/// Worker pool sized by `TWJAC_THREADS` when set.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(k) = std::env::var("TWJAC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if k > 0 {
            b = b.num_threads(k);
        }
    }
    b.build().expect("thread pool")
}

/// Group sector pairs with integral `d_{g,h}` by value, for reporting.
pub fn integral_pairs(orb: &Orbifold) -> BTreeMap<(usize, usize), i64> {
    let group = orb.group();
    let mut out = BTreeMap::new();
    for (a, g) in group.iter().enumerate() {
        for (b, h) in group.iter().enumerate() {
            if let Some(d) = dgh(g, h).as_integer() {
                out.insert((a, b), d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::scalar::CycField;

    fn z3() -> Arc<Orbifold> {
        let k = CycField::new(3);
        let names: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let w = parse_poly("x1^3 + x2^3 + x3^3 - x1*x2*x3", &names, &Default::default(), &k).unwrap();
        Arc::new(Orbifold::new(k, names, w, &[GroupElement::new(&[1, 1, 1], 3)]).unwrap())
    }

    #[test]
    fn unit_sector() {
        let orb = z3();
        let tw = TwJac::new(orb.clone()).unwrap();
        let id = &orb.group()[0];
        for h in orb.group() {
            assert!(tw.sigma(id, h).unwrap().rep().constant_term().is_one());
            assert!(tw.sigma(h, id).unwrap().rep().constant_term().is_one());
        }
    }

    #[test]
    fn single_variable_hessian() {
        let k = CycField::new(2);
        let names = vec!["x1".to_string()];
        let w = parse_poly("x1^2", &names, &Default::default(), &k).unwrap();
        let orb = Arc::new(Orbifold::new(k.clone(), names, w, &[]).unwrap());
        let tw = TwJac::new(orb.clone()).unwrap();
        let mut expect = TensorSum::zero(&k, 1, 1);
        expect.add_term(&MultiPoly::one(&k, 1), &[0], &[0]);
        assert_eq!(tw.hessian_tensor(&orb.group()[0]).unwrap(), expect);
        assert!(tw.h_correction(&orb.group()[0], &At::X).unwrap().is_empty());
    }

    #[test]
    fn z3_methods_agree() {
        let orb = z3();
        let tw = TwJac::new(orb.clone()).unwrap();
        for g in orb.group() {
            for h in orb.group() {
                let c = tw.compare_methods(g, h).unwrap();
                assert!(c.agree, "{g} {h}: {:?} vs {:?}", c.formula, c.mf);
                assert!(c.scalar_consistent);
                assert!(tw.braided_check(g, h).unwrap());
            }
        }
    }
}
