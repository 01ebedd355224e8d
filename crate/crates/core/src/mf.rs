//! Koszul matrix factorizations of `W(y) - W(x)`, morphisms between them
//! as Clifford elements, and the closed generators `exp(eta_h)(theta_{I_h})`.
//!
//! Morphisms live over `S = k[x, y]` (2n variables, block layout).

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::clifford::{clifford_mul, mask_of, CliffordElem, Word};
use crate::error::{Error, Result};
use crate::ideal::JacClass;
use crate::orbifold::{act_on_poly, ActBlock, GroupElement, Orbifold};
use crate::poly::{nabla, Block, MultiPoly};
use crate::scalar::CycRat;

#[derive(Clone, Debug)]
pub struct KoszulFactor {
    pub g: GroupElement,
    /// `sum_i (y_i - g_i x_i) theta_i + nabla_i W(g x, y) d_i`.
    pub diff: CliffordElem,
}

/// A morphism `Delta_src -> Delta_tgt`, acting by left multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    pub body: CliffordElem,
    pub src: GroupElement,
    pub tgt: GroupElement,
}

impl Morphism {
    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn scale(&self, c: &CycRat) -> Morphism {
        Morphism { body: self.body.scale(c), src: self.src.clone(), tgt: self.tgt.clone() }
    }

    /// Multiply by a polynomial in `S` (given in `n` or `2n` variables).
    pub fn mul_poly(&self, f: &MultiPoly) -> Morphism {
        let f = f.with_nvars(self.body.nvars());
        Morphism { body: self.body.mul_poly(&f), src: self.src.clone(), tgt: self.tgt.clone() }
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(Error::SectorMismatch(format!(
                "cannot add morphisms {}->{} and {}->{}",
                self.src, self.tgt, other.src, other.tgt
            )));
        }
        Ok(Morphism { body: &self.body + &other.body, src: self.src.clone(), tgt: self.tgt.clone() })
    }
}

/// Coefficient tables of `eta_h`, indexed `[j][i]` (0-based).
#[derive(Clone, Debug)]
pub struct EtaCoeffs {
    pub h: GroupElement,
    pub g: Vec<Vec<MultiPoly>>,
    pub f: Vec<Vec<MultiPoly>>,
}

/// Matrix-factorization computations for one orbifold. Koszul differentials
/// and generators are built lazily and cached per group element.
pub struct MfEngine {
    orb: Arc<Orbifold>,
    /// `nabla_i W(x, y)` in the 2n-variable layout.
    nabla_w: Vec<MultiPoly>,
    koszul: Vec<OnceLock<KoszulFactor>>,
    generators: Vec<OnceLock<Morphism>>,
}

impl MfEngine {
    pub fn new(orb: Arc<Orbifold>) -> Result<Self> {
        let n = orb.n();
        let nabla_w = (0..n)
            .map(|i| nabla(orb.potential(), i, Block::X, Block::Y, n))
            .collect::<Result<Vec<_>>>()?;
        let size = orb.group().len();
        Ok(MfEngine {
            orb,
            nabla_w,
            koszul: (0..size).map(|_| OnceLock::new()).collect(),
            generators: (0..size).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn orbifold(&self) -> &Arc<Orbifold> {
        &self.orb
    }

    fn nvars(&self) -> usize {
        2 * self.orb.n()
    }

    fn var(&self, block: Block, i: usize) -> MultiPoly {
        MultiPoly::var(self.orb.field(), self.nvars(), block.var(i, self.orb.n()))
    }

    /// `g_i x_i` in S.
    fn gx(&self, g: &GroupElement, i: usize) -> MultiPoly {
        self.var(Block::X, i).scale(&g.eigenvalue(self.orb.field(), i))
    }

    pub fn nabla_w(&self) -> &[MultiPoly] {
        &self.nabla_w
    }

    pub fn koszul(&self, g: &GroupElement) -> &KoszulFactor {
        let idx = self.orb.index_of(g).expect("element of the group");
        self.koszul[idx].get_or_init(|| {
            let n = self.orb.n();
            let field = self.orb.field();
            let mut diff = CliffordElem::zero(field, n, self.nvars());
            for i in 0..n {
                let a = &self.var(Block::Y, i) - &self.gx(g, i);
                diff.add_term(Word { theta: 1 << i, del: 0 }, &a);
                let b = act_on_poly(g, &self.nabla_w[i], ActBlock::X, n);
                diff.add_term(Word { theta: 0, del: 1 << i }, &b);
            }
            KoszulFactor { g: g.clone(), diff }
        })
    }

    /// `W(y) - W(x)` in S.
    pub fn curvature(&self) -> MultiPoly {
        let n = self.orb.n();
        let w = self.orb.potential().with_nvars(self.nvars());
        let field = self.orb.field();
        let to_y: Vec<_> = (0..self.nvars())
            .map(|v| Some((if v < n { v + n } else { v }, field.one())))
            .collect();
        &w.map_vars(&to_y, self.nvars()) - &w
    }

    /// `W` with variable `k` (1-based position `k+1`) replaced by `y_k` for
    /// `k < j`, kept as `x_k` for `k < i`, and `h_k x_k` beyond; with
    /// `tilde`, the first block uses `x_k^h` instead of `y_k`.
    fn w_staircase(&self, h: &GroupElement, j: usize, i: usize, tilde: bool) -> MultiPoly {
        let n = self.orb.n();
        let field = self.orb.field();
        let images: Vec<Option<(usize, CycRat)>> = (0..n)
            .map(|k| {
                if k < j {
                    if !tilde {
                        Some((n + k, field.one()))
                    } else if h.exps()[k] == 0 {
                        Some((k, field.one()))
                    } else {
                        None
                    }
                } else if k < i {
                    Some((k, field.one()))
                } else {
                    Some((k, h.eigenvalue(field, k)))
                }
            })
            .collect();
        self.orb.potential().map_vars(&images, self.nvars())
    }

    pub fn eta_coeffs(&self, h: &GroupElement) -> Result<EtaCoeffs> {
        let n = self.orb.n();
        let field = self.orb.field();
        let zero = MultiPoly::zero(field, self.nvars());
        let mut g = vec![vec![zero.clone(); n]; n];
        let mut f = vec![vec![zero.clone(); n]; n];
        let moving = |k: usize| h.exps()[k] != 0;
        let wbar = |j: usize, i: usize| self.w_staircase(h, j, i, false);
        let wtil = |j: usize, i: usize| self.w_staircase(h, j, i, true);
        let ctx = |what: &'static str, j: usize, i: usize| {
            let h = h.clone();
            move |e: Error| match e {
                Error::NonExactDivision { context } => Error::NonExactDivision {
                    context: format!("{what}[{},{}] for h={h}: {context}", j + 1, i + 1),
                },
                other => other,
            }
        };
        // paper indices are 1-based: entry (j, i) here is (j+1, i+1) there
        for i in 0..n {
            if !moving(i) {
                continue;
            }
            let ip = i + 1;
            let xi_minus_hxi = &self.var(Block::X, i) - &self.gx(h, i);
            for j in 0..i {
                let jp = j + 1;
                let num = &(&wbar(jp, ip) - &wbar(jp - 1, ip)) - &(&wbar(jp, ip - 1) - &wbar(jp - 1, ip - 1));
                let den = &(&self.var(Block::Y, j) - &self.var(Block::X, j)) * &xi_minus_hxi;
                g[j][i] = num.exact_div(&den).map_err(ctx("g", j, i))?;
                if moving(j) {
                    let num =
                        &(&wtil(jp - 1, ip) - &wtil(jp, ip)) - &(&wtil(jp - 1, ip - 1) - &wtil(jp, ip - 1));
                    let den = &(&self.var(Block::X, j) - &self.gx(h, j)) * &xi_minus_hxi;
                    f[j][i] = num.exact_div(&den).map_err(ctx("f", j, i))?;
                }
            }
            let first = (&wbar(ip, ip) - &wbar(ip - 1, ip - 1))
                .exact_div(&(&self.var(Block::Y, i) - &self.gx(h, i)))
                .map_err(ctx("g", i, i))?;
            let second = (&wbar(ip - 1, ip) - &wbar(ip - 1, ip - 1))
                .exact_div(&xi_minus_hxi)
                .map_err(ctx("g", i, i))?;
            g[i][i] = (&first - &second)
                .exact_div(&(&self.var(Block::Y, i) - &self.var(Block::X, i)))
                .map_err(ctx("g", i, i))?;
        }
        Ok(EtaCoeffs { h: h.clone(), g, f })
    }

    /// `eta_h` applied termwise to a Clifford element.
    pub fn eta_apply(&self, coeffs: &EtaCoeffs, a: &CliffordElem) -> CliffordElem {
        let n = self.orb.n();
        let mut out = CliffordElem::zero(self.orb.field(), n, self.nvars());
        for (w, c) in a.terms() {
            let size_i = w.theta.count_ones();
            for i in 0..n {
                let Some((si, rest)) = contract(w.theta, i) else { continue };
                for j in 0..n {
                    let gji = &coeffs.g[j][i];
                    if !gji.is_zero() && w.del >> j & 1 == 0 {
                        // d_j d_J reordered
                        let sj = (w.del & ((1u32 << j) - 1)).count_ones();
                        let sign = si * sign_of(size_i + sj);
                        let term = c * gji;
                        let term = if sign == 1 { term } else { -&term };
                        out.add_term(Word { theta: rest, del: w.del | 1 << j }, &term);
                    }
                    let fji = &coeffs.f[j][i];
                    if !fji.is_zero() {
                        // d^2/(d theta_j d theta_i): differentiate by theta_j first
                        if let Some((sj, rest_j)) = contract(w.theta, j) {
                            if let Some((si2, rest2)) = contract(rest_j, i) {
                                let term = c * fji;
                                let term = if sj * si2 == 1 { term } else { -&term };
                                out.add_term(Word { theta: rest2, del: w.del }, &term);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `exp(eta_h)(theta_{I_h})`, a morphism `Delta_1 -> Delta_h`.
    pub fn exp_eta_generator(&self, h: &GroupElement) -> Result<&Morphism> {
        let idx = self.orb.index_of(h).expect("element of the group");
        if let Some(m) = self.generators[idx].get() {
            return Ok(m);
        }
        let m = self.compute_generator(h)?;
        Ok(self.generators[idx].get_or_init(|| m))
    }

    fn compute_generator(&self, h: &GroupElement) -> Result<Morphism> {
        let n = self.orb.n();
        let field = self.orb.field();
        let coeffs = self.eta_coeffs(h)?;
        let start = CliffordElem::monomial(
            MultiPoly::one(field, self.nvars()),
            Word { theta: mask_of(&h.moving()), del: 0 },
            n,
        );
        let mut total = start.clone();
        let mut term = start;
        for k in 1..=(2 * n + 1) {
            term = self.eta_apply(&coeffs, &term);
            if term.is_zero() {
                break;
            }
            let inv_k = field.from_rational(BigRational::new(BigInt::from(1), BigInt::from(k)));
            term = term.scale(&inv_k);
            total = &total + &term;
        }
        Ok(Morphism { body: total, src: GroupElement::identity(n, field.order()), tgt: h.clone() })
    }

    /// `D phi = d_tgt phi + (-1)^{|phi|+1} phi d_src`.
    pub fn differential(&self, phi: &Morphism) -> Result<Morphism> {
        let parity = phi.body.parity().ok_or(Error::Inhomogeneous)?;
        let left = clifford_mul(&self.koszul(&phi.tgt).diff, &phi.body);
        let right = clifford_mul(&phi.body, &self.koszul(&phi.src).diff);
        let body = if parity == 1 { &left + &right } else { &left - &right };
        Ok(Morphism { body, src: phi.src.clone(), tgt: phi.tgt.clone() })
    }

    pub fn is_closed(&self, phi: &Morphism) -> Result<bool> {
        Ok(self.differential(phi)?.is_zero())
    }

    /// `h_* phi = f(x, h^{-1} y) rho(h^{-1})(theta_I d_J)`: a morphism
    /// `Delta_{h src} -> Delta_{h tgt}`.
    pub fn pushforward(&self, h: &GroupElement, phi: &Morphism) -> Morphism {
        let n = self.orb.n();
        let hinv = h.inverse();
        let e = h.signed_exps();
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        let body = phi
            .body
            .map_coeffs(self.nvars(), |c| act_on_poly(&hinv, c, ActBlock::Y, n))
            .twist_generators(&e, &neg);
        Morphism { body, src: h.compose(&phi.src), tgt: h.compose(&phi.tgt) }
    }

    /// `phi cup psi = (h_* phi) psi` for `phi: 1 -> g`, `psi: 1 -> h`.
    pub fn cup(&self, phi: &Morphism, psi: &Morphism) -> Result<Morphism> {
        if !phi.src.is_identity() || !psi.src.is_identity() {
            return Err(Error::SectorMismatch("cup needs morphisms out of Delta_1".into()));
        }
        let pushed = self.pushforward(&psi.tgt, phi);
        Ok(Morphism {
            body: clifford_mul(&pushed.body, &psi.body),
            src: psi.src.clone(),
            tgt: pushed.tgt,
        })
    }

    /// Diagonal action: coefficients `f(h'x, h'y)`, `theta_i -> h'_i^{-1} theta_i`,
    /// `d_i -> h'_i d_i`.
    pub fn group_act(&self, hp: &GroupElement, phi: &Morphism) -> Morphism {
        let n = self.orb.n();
        let e = hp.signed_exps();
        let neg: Vec<i64> = e.iter().map(|x| -x).collect();
        let body = phi
            .body
            .map_coeffs(self.nvars(), |c| act_on_poly(hp, c, ActBlock::Both, n))
            .twist_generators(&neg, &e);
        Morphism { body, src: phi.src.clone(), tgt: phi.tgt.clone() }
    }

    /// Class of a closed morphism `Delta_1 -> Delta_h` in `Jac(W^h)`, read
    /// off the `theta_{I_h}` coefficient.
    pub fn class_in_jac(&self, phi: &Morphism) -> Result<JacClass> {
        if !self.is_closed(phi)? {
            return Err(Error::NotClosed(format!("morphism 1 -> {}", phi.tgt)));
        }
        Ok(self.leading_class(phi))
    }

    /// As [`MfEngine::class_in_jac`] without the closedness check.
    pub fn leading_class(&self, phi: &Morphism) -> JacClass {
        let h = &phi.tgt;
        let n = self.orb.n();
        let field = self.orb.field();
        let c = phi.body.coeff(Word { theta: mask_of(&h.moving()), del: 0 });
        // y := h x, then x_{I_h} := 0
        let images: Vec<Option<(usize, CycRat)>> = (0..2 * n)
            .map(|v| {
                let k = v % n;
                if h.exps()[k] != 0 {
                    None
                } else if v < n {
                    Some((k, field.one()))
                } else {
                    Some((k, h.eigenvalue(field, k)))
                }
            })
            .collect();
        let reduced = c.map_vars(&images, n);
        JacClass::new(&reduced, &self.orb.sector_of(h).jac)
    }

    /// `(I, J, coefficient)` triples, 1-based indices.
    pub fn dump(&self, phi: &Morphism) -> Vec<(Vec<usize>, Vec<usize>, String)> {
        let names = crate::poly::layout_names(self.orb.names(), self.nvars());
        phi.body.dump(&names)
    }
}

/// `d/d theta_i` of `theta_I`: sign and remaining mask.
fn contract(theta: u32, i: usize) -> Option<(i32, u32)> {
    if theta >> i & 1 == 0 {
        return None;
    }
    let pos = (theta & ((1u32 << i) - 1)).count_ones();
    Some((sign_of(pos), theta & !(1 << i)))
}

fn sign_of(e: u32) -> i32 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}
