//! Property suites run by `twjac verify` and the acceptance tests.

use rayon::prelude::*;

use crate::clifford::{clifford_mul, CliffordElem};
use crate::error::Result;
use crate::orbifold::xi_action_scalar;
use crate::twjac::TwJac;

#[derive(Clone, Debug)]
pub struct Suite {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn suite(name: &'static str, outcomes: Vec<(String, bool)>) -> Suite {
    let checked = outcomes.len();
    let failures = outcomes.into_iter().filter(|(_, ok)| !ok).map(|(l, _)| l).collect();
    Suite { name, checked, failures }
}

/// `d_g^2 = (W(y) - W(x)) id` for every element.
pub fn koszul_square(tw: &TwJac) -> Suite {
    let mf = tw.mf();
    let orb = tw.orbifold();
    let curv = CliffordElem::scalar(mf.curvature(), orb.n());
    let out = orb
        .group()
        .par_iter()
        .map(|g| {
            let d = &mf.koszul(g).diff;
            (orb.label(g), clifford_mul(d, d) == curv)
        })
        .collect();
    suite("koszul-square", out)
}

/// Every generator `exp(eta_h)(theta_{I_h})` is closed.
pub fn closedness(tw: &TwJac) -> Result<Suite> {
    let mf = tw.mf();
    let orb = tw.orbifold();
    let out = orb
        .group()
        .par_iter()
        .map(|h| Ok((orb.label(h), mf.is_closed(mf.exp_eta_generator(h)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(suite("closedness", out))
}

/// `h' . Phi_h = prod_{l in I_h} (h'_l)^{-1} Phi_h` for all pairs.
pub fn equivariance(tw: &TwJac) -> Result<Suite> {
    let mf = tw.mf();
    let orb = tw.orbifold();
    let group = orb.group();
    let pairs: Vec<_> = group.iter().flat_map(|a| group.iter().map(move |b| (a, b))).collect();
    let out = pairs
        .par_iter()
        .map(|&(hp, h)| {
            let gen = mf.exp_eta_generator(h)?;
            let expected = gen.scale(&xi_action_scalar(orb.field(), hp, h));
            Ok((format!("({}, {})", orb.label(hp), orb.label(h)), mf.group_act(hp, gen) == expected))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(suite("equivariance", out))
}

pub fn braided(tw: &TwJac) -> Result<Suite> {
    let orb = tw.orbifold();
    let group = orb.group();
    let pairs: Vec<_> = group.iter().flat_map(|a| group.iter().map(move |b| (a, b))).collect();
    let out = pairs
        .par_iter()
        .map(|&(g, h)| Ok((format!("({}, {})", orb.label(g), orb.label(h)), tw.braided_check(g, h)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(suite("braided-commutativity", out))
}

/// Closed formula against the cup product, for all pairs.
pub fn compare_all(tw: &TwJac) -> Result<Suite> {
    let orb = tw.orbifold();
    let group = orb.group();
    group.par_iter().try_for_each(|g| tw.mf().exp_eta_generator(g).map(|_| ()))?;
    let pairs: Vec<_> = group.iter().flat_map(|a| group.iter().map(move |b| (a, b))).collect();
    let out = pairs
        .par_iter()
        .map(|&(g, h)| {
            let c = tw.compare_methods(g, h)?;
            Ok((format!("({}, {})", orb.label(g), orb.label(h)), c.agree && c.scalar_consistent))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(suite("formula-vs-mf", out))
}

/// All suites, in a fixed order.
pub fn run_all(tw: &TwJac) -> Result<Vec<Suite>> {
    Ok(vec![koszul_square(tw), closedness(tw)?, equivariance(tw)?, braided(tw)?, compare_all(tw)?])
}
