//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the report is always
//! printed: `cargo test -p twjac-core --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{clifford_matrix, macaulay_dimension, mat_mul, random_clifford, random_corpus, rho};
use twjac_core::clifford::clifford_mul;
use twjac_core::ideal::{jacobian_ideal, QuotientDim};
use twjac_core::instance::fixture;
use twjac_core::orbifold::dgh;
use twjac_core::poly::{Monomial, MultiPoly};
use twjac_core::twjac::TwJac;
use twjac_core::verify::{self, Suite};
use twjac_core::CycField;

const RANDOM_SEED: u64 = 2024;
const RANDOM_COUNT: usize = 20;
const CLIFFORD_SAMPLES: usize = 500;
const NORMAL_FORM_SAMPLES: usize = 200;
const MACAULAY_CAP: u32 = 16;

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Wall-clock budgets per criterion.
const BUDGETS: [(u8, u64); 10] = [(1, 10), (2, 60), (3, 120), (4, 600), (5, 60), (6, 60), (7, 120), (8, 60), (9, 60), (10, 60)];

/// Criteria whose statement cannot hold for the instance as specified.
/// Each stays red; the string is printed with the report.
const KNOWN_RED: [(u8, &str); 1] = [(
    6,
    "with d_{g,h} = (d_g + d_h - d_{gh})/2 and d = (0,3,2,2,2,3) for rho_0..rho_5, eight further \
     pairs have integral d_{g,h}; the listed set is exactly the pairs where sigma can be nonzero",
)];

struct Outcome {
    passed: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed: ok, detail: detail.into() }
}

fn suites_detail(suites: &[(&str, Suite)]) -> (bool, String) {
    let ok = suites.iter().all(|(_, s)| s.passed());
    let text = suites
        .iter()
        .map(|(label, s)| {
            let mut t = format!("{label} {}/{}", s.checked - s.failures.len(), s.checked);
            if !s.failures.is_empty() {
                t.push_str(&format!(" failed {:?}", s.failures));
            }
            t
        })
        .collect::<Vec<_>>()
        .join(", ");
    (ok, text)
}

fn tw(name: &str) -> TwJac {
    TwJac::new(fixture(name).expect("bundled fixture")).expect("engine")
}

fn c1() -> Outcome {
    let mut suites = vec![("z3", verify::koszul_square(&tw("z3"))), ("z6", verify::koszul_square(&tw("z6")))];
    let mut random = Suite { name: "random", checked: 0, failures: vec![] };
    for inst in random_corpus(RANDOM_SEED, RANDOM_COUNT) {
        let s = verify::koszul_square(&TwJac::new(inst.orb.clone()).unwrap());
        random.checked += s.checked;
        random.failures.extend(s.failures.iter().map(|f| format!("{} {f}", inst.description)));
    }
    suites.push(("random", random));
    let (ok, d) = suites_detail(&suites);
    check(ok, d)
}

fn c2() -> Outcome {
    let mut suites = vec![
        ("z3", verify::closedness(&tw("z3")).unwrap()),
        ("z6", verify::closedness(&tw("z6")).unwrap()),
    ];
    let mut random = Suite { name: "random", checked: 0, failures: vec![] };
    for inst in random_corpus(RANDOM_SEED, RANDOM_COUNT) {
        let s = verify::closedness(&TwJac::new(inst.orb.clone()).unwrap()).unwrap();
        random.checked += s.checked;
        random.failures.extend(s.failures.iter().map(|f| format!("{} {f}", inst.description)));
    }
    suites.push(("random", random));
    let (ok, d) = suites_detail(&suites);
    check(ok, d)
}

fn c3() -> Outcome {
    let s = verify::compare_all(&tw("z3")).unwrap();
    let (ok, d) = suites_detail(&[("z3 pairs agree", s)]);
    check(ok && d.contains("9/9"), d)
}

fn c4() -> Outcome {
    let t = tw("z6");
    let s = verify::compare_all(&t).unwrap();
    let names = t.orbifold().names().to_vec();
    let s24 = t.sigma(&rho(2), &rho(4)).unwrap();
    let s33 = t.sigma(&rho(3), &rho(3)).unwrap();
    let (ok, d) = suites_detail(&[("z6 pairs agree", s)]);
    let detail = format!(
        "{d}; sigma(rho2,rho4) = {}; sigma(rho3,rho3) = {}",
        s24.rep().display_with(&names),
        s33.rep().display_with(&names)
    );
    check(ok && d.contains("36/36") && !s24.is_zero() && !s33.is_zero(), detail)
}

fn c5() -> Outcome {
    let orb = fixture("z6").unwrap();
    let dims: Vec<QuotientDim> = (0..6).map(|l| orb.sector_of(&rho(l)).jac_dimension()).collect();
    let w = orb.potential();
    let partials: Vec<MultiPoly> = (0..3).map(|v| w.partial_derivative(v)).collect();
    let oracle = macaulay_dimension(&partials, &[0, 1, 2], MACAULAY_CAP);
    let s3 = orb.sector_of(&rho(3));
    // k[x2]/(x2^2): fixed variable x2 only, standard monomials 1, x2
    let std3 = s3.jac.standard_monomials().unwrap();
    let x2 = |e: u16| Monomial::from_exps(&[0, e, 0]);
    let rho3_ok = s3.fixed == vec![1] && std3 == vec![x2(0), x2(1)] && s3.jac.normal_form(&MultiPoly::term(orb.field().one(), x2(2))).is_zero();
    let jac_w = match dims[0] {
        QuotientDim::Finite(d) => Some(d),
        QuotientDim::Infinite => None,
    };
    let shape: Vec<QuotientDim> = [1, 1, 2, 1, 1].iter().map(|&d| QuotientDim::Finite(d)).collect();
    let ok = jac_w.is_some() && jac_w == oracle && dims[1..] == shape[..] && rho3_ok;
    check(
        ok,
        format!(
            "dims {:?}; dim Jac(W) = {} (Macaulay oracle {:?}); rho3 sector = k[x2]/(x2^2): {rho3_ok}",
            dims.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            dims[0],
            oracle
        ),
    )
}

fn c6() -> Outcome {
    let orb = fixture("z6").unwrap();
    let t = TwJac::new(orb.clone()).unwrap();
    let mut expected: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    for l in 0..6 {
        expected.insert((0, l, 0));
        expected.insert((l, 0, 0));
    }
    expected.extend([(1, 5, 3), (5, 1, 3), (2, 4, 2), (4, 2, 2), (3, 3, 2)]);
    let mut got = BTreeSet::new();
    for a in 0..6 {
        for b in 0..6 {
            if let Some(d) = dgh(&rho(a), &rho(b)).as_integer() {
                got.insert((a, b, d));
            }
        }
    }
    let extra: Vec<_> = got.difference(&expected).cloned().collect();
    let missing: Vec<_> = expected.difference(&got).cloned().collect();
    let extra_vanish = extra.iter().all(|&(a, b, _)| {
        let c = t.compare_methods(&rho(a), &rho(b)).unwrap();
        c.agree && c.formula.is_zero()
    });
    let fmt = |v: &[(i64, i64, i64)]| {
        v.iter().map(|(a, b, d)| format!("(rho{a},rho{b})={d}")).collect::<Vec<_>>().join(" ")
    };
    check(
        extra.is_empty() && missing.is_empty(),
        format!(
            "listed pairs present with listed values: {}; extra integral pairs: [{}]; sigma = 0 on all extra pairs by both methods: {extra_vanish}",
            missing.is_empty(),
            fmt(&extra)
        ),
    )
}

fn c7() -> Outcome {
    let (z3, z6) = (tw("z3"), tw("z6"));
    let suites = [("z3", verify::braided(&z3).unwrap()), ("z6", verify::braided(&z6).unwrap())];
    let (ok, d) = suites_detail(&suites);
    let s15 = z6.sigma(&rho(1), &rho(5)).unwrap();
    let s51 = z6.sigma(&rho(5), &rho(1)).unwrap();
    let s24 = z6.sigma(&rho(2), &rho(4)).unwrap();
    let s42 = z6.sigma(&rho(4), &rho(2)).unwrap();
    let anti = !s15.is_zero() && s15.rep() == &-s51.rep();
    let sym = !s24.is_zero() && s24 == s42;
    check(ok && anti && sym, format!("{d}; xi1.xi5 = -xi5.xi1: {anti}; xi2.xi4 = xi4.xi2: {sym}"))
}

fn c8() -> Outcome {
    let suites = [("z3", verify::equivariance(&tw("z3")).unwrap()), ("z6", verify::equivariance(&tw("z6")).unwrap())];
    let (ok, d) = suites_detail(&suites);
    check(ok, d)
}

fn c9() -> Outcome {
    let k = CycField::new(1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..CLIFFORD_SAMPLES {
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let a = random_clifford(&mut rng, &k, n, 5);
        let b = random_clifford(&mut rng, &k, n, 5);
        if clifford_matrix(&clifford_mul(&a, &b)) != mat_mul(&clifford_matrix(&a), &clifford_matrix(&b)) {
            bad += 1;
        }
    }
    check(bad == 0, format!("{}/{CLIFFORD_SAMPLES} products match the 2^n matrix representation", CLIFFORD_SAMPLES - bad))
}

fn random_poly(rng: &mut ChaCha8Rng, k: &std::sync::Arc<CycField>) -> MultiPoly {
    use rand::Rng;
    let mut p = MultiPoly::zero(k, 3);
    for _ in 0..rng.gen_range(0..=6) {
        let exps: Vec<u16> = (0..3).map(|_| rng.gen_range(0..=4)).collect();
        let c = &k.from_int(rng.gen_range(-9..=9)) * &k.zeta_pow(rng.gen_range(0..6));
        p.add_term(Monomial::from_exps(&exps), &c);
    }
    p
}

fn c10() -> Outcome {
    let orb = fixture("z6").unwrap();
    let k = orb.field().clone();
    let gb = jacobian_ideal(orb.potential(), &[0, 1, 2]);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut nf_bad = 0;
    for _ in 0..NORMAL_FORM_SAMPLES {
        let (p, q) = (random_poly(&mut rng, &k), random_poly(&mut rng, &k));
        let np = gb.normal_form(&p);
        let idem = gb.normal_form(&np) == np;
        let lin = gb.normal_form(&(&p + &q)) == &np + &gb.normal_form(&q);
        if !(idem && lin) {
            nf_bad += 1;
        }
    }
    let mut dim_bad = Vec::new();
    let mut dim_checked = 0;
    for name in ["z3", "z4", "z6"] {
        let orb = fixture(name).unwrap();
        for s in orb.sectors() {
            let partials: Vec<MultiPoly> = s.fixed.iter().map(|&v| s.w_g.partial_derivative(v)).collect();
            let oracle = macaulay_dimension(&partials, &s.fixed, MACAULAY_CAP).map(QuotientDim::Finite);
            dim_checked += 1;
            if oracle != Some(s.jac_dimension()) {
                dim_bad.push(format!("{name} {}", s.g));
            }
        }
    }
    check(
        nf_bad == 0 && dim_bad.is_empty(),
        format!(
            "normal form idempotent and linear on {}/{NORMAL_FORM_SAMPLES}; quotient dimensions match Macaulay on {}/{dim_checked} fixture sectors",
            NORMAL_FORM_SAMPLES - nf_bad,
            dim_checked - dim_bad.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u8, &str, fn() -> Outcome); 10] = [
        (1, "Koszul square", c1),
        (2, "closedness of exp(eta_h)(theta_I_h)", c2),
        (3, "formula = cup product, Z/3", c3),
        (4, "formula = cup product, Z/6", c4),
        (5, "sector decomposition, Z/6", c5),
        (6, "integrality gate, Z/6", c6),
        (7, "braided super-commutativity", c7),
        (8, "equivariance of generators", c8),
        (9, "Clifford matrix oracle", c9),
        (10, "Groebner correctness", c10),
    ];
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let budget = secs(BUDGETS.iter().find(|(c, _)| *c == id).unwrap().1);
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let passed = out.passed && in_budget;
        println!(
            "{} criterion {id:>2}: {title} [{:.2}s / {}s] {}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
        if !in_budget {
            println!("     over budget");
        }
        match KNOWN_RED.iter().find(|(c, _)| *c == id) {
            Some((_, why)) if !passed => println!("     known red: {why}"),
            _ if !passed => unexpected += 1,
            _ => {}
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criterion/criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
