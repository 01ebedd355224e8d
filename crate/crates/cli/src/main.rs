use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};

use twjac_core::instance::{fixture, load_path};
use twjac_core::orbifold::{dgh, Orbifold};
use twjac_core::twjac::{thread_pool, Method, TwJac};
use twjac_core::verify;

const CAVEAT: &str = "note: parameters are specialized to the exact values in the instance file; \
vanishing or nonvanishing is established at those values only";

#[derive(Parser)]
#[command(name = "twjac", version, about = "Twisted Jacobian algebras of Landau-Ginzburg orbifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sector table: I_g, d_g, W^g, dim Jac(W^g), parity.
    Sectors { file: String },
    /// Structure constant of xi_g . xi_h.
    #[command(disable_help_flag = true)]
    Product {
        file: String,
        #[arg(short = 'g')]
        g: String,
        #[arg(short = 'h')]
        h: String,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        #[arg(long, action = ArgAction::Help)]
        help: Option<bool>,
    },
    /// The full multiplication table of generators.
    Table {
        file: String,
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Run every property suite; nonzero exit on any failure.
    Verify { file: String },
    /// Dump the closed generator exp(eta_h)(theta_{I_h}) of Hom(Delta_1, Delta_h).
    Generator {
        file: String,
        #[arg(short = 'g')]
        g: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Shklyarov,
    Mf,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Shklyarov => Method::Formula,
            MethodArg::Mf => Method::Mf,
            MethodArg::Both => Method::Both,
        }
    }
}

/// A path, or `builtin:<name>` for a bundled fixture.
fn load(file: &str) -> Result<Arc<Orbifold>> {
    match file.strip_prefix("builtin:") {
        Some(name) => Ok(fixture(name)?),
        None => load_path(Path::new(file)).with_context(|| format!("loading {file}")),
    }
}

fn set_list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn sectors(file: &str) -> Result<()> {
    let orb = load(file)?;
    let names = orb.names();
    println!("W = {}", orb.potential().display_with(names));
    println!("|G| = {}, N = {}", orb.group().len(), orb.field().order());
    println!("{:<5} {:<12} {:<10} {:>3} {:>6} {:>6}  W^g", "id", "exponents", "I_g", "d_g", "parity", "dim");
    for s in orb.sectors() {
        println!(
            "{:<5} {:<12} {:<10} {:>3} {:>6} {:>6}  {}",
            orb.label(&s.g),
            s.g.to_string(),
            set_list(&s.moving),
            s.d,
            s.parity,
            s.jac_dimension().to_string(),
            s.w_g.display_with(names)
        );
    }
    Ok(())
}

fn product(file: &str, g: &str, h: &str, method: MethodArg) -> Result<()> {
    let orb = load(file)?;
    let (g, h) = (orb.resolve(g)?, orb.resolve(h)?);
    let tw = TwJac::new(orb.clone())?;
    let names = orb.names();
    let gh = g.compose(&h);
    println!("g = {} {}, h = {} {}, gh = {} {}", orb.label(&g), g, orb.label(&h), h, orb.label(&gh), gh);
    let d = dgh(&g, &h);
    println!("d_{{g,h}} = {d}");
    let integral = d.as_integer().is_some();
    let show = |label: &str, p: &twjac_core::ideal::JacClass| {
        if integral {
            println!("{label}: {}", p.rep().display_with(names));
        } else {
            println!("{label}: 0 (d_{{g,h}} not integral)");
        }
    };
    pool_install(|| {
        match method {
            MethodArg::Shklyarov => show("shklyarov", &tw.sigma(&g, &h)?),
            MethodArg::Mf => show("mf", &tw.mf_product(&g, &h)?.0),
            MethodArg::Both => {
                let c = tw.compare_methods(&g, &h)?;
                show("shklyarov", &c.formula);
                show("mf", &c.mf);
                println!("h^-1 acts on xi_g by {}", c.scalar);
                println!("agree: {}", if c.agree && c.scalar_consistent { "yes" } else { "NO" });
            }
        }
        Ok(())
    })?;
    if integral {
        println!("{CAVEAT}");
    }
    Ok(())
}

fn table(file: &str, json: Option<&Path>, method: MethodArg) -> Result<()> {
    let orb = load(file)?;
    let tw = TwJac::new(orb.clone())?;
    let tab = pool_install(|| Ok(tw.table(method.into())?))?;
    let names = orb.names();
    for e in &tab.entries {
        let sigma = if e.d_gh.as_integer().is_some() {
            e.sigma.rep().display_with(names).to_string()
        } else {
            "0 (d_{g,h} not integral)".to_string()
        };
        let prov = serde_json::to_value(e.provenance)?;
        println!(
            "{:<4} {:<4} d={:<4} {:<11} {}",
            orb.label(&e.g),
            orb.label(&e.h),
            e.d_gh.to_string(),
            prov.as_str().unwrap_or_default(),
            sigma
        );
    }
    if let Some(out) = json {
        let mut text = serde_json::to_string_pretty(&tab.to_json())?;
        text.push('\n');
        std::fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    }
    println!("{CAVEAT}");
    Ok(())
}

fn verify_cmd(file: &str) -> Result<bool> {
    let orb = load(file)?;
    let tw = TwJac::new(orb.clone())?;
    let suites = pool_install(|| Ok(verify::run_all(&tw)?))?;
    let mut ok = true;
    for s in &suites {
        let status = if s.passed() { "PASS" } else { "FAIL" };
        println!("{status} {:<22} {}/{}", s.name, s.checked - s.failures.len(), s.checked);
        for f in &s.failures {
            println!("     failed: {f}");
        }
        ok &= s.passed();
    }
    Ok(ok)
}

fn generator(file: &str, g: &str) -> Result<()> {
    let orb = load(file)?;
    let g = orb.resolve(g)?;
    let tw = TwJac::new(orb.clone())?;
    let gen = tw.mf().exp_eta_generator(&g)?;
    println!("exp(eta_h)(theta_I_h) for h = {} {}, I_h = {}", orb.label(&g), g, set_list(&g.moving()));
    for (theta, del, coeff) in tw.mf().dump(gen) {
        println!("theta{:?} d{:?}: {coeff}", theta, del);
    }
    println!("closed: {}", tw.mf().is_closed(gen)?);
    Ok(())
}

fn pool_install<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    thread_pool().install(f)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Sectors { file } => sectors(file).map(|_| true),
        Cmd::Product { file, g, h, method, .. } => product(file, g, h, *method).map(|_| true),
        Cmd::Table { file, json, method } => table(file, json.as_deref(), *method).map(|_| true),
        Cmd::Verify { file } => verify_cmd(file),
        Cmd::Generator { file, g } => generator(file, g).map(|_| true),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
