use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ehrhart_core::count::{count_image, ehrhart_value, scan_translates, CountConfig, Method};
use ehrhart_core::ehrhart::{k_etp, k_etp_integer, to_dilation_family};
use ehrhart_core::fluctuation::{realize_qp, realize_sequence};
use ehrhart_core::json::{
    dilation_to_json, family_from_value, gadget_to_json, oracle_to_json, parse_document,
    polytope_from_json, qp_from_json, realization_to_json, table_to_json, to_pretty, PolytopeJson,
    QuasiPolynomialJson,
};
use ehrhart_core::qde::{build_gadget, qde_oracle, Mode, QdeInstance};
use ehrhart_core::rational::{parse_rational, Rational};
use ehrhart_core::verify::{run_suite, verify_fixture, SuiteOutcome, VerifyOptions, SUITES};
use ehrhart_core::{Error, Point, Result};

#[derive(Parser)]
#[command(name = "ehrhart-forge", version, about = "Lattice-point gadgets, Ehrhart transforms and their self-checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the QDE gadget for an instance.
    BuildQde(BuildQde),
    /// Count lattice points of a polytope, optionally translated or dilated.
    Count(CountArgs),
    /// Count every translate of a family over [from, to).
    Scan(ScanArgs),
    /// Brute-force QDE minimum over the instance's search box.
    Oracle(InstanceArgs),
    /// Turn a translation family into a verified dilation family.
    Convert(ConvertArgs),
    /// Realize a sequence or quasi-polynomial as shifted Ehrhart values.
    Realize(RealizeArgs),
    /// Largest t with f_P(t) < k.
    Ketp(KetpArgs),
    /// Run the bundled verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
}

#[derive(Args)]
struct BuildQde {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "rational")]
    mode: String,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[arg(short = 'p', long = "polytope")]
    polytope: PathBuf,
    /// Shift by λ·e₁.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "translate_vec")]
    translate: Option<String>,
    /// Shift by a comma-separated vector.
    #[arg(long = "translate-vec", allow_hyphen_values = true)]
    translate_vec: Option<String>,
    #[arg(long)]
    dilate: Option<String>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(short = 'f', long = "family")]
    family: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    from: String,
    /// Exclusive upper end.
    #[arg(long, allow_hyphen_values = true)]
    to: String,
    #[arg(long = "min-only")]
    min_only: bool,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(short = 'f', long = "family")]
    family: PathBuf,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RealizeArgs {
    #[arg(long, conflicts_with = "qp", required_unless_present = "qp")]
    sequence: Option<String>,
    #[arg(long, requires = "period")]
    qp: Option<PathBuf>,
    #[arg(long)]
    period: Option<String>,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct KetpArgs {
    #[arg(short = 'p', long = "polytope")]
    polytope: PathBuf,
    #[arg(short = 'k')]
    k: String,
    /// Interpolate the Ehrhart polynomial (integer vertices only).
    #[arg(long)]
    integer: bool,
    #[arg(long)]
    bound: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long = "beta-max")]
    beta_max: Option<String>,
    /// Number of random sequences in the realize suite.
    #[arg(long)]
    samples: Option<String>,
    /// Extra family fixture `{"family": …, "expected": [...]}` checked first.
    #[arg(long)]
    fixture: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn read_json(path: &Path, what: &str) -> Result<Value> {
    parse_document(&read(path)?, what)
}

fn integer_arg(s: &str, what: &str) -> Result<i64> {
    let q = parse_rational(s)?;
    if !q.is_integer() {
        return Err(Error::InvalidInput(format!("{what} must be an integer, got {s}")));
    }
    i64::try_from(q.to_integer()).map_err(|_| Error::InvalidInput(format!("{what} is out of range")))
}

fn natural_arg(s: &str, what: &str) -> Result<u64> {
    u64::try_from(integer_arg(s, what)?).map_err(|_| Error::InvalidInput(format!("{what} must be nonnegative")))
}

fn instance(a: &InstanceArgs) -> Result<QdeInstance> {
    QdeInstance::new(
        natural_arg(&a.alpha, "alpha")?,
        natural_arg(&a.beta, "beta")?,
        natural_arg(&a.gamma, "gamma")?,
    )
}

fn read_polytope(path: &Path) -> Result<ehrhart_core::Polytope> {
    let j: PolytopeJson = parse_document(&read(path)?, "polytope")?;
    polytope_from_json(&j)
}

fn build_qde(a: &BuildQde) -> Result<Value> {
    let inst = instance(&a.instance)?;
    let g = build_gadget(&inst, Mode::parse(&a.mode)?)?;
    let mut doc = gadget_to_json(&g);
    doc["vertexCount"] = json!(g.hull.vertex_count());
    let Some(out) = &a.output else {
        return Ok(doc);
    };
    write(out, &to_pretty(&doc))?;
    Ok(json!({
        "N": g.n.to_string(),
        "L": g.big_l.to_string(),
        "vertexCount": g.hull.vertex_count(),
        "mode": g.mode.name(),
        "output": out.display().to_string(),
    }))
}

fn count(a: &CountArgs) -> Result<Value> {
    let p = read_polytope(&a.polytope)?;
    let shift: Option<Vec<Rational>> = match (&a.translate, &a.translate_vec) {
        (Some(l), _) => Some(Point::axis(p.dim(), 0, parse_rational(l)?).into_coords()),
        (_, Some(v)) => {
            let coords = v.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
            if coords.len() != p.dim() {
                return Err(Error::InvalidInput(format!(
                    "translation has {} coordinates, polytope has dimension {}",
                    coords.len(),
                    p.dim()
                )));
            }
            Some(coords)
        }
        _ => None,
    };
    let scale = match &a.dilate {
        Some(s) => parse_rational(s)?,
        None => Rational::from_integer(1.into()),
    };
    let c = if scale == Rational::from_integer(0.into()) && shift.is_none() {
        ehrhart_value(&p, 0)?
    } else {
        count_image(&p, &scale, shift.as_deref(), Method::Auto, &CountConfig::default())?
    };
    Ok(json!({ "count": c.to_string() }))
}

fn scan(a: &ScanArgs) -> Result<Value> {
    let f = family_from_value(&read_json(&a.family, "family")?)?;
    let (from, to) = (integer_arg(&a.from, "from")?, integer_arg(&a.to, "to")?);
    if from >= to {
        return Err(Error::InvalidInput(format!("empty scan range [{from}, {to})")));
    }
    let table = scan_translates(&f, from, to - 1)?;
    if a.min_only {
        return Ok(json!({ "argmin": table.argmin, "min": table.min }));
    }
    Ok(serde_json::to_value(table_to_json(&table)).expect("serializable"))
}

fn oracle(a: &InstanceArgs) -> Result<Value> {
    Ok(oracle_to_json(&qde_oracle(&instance(a)?)))
}

fn convert(a: &ConvertArgs) -> Result<Value> {
    let f = family_from_value(&read_json(&a.family, "family")?)?;
    let d = to_dilation_family(&f)?;
    let doc = serde_json::to_value(dilation_to_json(&d)).expect("serializable");
    let Some(out) = &a.output else {
        return Ok(doc);
    };
    write(out, &to_pretty(&doc))?;
    Ok(json!({ "M": d.m.to_string(), "validN": d.valid_n.to_string(), "output": out.display().to_string() }))
}

fn realize(a: &RealizeArgs) -> Result<Value> {
    let res = if let Some(seq) = &a.sequence {
        let c = seq
            .split(',')
            .map(|s| natural_arg(s.trim(), "sequence entry"))
            .collect::<Result<Vec<_>>>()?;
        realize_sequence(&c)?
    } else {
        let path = a.qp.as_ref().expect("clap enforces --sequence or --qp");
        let j: QuasiPolynomialJson = parse_document(&read(path)?, "quasi-polynomial")?;
        let period = natural_arg(a.period.as_deref().unwrap_or(""), "period")?;
        realize_qp(&qp_from_json(&j)?, period)?
    };
    let doc = serde_json::to_value(realization_to_json(&res)).expect("serializable");
    let Some(out) = &a.output else {
        return Ok(doc);
    };
    write(out, &to_pretty(&doc))?;
    Ok(json!({
        "K": res.k.to_string(),
        "M": res.m.to_string(),
        "dim": res.dim,
        "vertexCount": res.vertex_count,
        "output": out.display().to_string(),
    }))
}

fn ketp(a: &KetpArgs) -> Result<Value> {
    let p = read_polytope(&a.polytope)?;
    let k = natural_arg(&a.k, "k")?;
    let bound = a.bound.as_deref().map(|b| natural_arg(b, "bound")).transpose()?;
    let g = if a.integer {
        k_etp_integer(&p, k)?
    } else {
        k_etp(&p, k, bound)?
    };
    Ok(json!({ "g": g }))
}

/// Runs the suites in order and stops at the first failure.
fn verify(a: &VerifyArgs) -> Result<std::result::Result<Value, Value>> {
    let mut opts = VerifyOptions::default();
    if let Some(b) = &a.beta_max {
        opts.beta_max = natural_arg(b, "beta-max")?;
        opts.beta_max_heavy = opts.beta_max.min(3);
    }
    if let Some(s) = &a.samples {
        opts.realize_samples = natural_arg(s, "samples")? as usize;
    }
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    let mut outcomes: Vec<SuiteOutcome> = Vec::new();
    if let Some(path) = &a.fixture {
        outcomes.push(verify_fixture(&read_json(path, "fixture")?)?);
    }
    for name in names {
        if outcomes.last().is_some_and(|o| !o.passed()) {
            break;
        }
        eprintln!("running suite {name}");
        outcomes.push(run_suite(name, &opts)?);
    }
    if let Some(bad) = outcomes.iter().find(|o| !o.passed()) {
        return Ok(Err(bad.to_json()));
    }
    Ok(Ok(json!({
        "passed": true,
        "suites": outcomes.iter().map(SuiteOutcome::to_json).collect::<Vec<_>>(),
    })))
}

fn run(cli: &Cli) -> Result<std::result::Result<Value, Value>> {
    let v = match &cli.command {
        Command::BuildQde(a) => build_qde(a)?,
        Command::Count(a) => count(a)?,
        Command::Scan(a) => scan(a)?,
        Command::Oracle(a) => oracle(a)?,
        Command::Convert(a) => convert(a)?,
        Command::Realize(a) => realize(a)?,
        Command::Ketp(a) => ketp(a)?,
        Command::Verify(a) => return verify(a),
    };
    Ok(Ok(v))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Ok(v)) => {
            println!("{}", to_pretty(&v));
            ExitCode::SUCCESS
        }
        Ok(Err(counterexample)) => {
            eprintln!("verification failed; first counterexample:");
            eprintln!("{}", to_pretty(&counterexample));
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
