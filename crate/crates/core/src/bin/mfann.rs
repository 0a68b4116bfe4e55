//! Command-line front end.
//!
//! Exit codes: 0 pass, 1 usage or configuration error (including input files
//! that are not matrix factorizations), 2 mathematical mismatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use mfann::catalog::{Ring, Selector};
use mfann::mf::MfJson;
use mfann::report::{
    build_family, double_report, entry_report, family_report, render_double, render_entry, render_family, render_report,
    reproduce, run_ring, status_name, validate_entries, verdict_name, RunConfig, Subfamily,
};
use mfann::{Error, Field, FieldConfig, GaussianRationals, MatrixFactorization, PrimeField, Rationals, Result, TruncatedAlgebra};

#[derive(Parser, Debug)]
#[command(name = "mfann", version, about = "Annihilators of matrix factorizations and Alexandrov compactness verdicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Coefficient field: fp:<p>[:<i>], q, or qi (rationals with i adjoined).
    #[arg(long, global = true, default_value = "fp:13:5")]
    field: String,

    /// Truncation level N.
    #[arg(short = 'N', long = "trunc", global = true, default_value_t = 10)]
    trunc: u32,

    /// Witness degree bound; defaults to n + 2 per entry.
    #[arg(long, global = true)]
    witness_degree: Option<u32>,

    /// Largest parameter n of parametric entries.
    #[arg(long, global = true, default_value_t = 5)]
    n_max: u32,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check phi*psi = psi*phi = f*I for catalog entries or a JSON file.
    Validate { target: String },
    /// Annihilator of each selected factorization, with witnesses.
    Ann { target: String },
    /// Specialization preorder and compactness verdict for a ring.
    Topology {
        ring: Ring,
        #[arg(long, value_enum, default_value_t = SubfamilyArg::All)]
        subfamily: SubfamilyArg,
        /// Also write the Hasse diagram in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Double a factorization over f + v^2 and report both annihilators.
    Double {
        target: String,
        /// New variable; defaults to `z`, or `w` if `z` is taken.
        #[arg(long)]
        var: Option<String>,
    },
    /// Every catalog computation, family verdict and property suite.
    ReproducePaper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SubfamilyArg {
    All,
    Cm0,
}

impl From<SubfamilyArg> for Subfamily {
    fn from(s: SubfamilyArg) -> Self {
        match s {
            SubfamilyArg::All => Subfamily::All,
            SubfamilyArg::Cm0 => Subfamily::Cm0,
        }
    }
}

enum Outcome {
    Pass,
    Mismatch(String),
}

macro_rules! with_field {
    ($cfg:expr, |$k:ident| $body:expr) => {
        match $cfg {
            FieldConfig::PrimeField { p, i } => {
                let $k = PrimeField::new(*p, *i)?;
                $body
            }
            FieldConfig::Rationals => {
                let $k = Rationals;
                $body
            }
            FieldConfig::GaussianRationals => {
                let $k = GaussianRationals;
                $body
            }
        }
    };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig {
        field: FieldConfig::parse_flag(&cli.field)?,
        trunc: cli.trunc,
        witness_degree: cli.witness_degree,
        n_max: cli.n_max,
    };
    cfg.validate()?;
    match &cli.command {
        Command::Validate { target } => validate(cli, &cfg, target),
        Command::Ann { target } => ann(cli, &cfg, target),
        Command::Topology { ring, subfamily, dot } => {
            with_field!(&cfg.field, |k| topology(cli, &cfg, &k, *ring, (*subfamily).into(), dot.as_deref()))
        }
        Command::Double { target, var } => double(cli, &cfg, target, var.as_deref()),
        Command::ReproducePaper => with_field!(&cfg.field, |k| {
            let report = reproduce(&k, &cfg)?;
            emit(cli, &report, || render_report(&report))?;
            Ok(match report.first_failure {
                None => Outcome::Pass,
                Some(f) => Outcome::Mismatch(f),
            })
        }),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(),
    };
    match &cli.out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

/// A target names a JSON file when it exists on disk or ends in `.json`.
fn is_file_target(target: &str) -> bool {
    target.ends_with(".json") || Path::new(target).is_file()
}

/// One factorization object or an array of them.
fn read_mf_file(path: &str) -> Result<Vec<MfJson>> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(match value {
        serde_json::Value::Array(items) => items.into_iter().map(serde_json::from_value).collect::<Result<_, _>>()?,
        v => vec![serde_json::from_value(v)?],
    })
}

fn load_mf<F: Field>(field: &F, js: &MfJson) -> Result<MatrixFactorization<F>> {
    let mf = MatrixFactorization::from_json(field, js)?;
    if let Some(v) = mf.validate()? {
        return Err(Error::Usage(format!("{} is not a matrix factorization: {v}", mf.label())));
    }
    Ok(mf)
}

fn validate(cli: &Cli, cfg: &RunConfig, target: &str) -> Result<Outcome> {
    if is_file_target(target) {
        let mut reports = Vec::new();
        for js in read_mf_file(target)? {
            reports.push(with_field!(&js.spec.field, |k| {
                let mf = load_mf(&k, &js)?;
                (mf.label().to_string(), mf.size())
            }));
        }
        let text = reports.iter().map(|(l, n)| format!("{l:<28} size {n}  ok\n")).collect::<String>();
        emit(cli, &reports, || text)?;
        return Ok(Outcome::Pass);
    }
    let sel: Selector = target.parse()?;
    with_field!(&cfg.field, |k| {
        let reports = validate_entries(&sel.resolve(&k, cfg.n_max)?)?;
        emit(cli, &reports, || {
            reports
                .iter()
                .map(|r| match &r.violation {
                    None => format!("{:<28} {:<16} size {}  ok\n", r.selector, r.label, r.size),
                    Some(v) => format!("{:<28} {:<16} size {}  FAIL: {v}\n", r.selector, r.label, r.size),
                })
                .collect()
        })?;
        Ok(match reports.iter().find(|r| r.violation.is_some()) {
            Some(r) => Outcome::Mismatch(format!("{}: {}", r.selector, r.violation.as_ref().expect("checked"))),
            None => Outcome::Pass,
        })
    })
}

fn ann(cli: &Cli, cfg: &RunConfig, target: &str) -> Result<Outcome> {
    let reports = if is_file_target(target) {
        let mut out = Vec::new();
        for js in read_mf_file(target)? {
            out.push(with_field!(&js.spec.field, |k| {
                let mf = load_mf(&k, &js)?;
                let alg = TruncatedAlgebra::build(mf.spec(), cfg.trunc)?;
                let r = mfann::annihilator::annihilate_in(&mf, &alg, cfg.fixed_degree())?;
                entry_report(mf.label().to_string(), &mf, None, &r, &alg)?
            }));
        }
        out
    } else {
        let sel: Selector = target.parse()?;
        with_field!(&cfg.field, |k| {
            let entries = sel.resolve(&k, cfg.n_max)?;
            let alg = TruncatedAlgebra::build(&sel.ring.spec(&k)?, cfg.trunc)?;
            entries
                .par_iter()
                .map(|e| {
                    let r = mfann::annihilator::annihilate_in(&e.mf, &alg, cfg.degree_for(e))?;
                    entry_report(e.selector(), &e.mf, Some(&e.expected_annihilator), &r, &alg)
                })
                .collect::<Result<Vec<_>>>()?
        })
    };
    emit(cli, &reports, || reports.iter().map(|r| render_entry(r) + "\n").collect())?;
    Ok(match reports.iter().find(|r| !r.pass) {
        Some(r) => Outcome::Mismatch(format!(
            "{}: computed ({}) with status {}, expected ({})",
            r.selector,
            r.annihilator.upper.generators.join(", "),
            status_name(r.annihilator.status),
            r.expected.as_deref().unwrap_or_default().join(", ")
        )),
        None => Outcome::Pass,
    })
}

fn topology<F: Field>(cli: &Cli, cfg: &RunConfig, k: &F, ring: Ring, sub: Subfamily, dot: Option<&Path>) -> Result<Outcome> {
    let alg = TruncatedAlgebra::build(&ring.spec(k)?, cfg.trunc)?;
    let runs = run_ring(ring, k, cfg, &alg)?;
    let fam = build_family(ring, sub, k, cfg, &alg, &runs)?;
    let (report, preorder) = family_report(ring, sub, k, cfg, &fam)?;
    if let Some(path) = dot {
        fs::write(path, preorder.to_dot())?;
    }
    emit(cli, &report, || render_family(&report) + "\n")?;
    Ok(if report.pass {
        Outcome::Pass
    } else {
        Outcome::Mismatch(format!(
            "{} [{}]: verdict {}, expected {}",
            report.ring,
            sub,
            verdict_name(report.verdict),
            report.expected.as_ref().map_or("-", |e| verdict_name(e.verdict))
        ))
    })
}

fn double(cli: &Cli, cfg: &RunConfig, target: &str, var: Option<&str>) -> Result<Outcome> {
    fn pick_var<F: Field>(mf: &MatrixFactorization<F>, var: Option<&str>) -> String {
        var.map(str::to_string).unwrap_or_else(|| {
            let taken = mf.spec().variables();
            if taken.iter().any(|v| v == "z") { "w" } else { "z" }.to_string()
        })
    }
    let reports = if is_file_target(target) {
        let mut out = Vec::new();
        for js in read_mf_file(target)? {
            out.push(with_field!(&js.spec.field, |k| {
                let mf = load_mf(&k, &js)?;
                double_report(&mf, &pick_var(&mf, var), cfg.fixed_degree(), cfg)?
            }));
        }
        out
    } else {
        let sel: Selector = target.parse()?;
        with_field!(&cfg.field, |k| {
            sel.resolve(&k, cfg.n_max)?
                .iter()
                .map(|e| double_report(&e.mf, &pick_var(&e.mf, var), cfg.degree_for(e), cfg))
                .collect::<Result<Vec<_>>>()?
        })
    };
    emit(cli, &reports, || reports.iter().map(render_double).collect::<Vec<_>>().join("\n"))?;
    Ok(match reports.iter().find(|d| !d.double_valid) {
        Some(d) => Outcome::Mismatch(format!("{} is not a factorization", d.double.label)),
        None => Outcome::Pass,
    })
}
