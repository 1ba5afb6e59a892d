//! `detdeform`: analysis, ψ reconstruction, canonical forms and counterexample generation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use detdeform::canonical::canonical_pair;
use detdeform::counterexamples::replication::verify_replication;
use detdeform::counterexamples::{gen_odd_type_ce, gen_planar_key_ce, gen_principal_minor_ce, gen_weak_keys_ce, Instance};
use detdeform::doc::{parse_document, MatrixDoc, Pair};
use detdeform::integrability::{reconstruct_psi, rigidity_report_with, RigidityOptions, Verdict};
use detdeform::laurent::{Coeff, Rational};
use detdeform::matrix::{h_table, SymbolicMatrix, DEFAULT_MINOR_CAP};
use detdeform::matroid::compute_matroid;

#[derive(Parser)]
#[command(name = "detdeform", version, about = "Exact analysis of monomial deformations of Cauchy-Binet factorizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    io: Io,
}

#[derive(Args)]
struct Io {
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Args)]
struct AnalysisFlags {
    /// Check integrability on every basis, whatever the basis count.
    #[arg(long)]
    exhaustive: bool,
    /// Bases checked before falling back to sampling.
    #[arg(long, default_value_t = 5000)]
    cap: usize,
    /// Largest number of minors kept in the cache.
    #[arg(long, default_value_t = DEFAULT_MINOR_CAP)]
    minor_cap: u128,
}

impl AnalysisFlags {
    fn options(&self) -> RigidityOptions {
        RigidityOptions { exhaustive: self.exhaustive, basis_cap: self.cap, minor_cap: self.minor_cap }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rigidity report: exit 0 rigid, 2 non-integrable witness, 3 inconclusive.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Reconstruct ψ and m₀ from the h-table.
    Psi { input: PathBuf },
    /// Canonical pair (L*, R*) as a matrix document.
    Canonical { input: PathBuf },
    /// Generate a counterexample document.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// The odd-type constant, as p/q.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rerun the exact symbolic checks on the four families; exit 1 on any mismatch.
    #[command(name = "verify-appendix")]
    VerifyChecks {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    PrincipalMinor,
    WeakKeys,
    OddType,
    PlanarKey,
}

fn read_doc(path: &PathBuf) -> Result<MatrixDoc> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_document(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(io: &Io, value: &Value) -> Result<()> {
    let Format::Json = io.format;
    let text = serde_json::to_string_pretty(value)? + "\n";
    match &io.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn analyze<C: Coeff>(l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>, opts: RigidityOptions) -> Result<(Value, Verdict)> {
    let rep = rigidity_report_with(l, r, opts)?;
    Ok((serde_json::to_value(&rep)?, rep.verdict))
}

fn psi<C: Coeff>(l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>) -> Result<Value> {
    let table = h_table(l, r)?;
    let g = compute_matroid(l)?;
    Ok(serde_json::to_value(reconstruct_psi(&table, &g)?)?)
}

fn canonical<C: Coeff>(vars: Vec<String>, l: &SymbolicMatrix<C>, r: &SymbolicMatrix<C>) -> Result<Value> {
    let table = h_table(l, r)?;
    let g = compute_matroid(l)?;
    let (asg, ls, rs) = canonical_pair(&table, &g)?;
    let prov = json!({ "canonical": { "basis": asg.basis, "g": asg.g, "kappa1": asg.kappa1, "kappa2": asg.kappa2, "choices": asg.choices } });
    Ok(serde_json::to_value(MatrixDoc::from_pair(vars, &ls, &rs, Some(prov)))?)
}

fn instance_doc(inst: &Instance) -> Result<Value> {
    let prov = json!({ "family": inst.family, "parameters": inst.params, "seed": inst.seed, "notes": inst.notes });
    Ok(serde_json::to_value(MatrixDoc::from_pair(inst.vars.clone(), &inst.l, &inst.r, Some(prov)))?)
}

fn parse_c(s: &str) -> Result<Rational> {
    Rational::decode(s).map_err(|e| anyhow::anyhow!("--c: {e}"))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze { input, flags } => {
            let doc = read_doc(&input)?;
            let (value, verdict) = match doc.pair()? {
                Pair::Rational(l, r) => analyze(&l, &r, flags.options())?,
                Pair::Gaussian(l, r) => analyze(&l, &r, flags.options())?,
            };
            emit(&cli.io, &value)?;
            Ok(verdict.exit_code() as u8)
        }
        Command::Psi { input } => {
            let doc = read_doc(&input)?;
            let value = match doc.pair()? {
                Pair::Rational(l, r) => psi(&l, &r)?,
                Pair::Gaussian(l, r) => psi(&l, &r)?,
            };
            emit(&cli.io, &value)?;
            Ok(0)
        }
        Command::Canonical { input } => {
            let doc = read_doc(&input)?;
            let vars = doc.vars.clone();
            let value = match doc.pair()? {
                Pair::Rational(l, r) => canonical(vars, &l, &r)?,
                Pair::Gaussian(l, r) => canonical(vars, &l, &r)?,
            };
            emit(&cli.io, &value)?;
            Ok(0)
        }
        Command::Gen { family, k, p, c, seed } => {
            let inst = match family {
                Family::PrincipalMinor => gen_principal_minor_ce(k.unwrap_or(4), seed)?,
                Family::WeakKeys => gen_weak_keys_ce(k.unwrap_or(5), p.unwrap_or(4), seed)?,
                Family::OddType => {
                    if k.is_some_and(|k| k != 3) || p.is_some_and(|p| p != 2) {
                        bail!("the odd-type family is fixed at k = 3, p = 2");
                    }
                    gen_odd_type_ce(&parse_c(c.as_deref().unwrap_or("2"))?)?
                }
                Family::PlanarKey => gen_planar_key_ce(k.unwrap_or(6), None, None, seed)?,
            };
            emit(&cli.io, &instance_doc(&inst)?)?;
            Ok(0)
        }
        Command::VerifyChecks { seed } => {
            let rows = verify_replication(seed)?;
            let ok = rows.iter().all(|r| r.pass);
            emit(&cli.io, &json!({ "pass": ok, "rows": rows }))?;
            for r in &rows {
                eprintln!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
