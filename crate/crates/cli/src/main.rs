use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use polyauto::automorphism::{compose_factors, invert_factors, jacobian_det, PolyMap};
use polyauto::certificate::Certificate;
use polyauto::grammar::{parse_ring, parse_univariate, print_factors, MapInput};
use polyauto::length::length_decompose;
use polyauto::report::verify_paper;
use polyauto::structure::{build_commutator, stable_tame_pipeline, LengthFourSpec};
use polyauto::tameness::{tame_check, CoefficientMode, FailedStep, TameOutcome};
use serde_json::json;

const TAME: u8 = 0;
const NOT_TAME: u8 = 2;
const FAILURE: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Plane polynomial automorphisms over Z[t]: tameness, length and stable tameness.
#[derive(Debug, Parser)]
#[command(name = "polyauto", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Composes maps or factor lists, leftmost outermost.
    Compose {
        #[arg(required = true, num_args = 2..)]
        inputs: Vec<String>,
    },
    /// Inverts a factor list, or a map through its tameness certificate over K.
    Invert { input: String },
    /// Runs the degree-reduction test, over R or with --field over K.
    TameCheck {
        #[arg(long)]
        field: bool,
        input: String,
    },
    /// Decomposes into the fewest alternating one-variable factors over K.
    Length { input: String },
    /// Builds G1^-1 o F1^-1 o G1 o F1 from C, D, a, b.
    Commutator {
        #[arg(long = "C", value_name = "POLY")]
        c: String,
        #[arg(long = "D", value_name = "POLY")]
        d: String,
        #[arg(long = "a", value_name = "RING")]
        a: String,
        #[arg(long = "b", value_name = "RING")]
        b: String,
    },
    /// Reduces a commutator spec `C = ..; D = ..; a = ..; b = ..` to a length-three residual.
    StableTame { spec: String },
    /// Reproduces every worked example and lists printed-text discrepancies.
    VerifyPaper {
        #[arg(long, value_name = "PATH")]
        report: Option<String>,
    },
}

fn read_map(src: &str) -> Result<PolyMap> {
    Ok(MapInput::parse(src)?.to_map()?)
}

fn print(body: &str) {
    let _ = writeln!(io::stdout().lock(), "{body}");
}

fn emit(format: Format, text: String, value: serde_json::Value) {
    match format {
        Format::Text => print(&text),
        Format::Json => print(&serde_json::to_string_pretty(&value).expect("json")),
    }
}

fn run(cli: Cli) -> Result<u8> {
    let fmt = cli.format;
    match cli.command {
        Command::Compose { inputs } => {
            let maps = inputs.iter().map(|s| read_map(s)).collect::<Result<Vec<_>>>()?;
            let dim = maps[0].dim();
            if let Some(m) = maps.iter().find(|m| m.dim() != dim) {
                bail!("dimension mismatch: {} has dimension {}, expected {dim}", m, m.dim());
            }
            let mut acc = maps.last().cloned().expect("two inputs");
            for m in maps.iter().rev().skip(1) {
                acc = m.compose(&acc)?;
            }
            let acc = PolyMap::with_names(acc.coords().to_vec(), maps[0].names().to_vec())?;
            emit(fmt, acc.to_string(), json!({ "map": acc.to_string(), "integral": acc.is_integral() }));
            Ok(TAME)
        }
        Command::Invert { input } => {
            let (factors, names) = match MapInput::parse(&input)? {
                MapInput::Factors(fl) => (invert_factors(&fl.factors)?, fl.names),
                MapInput::Map(m) => {
                    let cert = match tame_check(&m, CoefficientMode::Field)? {
                        TameOutcome::Tame(c) => c,
                        TameOutcome::NotTame(w) => bail!("no inverse found: stuck at {}", w.failed_step.name()),
                    };
                    (invert_factors(&cert.factors()?)?, m.names().to_vec())
                }
            };
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let map = compose_factors(&factors, names.len())?.renamed(&refs);
            let list = print_factors(&factors, &names);
            emit(
                fmt,
                format!("factors: {list}\nmap: {map}"),
                json!({ "factors": list, "map": map.to_string() }),
            );
            Ok(TAME)
        }
        Command::TameCheck { field, input } => {
            let f = read_map(&input)?;
            if f.dim() != 2 {
                bail!("tame-check needs a plane map, got dimension {}", f.dim());
            }
            let mode = if field { CoefficientMode::Field } else { CoefficientMode::Ring };
            let ring = if field { "K" } else { "R" };
            match tame_check(&f, mode)? {
                TameOutcome::Tame(c) => {
                    let cert = Certificate::tame(&f, &c)?;
                    let text = format!(
                        "tame over {ring}\nsteps: {}\nfactorization: {}",
                        c.steps.len(),
                        print_factors(&c.factors()?, f.names())
                    );
                    emit(fmt, text, serde_json::to_value(&cert)?);
                    Ok(TAME)
                }
                TameOutcome::NotTame(w) => {
                    let cert = Certificate::not_tame(&f, &w)?;
                    let reason = match &w.failed_step {
                        FailedStep::Step6 { h1, h2, required, .. } => format!(
                            "h1 = {h1}, h2 = {h2}, required constant {}",
                            required.as_ref().map_or("none in K".into(), |c| c.to_string())
                        ),
                        FailedStep::Step4 { h1, h2, needs_review, .. } => {
                            format!("h1 = {h1}, h2 = {h2}, needs review: {needs_review}")
                        }
                        FailedStep::Step7 { det } => format!("det J = {det}"),
                    };
                    let text = format!(
                        "not tame over {ring}\nstuck at {}: {reason}\nstuck map: {}",
                        w.failed_step.name(),
                        w.stuck_map
                    );
                    emit(fmt, text, serde_json::to_value(&cert)?);
                    Ok(NOT_TAME)
                }
            }
        }
        Command::Length { input } => {
            let f = read_map(&input)?;
            if f.dim() != 2 {
                bail!("length needs a plane map, got dimension {}", f.dim());
            }
            let d = length_decompose(&f)?;
            let text = format!(
                "length {}\nfactors: {}",
                d.length,
                print_factors(&d.all_factors(), f.names())
            );
            emit(fmt, text, serde_json::to_value(Certificate::length(&f, &d)?)?);
            Ok(TAME)
        }
        Command::Commutator { c, d, a, b } => {
            let spec = LengthFourSpec::new(
                parse_univariate(&c)?,
                parse_univariate(&d)?,
                parse_ring(&a)?,
                parse_ring(&b)?,
            )?;
            let f = build_commutator(&spec)?;
            let det = jacobian_det(&f);
            emit(
                fmt,
                format!("{f}\nintegral: {}\njacobian: {det}", f.is_integral()),
                json!({ "map": f.to_string(), "integral": f.is_integral(), "jacobian": det.to_string() }),
            );
            Ok(TAME)
        }
        Command::StableTame { spec } => {
            let spec = LengthFourSpec::parse(&spec)?;
            let cert = stable_tame_pipeline(&spec)?;
            cert.verify()?;
            let text = {
                let mut lines = vec![format!("original: {}", cert.original)];
                for s in &cert.chain {
                    lines.push(format!("{}: {}", s.name, s.result));
                }
                match &cert.residual {
                    Some(r) => lines.push(format!("residual of length {} over R[X]: {}", r.length, r.map)),
                    None => lines.push("trivial: the commutator is the identity".into()),
                }
                lines.join("\n")
            };
            emit(fmt, text, serde_json::to_value(Certificate::stable_tame(&cert)?)?);
            Ok(TAME)
        }
        Command::VerifyPaper { report } => {
            let r = verify_paper();
            let body = match fmt {
                Format::Text => r.to_string(),
                Format::Json => r.to_json(),
            };
            if let Some(path) = report {
                fs::write(&path, &body).with_context(|| format!("writing {path}"))?;
            }
            print(&body);
            Ok(if r.all_pass() { TAME } else { FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(FAILURE)
        }
    }
}
