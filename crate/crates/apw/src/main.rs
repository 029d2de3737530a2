//! `apw`: command-line front end for symplectic sums along tori, collar
//! families and their characteristic flows.
//!
//! Exit codes: 0 success, 1 input error, 2 criterion not met (a report is
//! still written).

mod input;
mod traj;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use apw_core::catalog::{self, GeographyPoint, GeographyStatus};
use apw_core::collardyn::{
    self, affine_periodic_points, aperiodic_params, classify_orbit, AffineTorusMap, CollarError, CollarFamily, NilPoint,
    SimOptions,
};
use apw_core::qlin::{parse_rational, IntMatrix, ScalarK, Tag};
use apw_core::sumcalc::{self, cut, spec_violations, symplectic_sum, Verdict};
use clap::{Parser, Subcommand};
use serde_json::json;

use input::{envelope, read_doc, write_json, Payload, SCHEMA};

/// `println!` that reports a closed stdout (e.g. piping into `head`) as an
/// error instead of panicking.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        writeln!(std::io::stdout().lock(), $($arg)*)?
    }};
}

#[derive(Parser)]
#[command(name = "apw", version, about = "Aperiodic symplectic forms via symplectic sums along tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perform a symplectic sum described by a JSON `sum` document.
    Sum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the aperiodicity verdict of a sum document or catalog entry.
    Verdict {
        #[arg(long, conflicts_with = "name")]
        input: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Simulate the characteristic flow of a collar slice.
    FlowSim {
        /// Catalog entry whose collar family to use.
        #[arg(long, conflicts_with = "input")]
        family: Option<String>,
        /// JSON document with a `family` payload.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Perturbation parameter: a rational, decimal or tagged expression.
        #[arg(long)]
        u: String,
        /// Collar coordinate of the slice.
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = 100.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 1e-6)]
        tau: f64,
        /// Numeric values for tags, e.g. `--bind alpha=1.4142135623730951`.
        #[arg(long = "bind", value_name = "TAG=VALUE")]
        bindings: Vec<String>,
        /// Starting base point as comma-separated coordinates (default 0).
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decide existence of periodic points of an affine torus map.
    PeriodicPoints {
        #[arg(long, conflicts_with_all = ["a", "b"])]
        input: Option<PathBuf>,
        /// Matrix rows separated by `;`, entries by `,`, e.g. `1,0;1,1`.
        #[arg(long)]
        a: Option<String>,
        /// Translation entries separated by `,`, e.g. `alpha,0`.
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Geography coverage of a point or of a range of χ.
    Geography {
        #[arg(long, requires = "c")]
        chi: Option<i64>,
        #[arg(long, requires = "chi")]
        c: Option<i64>,
        /// Write the witness sum chain for the point to this JSON file.
        #[arg(long, requires = "chi")]
        witness: Option<PathBuf>,
        #[arg(long, requires = "chi_max", conflicts_with = "chi")]
        chi_min: Option<i64>,
        #[arg(long, requires = "chi_min")]
        chi_max: Option<i64>,
        /// CSV output for enumeration (`chi,c,status,witness`).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a catalog example.
    Catalog {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        list: bool,
    },
    /// Check the perturbation criterion on a collar family.
    CollarCheck {
        #[arg(long, conflicts_with = "input")]
        family: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a JSON document against the record invariants.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Plot a trajectory CSV as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Closure tolerance for the closing annotation.
        #[arg(long, default_value_t = 1e-3)]
        tau: f64,
    },
}

/// Successful outcome: criterion met (exit 0) or not (exit 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Met,
    NotMet,
}

impl Outcome {
    fn from_bool(met: bool) -> Self {
        if met {
            Outcome::Met
        } else {
            Outcome::NotMet
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Met) => ExitCode::SUCCESS,
        Ok(Outcome::NotMet) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(value: &serde_json::Value, report: Option<&Path>) -> Result<()> {
    match report {
        Some(p) => write_json(p, value),
        None => {
            outln!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Aperiodic { branch, guarantee, .. } => {
            let b = match branch {
                collardyn::Branch::I => "i",
                collardyn::Branch::II => "ii",
            };
            format!("aperiodic (branch {b}, {guarantee:?})")
        }
        Verdict::Unknown { reason } => format!("unknown: {reason}"),
    }
}

fn parse_bindings(raw: &[String]) -> Result<BTreeMap<Tag, f64>> {
    raw.iter()
        .map(|b| {
            let (k, v) = b.split_once('=').ok_or_else(|| anyhow!("binding {b:?} must look like TAG=VALUE"))?;
            let v: f64 = v.trim().parse().with_context(|| format!("binding {b:?}: value is not a number"))?;
            Ok((Tag::new(k.trim()), v))
        })
        .collect()
}

fn parse_int_matrix(s: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<i64>> = s
        .split(';')
        .map(|r| r.split(',').map(|x| x.trim().parse::<i64>()).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("matrix {s:?}: entries must be integers"))?;
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    if refs.is_empty() || refs.iter().any(|r| r.len() != refs[0].len()) {
        bail!("matrix {s:?}: rows must have equal length");
    }
    Ok(IntMatrix::from_i64(&refs))
}

fn family_from(name: Option<&str>, input: Option<&Path>) -> Result<(String, CollarFamily)> {
    match (name, input) {
        (Some(n), _) => {
            let entry = catalog::lookup(n)?;
            let fam = entry
                .family
                .ok_or_else(|| anyhow!("catalog entry {n:?} has no collar family (verdict: {})", verdict_line(&entry.verdict)))?;
            Ok((n.to_string(), fam))
        }
        (None, Some(p)) => match read_doc(p)? {
            Payload::Family(f) => {
                let v = f.violations();
                if !v.is_empty() {
                    bail!("invalid family: {}", v.join("; "));
                }
                Ok((p.display().to_string(), f))
            }
            other => bail!("expected a family document, got {}", other.kind()),
        },
        (None, None) => bail!("one of --family or --input is required"),
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Sum { input, report } => {
            let spec = match read_doc(&input)? {
                Payload::Sum(s) => s,
                other => bail!("expected a sum document, got {}", other.kind()),
            };
            let result = symplectic_sum(&spec)?;
            eprintln!("{}: {}", result.manifold.name, verdict_line(&result.verdict));
            emit(&envelope("sum", "result", &result)?, report.as_deref())?;
            Ok(Outcome::from_bool(result.verdict.is_aperiodic()))
        }
        Command::Verdict { input, name } => {
            let verdict = match (input, name) {
                (_, Some(n)) => catalog::lookup(&n)?.verdict,
                (Some(p), None) => match read_doc(&p)? {
                    Payload::Sum(s) => symplectic_sum(&s)?.verdict,
                    Payload::Result(r) => r.verdict,
                    Payload::Entry { entry, .. } => entry.verdict,
                    other => bail!("expected a sum, result or entry document, got {}", other.kind()),
                },
                (None, None) => bail!("one of --input or --name is required"),
            };
            outln!("{}", verdict_line(&verdict));
            Ok(Outcome::from_bool(verdict.is_aperiodic()))
        }
        Command::FlowSim { family, input, u, s, horizon, step, tau, bindings, start, csv, report } => {
            let (source, fam) = family_from(family.as_deref(), input.as_deref())?;
            let u: ScalarK = u.parse().map_err(|_| anyhow!("--u {u:?} is not a rational, decimal or tagged expression"))?;
            let binds = parse_bindings(&bindings)?;
            let mut x0 = NilPoint::origin(fam.m);
            x0.s = s;
            if let Some(st) = start {
                let coords: Vec<f64> = st
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .context("--start must be comma-separated numbers")?;
                if coords.len() != fam.m {
                    bail!("--start needs {} coordinates", fam.m);
                }
                x0.base = coords;
            }
            let opts = SimOptions { horizon, step, tau, ..SimOptions::default() };
            let (trajectory, detection) = collardyn::simulate_flow(&fam, &u, &binds, &x0, &opts)?;
            let exact = parse_rational(&s.to_string())
                .ok()
                .map(|s_q| fam.kernel_direction(&u, &ScalarK::rational(s_q)))
                .transpose()
                .ok()
                .flatten()
                .map(|c| classify_orbit(&c, fam.euler_k));
            if let Some(p) = &csv {
                traj::write_csv(p, &trajectory)?;
            }
            let closed = detection.closed == collardyn::Closure::Closed;
            outln!("closed = {closed}");
            let value = json!({
                "schema": SCHEMA,
                "command": "flow-sim",
                "family": source,
                "u": u,
                "s": s,
                "options": opts,
                "closed": closed,
                "detection": detection,
                "exact_orbit": exact,
                "samples": trajectory.samples.len(),
            });
            match report {
                Some(p) => write_json(&p, &value)?,
                None => outln!("{}", serde_json::to_string_pretty(&value)?),
            }
            Ok(Outcome::Met)
        }
        Command::PeriodicPoints { input, a, b, max_n, report } => {
            let map = match (input, a, b) {
                (Some(p), _, _) => match read_doc(&p)? {
                    Payload::Map(m) => m,
                    other => bail!("expected a map document, got {}", other.kind()),
                },
                (None, Some(a), Some(b)) => {
                    let a = parse_int_matrix(&a)?;
                    let b: Vec<ScalarK> = b
                        .split(',')
                        .map(|x| x.trim().parse::<ScalarK>().map_err(|_| anyhow!("--b entry {x:?} is not a scalar")))
                        .collect::<Result<_>>()?;
                    AffineTorusMap::new(a, b)?
                }
                _ => bail!("give either --input or both --a and --b"),
            };
            let answers = affine_periodic_points(&map, max_n)?;
            let first = answers.iter().find(|a| a.exists).map(|a| a.n);
            match first {
                Some(n) => outln!("periodic points exist (first period {n})"),
                None => outln!("no periodic points for n <= {max_n}"),
            }
            let value = json!({"schema": SCHEMA, "command": "periodic-points", "map": map, "max_n": max_n, "answers": answers});
            if let Some(p) = report {
                write_json(&p, &value)?;
            }
            Ok(Outcome::from_bool(first.is_none()))
        }
        Command::Geography { chi, c, witness, chi_min, chi_max, csv } => {
            if let (Some(chi), Some(c)) = (chi, c) {
                let pt = GeographyPoint::new(chi, c);
                let status = catalog::geography_covered(pt);
                outln!("{status}");
                if let Some(w) = witness {
                    let wit = catalog::geography_witness(pt)?;
                    write_json(&w, &envelope("geography", "witness", &wit)?)?;
                }
                return Ok(Outcome::from_bool(matches!(status, GeographyStatus::Covered(_))));
            }
            let (lo, hi) = chi_min.zip(chi_max).ok_or_else(|| anyhow!("give --chi and --c, or --chi-min and --chi-max"))?;
            let points = catalog::geography_enumerate(lo, hi)?;
            let missing: Vec<_> = points.iter().filter(|(_, s)| *s == GeographyStatus::NotCovered).collect();
            if let Some(p) = csv {
                let mut w = csv::Writer::from_path(&p).with_context(|| format!("cannot write {}", p.display()))?;
                w.write_record(["chi", "c", "status", "witness"])?;
                for (pt, s) in &points {
                    let (status, wit) = match s {
                        GeographyStatus::Covered(l) => ("Covered".to_string(), l.to_string()),
                        other => (other.to_string(), String::new()),
                    };
                    w.write_record([pt.chi.to_string(), pt.c.to_string(), status, wit])?;
                }
                w.flush()?;
            }
            outln!("{} points, {} not covered", points.len(), missing.len());
            for (pt, _) in &missing {
                outln!("NotCovered chi={} c={}", pt.chi, pt.c);
            }
            Ok(Outcome::Met)
        }
        Command::Catalog { name, report, list } => {
            if list {
                for (n, d) in catalog::catalog_names() {
                    outln!("{n:16} {d}");
                }
                return Ok(Outcome::Met);
            }
            let name = name.expect("required unless --list");
            let entry = catalog::lookup(&name)?;
            outln!("{}: {}", entry.name, verdict_line(&entry.verdict));
            let mut value = envelope("catalog", "entry", &entry)?;
            value["name"] = name.into();
            emit(&value, report.as_deref())?;
            Ok(Outcome::from_bool(entry.verdict.is_aperiodic()))
        }
        Command::CollarCheck { family, input, report } => {
            if let Some(n) = &family {
                let entry = catalog::lookup(n)?;
                if entry.family.is_none() {
                    let why = verdict_line(&entry.verdict);
                    outln!("criterion not met: {why}");
                    let value = json!({"schema": SCHEMA, "command": "collar-check", "family": n, "criterion_not_met": why});
                    emit(&value, report.as_deref())?;
                    return Ok(Outcome::NotMet);
                }
            }
            let (source, fam) = family_from(family.as_deref(), input.as_deref())?;
            match aperiodic_params(&fam) {
                Ok(r) => {
                    let bad = r.violations().len();
                    outln!("branch {:?}, {:?}: {} samples, {} violations", r.branch, r.guarantee, r.samples.len(), bad);
                    let value = json!({"schema": SCHEMA, "command": "collar-check", "family": source, "report": r});
                    emit(&value, report.as_deref())?;
                    Ok(Outcome::from_bool(bad == 0))
                }
                Err(CollarError::CriterionNotMet(why)) => {
                    outln!("criterion not met: {why}");
                    let value = json!({"schema": SCHEMA, "command": "collar-check", "family": source, "criterion_not_met": why});
                    emit(&value, report.as_deref())?;
                    Ok(Outcome::NotMet)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Validate { input } => {
            let problems = validate(read_doc(&input)?)?;
            if problems.is_empty() {
                outln!("OK");
                Ok(Outcome::Met)
            } else {
                for p in &problems {
                    outln!("{p}");
                }
                Ok(Outcome::NotMet)
            }
        }
        Command::Plot { csv, out, tau } => {
            let closed = traj::plot(&csv, &out, tau)?;
            outln!("wrote {} ({})", out.display(), if closed { "closed" } else { "not closed" });
            Ok(Outcome::Met)
        }
    }
}

/// Invariant violations of a document. Reports are re-derived: a sum
/// result must be reproduced by its provenance and a catalog entry by a
/// fresh lookup.
fn validate(doc: Payload) -> Result<Vec<String>> {
    Ok(match doc {
        Payload::Summand(s) => sumcalc::violations(&s),
        Payload::Sum(s) => spec_violations(&s),
        Payload::Family(f) => f.violations(),
        Payload::Map(m) => match AffineTorusMap::new(m.a, m.b) {
            Ok(_) => Vec::new(),
            Err(e) => vec![e.to_string()],
        },
        Payload::Result(r) => {
            let mut v = sumcalc::violations(&r.manifold);
            match cut(&r) {
                Ok(spec) => {
                    let again = symplectic_sum(&spec)?;
                    if again.verdict != r.verdict {
                        v.push("verdict differs from a fresh sum of the recorded provenance".into());
                    }
                }
                Err(e) => v.push(e.to_string()),
            }
            v
        }
        Payload::Entry { key, entry } => {
            let mut v = sumcalc::violations(&entry.manifold);
            match key {
                Some(k) => {
                    let fresh = catalog::lookup(&k)?;
                    if fresh.verdict != entry.verdict {
                        v.push(format!("verdict differs from a fresh build of {k:?}"));
                    }
                    if fresh != *entry {
                        v.push(format!("entry differs from a fresh build of {k:?}"));
                    }
                }
                None => v.push("catalog entry without a lookup name cannot be re-derived".into()),
            }
            v
        }
    })
}
