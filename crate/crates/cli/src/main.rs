//! Command-line front end: analyze Laurent polynomials, report polygon
//! invariants, classify interior polygons, enumerate the width-2 atlas, and
//! replay the built-in verification examples.
//!
//! Exit codes: 0 on success / verified, 1 on degenerate / refuted verdicts,
//! 2 on usage or input errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use toricurve::atlas::atlas_rows;
use toricurve::classify::{compare_bb1, intrinsicness_verdict, ClassifyError, Trichotomy};
use toricurve::invariants::{invariant_report, InvariantError, InvariantReport};
use toricurve::isocheck::{
    registry, registry_entry, run_entry, CheckReport, RegistryEntry, RegistryOutcome, Verdict,
    DEFAULT_PRIME, DEFAULT_SEED, DEFAULT_TRIALS,
};
use toricurve::lattice::{convex_hull, parse_points, relax};
use toricurve::laurent::parse_laurent;
use toricurve::nondegen::{is_nondegenerate, Method, NonDegeneracyReport};
use toricurve::{LatticePoint, LatticePolygon};

/// Bumped whenever a field of the JSON output changes meaning or moves.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "toricurve", version, about = "Combinatorial invariants of curves in toric surfaces, from Newton polygons")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, value_name = "FILE", global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a Laurent polynomial for nondegeneracy and report the
    /// invariants of its Newton polygon.
    ///
    /// INPUT is either a polynomial literal like "1 + y^2 - x^6*y^2 + x^6*y^4"
    /// or the path of a UTF-8 file containing one.
    Analyze { input: String },
    /// Report the invariants of the convex hull of a vertex list, given as
    /// "x1,y1; x2,y2; ...".
    Polygon { vertices: String },
    /// Classify a lattice-width-2 interior polygon: family membership, the
    /// B vs B1 comparison, and whether the polygon is intrinsic to the
    /// curves it cuts out.
    Classify { vertices: String },
    /// Enumerate all interior polygons of lattice width 2 up to a genus
    /// bound, one row per unimodular equivalence class.
    Enumerate {
        #[arg(long, value_name = "G")]
        genus_bound: i64,
    },
    /// Replay a built-in example ("example:NAME") or run a check described
    /// by a JSON file in the registry-entry schema.
    Verify {
        target: String,
        /// Prime modulus for the finite-field checks.
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        /// Number of curve points to sample per direction.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Seed for the deterministic sampler.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// List the built-in example registry.
    Examples,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((rendered, code)) => match emit(cli.out.as_deref(), &rendered) {
            Ok(()) => code,
            Err(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(2)
            }
        },
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, ExitCode)> {
    match &cli.command {
        Command::Analyze { input } => analyze(cli.format, input),
        Command::Polygon { vertices } => polygon(cli.format, vertices),
        Command::Classify { vertices } => classify(cli.format, vertices),
        Command::Enumerate { genus_bound } => enumerate(cli.format, *genus_bound),
        Command::Verify {
            target,
            prime,
            trials,
            seed,
        } => verify(cli.format, target, *prime, *trials, *seed),
        Command::Examples => examples(cli.format),
    }
}

fn emit(out: Option<&Path>, rendered: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("cannot write report to {}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

/// Inline text, or the contents of the file it names.
fn read_inline_or_file(input: &str) -> Result<String> {
    let path = Path::new(input);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Ok(text.trim().to_string())
    } else {
        Ok(input.to_string())
    }
}

fn points_line(pts: &[LatticePoint]) -> String {
    pts.iter()
        .map(|p| format!("({},{})", p.x, p.y))
        .collect::<Vec<_>>()
        .join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn hull_of(vertices: &str) -> Result<LatticePolygon> {
    let pts = parse_points(vertices).map_err(|e| anyhow!("bad vertex list: {e}"))?;
    Ok(convex_hull(&pts)?)
}

fn invariants_text(out: &mut String, inv: &InvariantReport) {
    let _ = writeln!(out, "genus: {}", inv.genus);
    let _ = writeln!(out, "lattice width: {}", inv.lattice_width);
    let _ = writeln!(out, "gonality: {}", inv.gonality);
    let _ = writeln!(out, "hyperelliptic: {}", yes_no(inv.flags.hyperelliptic));
    let _ = writeln!(out, "tetragonal: {}", yes_no(inv.flags.tetragonal));
    if let (Some(b), Some(b1)) = (inv.b, inv.b1) {
        let _ = writeln!(out, "B / B1: {b} / {b1}");
    }
    if let Some((b1, b2)) = inv.schreyer {
        let _ = writeln!(out, "schreyer: ({b1}, {b2})");
    }
    if let Some([e1, e2, e3]) = inv.scrollar {
        let _ = writeln!(out, "scrollar: {e1}, {e2}, {e3}");
    }
}

fn nondegeneracy_text(out: &mut String, report: &NonDegeneracyReport) {
    let method = match report.method {
        Method::Exact => "exact",
        Method::ProbabilisticOnly => "probabilistic only",
    };
    let _ = writeln!(
        out,
        "non-degenerate: {} ({method})",
        yes_no(report.overall)
    );
    if let Some(probe) = &report.probe {
        let _ = writeln!(
            out,
            "probe: p = {}, {}",
            probe.prime,
            if probe.overall { "passed" } else { "failed" }
        );
    }
    for face in report.faces.iter().filter(|f| !f.pass) {
        match &face.witness {
            Some(w) => {
                let _ = writeln!(out, "  fails on {}: {w}", face.face);
            }
            None => {
                let _ = writeln!(out, "  fails on {}", face.face);
            }
        }
    }
}

fn analyze(format: Format, input: &str) -> Result<(String, ExitCode)> {
    let source = read_inline_or_file(input)?;
    let f = parse_laurent(&source)?;
    let report = is_nondegenerate(&f)?;
    let delta = f.newton_polygon();
    let invariants = invariant_report(&delta)?;
    let code = if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    let rendered = match format {
        Format::Json => to_json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "analyze",
            "input": source,
            "newton_polygon": delta.vertices(),
            "nondegenerate": report.overall,
            "nondegeneracy": report,
            "invariants": invariants,
        }))?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "input: {source}");
            let _ = writeln!(out, "newton polygon: {}", points_line(delta.vertices()));
            nondegeneracy_text(&mut out, &report);
            invariants_text(&mut out, &invariants);
            out
        }
    };
    Ok((rendered, code))
}

fn polygon(format: Format, vertices: &str) -> Result<(String, ExitCode)> {
    let hull = hull_of(vertices)?;
    let invariants = invariant_report(&hull)?;
    let points = hull.lattice_points();
    let boundary = points.iter().filter(|p| p.on_boundary).count();
    let interior = points.len() - boundary;
    let rendered = match format {
        Format::Json => to_json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "polygon",
            "vertices": hull.vertices(),
            "lattice_points": {
                "total": points.len(),
                "boundary": boundary,
                "interior": interior,
            },
            "invariants": invariants,
        }))?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "vertices: {}", points_line(hull.vertices()));
            let _ = writeln!(
                out,
                "lattice points: {} ({boundary} boundary, {interior} interior)",
                points.len()
            );
            invariants_text(&mut out, &invariants);
            out
        }
    };
    Ok((rendered, ExitCode::SUCCESS))
}

fn classify(format: Format, vertices: &str) -> Result<(String, ExitCode)> {
    let gamma = hull_of(vertices)?;
    let comparison = compare_bb1(&gamma)?;
    let delta = relax(&gamma)?
        .as_lattice()
        .expect("compare_bb1 established that the input is an interior polygon");
    let genus = gamma.lattice_points().len() as i64;
    let verdict = match intrinsicness_verdict(&delta) {
        Ok(v) => Some(v),
        Err(ClassifyError::Invariant(InvariantError::NotTetragonal)) => None,
        Err(e) => return Err(e.into()),
    };
    let rendered = match format {
        Format::Json => to_json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "classify",
            "vertices": gamma.vertices(),
            "genus": genus,
            "comparison": comparison,
            "relaxation": delta.vertices(),
            "intrinsicness": verdict,
        }))?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "interior polygon: {}", points_line(gamma.vertices()));
            let _ = writeln!(out, "genus: {genus}");
            match comparison.family {
                Some(tag) => {
                    let _ = writeln!(out, "family: {tag:?}");
                }
                None => {
                    let _ = writeln!(out, "family: none");
                }
            }
            let order = match comparison.order {
                Trichotomy::Less => "B < B1",
                Trichotomy::Equal => "B = B1",
                Trichotomy::Greater => "B > B1",
            };
            let _ = writeln!(
                out,
                "B / B1: {} / {} ({order})",
                comparison.b, comparison.b1
            );
            let _ = writeln!(out, "relaxation: {}", points_line(delta.vertices()));
            match &verdict {
                Some(v) => {
                    let _ = writeln!(out, "intrinsicness: {:?}", v.status);
                    let _ = writeln!(out, "  genus mod 4: {}", v.g_mod_4);
                    if let Some(e) = v.scrollar_expected {
                        let _ = writeln!(out, "  scrollar triple realized: {:?}", e);
                    }
                    let _ = writeln!(
                        out,
                        "  boundary-count criterion met: {}",
                        yes_no(v.sufficient_condition_met)
                    );
                }
                None => {
                    let _ = writeln!(out, "intrinsicness: n/a (curves are not tetragonal)");
                }
            }
            out
        }
    };
    Ok((rendered, ExitCode::SUCCESS))
}

fn enumerate(format: Format, genus_bound: i64) -> Result<(String, ExitCode)> {
    let rows = atlas_rows(genus_bound)?;
    let rendered = match format {
        Format::Json => to_json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "enumerate",
            "genus_bound": genus_bound,
            "count": rows.len(),
            "rows": rows,
        }))?,
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "# {} interior polygons of lattice width 2 with g <= {genus_bound}",
                rows.len()
            );
            let _ = writeln!(out, "{}", toricurve::atlas::AtlasRow::csv_header());
            for row in &rows {
                let _ = writeln!(out, "{}", row.to_csv());
            }
            out
        }
    };
    Ok((rendered, ExitCode::SUCCESS))
}

fn load_entry(target: &str) -> Result<RegistryEntry> {
    if let Some(name) = target.strip_prefix("example:") {
        return registry_entry(name).ok_or_else(|| {
            anyhow!("unknown example '{name}'; run `toricurve examples` for the list")
        });
    }
    let text = fs::read_to_string(target)
        .with_context(|| format!("cannot read check file {target}"))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse check file {target}"))
}

fn check_report_text(out: &mut String, report: &CheckReport) {
    let _ = writeln!(out, "verdict: {:?}", report.verdict);
    if let Some(orientation) = &report.orientation {
        let _ = writeln!(out, "orientation: {orientation:?}");
    }
    let _ = writeln!(
        out,
        "verified: {}, undefined: {}, failed: {}",
        report.verified, report.undefined_at, report.failed
    );
    for tally in &report.directions {
        let _ = writeln!(
            out,
            "  {}: sampled {}, verified {}, undefined {}, failed {}",
            tally.label, tally.sampled, tally.verified, tally.undefined_at, tally.failed
        );
    }
    if let Some(witness) = &report.witness {
        let _ = writeln!(
            out,
            "witness: ({}, {}) — {}",
            witness.point.0, witness.point.1, witness.detail
        );
    }
    let _ = writeln!(
        out,
        "p: {}, trials: {}, seed: {}, sampling complete: {}",
        report.p,
        report.n,
        report.seed,
        yes_no(report.sampling_complete)
    );
}

fn verify(
    format: Format,
    target: &str,
    prime: u64,
    trials: usize,
    seed: u64,
) -> Result<(String, ExitCode)> {
    let entry = load_entry(target)?;
    let outcome = run_entry(&entry, prime, trials, seed)?;
    let (rendered, code) = match &outcome {
        RegistryOutcome::Report(report) => {
            let code = match report.verdict {
                Verdict::Verified => ExitCode::SUCCESS,
                Verdict::Refuted => ExitCode::from(1),
            };
            let rendered = match format {
                Format::Json => to_json_text(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "verify",
                    "name": entry.name,
                    "description": entry.description,
                    "note": entry.note,
                    "expected_verdict": entry.expected_verdict,
                    "report": report,
                }))?,
                Format::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "check: {}", entry.name);
                    let _ = writeln!(out, "description: {}", entry.description);
                    if let Some(note) = &entry.note {
                        let _ = writeln!(out, "note: {note}");
                    }
                    check_report_text(&mut out, report);
                    out
                }
            };
            (rendered, code)
        }
        RegistryOutcome::Note(note) => {
            let rendered = match format {
                Format::Json => to_json_text(&json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "verify",
                    "name": entry.name,
                    "description": entry.description,
                    "note": note,
                }))?,
                Format::Text => {
                    format!(
                        "check: {}\ndescription: {}\nnote: {note}\n",
                        entry.name, entry.description
                    )
                }
            };
            (rendered, ExitCode::SUCCESS)
        }
    };
    Ok((rendered, code))
}

fn examples(format: Format) -> Result<(String, ExitCode)> {
    let entries = registry();
    let rendered = match format {
        Format::Json => to_json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "command": "examples",
            "count": entries.len(),
            "examples": entries,
        }))?,
        Format::Text => {
            let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
            let mut out = String::new();
            for entry in &entries {
                let _ = writeln!(out, "{:width$}  {}", entry.name, entry.description);
            }
            out
        }
    };
    Ok((rendered, ExitCode::SUCCESS))
}

fn to_json_text(value: &serde_json::Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
