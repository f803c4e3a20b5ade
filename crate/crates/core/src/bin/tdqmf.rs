use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tdqmf_core::datasets::{self, App, Stage, Status};
use tdqmf_core::decision::{pipeline, DecisionPolicy};
use tdqmf_core::io::{self, load_evidence, Evidence, RunReport};
use tdqmf_core::{Combiner, Error, Proposition, Qbpa};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NO_DECISION: u8 = 3;
const EXIT_CONFLICT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tdqmf",
    version,
    about = "Reliability-weighted quantum evidence fusion"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Decimal places in table output.
    #[arg(long, default_value_t = 4, global = true)]
    precision: usize,
    /// Reserved; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print nothing on stdout; rely on the exit code.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check an evidence file against the schema and the unit-sum rule.
    Validate { file: PathBuf },
    /// Show every evidence after modification, before and after normalization.
    Modify { file: PathBuf },
    /// Combine all modified evidence and show the conflict of each step.
    Combine { file: PathBuf },
    /// Run the full pipeline and report the selected proposition.
    Decide {
        file: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Rerun a bundled case study and diff it against the published tables.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        app: u8,
        /// Overrides the amplitude/modulus tolerance of every table.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

struct Out {
    format: Format,
    precision: usize,
    quiet: bool,
}

impl Out {
    fn print(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }

    fn json(&self, value: &serde_json::Value) {
        self.print(serde_json::to_string_pretty(value).expect("json value serializes"));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out {
        format: cli.format,
        precision: cli.precision,
        quiet: cli.quiet,
    };
    let code = match cli.command {
        Command::Validate { file } => validate(&out, &file),
        Command::Modify { file } => with_evidence(&file, |ev| modify(&out, ev)),
        Command::Combine { file } => with_evidence(&file, |ev| combine(&out, ev)),
        Command::Decide { file, threshold } => {
            let policy = match threshold.map(DecisionPolicy::with_threshold).transpose() {
                Ok(p) => p.unwrap_or_default(),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            with_evidence(&file, |ev| decide(&out, ev, policy))
        }
        Command::Reproduce { app, tolerance } => {
            if tolerance.is_some_and(|t| t.is_nan() || t < 0.0) {
                eprintln!("error: tolerance must be non-negative");
                return ExitCode::from(EXIT_USAGE);
            }
            let app = App::from_number(app).expect("range checked by clap");
            reproduce(&out, app, tolerance)
        }
    };
    ExitCode::from(code)
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::TotalConflict { .. } => EXIT_CONFLICT,
        _ => EXIT_INVALID,
    }
}

fn with_evidence(file: &PathBuf, f: impl FnOnce(&Evidence) -> Result<u8, Error>) -> u8 {
    let evidence = match load_evidence(file) {
        Ok(ev) => ev,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    f(&evidence).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_for(&e)
    })
}

fn validate(out: &Out, file: &PathBuf) -> u8 {
    match load_evidence(file) {
        Ok(ev) => {
            let sums: Vec<(f64, f64)> = ev
                .tdqmfs
                .iter()
                .map(|t| (t.original.modulus_sum(), t.indicative.as_qbpa().modulus_sum()))
                .collect();
            match out.format {
                Format::Json => out.json(&json!({
                    "valid": true,
                    "frame": ev.frame.labels(),
                    "tolerance": ev.tolerance,
                    "digest": ev.digest,
                    "evidences": sums.iter().map(|(a, b)| json!({"q1_modulus_sum": a, "q2_modulus_sum": b})).collect::<Vec<_>>(),
                })),
                Format::Table => {
                    out.print(format!(
                        "ok: {} evidences over [{}] (tolerance {})",
                        ev.tdqmfs.len(),
                        ev.frame.labels().join(", "),
                        ev.tolerance
                    ));
                    for (i, (a, b)) in sums.iter().enumerate() {
                        let p = out.precision;
                        out.print(format!("  evidence {}: Σψ²(q1) = {a:.p$}, Σψ²(q2) = {b:.p$}", i + 1));
                    }
                }
            }
            0
        }
        Err(e) => {
            if out.format == Format::Json {
                out.json(&json!({"valid": false, "error": e.to_string()}));
            }
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

/// Singletons first, then composites, the universal set last.
fn columns(qs: &[&Qbpa]) -> Vec<Proposition> {
    let mut props: Vec<Proposition> = qs
        .iter()
        .flat_map(|q| q.iter().map(|(p, _)| p))
        .filter(|p| !p.is_empty())
        .collect();
    props.sort_by_key(|p| (p.cardinality(), p.mask()));
    props.dedup();
    props
}

fn render_table(header: &[String], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|r| r[c].chars().count())
                .chain([header[c].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}", w = *w))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut text = line(header);
    for r in rows {
        text.push('\n');
        text.push_str(&line(r));
    }
    text
}

fn amplitude_table(out: &Out, ev: &Evidence, labels: &[String], qs: &[&Qbpa]) -> String {
    let props = columns(qs);
    let mut header = vec![String::new()];
    header.extend(props.iter().map(|&p| ev.name_of(p)));
    let rows: Vec<Vec<String>> = labels
        .iter()
        .zip(qs)
        .map(|(label, q)| {
            let mut row = vec![label.clone()];
            row.extend(props.iter().map(|&p| format!("{:.*}", out.precision, q.get(p))));
            row
        })
        .collect();
    render_table(&header, &rows)
}

fn modify(out: &Out, ev: &Evidence) -> Result<u8, Error> {
    let modified: Vec<Qbpa> = ev.tdqmfs.iter().map(|t| t.modify()).collect();
    let normalized = tdqmf_core::modify_all(&ev.tdqmfs)?;
    match out.format {
        Format::Json => out.json(&json!({
            "modified": modified.iter().map(|q| io::stage_table_named(q, |p| ev.name_of(p))).collect::<Vec<_>>(),
            "normalized": normalized.iter().map(|q| io::stage_table_named(q, |p| ev.name_of(p))).collect::<Vec<_>>(),
        })),
        Format::Table => {
            let labels: Vec<String> = (1..=modified.len()).map(|i| format!("evidence {i}")).collect();
            out.print("modified:");
            out.print(amplitude_table(out, ev, &labels, &modified.iter().collect::<Vec<_>>()));
            out.print("\nnormalized:");
            out.print(amplitude_table(out, ev, &labels, &normalized.iter().collect::<Vec<_>>()));
        }
    }
    Ok(0)
}

fn combine(out: &Out, ev: &Evidence) -> Result<u8, Error> {
    let normalized = tdqmf_core::modify_all(&ev.tdqmfs)?;
    let fold = Combiner::default().fold(&normalized)?;
    match out.format {
        Format::Json => out.json(&json!({
            "combined": io::stage_table_named(&fold.result, |p| ev.name_of(p)),
            "conflicts": fold.steps,
        })),
        Format::Table => {
            let p = out.precision;
            out.print(amplitude_table(out, ev, &["combined".into()], &[&fold.result]));
            for (i, c) in fold.steps.iter().enumerate() {
                out.print(format!(
                    "step {}: K = {:.p$}, |K| (ψ²) = {:.p$}, |K| (Euclidean) = {:.p$}, 1 - |K| = {:.p$}",
                    i + 1,
                    c.k,
                    c.k_modulus,
                    c.k_magnitude,
                    c.denominator
                ));
            }
        }
    }
    Ok(0)
}

fn decide(out: &Out, ev: &Evidence, policy: DecisionPolicy) -> Result<u8, Error> {
    let run = pipeline(&ev.tdqmfs, policy)?;
    let report = RunReport::new(ev, &run);
    match out.format {
        Format::Json => out.print(report.to_json()),
        Format::Table => {
            let p = out.precision;
            let header = vec!["proposition".to_string(), "modulus".to_string()];
            let rows: Vec<Vec<String>> = report
                .decision
                .ranking
                .iter()
                .map(|r| vec![r.proposition.clone(), format!("{:.p$}", r.modulus)])
                .collect();
            out.print(render_table(&header, &rows));
            match &report.decision.selected {
                Some(s) => out.print(format!(
                    "selected: {s} (modulus {:.p$})",
                    report.decision.selected_modulus
                )),
                None => out.print(format!(
                    "no decision: top modulus {:.p$} is below threshold {}",
                    report.decision.selected_modulus,
                    policy.threshold.unwrap_or_default()
                )),
            }
            if !report.decision.ties.is_empty() {
                out.print(format!("tied with: {}", report.decision.ties.join(", ")));
            }
        }
    }
    Ok(if run.outcome.selected.is_some() {
        0
    } else {
        EXIT_NO_DECISION
    })
}

fn reproduce(out: &Out, app: App, tolerance: Option<f64>) -> u8 {
    let rep = match datasets::reproduce(app, tolerance) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let label = |s: Status| match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Erratum => "ERRATUM",
    };
    match out.format {
        Format::Json => {
            let checks: Vec<_> = rep
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "stage": c.stage.to_string(),
                        "evidence": c.evidence.map(|i| i + 1),
                        "proposition": c.proposition,
                        "expected": c.expected,
                        "actual": c.actual,
                        "expected_phase": c.expected_phase,
                        "actual_phase": c.actual_phase,
                        "tolerance": c.tolerance,
                        "phase_tolerance": c.phase_tolerance,
                        "status": label(c.status()),
                        "erratum": c.erratum,
                    })
                })
                .collect();
            out.json(&json!({
                "app": app.number(),
                "expected_decision": rep.expected_decision,
                "selected": rep.selected,
                "checks": checks,
                "passed": rep.passed(),
            }));
        }
        Format::Table => {
            let p = out.precision;
            out.print(format!("{app}"));
            for stage in Stage::ALL {
                let checks: Vec<_> = rep.stage(stage).collect();
                let (amp, phase) = (checks[0].tolerance, checks[0].phase_tolerance);
                let tol = match phase {
                    Some(ph) => format!("±{amp} amplitude, ±{ph} rad"),
                    None if stage == Stage::Moduli => format!("±{amp}"),
                    None => format!("±{amp} amplitude, phase not compared"),
                };
                out.print(format!("\n{stage} ({tol})"));
                let mut header = vec![String::new()];
                let mut props: Vec<String> = Vec::new();
                for c in &checks {
                    if !props.contains(&c.proposition) {
                        props.push(c.proposition.clone());
                    }
                }
                header.extend(props.iter().cloned());
                let mut rows: Vec<Vec<String>> = Vec::new();
                for chunk in checks.chunks(props.len()) {
                    let name = match chunk[0].evidence {
                        Some(i) => format!("evidence {}", i + 1),
                        None => stage.to_string(),
                    };
                    let mut row = vec![name];
                    row.extend(chunk.iter().map(|c| label(c.status()).to_string()));
                    rows.push(row);
                }
                out.print(render_table(&header, &rows));
            }
            let notes: Vec<_> = rep.checks.iter().filter(|c| c.status() != Status::Pass).collect();
            if !notes.is_empty() {
                out.print("\nentries out of tolerance:");
            }
            for c in notes {
                let row = c
                    .evidence
                    .map(|i| format!(" evidence {}", i + 1))
                    .unwrap_or_default();
                let phases = match (c.expected_phase, c.actual_phase) {
                    (Some(e), Some(a)) if c.phase_tolerance.is_some() => {
                        format!(", θ printed {e:.p$} computed {a:.p$}")
                    }
                    _ => String::new(),
                };
                out.print(format!(
                    "  {} {}{row} {}: printed {:.p$} computed {:.p$}{phases}",
                    label(c.status()),
                    c.stage,
                    c.proposition,
                    c.expected,
                    c.actual,
                ));
                if let Some(note) = c.erratum {
                    out.print(format!("      {note}"));
                }
            }
            out.print(format!(
                "\ndecision: expected {}, selected {} ({})",
                rep.expected_decision,
                rep.selected.as_deref().unwrap_or("none"),
                if rep.decision_matches() { "PASS" } else { "FAIL" }
            ));
            out.print(format!("overall: {}", if rep.passed() { "PASS" } else { "FAIL" }));
        }
    }
    if rep.passed() {
        0
    } else {
        EXIT_INVALID
    }
}
