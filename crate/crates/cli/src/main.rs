//! Command-line front door: generate model tables, run the validator
//! suite on table files, reproduce the entropy tables, and export demo
//! series as CSV.
//!
//! Exit codes: 0 all checks pass, 1 check failures, 2 input/config
//! errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crqm_core::algebra::{RingTag, StateVector};
use crqm_core::dynamics::{tvn_compare, zeno_chain, HermitianOperator};
use crqm_core::entropy::{axiom_five_test, entropy_tables_csv, render_entropy_tables};
use crqm_core::geometry::build_circle_by_adjunction;
use crqm_core::models::{crqm_table, hv_skeleton_simulate, skeleton_table};
use crqm_core::ptable::{
    check_axiom_four, check_axiom_one, check_axiom_three, enumerate_frames, metric_consistency,
    ModelLaw, PTable,
};
use crqm_core::report::VerificationReport;

#[derive(Parser)]
#[command(
    name = "crqm",
    version,
    about = "Verify p-table axioms, reproduce the qubit entropy tables, and run measurement demos"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "C", alias = "c")]
    C,
    #[value(name = "H", alias = "h")]
    H,
}

impl From<RingArg> for RingTag {
    fn from(value: RingArg) -> Self {
        match value {
            RingArg::R => RingTag::R,
            RingArg::C => RingTag::C,
            RingArg::H => RingTag::H,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Crqm,
    Hv,
}

impl From<ModelArg> for ModelLaw {
    fn from(value: ModelArg) -> Self {
        match value {
            ModelArg::Crqm => ModelLaw::Crqm,
            ModelArg::Hv => ModelLaw::HiddenVariable,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Csv,
    Object,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute and print the two qubit entropy tables.
    Tables {
        /// Convert from nats to bits for display.
        #[arg(long)]
        bits: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the axiom validators on a table file.
    Check {
        path: PathBuf,
        /// Orthogonality and residual tolerance (use a 3-sigma value for
        /// simulated tables).
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// Also compare the d-metric against a model's distance law.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Accept tables asymmetric beyond 1e-12 (Monte-Carlo output).
        #[arg(long)]
        tolerate: bool,
        /// Print one aggregate line instead of one record per check.
        #[arg(long)]
        summary: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Generate a model table and write it in the table file format.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a named demonstration, printing a report and writing CSV.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// Analytic rank-R skeleton table.
    Skeleton {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Born-rule table over a basis plus sampled states.
    Crqm {
        #[arg(long, value_enum, default_value_t = RingArg::C)]
        ring: RingArg,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Extra uniformly sampled states beyond the basis.
        #[arg(long, default_value_t = 0)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo hidden-variable reproduction of the skeleton.
    Hv {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Entropy reduction by an intermediate measurement.
    Tvn {
        /// Overlap a(b) of the demonstration pair.
        #[arg(long, default_value_t = 0.75)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measurement-chain survival against the coaxing bound.
    Zeno {
        #[arg(long, default_value_t = 0.02)]
        tau: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Hermitian operator file; defaults to the 2-level hopping
        /// operator when omitted.
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Purity-distribution test across the coordinate rings.
    Axiom5 {
        #[arg(long, value_enum, default_value_t = RingArg::C)]
        ring: RingArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circular properly mapped set by antipode/midpoint adjunction.
    Adjunction {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta0: f64,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the generated p-table for feeding back into `check`.
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<bool, String> {
    match command {
        Command::Tables { bits, format, out } => {
            let content = match format {
                Format::Text => render_entropy_tables(bits),
                Format::Csv => entropy_tables_csv(bits),
                Format::Object => {
                    let conv = if bits {
                        std::f64::consts::LN_2.recip()
                    } else {
                        1.0
                    };
                    let objects: Vec<_> = crqm_core::entropy::entropy_table_rows()
                        .into_iter()
                        .map(|row| {
                            serde_json::json!({
                                "rank": row.rank,
                                "model": row.model,
                                "value": row.value * conv,
                                "method": row.method,
                                "residual": row.residual,
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::to_string_pretty(&objects).unwrap())
                }
            };
            write_or_print(out.as_deref(), &content)?;
            Ok(true)
        }
        Command::Check {
            path,
            eps,
            model,
            tolerate,
            summary,
            format,
        } => cmd_check(&path, eps, model, tolerate, summary, format),
        Command::Gen(what) => {
            let (table, out) = match what {
                GenCommand::Skeleton { rank, out } => {
                    if rank < 1 {
                        return Err("rank must be at least 1".into());
                    }
                    (skeleton_table(rank), out)
                }
                GenCommand::Crqm {
                    ring,
                    dim,
                    count,
                    seed,
                    out,
                } => {
                    if dim < 1 {
                        return Err("dim must be at least 1".into());
                    }
                    (crqm_table(ring.into(), dim, count, seed).0, out)
                }
                GenCommand::Hv {
                    rank,
                    samples,
                    seed,
                    out,
                } => {
                    if rank < 1 {
                        return Err("rank must be at least 1".into());
                    }
                    if samples < 1 {
                        return Err("samples must be at least 1".into());
                    }
                    (hv_skeleton_simulate(rank, samples, seed), out)
                }
            };
            write_or_print(out.as_deref(), &format!("{}\n", table.to_json()))?;
            Ok(true)
        }
        Command::Demo(what) => cmd_demo(what),
    }
}

fn emit_report(report: &VerificationReport, format: Format, lines: &mut Vec<String>) {
    match format {
        Format::Object => lines.push(serde_json::to_string(report).unwrap()),
        _ => {
            lines.push(report.summary_line());
            for note in &report.notes {
                lines.push(format!("  note: {note}"));
            }
        }
    }
}

fn cmd_check(
    path: &Path,
    eps: f64,
    model: Option<ModelArg>,
    tolerate: bool,
    summary: bool,
    format: Format,
) -> Result<bool, String> {
    let table = PTable::load(path, tolerate).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();

    reports.push(check_axiom_one(&table, eps));
    let frames = enumerate_frames(&table, eps).map_err(|e| e.to_string())?;
    let mut enumeration = VerificationReport::new("frame-enumeration", eps);
    enumeration.note(format!(
        "{} frames, sizes {:?}",
        frames.len(),
        frames.iter().map(|f| f.len()).collect::<Vec<_>>()
    ));
    reports.push(enumeration);
    reports.push(check_axiom_three(&table, eps).map_err(|e| e.to_string())?);
    reports.push(check_axiom_four(&table, eps));
    if let Some(model) = model {
        reports.push(metric_consistency(&table, model.into(), eps));
    }

    let mut all_pass = true;
    let mut lines = Vec::new();
    for report in &reports {
        all_pass &= report.pass;
        if !summary {
            emit_report(report, format, &mut lines);
        }
    }
    if summary {
        lines.push(format!(
            "{}: {} checks, {} failed",
            if all_pass { "PASS" } else { "FAIL" },
            reports.len(),
            reports.iter().filter(|r| !r.pass).count()
        ));
    }
    for line in lines {
        println!("{line}");
    }
    Ok(all_pass)
}

fn real_pair_with_overlap(p: f64) -> (StateVector, StateVector) {
    let angle = p.sqrt().acos();
    (
        StateVector::from_reals(&[1.0, 0.0]),
        StateVector::from_reals(&[angle.cos(), angle.sin()]),
    )
}

fn cmd_demo(what: DemoCommand) -> Result<bool, String> {
    match what {
        DemoCommand::Tvn { p, out } => {
            if !(p > 0.0 && p < 1.0) {
                return Err(format!("overlap p must lie strictly in (0,1), got {p}"));
            }
            let (a, b) = real_pair_with_overlap(p);
            let cmp = tvn_compare(&a, &b).map_err(|e| e.to_string())?;
            println!(
                "H(F_b a) = {:.6}  vs  H(F_b F_x a) = {:.6}  {}",
                cmp.h_direct,
                cmp.h_intermediate,
                if cmp.report.pass { "PASS" } else { "FAIL" }
            );
            let mut csv = String::from("p,h_direct,h_intermediate\n");
            for k in 1..100 {
                let p = k as f64 / 100.0;
                let (a, b) = real_pair_with_overlap(p);
                let sweep = tvn_compare(&a, &b).map_err(|e| e.to_string())?;
                csv.push_str(&format!("{p},{},{}\n", sweep.h_direct, sweep.h_intermediate));
            }
            if let Some(path) = out {
                write_or_print(Some(&path), &csv)?;
            }
            Ok(cmp.report.pass)
        }
        DemoCommand::Zeno {
            tau,
            steps,
            hamiltonian,
            out,
        } => {
            let h = match hamiltonian {
                Some(path) => HermitianOperator::load(&path).map_err(|e| e.to_string())?,
                None => HermitianOperator::from_rows(&[
                    vec![(0.0, 0.0), (1.0, 0.0)],
                    vec![(1.0, 0.0), (0.0, 0.0)],
                ])
                .expect("hopping operator is Hermitian"),
            };
            let initial = StateVector::basis(RingTag::C, h.dim(), 0);
            let run = zeno_chain(&h, &initial, tau, steps).map_err(|e| e.to_string())?;
            let ok = run
                .survival
                .iter()
                .zip(&run.bound)
                .all(|(p, b)| *p >= *b - 1e-9 && *p <= 1.0 + 1e-9);
            println!(
                "dispersion = {:.6}, p_n = {:.6} >= bound {:.6}, asymptote = {:.6}  {}",
                run.dispersion,
                run.final_survival(),
                run.bound.last().unwrap(),
                run.asymptote,
                if ok { "PASS" } else { "FAIL" }
            );
            if !run.flagged_steps.is_empty() {
                println!(
                    "note: {} steps fell below the second-order bound (tau*dispersion = {:.3})",
                    run.flagged_steps.len(),
                    tau * run.dispersion
                );
            }
            if let Some(path) = out {
                write_or_print(Some(&path), &run.to_csv())?;
            }
            Ok(ok)
        }
        DemoCommand::Axiom5 {
            ring,
            samples,
            seed,
            out,
        } => {
            let ring: RingTag = ring.into();
            let report = axiom_five_test(ring, samples, seed).map_err(|e| e.to_string())?;
            println!(
                "ring {ring}: uniform KS*sqrt(n) = {:.6} ({}), density KS*sqrt(n) = {:.6} ({}), threshold {:.6}",
                report.uniform_scaled,
                if report.uniform_pass { "pass" } else { "fail" },
                report.density_scaled,
                if report.density_pass { "pass" } else { "fail" },
                report.threshold
            );
            let csv = format!(
                "ring,samples,uniform_ks_scaled,density_ks_scaled,threshold,uniform_pass,density_pass\n{ring},{},{},{},{},{},{}\n",
                report.samples,
                report.uniform_scaled,
                report.density_scaled,
                report.threshold,
                report.uniform_pass,
                report.density_pass
            );
            if let Some(path) = out {
                write_or_print(Some(&path), &csv)?;
            }
            // The ring's own density must always fit; uniformity is the
            // signature of the complex case.
            Ok(report.density_pass)
        }
        DemoCommand::Adjunction {
            theta0,
            depth,
            out,
            table_out,
        } => {
            let mapping = build_circle_by_adjunction(theta0, depth).map_err(|e| e.to_string())?;
            let table = mapping.to_ptable();
            let residual = mapping.proper_residual();
            let one = check_axiom_one(&table, 1e-9);
            let three = check_axiom_three(&table, 1e-9).map_err(|e| e.to_string())?;
            let ok = residual < 1e-9 && one.pass && three.pass;
            println!(
                "{} points, proper-mapping residual {:.3e}, axiom one {}, axiom three {}  {}",
                mapping.len(),
                residual,
                if one.pass { "pass" } else { "fail" },
                if three.pass { "pass" } else { "fail" },
                if ok { "PASS" } else { "FAIL" }
            );
            if let Some(path) = out {
                write_or_print(Some(&path), &mapping.to_csv())?;
            }
            if let Some(path) = table_out {
                write_or_print(Some(&path), &format!("{}\n", table.to_json()))?;
            }
            Ok(ok)
        }
    }
}
