//! `hemispec`: spectra, index scans, verification suites and the FEM oracle
//! from the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hemispec::fem::{self, convergence_study, fem_index, model_mesh};
use hemispec::spectra::{
    index_scan, jacobi_spectrum, radius_grid, scan_to_csv, strong_index, summarize_window, weak_index, Cutoff,
};
use hemispec::verify::{lambda1_bound_cmc, lambda1_bound_minimal, run_suite, CurvatureReading, Suite, SuiteOptions};
use hemispec::{Error, HalvedFactor, ModelHypersurface, VERSION};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "hemispec", version, about = "Jacobi spectra and Morse indices of free-boundary model hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Seed for every random sample; echoed into the output.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Omit the generation time so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Halved {
    First,
    Second,
}

impl From<Halved> for HalvedFactor {
    fn from(h: Halved) -> Self {
        match h {
            Halved::First => HalvedFactor::First,
            Halved::Second => HalvedFactor::Second,
        }
    }
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Exact Neumann Jacobi spectrum of a model.
    Spectrum {
        /// Model descriptor, e.g. '{"kind":"Equator","n":3}'.
        #[arg(long)]
        model: String,
        /// Include every eigenvalue whose factor degrees are all <= lmax.
        #[arg(long, default_value_t = 4)]
        lmax: usize,
    },
    /// Strong and weak index of HTorusHalf(n, k, r) over a radius grid.
    IndexScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// lo:hi:step
        #[arg(long, default_value = "0.05:0.95:0.001")]
        grid: String,
        #[arg(long, value_enum, default_value_t = Halved::Second)]
        halved: Halved,
    },
    /// Run verification suites; exits 1 if any report fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
        /// Restrict the bounds suite: equator, cap, clifford or htorus.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// FEM index of an n = 2 model, compared with the exact engine.
    Fem {
        #[arg(long)]
        model: String,
        /// Hemisphere subdivision level; tori use a 2^(refine+1) x 2^refine chart.
        #[arg(long, default_value_t = 5)]
        refine: usize,
        /// Also tabulate eigenvalue errors over these refinements, e.g. 3,4,5,6.
        #[arg(long, value_delimiter = ',')]
        convergence: Vec<usize>,
        /// Write the mesh in OFF format.
        #[arg(long)]
        export_mesh: Option<PathBuf>,
        /// Write K0 and M as <prefix>_stiffness.mtx and <prefix>_mass.mtx.
        #[arg(long)]
        export_matrices: Option<String>,
    },
    /// Summary of indices, published index claims, radius windows and bounds.
    Report {
        /// Largest dimension in the catalog.
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// Add FEM adjudication of the n = 2 models at this refinement.
        #[arg(long)]
        refine: Option<usize>,
        /// Radius step of the window scans.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ConvergenceFailure { .. }
            | Error::GapTooSmall { .. }
            | Error::MassNotSpd
            | Error::DegenerateCell { .. }
            | Error::Io(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Document plus the exit code it should produce.
struct Output {
    json: Value,
    csv: String,
    summary: String,
    code: u8,
}

fn parse_model(s: &str) -> Result<ModelHypersurface, Failure> {
    s.parse::<ModelHypersurface>().map_err(|e| invalid(format!("invalid --model: {e}")))
}

fn parse_grid(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
    if parts.len() != 3 || nums.len() != 3 {
        return Err(invalid(format!("--grid expects lo:hi:step, got `{s}`")));
    }
    Ok((nums[0], nums[1], nums[2]))
}

fn g(x: f64) -> String {
    format!("{x:.16e}")
}

/// Laplace threshold below which every mode has all factor degrees <= lmax.
fn degree_threshold(m: &ModelHypersurface, lmax: usize) -> f64 {
    m.factors()
        .iter()
        .filter(|f| f.dim > 0)
        .map(|f| ((lmax + 1) * (lmax + f.dim)) as f64 / (f.radius * f.radius))
        .fold(f64::INFINITY, f64::min)
}

fn cmd_spectrum(model: &str, lmax: usize) -> Result<Output, Failure> {
    let m = parse_model(model)?;
    let c = m.geometric_data().potential;
    let spectrum = jacobi_spectrum(&m, Cutoff::Below(degree_threshold(&m, lmax) - c))?;
    let strong = strong_index(&m)?;
    let weak = weak_index(&m)?;
    let summary = format!(
        "{m}: lambda1 = {}, MI = {}, MI_W = {}, lambda1_W = {}",
        strong.lambda1, strong.strong_index, strong.weak_index, strong.lambda1_weak
    );
    Ok(Output {
        json: json!({
            "model": m,
            "geometry": m.geometric_data(),
            "lambda1": strong.lambda1,
            "spectrum": spectrum,
            "strong": strong,
            "weak": weak,
        }),
        csv: spectrum.to_csv(),
        summary,
        code: 0,
    })
}

fn cmd_index_scan(n: usize, k: usize, grid: &str, halved: Halved) -> Result<Output, Failure> {
    let (lo, hi, step) = parse_grid(grid)?;
    if !(lo > 0.0 && hi < 1.0) {
        return Err(invalid(format!("radius grid must lie in (0, 1), got {lo}:{hi}")));
    }
    let radii = radius_grid(lo, hi, step)?;
    let rows = index_scan(n, k, halved.into(), &radii)?;
    let w = summarize_window(n, k, &rows)?;
    let summary = match (w.empirical, w.max_endpoint_deviation) {
        (Some((a, b)), Some(d)) => format!(
            "weak index {} on [{a:.6}, {b:.6}]; analytic [{:.6}, {:.6}]; max endpoint deviation {d:.3e}{}",
            w.target_weak_index,
            w.analytic.0,
            w.analytic.1,
            if w.fragmented { "; window is fragmented" } else { "" }
        ),
        _ => format!(
            "weak index {} not attained on the grid; analytic [{:.6}, {:.6}]",
            w.target_weak_index, w.analytic.0, w.analytic.1
        ),
    };
    Ok(Output { json: json!({ "rows": rows, "window": w }), csv: scan_to_csv(&rows), summary, code: 0 })
}

fn cmd_verify(
    suite: &str,
    samples: Option<usize>,
    family: Option<&str>,
    n: Option<usize>,
    k: Option<usize>,
    seed: u64,
) -> Result<Output, Failure> {
    let suite: Suite = suite.parse()?;
    let family = family.map(str::parse).transpose()?;
    let reports = run_suite(suite, &SuiteOptions { seed, samples, family, n, k })?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.pass()).map(|r| r.name()).collect();
    let mut csv = String::from("name,pass,value,tolerance,equality,notes\n");
    for r in &reports {
        let (value, tol, eq, notes) = match r {
            hemispec::report::Report::Identity(i) => (i.max_residual, i.tolerance, String::new(), &i.notes),
            hemispec::report::Report::Bound(b) => (b.slack, -hemispec::report::EQUALITY_TOL, b.equality.to_string(), &b.notes),
        };
        let _ = writeln!(csv, "\"{}\",{},{},{},{},\"{}\"", r.name(), r.pass(), g(value), g(tol), eq, notes.replace('"', "'"));
    }
    let summary = if failed.is_empty() {
        format!("{} reports, all pass", reports.len())
    } else {
        format!("{} of {} reports fail: {}", failed.len(), reports.len(), failed.join(", "))
    };
    let code = if failed.is_empty() { 0 } else { 1 };
    Ok(Output { json: json!({ "pass": failed.is_empty(), "reports": reports }), csv, summary, code })
}

fn cmd_fem(
    model: &str,
    refine: usize,
    convergence: &[usize],
    export_mesh: Option<&PathBuf>,
    export_matrices: Option<&str>,
) -> Result<Output, Failure> {
    let m = parse_model(model)?;
    if m.n() != 2 {
        return Err(invalid(format!("fem needs an n = 2 model, got n = {}", m.n())));
    }
    let mesh = model_mesh(&m, refine)?;
    if let Some(path) = export_mesh {
        fem::write_off(&mesh, std::fs::File::create(path).map_err(Error::from)?)?;
    }
    if let Some(prefix) = export_matrices {
        let a = fem::assemble(&mesh)?;
        fem::write_matrix_market(&a.stiffness, std::fs::File::create(format!("{prefix}_stiffness.mtx")).map_err(Error::from)?)?;
        fem::write_matrix_market(&a.mass, std::fs::File::create(format!("{prefix}_mass.mtx")).map_err(Error::from)?)?;
    }
    let r = fem_index(&m, refine)?;
    let table = if convergence.is_empty() { None } else { Some(convergence_study(&m, convergence)?) };
    let mut csv = String::from("index,fem,exact,abs_error,rel_error\n");
    for c in &r.comparison {
        let rel = c.rel_error.map(g).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{},{},{}", c.index, g(c.fem), g(c.exact), g(c.abs_error), rel);
    }
    let claim = match r.paper_claim {
        Some(p) if p != r.strong_index as u64 => format!("; paper claims {p}"),
        Some(_) => "; matches the paper".to_string(),
        None => String::new(),
    };
    let summary = format!(
        "{m}: dof {}, FEM strong {} weak {}, engine strong {} weak {}, agreement {}{claim}",
        r.eigen.dof, r.strong_index, r.weak_index, r.engine_strong_index, r.engine_weak_index, r.index_agreement
    );
    let code = if r.index_agreement && r.weak_agreement { 0 } else { 1 };
    Ok(Output {
        json: json!({
            "result": r.eigen,
            "comparison": {
                "eigenvalues": r.comparison,
                "max_negative_rel_error": r.max_negative_rel_error,
                "index_agreement": r.index_agreement,
                "weak_agreement": r.weak_agreement,
                "engine_strong_index": r.engine_strong_index,
                "engine_weak_index": r.engine_weak_index,
                "paper_claim": r.paper_claim,
                "paper_claim_weak": r.paper_claim_weak,
                "discrepancy_flag": r.discrepancy_flag,
                "notes": r.notes,
            },
            "model": r.model,
            "refine": r.refine,
            "cells": r.cells,
            "eps_gap": r.eps_gap,
            "error_estimate": r.error_estimate,
            "strong_index": r.strong_index,
            "weak_index": r.weak_index,
            "weak_eigenvalues": r.weak_eigenvalues,
            "convergence": table,
        }),
        csv,
        summary,
        code,
    })
}

fn catalog(n_max: usize) -> Result<Vec<ModelHypersurface>, Error> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        out.push(ModelHypersurface::equator(n)?);
        for r in [0.3, 0.5, 0.8] {
            out.push(ModelHypersurface::umbilical_cap(n, r)?);
        }
        for k in 1..n {
            out.push(ModelHypersurface::minimal_clifford_half(n, k)?);
            let (lo, hi) = hemispec::spectra::radius_window(n, k)?;
            out.push(ModelHypersurface::h_torus_half(n, k, 0.5 * (lo + hi))?);
        }
    }
    Ok(out)
}

fn cmd_report(n_max: usize, refine: Option<usize>, step: f64) -> Result<Output, Failure> {
    if !(2..=hemispec::models::MAX_DIM).contains(&n_max) {
        return Err(invalid(format!("--n-max must be in 2..={}", hemispec::models::MAX_DIM)));
    }
    let models = catalog(n_max)?;
    let mut indices = Vec::new();
    let mut csv = String::from("model,strong,weak,lambda1,lambda1_weak,paper_strong,paper_weak,discrepancy\n");
    let mut flagged = 0;
    for m in &models {
        let s = strong_index(m)?;
        let w = weak_index(m)?;
        let discrepancy = s.discrepancy_flag || w.discrepancy_flag;
        flagged += usize::from(discrepancy);
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            csv,
            "\"{m}\",{},{},{},{},{},{},{discrepancy}",
            s.strong_index,
            s.weak_index,
            g(s.lambda1),
            g(s.lambda1_weak),
            opt(s.paper_claim),
            opt(w.paper_claim)
        );
        indices.push(json!({ "strong": s, "weak": w }));
    }
    let mut windows = Vec::new();
    for n in 2..=n_max {
        for k in 1..n {
            let grid = radius_grid(step, 1.0 - step, step)?;
            windows.push(summarize_window(n, k, &index_scan(n, k, HalvedFactor::Second, &grid)?)?);
        }
    }
    let mut bounds = Vec::new();
    for m in &models {
        let b = if m.is_minimal() { lambda1_bound_minimal(m) } else { lambda1_bound_cmc(m, CurvatureReading::Squared) };
        match b {
            Ok(b) => bounds.push(b),
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let mut fem_results = Vec::new();
    if let Some(refine) = refine {
        for m in models.iter().filter(|m| m.n() == 2) {
            fem_results.push(fem_index(m, refine)?);
        }
    }
    let disagreements = fem_results.iter().filter(|r| !(r.index_agreement && r.weak_agreement)).count();
    let summary = format!(
        "{} models, {flagged} differ from the paper's stated index, {} FEM runs, {disagreements} FEM/engine disagreements",
        models.len(),
        fem_results.len()
    );
    let code = if disagreements == 0 && bounds.iter().all(|b| b.pass) { 0 } else { 1 };
    Ok(Output {
        json: json!({ "indices": indices, "windows": windows, "bounds": bounds, "fem": fem_results }),
        csv,
        summary,
        code,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Spectrum { model, lmax } => cmd_spectrum(model, *lmax),
        Command::IndexScan { n, k, grid, halved } => cmd_index_scan(*n, *k, grid, *halved),
        Command::Verify { suite, samples, family, n, k } => {
            cmd_verify(suite, *samples, family.as_deref(), *n, *k, cli.common.seed)
        }
        Command::Fem { model, refine, convergence, export_mesh, export_matrices } => {
            cmd_fem(model, *refine, convergence, export_mesh.as_ref(), export_matrices.as_deref())
        }
        Command::Report { n_max, refine, step } => cmd_report(*n_max, *refine, *step),
    }
}

fn render(cli: &Cli, out: &Output) -> String {
    match cli.common.format {
        Format::Csv => out.csv.clone(),
        Format::Json => {
            let mut doc = json!({
                "version": VERSION,
                "config": { "command": cli.command, "common": cli.common },
            });
            if !cli.common.no_timestamp {
                let secs = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                doc["generated_unix"] = json!(secs);
            }
            doc["summary"] = json!(out.summary);
            doc["output"] = out.json.clone();
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = render(&cli, &out);
            match &cli.common.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                    println!("{}", out.summary);
                }
                None => {
                    print!("{text}");
                    eprintln!("{}", out.summary);
                }
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
