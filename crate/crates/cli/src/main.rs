//! `sphere-spectra`: eigenvalue bounds and verification suites for surfaces in S³.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage, 3 mesh, 4 solver,
//! 5 oracle check failed, 6 report schema mismatch.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sphere_spectra_core::constants::{build_parameter_chain, default_parameter_chain, ParameterChain, SQRT_N_REL_TOL};
use sphere_spectra_core::spectral::{DEFAULT_MAX_ITER, DEFAULT_SEED, DEFAULT_TOL};
use sphere_spectra_core::{
    arctan_cubed_factor, compute_bound_constants, eigenvalue_lower_bound, offsets_report, verify_oracles,
    verify_surface, BoundConstants, EigenOptions, GeneratorSpec, OffsetRow, OracleCheck, SurfaceOptions,
    SurfaceSource, VerificationReport, SCHEMA_VERSION, VERSION,
};

use config::Config;
use output::{csv_text, fmt_opt, write_csv, write_json};

pub const SEED_ENV: &str = "SPHERE_SPECTRA_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sphere_spectra_core::Error),
    #[error("oracle checks failed: {0}")]
    OracleFailure(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_mesh_error() => 3,
            CliError::Core(e) if e.is_solver_error() => 4,
            CliError::Core(sphere_spectra_core::Error::Schema(_)) | CliError::Schema(_) => 6,
            CliError::OracleFailure(_) => 5,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sphere-spectra", version, about = "First-eigenvalue bounds for minimal surfaces in spheres")]
struct Cli {
    /// Flat key = value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound constants, the parameter chain and the eigenvalue bound.
    Constants(ConstantsArgs),
    /// Laplacian spectrum, curvature and all verdicts for one surface.
    VerifySurface(SurfaceArgs),
    /// Embeddedness and mean curvature of parallel surfaces.
    Offsets(OffsetsArgs),
    /// Radial reductions of the integral identities.
    VerifyOracles(OracleArgs),
    /// Merge surface reports into one table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// Curvature bound Λ = max ‖A‖.
    #[arg(long)]
    lambda: Option<f64>,
    /// Defaults to √n/3.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Defaults to √n/20.
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// clifford, flat-torus, equator or geodesic-sphere.
    #[arg(long)]
    gen: Option<String>,
    /// S3OFF mesh file.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Grid resolution for the tori (both directions).
    #[arg(long)]
    res: Option<usize>,
    #[arg(long)]
    res_u: Option<usize>,
    #[arg(long)]
    res_v: Option<usize>,
    /// Radius parameter of flat-torus or geodesic-sphere.
    #[arg(long)]
    r: Option<f64>,
    /// Icosphere subdivision level.
    #[arg(long)]
    subdiv: Option<usize>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write CSV rows here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Print JSON to stdout instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Relative eigen-residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative slack for the eigenvalue verdicts.
    #[arg(long)]
    verdict_tol: Option<f64>,
    /// Offset distances to tabulate, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    offsets: Option<Vec<f64>>,
    /// Skip the self-intersection test of the surface itself.
    #[arg(long)]
    no_embedding_check: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OffsetsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Offset distances, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    t: Option<Vec<f64>>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    /// Dimensions n, comma separated.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Run a single check: reilly, bochner, interior-gradient, boundary-layer or hemisphere.
    #[arg(long)]
    only: Option<String>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// JSON reports written by verify-surface.
    paths: Vec<PathBuf>,
    /// Merged CSV destination; stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Merged JSON destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn source(args: &SourceArgs, cfg: &Config) -> Result<SurfaceSource> {
    let gen = args.gen.clone().or_else(|| cfg.gen.clone());
    let mesh = args.mesh.clone().or_else(|| cfg.mesh.clone());
    let res = args.res.or(cfg.res);
    let res_u = args.res_u.or(cfg.res_u).or(res).unwrap_or(64);
    let res_v = args.res_v.or(cfg.res_v).or(res).unwrap_or(64);
    let r = args.r.or(cfg.r);
    let subdiv = args.subdiv.or(cfg.subdiv).unwrap_or(5);
    let need_r = |family: &str| r.ok_or_else(|| CliError::Usage(format!("--gen {family} needs --r")));
    match (gen.as_deref(), mesh) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --gen or --mesh, not both".into())),
        (None, None) => Err(CliError::Usage("a surface is required: --gen NAME or --mesh FILE".into())),
        (None, Some(path)) => Ok(SurfaceSource::File { path }),
        (Some(name), None) => {
            let spec = match name {
                "clifford" => GeneratorSpec::Clifford { res_u, res_v },
                "flat-torus" => GeneratorSpec::FlatTorus {
                    r: need_r(name)?,
                    res_u,
                    res_v,
                },
                "equator" => GeneratorSpec::Equator { subdiv },
                "geodesic-sphere" => GeneratorSpec::GeodesicSphere {
                    r: need_r(name)?,
                    subdiv,
                },
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown generator {other:?}; expected clifford, flat-torus, equator or geodesic-sphere"
                    )))
                }
            };
            Ok(SurfaceSource::Generator(spec))
        }
    }
}

/// Flag, then `SPHERE_SPECTRA_SEED`, then config, then the built-in default.
fn resolve_seed(flag: Option<u64>, cfg: &Config) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        return v
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer: {e}")));
    }
    Ok(cfg.seed.unwrap_or(DEFAULT_SEED))
}

fn emit<T: Serialize>(
    out: &OutputArgs,
    cfg: &Config,
    value: &T,
    csv_header: &str,
    csv_rows: Vec<String>,
    table: impl FnOnce() -> String,
) -> Result<()> {
    if let Some(path) = out.out.as_ref().or(cfg.out.as_ref()) {
        write_json(path, value)?;
    }
    if let Some(path) = out.csv.as_ref().or(cfg.csv.as_ref()) {
        write_csv(path, csv_header, csv_rows)?;
    }
    if out.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", table());
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ConstantsReport {
    schema: u32,
    version: &'static str,
    n: usize,
    arctan_cubed_factor: f64,
    constants: BoundConstants,
    a_floor: f64,
    b_ceiling: f64,
    c_ceiling: f64,
    lambda: Option<f64>,
    bound: Option<f64>,
    chain: Option<ParameterChain>,
    chain_bound: Option<f64>,
    chain_error: Option<String>,
}

fn cmd_constants(args: &ConstantsArgs, cfg: &Config) -> Result<()> {
    let n = args.dim.or(cfg.dim).ok_or_else(|| CliError::Usage("--dim is required".into()))?;
    if n < 2 {
        return Err(CliError::Usage(format!("--dim {n}: the dimension must be at least 2")));
    }
    let lambda = args.lambda.or(cfg.lambda);
    let epsilon = args.epsilon.or(cfg.epsilon);
    let beta = args.beta.or(cfg.beta);
    let c = compute_bound_constants(n)?;
    let bound = lambda.map(|l| eigenvalue_lower_bound(n, l)).transpose()?;
    let (chain, chain_error) = match lambda {
        None => (None, None),
        Some(l) => {
            let s = (n as f64).sqrt();
            let built = match (epsilon, beta) {
                (None, None) => default_parameter_chain(n, l),
                (e, b) => build_parameter_chain(n, l, e.unwrap_or(s / 3.0), b.unwrap_or(s / 20.0)),
            };
            match built {
                Ok(ch) => (Some(ch), None),
                Err(e) => (None, Some(e.to_string())),
            }
        }
    };
    let report = ConstantsReport {
        schema: SCHEMA_VERSION,
        version: VERSION,
        n,
        arctan_cubed_factor: arctan_cubed_factor(n)?,
        constants: c,
        a_floor: c.a_floor(),
        b_ceiling: c.b_ceiling(),
        c_ceiling: c.c_ceiling(),
        lambda,
        bound,
        chain_bound: chain.map(|ch| ch.bound()),
        chain,
        chain_error,
    };
    let row = format!(
        "{},{:e},{:e},{:e},{:e},{:e},{:e},{}",
        n,
        report.arctan_cubed_factor,
        c.a_n,
        report.a_floor,
        c.b_n,
        report.b_ceiling,
        c.c_n,
        bound.map(|b| format!("{b:e}")).unwrap_or_default()
    );
    emit(&args.output, cfg, &report, "n,f,a_n,a_floor,b_n,b_ceiling,c_n,bound", vec![row], || {
        let mut t = String::new();
        t += &format!("n                  {n}\n");
        t += &format!("f(n)               {:.10}   window [0.035, 0.0370370370]\n", report.arctan_cubed_factor);
        t += &format!("a_n                {:.10e}   floor   {:.10e}\n", c.a_n, report.a_floor);
        t += &format!("b_n                {:.10e}   ceiling {:.10e}\n", c.b_n, report.b_ceiling);
        t += &format!("c_n                {:.10}\n", c.c_n);
        if let Some(l) = lambda {
            t += &format!("Λ                  {l}\n");
            if l < (n as f64).sqrt() * (1.0 - SQRT_N_REL_TOL) {
                t += "Λ < √n: totally geodesic branch, λ₁ = n\n";
            }
        }
        if let Some(ch) = &chain {
            t += &format!("ε, β               {:.10}, {:.10}\n", ch.epsilon, ch.beta);
            t += &format!("ε̃                  {:.10}\n", ch.epsilon_tilde);
            t += &format!("γ                  {:.10}{}\n", ch.gamma, if ch.is_valid() { "" } else { "   (not positive)" });
            t += &format!("δ                  {:.10}\n", ch.delta);
            t += &format!("T                  {:.10}\n", ch.t);
            t += &format!("D_ε                {:.10}\n", ch.d_epsilon);
            t += &format!("chain bound        {:.10}\n", ch.bound());
        }
        if let Some(e) = &report.chain_error {
            t += &format!("chain              unavailable: {e}\n");
        }
        if let Some(b) = bound {
            t += &format!("bound              {b:.10}\n");
        }
        t
    })
}

fn cmd_verify_surface(args: &SurfaceArgs, cfg: &Config) -> Result<()> {
    let src = source(&args.source, cfg)?;
    let options = SurfaceOptions {
        eigen: EigenOptions {
            tol: args.tol.or(cfg.tol).unwrap_or(DEFAULT_TOL),
            max_iter: args.max_iter.or(cfg.max_iter).unwrap_or(DEFAULT_MAX_ITER),
            seed: resolve_seed(args.seed, cfg)?,
            ..EigenOptions::default()
        },
        verdict_tolerance: args.verdict_tol.or(cfg.verdict_tol).unwrap_or(sphere_spectra_core::harness::DEFAULT_VERDICT_TOLERANCE),
        offsets: args.offsets.clone().or_else(|| cfg.offsets.clone()).unwrap_or_default(),
        check_embedding: !(args.no_embedding_check || cfg.no_embedding_check.unwrap_or(false)),
    };
    let report = verify_surface(&src, &options)?;
    emit(
        &args.output,
        cfg,
        &report,
        VerificationReport::csv_header(),
        vec![report.csv_row()],
        || surface_table(&report),
    )
}

fn surface_table(r: &VerificationReport) -> String {
    let mut t = String::new();
    t += &format!(
        "surface            {} ({} vertices, {} triangles, genus {})\n",
        r.surface.label, r.surface.vertices, r.surface.triangles, r.surface.genus
    );
    t += &format!("area               {:.6} (analytic {})\n", r.surface.area_discrete, fmt_opt(r.surface.area_analytic));
    t += &format!(
        "λ₁                 {:.6} ×{} (analytic {}), residual {:.1e}, {} iterations\n",
        r.spectrum.lambda1,
        r.spectrum.multiplicity,
        fmt_opt(r.spectrum.lambda1_analytic),
        r.spectrum.residual,
        r.spectrum.iterations
    );
    t += &format!(
        "Λ                  {:.6} (analytic {})\n",
        r.curvature.lambda_discrete,
        fmt_opt(r.curvature.lambda_analytic)
    );
    t += &format!("max |H|            {:.3e}\n", r.curvature.max_abs_mean_curvature);
    t += &format!(
        "bound              {:.9} (analytic Λ: {})\n",
        r.bound.bound_discrete,
        r.bound.bound_analytic.map_or("-".into(), |b| format!("{b:.9}"))
    );
    t += &format!("Simons integral    {:.3e}\n", r.curvature.simons_integral);
    t += &format!(
        "volume bound       {:.6} ≥ area {:.6} (I_Λ = {:.6})\n",
        r.volume.sharp_bound, r.volume.area_used, r.volume.tube_integral
    );
    if !r.offsets.is_empty() {
        t += &offsets_table_text(&r.offsets);
    }
    t += "verdicts\n";
    for (name, v) in r.verdicts.named() {
        t += &format!("  {name:<16} {}\n", v.as_str());
    }
    t += &format!("time               {:.2} s\n", r.timing.total_s);
    t
}

fn offsets_table_text(rows: &[OffsetRow]) -> String {
    let mut t = format!("{:>8}  {:<18} {:>12} {:>12} {:>12}\n", "t", "status", "min H", "max H", "analytic H");
    for row in rows {
        let status = if row.status == sphere_spectra_core::OffsetStatus::BeyondHorizon {
            format!("beyond T = {:.6}", row.horizon)
        } else {
            row.status.as_str().to_string()
        };
        t += &format!(
            "{:>8.4}  {:<18} {:>12} {:>12} {:>12}\n",
            row.t,
            status,
            fmt_opt(row.min_mean_curvature),
            fmt_opt(row.max_mean_curvature),
            fmt_opt(row.analytic_mean_curvature)
        );
    }
    t
}

fn offset_csv_row(row: &OffsetRow) -> String {
    let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
    format!(
        "{:e},{:e},{},{},{},{},{},{}",
        row.t,
        row.horizon,
        row.status.as_str(),
        row.witnesses,
        opt(row.min_mean_curvature),
        opt(row.max_mean_curvature),
        opt(row.analytic_mean_curvature),
        opt(row.min_mean_curvature_error)
    )
}

fn cmd_offsets(args: &OffsetsArgs, cfg: &Config) -> Result<()> {
    let src = source(&args.source, cfg)?;
    let ts = args
        .t
        .clone()
        .or_else(|| cfg.t.clone())
        .ok_or_else(|| CliError::Usage("--t is required, e.g. --t 0.1,0.2,0.3".into()))?;
    let report = offsets_report(&src, &ts)?;
    emit(
        &args.output,
        cfg,
        &report,
        "t,horizon,status,witnesses,min_h,max_h,analytic_h,min_h_error",
        report.rows.iter().map(offset_csv_row).collect(),
        || format!("surface {}\n{}", report.label, offsets_table_text(&report.rows)),
    )
}

fn cmd_verify_oracles(args: &OracleArgs, cfg: &Config) -> Result<()> {
    let dims = args.dims.clone().or_else(|| cfg.dims.clone()).unwrap_or_else(|| vec![2, 3, 4]);
    if let Some(bad) = dims.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("dimension {bad} must be at least 2")));
    }
    let only = args
        .only
        .clone()
        .or_else(|| cfg.only.clone())
        .map(|s| s.parse::<OracleCheck>())
        .transpose()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let tol = args.tol.or(cfg.tol).unwrap_or(1e-10);
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("--tol {tol} must be positive")));
    }
    let suite = verify_oracles(&dims, only, tol)?;
    emit(
        &args.output,
        cfg,
        &suite,
        sphere_spectra_core::harness::OracleRow::csv_header(),
        suite.rows.iter().map(|r| r.csv_row()).collect(),
        || {
            let mut t = format!("{:<18} {:>2}  {:<36} {:>12} {:>12}  result\n", "check", "n", "case", "measure", "threshold");
            for r in &suite.rows {
                t += &format!(
                    "{:<18} {:>2}  {:<36} {:>12.3e} {:>12.3e}  {}\n",
                    r.check.as_str(),
                    r.n,
                    r.case,
                    r.measure,
                    r.threshold,
                    if r.passed { "pass" } else { "FAIL" }
                );
            }
            t
        },
    )?;
    if suite.all_passed() {
        Ok(())
    } else {
        let names: Vec<String> = suite
            .failures()
            .map(|r| format!("{} n={} {}", r.check.as_str(), r.n, r.case))
            .collect();
        Err(CliError::OracleFailure(names.join("; ")))
    }
}

#[derive(Debug, Serialize)]
struct MergedReports {
    schema: u32,
    version: &'static str,
    reports: Vec<VerificationReport>,
}

fn load_report(path: &PathBuf) -> Result<VerificationReport> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: not JSON: {e}", path.display())))?;
    match value.get("schema").and_then(|s| s.as_u64()) {
        Some(s) if s == u64::from(SCHEMA_VERSION) => {}
        Some(s) => {
            return Err(CliError::Schema(format!(
                "{} has schema {s}, expected {SCHEMA_VERSION}",
                path.display()
            )))
        }
        None => return Err(CliError::Schema(format!("{} has no schema field", path.display()))),
    }
    serde_json::from_value(value)
        .map_err(|e| CliError::Schema(format!("{} is not a surface report: {e}", path.display())))
}

fn cmd_report(args: &ReportArgs, cfg: &Config) -> Result<()> {
    let reports = args.paths.iter().map(load_report).collect::<Result<Vec<_>>>()?;
    let rows: Vec<String> = reports.iter().map(|r| r.csv_row()).collect();
    match args.csv.as_ref().or(cfg.csv.as_ref()) {
        Some(path) => write_csv(path, VerificationReport::csv_header(), rows)?,
        None => print!("{}", csv_text(VerificationReport::csv_header(), rows)),
    }
    if let Some(path) = args.out.as_ref().or(cfg.out.as_ref()) {
        write_json(
            path,
            &MergedReports {
                schema: SCHEMA_VERSION,
                version: VERSION,
                reports,
            },
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match &cli.command {
        Command::Constants(a) => cmd_constants(a, &cfg),
        Command::VerifySurface(a) => cmd_verify_surface(a, &cfg),
        Command::Offsets(a) => cmd_offsets(a, &cfg),
        Command::VerifyOracles(a) => cmd_verify_oracles(a, &cfg),
        Command::Report(a) => cmd_report(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sphere_spectra_core::Error;

    #[test]
    fn exit_code_map() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::InvalidMesh(String::new())).exit_code(), 3);
        assert_eq!(CliError::Core(Error::Ode(String::new())).exit_code(), 4);
        assert_eq!(CliError::OracleFailure(String::new()).exit_code(), 5);
        assert_eq!(CliError::Schema(String::new()).exit_code(), 6);
        assert_eq!(CliError::Core(Error::Domain(String::new())).exit_code(), 1);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
