//! Command-line front end: construct operator windows, decouple them, compute
//! spectra and spectral measures, and run the theorem verification suites.
//!
//! Exit codes: 0 all checks passed, 1 verification failures, 2 usage or
//! configuration errors, 3 numerical errors (convergence, poles, singular
//! decouplings).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use specsimple::decouple::{decouple_cmv, decouple_jacobi};
use specsimple::error::Error;
use specsimple::harness::{HarnessTols, ReportStatus, VerificationReport};
use specsimple::operator::{
    anderson_jacobi, materialize_cmv, materialize_jacobi, random_verblunsky, CMVWindow,
    DenseOperator, JacobiWindow,
};
use specsimple::runner::{run_ensemble, EnsembleConfig, EnsembleSummary, TheoremId};
use specsimple::spectral::{eigendecompose, multiplicity_profile, spectral_measure};

#[derive(Parser)]
#[command(
    name = "specsimple",
    about = "Finite-scale spectral simplicity checks for Jacobi and CMV operators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an operator window file
    Construct(ConstructArgs),
    /// Eigenvalues, multiplicity profile, and optional spectral measure of a window
    Spectrum(SpectrumArgs),
    /// Split a window across its cut and report the rank-one residuals
    Decouple(DecoupleArgs),
    /// Run a theorem verification suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Free,
    Anderson,
    CmvRandom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct ConstructArgs {
    /// Operator family
    #[arg(long, value_enum)]
    model: Model,
    /// Number of sites (Jacobi) or coordinates (CMV; even)
    #[arg(long)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Diagonal disorder strength for the anderson model
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
    /// Verblunsky radius for the cmv-random model
    #[arg(long, default_value_t = 0.9)]
    radius: f64,
    /// Output window file
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Window file produced by `construct`
    #[arg(long)]
    input: PathBuf,
    /// Spectral-measure probe, e.g. `delta:0`
    #[arg(long)]
    vector: Option<String>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the bare measure CSV (requires --vector)
    #[arg(long)]
    measure_out: Option<PathBuf>,
    /// Eigenvalue cluster tolerance, relative to the spectral diameter
    #[arg(long, default_value_t = 1e-8)]
    tol_gap: f64,
    /// Relative eigendecomposition residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol_eigen: f64,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct DecoupleArgs {
    /// Window file produced by `construct`
    #[arg(long)]
    input: PathBuf,
    /// Cut position (site for Jacobi, odd coefficient index for CMV)
    #[arg(long, default_value_t = -1)]
    cut: i64,
    /// Write the two half windows as `<prefix>.left.txt` / `<prefix>.right.txt`
    /// (Jacobi only)
    #[arg(long)]
    out_prefix: Option<String>,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem id: thm1, thm2, cor21, eq21, eq43, thm42, thm31, thm51
    #[arg(long)]
    theorem: String,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Size cap (per-theorem meaning; window length for thm31/thm51)
    #[arg(long, default_value_t = 16)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Pin the real coupling (default cycles 1, -1, 0.5, -0.5)
    #[arg(long)]
    lambda: Option<f64>,
    /// Pin the unimodular coupling phase, radians
    #[arg(long)]
    lambda_arg: Option<f64>,
    /// Anderson disorder strength (thm31)
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
    /// Verblunsky radius (thm51)
    #[arg(long, default_value_t = 0.9)]
    radius: f64,
    #[arg(long, default_value_t = 0.9)]
    grid_radius: f64,
    #[arg(long, default_value_t = 128)]
    grid_count: usize,
    /// Verify this window file instead of drawing ensembles (thm31/thm51)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Probe with an eigenvector to demonstrate the unmet-hypothesis report
    #[arg(long)]
    non_cyclic_demo: bool,
    /// Worker threads for independent trials
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report stream here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timestamp: bool,
    /// Gap/disjointness threshold, relative to the spectral diameter
    #[arg(long, default_value_t = 1e-8)]
    tol_gap: f64,
    /// Identity residual threshold
    #[arg(long, default_value_t = 1e-10)]
    tol_identity: f64,
    /// Rank-one second-singular-value threshold
    #[arg(long, default_value_t = 1e-12)]
    tol_rank_one: f64,
    /// Resolvent-difference second-singular-value threshold
    #[arg(long, default_value_t = 1e-10)]
    tol_resolvent_rank_one: f64,
    /// Relative eigendecomposition residual tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol_eigen: f64,
    /// Krylov rank cutoff
    #[arg(long, default_value_t = 1e-10)]
    tol_krylov: f64,
    /// Secular equation residual threshold
    #[arg(long, default_value_t = 1e-8)]
    tol_secular: f64,
    /// Skip band around the excluded point of the Cayley inverse
    #[arg(long, default_value_t = 1e-4)]
    tol_cayley_exclusion: f64,
    /// Slack factor for coincidence-visibility checks
    #[arg(long, default_value_t = 100.0)]
    visibility_factor: f64,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Decouple(args) => cmd_decouple(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}

/// Numerical failures exit 3; everything else that reaches main is a usage
/// or configuration problem and exits 2.
fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NoConvergence { .. }
        | Error::ResidualAboveTolerance { .. }
        | Error::PoleProximity { .. }
        | Error::SingularDecoupling
        | Error::UnboundedPreimage { .. }
        | Error::AmbiguousMatch { .. }
        | Error::KindViolation { .. } => 3,
        _ => 2,
    }
}

fn timestamp(suppress: bool) -> Option<u64> {
    if suppress {
        None
    } else {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    }
}

enum Window {
    Jacobi(JacobiWindow),
    Cmv(CMVWindow),
}

fn load_window(path: &Path) -> Result<Window, Error> {
    let text = std::fs::read_to_string(path)?;
    let head = text.lines().next().unwrap_or("");
    if head.starts_with("jacobi") {
        Ok(Window::Jacobi(JacobiWindow::from_text(&text)?))
    } else if head.starts_with("cmv") {
        Ok(Window::Cmv(CMVWindow::from_text(&text)?))
    } else {
        Err(Error::ParseError {
            line: 1,
            reason: "expected a `jacobi` or `cmv` header".into(),
        })
    }
}

#[derive(Serialize)]
struct ConstructSummary {
    schema: u32,
    kind: &'static str,
    path: String,
    dimension: usize,
    norm_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

fn cmd_construct(args: ConstructArgs) -> Result<i32, Error> {
    if args.size < 2 {
        return Err(Error::BadParameter(format!(
            "size must be at least 2, got {}",
            args.size
        )));
    }
    let n = args.size as i64;
    let (text, kind, dimension, norm_estimate) = match args.model {
        Model::Free => {
            let n_min = -(n / 2);
            let w = JacobiWindow::free(n_min, n_min + n - 1)?;
            (w.to_text(), "jacobi", w.len(), w.norm_estimate())
        }
        Model::Anderson => {
            let n_min = -(n / 2);
            let w = anderson_jacobi(args.seed, n_min, n_min + n - 1, args.coupling)?;
            (w.to_text(), "jacobi", w.len(), w.norm_estimate())
        }
        Model::CmvRandom => {
            if n % 2 != 0 {
                return Err(Error::BadParameter(format!(
                    "cmv window size must be even, got {n}"
                )));
            }
            let j_min = -2 * (n / 4);
            let w = random_verblunsky(args.seed, j_min, j_min + n, args.radius)?;
            // Operator norm of a unitary window.
            (w.to_text(), "cmv", w.dim(), 1.0)
        }
    };
    std::fs::write(&args.out, text)?;
    let summary = ConstructSummary {
        schema: 1,
        kind,
        path: args.out.display().to_string(),
        dimension,
        norm_estimate,
        timestamp: timestamp(args.no_timestamp),
    };
    println!(
        "{}",
        serde_json::to_string(&summary).expect("summary serializes")
    );
    Ok(0)
}

fn parse_probe(spec: &str, op: &DenseOperator) -> Result<Vec<Complex64>, Error> {
    let site: i64 = spec
        .strip_prefix("delta:")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| {
            Error::BadParameter(format!("bad probe spec `{spec}`, expected `delta:<site>`"))
        })?;
    let pos = op
        .site_labels()
        .iter()
        .position(|&l| l == site)
        .ok_or_else(|| Error::BadParameter(format!("site {site} is not in the window")))?;
    let mut v = vec![Complex64::new(0.0, 0.0); op.dim()];
    v[pos] = Complex64::new(1.0, 0.0);
    Ok(v)
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<i32, Error> {
    let window = load_window(&args.input)?;
    let op = match &window {
        Window::Jacobi(w) => materialize_jacobi(w),
        Window::Cmv(w) => materialize_cmv(w)?,
    };
    let eig = eigendecompose(&op, args.tol_eigen)?;
    let diam = eig.diameter().max(1e-300);
    let profile = multiplicity_profile(&eig, args.tol_gap * diam);

    // Multiplicity of the cluster each eigenvalue belongs to.
    let mut mult_of = vec![1usize; eig.dim()];
    {
        let mut k = 0usize;
        for &(_, m) in &profile.clusters {
            for _ in 0..m {
                if k < mult_of.len() {
                    mult_of[k] = m;
                    k += 1;
                }
            }
        }
    }

    let measure = match &args.vector {
        Some(spec) => {
            let phi = parse_probe(spec, &op)?;
            Some(spectral_measure(&eig, &phi, args.tol_gap * diam)?)
        }
        None => None,
    };

    let mut csv = String::new();
    csv.push_str("# schema,1\n");
    csv.push_str(&format!("# kind,{}\n", op.kind().name()));
    csv.push_str(&format!("# dimension,{}\n", eig.dim()));
    csv.push_str(&format!("# simple,{}\n", profile.is_simple));
    if eig.dim() >= 2 {
        csv.push_str(&format!("# min_gap,{:.16e}\n", profile.min_gap));
    }
    if let Some(mu) = &measure {
        csv.push_str(&format!("# discarded_mass,{:.16e}\n", mu.discarded_mass));
    }
    if let Some(ts) = timestamp(args.no_timestamp) {
        csv.push_str(&format!("# generated_at,{ts}\n"));
    }
    csv.push_str("type,index,re,im,value\n");
    for (k, v) in eig.values.iter().enumerate() {
        csv.push_str(&format!(
            "eig,{k},{:.16e},{:.16e},{}\n",
            v.re, v.im, mult_of[k]
        ));
    }

    if let Some(mu) = &measure {
        for (k, (x, w)) in mu.atoms.iter().enumerate() {
            csv.push_str(&format!(
                "atom,{k},{:.16e},{:.16e},{:.16e}\n",
                x.re, x.im, w
            ));
        }
    }

    match &args.out {
        Some(path) => std::fs::write(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &args.measure_out {
        let mu =
            measure.ok_or_else(|| Error::BadParameter("--measure-out requires --vector".into()))?;
        std::fs::write(path, mu.to_csv())?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct JacobiDecoupleReport {
    schema: u32,
    kind: &'static str,
    cut: i64,
    lambda: f64,
    reconstruction_max_abs: f64,
    reconstruction_bound: f64,
    left_dim: usize,
    right_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

#[derive(Serialize)]
struct CmvDecoupleReport {
    schema: u32,
    kind: &'static str,
    cut: i64,
    x_re: f64,
    x_im: f64,
    sigma1: f64,
    sigma2_bound: f64,
    decoupled_unitarity: f64,
    off_cut_leakage: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

fn cmd_decouple(args: DecoupleArgs) -> Result<i32, Error> {
    match load_window(&args.input)? {
        Window::Jacobi(w) => {
            let dec = decouple_jacobi(&w, args.cut)?;
            let residual = dec.reconstruction_residual(&w)?;
            let bound = 2f64.powi(-50) * materialize_jacobi(&w).matrix().inf_norm();
            if let Some(prefix) = &args.out_prefix {
                let (lw, rw) = dec.half_windows(&w)?;
                std::fs::write(format!("{prefix}.left.txt"), lw.to_text())?;
                std::fs::write(format!("{prefix}.right.txt"), rw.to_text())?;
            }
            let report = JacobiDecoupleReport {
                schema: 1,
                kind: "jacobi",
                cut: args.cut,
                lambda: dec.lambda,
                reconstruction_max_abs: residual,
                reconstruction_bound: bound,
                left_dim: dec.left.dim(),
                right_dim: dec.right.dim(),
                timestamp: timestamp(args.no_timestamp),
            };
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
            Ok(if residual <= bound { 0 } else { 1 })
        }
        Window::Cmv(w) => {
            if args.out_prefix.is_some() {
                return Err(Error::BadParameter(
                    "--out-prefix applies to jacobi windows only".into(),
                ));
            }
            let dec = decouple_cmv(&w, args.cut)?;
            let dev = dec.rank_one_deviation();
            let report = CmvDecoupleReport {
                schema: 1,
                kind: "cmv",
                cut: args.cut,
                x_re: dec.x.re,
                x_im: dec.x.im,
                sigma1: dev.sigma1,
                sigma2_bound: dev.sigma2_bound,
                decoupled_unitarity: dec.decoupled.matrix().unitary_residual(),
                off_cut_leakage: dec.off_cut_leakage(),
                timestamp: timestamp(args.no_timestamp),
            };
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
            Ok(if dev.sigma2_bound <= 1e-12 { 0 } else { 1 })
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let theorem = TheoremId::parse(&args.theorem)?;
    let tols = HarnessTols {
        gap_rel: args.tol_gap,
        identity: args.tol_identity,
        rank_one: args.tol_rank_one,
        resolvent_rank_one: args.tol_resolvent_rank_one,
        eigen: args.tol_eigen,
        krylov: args.tol_krylov,
        secular: args.tol_secular,
        cayley_exclusion: args.tol_cayley_exclusion,
        visibility_factor: args.visibility_factor,
    };
    for (name, value) in [
        ("--tol-gap", args.tol_gap),
        ("--tol-identity", args.tol_identity),
        ("--tol-rank-one", args.tol_rank_one),
        ("--tol-resolvent-rank-one", args.tol_resolvent_rank_one),
        ("--tol-eigen", args.tol_eigen),
        ("--tol-krylov", args.tol_krylov),
        ("--tol-secular", args.tol_secular),
        ("--tol-cayley-exclusion", args.tol_cayley_exclusion),
    ] {
        if !(value > 0.0) {
            return Err(Error::BadParameter(format!(
                "{name} must be positive, got {value}"
            )));
        }
    }

    let reports: Vec<VerificationReport> = if let Some(path) = &args.input {
        let report = match (theorem, load_window(path)?) {
            (TheoremId::Thm31, Window::Jacobi(w)) => {
                specsimple::harness::verify_jacobi_simplicity(&w, &tols)?
            }
            (TheoremId::Thm51, Window::Cmv(w)) => {
                specsimple::harness::verify_cmv_simplicity(&w, &tols)?
            }
            _ => {
                return Err(Error::BadParameter(
                    "--input applies to thm31 with a jacobi window or thm51 with a cmv window"
                        .into(),
                ))
            }
        };
        vec![report]
    } else {
        let mut cfg = EnsembleConfig::new(theorem);
        cfg.trials = args.trials;
        cfg.size = args.size;
        cfg.seed = args.seed;
        cfg.lambda = args.lambda;
        cfg.lambda_arg = args.lambda_arg;
        cfg.coupling = args.coupling;
        cfg.radius = args.radius;
        cfg.grid_radius = args.grid_radius;
        cfg.grid_count = args.grid_count;
        cfg.jobs = args.jobs;
        cfg.non_cyclic_demo = args.non_cyclic_demo;
        cfg.tols = tols;
        run_ensemble(&cfg)?
    };

    let mut summary = EnsembleSummary::from_reports(theorem, &reports);
    summary.timestamp = timestamp(args.no_timestamp);

    let mut out = String::new();
    match args.format {
        Format::Json => {
            for r in &reports {
                out.push_str(&r.to_json());
                out.push('\n');
            }
            out.push_str(&summary.to_json());
            out.push('\n');
        }
        Format::Table => {
            for (i, r) in reports.iter().enumerate() {
                out.push_str(&format!("[{i:>4}] {}\n", r.table_line()));
            }
            out.push_str(&format!(
                "{}: {} trials, {} passed, {} failed, {} inconclusive, {} skipped\n",
                summary.theorem_id,
                summary.total,
                summary.passed,
                summary.failed,
                summary.inconclusive,
                summary.skipped
            ));
        }
    }
    match &args.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(out.as_bytes())?;
        }
        None => print!("{out}"),
    }

    let failed = reports.iter().any(|r| r.status == ReportStatus::Failed);
    Ok(if failed { 1 } else { 0 })
}
