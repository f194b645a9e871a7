//! Ensemble drivers: turn a (theorem, seed, size, trials) configuration into
//! an ordered stream of verification reports.
//!
//! Every trial derives its own generator stream from `(seed, trial index)`,
//! so the report list is a pure function of the configuration and is
//! independent of the number of worker threads.

use num_complex::Complex64;
use serde::Serialize;

use crate::ensemble;
use crate::error::{Error, Result};
use crate::harness::{
    verify_cmv_simplicity, verify_corollary21, verify_jacobi_simplicity, verify_overlap_structure,
    verify_theorem1, verify_theorem2, verify_theorem42, verify_unitary_ad, HarnessTols,
    ReportStatus, VerificationReport,
};
use crate::operator::{anderson_jacobi, random_verblunsky};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremId {
    Thm1,
    Thm2,
    Cor21,
    Eq21,
    Eq43,
    Thm42,
    Thm31,
    Thm51,
}

impl TheoremId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "thm1" => Self::Thm1,
            "thm2" => Self::Thm2,
            "cor21" => Self::Cor21,
            "eq21" => Self::Eq21,
            "eq43" => Self::Eq43,
            "thm42" => Self::Thm42,
            "thm31" => Self::Thm31,
            "thm51" => Self::Thm51,
            other => {
                return Err(Error::BadParameter(format!(
                    "unknown theorem id `{other}` (expected one of thm1, thm2, cor21, eq21, eq43, thm42, thm31, thm51)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Thm1 => "thm1",
            Self::Thm2 => "thm2",
            Self::Cor21 => "cor21",
            Self::Eq21 => "eq21",
            Self::Eq43 => "eq43",
            Self::Thm42 => "thm42",
            Self::Thm31 => "thm31",
            Self::Thm51 => "thm51",
        }
    }

    pub fn all() -> &'static [TheoremId] {
        &[
            Self::Thm1,
            Self::Thm2,
            Self::Cor21,
            Self::Eq21,
            Self::Eq43,
            Self::Thm42,
            Self::Thm31,
            Self::Thm51,
        ]
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub theorem: TheoremId,
    pub trials: u64,
    /// Size cap; its meaning is per-theorem (full dimension for the
    /// single-operator drivers, total dimension for the direct-sum drivers,
    /// window length for the operator-window drivers).
    pub size: usize,
    pub seed: u64,
    /// Pin the real coupling; the default cycles through {1, -1, 0.5, -0.5}.
    pub lambda: Option<f64>,
    /// Pin the phase of the unimodular coupling (radians).
    pub lambda_arg: Option<f64>,
    /// Diagonal disorder strength for the Jacobi window driver.
    pub coupling: f64,
    /// Verblunsky radius for the CMV window driver.
    pub radius: f64,
    pub grid_radius: f64,
    pub grid_count: usize,
    pub jobs: usize,
    /// Demonstrate the unmet-hypothesis path by probing with an eigenvector.
    pub non_cyclic_demo: bool,
    pub tols: HarnessTols,
}

impl EnsembleConfig {
    pub fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            trials: 1,
            size: 16,
            seed: 1,
            lambda: None,
            lambda_arg: None,
            coupling: 1.0,
            radius: 0.9,
            grid_radius: 0.9,
            grid_count: 128,
            jobs: 1,
            non_cyclic_demo: false,
            tols: HarnessTols::default(),
        }
    }
}

fn unimodular_coupling(cfg: &EnsembleConfig, rng: &mut SeededRng) -> Complex64 {
    match cfg.lambda_arg {
        Some(arg) => Complex64::new(arg.cos(), arg.sin()),
        None => ensemble::unimodular_away_from_one(rng),
    }
}

/// Run one trial. Deterministic in `(cfg.seed, trial)`.
pub fn run_trial(cfg: &EnsembleConfig, trial: u64) -> Result<VerificationReport> {
    let mut rng = SeededRng::for_trial(cfg.seed, trial);
    let mut report = match cfg.theorem {
        TheoremId::Thm1 => {
            let n = rng.usize_in(4, cfg.size.max(4));
            let (a, phi) = ensemble::selfadjoint_with_cyclic(&mut rng, n);
            let lambda = cfg.lambda.unwrap_or_else(|| ensemble::lambda_cycle(trial));
            let probe = if cfg.non_cyclic_demo {
                // An eigenvector generates a one-dimensional subspace.
                crate::spectral::eigendecompose(&a, cfg.tols.eigen)?
                    .vectors
                    .column(0)
            } else {
                phi
            };
            verify_theorem1(&a, &probe, lambda, &cfg.tols)?
        }
        TheoremId::Thm2 => {
            let m = rng.usize_in(3, (cfg.size / 2).max(3));
            let (a1, a2, phi1, phi2) = ensemble::conjugate_pair_with_cyclic(&mut rng, m);
            let lambda = cfg.lambda.unwrap_or_else(|| ensemble::lambda_cycle(trial));
            verify_theorem2(&a1, &a2, &phi1, &phi2, lambda, &cfg.tols)?
        }
        TheoremId::Cor21 | TheoremId::Eq21 => {
            let hi = (cfg.size / 2).max(3);
            let n1 = rng.usize_in(3, hi);
            let n2 = rng.usize_in(3, hi);
            let shared = rng.usize_in(0, n1.min(n2));
            let (a1, a2, phi1, phi2) =
                ensemble::overlapping_pair_with_cyclic(&mut rng, n1, n2, shared);
            if cfg.theorem == TheoremId::Cor21 {
                let lambda = cfg.lambda.unwrap_or_else(|| ensemble::lambda_cycle(trial));
                verify_corollary21(&a1, &a2, &phi1, &phi2, lambda, &cfg.tols)?
            } else {
                verify_overlap_structure(&a1, &a2, &phi1, &phi2, &cfg.tols)?
            }
        }
        TheoremId::Eq43 => {
            let n = rng.usize_in(4, cfg.size.max(4));
            let (v, phi) = ensemble::unitary_with_cyclic(&mut rng, n);
            let lambda = unimodular_coupling(cfg, &mut rng);
            verify_unitary_ad(&v, &phi, lambda, cfg.grid_radius, cfg.grid_count, &cfg.tols)?
        }
        TheoremId::Thm42 => {
            let m = (cfg.size / 2).max(2);
            let (a1, v1) = {
                let grid = ensemble::jittered_grid(&mut rng, m, -1.0, 1.0);
                ensemble::selfadjoint_from_spectrum(&mut rng, &grid)
            };
            let (a2, v2) = {
                let grid = ensemble::jittered_grid(&mut rng, m, -1.2, 0.8);
                ensemble::selfadjoint_from_spectrum(&mut rng, &grid)
            };
            let phi1 = ensemble::cyclic_probe(&mut rng, &v1, true);
            let phi2 = ensemble::cyclic_probe(&mut rng, &v2, true);
            let lambda = unimodular_coupling(cfg, &mut rng);
            verify_theorem42(&a1, &a2, &phi1, &phi2, lambda, &cfg.tols)?
        }
        TheoremId::Thm31 => {
            let n = cfg.size.max(2) as i64;
            let n_min = -(n / 2);
            let n_max = n_min + n - 1;
            let window_seed = rng.next_u64();
            let w = anderson_jacobi(window_seed, n_min, n_max, cfg.coupling)?;
            verify_jacobi_simplicity(&w, &cfg.tols)?
        }
        TheoremId::Thm51 => {
            let dim = cfg.size as i64;
            if dim < 4 || dim % 2 != 0 {
                return Err(Error::BadParameter(format!(
                    "cmv driver needs an even size of at least 4, got {dim}"
                )));
            }
            let j_min = -2 * (dim / 4);
            let window_seed = rng.next_u64();
            let w = random_verblunsky(window_seed, j_min, j_min + dim, cfg.radius)?;
            verify_cmv_simplicity(&w, &cfg.tols)?
        }
    };
    report
        .inputs_digest
        .insert("seed".into(), cfg.seed.to_string());
    report
        .inputs_digest
        .insert("trial".into(), trial.to_string());
    Ok(report)
}

/// Run all trials, in parallel when `cfg.jobs > 1`; the output order is by
/// trial index regardless of scheduling.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<Vec<VerificationReport>> {
    let trials = cfg.trials;
    let jobs = cfg.jobs.max(1).min(trials.max(1) as usize);
    if jobs <= 1 {
        return (0..trials).map(|t| run_trial(cfg, t)).collect();
    }
    let chunk = trials.div_ceil(jobs as u64);
    let mut results: Vec<Result<Vec<VerificationReport>>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for j in 0..jobs as u64 {
            let lo = j * chunk;
            let hi = ((j + 1) * chunk).min(trials);
            if lo >= hi {
                break;
            }
            handles.push(scope.spawn(move || (lo..hi).map(|t| run_trial(cfg, t)).collect()));
        }
        for h in handles {
            results.push(h.join().expect("ensemble worker panicked"));
        }
    });
    let mut out = Vec::with_capacity(trials as usize);
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Aggregate counts over an ensemble run.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub schema: u32,
    pub summary: bool,
    pub theorem_id: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl EnsembleSummary {
    pub fn from_reports(theorem: TheoremId, reports: &[VerificationReport]) -> Self {
        let mut s = Self {
            schema: 1,
            summary: true,
            theorem_id: theorem.name().to_string(),
            total: reports.len(),
            passed: 0,
            failed: 0,
            inconclusive: 0,
            skipped: 0,
            timestamp: None,
        };
        for r in reports {
            match r.status {
                ReportStatus::Passed => s.passed += 1,
                ReportStatus::Failed => s.failed += 1,
                ReportStatus::InconclusivePrecondition => s.inconclusive += 1,
                ReportStatus::Skipped => s.skipped += 1,
            }
        }
        s
    }

    /// Every trial that ran to a verdict passed.
    pub fn all_effective_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serialization is infallible")
    }
}
