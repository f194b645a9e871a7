//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The timed criteria are serialized through a global lock so wall-clock
//! budgets are measured without contention from sibling tests.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use specsimple::decouple::{decouple_cmv, decouple_jacobi};
use specsimple::harness::{verify_corollary21, verify_theorem2, HarnessTols, ReportStatus};
use specsimple::matrix::{concat, C_ONE, C_ZERO};
use specsimple::operator::{
    apply_rank_one, materialize_cmv, materialize_jacobi, random_verblunsky, CMVWindow,
    DenseOperator, JacobiWindow, OperatorKind, RankOneCoupling,
};
use specsimple::rng::SeededRng;
use specsimple::runner::{run_ensemble, EnsembleConfig, EnsembleSummary, TheoremId};
use specsimple::spectral::eigendecompose;
use specsimple::CMatrix;

static SERIAL: Mutex<()> = Mutex::new(());

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_window(rng: &mut SeededRng, max_sites: usize) -> JacobiWindow {
    let n = rng.usize_in(2, max_sites) as i64;
    let n_min = -(n / 2);
    let len = n as usize;
    let b: Vec<f64> = (0..len).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
    let a: Vec<f64> = (0..len - 1).map(|_| rng.uniform_in(0.25, 2.25)).collect();
    JacobiWindow::new(n_min, n_min + n - 1, b, a).expect("valid window")
}

fn pass_line(id: u32, name: &str, detail: String) {
    println!("ACCEPTANCE criterion {id:>2} ({name}): PASS — {detail}");
}

#[test]
fn criterion_01_jacobi_decoupling_exactness() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();
    let mut rng = SeededRng::new(101);
    let mut worst_ratio = 0.0f64;
    for trial in 0..500 {
        let w = random_window(&mut rng, 200);
        let dec = decouple_jacobi(&w, -1).expect("cut straddles every window");
        let residual = dec.reconstruction_residual(&w).expect("reassembly");
        let bound = 2f64.powi(-50) * materialize_jacobi(&w).matrix().inf_norm();
        assert!(
            residual <= bound,
            "criterion 1 FAIL at trial {trial}: residual {residual:e} > bound {bound:e}"
        );
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(residual / bound);
        }
    }
    let elapsed = t0.elapsed();
    pass_line(
        1,
        "jacobi decoupling exactness",
        format!("500 windows, worst residual/bound {worst_ratio:.3e}, {elapsed:.2?}"),
    );
    assert!(
        elapsed < Duration::from_secs(10),
        "criterion 1 FAIL: runtime {elapsed:?} >= 10s"
    );
}

#[test]
fn criterion_02_cmv_rank_one_decoupling() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();
    let mut rng = SeededRng::new(202);
    let mut worst_sigma2 = 0.0f64;
    let mut worst_unitarity = 0.0f64;
    for trial in 0..500 {
        let dim = 2 * rng.usize_in(2, 100) as i64; // even, 4..=200
        let j_min = -2 * (dim / 4);
        let w = random_verblunsky(rng.next_u64(), j_min, j_min + dim, 0.9).expect("valid window");
        let dec = decouple_cmv(&w, -1).expect("interior cut");
        let dev = dec.rank_one_deviation();
        // The severed operator is unitary, so its spectral norm is exactly 1
        // and the relative bound coincides with the absolute one.
        assert!(
            dev.sigma2_bound <= 1e-12,
            "criterion 2 FAIL at trial {trial} (dim {dim}): sigma2 {:.3e}",
            dev.sigma2_bound
        );
        let unit = dec.decoupled.matrix().unitary_residual();
        assert!(
            unit <= 1e-12,
            "criterion 2 FAIL at trial {trial} (dim {dim}): unitarity {unit:.3e}"
        );
        worst_sigma2 = worst_sigma2.max(dev.sigma2_bound);
        worst_unitarity = worst_unitarity.max(unit);
    }
    let elapsed = t0.elapsed();
    pass_line(
        2,
        "cmv rank-one decoupling",
        format!(
            "500 windows, worst sigma2 {worst_sigma2:.3e}, worst unitarity {worst_unitarity:.3e}, {elapsed:.2?}"
        ),
    );
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 2 FAIL: runtime {elapsed:?} >= 60s"
    );
}

#[test]
fn criterion_03_rank_one_disjointness_ensemble() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();
    let mut cfg = EnsembleConfig::new(TheoremId::Thm1);
    cfg.trials = 1000;
    cfg.size = 50;
    cfg.seed = 42;
    let reports = run_ensemble(&cfg).expect("ensemble");
    let mut worst_secular = 0.0f64;
    for r in &reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 3 FAIL: {}",
            r.to_json()
        );
        let sec = r
            .checks
            .iter()
            .find(|ch| ch.name == "secular_residual_max")
            .expect("secular check present");
        worst_secular = worst_secular.max(sec.measured);
    }
    assert_eq!(reports.len(), 1000);
    let elapsed = t0.elapsed();
    pass_line(
        3,
        "perturbed spectra disjoint + secular equation",
        format!("1000/1000 pass, worst secular residual {worst_secular:.3e}, {elapsed:.2?}"),
    );
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 3 FAIL: runtime {elapsed:?} >= 60s"
    );
}

#[test]
fn criterion_04_coupled_sum_simplicity_ensemble() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();

    // Handcrafted case: two copies of diag(0, 1) coupled through the
    // half-half probes; the coupled spectrum is {0, (3-sqrt5)/2, 1,
    // (3+sqrt5)/2} from the 2x2 reduction on the cyclic subspace.
    let diag01 = {
        let mut m = CMatrix::zeros(2);
        m.set(1, 1, C_ONE);
        DenseOperator::new(m, OperatorKind::Selfadjoint, vec![0, 1]).unwrap()
    };
    let s = 1.0 / 2f64.sqrt();
    let half = vec![c(s, 0.0), c(s, 0.0)];
    let report = verify_theorem2(&diag01, &diag01, &half, &half, 1.0, &HarnessTols::default())
        .expect("handcrafted run");
    assert!(
        report.passed,
        "criterion 4 FAIL (handcrafted): {}",
        report.to_json()
    );
    let b = diag01.direct_sum(&diag01).unwrap();
    let coupled = apply_rank_one(
        &b,
        &RankOneCoupling::new(concat(&half, &half), C_ONE).unwrap(),
    )
    .unwrap();
    let eig = eigendecompose(&coupled, 1e-10).unwrap();
    let s5 = 5f64.sqrt();
    for (got, want) in eig
        .values
        .iter()
        .zip([0.0, (3.0 - s5) / 2.0, 1.0, (3.0 + s5) / 2.0])
    {
        assert!(
            (got - c(want, 0.0)).norm() <= 1e-12,
            "criterion 4 FAIL (handcrafted spectrum): {got} vs {want}"
        );
    }

    let mut cfg = EnsembleConfig::new(TheoremId::Thm2);
    cfg.trials = 1000;
    cfg.size = 50;
    cfg.seed = 43;
    let reports = run_ensemble(&cfg).expect("ensemble");
    for r in &reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 4 FAIL: {}",
            r.to_json()
        );
        let degenerate = r
            .checks
            .iter()
            .find(|ch| ch.name == "b_max_multiplicity")
            .expect("profile of the uncoupled sum present");
        assert!(
            degenerate.measured >= 2.0,
            "criterion 4: uncoupled sum unexpectedly nondegenerate: {}",
            r.to_json()
        );
    }
    assert_eq!(reports.len(), 1000);
    let elapsed = t0.elapsed();
    pass_line(
        4,
        "coupled direct sum has simple spectrum",
        format!("handcrafted spectrum to 1e-12 + 1000/1000 pass, {elapsed:.2?}"),
    );
    assert!(
        elapsed < Duration::from_secs(60),
        "criterion 4 FAIL: runtime {elapsed:?} >= 60s"
    );
}

#[test]
fn criterion_05_shared_spectrum_matches_common_atoms() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();

    // Handcrafted: equal summands share everything; disjoint summands share
    // nothing.
    let tols = HarnessTols::default();
    let s = 1.0 / 2f64.sqrt();
    let half = vec![c(s, 0.0), c(s, 0.0)];
    let d01 = {
        let mut m = CMatrix::zeros(2);
        m.set(1, 1, C_ONE);
        DenseOperator::new(m, OperatorKind::Selfadjoint, vec![0, 1]).unwrap()
    };
    let d23 = {
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, c(2.0, 0.0));
        m.set(1, 1, c(3.0, 0.0));
        DenseOperator::new(m, OperatorKind::Selfadjoint, vec![0, 1]).unwrap()
    };
    for (other, expect_common) in [(&d01, 2.0), (&d23, 0.0)] {
        let report = verify_corollary21(&d01, other, &half, &half, 1.0, &tols).unwrap();
        assert!(
            report.passed,
            "criterion 5 FAIL (handcrafted): {}",
            report.to_json()
        );
        let common = report
            .checks
            .iter()
            .find(|ch| ch.name == "common_atom_count")
            .unwrap();
        assert_eq!(
            common.measured, expect_common,
            "criterion 5 handcrafted common-atom count"
        );
    }

    let mut cfg = EnsembleConfig::new(TheoremId::Cor21);
    cfg.trials = 200;
    cfg.size = 24;
    cfg.seed = 44;
    let reports = run_ensemble(&cfg).expect("ensemble");
    for r in &reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 5 FAIL: {}",
            r.to_json()
        );
    }
    let elapsed = t0.elapsed();
    pass_line(
        5,
        "shared spectrum equals the common atom set",
        format!("handcrafted + 200/200 pass, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_06_complement_structure() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();
    let mut cfg = EnsembleConfig::new(TheoremId::Eq21);
    cfg.trials = 200;
    cfg.size = 24;
    cfg.seed = 45;
    let reports = run_ensemble(&cfg).expect("ensemble");
    for r in &reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 6 FAIL: {}",
            r.to_json()
        );
    }
    let elapsed = t0.elapsed();
    pass_line(
        6,
        "complement dimension, orthogonality, and measure support",
        format!("200/200 pass, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_07_schur_rotation_identity() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();

    // Scalar case: base [1], coupling i; the perturbed Schur function is the
    // constant -i and the identity is exact to machine precision.
    let one = {
        let mut m = CMatrix::zeros(1);
        m.set(0, 0, C_ONE);
        DenseOperator::new(m, OperatorKind::Unitary, vec![0]).unwrap()
    };
    let report = specsimple::harness::verify_unitary_ad(
        &one,
        &[C_ONE],
        c(0.0, 1.0),
        0.9,
        128,
        &HarnessTols::default(),
    )
    .unwrap();
    assert!(
        report.passed,
        "criterion 7 FAIL (scalar): {}",
        report.to_json()
    );
    let identity = report
        .checks
        .iter()
        .find(|ch| ch.name == "schur_identity_residual_max")
        .unwrap();
    assert!(
        identity.measured <= 1e-14,
        "criterion 7 FAIL: scalar identity residual {:.3e}",
        identity.measured
    );

    let mut cfg = EnsembleConfig::new(TheoremId::Eq43);
    cfg.trials = 200;
    cfg.size = 32;
    cfg.seed = 46;
    cfg.grid_radius = 0.9;
    cfg.grid_count = 128;
    let reports = run_ensemble(&cfg).expect("ensemble");
    let mut worst = 0.0f64;
    for r in &reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 7 FAIL: {}",
            r.to_json()
        );
        let res = r
            .checks
            .iter()
            .find(|ch| ch.name == "schur_identity_residual_max")
            .unwrap();
        assert!(
            res.measured <= 1e-10,
            "criterion 7 FAIL: grid residual {:.3e}",
            res.measured
        );
        worst = worst.max(res.measured);
    }
    let elapsed = t0.elapsed();
    pass_line(
        7,
        "schur rotation identity on the interior grid",
        format!("scalar exact + 200/200 pass, worst grid residual {worst:.3e}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_08_cayley_pipeline() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();
    let mut cfg = EnsembleConfig::new(TheoremId::Thm42);
    cfg.trials = 100;
    cfg.size = 10;
    cfg.seed = 47;
    let reports = run_ensemble(&cfg).expect("ensemble");
    let summary = EnsembleSummary::from_reports(TheoremId::Thm42, &reports);
    for r in &reports {
        assert!(
            r.status == ReportStatus::Passed || r.status == ReportStatus::Skipped,
            "criterion 8 FAIL: {}",
            r.to_json()
        );
        if r.status == ReportStatus::Passed {
            let sigma2 = r
                .checks
                .iter()
                .find(|ch| ch.name == "resolvent_diff_sigma2")
                .unwrap();
            assert!(
                sigma2.measured <= 1e-10,
                "criterion 8 FAIL: resolvent sigma2 {:.3e}",
                sigma2.measured
            );
        }
    }
    let skip_rate = summary.skipped as f64 / summary.total as f64;
    assert!(skip_rate < 0.05, "criterion 8 FAIL: skip rate {skip_rate}");
    let elapsed = t0.elapsed();
    pass_line(
        8,
        "resolvent rank-one pipeline",
        format!(
            "{} passed, {} skipped (rate {:.1}%), {elapsed:.2?}",
            summary.passed,
            summary.skipped,
            100.0 * skip_rate
        ),
    );
}

#[test]
fn criterion_09_window_theorems_at_scale() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();

    let mut cfg = EnsembleConfig::new(TheoremId::Thm31);
    cfg.trials = 20;
    cfg.size = 500;
    cfg.seed = 48;
    cfg.coupling = 1.0;
    let jacobi_reports = run_ensemble(&cfg).expect("jacobi ensemble");
    for r in &jacobi_reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 9 FAIL (jacobi): {}",
            r.to_json()
        );
    }

    let mut cfg = EnsembleConfig::new(TheoremId::Thm51);
    cfg.trials = 20;
    cfg.size = 128;
    cfg.seed = 49;
    cfg.radius = 0.9;
    let cmv_reports = run_ensemble(&cfg).expect("cmv ensemble");
    for r in &cmv_reports {
        assert!(
            r.status == ReportStatus::Passed,
            "criterion 9 FAIL (cmv): {}",
            r.to_json()
        );
    }

    let elapsed = t0.elapsed();
    pass_line(
        9,
        "window theorems at scale",
        format!("20 disorder windows (n=500) + 20 cmv windows (dim 128) pass, {elapsed:.2?}"),
    );
    assert!(
        elapsed < Duration::from_secs(300),
        "criterion 9 FAIL: runtime {elapsed:?} >= 5min"
    );
}

#[test]
fn criterion_10_determinism() {
    let _guard = SERIAL.lock().unwrap();
    let t0 = Instant::now();

    let mut cfg = EnsembleConfig::new(TheoremId::Thm2);
    cfg.trials = 50;
    cfg.size = 20;
    cfg.seed = 50;
    let first: Vec<String> = run_ensemble(&cfg)
        .expect("run")
        .iter()
        .map(|r| r.to_json())
        .collect();
    let second: Vec<String> = run_ensemble(&cfg)
        .expect("rerun")
        .iter()
        .map(|r| r.to_json())
        .collect();
    assert_eq!(
        first, second,
        "criterion 10 FAIL: thm2 reports differ between runs"
    );

    cfg.jobs = 4;
    let parallel: Vec<String> = run_ensemble(&cfg)
        .expect("parallel")
        .iter()
        .map(|r| r.to_json())
        .collect();
    assert_eq!(
        first, parallel,
        "criterion 10 FAIL: parallel run differs from serial"
    );

    let mut cfg = EnsembleConfig::new(TheoremId::Thm51);
    cfg.trials = 3;
    cfg.size = 16;
    cfg.seed = 51;
    let a: Vec<String> = run_ensemble(&cfg)
        .expect("run")
        .iter()
        .map(|r| r.to_json())
        .collect();
    let b: Vec<String> = run_ensemble(&cfg)
        .expect("rerun")
        .iter()
        .map(|r| r.to_json())
        .collect();
    assert_eq!(a, b, "criterion 10 FAIL: thm51 reports differ between runs");

    // Window files round-trip bit exactly as well.
    let w = random_verblunsky(7, -8, 8, 0.9).unwrap();
    assert_eq!(CMVWindow::from_text(&w.to_text()).unwrap(), w);

    let elapsed = t0.elapsed();
    pass_line(
        10,
        "byte-identical reports across reruns",
        format!("{elapsed:.2?}"),
    );
}

// The all-zero coefficient window is the free shift cycle; keep one
// end-to-end sanity anchor here so the acceptance binary fails loudly if the
// block convention drifts.
#[test]
fn anchor_free_cmv_window() {
    let _guard = SERIAL.lock().unwrap();
    let w = CMVWindow::new(-4, 4, vec![C_ZERO; 8], C_ONE, C_ONE).unwrap();
    let op = materialize_cmv(&w).unwrap();
    let eig = eigendecompose(&op, 1e-10).unwrap();
    for (k, v) in eig.values.iter().enumerate() {
        let angle = std::f64::consts::TAU * k as f64 / 8.0;
        assert!(
            (v - c(angle.cos(), angle.sin())).norm() <= 1e-12,
            "eighth roots of unity expected, got {v} at {k}"
        );
    }
}
