//! Executable finite-dimensional verifications, one per theorem-level claim,
//! producing structured reports.
//!
//! On a finite carrier every spectral measure is pure point, so "simple
//! singular spectrum" is checked as "all eigenvalues simple" and "disjoint
//! singular measures" as "no shared eigenvalues"; every report carries the
//! measured values next to the thresholds they were compared against so a
//! borderline verdict can be re-judged after the fact.
//!
//! Failed hypotheses (a probe vector that is not cyclic) mark a report
//! `inconclusive-precondition` rather than failed: a red report would blame
//! the claim for an unmet hypothesis.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::decouple::{
    cayley, decouple_cmv, decouple_jacobi, inverse_cayley, selfadjoint_resolvent_at_i,
    unitary_rank_one,
};
use crate::error::{Error, Result};
use crate::matrix::{concat, dot, leading_singular_triple, rank_one_deviation, C_ZERO};
use crate::operator::{
    apply_rank_one, materialize_cmv, materialize_jacobi, CMVWindow, DenseOperator, JacobiWindow,
    RankOneCoupling,
};
use crate::spectral::{
    borel_transform, diameter, eigendecompose, krylov_basis, krylov_dimension,
    multiplicity_profile, schur_function, spectral_measure, support_partition,
    AtomicSpectralMeasure, EigenDecomposition,
};

/// Tolerance bundle for the harness. Gap-style thresholds scale with the
/// spectral diameter of the operators under test; identity-style thresholds
/// are absolute.
#[derive(Debug, Clone)]
pub struct HarnessTols {
    /// Disjointness / gap threshold, relative to the spectral diameter.
    pub gap_rel: f64,
    /// Identity residuals (function identities, orthogonality, weights).
    pub identity: f64,
    /// Second singular value bound for rank-one differences.
    pub rank_one: f64,
    /// Second singular value bound for the resolvent-difference check.
    pub resolvent_rank_one: f64,
    /// Relative eigendecomposition residual.
    pub eigen: f64,
    /// Krylov rank cutoff.
    pub krylov: f64,
    /// Secular equation residual.
    pub secular: f64,
    /// Skip band around the excluded spectral point of the Cayley inverse.
    /// Kept wide so the recovered operator's norm cannot inflate the scale
    /// of the gap threshold.
    pub cayley_exclusion: f64,
    /// Slack factor for coupling-visibility checks on matched coincidences.
    pub visibility_factor: f64,
}

impl Default for HarnessTols {
    fn default() -> Self {
        Self {
            gap_rel: 1e-8,
            identity: 1e-10,
            rank_one: 1e-12,
            resolvent_rank_one: 1e-10,
            eigen: 1e-10,
            krylov: 1e-10,
            secular: 1e-8,
            cayley_exclusion: 1e-4,
            visibility_factor: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckCmp {
    Le,
    Ge,
    Gt,
    Eq,
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub cmp: CheckCmp,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportStatus {
    #[serde(rename = "passed")]
    Passed,
    #[serde(rename = "failed")]
    Failed,
    #[serde(rename = "inconclusive-precondition")]
    InconclusivePrecondition,
    #[serde(rename = "skipped")]
    Skipped,
}

/// The reading every report is made under, carried in its header: on a
/// finite carrier all spectral measures are pure point, so simplicity means
/// all eigenvalues simple and mutual singularity means no shared eigenvalues.
pub const FINITE_READING: &str =
    "finite carrier: spectra are pure point; simple = all eigenvalues simple; \
     disjoint singular measures = no shared eigenvalues";

/// Structured outcome of one verification run.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub theorem_id: String,
    pub reading: &'static str,
    pub status: ReportStatus,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub checks: Vec<CheckRecord>,
    pub inputs_digest: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }

    /// One-line human-readable rendering.
    pub fn table_line(&self) -> String {
        let status = match self.status {
            ReportStatus::Passed => "pass",
            ReportStatus::Failed => "FAIL",
            ReportStatus::InconclusivePrecondition => "inconclusive",
            ReportStatus::Skipped => "skip",
        };
        let detail = match self.status {
            ReportStatus::Failed => {
                let worst = self
                    .checks
                    .iter()
                    .find(|c| !c.pass)
                    .map(|c| {
                        format!(
                            " [{} measured {:.3e} vs {:.3e}]",
                            c.name, c.measured, c.threshold
                        )
                    })
                    .unwrap_or_default();
                worst
            }
            _ => self
                .note
                .as_ref()
                .map(|n| format!(" [{n}]"))
                .unwrap_or_default(),
        };
        format!(
            "{:<8} {:<12} checks {:>2}/{:<2}{}",
            self.theorem_id,
            status,
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
            detail
        )
    }
}

struct ReportBuilder {
    theorem_id: &'static str,
    checks: Vec<CheckRecord>,
    digest: BTreeMap<String, String>,
}

impl ReportBuilder {
    fn new(theorem_id: &'static str) -> Self {
        Self {
            theorem_id,
            checks: Vec::new(),
            digest: BTreeMap::new(),
        }
    }

    fn digest(&mut self, key: &str, value: impl std::fmt::Display) {
        self.digest.insert(key.to_string(), value.to_string());
    }

    fn push(&mut self, name: &str, measured: f64, threshold: f64, cmp: CheckCmp) {
        let pass = match cmp {
            CheckCmp::Le => measured <= threshold,
            CheckCmp::Ge => measured >= threshold,
            CheckCmp::Gt => measured > threshold,
            CheckCmp::Eq => measured == threshold,
            CheckCmp::Info => true,
        };
        self.checks.push(CheckRecord {
            name: name.to_string(),
            measured,
            threshold,
            cmp,
            pass,
        });
    }

    fn finish(self) -> VerificationReport {
        let passed = self.checks.iter().all(|c| c.pass);
        VerificationReport {
            schema: 1,
            theorem_id: self.theorem_id.to_string(),
            reading: FINITE_READING,
            status: if passed {
                ReportStatus::Passed
            } else {
                ReportStatus::Failed
            },
            passed,
            note: None,
            checks: self.checks,
            inputs_digest: self.digest,
        }
    }

    fn finish_with(self, status: ReportStatus, note: String) -> VerificationReport {
        VerificationReport {
            schema: 1,
            theorem_id: self.theorem_id.to_string(),
            reading: FINITE_READING,
            status,
            passed: false,
            note: Some(note),
            checks: self.checks,
            inputs_digest: self.digest,
        }
    }
}

// ---------------------------------------------------------------------------
// small shared helpers

/// FNV-1a over the serialized window, so a report produced from a file input
/// identifies its input exactly.
fn fingerprint(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn joint_diameter(a: &EigenDecomposition, b: &EigenDecomposition) -> f64 {
    let mut all = a.values.clone();
    all.extend_from_slice(&b.values);
    diameter(&all)
}

fn min_cross_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for x in a {
        for y in b {
            best = best.min((x - y).norm());
        }
    }
    best
}

/// Values of `a` lying within `tol` of some value of `b`.
fn matched_values(a: &[Complex64], b: &[Complex64], tol: f64) -> Vec<Complex64> {
    a.iter()
        .filter(|x| b.iter().any(|y| (*x - y).norm() <= tol))
        .copied()
        .collect()
}

/// Count of elements of `a` with no partner in `b` within `tol`, plus the
/// symmetric count.
fn set_mismatch(a: &[Complex64], b: &[Complex64], tol: f64) -> usize {
    let only_a = a
        .iter()
        .filter(|x| !b.iter().any(|y| (*x - y).norm() <= tol))
        .count();
    let only_b = b
        .iter()
        .filter(|y| !a.iter().any(|x| (x - *y).norm() <= tol))
        .count();
    only_a + only_b
}

fn nearest_index(values: &[Complex64], x: Complex64) -> usize {
    let mut best = 0usize;
    let mut dist = f64::INFINITY;
    for (k, v) in values.iter().enumerate() {
        let d = (v - x).norm();
        if d < dist {
            dist = d;
            best = k;
        }
    }
    best
}

fn simplicity_checks(
    rb: &mut ReportBuilder,
    label: &str,
    d: &EigenDecomposition,
    tols: &HarnessTols,
) {
    let diam = d.diameter();
    let profile = multiplicity_profile(d, tols.gap_rel * diam.max(1e-300));
    let max_mult = profile.clusters.iter().map(|&(_, m)| m).max().unwrap_or(1);
    rb.push(
        &format!("{label}_max_multiplicity"),
        max_mult as f64,
        1.0,
        CheckCmp::Le,
    );
    if d.dim() >= 2 {
        rb.push(
            &format!("{label}_min_gap"),
            profile.min_gap,
            tols.gap_rel * diam,
            CheckCmp::Gt,
        );
    }
}

// ---------------------------------------------------------------------------
// selfadjoint rank-one perturbation: disjointness + secular equation

/// Perturb a selfadjoint operator by `lambda phi phi^*` and check that the
/// perturbed and unperturbed spectra are disjoint, that the perturbed
/// eigenvalues solve the secular equation of the probe's spectral measure,
/// and that the perturbed spectrum is simple.
pub fn verify_theorem1(
    a: &DenseOperator,
    phi: &[Complex64],
    lambda: f64,
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    if lambda == 0.0 {
        return Err(Error::BadCoupling {
            expected: "real nonzero",
            got: "0".into(),
        });
    }
    let n = a.dim();
    let mut rb = ReportBuilder::new("thm1");
    rb.digest("n", n);
    rb.digest("lambda", lambda);

    let k = krylov_dimension(a, phi, tols.krylov)?;
    if k < n {
        rb.push("phi_cyclic_dim", k as f64, n as f64, CheckCmp::Info);
        return Ok(rb.finish_with(
            ReportStatus::InconclusivePrecondition,
            format!("probe vector generates a {k}-dimensional subspace of {n}; hypothesis unmet"),
        ));
    }
    rb.push("phi_cyclic_dim", k as f64, n as f64, CheckCmp::Eq);

    let coupling = RankOneCoupling::new(phi.to_vec(), Complex64::new(lambda, 0.0))?;
    let b = apply_rank_one(a, &coupling)?;
    let eig_a = eigendecompose(a, tols.eigen)?;
    let eig_b = eigendecompose(&b, tols.eigen)?;
    let diam = joint_diameter(&eig_a, &eig_b);

    let dist = min_cross_distance(&eig_a.values, &eig_b.values);
    rb.push(
        "spectra_min_distance",
        dist,
        tols.gap_rel * diam,
        CheckCmp::Gt,
    );

    let mu = spectral_measure(&eig_a, phi, tols.gap_rel * eig_a.diameter().max(1e-300))?;
    let inv_lambda = 1.0 / lambda;
    let mut worst = 0.0f64;
    for e in &eig_b.values {
        match borel_transform(&mu, *e, 1e-12) {
            Ok(f) => worst = worst.max((f + inv_lambda).norm()),
            Err(_) => worst = 1e300, // perturbed eigenvalue sits on a pole
        }
    }
    rb.push("secular_residual_max", worst, tols.secular, CheckCmp::Le);

    simplicity_checks(&mut rb, "b", &eig_b, tols);
    Ok(rb.finish())
}

/// Couple a direct sum across its two summands by a rank-one term and check
/// that the coupled operator has simple spectrum (with the uncoupled
/// multiplicity profile reported for contrast).
pub fn verify_theorem2(
    a1: &DenseOperator,
    a2: &DenseOperator,
    phi1: &[Complex64],
    phi2: &[Complex64],
    lambda: f64,
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    if lambda == 0.0 {
        return Err(Error::BadCoupling {
            expected: "real nonzero",
            got: "0".into(),
        });
    }
    let mut rb = ReportBuilder::new("thm2");
    rb.digest("n1", a1.dim());
    rb.digest("n2", a2.dim());
    rb.digest("lambda", lambda);

    let k1 = krylov_dimension(a1, phi1, tols.krylov)?;
    let k2 = krylov_dimension(a2, phi2, tols.krylov)?;
    if k1 < a1.dim() || k2 < a2.dim() {
        rb.push(
            "phi1_cyclic_dim",
            k1 as f64,
            a1.dim() as f64,
            CheckCmp::Info,
        );
        rb.push(
            "phi2_cyclic_dim",
            k2 as f64,
            a2.dim() as f64,
            CheckCmp::Info,
        );
        return Ok(rb.finish_with(
            ReportStatus::InconclusivePrecondition,
            "a projected probe vector is not cyclic for its summand".to_string(),
        ));
    }
    rb.push("phi1_cyclic_dim", k1 as f64, a1.dim() as f64, CheckCmp::Eq);
    rb.push("phi2_cyclic_dim", k2 as f64, a2.dim() as f64, CheckCmp::Eq);

    let b = a1.direct_sum(a2)?;
    let phi = concat(phi1, phi2);
    let coupling = RankOneCoupling::new(phi, Complex64::new(lambda, 0.0))?;
    let c = apply_rank_one(&b, &coupling)?;

    let eig_b = eigendecompose(&b, tols.eigen)?;
    let eig_c = eigendecompose(&c, tols.eigen)?;

    // The uncoupled sum is typically degenerate; that is the point of the
    // contrast, so it is recorded, not asserted.
    let b_profile = multiplicity_profile(&eig_b, tols.gap_rel * eig_b.diameter().max(1e-300));
    let b_max = b_profile
        .clusters
        .iter()
        .map(|&(_, m)| m)
        .max()
        .unwrap_or(1);
    rb.push("b_max_multiplicity", b_max as f64, 1.0, CheckCmp::Info);

    simplicity_checks(&mut rb, "c", &eig_c, tols);
    Ok(rb.finish())
}

/// Check that the coupled and uncoupled operators share spectrum exactly on
/// the common atoms of the two summand measures.
pub fn verify_corollary21(
    a1: &DenseOperator,
    a2: &DenseOperator,
    phi1: &[Complex64],
    phi2: &[Complex64],
    lambda: f64,
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    if lambda == 0.0 {
        return Err(Error::BadCoupling {
            expected: "real nonzero",
            got: "0".into(),
        });
    }
    let mut rb = ReportBuilder::new("cor21");
    rb.digest("n1", a1.dim());
    rb.digest("n2", a2.dim());
    rb.digest("lambda", lambda);

    let k1 = krylov_dimension(a1, phi1, tols.krylov)?;
    let k2 = krylov_dimension(a2, phi2, tols.krylov)?;
    if k1 < a1.dim() || k2 < a2.dim() {
        return Ok(rb.finish_with(
            ReportStatus::InconclusivePrecondition,
            "a projected probe vector is not cyclic for its summand".to_string(),
        ));
    }

    let eig1 = eigendecompose(a1, tols.eigen)?;
    let eig2 = eigendecompose(a2, tols.eigen)?;
    let mu1 = spectral_measure(&eig1, phi1, tols.gap_rel * eig1.diameter().max(1e-300))?;
    let mu2 = spectral_measure(&eig2, phi2, tols.gap_rel * eig2.diameter().max(1e-300))?;

    let b = a1.direct_sum(a2)?;
    let phi = concat(phi1, phi2);
    let coupling = RankOneCoupling::new(phi, Complex64::new(lambda, 0.0))?;
    let c = apply_rank_one(&b, &coupling)?;
    let eig_b = eigendecompose(&b, tols.eigen)?;
    let eig_c = eigendecompose(&c, tols.eigen)?;

    let diam = joint_diameter(&eig_b, &eig_c);
    let tol = tols.gap_rel * diam;
    let partition = support_partition(&mu1, &mu2, tol)?;

    let intersection = matched_values(&eig_c.values, &eig_b.values, tol);
    let mismatch = set_mismatch(&intersection, &partition.common, tol);
    rb.push(
        "intersection_vs_common_mismatch",
        mismatch as f64,
        0.0,
        CheckCmp::Eq,
    );
    rb.push(
        "common_atom_count",
        partition.common.len() as f64,
        0.0,
        CheckCmp::Info,
    );
    rb.push(
        "intersection_count",
        intersection.len() as f64,
        0.0,
        CheckCmp::Info,
    );
    Ok(rb.finish())
}

/// Check the orthogonal-complement structure of the coupled direct sum: the
/// complement of the probe's cyclic subspace is spanned by a vector living on
/// the common atoms, with the predicted measure.
pub fn verify_overlap_structure(
    a1: &DenseOperator,
    a2: &DenseOperator,
    phi1: &[Complex64],
    phi2: &[Complex64],
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    let n1 = a1.dim();
    let n2 = a2.dim();
    let n = n1 + n2;
    let mut rb = ReportBuilder::new("eq21");
    rb.digest("n1", n1);
    rb.digest("n2", n2);

    let k1 = krylov_dimension(a1, phi1, tols.krylov)?;
    let k2 = krylov_dimension(a2, phi2, tols.krylov)?;
    if k1 < n1 || k2 < n2 {
        return Ok(rb.finish_with(
            ReportStatus::InconclusivePrecondition,
            "a projected probe vector is not cyclic for its summand".to_string(),
        ));
    }

    let eig1 = eigendecompose(a1, tols.eigen)?;
    let eig2 = eigendecompose(a2, tols.eigen)?;
    let mu1 = spectral_measure(&eig1, phi1, tols.gap_rel * eig1.diameter().max(1e-300))?;
    let mu2 = spectral_measure(&eig2, phi2, tols.gap_rel * eig2.diameter().max(1e-300))?;
    let diam = joint_diameter(&eig1, &eig2).max(1e-300);
    let tol = tols.gap_rel * diam;
    let partition = support_partition(&mu1, &mu2, tol)?;
    let x_locations = &partition.common;
    rb.digest("common_atoms", x_locations.len());

    let b = a1.direct_sum(a2)?;
    let phi = concat(phi1, phi2);

    // Two realizations of the complement generator. The unscaled one carries
    // the literal sum measure (weights w1 + w2 on every common atom); the
    // weight-ratio-scaled one is the vector actually orthogonal to the cyclic
    // subspace of phi, with the ratio playing the role of the density of mu1
    // against mu2 on the common part.
    let mut psi_plain = vec![C_ZERO; n];
    let mut psi_perp = vec![C_ZERO; n];
    let mut expected_weights: Vec<(Complex64, f64)> = Vec::new();
    for &x in x_locations {
        let i1 = nearest_index(&eig1.values, x);
        let i2 = nearest_index(&eig2.values, x);
        let v1 = eig1.vectors.column(i1);
        let v2 = eig2.vectors.column(i2);
        let c1 = dot(&v1, phi1);
        let c2 = dot(&v2, phi2);
        let w1 = c1.norm_sqr();
        let w2 = c2.norm_sqr();
        let ratio = w1 / w2;
        for r in 0..n1 {
            psi_plain[r] += c1 * v1[r];
            psi_perp[r] += c1 * v1[r];
        }
        for r in 0..n2 {
            psi_plain[n1 + r] -= c2 * v2[r];
            psi_perp[n1 + r] -= ratio * c2 * v2[r];
        }
        expected_weights.push((x, w1 + w2));
    }

    let eig_b = eigendecompose(&b, tols.eigen)?;
    if x_locations.is_empty() {
        // Disjoint supports: the probe generates everything.
        let k_phi = krylov_dimension(&b, &phi, tols.krylov)?;
        rb.push("phi_krylov_dim", k_phi as f64, n as f64, CheckCmp::Eq);
        rb.push("complement_dim", (n - k_phi) as f64, 0.0, CheckCmp::Eq);
        return Ok(rb.finish());
    }

    // Measure of the unscaled generator: atoms exactly on the common set,
    // with the summed weights.
    let mu_psi = spectral_measure(
        &eig_b,
        &psi_plain,
        tols.gap_rel * eig_b.diameter().max(1e-300),
    )?;
    let atom_mismatch = set_mismatch(&mu_psi.locations(), x_locations, tol);
    rb.push(
        "psi_atoms_on_common_mismatch",
        atom_mismatch as f64,
        0.0,
        CheckCmp::Eq,
    );
    let mut weight_err = 0.0f64;
    for &(x, expect) in &expected_weights {
        let mut got = 0.0;
        for &(loc, wgt) in &mu_psi.atoms {
            if (loc - x).norm() <= tol {
                got += wgt;
            }
        }
        weight_err = weight_err.max((got - expect).abs());
    }
    rb.push(
        "psi_weight_error_max",
        weight_err,
        tols.identity,
        CheckCmp::Le,
    );

    // Krylov split generated by (phi, psi_perp).
    let basis_phi = krylov_basis(&b, &phi, tols.krylov)?;
    let basis_psi = krylov_basis(&b, &psi_perp, tols.krylov)?;
    rb.push(
        "krylov_dims_sum",
        (basis_phi.len() + basis_psi.len()) as f64,
        n as f64,
        CheckCmp::Eq,
    );
    rb.push(
        "complement_dim_matches_common",
        (n - basis_phi.len()) as f64,
        x_locations.len() as f64,
        CheckCmp::Eq,
    );
    let mut ortho = 0.0f64;
    for p in &basis_phi {
        for q in &basis_psi {
            ortho = ortho.max(dot(p, q).norm());
        }
    }
    rb.push(
        "krylov_mutual_orthogonality",
        ortho,
        tols.identity,
        CheckCmp::Le,
    );

    Ok(rb.finish())
}

/// Multiplicative rank-one perturbation of a unitary: checks the
/// Schur-function rotation identity `g = conj(lambda) f` on an interior
/// grid, disjointness of the two spectra, and simplicity of the perturbed
/// spectrum.
pub fn verify_unitary_ad(
    v: &DenseOperator,
    phi: &[Complex64],
    lambda: Complex64,
    grid_radius: f64,
    grid_count: usize,
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    if !(0.0 < grid_radius && grid_radius < 1.0) {
        return Err(Error::BadParameter(format!(
            "grid radius must lie in (0,1), got {grid_radius}"
        )));
    }
    if grid_count == 0 {
        return Err(Error::BadParameter("grid count must be positive".into()));
    }
    if (lambda.norm() - 1.0).abs() > 1e-12 || (lambda - Complex64::new(1.0, 0.0)).norm() <= 1e-15 {
        return Err(Error::BadCoupling {
            expected: "unimodular and distinct from 1",
            got: format!("{lambda}"),
        });
    }
    let n = v.dim();
    let mut rb = ReportBuilder::new("eq43");
    rb.digest("n", n);
    rb.digest("lambda_re", lambda.re);
    rb.digest("lambda_im", lambda.im);
    rb.digest("grid_radius", grid_radius);
    rb.digest("grid_count", grid_count);

    let k = krylov_dimension(v, phi, tols.krylov)?;
    if k < n {
        return Ok(rb.finish_with(
            ReportStatus::InconclusivePrecondition,
            format!("probe vector generates a {k}-dimensional subspace of {n}; hypothesis unmet"),
        ));
    }
    rb.push("phi_cyclic_dim", k as f64, n as f64, CheckCmp::Eq);

    let w = unitary_rank_one(v, phi, lambda)?;
    let eig_v = eigendecompose(v, tols.eigen)?;
    let eig_w = eigendecompose(&w, tols.eigen)?;
    let mu_v = spectral_measure(&eig_v, phi, tols.gap_rel * eig_v.diameter().max(1e-300))?;
    let mu_w = spectral_measure(&eig_w, phi, tols.gap_rel * eig_w.diameter().max(1e-300))?;

    let inv_lambda = lambda.conj(); // 1/lambda for unimodular lambda
    let mut worst = 0.0f64;
    for j in 0..grid_count {
        let t = std::f64::consts::TAU * j as f64 / grid_count as f64;
        let z = Complex64::new(grid_radius * t.cos(), grid_radius * t.sin());
        let f = schur_function(&mu_v, z)?;
        let g = schur_function(&mu_w, z)?;
        worst = worst.max((g - inv_lambda * f).norm());
    }
    rb.push(
        "schur_identity_residual_max",
        worst,
        tols.identity,
        CheckCmp::Le,
    );

    let diam = joint_diameter(&eig_v, &eig_w);
    let dist = min_cross_distance(&eig_v.values, &eig_w.values);
    rb.push(
        "spectra_min_distance",
        dist,
        tols.gap_rel * diam,
        CheckCmp::Gt,
    );

    simplicity_checks(&mut rb, "w", &eig_w, tols);
    Ok(rb.finish())
}

/// Full unbounded-route pipeline: map two selfadjoint summands to unitaries,
/// perturb the direct sum multiplicatively, pull the perturbed operator back,
/// and check that the resolvent difference is rank one and the recovered
/// operator has simple spectrum.
pub fn verify_theorem42(
    a1: &DenseOperator,
    a2: &DenseOperator,
    phi1: &[Complex64],
    phi2: &[Complex64],
    lambda_phase: Complex64,
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    if (lambda_phase.norm() - 1.0).abs() > 1e-12
        || (lambda_phase - Complex64::new(1.0, 0.0)).norm() <= 1e-15
    {
        return Err(Error::BadCoupling {
            expected: "unimodular and distinct from 1",
            got: format!("{lambda_phase}"),
        });
    }
    let mut rb = ReportBuilder::new("thm42");
    rb.digest("n1", a1.dim());
    rb.digest("n2", a2.dim());
    rb.digest("lambda_re", lambda_phase.re);
    rb.digest("lambda_im", lambda_phase.im);

    let u1 = cayley(a1)?;
    let u2 = cayley(a2)?;
    let k1 = krylov_dimension(&u1, phi1, tols.krylov)?;
    let k2 = krylov_dimension(&u2, phi2, tols.krylov)?;
    if k1 < u1.dim() || k2 < u2.dim() {
        return Ok(rb.finish_with(
            ReportStatus::InconclusivePrecondition,
            "a projected probe vector is not cyclic for its transformed summand".to_string(),
        ));
    }
    rb.push(
        "projections_cyclic",
        (k1 + k2) as f64,
        (u1.dim() + u2.dim()) as f64,
        CheckCmp::Eq,
    );

    let u = u1.direct_sum(&u2)?;
    let phi_hat = crate::matrix::normalize(&concat(phi1, phi2)).ok_or(Error::ZeroVector)?;
    let w = unitary_rank_one(&u, &phi_hat, lambda_phase)?;

    let eig_w = eigendecompose(&w, tols.eigen)?;
    let excl = eig_w
        .values
        .iter()
        .map(|z| (z - Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min);
    if excl <= tols.cayley_exclusion {
        rb.push(
            "excluded_point_distance",
            excl,
            tols.cayley_exclusion,
            CheckCmp::Info,
        );
        return Ok(rb.finish_with(
            ReportStatus::Skipped,
            format!("perturbed unitary has spectrum within {excl:.3e} of the excluded point; redraw the coupling phase"),
        ));
    }
    rb.push(
        "excluded_point_distance",
        excl,
        tols.cayley_exclusion,
        CheckCmp::Gt,
    );

    let c = inverse_cayley(&w, tols.cayley_exclusion)?;
    let b = a1.direct_sum(a2)?;
    let resolvent_b = selfadjoint_resolvent_at_i(&b)?;
    let resolvent_c = selfadjoint_resolvent_at_i(&c)?;
    let d = resolvent_b.sub(&resolvent_c);
    let dev = rank_one_deviation(&d);
    rb.push(
        "resolvent_diff_sigma2",
        dev.sigma2_bound,
        tols.resolvent_rank_one,
        CheckCmp::Le,
    );
    // The construction pins the top singular value at |lambda - 1| / 2; the
    // two resolvents are computed through independent decompositions, so this
    // is a genuine cross-route identity.
    let predicted = 0.5 * (lambda_phase - Complex64::new(1.0, 0.0)).norm();
    rb.push(
        "resolvent_diff_sigma1_error",
        (dev.sigma1 - predicted).abs(),
        tols.identity * (1.0 + predicted),
        CheckCmp::Le,
    );

    let eig_c = eigendecompose(&c, tols.eigen)?;
    simplicity_checks(&mut rb, "c", &eig_c, tols);
    Ok(rb.finish())
}

/// End-to-end check on a Jacobi window: exact reconstruction across the cut,
/// cyclicity of the cut-site vectors for the halves, simplicity of the full
/// operator, and the shared-spectrum prediction against the split operator.
pub fn verify_jacobi_simplicity(
    w: &JacobiWindow,
    tols: &HarnessTols,
) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("thm31");
    rb.digest("n_min", w.n_min());
    rb.digest("n_max", w.n_max());
    rb.digest("window_fingerprint", fingerprint(w.to_text().as_bytes()));

    let cut = -1; // default cut between sites -1 and 0
    let dec = decouple_jacobi(w, cut)?;
    let j = materialize_jacobi(w);

    let recon = dec.reconstruction_residual(w)?;
    let bound = 2f64.powi(-50) * j.matrix().inf_norm();
    rb.push("reconstruction_max_abs", recon, bound, CheckCmp::Le);

    // The cut-adjacent basis vectors: last site of the left half, first site
    // of the right half.
    let n_left = dec.left.dim();
    let n_right = dec.right.dim();
    let mut delta_left = vec![C_ZERO; n_left];
    delta_left[n_left - 1] = Complex64::new(1.0, 0.0);
    let mut delta_right = vec![C_ZERO; n_right];
    delta_right[0] = Complex64::new(1.0, 0.0);
    let kl = krylov_dimension(&dec.left, &delta_left, tols.krylov)?;
    let kr = krylov_dimension(&dec.right, &delta_right, tols.krylov)?;
    rb.push(
        "left_cut_vector_cyclic_dim",
        kl as f64,
        n_left as f64,
        CheckCmp::Eq,
    );
    rb.push(
        "right_cut_vector_cyclic_dim",
        kr as f64,
        n_right as f64,
        CheckCmp::Eq,
    );

    let eig_j = eigendecompose(&j, tols.eigen)?;
    simplicity_checks(&mut rb, "j", &eig_j, tols);

    let eig_l = eigendecompose(&dec.left, tols.eigen)?;
    let eig_r = eigendecompose(&dec.right, tols.eigen)?;
    let mu1 = spectral_measure(
        &eig_l,
        &delta_left,
        tols.gap_rel * eig_l.diameter().max(1e-300),
    )?;
    let mu2 = spectral_measure(
        &eig_r,
        &delta_right,
        tols.gap_rel * eig_r.diameter().max(1e-300),
    )?;

    let b = dec.left.direct_sum(&dec.right)?;
    let eig_b = eigendecompose(&b, tols.eigen)?;
    let diam = joint_diameter(&eig_j, &eig_b).max(1e-300);
    let tol = tols.gap_rel * diam;
    let partition = support_partition(&mu1, &mu2, tol)?;

    common_atoms_checks(&mut rb, &eig_j, &eig_b, &partition.common, tol);
    let mu_phi_b = spectral_measure(
        &eig_b,
        &dec.phi,
        tols.gap_rel * eig_b.diameter().max(1e-300),
    )?;
    selfadjoint_coincidence_checks(
        &mut rb,
        &eig_j,
        &eig_b,
        &mu_phi_b,
        dec.lambda,
        &partition.common,
        tol,
        tols,
    );
    Ok(rb.finish())
}

/// Record whether every predicted common atom appears in both spectra.
fn common_atoms_checks(
    rb: &mut ReportBuilder,
    eig_full: &EigenDecomposition,
    eig_split: &EigenDecomposition,
    common: &[Complex64],
    tol: f64,
) {
    let mut missing = 0usize;
    for x in common {
        let seen_full = eig_full.values.iter().any(|v| (v - x).norm() <= tol);
        let seen_split = eig_split.values.iter().any(|v| (v - x).norm() <= tol);
        if !(seen_full && seen_split) {
            missing += 1;
        }
    }
    rb.push("common_atoms_missing", missing as f64, 0.0, CheckCmp::Eq);
    rb.push(
        "common_atom_count",
        common.len() as f64,
        0.0,
        CheckCmp::Info,
    );
}

/// Floor for the secular denominators below: a resonant denominator means
/// the coupling would move the eigenvalue a lot, so flooring it keeps the
/// prediction conservative.
const SECULAR_DENOM_FLOOR: f64 = 1e-2;

/// Spectral coincidences beyond the predicted common atoms must be explained
/// by the coupling being below the matching resolution at that eigenvalue.
/// At finite scale, states localized far from the cut feel the removed
/// coupling by exponentially little, so their split and unsplit eigenvalues
/// coincide below any fixed threshold; the exact eigenvalue equation predicts
/// a persistence shift of `|lambda| w0 / |1 + lambda F_rest|` for a split
/// eigenvalue carrying coupling weight `w0`, and that prediction must stay
/// within the resolution slack for the coincidence to be legitimate.
#[allow(clippy::too_many_arguments)]
fn selfadjoint_coincidence_checks(
    rb: &mut ReportBuilder,
    eig_full: &EigenDecomposition,
    eig_split: &EigenDecomposition,
    mu_split: &AtomicSpectralMeasure,
    lambda: f64,
    common: &[Complex64],
    tol: f64,
    tols: &HarnessTols,
) {
    let mut unexplained = 0usize;
    let mut worst_predicted = 0.0f64;
    for e in &eig_full.values {
        let near_split = eig_split.values.iter().any(|v| (v - e).norm() <= tol);
        if !near_split {
            continue;
        }
        if common.iter().any(|x| (x - e).norm() <= 2.0 * tol) {
            continue;
        }
        unexplained += 1;
        // Weight of the coupling vector at the persisting split eigenvalue;
        // absent atoms were dropped below the measure floor and predict no
        // visible shift at all.
        let mut w0 = 0.0f64;
        let mut rest = Complex64::new(0.0, 0.0);
        for &(x, w) in &mu_split.atoms {
            if (x - e).norm() <= tol {
                w0 += w;
            } else {
                rest += w / (x - e);
            }
        }
        let denom = (Complex64::new(1.0, 0.0) + lambda * rest)
            .norm()
            .max(SECULAR_DENOM_FLOOR);
        worst_predicted = worst_predicted.max(lambda.abs() * w0 / denom);
    }
    rb.push(
        "unexplained_coincidences",
        unexplained as f64,
        0.0,
        CheckCmp::Info,
    );
    rb.push(
        "coincidence_predicted_shift_max",
        worst_predicted,
        tols.visibility_factor * tol,
        CheckCmp::Le,
    );
}

/// End-to-end check on a CMV window: rank-one severance, cyclicity of the
/// kernel-vector projections for the two decoupled halves, simplicity of the
/// full operator, and the shared-spectrum prediction.
pub fn verify_cmv_simplicity(w: &CMVWindow, tols: &HarnessTols) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("thm51");
    rb.digest("j_min", w.j_min());
    rb.digest("j_max", w.j_max());
    rb.digest("window_fingerprint", fingerprint(w.to_text().as_bytes()));

    let dec = decouple_cmv(w, -1)?;
    let full = materialize_cmv(w)?;

    let dev = dec.rank_one_deviation();
    // Spectral norm of a unitary is 1, so the relative bound is absolute here.
    rb.push(
        "difference_sigma2",
        dev.sigma2_bound,
        tols.rank_one,
        CheckCmp::Le,
    );
    rb.push("difference_sigma1", dev.sigma1, 0.0, CheckCmp::Info);
    rb.push(
        "decoupled_unitarity",
        dec.decoupled.matrix().unitary_residual(),
        tols.rank_one,
        CheckCmp::Le,
    );

    // Kernel vector of the severed coupling: right singular vector of the
    // difference; its half projections must be cyclic for the blocks.
    let (_, _, v_vec) = leading_singular_triple(dec.difference.matrix());
    let left = dec.left_block()?;
    let right = dec.right_block()?;
    let v_left = v_vec[..dec.split].to_vec();
    let v_right = v_vec[dec.split..].to_vec();
    let kl = krylov_dimension(&left, &v_left, tols.krylov)?;
    let kr = krylov_dimension(&right, &v_right, tols.krylov)?;
    rb.push(
        "left_kernel_projection_cyclic_dim",
        kl as f64,
        left.dim() as f64,
        CheckCmp::Eq,
    );
    rb.push(
        "right_kernel_projection_cyclic_dim",
        kr as f64,
        right.dim() as f64,
        CheckCmp::Eq,
    );

    let eig_full = eigendecompose(&full, tols.eigen)?;
    simplicity_checks(&mut rb, "e", &eig_full, tols);

    let eig_l = eigendecompose(&left, tols.eigen)?;
    let eig_r = eigendecompose(&right, tols.eigen)?;
    let nl = crate::matrix::normalize(&v_left);
    let nr = crate::matrix::normalize(&v_right);
    let (nl, nr) = match (nl, nr) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Ok(rb.finish_with(
                ReportStatus::InconclusivePrecondition,
                "kernel vector has a vanishing half projection".to_string(),
            ))
        }
    };
    let mu1 = spectral_measure(&eig_l, &nl, tols.gap_rel * eig_l.diameter().max(1e-300))?;
    let mu2 = spectral_measure(&eig_r, &nr, tols.gap_rel * eig_r.diameter().max(1e-300))?;

    let eig_split = eigendecompose(&dec.decoupled, tols.eigen)?;
    let diam = joint_diameter(&eig_full, &eig_split).max(1e-300);
    let tol = tols.gap_rel * diam;
    let partition = support_partition(&mu1, &mu2, tol)?;

    common_atoms_checks(&mut rb, &eig_full, &eig_split, &partition.common, tol);

    // Unitary persistence prediction. The full operator is the severed one
    // composed with a rank-one multiplicative factor that rotates the kernel
    // vector by `lc`; its eigenvalues z satisfy F(z) = (lc + 1)/(1 - lc) for
    // the Caratheodory function of the kernel vector's measure, so a severed
    // eigenvalue carrying weight w0 persists with shift about
    // 2 w0 / |kappa - F_rest|.
    let full_phi = full.matrix().matvec(&v_vec);
    let split_phi = dec.decoupled.matrix().matvec(&v_vec);
    let rotation = dot(&split_phi, &full_phi);
    let one = Complex64::new(1.0, 0.0);
    let kappa = if (one - rotation).norm() < 1e-12 {
        None // no effective coupling on the kernel vector
    } else {
        Some((rotation + one) / (one - rotation))
    };
    let mu_kernel = spectral_measure(
        &eig_split,
        &v_vec,
        tols.gap_rel * eig_split.diameter().max(1e-300),
    )?;

    let mut unexplained = 0usize;
    let mut worst_predicted = 0.0f64;
    for e in &eig_split.values {
        let near_full = eig_full.values.iter().any(|v| (v - e).norm() <= tol);
        if !near_full {
            continue;
        }
        if partition.common.iter().any(|x| (x - e).norm() <= 2.0 * tol) {
            continue;
        }
        unexplained += 1;
        let Some(kappa) = kappa else { continue };
        let mut w0 = 0.0f64;
        let mut rest = C_ZERO;
        for &(x, w) in &mu_kernel.atoms {
            if (x - e).norm() <= tol {
                w0 += w;
            } else {
                rest += w * (x + e) / (x - e);
            }
        }
        let denom = (kappa - rest).norm().max(SECULAR_DENOM_FLOOR);
        worst_predicted = worst_predicted.max(2.0 * w0 / denom);
    }
    rb.push(
        "unexplained_coincidences",
        unexplained as f64,
        0.0,
        CheckCmp::Info,
    );
    rb.push(
        "coincidence_predicted_shift_max",
        worst_predicted,
        tols.visibility_factor * tol,
        CheckCmp::Le,
    );

    Ok(rb.finish())
}
