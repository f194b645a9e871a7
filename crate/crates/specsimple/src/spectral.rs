//! Eigendecomposition contracts, atomic spectral measures, cyclicity, support
//! partitions, and the Borel / Caratheodory / Schur transforms.
//!
//! Everything here is the finite carrier of the spectral theorem: spectra are
//! finite atom sets, spectral measures are weighted sums of point masses, and
//! cyclicity is a Krylov dimension. The two transform conventions are pinned
//! once here:
//!
//! - real line: `F(z) = sum w_k / (x_k - z)`, so the rank-one eigenvalue
//!   equation reads `F(E) = -1/lambda`;
//! - unit circle: `F(z) = sum w_k (x_k + z) / (x_k - z)` for a unit-mass
//!   measure, with the Schur function `g = (F - 1) / (z (F + 1))`.

use num_complex::Complex64;

use crate::eig::{hermitian_eigen, unitary_eigen};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm, CMatrix, C_ONE, C_ZERO};
use crate::operator::{DenseOperator, OperatorKind};

/// Default orthonormality budget for eigenvector matrices.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Full eigendecomposition of a selfadjoint or unitary dense operator.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Sorted eigenvalues: ascending real values (zero imaginary part) for
    /// selfadjoint input, unimodular values by argument in `[0, 2pi)` for
    /// unitary input.
    pub values: Vec<Complex64>,
    /// Orthonormal eigenvectors, one column per eigenvalue.
    pub vectors: CMatrix,
    /// max_k |M v_k - E_k v_k|.
    pub residual: f64,
    /// max entry of |V^* V - I|.
    pub orthonormality: f64,
    pub kind: OperatorKind,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Largest pairwise distance between eigenvalues.
    pub fn diameter(&self) -> f64 {
        diameter(&self.values)
    }
}

pub fn diameter(values: &[Complex64]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            d = d.max((values[i] - values[j]).norm());
        }
    }
    d
}

/// Decompose a selfadjoint or unitary operator and validate the contract:
/// per-vector residual within `tol * max(1, |M|_inf)` and orthonormality
/// within [`ORTHONORMALITY_TOL`]. General-kind operators are rejected.
pub fn eigendecompose(m: &DenseOperator, tol: f64) -> Result<EigenDecomposition> {
    let (values, vectors) = match m.kind() {
        OperatorKind::Selfadjoint => {
            let (w, v) = hermitian_eigen(m.matrix())?;
            (
                w.into_iter()
                    .map(|x| Complex64::new(x, 0.0))
                    .collect::<Vec<_>>(),
                v,
            )
        }
        OperatorKind::Unitary => unitary_eigen(m.matrix())?,
        OperatorKind::General => {
            return Err(Error::KindMismatch {
                expected: "selfadjoint or unitary",
                got: "general",
            })
        }
    };

    let n = m.dim();
    let mv = m.matrix().mul(&vectors);
    let mut residual = 0.0f64;
    for k in 0..n {
        let mut acc = 0.0f64;
        for r in 0..n {
            acc += (mv.get(r, k) - values[k] * vectors.get(r, k)).norm_sqr();
        }
        residual = residual.max(acc.sqrt());
    }
    let requested = tol * m.matrix().inf_norm().max(1.0);
    if residual > requested {
        return Err(Error::ResidualAboveTolerance {
            what: "residual",
            achieved: residual,
            requested,
        });
    }
    let orthonormality = vectors.unitary_residual();
    if orthonormality > ORTHONORMALITY_TOL {
        return Err(Error::ResidualAboveTolerance {
            what: "orthonormality defect",
            achieved: orthonormality,
            requested: ORTHONORMALITY_TOL,
        });
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        residual,
        orthonormality,
        kind: m.kind(),
    })
}

// ---------------------------------------------------------------------------
// atomic measures

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    RealLine,
    UnitCircle,
}

impl MeasureKind {
    pub fn name(&self) -> &'static str {
        match self {
            MeasureKind::RealLine => "real-line",
            MeasureKind::UnitCircle => "unit-circle",
        }
    }
}

/// Finitely many (location, weight) atoms; the finite-scale stand-in for a
/// spectral measure. Total weight is the squared norm of the defining vector
/// up to the dropped mass recorded in `discarded_mass`.
#[derive(Debug, Clone)]
pub struct AtomicSpectralMeasure {
    pub atoms: Vec<(Complex64, f64)>,
    pub kind: MeasureKind,
    pub discarded_mass: f64,
}

impl AtomicSpectralMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.atoms.iter().map(|(x, _)| *x).collect()
    }

    /// CSV serialization: a kind header line, a column header, then one row
    /// per atom, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = format!("kind,{}\n", self.kind.name());
        s.push_str("location_re,location_im,weight\n");
        for (x, w) in &self.atoms {
            s.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", x.re, x.im, w));
        }
        s
    }
}

/// Default merge / gap tolerance: 1e-8 times the spectral diameter (floored
/// at machine scale so degenerate one-point spectra stay usable).
pub fn default_cluster_tol(d: &EigenDecomposition) -> f64 {
    1e-8 * d.diameter().max(1e-300)
}

/// Group sorted-or-circular eigenvalues into runs of chordal distance below
/// `tol`. Returns index groups in the decomposition's eigenvalue order.
fn cluster_indices(values: &[Complex64], kind: OperatorKind, tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize];
    for i in 1..n {
        if (values[i] - values[i - 1]).norm() <= tol {
            current.push(i);
        } else {
            groups.push(std::mem::take(&mut current));
            current = vec![i];
        }
    }
    groups.push(current);
    // On the circle the order wraps around; merge the end groups when the
    // wrap gap is small.
    if kind == OperatorKind::Unitary && groups.len() > 1 {
        let first = &groups[0];
        let last = groups.last().unwrap();
        let gap = (values[first[0]] - values[*last.last().unwrap()]).norm();
        if gap <= tol {
            let tail = groups.pop().unwrap();
            groups[0].splice(0..0, tail);
        }
    }
    groups
}

/// Spectral measure of `phi` with respect to a decomposed operator:
/// eigenvalues are clustered within `merge_tol`, each cluster becomes one
/// atom at the weight-averaged location with weight `sum |<v_k, phi>|^2`.
/// Atoms not exceeding `weight_floor` are dropped into `discarded_mass`.
pub fn spectral_measure_with_floor(
    d: &EigenDecomposition,
    phi: &[Complex64],
    merge_tol: f64,
    weight_floor: f64,
) -> Result<AtomicSpectralMeasure> {
    if phi.len() != d.dim() {
        return Err(Error::DimensionMismatch {
            dim: d.dim(),
            len: phi.len(),
        });
    }
    let kind = match d.kind {
        OperatorKind::Selfadjoint => MeasureKind::RealLine,
        OperatorKind::Unitary => MeasureKind::UnitCircle,
        OperatorKind::General => {
            return Err(Error::KindMismatch {
                expected: "selfadjoint or unitary",
                got: "general",
            })
        }
    };
    let overlaps: Vec<f64> = (0..d.dim())
        .map(|k| dot(&d.vectors.column(k), phi).norm_sqr())
        .collect();
    let mut atoms = Vec::new();
    let mut discarded = 0.0f64;
    for group in cluster_indices(&d.values, d.kind, merge_tol) {
        let weight: f64 = group.iter().map(|&k| overlaps[k]).sum();
        if weight <= weight_floor {
            discarded += weight;
            continue;
        }
        let mut loc = C_ZERO;
        for &k in &group {
            loc += overlaps[k] * d.values[k];
        }
        atoms.push((loc / weight, weight));
    }
    Ok(AtomicSpectralMeasure {
        atoms,
        kind,
        discarded_mass: discarded,
    })
}

/// [`spectral_measure_with_floor`] with the default floor
/// `1e-12 * |phi|^2`.
pub fn spectral_measure(
    d: &EigenDecomposition,
    phi: &[Complex64],
    merge_tol: f64,
) -> Result<AtomicSpectralMeasure> {
    let floor = 1e-12 * norm(phi).powi(2);
    spectral_measure_with_floor(d, phi, merge_tol, floor)
}

// ---------------------------------------------------------------------------
// cyclicity

/// Dimension of span{phi, M phi, M^2 phi, ...}, computed by orthogonalization
/// with relative rank cutoff `tol`. The vector is cyclic iff the result
/// equals the dimension.
///
/// Nonnegative powers suffice for the unitary kind too: on a finite carrier
/// the inverse of an invertible matrix is a polynomial in the matrix, so the
/// generated invariant subspace is the same.
pub fn krylov_dimension(m: &DenseOperator, phi: &[Complex64], tol: f64) -> Result<usize> {
    if phi.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            dim: m.dim(),
            len: phi.len(),
        });
    }
    let start = crate::matrix::normalize(phi).ok_or(Error::ZeroVector)?;
    let scale = m.matrix().inf_norm().max(1.0);
    let cutoff = tol * scale;
    let n = m.dim();
    let mut basis: Vec<Vec<Complex64>> = vec![start];
    while basis.len() < n {
        let mut w = m.matrix().matvec(basis.last().unwrap());
        // Two-pass orthogonalization keeps the basis orthonormal to roundoff.
        for _ in 0..2 {
            for q in &basis {
                let p = dot(q, &w);
                crate::matrix::axpy_neg(&mut w, p, q);
            }
        }
        let r = norm(&w);
        if r <= cutoff {
            break;
        }
        basis.push(w.into_iter().map(|z| z / r).collect());
    }
    Ok(basis.len())
}

/// Orthonormal basis of the Krylov subspace, same process as
/// [`krylov_dimension`].
pub fn krylov_basis(m: &DenseOperator, phi: &[Complex64], tol: f64) -> Result<Vec<Vec<Complex64>>> {
    if phi.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            dim: m.dim(),
            len: phi.len(),
        });
    }
    let start = crate::matrix::normalize(phi).ok_or(Error::ZeroVector)?;
    let scale = m.matrix().inf_norm().max(1.0);
    let cutoff = tol * scale;
    let n = m.dim();
    let mut basis: Vec<Vec<Complex64>> = vec![start];
    while basis.len() < n {
        let mut w = m.matrix().matvec(basis.last().unwrap());
        for _ in 0..2 {
            for q in &basis {
                let p = dot(q, &w);
                crate::matrix::axpy_neg(&mut w, p, q);
            }
        }
        let r = norm(&w);
        if r <= cutoff {
            break;
        }
        basis.push(w.into_iter().map(|z| z / r).collect());
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// support partition

/// Disjoint split of two atom supports: locations carrying weight in both
/// measures, locations seen only by the second, and locations seen only by
/// the first.
#[derive(Debug, Clone)]
pub struct SupportPartition {
    /// Locations with positive weight in both measures (weight-averaged).
    pub common: Vec<Complex64>,
    /// Locations carrying weight only in the second measure.
    pub second_only: Vec<Complex64>,
    /// Locations carrying weight only in the first measure.
    pub first_only: Vec<Complex64>,
}

/// Match the atoms of two measures within `match_tol`. Each atom may match at
/// most one atom of the other measure; a double match is an error asking for
/// a smaller merge tolerance upstream.
pub fn support_partition(
    mu1: &AtomicSpectralMeasure,
    mu2: &AtomicSpectralMeasure,
    match_tol: f64,
) -> Result<SupportPartition> {
    if mu1.kind != mu2.kind {
        return Err(Error::MeasureKindMismatch {
            expected: mu1.kind.name(),
            got: mu2.kind.name(),
        });
    }
    let mut matched2 = vec![false; mu2.atoms.len()];
    let mut common = Vec::new();
    let mut first_only = Vec::new();
    for &(x1, w1) in &mu1.atoms {
        let hits: Vec<usize> = mu2
            .atoms
            .iter()
            .enumerate()
            .filter(|(_, (x2, _))| (x1 - x2).norm() <= match_tol)
            .map(|(j, _)| j)
            .collect();
        match hits.len() {
            0 => first_only.push(x1),
            1 => {
                let j = hits[0];
                if matched2[j] {
                    let (x2, _) = mu2.atoms[j];
                    return Err(Error::AmbiguousMatch {
                        location_re: x2.re,
                        location_im: x2.im,
                        tol: match_tol,
                        count: 2,
                    });
                }
                matched2[j] = true;
                let (x2, w2) = mu2.atoms[j];
                common.push((w1 * x1 + w2 * x2) / (w1 + w2));
            }
            k => {
                return Err(Error::AmbiguousMatch {
                    location_re: x1.re,
                    location_im: x1.im,
                    tol: match_tol,
                    count: k,
                })
            }
        }
    }
    let second_only = mu2
        .atoms
        .iter()
        .zip(&matched2)
        .filter(|(_, &m)| !m)
        .map(|((x, _), _)| *x)
        .collect();
    Ok(SupportPartition {
        common,
        second_only,
        first_only,
    })
}

// ---------------------------------------------------------------------------
// transforms

/// Borel transform of a real-line measure: `F(z) = sum w_k / (x_k - z)`.
/// Herglotz: the imaginary part is positive on the upper half plane.
pub fn borel_transform(
    mu: &AtomicSpectralMeasure,
    z: Complex64,
    pole_guard: f64,
) -> Result<Complex64> {
    if mu.kind != MeasureKind::RealLine {
        return Err(Error::MeasureKindMismatch {
            expected: "real-line",
            got: mu.kind.name(),
        });
    }
    let mut f = C_ZERO;
    for &(x, w) in &mu.atoms {
        let denom = x - z;
        if denom.norm() <= pole_guard {
            return Err(Error::PoleProximity {
                distance: denom.norm(),
                location_re: x.re,
                location_im: x.im,
            });
        }
        f += w / denom;
    }
    Ok(f)
}

/// Caratheodory transform of a unit-mass circle measure:
/// `F(z) = sum w_k (x_k + z)/(x_k - z)`, with `F(0) = 1` and positive real
/// part on the open disc.
pub fn caratheodory(mu: &AtomicSpectralMeasure, z: Complex64) -> Result<Complex64> {
    if mu.kind != MeasureKind::UnitCircle {
        return Err(Error::MeasureKindMismatch {
            expected: "unit-circle",
            got: mu.kind.name(),
        });
    }
    if z.norm() >= 1.0 {
        return Err(Error::BadEvaluationPoint {
            reason: format!("|z| = {} >= 1", z.norm()),
        });
    }
    let mass = mu.total_mass();
    if (mass - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { mass });
    }
    let mut f = C_ZERO;
    for &(x, w) in &mu.atoms {
        f += w * (x + z) / (x - z);
    }
    Ok(f)
}

/// Schur function of a unit-mass circle measure:
/// `g(z) = (F(z) - 1) / (z (F(z) + 1))` for `0 < |z| < 1`; `|g| <= 1`.
pub fn schur_function(mu: &AtomicSpectralMeasure, z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::BadEvaluationPoint {
            reason: "z = 0 is excluded".into(),
        });
    }
    let f = caratheodory(mu, z)?;
    let denom = z * (f + C_ONE);
    if denom.norm() == 0.0 {
        // Impossible for positive-real-part F; guarded anyway.
        return Err(Error::BadEvaluationPoint {
            reason: "F(z) = -1".into(),
        });
    }
    Ok((f - C_ONE) / denom)
}

// ---------------------------------------------------------------------------
// multiplicity

/// Cluster structure of a computed spectrum.
#[derive(Debug, Clone)]
pub struct MultiplicityProfile {
    /// (location, multiplicity), ordered as the underlying eigenvalues.
    pub clusters: Vec<(Complex64, usize)>,
    /// Minimum pairwise distance between cluster locations; infinite when
    /// there are fewer than two clusters.
    pub min_gap: f64,
    /// True iff every cluster has multiplicity one.
    pub is_simple: bool,
}

/// Cluster eigenvalues within `gap_tol` and report multiplicities.
pub fn multiplicity_profile(d: &EigenDecomposition, gap_tol: f64) -> MultiplicityProfile {
    let groups = cluster_indices(&d.values, d.kind, gap_tol);
    let clusters: Vec<(Complex64, usize)> = groups
        .iter()
        .map(|g| {
            let mut loc = C_ZERO;
            for &k in g {
                loc += d.values[k];
            }
            (loc / g.len() as f64, g.len())
        })
        .collect();
    let mut min_gap = f64::INFINITY;
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            min_gap = min_gap.min((clusters[i].0 - clusters[j].0).norm());
        }
    }
    let is_simple = clusters.iter().all(|&(_, m)| m == 1);
    MultiplicityProfile {
        clusters,
        min_gap,
        is_simple,
    }
}
