//! Operator families and their finite dense carriers.
//!
//! A [`JacobiWindow`] is a finite window of a two-sided Jacobi operator: real
//! diagonal `b_n` and positive off-diagonal `a_n` over an integer site range.
//! A [`CMVWindow`] is a finite window of Verblunsky coefficients in the open
//! unit disc; the truncation is closed with unimodular boundary values so the
//! finite matrix is exactly unitary. Both materialize into a
//! [`DenseOperator`], a plain square complex matrix carrying a kind tag and
//! site labels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{norm, CMatrix, C_ONE, C_ZERO};
use crate::rng::SeededRng;

/// Tolerance used when validating the kind tag of a dense operator.
pub const KIND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Selfadjoint,
    Unitary,
    General,
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Selfadjoint => "selfadjoint",
            OperatorKind::Unitary => "unitary",
            OperatorKind::General => "general",
        }
    }
}

/// A finite square matrix with a kind tag and site-index labels.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    mat: CMatrix,
    kind: OperatorKind,
    site_labels: Vec<i64>,
}

impl DenseOperator {
    /// Validating constructor: checks squareness via `CMatrix`, strictly
    /// increasing labels of matching length, and the kind invariant
    /// (Hermiticity or unitarity residual within [`KIND_TOL`]).
    pub fn new(mat: CMatrix, kind: OperatorKind, site_labels: Vec<i64>) -> Result<Self> {
        if site_labels.len() != mat.dim() {
            return Err(Error::BadSiteLabels);
        }
        if site_labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadSiteLabels);
        }
        let op = Self {
            mat,
            kind,
            site_labels,
        };
        let residual = op.kind_residual();
        let limit = op.kind_limit();
        if residual > limit {
            return Err(Error::KindViolation {
                kind: kind.name(),
                residual,
                limit,
            });
        }
        Ok(op)
    }

    /// Constructor for matrices whose kind holds exactly by construction
    /// (assembled entrywise, e.g. tridiagonal from window data).
    pub(crate) fn assemble(mat: CMatrix, kind: OperatorKind, site_labels: Vec<i64>) -> Self {
        debug_assert_eq!(site_labels.len(), mat.dim());
        Self {
            mat,
            kind,
            site_labels,
        }
    }

    pub fn with_default_labels(mat: CMatrix, kind: OperatorKind) -> Result<Self> {
        let n = mat.dim() as i64;
        Self::new(mat, kind, (0..n).collect())
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn site_labels(&self) -> &[i64] {
        &self.site_labels
    }

    /// Measured violation of the tagged kind: max |M - M^*| entry for
    /// selfadjoint, max |M^* M - I| entry for unitary, zero for general.
    pub fn kind_residual(&self) -> f64 {
        match self.kind {
            OperatorKind::Selfadjoint => self.mat.hermitian_residual(),
            OperatorKind::Unitary => self.mat.unitary_residual(),
            OperatorKind::General => 0.0,
        }
    }

    fn kind_limit(&self) -> f64 {
        match self.kind {
            OperatorKind::Selfadjoint => KIND_TOL * (1.0 + self.mat.max_abs()),
            OperatorKind::Unitary => KIND_TOL,
            OperatorKind::General => f64::INFINITY,
        }
    }

    /// Block direct sum. Site labels are kept when the two label ranges stay
    /// strictly increasing end to end; otherwise both operands are relabeled
    /// 0..n-1.
    pub fn direct_sum(&self, other: &DenseOperator) -> Result<DenseOperator> {
        let kind = if self.kind == other.kind {
            self.kind
        } else {
            OperatorKind::General
        };
        let mat = self.mat.direct_sum(&other.mat);
        let labels_ok = match (self.site_labels.last(), other.site_labels.first()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        };
        let labels: Vec<i64> = if labels_ok {
            self.site_labels
                .iter()
                .chain(other.site_labels.iter())
                .copied()
                .collect()
        } else {
            (0..mat.dim() as i64).collect()
        };
        DenseOperator::new(mat, kind, labels)
    }
}

/// A rank-one coupling `lambda <phi, .> phi` (selfadjoint use) or the datum
/// of a rank-one unitary multiplier (unitary use).
#[derive(Debug, Clone)]
pub struct RankOneCoupling {
    pub phi: Vec<Complex64>,
    pub lambda: Complex64,
}

impl RankOneCoupling {
    pub fn new(phi: Vec<Complex64>, lambda: Complex64) -> Result<Self> {
        if norm(&phi) == 0.0 {
            return Err(Error::ZeroVector);
        }
        if lambda == C_ZERO {
            return Err(Error::BadCoupling {
                expected: "nonzero",
                got: "0".into(),
            });
        }
        Ok(Self { phi, lambda })
    }
}

// ---------------------------------------------------------------------------
// Jacobi windows

/// Finite window of a two-sided Jacobi operator.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiWindow {
    n_min: i64,
    n_max: i64,
    b: Vec<f64>,
    a: Vec<f64>,
}

impl JacobiWindow {
    /// `b` holds the diagonal over sites `n_min..=n_max`; `a` holds the
    /// positive couplings, `a[i]` joining site `n_min+i` to `n_min+i+1`.
    pub fn new(n_min: i64, n_max: i64, b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if n_max < n_min {
            return Err(Error::BadSiteRange {
                n_min,
                n_max,
                reason: "empty range".into(),
            });
        }
        let len = (n_max - n_min + 1) as usize;
        if b.len() != len {
            return Err(Error::BadSiteRange {
                n_min,
                n_max,
                reason: format!("expected {len} diagonal values, got {}", b.len()),
            });
        }
        if a.len() + 1 != len {
            return Err(Error::BadSiteRange {
                n_min,
                n_max,
                reason: format!("expected {} couplings, got {}", len - 1, a.len()),
            });
        }
        for (i, &v) in a.iter().enumerate() {
            if !(v > 0.0) {
                return Err(Error::NonPositiveOffDiagonal {
                    index: n_min + i as i64,
                    value: v,
                });
            }
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadSiteRange {
                n_min,
                n_max,
                reason: "non-finite diagonal".into(),
            });
        }
        Ok(Self { n_min, n_max, b, a })
    }

    pub fn free(n_min: i64, n_max: i64) -> Result<Self> {
        let len = (n_max - n_min + 1).max(0) as usize;
        Self::new(
            n_min,
            n_max,
            vec![0.0; len],
            vec![1.0; len.saturating_sub(1)],
        )
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        false // validated nonempty
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.b
    }

    pub fn couplings(&self) -> &[f64] {
        &self.a
    }

    pub fn b_at(&self, site: i64) -> f64 {
        self.b[(site - self.n_min) as usize]
    }

    /// Coupling between `site` and `site + 1`.
    pub fn a_at(&self, site: i64) -> f64 {
        self.a[(site - self.n_min) as usize]
    }

    /// sup(|a_n| + |b_n|), the window's norm estimate.
    pub fn norm_estimate(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let left = if i > 0 { self.a[i - 1] } else { 0.0 };
                let right = if i < self.a.len() { self.a[i] } else { 0.0 };
                left + self.b[i].abs() + right
            })
            .fold(0.0, f64::max)
    }

    /// Plain-text serialization: header `jacobi n_min n_max`, then one
    /// `index value` line per diagonal entry, then one per coupling.
    pub fn to_text(&self) -> String {
        let mut s = format!("jacobi {} {}\n", self.n_min, self.n_max);
        for (i, v) in self.b.iter().enumerate() {
            s.push_str(&format!("{} {:.16e}\n", self.n_min + i as i64, v));
        }
        for (i, v) in self.a.iter().enumerate() {
            s.push_str(&format!("{} {:.16e}\n", self.n_min + i as i64, v));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (lineno, header) = lines.next().ok_or(Error::ParseError {
            line: 0,
            reason: "empty file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "jacobi" {
            return Err(Error::ParseError {
                line: lineno,
                reason: "expected `jacobi n_min n_max`".into(),
            });
        }
        let n_min = parse_i64(fields[1], lineno)?;
        let n_max = parse_i64(fields[2], lineno)?;
        if n_max < n_min {
            return Err(Error::ParseError {
                line: lineno,
                reason: "empty site range".into(),
            });
        }
        let len = (n_max - n_min + 1) as usize;
        let mut b = Vec::with_capacity(len);
        let mut a = Vec::with_capacity(len - 1);
        for k in 0..(2 * len - 1) {
            let (lineno, line) = lines.next().ok_or(Error::ParseError {
                line: 0,
                reason: "unexpected end of file".into(),
            })?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 {
                return Err(Error::ParseError {
                    line: lineno,
                    reason: "expected `index value`".into(),
                });
            }
            let idx = parse_i64(f[0], lineno)?;
            let expect = n_min + (if k < len { k } else { k - len }) as i64;
            if idx != expect {
                return Err(Error::ParseError {
                    line: lineno,
                    reason: format!("expected index {expect}, got {idx}"),
                });
            }
            let v = parse_f64(f[1], lineno)?;
            if k < len {
                b.push(v);
            } else {
                a.push(v);
            }
        }
        if lines.next().is_some() {
            return Err(Error::ParseError {
                line: 0,
                reason: "trailing content".into(),
            });
        }
        Self::new(n_min, n_max, b, a)
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_i64(s: &str, line: usize) -> Result<i64> {
    s.parse().map_err(|_| Error::ParseError {
        line,
        reason: format!("bad integer `{s}`"),
    })
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|_| Error::ParseError {
        line,
        reason: format!("bad float `{s}`"),
    })
}

/// Dense tridiagonal carrier of a Jacobi window.
pub fn materialize_jacobi(w: &JacobiWindow) -> DenseOperator {
    let n = w.len();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, Complex64::new(w.b[i], 0.0));
        if i + 1 < n {
            let a = Complex64::new(w.a[i], 0.0);
            m.set(i, i + 1, a);
            m.set(i + 1, i, a);
        }
    }
    let labels: Vec<i64> = (w.n_min..=w.n_max).collect();
    DenseOperator::assemble(m, OperatorKind::Selfadjoint, labels)
}

// ---------------------------------------------------------------------------
// CMV windows

/// Finite window of Verblunsky coefficients with unimodular closures.
#[derive(Debug, Clone, PartialEq)]
pub struct CMVWindow {
    j_min: i64,
    j_max: i64,
    alpha: Vec<Complex64>,
    boundary_left: Complex64,
    boundary_right: Complex64,
}

impl CMVWindow {
    /// `alpha[k]` is the coefficient at index `j_min + k`, for
    /// `j_min <= j < j_max`; both cut indices must be even. Note the top odd
    /// coefficient never enters the truncated matrix: the block it would
    /// parametrize straddles the cut and is replaced by the closures.
    pub fn new(
        j_min: i64,
        j_max: i64,
        alpha: Vec<Complex64>,
        boundary_left: Complex64,
        boundary_right: Complex64,
    ) -> Result<Self> {
        if j_min % 2 != 0 || j_max % 2 != 0 {
            return Err(Error::BadSiteRange {
                n_min: j_min,
                n_max: j_max,
                reason: "cut indices must be even".into(),
            });
        }
        if j_max - j_min < 2 {
            return Err(Error::BadSiteRange {
                n_min: j_min,
                n_max: j_max,
                reason: "window must span at least two indices".into(),
            });
        }
        let len = (j_max - j_min) as usize;
        if alpha.len() != len {
            return Err(Error::BadSiteRange {
                n_min: j_min,
                n_max: j_max,
                reason: format!("expected {len} coefficients, got {}", alpha.len()),
            });
        }
        for (k, a) in alpha.iter().enumerate() {
            if !(a.norm() < 1.0) {
                return Err(Error::VerblunskyOutOfDisc {
                    index: j_min + k as i64,
                    modulus: a.norm(),
                });
            }
        }
        for bnd in [boundary_left, boundary_right] {
            if (bnd.norm() - 1.0).abs() > KIND_TOL {
                return Err(Error::BoundaryNotUnimodular {
                    modulus: bnd.norm(),
                });
            }
        }
        Ok(Self {
            j_min,
            j_max,
            alpha,
            boundary_left,
            boundary_right,
        })
    }

    pub fn j_min(&self) -> i64 {
        self.j_min
    }

    pub fn j_max(&self) -> i64 {
        self.j_max
    }

    pub fn dim(&self) -> usize {
        (self.j_max - self.j_min) as usize
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn alpha_at(&self, j: i64) -> Complex64 {
        self.alpha[(j - self.j_min) as usize]
    }

    pub fn boundary_left(&self) -> Complex64 {
        self.boundary_left
    }

    pub fn boundary_right(&self) -> Complex64 {
        self.boundary_right
    }

    /// Plain-text serialization: header
    /// `cmv j_min j_max bl_re bl_im br_re br_im`, then `index re im` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "cmv {} {} {:.16e} {:.16e} {:.16e} {:.16e}\n",
            self.j_min,
            self.j_max,
            self.boundary_left.re,
            self.boundary_left.im,
            self.boundary_right.re,
            self.boundary_right.im,
        );
        for (k, a) in self.alpha.iter().enumerate() {
            s.push_str(&format!(
                "{} {:.16e} {:.16e}\n",
                self.j_min + k as i64,
                a.re,
                a.im
            ));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (lineno, header) = lines.next().ok_or(Error::ParseError {
            line: 0,
            reason: "empty file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 7 || fields[0] != "cmv" {
            return Err(Error::ParseError {
                line: lineno,
                reason: "expected `cmv j_min j_max bl_re bl_im br_re br_im`".into(),
            });
        }
        let j_min = parse_i64(fields[1], lineno)?;
        let j_max = parse_i64(fields[2], lineno)?;
        let bl = Complex64::new(parse_f64(fields[3], lineno)?, parse_f64(fields[4], lineno)?);
        let br = Complex64::new(parse_f64(fields[5], lineno)?, parse_f64(fields[6], lineno)?);
        if j_max <= j_min {
            return Err(Error::ParseError {
                line: lineno,
                reason: "empty index range".into(),
            });
        }
        let len = (j_max - j_min) as usize;
        let mut alpha = Vec::with_capacity(len);
        for k in 0..len {
            let (lineno, line) = lines.next().ok_or(Error::ParseError {
                line: 0,
                reason: "unexpected end of file".into(),
            })?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::ParseError {
                    line: lineno,
                    reason: "expected `index re im`".into(),
                });
            }
            let idx = parse_i64(f[0], lineno)?;
            if idx != j_min + k as i64 {
                return Err(Error::ParseError {
                    line: lineno,
                    reason: format!("expected index {}, got {idx}", j_min + k as i64),
                });
            }
            alpha.push(Complex64::new(
                parse_f64(f[1], lineno)?,
                parse_f64(f[2], lineno)?,
            ));
        }
        if lines.next().is_some() {
            return Err(Error::ParseError {
                line: 0,
                reason: "trailing content".into(),
            });
        }
        Self::new(j_min, j_max, alpha, bl, br)
    }
}

/// The 2x2 unitary building block `[[conj(a), rho], [rho, -a]]` with
/// `rho = sqrt(1 - |a|^2)`. Defined on the closed disc; on the boundary the
/// block degenerates to a diagonal phase pair.
pub fn theta_block(alpha: Complex64) -> Result<CMatrix> {
    let m2 = alpha.norm_sqr();
    if m2 > 1.0 {
        return Err(Error::ThetaOutOfRange {
            modulus: alpha.norm(),
        });
    }
    let rho = (1.0 - m2).max(0.0).sqrt();
    let mut t = CMatrix::zeros(2);
    t.set(0, 0, alpha.conj());
    t.set(0, 1, Complex64::new(rho, 0.0));
    t.set(1, 0, Complex64::new(rho, 0.0));
    t.set(1, 1, -alpha);
    Ok(t)
}

/// Index bookkeeping for the two block factors of a CMV window.
///
/// The even-index factor carries one theta block per coordinate pair
/// `(2n, 2n+1)`; since the cut indices are even it tiles the window exactly.
/// The odd-index factor carries theta blocks on pairs `(2n+1, 2n+2)` and
/// closes the two leftover edge coordinates with the unimodular boundary
/// scalars.
fn cmv_factors(w: &CMVWindow) -> (CMatrix, CMatrix) {
    let n = w.dim();
    let mut even = CMatrix::zeros(n);
    let mut odd = CMatrix::zeros(n);
    let mut j = w.j_min;
    while j < w.j_max {
        let off = (j - w.j_min) as usize;
        let t = theta_block(w.alpha_at(j)).expect("window coefficients are interior");
        even.place_block(off, &t);
        j += 2;
    }
    odd.set(0, 0, w.boundary_left());
    odd.set(n - 1, n - 1, w.boundary_right());
    let mut j = w.j_min + 1;
    while j + 1 < w.j_max {
        let off = (j - w.j_min) as usize;
        let t = theta_block(w.alpha_at(j)).expect("window coefficients are interior");
        odd.place_block(off, &t);
        j += 2;
    }
    (odd, even)
}

/// Materialize the window as the product of its odd and even block factors.
/// The result is unitary up to the kind tolerance (it is a product of exactly
/// unitary blocks, up to rounding in `rho`).
pub fn materialize_cmv(w: &CMVWindow) -> Result<DenseOperator> {
    let (odd, even) = cmv_factors(w);
    // Structure-aware product: rows of the result come from at most two rows
    // of the even factor, scaled by the 2x2 (or 1x1) odd block entries.
    let m = odd.mul(&even);
    let labels: Vec<i64> = (w.j_min..w.j_max).collect();
    DenseOperator::new(m, OperatorKind::Unitary, labels)
}

/// The two block factors of the window, in multiplication order
/// (odd-index factor times even-index factor).
pub fn cmv_block_factors(w: &CMVWindow) -> (CMatrix, CMatrix) {
    cmv_factors(w)
}

/// `base + lambda * phi phi^*` for real nonzero `lambda`.
pub fn apply_rank_one(base: &DenseOperator, coupling: &RankOneCoupling) -> Result<DenseOperator> {
    if base.kind() != OperatorKind::Selfadjoint {
        return Err(Error::KindMismatch {
            expected: "selfadjoint",
            got: base.kind().name(),
        });
    }
    if coupling.lambda.im != 0.0 || coupling.lambda.re == 0.0 {
        return Err(Error::BadCoupling {
            expected: "real nonzero",
            got: format!("{}", coupling.lambda),
        });
    }
    if coupling.phi.len() != base.dim() {
        return Err(Error::DimensionMismatch {
            dim: base.dim(),
            len: coupling.phi.len(),
        });
    }
    let mut m = base.matrix().clone();
    m.rank_one_update(coupling.lambda, &coupling.phi, &coupling.phi);
    DenseOperator::new(m, OperatorKind::Selfadjoint, base.site_labels().to_vec())
}

// ---------------------------------------------------------------------------
// seeded ensembles

/// Diagonal disorder `b_n` uniform on `[-coupling, coupling]`, free hopping.
pub fn anderson_jacobi(seed: u64, n_min: i64, n_max: i64, coupling: f64) -> Result<JacobiWindow> {
    if !(n_min <= -1 && 0 <= n_max) {
        return Err(Error::BadSiteRange {
            n_min,
            n_max,
            reason: "window must straddle the cut between sites -1 and 0".into(),
        });
    }
    if !(coupling >= 0.0) {
        return Err(Error::BadParameter(format!(
            "coupling must be nonnegative, got {coupling}"
        )));
    }
    let len = (n_max - n_min + 1) as usize;
    let mut rng = SeededRng::new(seed);
    let b: Vec<f64> = (0..len)
        .map(|_| rng.uniform_in(-coupling, coupling))
        .collect();
    JacobiWindow::new(n_min, n_max, b, vec![1.0; len - 1])
}

/// Verblunsky coefficients uniform on the disc of the given radius,
/// boundary closures 1.
pub fn random_verblunsky(seed: u64, j_min: i64, j_max: i64, radius: f64) -> Result<CMVWindow> {
    if !(0.0..1.0).contains(&radius) {
        return Err(Error::BadParameter(format!(
            "radius must lie in [0, 1), got {radius}"
        )));
    }
    let len = (j_max - j_min).max(0) as usize;
    let mut rng = SeededRng::new(seed);
    let alpha: Vec<Complex64> = (0..len).map(|_| rng.disc(radius)).collect();
    CMVWindow::new(j_min, j_max, alpha, C_ONE, C_ONE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_window_materializes_to_hopping_matrix() {
        let w = JacobiWindow::free(-2, 1).unwrap();
        let op = materialize_jacobi(&w);
        assert_eq!(op.dim(), 4);
        assert_eq!(op.site_labels(), &[-2, -1, 0, 1]);
        for i in 0..4usize {
            for j in 0..4usize {
                let expect = if i.abs_diff(j) == 1 { C_ONE } else { C_ZERO };
                assert_eq!(op.matrix().get(i, j), expect);
            }
        }
    }

    #[test]
    fn single_site_window() {
        let w = JacobiWindow::new(3, 3, vec![5.0], vec![]).unwrap();
        let op = materialize_jacobi(&w);
        assert_eq!(op.dim(), 1);
        assert_eq!(op.matrix().get(0, 0), c(5.0, 0.0));
    }

    #[test]
    fn two_site_window_matches_central_block() {
        let (bm1, b0, am1) = (0.25, -0.75, 1.5);
        let w = JacobiWindow::new(-1, 0, vec![bm1, b0], vec![am1]).unwrap();
        let op = materialize_jacobi(&w);
        assert_eq!(op.matrix().get(0, 0), c(bm1, 0.0));
        assert_eq!(op.matrix().get(0, 1), c(am1, 0.0));
        assert_eq!(op.matrix().get(1, 0), c(am1, 0.0));
        assert_eq!(op.matrix().get(1, 1), c(b0, 0.0));
    }

    #[test]
    fn rejects_nonpositive_coupling() {
        let err = JacobiWindow::new(-1, 1, vec![0.0; 3], vec![1.0, -0.5]).unwrap_err();
        match err {
            Error::NonPositiveOffDiagonal { index, value } => {
                assert_eq!(index, 0);
                assert_eq!(value, -0.5);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn theta_block_special_points() {
        let t0 = theta_block(C_ZERO).unwrap();
        assert_eq!(t0.get(0, 0), C_ZERO);
        assert_eq!(t0.get(0, 1), C_ONE);
        assert_eq!(t0.get(1, 0), C_ONE);
        assert_eq!(t0.get(1, 1), C_ZERO);

        let t1 = theta_block(C_ONE).unwrap();
        assert_eq!(t1.get(0, 0), C_ONE);
        assert_eq!(t1.get(0, 1), C_ZERO);
        assert_eq!(t1.get(1, 1), c(-1.0, 0.0));

        let th = theta_block(c(0.5, 0.0)).unwrap();
        assert!((th.get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((th.get(0, 1) - c(0.75f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((th.get(1, 1) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(th.unitary_residual() <= 1e-14);

        assert!(theta_block(c(1.2, 0.0)).is_err());
    }

    #[test]
    fn cmv_all_zero_dim4_is_the_shift_cycle() {
        // Independent oracle: assemble the two factors literally and multiply
        // with a plain triple loop.
        let w = CMVWindow::new(-2, 2, vec![C_ZERO; 4], C_ONE, C_ONE).unwrap();
        let op = materialize_cmv(&w).unwrap();
        assert_eq!(op.site_labels(), &[-2, -1, 0, 1]);
        assert!(op.matrix().unitary_residual() <= 1e-14);

        let flip = |m: &mut CMatrix, off: usize| {
            m.set(off, off + 1, C_ONE);
            m.set(off + 1, off, C_ONE);
        };
        let mut even = CMatrix::zeros(4);
        flip(&mut even, 0);
        flip(&mut even, 2);
        let mut odd = CMatrix::zeros(4);
        odd.set(0, 0, C_ONE);
        odd.set(3, 3, C_ONE);
        flip(&mut odd, 1);
        let mut reference = CMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C_ZERO;
                for k in 0..4 {
                    acc += odd.get(i, k) * even.get(k, j);
                }
                reference.set(i, j, acc);
            }
        }
        assert_eq!(op.matrix(), &reference);
        // The product is the 4-cycle permutation; entry pattern frozen:
        assert_eq!(op.matrix().get(0, 1), C_ONE);
        assert_eq!(op.matrix().get(1, 3), C_ONE);
        assert_eq!(op.matrix().get(2, 0), C_ONE);
        assert_eq!(op.matrix().get(3, 2), C_ONE);
    }

    #[test]
    fn cmv_dim2_reduces_to_theta() {
        let alpha = c(0.3, -0.4);
        let w = CMVWindow::new(0, 2, vec![alpha, c(0.1, 0.0)], C_ONE, C_ONE).unwrap();
        let op = materialize_cmv(&w).unwrap();
        let t = theta_block(alpha).unwrap();
        assert!(op.matrix().sub(&t).max_abs() < 1e-15);

        // Non-trivial closures scale the rows.
        let bl = c(0.0, 1.0);
        let br = c(-1.0, 0.0);
        let w2 = CMVWindow::new(0, 2, vec![alpha, c(0.1, 0.0)], bl, br).unwrap();
        let op2 = materialize_cmv(&w2).unwrap();
        for j in 0..2 {
            assert!((op2.matrix().get(0, j) - bl * t.get(0, j)).norm() < 1e-15);
            assert!((op2.matrix().get(1, j) - br * t.get(1, j)).norm() < 1e-15);
        }
    }

    #[test]
    fn cmv_unitarity_across_dims() {
        for (seed, dim) in [(1u64, 6usize), (2, 16), (3, 40), (4, 400)] {
            let half = 2 * (dim as i64 / 4);
            let w = random_verblunsky(seed, -half, -half + dim as i64, 0.9).unwrap();
            let op = materialize_cmv(&w).unwrap();
            assert!(
                op.matrix().unitary_residual() <= 1e-12,
                "dim {dim}: residual {:e}",
                op.matrix().unitary_residual()
            );
        }
    }

    #[test]
    fn cmv_validation_errors() {
        assert!(CMVWindow::new(-1, 3, vec![C_ZERO; 4], C_ONE, C_ONE).is_err());
        assert!(CMVWindow::new(0, 2, vec![c(1.0, 0.0), C_ZERO], C_ONE, C_ONE).is_err());
        assert!(CMVWindow::new(0, 2, vec![C_ZERO; 2], c(0.5, 0.0), C_ONE).is_err());
    }

    #[test]
    fn rank_one_projector() {
        let base =
            DenseOperator::new(CMatrix::zeros(2), OperatorKind::Selfadjoint, vec![0, 1]).unwrap();
        let coupling = RankOneCoupling::new(vec![C_ONE, C_ZERO], c(3.0, 0.0)).unwrap();
        let out = apply_rank_one(&base, &coupling).unwrap();
        assert_eq!(out.matrix().get(0, 0), c(3.0, 0.0));
        assert_eq!(out.matrix().get(0, 1), C_ZERO);
        assert_eq!(out.matrix().get(1, 1), C_ZERO);
    }

    #[test]
    fn rank_one_exchange_example() {
        let m = CMatrix::from_rows(&[vec![C_ZERO, C_ONE], vec![C_ONE, C_ZERO]]).unwrap();
        let base = DenseOperator::new(m, OperatorKind::Selfadjoint, vec![0, 1]).unwrap();
        let coupling = RankOneCoupling::new(vec![C_ONE, C_ZERO], C_ONE).unwrap();
        let out = apply_rank_one(&base, &coupling).unwrap();
        assert_eq!(out.matrix().get(0, 0), C_ONE);
        assert_eq!(out.matrix().get(0, 1), C_ONE);
        assert_eq!(out.matrix().get(1, 0), C_ONE);
        assert_eq!(out.matrix().get(1, 1), C_ZERO);
        // 2x2 closed form: eigenvalues (1 +- sqrt(5)) / 2.
        let tr = 1.0f64;
        let det = -1.0f64;
        let disc = (tr * tr - 4.0 * det).sqrt();
        assert!(((tr + disc) / 2.0 - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(((tr - disc) / 2.0 - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rank_one_rejects_zero_lambda() {
        assert!(RankOneCoupling::new(vec![C_ONE], C_ZERO).is_err());
    }

    #[test]
    fn rank_one_rejects_dimension_mismatch() {
        let base =
            DenseOperator::new(CMatrix::zeros(2), OperatorKind::Selfadjoint, vec![0, 1]).unwrap();
        let coupling = RankOneCoupling::new(vec![C_ONE], C_ONE).unwrap();
        assert!(matches!(
            apply_rank_one(&base, &coupling),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn anderson_zero_coupling_is_free() {
        let w = anderson_jacobi(9, -3, 2, 0.0).unwrap();
        assert_eq!(w, JacobiWindow::free(-3, 2).unwrap());
    }

    #[test]
    fn anderson_is_deterministic() {
        let w1 = anderson_jacobi(1, -5, 5, 1.0).unwrap();
        let w2 = anderson_jacobi(1, -5, 5, 1.0).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(w1.len(), 11);
        assert!(w1.diagonal().iter().all(|b| (-1.0..=1.0).contains(b)));
        assert!(w1.couplings().iter().all(|&a| a == 1.0));
    }

    // Generator output frozen on first run; any drift in the stream breaks
    // reproducibility of every seeded report downstream.
    #[test]
    fn anderson_seed1_golden_values() {
        let w = anderson_jacobi(1, -5, 5, 1.0).unwrap();
        let golden = [
            (-5i64, 0.49156351452540226),
            (-4, 0.9420055071735924),
            (-3, -0.11128156588845584),
            (-2, -0.1114705983472839),
            (-1, 0.525788783823522),
            (0, 0.754697373528346),
            (1, 0.04613435970196278),
            (2, -0.4289826312060667),
            (3, 0.5879932113246111),
            (4, -0.19171566189954858),
            (5, 0.21084073795065827),
        ];
        for (site, expect) in golden {
            assert_eq!(w.b_at(site), expect, "site {site}");
        }
    }

    #[test]
    fn verblunsky_radius_and_determinism() {
        let w = random_verblunsky(7, -4, 4, 0.9).unwrap();
        assert_eq!(w.dim(), 8);
        assert!(w.alphas().iter().all(|a| a.norm() <= 0.9 + 1e-15));
        assert_eq!(w, random_verblunsky(7, -4, 4, 0.9).unwrap());

        let tiny = random_verblunsky(7, -4, 4, 0.0).unwrap();
        assert!(tiny.alphas().iter().all(|a| *a == C_ZERO));

        assert!(random_verblunsky(7, -4, 4, 1.0).is_err());
    }

    #[test]
    fn window_text_round_trip() {
        let w = anderson_jacobi(4, -6, 5, 1.3).unwrap();
        let text = w.to_text();
        assert_eq!(JacobiWindow::from_text(&text).unwrap(), w);

        let v = random_verblunsky(11, -6, 6, 0.85).unwrap();
        let text = v.to_text();
        assert_eq!(CMVWindow::from_text(&text).unwrap(), v);
    }

    #[test]
    fn direct_sum_relabels_on_collision() {
        let a =
            DenseOperator::new(CMatrix::zeros(2), OperatorKind::Selfadjoint, vec![0, 1]).unwrap();
        let b =
            DenseOperator::new(CMatrix::zeros(2), OperatorKind::Selfadjoint, vec![0, 1]).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.site_labels(), &[0, 1, 2, 3]);

        let left =
            DenseOperator::new(CMatrix::zeros(2), OperatorKind::Selfadjoint, vec![-2, -1]).unwrap();
        let right =
            DenseOperator::new(CMatrix::zeros(2), OperatorKind::Selfadjoint, vec![0, 1]).unwrap();
        let s2 = left.direct_sum(&right).unwrap();
        assert_eq!(s2.site_labels(), &[-2, -1, 0, 1]);
    }

    #[test]
    fn dense_operator_kind_validation() {
        let mut m = CMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        assert!(DenseOperator::new(m.clone(), OperatorKind::Selfadjoint, vec![0, 1]).is_err());
        assert!(DenseOperator::new(m, OperatorKind::General, vec![0, 1]).is_ok());
    }
}
