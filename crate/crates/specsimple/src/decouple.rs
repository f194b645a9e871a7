//! Exact rank-one decouplings and the Cayley bridge.
//!
//! `decouple_jacobi` removes one coupling `a` from a Jacobi window and
//! compensates on the two adjacent diagonal entries, so the window splits
//! into two half windows plus an exact rank-one term. `decouple_cmv` replaces
//! one theta block of the odd factor by `diag(x, 1)` with
//! `x = (1 + conj(alpha)) / (1 + alpha)`; the replaced block differs from the
//! original by a rank-one matrix, so the full unitary splits the same way.
//!
//! `cayley` and `inverse_cayley` move between bounded selfadjoint and unitary
//! operators through `E -> (E + i) / (E - i)`. The image never contains 1
//! (the image of infinity), so the inverse rejects unitaries with spectrum
//! near 1; the round trip is the binding contract.

use num_complex::Complex64;

use crate::eig::{hermitian_eigen, unitary_eigen};
use crate::error::{Error, Result};
use crate::matrix::{norm, rank_one_deviation, CMatrix, RankOneDeviation, C_I, C_ONE, C_ZERO};
#[cfg(test)]
use crate::operator::theta_block;
use crate::operator::{materialize_jacobi, CMVWindow, DenseOperator, JacobiWindow, OperatorKind};

/// Below this distance from `alpha = -1` the replacement phase loses all
/// precision to cancellation and the decoupling is treated as singular.
pub const CMV_SINGULAR_TOL: f64 = 1e-8;

/// Default exclusion band for [`inverse_cayley`], as a fraction of the unit
/// norm scale of the input.
pub const INVERSE_CAYLEY_DEFAULT_TOL: f64 = 1e-8;

/// A Jacobi window split across a site cut.
#[derive(Debug, Clone)]
pub struct JacobiDecoupling {
    /// Sites up to and including the cut; the corner diagonal carries `b - a`.
    pub left: DenseOperator,
    /// Sites after the cut; the leading diagonal carries `b - a`.
    pub right: DenseOperator,
    /// Indicator vector of the two sites adjacent to the cut, in window
    /// coordinates.
    pub phi: Vec<Complex64>,
    /// The removed coupling.
    pub lambda: f64,
    pub cut: i64,
}

impl JacobiDecoupling {
    /// `left ⊕ right + lambda phi phi^*`, the reassembled operator.
    pub fn reassemble(&self) -> Result<DenseOperator> {
        let sum = self.left.direct_sum(&self.right)?;
        let mut m = sum.matrix().clone();
        m.rank_one_update(Complex64::new(self.lambda, 0.0), &self.phi, &self.phi);
        DenseOperator::new(m, OperatorKind::Selfadjoint, sum.site_labels().to_vec())
    }

    /// Entrywise reconstruction error against the materialized window.
    pub fn reconstruction_residual(&self, w: &JacobiWindow) -> Result<f64> {
        let original = materialize_jacobi(w);
        let rebuilt = self.reassemble()?;
        Ok(original.matrix().sub(rebuilt.matrix()).max_abs())
    }

    /// The two halves as Jacobi windows (they stay tridiagonal with positive
    /// couplings, only one diagonal entry is shifted).
    pub fn half_windows(&self, w: &JacobiWindow) -> Result<(JacobiWindow, JacobiWindow)> {
        let cut_pos = (self.cut - w.n_min()) as usize;
        let mut left_b: Vec<f64> = w.diagonal()[..=cut_pos].to_vec();
        *left_b.last_mut().expect("nonempty half") -= self.lambda;
        let left_a = w.couplings()[..cut_pos].to_vec();
        let left = JacobiWindow::new(w.n_min(), self.cut, left_b, left_a)?;

        let mut right_b: Vec<f64> = w.diagonal()[cut_pos + 1..].to_vec();
        right_b[0] -= self.lambda;
        let right_a = w.couplings()[cut_pos + 1..].to_vec();
        let right = JacobiWindow::new(self.cut + 1, w.n_max(), right_b, right_a)?;
        Ok((left, right))
    }
}

/// Split a Jacobi window between `cut` and `cut + 1`.
pub fn decouple_jacobi(w: &JacobiWindow, cut: i64) -> Result<JacobiDecoupling> {
    if cut < w.n_min() || cut >= w.n_max() {
        return Err(Error::CutOutOfWindow {
            cut,
            n_min: w.n_min(),
            n_max: w.n_max(),
        });
    }
    let lambda = w.a_at(cut);
    let cut_pos = (cut - w.n_min()) as usize;
    let n = w.len();

    let build_half = |sites: std::ops::RangeInclusive<i64>, shift_at: i64| -> DenseOperator {
        let lo = (*sites.start() - w.n_min()) as usize;
        let hi = (*sites.end() - w.n_min()) as usize;
        let len = hi - lo + 1;
        let mut m = CMatrix::zeros(len);
        for i in 0..len {
            let site = *sites.start() + i as i64;
            let mut b = w.b_at(site);
            if site == shift_at {
                b -= lambda;
            }
            m.set(i, i, Complex64::new(b, 0.0));
            if i + 1 < len {
                let a = Complex64::new(w.a_at(site), 0.0);
                m.set(i, i + 1, a);
                m.set(i + 1, i, a);
            }
        }
        DenseOperator::assemble(m, OperatorKind::Selfadjoint, sites.collect())
    };

    let left = build_half(w.n_min()..=cut, cut);
    let right = build_half(cut + 1..=w.n_max(), cut + 1);

    let mut phi = vec![C_ZERO; n];
    phi[cut_pos] = C_ONE;
    phi[cut_pos + 1] = C_ONE;

    Ok(JacobiDecoupling {
        left,
        right,
        phi,
        lambda,
        cut,
    })
}

/// The unimodular replacement value and the 2x2 block `diag(x, 1)` used to
/// sever a CMV window at an odd coefficient. Errors when `alpha` is within
/// [`CMV_SINGULAR_TOL`] of -1, where the phase of `x` is undefined.
pub fn cmv_cut_replacement(alpha: Complex64) -> Result<(Complex64, CMatrix)> {
    let denom = C_ONE + alpha;
    if denom.norm() <= CMV_SINGULAR_TOL {
        return Err(Error::SingularDecoupling);
    }
    let x = (C_ONE + alpha.conj()) / denom;
    let mut block = CMatrix::zeros(2);
    block.set(0, 0, x);
    block.set(1, 1, C_ONE);
    Ok((x, block))
}

/// A CMV window severed at one odd coefficient.
#[derive(Debug, Clone)]
pub struct CmvDecoupling {
    /// The block-diagonal unitary obtained after the replacement.
    pub decoupled: DenseOperator,
    /// Original minus decoupled; rank one up to rounding.
    pub difference: DenseOperator,
    /// The unimodular replacement value.
    pub x: Complex64,
    pub cut: i64,
    /// Coordinate position (0-based) of the first site after the cut.
    pub split: usize,
}

impl CmvDecoupling {
    pub fn left_block(&self) -> Result<DenseOperator> {
        let m = self.decoupled.matrix().sub_block(0, self.split);
        let labels = self.decoupled.site_labels()[..self.split].to_vec();
        DenseOperator::new(m, OperatorKind::Unitary, labels)
    }

    pub fn right_block(&self) -> Result<DenseOperator> {
        let n = self.decoupled.dim();
        let m = self
            .decoupled
            .matrix()
            .sub_block(self.split, n - self.split);
        let labels = self.decoupled.site_labels()[self.split..].to_vec();
        DenseOperator::new(m, OperatorKind::Unitary, labels)
    }

    /// Leading singular value and certified second-singular-value bound of
    /// the difference.
    pub fn rank_one_deviation(&self) -> RankOneDeviation {
        rank_one_deviation(self.difference.matrix())
    }

    /// Largest entry of the difference outside the two rows touched by the
    /// replaced block; exactly zero by construction.
    pub fn off_cut_leakage(&self) -> f64 {
        let n = self.difference.dim();
        let cut_rows = [self.split - 1, self.split];
        let mut worst = 0.0f64;
        for r in 0..n {
            if cut_rows.contains(&r) {
                continue;
            }
            for c in 0..n {
                worst = worst.max(self.difference.matrix().get(r, c).norm());
            }
        }
        worst
    }
}

/// Sever a CMV window at the odd coefficient `cut` (the block on coordinates
/// `(cut, cut+1)` belongs to the odd factor precisely when `cut` is odd).
pub fn decouple_cmv(w: &CMVWindow, cut: i64) -> Result<CmvDecoupling> {
    if cut.rem_euclid(2) != 1 {
        return Err(Error::CutNotOdd { index: cut });
    }
    if cut < w.j_min() || cut + 1 >= w.j_max() {
        return Err(Error::CutOutOfWindow {
            cut,
            n_min: w.j_min(),
            n_max: w.j_max(),
        });
    }
    let alpha = w.alpha_at(cut);
    let (x, replacement) = cmv_cut_replacement(alpha)?;

    let (mut odd, even) = crate::operator::cmv_block_factors(w);
    let offset = (cut - w.j_min()) as usize;
    odd.place_block(offset, &replacement);
    let severed = odd.mul(&even);
    let labels: Vec<i64> = (w.j_min()..w.j_max()).collect();
    let decoupled = DenseOperator::new(severed, OperatorKind::Unitary, labels.clone())?;

    let original = crate::operator::materialize_cmv(w)?;
    let diff = original.matrix().sub(decoupled.matrix());
    let difference = DenseOperator::new(diff, OperatorKind::General, labels)?;

    Ok(CmvDecoupling {
        decoupled,
        difference,
        x,
        cut,
        split: offset + 1,
    })
}

/// `(A + i)(A - i)^{-1}` through the spectral decomposition of `A`.
/// Eigenvalues map by `E -> (E + i)/(E - i)`; eigenvectors are preserved.
pub fn cayley(a: &DenseOperator) -> Result<DenseOperator> {
    if a.kind() != OperatorKind::Selfadjoint {
        return Err(Error::KindMismatch {
            expected: "selfadjoint",
            got: a.kind().name(),
        });
    }
    let (w, v) = hermitian_eigen(a.matrix())?;
    let mapped: Vec<Complex64> = w
        .iter()
        .map(|&e| {
            let z = Complex64::new(e, 1.0);
            z / z.conj()
        })
        .collect();
    let m = functional_calculus(&v, &mapped);
    DenseOperator::new(m, OperatorKind::Unitary, a.site_labels().to_vec())
}

/// Inverse of [`cayley`]: `i (U + I)(U - I)^{-1}` through the spectral
/// decomposition of `U`. Rejects spectrum within `tol` of 1, whose preimage
/// escapes to infinity.
pub fn inverse_cayley(u: &DenseOperator, tol: f64) -> Result<DenseOperator> {
    if u.kind() != OperatorKind::Unitary {
        return Err(Error::KindMismatch {
            expected: "unitary",
            got: u.kind().name(),
        });
    }
    let (w, v) = unitary_eigen(u.matrix())?;
    let mut closest = f64::INFINITY;
    for z in &w {
        closest = closest.min((z - C_ONE).norm());
    }
    if closest <= tol {
        return Err(Error::UnboundedPreimage { distance: closest });
    }
    // i (z + 1)/(z - 1) is real on the unit circle; take the real part so the
    // result is Hermitian up to the orthonormality defect of the basis.
    let mapped: Vec<Complex64> = w
        .iter()
        .map(|&z| {
            let t = (C_I * (z + C_ONE) / (z - C_ONE)).re;
            Complex64::new(t, 0.0)
        })
        .collect();
    let mut m = functional_calculus(&v, &mapped);
    let n = m.dim();
    for r in 0..n {
        for c in r..n {
            let sym = 0.5 * (m.get(r, c) + m.get(c, r).conj());
            m.set(r, c, sym);
            m.set(c, r, sym.conj());
        }
    }
    DenseOperator::new(m, OperatorKind::Selfadjoint, u.site_labels().to_vec())
}

/// `V (I + (lambda - 1) phi phi^*)`: the rank-one multiplicative
/// perturbation of a unitary. Requires unit `phi` and unimodular
/// `lambda != 1`; satisfies `W phi = lambda V phi` exactly.
pub fn unitary_rank_one(
    v: &DenseOperator,
    phi: &[Complex64],
    lambda: Complex64,
) -> Result<DenseOperator> {
    if v.kind() != OperatorKind::Unitary {
        return Err(Error::KindMismatch {
            expected: "unitary",
            got: v.kind().name(),
        });
    }
    if phi.len() != v.dim() {
        return Err(Error::DimensionMismatch {
            dim: v.dim(),
            len: phi.len(),
        });
    }
    let pn = norm(phi);
    if (pn - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitNorm { norm: pn });
    }
    if (lambda.norm() - 1.0).abs() > 1e-12 || (lambda - C_ONE).norm() <= 1e-15 {
        return Err(Error::BadCoupling {
            expected: "unimodular and distinct from 1",
            got: format!("{lambda}"),
        });
    }
    let vphi = v.matrix().matvec(phi);
    let mut m = v.matrix().clone();
    m.rank_one_update(lambda - C_ONE, &vphi, phi);
    DenseOperator::new(m, OperatorKind::Unitary, v.site_labels().to_vec())
}

/// `V f(Lambda) V^*` for a diagonal function given by `values`.
fn functional_calculus(v: &CMatrix, values: &[Complex64]) -> CMatrix {
    let n = v.dim();
    let mut scaled = CMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            scaled.set(r, c, v.get(r, c) * values[c]);
        }
    }
    scaled.mul(&v.adjoint())
}

/// Resolvent `(A - i)^{-1}` of a selfadjoint operator, via its spectral
/// decomposition.
pub fn selfadjoint_resolvent_at_i(a: &DenseOperator) -> Result<CMatrix> {
    if a.kind() != OperatorKind::Selfadjoint {
        return Err(Error::KindMismatch {
            expected: "selfadjoint",
            got: a.kind().name(),
        });
    }
    let (w, v) = hermitian_eigen(a.matrix())?;
    let mapped: Vec<Complex64> = w.iter().map(|&e| (Complex64::new(e, -1.0)).inv()).collect();
    Ok(functional_calculus(&v, &mapped))
}
