//! Dense complex matrices and the handful of vector helpers the crate needs.
//!
//! Everything here is desk scale (dimensions up to a couple thousand), so the
//! representation is a flat row-major `Vec<Complex64>` and the products are
//! straightforward cache-friendly triple loops. No attempt is made to exploit
//! bandedness; the eigensolvers dominate the runtime anyway.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Square dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C_ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = C_ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    len: row.len() * n,
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.n + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c];
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "matrix product dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C_ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    orow[j] += a * brow[j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { n: self.n, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { n: self.n, data }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { n: self.n, data }
    }

    /// In-place `self += coeff * u v^*`.
    pub fn rank_one_update(&mut self, coeff: Complex64, u: &[Complex64], v: &[Complex64]) {
        let n = self.n;
        assert_eq!(u.len(), n);
        assert_eq!(v.len(), n);
        for i in 0..n {
            let cu = coeff * u[i];
            if cu == C_ZERO {
                continue;
            }
            let row = &mut self.data[i * n..(i + 1) * n];
            for j in 0..n {
                row[j] += cu * v[j].conj();
            }
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let n = self.n;
        let mut y = vec![C_ZERO; n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = C_ZERO;
            for j in 0..n {
                acc += row[j] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// y = M^* x.
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        let n = self.n;
        let mut y = vec![C_ZERO; n];
        for i in 0..n {
            let xi = x[i].conj();
            if xi == C_ZERO {
                continue;
            }
            let row = &self.data[i * n..(i + 1) * n];
            for j in 0..n {
                y[j] += (xi * row[j]).conj();
            }
        }
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .map(|z| z.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entry of |M - M^*|.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.data[r * n + c] - self.data[c * n + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Gram matrix of the columns, `G = M^* M`, computed on the upper triangle
    /// and mirrored.
    pub fn column_gram(&self) -> CMatrix {
        let n = self.n;
        let at = self.adjoint(); // rows of `at` are conjugated columns of self
        let mut g = CMatrix::zeros(n);
        for i in 0..n {
            let ri = &at.data[i * n..(i + 1) * n];
            for j in i..n {
                let rj = &at.data[j * n..(j + 1) * n];
                let mut acc = C_ZERO;
                for k in 0..n {
                    acc += ri[k] * rj[k].conj();
                }
                g.data[i * n + j] = acc;
                g.data[j * n + i] = acc.conj();
            }
        }
        g
    }

    /// Max entry of |M^* M - I|.
    pub fn unitary_residual(&self) -> f64 {
        let g = self.column_gram();
        let n = self.n;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { C_ONE } else { C_ZERO };
                worst = worst.max((g.data[r * n + c] - target).norm());
            }
        }
        worst
    }

    /// Embed `block` at the diagonal position starting at `offset`.
    pub fn place_block(&mut self, offset: usize, block: &CMatrix) {
        let b = block.n;
        assert!(offset + b <= self.n);
        for r in 0..b {
            for c in 0..b {
                self.set(offset + r, offset + c, block.get(r, c));
            }
        }
    }

    /// Extract the square sub-block with the given row/column range.
    pub fn sub_block(&self, start: usize, len: usize) -> CMatrix {
        assert!(start + len <= self.n);
        let mut out = CMatrix::zeros(len);
        for r in 0..len {
            for c in 0..len {
                out.set(r, c, self.get(start + r, start + c));
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let n = self.n + other.n;
        let mut out = CMatrix::zeros(n);
        out.place_block(0, self);
        out.place_block(self.n, other);
        out
    }

    /// All-real check, used to route selfadjoint problems to the real solver.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

// ---------------------------------------------------------------------------
// vector helpers

/// Conjugating inner product, `<a, b> = sum conj(a_i) b_i`.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// a -= s * b
pub fn axpy_neg(a: &mut [Complex64], s: Complex64, b: &[Complex64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= s * y;
    }
}

pub fn normalize(a: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = norm(a);
    if n == 0.0 {
        return None;
    }
    Some(a.iter().map(|z| z / n).collect())
}

pub fn concat(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

// ---------------------------------------------------------------------------
// singular value estimates for near-rank-one matrices

/// Result of the two-step power iteration used for rank-one checks.
///
/// `sigma2_bound` is a certified upper bound on the second singular value:
/// it is the Frobenius norm of the explicitly deflated matrix, and by the
/// Weyl inequality `sigma_2(M) <= sigma_1(M - R)` for any rank-one `R`.
#[derive(Debug, Clone)]
pub struct RankOneDeviation {
    pub sigma1: f64,
    pub sigma2_bound: f64,
}

fn power_start(n: usize) -> Vec<Complex64> {
    // Fixed pseudo-random pattern; deterministic and generically not
    // orthogonal to the leading singular vector.
    let v: Vec<Complex64> = (0..n)
        .map(|j| {
            Complex64::new(
                1.0 + 0.37 * ((j * 7 + 3) % 11) as f64,
                0.19 * ((j * 5 + 1) % 7) as f64,
            )
        })
        .collect();
    normalize(&v).unwrap()
}

/// Leading singular triple by power iteration on `M^* M`.
pub fn leading_singular_triple(m: &CMatrix) -> (f64, Vec<Complex64>, Vec<Complex64>) {
    let n = m.dim();
    if n == 0 {
        return (0.0, Vec::new(), Vec::new());
    }
    let mut v = power_start(n);
    let mut prev_sigma = 0.0f64;
    for _ in 0..200 {
        let mv = m.matvec(&v);
        let w = m.adjoint_matvec(&mv);
        let wn = norm(&w);
        if wn == 0.0 {
            // v happens to sit in the kernel; restart from the largest column.
            let (mut best, mut best_norm) = (0usize, -1.0f64);
            for c in 0..n {
                let cn = norm(&m.column(c));
                if cn > best_norm {
                    best_norm = cn;
                    best = c;
                }
            }
            if best_norm <= 0.0 {
                return (0.0, vec![C_ZERO; n], vec![C_ZERO; n]);
            }
            v = vec![C_ZERO; n];
            v[best] = C_ONE;
            continue;
        }
        let next_sigma = wn.sqrt();
        v = w.iter().map(|z| z / wn).collect();
        if (next_sigma - prev_sigma).abs() <= 1e-15 * next_sigma.max(1e-300) {
            break;
        }
        prev_sigma = next_sigma;
    }
    let mv = m.matvec(&v);
    let s = norm(&mv);
    let u = if s > 0.0 {
        mv.iter().map(|z| z / s).collect()
    } else {
        vec![C_ZERO; n]
    };
    (s, u, v)
}

/// Estimate `sigma_1` and certify a bound on `sigma_2` by explicit deflation.
pub fn rank_one_deviation(m: &CMatrix) -> RankOneDeviation {
    let (s1, u, v) = leading_singular_triple(m);
    let mut deflated = m.clone();
    if s1 > 0.0 {
        deflated.rank_one_update(Complex64::new(-s1, 0.0), &u, &v);
    }
    RankOneDeviation {
        sigma1: s1,
        sigma2_bound: deflated.fro_norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_against_hand_computation() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let b = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let p = a.mul(&b);
        assert_eq!(p.get(0, 0), c(0.0, 1.0));
        assert_eq!(p.get(0, 1), c(1.0, 0.0));
        assert_eq!(p.get(1, 0), c(0.0, 0.0));
        assert_eq!(p.get(1, 1), c(2.0, 0.0));
    }

    #[test]
    fn adjoint_matvec_matches_explicit_adjoint() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(-0.5, 0.3)],
            vec![c(0.0, -1.0), c(2.0, 0.1)],
        ])
        .unwrap();
        let x = vec![c(0.7, -0.2), c(1.1, 0.4)];
        let via_method = a.adjoint_matvec(&x);
        let via_matrix = a.adjoint().matvec(&x);
        for (p, q) in via_method.iter().zip(&via_matrix) {
            assert!((p - q).norm() < 1e-14);
        }
    }

    #[test]
    fn unitary_residual_detects_rotation() {
        let t = std::f64::consts::FRAC_PI_3;
        let r = CMatrix::from_rows(&[
            vec![c(t.cos(), 0.0), c(-t.sin(), 0.0)],
            vec![c(t.sin(), 0.0), c(t.cos(), 0.0)],
        ])
        .unwrap();
        assert!(r.unitary_residual() < 1e-15);
        let bad = r.scale(c(1.01, 0.0));
        assert!(bad.unitary_residual() > 1e-3);
    }

    #[test]
    fn rank_one_deviation_on_outer_product() {
        let u = [c(0.6, 0.0), c(0.0, 0.8)];
        let v = [c(1.0 / 2f64.sqrt(), 0.0), c(0.5, -0.5)];
        let mut m = CMatrix::zeros(2);
        m.rank_one_update(c(3.0, 0.0), &u, &v);
        let dev = rank_one_deviation(&m);
        assert!((dev.sigma1 - 3.0).abs() < 1e-12, "sigma1 = {}", dev.sigma1);
        assert!(
            dev.sigma2_bound < 1e-13,
            "sigma2 bound = {:e}",
            dev.sigma2_bound
        );
    }

    #[test]
    fn rank_one_deviation_flags_rank_two() {
        let m =
            CMatrix::from_rows(&[vec![c(2.0, 0.0), C_ZERO], vec![C_ZERO, c(1.0, 0.0)]]).unwrap();
        let dev = rank_one_deviation(&m);
        assert!((dev.sigma1 - 2.0).abs() < 1e-10);
        assert!(dev.sigma2_bound > 0.9);
    }
}
