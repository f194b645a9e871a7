//! Dense Hermitian and unitary eigensolvers.
//!
//! The Hermitian path is the classical two-phase scheme: unitary Householder
//! reduction to a real symmetric tridiagonal, then implicit-shift QL with
//! accumulation of the transformations. The unitary path reduces to Hermitian
//! solves: a unitary matrix is normal, so its Hermitian real part and
//! Hermitian imaginary part commute and can be diagonalized jointly. We first
//! diagonalize a fixed generic real combination of the two parts, then refine
//! any residual clusters with the parts themselves, which resolves conjugate
//! pairs (equal real parts) and accidental aliasing of the combination.
//!
//! Eigenvector matrices are accumulated in transposed storage (each row is a
//! future eigenvector) so that the QL rotations touch contiguous memory.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{dot, CMatrix, C_ONE, C_ZERO};

const QL_SWEEP_BUDGET: usize = 60;

/// Golden-section mix for the first unitary stage. Any fixed irrational-ish
/// weight works; this one keeps structured spectra (roots of unity, conjugate
/// pairs) from aliasing in the combined Hermitian coordinate.
const STAGE_MIX: f64 = 0.618_033_988_749_894_9;

/// Threshold for chaining stage-one eigenvalues into refinement clusters.
const CLUSTER_WIDTH: f64 = 1e-3;

/// Threshold below which refined real parts are treated as coincident and
/// handed to the imaginary-part refinement.
const SUBCLUSTER_WIDTH: f64 = 1e-9;

fn phase(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n == 0.0 {
        C_ONE
    } else {
        z / n
    }
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form. Returns `(d, e, qt)` where `d` is the diagonal, `e[i]` couples sites
/// `i` and `i+1` (`e[n-1]` is a zero sentinel), and row `i` of `qt` is column
/// `i` of the accumulated unitary `Q` with `A = Q T Q^*`.
fn hermitian_to_tridiagonal(a: &CMatrix) -> (Vec<f64>, Vec<f64>, CMatrix) {
    let n = a.dim();
    let mut m = a.clone();
    let mut reflectors: Vec<(usize, f64, Vec<Complex64>)> = Vec::new();

    for k in 0..n.saturating_sub(2) {
        let len = n - 1 - k;
        let mut x = vec![C_ZERO; len];
        for i in 0..len {
            x[i] = m.get(k + 1 + i, k);
        }
        let tail_norm: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if tail_norm == 0.0 {
            // Column already tridiagonal; nothing to eliminate.
            continue;
        }
        let xnorm = (tail_norm * tail_norm + x[0].norm_sqr()).sqrt();
        let alpha = -phase(x[0]) * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;

        // Two-sided update of the trailing block: A <- A - v w^* - w v^*
        // with p = beta * A v and w = p - (beta <v, p> / 2) v.
        let mut p = vec![C_ZERO; len];
        for i in 0..len {
            let row = &m.row(k + 1 + i)[k + 1..];
            let mut acc = C_ZERO;
            for j in 0..len {
                acc += row[j] * v[j];
            }
            p[i] = beta * acc;
        }
        let vp = dot(&v, &p);
        let half = 0.5 * beta * vp.re;
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - half * vi).collect();
        for i in 0..len {
            let vi = v[i];
            let wi = w[i];
            let row = &mut m.row_mut(k + 1 + i)[k + 1..];
            for j in 0..len {
                row[j] -= vi * w[j].conj() + wi * v[j].conj();
            }
        }

        m.set(k + 1, k, alpha);
        m.set(k, k + 1, alpha.conj());
        for i in 1..len {
            m.set(k + 1 + i, k, C_ZERO);
            m.set(k, k + 1 + i, C_ZERO);
        }
        reflectors.push((k, beta, v));
    }

    // Backward accumulation of Q = P_0 P_1 ... into transposed storage.
    let mut qt = CMatrix::identity(n);
    for (k, beta, v) in reflectors.into_iter().rev() {
        // Q <- P_k Q, i.e. subtract beta * v (v^* Q); v lives on rows k+1.. .
        for j in (k + 1)..n {
            let row = qt.row(j);
            let mut r = C_ZERO;
            for i in 0..v.len() {
                r += v[i].conj() * row[k + 1 + i];
            }
            if r == C_ZERO {
                continue;
            }
            let coeff = beta * r;
            let row = qt.row_mut(j);
            for i in 0..v.len() {
                row[k + 1 + i] -= coeff * v[i];
            }
        }
    }

    // Rotate the subdiagonal onto the positive real axis.
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    let mut ph = C_ONE;
    // Row 0 of qt keeps phase 1.
    for i in 0..n {
        d[i] = m.get(i, i).re;
        if i + 1 < n {
            let c = m.get(i + 1, i);
            e[i] = c.norm();
            ph *= phase(c);
            if ph != C_ONE {
                let row = qt.row_mut(i + 1);
                for z in row.iter_mut() {
                    *z *= ph;
                }
            }
        }
    }
    (d, e, qt)
}

/// Implicit-shift QL on a symmetric tridiagonal, rotating the rows of `qt`
/// (transposed eigenvector storage) along the way. `e[n-1]` must be zero.
fn tql2(d: &mut [f64], e: &mut [f64], qt: &mut CMatrix) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m >= n {
            m = n - 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > QL_SWEEP_BUDGET {
                    return Err(Error::NoConvergence {
                        achieved: if tst1 > 0.0 { e[l].abs() / tst1 } else { 0.0 },
                        budget: QL_SWEEP_BUDGET,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in (l + 2)..n {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0f64;
                let mut s2 = 0.0f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gg = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gg;
                    d[i + 1] = h + s * (c * gg + s * d[i]);
                    rotate_pair(qt, i, c, s);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Ascending sort, carrying the vectors.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    apply_permutation(d, qt, &order);
    Ok(())
}

/// Plane rotation of logical eigenvector columns `i` and `i+1`.
fn rotate_pair(qt: &mut CMatrix, i: usize, c: f64, s: f64) {
    let n = qt.dim();
    let data = qt.data_mut();
    let (head, tail) = data.split_at_mut((i + 1) * n);
    let row_i = &mut head[i * n..];
    let row_j = &mut tail[..n];
    for k in 0..n {
        let h = row_j[k];
        row_j[k] = s * row_i[k] + c * h;
        row_i[k] = c * row_i[k] - s * h;
    }
}

fn apply_permutation(d: &mut [f64], qt: &mut CMatrix, order: &[usize]) {
    let n = d.len();
    let sorted_d: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted_d);
    let mut sorted = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        sorted.row_mut(new).copy_from_slice(qt.row(old));
    }
    *qt = sorted;
}

/// Full eigendecomposition of a Hermitian matrix. Returns ascending real
/// eigenvalues and the unitary eigenvector matrix (eigenvectors as columns).
///
/// The input is symmetrized first, so tiny Hermiticity defects (within the
/// operator kind tolerance) do not leak into the reduction.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.dim();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0)));
    }
    let mut sym = CMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            sym.set(r, c, 0.5 * (a.get(r, c) + a.get(c, r).conj()));
        }
    }
    let (mut d, mut e, mut qt) = hermitian_to_tridiagonal(&sym);
    tql2(&mut d, &mut e, &mut qt)?;
    Ok((d, qt.transpose()))
}

/// Eigendecomposition of a unitary (more generally, normal) matrix.
/// Returns eigenvalues sorted by argument in `[0, 2pi)` together with an
/// orthonormal eigenvector matrix.
pub fn unitary_eigen(m: &CMatrix) -> Result<(Vec<Complex64>, CMatrix)> {
    let n = m.dim();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0)));
    }
    let adj = m.adjoint();
    let mut h = CMatrix::zeros(n);
    let mut k = CMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let sum = 0.5 * (m.get(r, c) + adj.get(r, c));
            let dif = m.get(r, c) - adj.get(r, c);
            h.set(r, c, sum);
            k.set(r, c, Complex64::new(0.5 * dif.im, -0.5 * dif.re)); // dif/(2i)
        }
    }
    let mut t = CMatrix::zeros(n);
    for i in 0..n * n {
        // t = h + STAGE_MIX * k, entrywise over the backing data
        let (r, c) = (i / n, i % n);
        t.set(r, c, h.get(r, c) + STAGE_MIX * k.get(r, c));
    }

    let scale = t.inf_norm().max(1.0);
    let (tw, tv) = hermitian_eigen(&t)?;
    let mut vt = tv.transpose(); // transposed storage: rows are eigenvectors

    // Chain stage-one eigenvalues into clusters and refine.
    let clusters = chain_clusters(&tw, CLUSTER_WIDTH * scale);
    for (start, len) in clusters {
        if len < 2 {
            continue;
        }
        refine_block(&mut vt, start, len, &h, &k)?;
    }

    // Rayleigh eigenvalues off the refined basis.
    let mut pairs: Vec<(Complex64, usize)> = Vec::with_capacity(n);
    for j in 0..n {
        let v = vt.row(j).to_vec();
        let mv = m.matvec(&v);
        pairs.push((dot(&v, &mv), j));
    }
    pairs.sort_by(|a, b| arg_2pi(a.0).total_cmp(&arg_2pi(b.0)));

    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n);
    for (col, (val, j)) in pairs.into_iter().enumerate() {
        values.push(val);
        for r in 0..n {
            vectors.set(r, col, vt.get(j, r));
        }
    }
    Ok((values, vectors))
}

fn arg_2pi(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Chain-merge sorted values into `(start, len)` runs with gaps below `tol`.
fn chain_clusters(sorted: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0usize;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > tol {
            out.push((start, i - start));
            start = i;
        }
    }
    out
}

/// Refine a cluster of stage-one vectors: diagonalize the projected real
/// part, then the projected imaginary part inside coincident real-part runs.
fn refine_block(
    vt: &mut CMatrix,
    start: usize,
    len: usize,
    h: &CMatrix,
    k: &CMatrix,
) -> Result<()> {
    let hw = rotate_by_projection(vt, start, len, h)?;
    let subs = chain_clusters(&hw, SUBCLUSTER_WIDTH * (1.0 + h.inf_norm()));
    for (s, l) in subs {
        if l < 2 {
            continue;
        }
        rotate_by_projection(vt, start + s, l, k)?;
    }
    Ok(())
}

/// Diagonalize `V_c^* Op V_c` on the block of rows `[start, start+len)` of the
/// transposed vector storage, rotate the rows accordingly, and return the
/// block eigenvalues (ascending; rows are reordered to match).
fn rotate_by_projection(
    vt: &mut CMatrix,
    start: usize,
    len: usize,
    op: &CMatrix,
) -> Result<Vec<f64>> {
    let n = vt.dim();
    // images[i] = Op * v_i
    let images: Vec<Vec<Complex64>> = (start..start + len).map(|i| op.matvec(vt.row(i))).collect();
    let mut proj = CMatrix::zeros(len);
    for i in 0..len {
        for j in 0..len {
            proj.set(i, j, dot(vt.row(start + i), &images[j]));
        }
    }
    let (w, u) = hermitian_eigen(&proj)?;
    // new_v_j = sum_i u[i][j] v_i
    let mut rotated = vec![vec![C_ZERO; n]; len];
    for j in 0..len {
        for i in 0..len {
            let c = u.get(i, j);
            if c == C_ZERO {
                continue;
            }
            let row = vt.row(start + i);
            let dst = &mut rotated[j];
            for t in 0..n {
                dst[t] += c * row[t];
            }
        }
    }
    for (j, row) in rotated.into_iter().enumerate() {
        vt.row_mut(start + j).copy_from_slice(&row);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::norm;
    use crate::rng::SeededRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(rng: &mut SeededRng, n: usize) -> CMatrix {
        let mut a = CMatrix::zeros(n);
        for r in 0..n {
            a.set(r, r, c(rng.uniform_in(-1.0, 1.0), 0.0));
            for cc in r + 1..n {
                let z = c(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0));
                a.set(r, cc, z);
                a.set(cc, r, z.conj());
            }
        }
        a
    }

    fn random_unitary(rng: &mut SeededRng, n: usize) -> CMatrix {
        // Gram-Schmidt on a complex Gaussian matrix.
        let mut cols: Vec<Vec<Complex64>> = Vec::new();
        for _ in 0..n {
            let mut v: Vec<Complex64> = (0..n).map(|_| rng.complex_gaussian()).collect();
            for q in &cols {
                let p = dot(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
            let nn = norm(&v);
            cols.push(v.into_iter().map(|z| z / nn).collect());
        }
        let mut m = CMatrix::zeros(n);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, col[i]);
            }
        }
        m
    }

    fn eig_residual_hermitian(a: &CMatrix, w: &[f64], v: &CMatrix) -> f64 {
        let n = a.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            let col = v.column(j);
            let av = a.matvec(&col);
            let r: f64 = av
                .iter()
                .zip(&col)
                .map(|(x, y)| (x - w[j] * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        worst
    }

    #[test]
    fn diagonal_matrix_is_sorted_through() {
        let a = CMatrix::from_rows(&[
            vec![c(3.0, 0.0), C_ZERO, C_ZERO],
            vec![C_ZERO, c(1.0, 0.0), C_ZERO],
            vec![C_ZERO, C_ZERO, c(2.0, 0.0)],
        ])
        .unwrap();
        let (w, v) = hermitian_eigen(&a).unwrap();
        assert_eq!(w, vec![1.0, 2.0, 3.0]);
        assert!((v.get(1, 0).norm() - 1.0).abs() < 1e-14);
        assert!((v.get(2, 1).norm() - 1.0).abs() < 1e-14);
        assert!((v.get(0, 2).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_exchange() {
        let a = CMatrix::from_rows(&[vec![C_ZERO, C_ONE], vec![C_ONE, C_ZERO]]).unwrap();
        let (w, v) = hermitian_eigen(&a).unwrap();
        assert!((w[0] + 1.0).abs() < 1e-14);
        assert!((w[1] - 1.0).abs() < 1e-14);
        assert!(eig_residual_hermitian(&a, &w, &v) < 1e-14);
    }

    #[test]
    fn hermitian_random_residuals() {
        let mut rng = SeededRng::new(42);
        for &n in &[5usize, 17, 64] {
            let a = random_hermitian(&mut rng, n);
            let (w, v) = hermitian_eigen(&a).unwrap();
            let scale = a.inf_norm().max(1.0);
            assert!(
                eig_residual_hermitian(&a, &w, &v) < 1e-12 * scale,
                "residual too large at n={n}"
            );
            assert!(v.unitary_residual() < 1e-12, "orthonormality at n={n}");
            for i in 1..n {
                assert!(w[i] >= w[i - 1]);
            }
        }
    }

    #[test]
    fn hermitian_known_tridiagonal_spectrum() {
        // Free tridiagonal with zero diagonal: eigenvalues 2 cos(k pi / (n+1)).
        let n = 24;
        let mut a = CMatrix::zeros(n);
        for i in 0..n - 1 {
            a.set(i, i + 1, C_ONE);
            a.set(i + 1, i, C_ONE);
        }
        let (w, _) = hermitian_eigen(&a).unwrap();
        for (idx, wk) in w.iter().enumerate() {
            let kk = n - idx; // ascending order
            let exact = 2.0 * (kk as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((wk - exact).abs() < 1e-12, "k={kk}: {wk} vs {exact}");
        }
    }

    #[test]
    fn unitary_random_residuals() {
        let mut rng = SeededRng::new(7);
        for &n in &[4usize, 13, 48] {
            let m = random_unitary(&mut rng, n);
            let (w, v) = unitary_eigen(&m).unwrap();
            for val in &w {
                assert!((val.norm() - 1.0).abs() < 1e-10, "not unimodular: {val}");
            }
            let mut worst = 0.0f64;
            for j in 0..n {
                let col = v.column(j);
                let mv = m.matvec(&col);
                let r: f64 = mv
                    .iter()
                    .zip(&col)
                    .map(|(x, y)| (x - w[j] * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(r);
            }
            assert!(worst < 1e-11, "unitary residual {worst:e} at n={n}");
            assert!(v.unitary_residual() < 1e-11);
            // sorted by argument
            for i in 1..n {
                assert!(arg_2pi(w[i]) >= arg_2pi(w[i - 1]) - 1e-12);
            }
        }
    }

    #[test]
    fn unitary_handles_conjugate_pairs() {
        // Real rotation blocks give exactly conjugate eigenvalue pairs, which
        // collide in the real part and must be separated by the refinement.
        let t1 = 0.7f64;
        let t2 = 2.3f64;
        let mut m = CMatrix::zeros(4);
        for (off, t) in [(0usize, t1), (2usize, t2)] {
            m.set(off, off, c(t.cos(), 0.0));
            m.set(off, off + 1, c(-t.sin(), 0.0));
            m.set(off + 1, off, c(t.sin(), 0.0));
            m.set(off + 1, off + 1, c(t.cos(), 0.0));
        }
        let (w, v) = unitary_eigen(&m).unwrap();
        let mut args: Vec<f64> = w.iter().map(|z| arg_2pi(*z)).collect();
        args.sort_by(f64::total_cmp);
        let mut expect = vec![
            t1,
            std::f64::consts::TAU - t1,
            t2,
            std::f64::consts::TAU - t2,
        ];
        expect.sort_by(f64::total_cmp);
        for (a, b) in args.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let mut worst = 0.0f64;
        for j in 0..4 {
            let col = v.column(j);
            let mv = m.matvec(&col);
            let r: f64 = mv
                .iter()
                .zip(&col)
                .map(|(x, y)| (x - w[j] * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        assert!(worst < 1e-13, "residual {worst:e}");
    }

    // Two far-apart eigenvalues whose stage-one combined coordinates collide
    // exactly: cos(t) + MIX sin(t) is symmetric about atan(MIX), so the angle
    // pair (t, 2 atan(MIX) - t) aliases in the first Hermitian solve and must
    // be separated by the real-part refinement.
    #[test]
    fn unitary_separates_stage_one_aliases() {
        let phi0 = STAGE_MIX.atan();
        let t1 = 0.2f64;
        let t2 = 2.0 * phi0 - t1;
        let angles = [t1, t2, 2.5, 4.0];
        let mut rng = SeededRng::new(91);
        let q = random_unitary(&mut rng, 4);
        let mut scaled = CMatrix::zeros(4);
        for r in 0..4 {
            for cc in 0..4 {
                scaled.set(r, cc, q.get(r, cc) * c(angles[cc].cos(), angles[cc].sin()));
            }
        }
        let m = scaled.mul(&q.adjoint());
        // The alias is genuine: identical mixed coordinates, distant values.
        let tval = |t: f64| t.cos() + STAGE_MIX * t.sin();
        assert!((tval(t1) - tval(t2)).abs() < 1e-15);
        assert!((c(t1.cos(), t1.sin()) - c(t2.cos(), t2.sin())).norm() > 0.5);

        let (w, v) = unitary_eigen(&m).unwrap();
        let mut worst = 0.0f64;
        for j in 0..4 {
            let col = v.column(j);
            let mv = m.matvec(&col);
            let r: f64 = mv
                .iter()
                .zip(&col)
                .map(|(x, y)| (x - w[j] * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        assert!(worst < 1e-13, "aliased pair left residual {worst:e}");
        for t in angles {
            let target = c(t.cos(), t.sin());
            assert!(
                w.iter().any(|z| (z - target).norm() < 1e-12),
                "missing eigenvalue at angle {t}"
            );
        }
    }

    #[test]
    fn unitary_handles_exact_degeneracy() {
        // diag(i, i, -1): a doubly degenerate eigenvalue.
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 1.0), C_ZERO, C_ZERO],
            vec![C_ZERO, c(0.0, 1.0), C_ZERO],
            vec![C_ZERO, C_ZERO, c(-1.0, 0.0)],
        ])
        .unwrap();
        let (w, v) = unitary_eigen(&m).unwrap();
        let near_i = w
            .iter()
            .filter(|z| (*z - c(0.0, 1.0)).norm() < 1e-12)
            .count();
        assert_eq!(near_i, 2);
        assert!(v.unitary_residual() < 1e-12);
    }

    #[test]
    fn determinism() {
        let mut rng = SeededRng::new(5);
        let m = random_unitary(&mut rng, 12);
        let (w1, v1) = unitary_eigen(&m).unwrap();
        let (w2, v2) = unitary_eigen(&m).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(v1.data(), v2.data());
    }
}
