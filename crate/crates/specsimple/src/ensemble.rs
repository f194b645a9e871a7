//! Seeded random inputs for the verification drivers.
//!
//! Trial operators are built in spectral form: eigenvalues on a jittered grid
//! (so gaps stay bounded below and threshold checks measure the theorems, not
//! eigenvalue collisions), conjugated by a random orthogonal or unitary
//! basis, with probe vectors whose eigenbasis overlaps are bounded away from
//! zero (so secular quantities stay well conditioned).

use num_complex::Complex64;

use crate::matrix::{dot, norm, CMatrix, C_ZERO};
use crate::operator::{DenseOperator, OperatorKind};
use crate::rng::SeededRng;

/// Random real orthogonal matrix (Gram-Schmidt on a Gaussian sample).
pub fn random_orthogonal(rng: &mut SeededRng, n: usize) -> CMatrix {
    gram_schmidt(n, || Complex64::new(rng.gaussian(), 0.0))
}

/// Random unitary matrix (Gram-Schmidt on a complex Gaussian sample).
pub fn random_unitary(rng: &mut SeededRng, n: usize) -> CMatrix {
    let mut draw = || Complex64::new(rng.gaussian(), rng.gaussian());
    gram_schmidt(n, &mut draw)
}

fn gram_schmidt(n: usize, mut draw: impl FnMut() -> Complex64) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| draw()).collect();
        for _ in 0..2 {
            for q in &cols {
                let p = dot(q, &v);
                crate::matrix::axpy_neg(&mut v, p, q);
            }
        }
        let nn = norm(&v);
        if nn < 1e-8 {
            continue; // essentially never; redraw
        }
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

/// `n` values on `[lo, hi]`, equally spaced with up to 30% jitter of the
/// spacing, so consecutive gaps stay above 0.4 of the nominal spacing.
pub fn jittered_grid(rng: &mut SeededRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi) + 0.1 * (hi - lo) * (rng.uniform() - 0.5)];
    }
    let s = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| lo + k as f64 * s + 0.3 * s * (2.0 * rng.uniform() - 1.0))
        .collect()
}

/// Real coefficients with moduli in [0.8, 1.2] and random signs; after
/// normalization every eigenbasis weight is comparable to 1/n.
pub fn floored_coefficients_real(rng: &mut SeededRng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.sign() * rng.uniform_in(0.8, 1.2), 0.0))
        .collect()
}

/// Complex coefficients with moduli in [0.8, 1.2] and uniform phases.
pub fn floored_coefficients_complex(rng: &mut SeededRng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| rng.unit_complex() * rng.uniform_in(0.8, 1.2))
        .collect()
}

/// Selfadjoint operator with prescribed eigenvalues in a random orthogonal
/// basis, plus the basis itself.
pub fn selfadjoint_from_spectrum(
    rng: &mut SeededRng,
    eigenvalues: &[f64],
) -> (DenseOperator, CMatrix) {
    let n = eigenvalues.len();
    let v = random_orthogonal(rng, n);
    let mut scaled = CMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            scaled.set(r, c, v.get(r, c) * eigenvalues[c]);
        }
    }
    let mut m = scaled.mul(&v.adjoint());
    // Exact symmetrization kills the rounding skew of the triple product.
    for r in 0..n {
        for c in r..n {
            let s = 0.5 * (m.get(r, c) + m.get(c, r).conj());
            m.set(r, c, s);
            m.set(c, r, s.conj());
        }
    }
    let op = DenseOperator::new(m, OperatorKind::Selfadjoint, (0..n as i64).collect())
        .expect("symmetrized spectral assembly is selfadjoint");
    (op, v)
}

/// Probe vector `V c / |V c|` with floored coefficients: cyclic for the
/// operator built from `V` with simple spectrum.
pub fn cyclic_probe(rng: &mut SeededRng, basis: &CMatrix, real: bool) -> Vec<Complex64> {
    let n = basis.dim();
    let c = if real {
        floored_coefficients_real(rng, n)
    } else {
        floored_coefficients_complex(rng, n)
    };
    let mut phi = vec![C_ZERO; n];
    for i in 0..n {
        let mut acc = C_ZERO;
        for k in 0..n {
            acc += basis.get(i, k) * c[k];
        }
        phi[i] = acc;
    }
    let nn = norm(&phi);
    phi.into_iter().map(|z| z / nn).collect()
}

/// A random selfadjoint operator with a cyclic unit probe vector.
pub fn selfadjoint_with_cyclic(rng: &mut SeededRng, n: usize) -> (DenseOperator, Vec<Complex64>) {
    let grid = jittered_grid(rng, n, -1.0, 1.0);
    let (op, basis) = selfadjoint_from_spectrum(rng, &grid);
    let phi = cyclic_probe(rng, &basis, true);
    (op, phi)
}

/// Two selfadjoint operators sharing one eigenvalue vector in independent
/// random bases (unitarily conjugate pair), each with a cyclic probe.
pub fn conjugate_pair_with_cyclic(
    rng: &mut SeededRng,
    n: usize,
) -> (DenseOperator, DenseOperator, Vec<Complex64>, Vec<Complex64>) {
    let grid = jittered_grid(rng, n, -1.0, 1.0);
    let (a1, v1) = selfadjoint_from_spectrum(rng, &grid);
    let (a2, v2) = selfadjoint_from_spectrum(rng, &grid);
    let phi1 = cyclic_probe(rng, &v1, true);
    let phi2 = cyclic_probe(rng, &v2, true);
    (a1, a2, phi1, phi2)
}

/// Two selfadjoint operators whose spectra share exactly `shared` locations,
/// with cyclic probes. Locations are drawn from one global jittered grid so
/// distinct locations stay separated.
pub fn overlapping_pair_with_cyclic(
    rng: &mut SeededRng,
    n1: usize,
    n2: usize,
    shared: usize,
) -> (DenseOperator, DenseOperator, Vec<Complex64>, Vec<Complex64>) {
    assert!(shared <= n1.min(n2));
    let total = n1 + n2 - shared;
    let grid = jittered_grid(rng, total, -1.0, 1.0);
    // Shuffle the grid deterministically, then deal the hands.
    let mut order: Vec<usize> = (0..total).collect();
    for i in (1..total).rev() {
        let j = rng.usize_in(0, i);
        order.swap(i, j);
    }
    let spec1: Vec<f64> = (0..n1).map(|k| grid[order[k]]).collect();
    let mut spec2: Vec<f64> = (0..shared).map(|k| grid[order[k]]).collect();
    spec2.extend((n1..n1 + (n2 - shared)).map(|k| grid[order[k]]));
    let (a1, v1) = selfadjoint_from_spectrum(rng, &spec1);
    let (a2, v2) = selfadjoint_from_spectrum(rng, &spec2);
    let phi1 = cyclic_probe(rng, &v1, true);
    let phi2 = cyclic_probe(rng, &v2, true);
    (a1, a2, phi1, phi2)
}

/// Random unitary operator with angularly jittered spectrum and a cyclic unit
/// probe vector.
pub fn unitary_with_cyclic(rng: &mut SeededRng, n: usize) -> (DenseOperator, Vec<Complex64>) {
    let q = random_unitary(rng, n);
    let spacing = std::f64::consts::TAU / n as f64;
    let angles: Vec<f64> = (0..n)
        .map(|k| k as f64 * spacing + 0.3 * spacing * (2.0 * rng.uniform() - 1.0))
        .collect();
    let mut scaled = CMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let phase = Complex64::new(angles[c].cos(), angles[c].sin());
            scaled.set(r, c, q.get(r, c) * phase);
        }
    }
    let m = scaled.mul(&q.adjoint());
    let op = DenseOperator::new(m, OperatorKind::Unitary, (0..n as i64).collect())
        .expect("conjugated diagonal unitary stays unitary");
    let phi = cyclic_probe(rng, &q, false);
    (op, phi)
}

/// Coupling cycle used by the selfadjoint ensembles.
pub fn lambda_cycle(trial: u64) -> f64 {
    [1.0, -1.0, 0.5, -0.5][(trial % 4) as usize]
}

/// Unimodular coupling bounded away from 1 (phase in [0.3, 2pi - 0.3]).
pub fn unimodular_away_from_one(rng: &mut SeededRng) -> Complex64 {
    let psi = rng.uniform_in(0.3, std::f64::consts::TAU - 0.3);
    Complex64::new(psi.cos(), psi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigendecompose, krylov_dimension};

    #[test]
    fn orthogonal_and_unitary_samples_are_orthonormal() {
        let mut rng = SeededRng::new(2);
        assert!(random_orthogonal(&mut rng, 12).unitary_residual() < 1e-13);
        assert!(random_unitary(&mut rng, 12).unitary_residual() < 1e-13);
    }

    #[test]
    fn jittered_grid_keeps_gaps() {
        let mut rng = SeededRng::new(3);
        let g = jittered_grid(&mut rng, 40, -1.0, 1.0);
        let s = 2.0 / 39.0;
        for w in g.windows(2) {
            assert!(w[1] - w[0] >= 0.4 * s - 1e-12, "gap {}", w[1] - w[0]);
        }
    }

    #[test]
    fn selfadjoint_probe_is_cyclic() {
        let mut rng = SeededRng::new(4);
        let (op, phi) = selfadjoint_with_cyclic(&mut rng, 16);
        assert_eq!(krylov_dimension(&op, &phi, 1e-10).unwrap(), 16);
        let d = eigendecompose(&op, 1e-10).unwrap();
        assert!(d.residual < 1e-12 * op.matrix().inf_norm().max(1.0));
    }

    #[test]
    fn conjugate_pair_shares_spectrum() {
        let mut rng = SeededRng::new(5);
        let (a1, a2, _, _) = conjugate_pair_with_cyclic(&mut rng, 10);
        let d1 = eigendecompose(&a1, 1e-10).unwrap();
        let d2 = eigendecompose(&a2, 1e-10).unwrap();
        for (x, y) in d1.values.iter().zip(&d2.values) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn overlapping_pair_counts() {
        let mut rng = SeededRng::new(6);
        let (a1, a2, phi1, phi2) = overlapping_pair_with_cyclic(&mut rng, 6, 5, 3);
        assert_eq!(a1.dim(), 6);
        assert_eq!(a2.dim(), 5);
        assert_eq!(krylov_dimension(&a1, &phi1, 1e-10).unwrap(), 6);
        assert_eq!(krylov_dimension(&a2, &phi2, 1e-10).unwrap(), 5);
        let d1 = eigendecompose(&a1, 1e-10).unwrap();
        let d2 = eigendecompose(&a2, 1e-10).unwrap();
        let mut shared = 0;
        for x in &d1.values {
            if d2.values.iter().any(|y| (x - y).norm() < 1e-9) {
                shared += 1;
            }
        }
        assert_eq!(shared, 3);
    }

    #[test]
    fn unitary_probe_is_cyclic() {
        let mut rng = SeededRng::new(7);
        let (op, phi) = unitary_with_cyclic(&mut rng, 12);
        assert!((norm(&phi) - 1.0).abs() < 1e-12);
        assert_eq!(krylov_dimension(&op, &phi, 1e-10).unwrap(), 12);
    }
}
