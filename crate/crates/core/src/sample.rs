//! Seedable random test instances. Nothing in the factorization itself is
//! random; these generators feed tests, benchmarks and the experiment CLI.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::factorlab::SpectralGroups;
use crate::matcore::{hermitian_eig_unchecked, polar_decompose, ComplexMatrix};

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex normal entries.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_normal(rng))
}

/// Rescales to unit operator norm (zero stays zero).
pub fn unit_norm(m: &ComplexMatrix) -> ComplexMatrix {
    let norm = m.norm();
    if norm == 0.0 { m.clone() } else { m.scale_real(1.0 / norm) }
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    gaussian(rng, n).hermitian_part()
}

/// Haar-distributed unitary (unitary polar factor of a Gaussian matrix).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        if let Ok(parts) = polar_decompose(&gaussian(rng, n)) {
            return parts.unitary;
        }
    }
}

/// Unitary with determinant one.
pub fn special_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let u = unitary(rng, n);
    let phase = u.determinant().arg();
    u.scale(Complex64::from_polar(1.0, -phase / n as f64))
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Positive definite with eigenvalues log-uniform in `[1, max_cond]`.
pub fn positive_definite<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> ComplexMatrix {
    let eig: Vec<f64> = (0..n).map(|_| log_uniform(rng, 1.0, max_cond)).collect();
    ComplexMatrix::from_real_diagonal(&eig).conjugate_by(&unitary(rng, n)).hermitian_part()
}

/// Unit-norm matrix with real positive determinant and condition number at
/// most `max_cond`.
pub fn det_positive<R: Rng + ?Sized>(rng: &mut R, n: usize, max_cond: f64) -> ComplexMatrix {
    let sigma: Vec<f64> = (0..n).map(|_| log_uniform(rng, 1.0, max_cond)).collect();
    let top = sigma.iter().copied().fold(0.0, f64::max);
    let scaled: Vec<f64> = sigma.iter().map(|s| s / top).collect();
    let w = unitary(rng, n);
    let v = unitary(rng, n);
    let x = &(&w * &ComplexMatrix::from_real_diagonal(&scaled)) * &v.adjoint();
    let phase = x.determinant().arg();
    x.scale(Complex64::from_polar(1.0, -phase / n as f64))
}

/// Traceless matrix with unit operator norm.
pub fn traceless<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian(rng, n);
    let shift = g.trace() / n as f64;
    unit_norm(&(&g - &ComplexMatrix::scalar(n, shift)))
}

pub fn unit_circle_points<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<Complex64> {
    (0..count).map(|_| Complex64::from_polar(1.0, TAU * rng.random::<f64>())).collect()
}

/// Unitary with `blocks` distinct random eigenvalues on random orthogonal
/// spectral subspaces (each of rank at least one), and its spectral groups.
pub fn finite_spectrum_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize, blocks: usize) -> (ComplexMatrix, SpectralGroups) {
    assert!((1..=n).contains(&blocks), "need 1 ≤ blocks ≤ n");
    let mut ranks = vec![1usize; blocks];
    for _ in blocks..n {
        ranks[rng.random_range(0..blocks)] += 1;
    }
    let basis = unitary(rng, n);
    let values: Vec<Complex64> = (0..blocks).map(|_| Complex64::from_polar(1.0, TAU * rng.random::<f64>())).collect();
    let mut projections = Vec::with_capacity(blocks);
    let mut start = 0;
    for &r in &ranks {
        let p = ComplexMatrix::from_fn(n, |i, j| {
            (start..start + r).map(|c| basis.get(i, c) * basis.get(j, c).conj()).sum()
        });
        projections.push(p.hermitian_part());
        start += r;
    }
    let groups = SpectralGroups { values, projections };
    (groups.reconstruct(), groups)
}

/// Random list of `count` positive definite factors.
pub fn positive_factors<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize, max_cond: f64) -> Vec<ComplexMatrix> {
    (0..count).map(|_| positive_definite(rng, n, max_cond)).collect()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &ComplexMatrix) -> f64 {
    hermitian_eig_unchecked(&h.hermitian_part()).eigenvalues[0].re
}
