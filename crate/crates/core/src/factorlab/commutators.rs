//! Commutator decompositions: every traceless matrix is a single commutator,
//! a commutator with non-Hermitian right slot splits into two with Hermitian
//! right slots, and a block matrix with zero diagonal blocks is an explicit
//! sum of commutators.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{normal_eig, ComplexMatrix, I, ONE, ZERO};
use crate::tolerance::tolerances;

/// Pairs `(x_k, y_k)` whose commutators sum to a target, and the achieved
/// residual `‖Σ [x_k, y_k] − target‖`.
///
/// Decompositions produced by [`hermitian_pair_split`] and
/// [`zero_diagonal_commutators`] have Hermitian right slots; the single pair
/// from [`shoda_commutator`] generally does not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorDecomposition {
    pub pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
    pub residual: f64,
}

impl CommutatorDecomposition {
    fn new(target: &ComplexMatrix, pairs: Vec<(ComplexMatrix, ComplexMatrix)>) -> Self {
        let mut d = Self { pairs, residual: 0.0 };
        d.residual = d.commutator_sum(target.dim()).distance(target);
        d
    }

    /// `Σ [x_k, y_k]`.
    pub fn commutator_sum(&self, n: usize) -> ComplexMatrix {
        self.pairs.iter().fold(ComplexMatrix::zeros(n), |acc, (x, y)| &acc + &x.commutator(y))
    }

    /// Largest relative deviation from Hermitian symmetry over right slots.
    pub fn max_right_hermitian_defect(&self) -> f64 {
        self.pairs
            .iter()
            .map(|(_, y)| {
                let scale = y.norm();
                if scale == 0.0 { 0.0 } else { y.hermitian_defect() / scale }
            })
            .fold(0.0, f64::max)
    }
}

/// Unitary DFT matrix `F_{jk} = e^{2πi·jk/n}/√n`.
fn dft(n: usize) -> ComplexMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |j, k| {
        let t = ((j * k) % n) as f64 / n as f64;
        (I * TAU * t).exp() * scale
    })
}

/// Orthonormal completion of the columns of `basis` (assumed independent,
/// not necessarily orthonormal) by Gram-Schmidt against the standard basis.
fn complete_basis(n: usize, basis: &[nalgebra::DVector<Complex64>]) -> Vec<nalgebra::DVector<Complex64>> {
    let mut ortho: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(n);
    for v in basis {
        let mut w = v.clone();
        for q in &ortho {
            let proj = q.dotc(&w);
            w -= q * proj;
        }
        let norm = w.norm();
        ortho.push(w / Complex64::new(norm, 0.0));
    }
    let mut extra = Vec::new();
    for i in 0..n {
        if ortho.len() + extra.len() == n {
            break;
        }
        let mut w = nalgebra::DVector::from_element(n, ZERO);
        w[i] = ONE;
        for q in ortho.iter().chain(extra.iter()) {
            let proj = q.dotc(&w);
            w -= q * proj;
        }
        let norm = w.norm();
        if norm > 0.5 {
            extra.push(w / Complex64::new(norm, 0.0));
        }
    }
    extra
}

/// Finds `s` with `s⁻¹·c·s` zero on the diagonal for a non-normal traceless
/// `c`, by deflation: at each level choose `v` with `v`, `c·v` independent and
/// switch to a basis starting `v, c·v/‖c·v‖, …`, which zeroes the leading
/// diagonal entry and leaves a traceless trailing block.
fn deflation_similarity(c: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = c.dim();
    let mut t = c.as_nalgebra().clone();
    let mut s = DMatrix::<Complex64>::identity(n, n);
    let scale = c.norm();
    for level in 0..n.saturating_sub(1) {
        let m = n - level;
        let block = t.view((level, level), (m, m)).into_owned();
        let block_norm = block.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if block_norm <= 1e-14 * scale {
            break;
        }
        if block[(0, 0)].norm() <= 1e-15 * scale {
            continue;
        }
        // Candidate v: standard vectors and normalized pair sums; keep the
        // one whose image has the largest component orthogonal to it.
        let mut best: Option<(f64, nalgebra::DVector<Complex64>)> = None;
        let mut consider = |v: nalgebra::DVector<Complex64>| {
            let cv = &block * &v;
            let along = v.dotc(&cv);
            let ortho = (&cv - &v * along).norm();
            if best.as_ref().is_none_or(|(score, _)| ortho > *score) {
                best = Some((ortho, v));
            }
        };
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..m {
            let mut v = nalgebra::DVector::from_element(m, ZERO);
            v[i] = ONE;
            consider(v);
            for j in (i + 1)..m {
                for phase in [ONE, I] {
                    let mut v = nalgebra::DVector::from_element(m, ZERO);
                    v[i] = Complex64::new(r, 0.0);
                    v[j] = phase * r;
                    consider(v);
                }
            }
        }
        let (score, v) = best.expect("at least one candidate");
        if score <= 1e-13 * scale {
            return Err(Error::InvalidArgument("deflation found no non-eigenvector direction".into()));
        }
        let cv = &block * &v;
        let w = &cv / Complex64::new(cv.norm(), 0.0);
        let rest = complete_basis(m, &[v.clone(), w.clone()]);
        let mut p = DMatrix::<Complex64>::zeros(m, m);
        p.set_column(0, &v);
        p.set_column(1, &w);
        for (k, q) in rest.iter().enumerate() {
            p.set_column(k + 2, q);
        }
        let p_inv = p.clone().try_inverse().ok_or(Error::NotInvertible { smallest_singular: 0.0 })?;
        let mut step = DMatrix::<Complex64>::identity(n, n);
        step.view_mut((level, level), (m, m)).copy_from(&p);
        let mut step_inv = DMatrix::<Complex64>::identity(n, n);
        step_inv.view_mut((level, level), (m, m)).copy_from(&p_inv);
        t = &step_inv * &t * &step;
        s *= &step;
    }
    let s = ComplexMatrix::from_nalgebra(s);
    let s_inv = s.inverse()?;
    Ok((s, s_inv))
}

/// Writes a traceless `c` as one commutator `[x, y]`.
///
/// `c` is first brought to zero-diagonal form by a similarity (unitary for
/// normal `c`: eigenbasis followed by the DFT, which spreads the eigenvalues
/// evenly over the diagonal). With `x' = diag(1, …, n)` the off-diagonal
/// equation `(i − j)·y'_{ij} = c'_{ij}` is then solved directly, and both
/// matrices are transported back.
pub fn shoda_commutator(c: &ComplexMatrix) -> Result<CommutatorDecomposition> {
    let n = c.dim();
    let trace = c.trace();
    let scale = c.norm();
    if trace.norm() > tolerances().trace * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::TraceObstruction { trace });
    }
    let x_diag = ComplexMatrix::from_fn(n, |i, j| if i == j { Complex64::new((i + 1) as f64, 0.0) } else { ZERO });
    if scale == 0.0 {
        return Ok(CommutatorDecomposition::new(c, vec![(x_diag, ComplexMatrix::zeros(n))]));
    }

    let (s, s_inv) = if c.normality_defect() <= 1e-12 * scale * scale {
        let eig = normal_eig(c)?;
        let w = &eig.eigenvectors * &dft(n);
        let w_inv = w.adjoint();
        (w, w_inv)
    } else {
        deflation_similarity(c)?
    };

    let zero_diag = &(&s_inv * c) * &s;
    let y_prime = ComplexMatrix::from_fn(n, |i, j| {
        if i == j { ZERO } else { zero_diag.get(i, j) / (i as f64 - j as f64) }
    });
    let x = &(&s * &x_diag) * &s_inv;
    let y = &(&s * &y_prime) * &s_inv;
    Ok(CommutatorDecomposition::new(c, vec![(x, y)]))
}

/// `[x, y] = [x, y₁] + [i·x, y₂]` where `y = y₁ + i·y₂` with `y₁, y₂` Hermitian.
pub fn hermitian_pair_split(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<CommutatorDecomposition> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    let y1 = y.hermitian_part();
    let y2 = y.skew_hermitian_part();
    let target = x.commutator(y);
    Ok(CommutatorDecomposition::new(&target, vec![(x.clone(), y1), (x.scale(I), y2)]))
}

/// For `a` made of `n × n` blocks of size `k` with zero diagonal blocks,
/// returns the pairs `(e^{ij} ⊗ a_{ij}, e^{jj} ⊗ 1)` for every nonzero
/// off-diagonal block; their commutators sum to `a` exactly.
pub fn zero_diagonal_commutators(a: &ComplexMatrix, block_size: usize) -> Result<CommutatorDecomposition> {
    let dim = a.dim();
    if block_size == 0 || !dim.is_multiple_of(block_size) {
        return Err(Error::InvalidArgument(format!("block size {block_size} does not divide dimension {dim}")));
    }
    let k = block_size;
    let blocks = dim / k;
    let block = |i: usize, j: usize| a.sub_block(i * k, j * k, k, k);
    for i in 0..blocks {
        if block(i, i).iter().any(|z| *z != ZERO) {
            return Err(Error::NonZeroDiagonalBlock { block: i });
        }
    }
    let mut pairs = Vec::new();
    for i in 0..blocks {
        for j in 0..blocks {
            if i == j {
                continue;
            }
            let aij = block(i, j);
            if aij.iter().all(|z| *z == ZERO) {
                continue;
            }
            let mut left = DMatrix::<Complex64>::zeros(dim, dim);
            left.view_mut((i * k, j * k), (k, k)).copy_from(&aij);
            let right = ComplexMatrix::from_fn(dim, |r, c| if r == c && r / k == j { ONE } else { ZERO });
            pairs.push((ComplexMatrix::from_nalgebra(left), right));
        }
    }
    Ok(CommutatorDecomposition::new(a, pairs))
}
