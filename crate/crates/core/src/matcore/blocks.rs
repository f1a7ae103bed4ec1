use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

/// `x = left · middle · right` with unipotent triangular outer factors and a
/// block-diagonal middle factor `diag(y, d)`, `y = a − b·d⁻¹·c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockFactors {
    pub left: ComplexMatrix,
    pub middle: ComplexMatrix,
    pub right: ComplexMatrix,
}

impl BlockFactors {
    pub fn reconstruct(&self) -> ComplexMatrix {
        &(&self.left * &self.middle) * &self.right
    }
}

/// Splits `x = [[a, b], [c, d]]` with `d` of size `k × k` and factors it
/// through the Schur complement of `d`.
pub fn block_invertible_decomposition(x: &ComplexMatrix, k: usize) -> Result<BlockFactors> {
    let n = x.dim();
    if k == 0 || k >= n {
        return Err(Error::InvalidBlockSplit { n, k });
    }
    let top = n - k;
    let a = x.sub_block(0, 0, top, top);
    let b = x.sub_block(0, top, top, k);
    let c = x.sub_block(top, 0, k, top);
    let d = x.sub_block(top, top, k, k);

    let d_norm = d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let d_min = d.singular_values().min();
    if d_norm == 0.0 || d_min <= tolerances().singular * d_norm {
        return Err(Error::BlockNotInvertible);
    }
    let d_inv = d.clone().try_inverse().ok_or(Error::BlockNotInvertible)?;

    let b_dinv = &b * &d_inv;
    let dinv_c = &d_inv * &c;
    let y = &a - &b_dinv * &c;

    let one = Complex64::new(1.0, 0.0);
    let mut left = DMatrix::identity(n, n) * one;
    left.view_mut((0, top), (top, k)).copy_from(&b_dinv);
    let mut right = DMatrix::identity(n, n) * one;
    right.view_mut((top, 0), (k, top)).copy_from(&dinv_c);
    let mut middle = DMatrix::zeros(n, n);
    middle.view_mut((0, 0), (top, top)).copy_from(&y);
    middle.view_mut((top, top), (k, k)).copy_from(&d);

    Ok(BlockFactors {
        left: ComplexMatrix::from_nalgebra(left),
        middle: ComplexMatrix::from_nalgebra(middle),
        right: ComplexMatrix::from_nalgebra(right),
    })
}
