#![allow(dead_code)]

use posfactor::{Complex64, ComplexMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `exp` by scaling and squaring around a 40-term Taylor series.
pub fn taylor_exp(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let norm = m.frobenius_norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m.scale_real(0.5f64.powi(squarings as i32));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..40 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Leibniz expansion; fine for n ≤ 5.
pub fn leibniz_det(m: &ComplexMatrix) -> Complex64 {
    fn go(m: &ComplexMatrix, row: usize, used: &mut Vec<bool>, sign: f64) -> Complex64 {
        let n = m.dim();
        if row == n {
            return Complex64::new(sign, 0.0);
        }
        let mut total = Complex64::new(0.0, 0.0);
        let mut s = sign;
        for col in 0..n {
            if used[col] {
                continue;
            }
            used[col] = true;
            total += m.get(row, col) * go(m, row + 1, used, s);
            used[col] = false;
            s = -s;
        }
        total
    }
    go(m, 0, &mut vec![false; m.dim()], 1.0)
}

/// Least-squares slope of `log err` against `log n`, negated.
pub fn fitted_order(ns: &[u32], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|&n| f64::from(n).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -cov / var
}
