//! Rotating points of the unit circle by unimodular factors with product one
//! so that the rotated set becomes ε-dense.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `m ≥ 2` with `|e^{2πi/m} − 1| < ε/2`, together with `N = m²`.
///
/// `m = 1` is excluded: its single arc is the whole circle.
pub fn arc_resolution(eps: f64) -> Result<(usize, usize)> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let mut m = 2usize;
    while 2.0 * (PI / m as f64).sin() >= eps / 2.0 {
        m += 1;
    }
    Ok((m, m * m))
}

fn unit(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * turns)
}

/// Phase of `z` in turns, in `[0, 1)`.
fn turns(z: Complex64) -> f64 {
    let t = (z.arg() / TAU).rem_euclid(1.0);
    if t >= 1.0 { 0.0 } else { t }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusCorrection {
    pub lambdas: Vec<Complex64>,
    pub mus: Vec<Complex64>,
    pub epsilon: f64,
    pub m: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Index `k` of the arc from `ζ^k` to `ζ^{k+1}` that was used.
    pub arc_index: usize,
    /// Input indices that received `1, ζ, …, ζ^{m−1}`, in that order.
    pub chosen: Vec<usize>,
}

impl TorusCorrection {
    pub fn zeta(&self) -> Complex64 {
        unit(1.0 / self.m as f64)
    }

    /// The rotated points `μ_j⁻¹·λ_j`.
    pub fn corrected(&self) -> Vec<Complex64> {
        self.lambdas.iter().zip(&self.mus).map(|(l, mu)| l / mu).collect()
    }

    /// `|Π μ_j − 1|`.
    pub fn product_defect(&self) -> f64 {
        (self.mus.iter().product::<Complex64>() - 1.0).norm()
    }

    /// Largest distance from a point of the `spacing`-grid on the circle to
    /// the nearest rotated point.
    pub fn density_gap(&self, spacing: f64) -> f64 {
        density_gap(&self.corrected(), spacing)
    }

    /// Brute scan on a grid of spacing `ε/10`: every grid point must lie
    /// within `ε` of a rotated point.
    pub fn passes_density_scan(&self) -> bool {
        self.density_gap(self.epsilon / 10.0) < self.epsilon
    }
}

/// Brute-force density gap of `points` over a uniform grid on the circle
/// whose arc spacing is at most `spacing`.
pub fn density_gap(points: &[Complex64], spacing: f64) -> f64 {
    let count = (TAU / spacing).ceil().max(1.0) as usize;
    (0..count)
        .map(|k| {
            let g = unit(k as f64 / count as f64);
            points.iter().map(|p| (g - p).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Chooses `μ_1, …, μ_n` on the circle with product one such that the points
/// `μ_j⁻¹·λ_j` are ε-dense.
///
/// Among the `m` arcs cut by the `m`-th roots of unity, the lowest-indexed arc
/// holding at least `m` of the points is used; its `m` lowest-indexed points
/// get `1, ζ, …, ζ^{m−1}`, which spreads them one per arc. All other points
/// share the principal `(n − m)`-th root of `ζ^{−m(m−1)/2}`.
pub fn eps_dense_correction(lambdas: &[Complex64], eps: f64) -> Result<TorusCorrection> {
    let (m, big_n) = arc_resolution(eps)?;
    let n = lambdas.len();
    if n < big_n {
        return Err(Error::InsufficientPoints { required: big_n, got: n });
    }
    if let Some(z) = lambdas.iter().find(|z| (z.norm() - 1.0).abs() > 1e-10) {
        return Err(Error::InvalidArgument(format!("point {z} is not on the unit circle")));
    }

    let arc_of = |z: &Complex64| ((turns(*z) * m as f64).floor() as usize).min(m - 1);
    let mut counts = vec![0usize; m];
    for z in lambdas {
        counts[arc_of(z)] += 1;
    }
    let arc_index = counts
        .iter()
        .position(|&c| c >= m)
        .expect("pigeonhole: n ≥ m² points over m arcs");
    let chosen: Vec<usize> = (0..n).filter(|&j| arc_of(&lambdas[j]) == arc_index).take(m).collect();

    // ζ^{−m(m−1)/2} reduced exactly to ζ^e with 0 ≤ e < m.
    let e = (m * m - (m * (m - 1) / 2) % m) % m;
    let mut phase = e as f64 / m as f64;
    if phase > 0.5 {
        phase -= 1.0;
    }
    let tail = unit(phase / (n - m) as f64);

    let mut mus = vec![tail; n];
    for (power, &j) in chosen.iter().enumerate() {
        mus[j] = unit(power as f64 / m as f64);
    }
    Ok(TorusCorrection { lambdas: lambdas.to_vec(), mus, epsilon: eps, m, big_n, arc_index, chosen })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_for_half() {
        assert_eq!(arc_resolution(0.5).unwrap(), (26, 676));
        assert!(arc_resolution(0.0).is_err());
    }

    #[test]
    fn all_ones_become_dense() {
        let (_, n) = arc_resolution(0.5).unwrap();
        let c = eps_dense_correction(&vec![Complex64::new(1.0, 0.0); n], 0.5).unwrap();
        assert_eq!(c.arc_index, 0);
        assert_eq!(c.chosen, (0..26).collect::<Vec<_>>());
        assert!(c.passes_density_scan());
        assert!(c.product_defect() <= 1e-12);
    }

    #[test]
    fn too_few_points() {
        let err = eps_dense_correction(&[Complex64::new(1.0, 0.0); 10], 0.5).unwrap_err();
        assert_eq!(err, Error::InsufficientPoints { required: 676, got: 10 });
    }

    #[test]
    fn rejects_points_off_the_circle() {
        let mut pts = vec![Complex64::new(1.0, 0.0); 676];
        pts[3] = Complex64::new(2.0, 0.0);
        assert!(matches!(eps_dense_correction(&pts, 0.5), Err(Error::InvalidArgument(_))));
    }
}
