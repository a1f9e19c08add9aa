//! Midpoint quadrature on uniform boxes over ℂⁿ (2n real dimensions) with
//! a fixed pairwise summation tree, so results do not depend on chunking.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::scalar::pairwise_sum;

/// An axis-aligned box in the 2n real coordinates (x₁,y₁,…,xₙ,yₙ).
#[derive(Clone, Debug)]
pub struct BoxRegion {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxRegion {
    pub fn around(centers: &[Complex64], radius: f64) -> Self {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for c in centers {
            lo.push(c.re - radius);
            hi.push(c.re + radius);
            lo.push(c.im - radius);
            hi.push(c.im + radius);
        }
        BoxRegion { lo, hi }
    }

    pub fn ndims(&self) -> usize {
        self.lo.len() / 2
    }

    pub fn volume(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b - a)
            .product()
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &BoxRegion) -> BoxRegion {
        BoxRegion {
            lo: self
                .lo
                .iter()
                .zip(&other.lo)
                .map(|(a, b)| a.min(*b))
                .collect(),
            hi: self
                .hi
                .iter()
                .zip(&other.hi)
                .map(|(a, b)| a.max(*b))
                .collect(),
        }
    }
}

/// Midpoint rule with `n_per_dim` points in each real dimension.
pub fn integrate(
    region: &BoxRegion,
    n_per_dim: usize,
    mut f: impl FnMut(&[Complex64]) -> Complex64,
) -> Complex64 {
    let dims = region.lo.len();
    let n = region.ndims();
    let steps: Vec<f64> = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| (b - a) / n_per_dim as f64)
        .collect();
    let cell_volume: f64 = steps.iter().product();
    let total: usize = n_per_dim.pow(dims as u32);
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; dims];
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    loop {
        for i in 0..n {
            let x = region.lo[2 * i] + (idx[2 * i] as f64 + 0.5) * steps[2 * i];
            let y = region.lo[2 * i + 1] + (idx[2 * i + 1] as f64 + 0.5) * steps[2 * i + 1];
            z[i] = Complex64::new(x, y);
        }
        values.push(f(&z));
        // odometer
        let mut d = dims;
        loop {
            if d == 0 {
                return pairwise_sum(&values) * cell_volume;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < n_per_dim {
                break;
            }
            idx[d] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_paraboloid_cap() {
        // ∫ over [−1,1]² of (1 − |z|²) restricted to |z| ≤ 1 equals π/2.
        let region = BoxRegion::around(&[Complex64::new(0.0, 0.0)], 1.0);
        let v = integrate(&region, 200, |z| {
            let r2 = z[0].norm_sqr();
            if r2 <= 1.0 {
                Complex64::new(1.0 - r2, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!((v.re - core::f64::consts::PI / 2.0).abs() < 2e-3, "{}", v.re);
    }
}
