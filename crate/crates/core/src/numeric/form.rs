//! Numeric test forms: polynomial amplitudes times radial exp-smoothstep
//! bumps, with closed-form antiholomorphic derivatives, plus the partition
//! of unity profiles bound to the symbolic ρ/θ generators.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::pointform::FormScalar;
use super::quad::BoxRegion;
use crate::jet::smoothstep;
use crate::poly::Poly;

/// Radial bump: ≡1 inside radius `r_in`, ≡0 outside `r_out`, smooth between.
#[derive(Clone, Debug)]
pub struct Bump {
    pub center: Vec<Complex64>,
    pub r_in: f64,
    pub r_out: f64,
}

impl Bump {
    fn t(&self, z: &[Complex64]) -> f64 {
        let r2: f64 = z
            .iter()
            .zip(&self.center)
            .map(|(a, c)| (a - c).norm_sqr())
            .sum();
        (r2 - self.r_in * self.r_in) / (self.r_out * self.r_out - self.r_in * self.r_in)
    }

    pub fn eval(&self, z: &[Complex64]) -> f64 {
        1.0 - smoothstep(self.t(z)).0
    }

    /// (value, ∂/∂z̄_i list, ∂/∂z_i list).
    pub fn eval_jet(&self, z: &[Complex64]) -> (f64, Vec<Complex64>, Vec<Complex64>) {
        let denom = self.r_out * self.r_out - self.r_in * self.r_in;
        let (_, sp) = smoothstep(self.t(z));
        let factor = -sp / denom;
        let mut dzbar = Vec::with_capacity(z.len());
        let mut dz = Vec::with_capacity(z.len());
        for (a, c) in z.iter().zip(&self.center) {
            // ∂r²/∂z̄_i = (z_i − c_i), ∂r²/∂z_i = conj(z_i − c_i).
            dzbar.push(factor * (a - c));
            dz.push(factor * (a - c).conj());
        }
        (self.eval(z), dzbar, dz)
    }
}

/// A compactly supported smooth form: Σ poly(z, z̄)·bump, carrying fixed
/// dz and dz̄ factors given as masks.
#[derive(Clone, Debug)]
pub struct TestForm {
    pub ndims: usize,
    /// Polynomial amplitudes in 2n variables (z's then z̄'s) with bumps.
    pub terms: Vec<(Poly, Bump)>,
    pub dz_mask: u8,
    pub dzbar_mask: u8,
}

impl TestForm {
    /// bump(center, radii) · 1 with the given masks.
    pub fn bump(ndims: usize, center: Vec<Complex64>, r_in: f64, r_out: f64, dz_mask: u8, dzbar_mask: u8) -> Self {
        TestForm {
            ndims,
            terms: vec![(
                Poly::one_in(2 * ndims),
                Bump {
                    center,
                    r_in,
                    r_out,
                },
            )],
            dz_mask,
            dzbar_mask,
        }
    }

    fn poly_point(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut pt = z.to_vec();
        pt.extend(z.iter().map(|w| w.conj()));
        pt
    }

    pub fn amplitude(&self, z: &[Complex64]) -> Complex64 {
        let pt = self.poly_point(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, b) in &self.terms {
            acc += p.eval(&pt) * b.eval(z);
        }
        acc
    }

    /// ∂amplitude/∂z̄_i in closed form.
    pub fn dbar_amplitude(&self, z: &[Complex64]) -> Vec<Complex64> {
        let pt = self.poly_point(z);
        let n = self.ndims;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (p, b) in &self.terms {
            let (bv, dzbar, _) = b.eval_jet(z);
            let pv = p.eval(&pt);
            for i in 0..n {
                let dp = p.derivative(n + i).eval(&pt);
                out[i] += dp * bv + pv * dzbar[i];
            }
        }
        out
    }

    /// The form as a mask-indexed scalar at z (amplitude on dzbar_mask).
    pub fn eval_scalar(&self, z: &[Complex64]) -> FormScalar {
        let mut fs = FormScalar::new();
        let a = self.amplitude(z);
        if a.norm() > 0.0 {
            fs.insert(self.dzbar_mask, a);
        }
        fs
    }

    /// ∂̄φ as a mask-indexed scalar (each dz̄_i wedged from the left of the
    /// existing dz̄-part).
    pub fn eval_dbar_scalar(&self, z: &[Complex64]) -> FormScalar {
        let mut fs = FormScalar::new();
        let d = self.dbar_amplitude(z);
        for (i, coeff) in d.iter().enumerate() {
            if coeff.norm() == 0.0 {
                continue;
            }
            let bit = 1u8 << i;
            if let Some(sign) = super::pointform::wedge_sign(bit, self.dzbar_mask) {
                *fs.entry(bit | self.dzbar_mask)
                    .or_insert(Complex64::new(0.0, 0.0)) += coeff * sign;
            }
        }
        fs
    }

    /// Bounding box of the support.
    pub fn support_region(&self) -> BoxRegion {
        let mut region: Option<BoxRegion> = None;
        for (_, b) in &self.terms {
            let r = BoxRegion::around(&b.center, b.r_out);
            region = Some(match region {
                None => r,
                Some(acc) => acc.hull(&r),
            });
        }
        region.expect("test form has at least one term")
    }

    /// Value of φ at a point with the polynomial prefactor only (no bump),
    /// used by oracles that evaluate at the bump plateau.
    pub fn plateau_amplitude(&self, z: &[Complex64]) -> Complex64 {
        let pt = self.poly_point(z);
        self.terms.iter().map(|(p, _)| p.eval(&pt)).sum()
    }
}

/// Partition-of-unity profiles: numeric values of ρ_α and θ_α = ∂̄ρ_α
/// matching the symbolic generators chart for chart.
#[derive(Clone, Debug)]
pub enum PartitionOfUnity {
    /// Normalized bumps on ℂⁿ charts.
    NormalizedBumps { bumps: Vec<Bump> },
    /// The standard P¹ pair: ρ₀ = s(2 − |z|²), ρ₁ = 1 − ρ₀, in the
    /// global chart-0 coordinate.
    P1Standard,
}

impl PartitionOfUnity {
    pub fn ncharts(&self) -> usize {
        match self {
            PartitionOfUnity::NormalizedBumps { bumps } => bumps.len(),
            PartitionOfUnity::P1Standard => 2,
        }
    }

    pub fn rho(&self, alpha: usize, z: &[Complex64]) -> f64 {
        match self {
            PartitionOfUnity::NormalizedBumps { bumps } => {
                let total: f64 = bumps.iter().map(|b| b.eval(z)).sum();
                bumps[alpha].eval(z) / total
            }
            PartitionOfUnity::P1Standard => {
                let t = 2.0 - z[0].norm_sqr();
                let s = smoothstep(t).0;
                if alpha == 0 {
                    s
                } else {
                    1.0 - s
                }
            }
        }
    }

    /// θ_α = ∂̄ρ_α as dz̄-coefficients.
    pub fn theta(&self, alpha: usize, z: &[Complex64]) -> Vec<Complex64> {
        match self {
            PartitionOfUnity::NormalizedBumps { bumps } => {
                let n = z.len();
                let total: f64 = bumps.iter().map(|b| b.eval(z)).sum();
                let mut dtotal = vec![Complex64::new(0.0, 0.0); n];
                for b in bumps {
                    let (_, dzbar, _) = b.eval_jet(z);
                    for i in 0..n {
                        dtotal[i] += dzbar[i];
                    }
                }
                let (bv, dzbar, _) = bumps[alpha].eval_jet(z);
                (0..n)
                    .map(|i| (dzbar[i] * total - bv * dtotal[i]) / (total * total))
                    .collect()
            }
            PartitionOfUnity::P1Standard => {
                // ∂̄ρ₀ = s′(2−|z|²)·(−z) dz̄.
                let t = 2.0 - z[0].norm_sqr();
                let (_, sp) = smoothstep(t);
                let v = -z[0] * sp;
                if alpha == 0 {
                    vec![v]
                } else {
                    vec![-v]
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_plateau_and_support() {
        let b = Bump {
            center: vec![Complex64::new(0.0, 0.0)],
            r_in: 0.5,
            r_out: 1.0,
        };
        assert_eq!(b.eval(&[Complex64::new(0.3, 0.2)]), 1.0);
        assert_eq!(b.eval(&[Complex64::new(1.2, 0.0)]), 0.0);
        let mid = b.eval(&[Complex64::new(0.8, 0.0)]);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn bump_derivative_matches_finite_difference() {
        let b = Bump {
            center: vec![Complex64::new(0.1, -0.2)],
            r_in: 0.4,
            r_out: 1.1,
        };
        let z = [Complex64::new(0.6, 0.3)];
        let (_, dzbar, dz) = b.eval_jet(&z);
        let h = 1e-6;
        let fx = (b.eval(&[z[0] + h]) - b.eval(&[z[0] - h])) / (2.0 * h);
        let fy = (b.eval(&[z[0] + Complex64::new(0.0, h)])
            - b.eval(&[z[0] - Complex64::new(0.0, h)]))
            / (2.0 * h);
        let dzbar_fd = Complex64::new(fx, fy) * 0.5;
        let dz_fd = Complex64::new(fx, -fy) * 0.5;
        assert!((dzbar[0] - dzbar_fd).norm() < 1e-5);
        assert!((dz[0] - dz_fd).norm() < 1e-5);
    }

    #[test]
    fn pou_sums_to_one_and_thetas_cancel() {
        let pou = PartitionOfUnity::P1Standard;
        for &r in &[0.3, 0.9, 1.1, 1.3, 2.0] {
            let z = [Complex64::new(r, 0.1)];
            let s: f64 = (0..2).map(|a| pou.rho(a, &z)).sum();
            assert!((s - 1.0).abs() < 1e-12);
            let t: Complex64 = (0..2).map(|a| pou.theta(a, &z)[0]).sum();
            assert!(t.norm() < 1e-12);
        }
        let bumps = vec![
            Bump {
                center: vec![Complex64::new(0.0, 0.0)],
                r_in: 1.0,
                r_out: 2.0,
            },
            Bump {
                center: vec![Complex64::new(0.5, 0.0)],
                r_in: 1.0,
                r_out: 2.0,
            },
        ];
        let pou2 = PartitionOfUnity::NormalizedBumps { bumps };
        let z = [Complex64::new(0.4, 0.3)];
        let s: f64 = (0..2).map(|a| pou2.rho(a, &z)).sum();
        assert!((s - 1.0).abs() < 1e-12);
        let t: Complex64 = (0..2).map(|a| pou2.theta(a, &z)[0]).sum();
        assert!(t.norm() < 1e-12);
    }
}
