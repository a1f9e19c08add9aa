//! First-order Wirtinger jets: value plus ∂/∂z_i and ∂/∂z̄_i, carried
//! through arithmetic so bump profiles and cut-offs expose closed-form
//! derivatives rather than finite differences.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct Jet {
    pub value: Complex64,
    pub dz: Vec<Complex64>,
    pub dzbar: Vec<Complex64>,
}

impl Jet {
    pub fn constant(n: usize, v: Complex64) -> Self {
        Jet {
            value: v,
            dz: vec![Complex64::new(0.0, 0.0); n],
            dzbar: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// The coordinate function z_i at a point.
    pub fn coord(n: usize, i: usize, z: Complex64) -> Self {
        let mut j = Jet::constant(n, z);
        j.dz[i] = Complex64::new(1.0, 0.0);
        j
    }

    /// The conjugate coordinate z̄_i at a point.
    pub fn coord_bar(n: usize, i: usize, z: Complex64) -> Self {
        let mut j = Jet::constant(n, z.conj());
        j.dzbar[i] = Complex64::new(1.0, 0.0);
        j
    }

    pub fn add(&self, o: &Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            dz: self.dz.iter().zip(&o.dz).map(|(a, b)| a + b).collect(),
            dzbar: self.dzbar.iter().zip(&o.dzbar).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            dz: self
                .dz
                .iter()
                .zip(&o.dz)
                .map(|(a, b)| a * o.value + self.value * b)
                .collect(),
            dzbar: self
                .dzbar
                .iter()
                .zip(&o.dzbar)
                .map(|(a, b)| a * o.value + self.value * b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet {
            value: self.value * c,
            dz: self.dz.iter().map(|a| a * c).collect(),
            dzbar: self.dzbar.iter().map(|a| a * c).collect(),
        }
    }

    pub fn conj(&self) -> Jet {
        Jet {
            value: self.value.conj(),
            dz: self.dzbar.iter().map(|a| a.conj()).collect(),
            dzbar: self.dz.iter().map(|a| a.conj()).collect(),
        }
    }

    /// |self|² = self · conj(self); real-valued.
    pub fn norm_sq(&self) -> Jet {
        self.mul(&self.conj())
    }

    /// Applies a real smooth function given by (value, derivative) at the
    /// real part of the jet's value. Sound only for real-valued jets.
    pub fn apply_real(&self, f: f64, fp: f64) -> Jet {
        let fp = Complex64::new(fp, 0.0);
        Jet {
            value: Complex64::new(f, 0.0),
            dz: self.dz.iter().map(|a| a * fp).collect(),
            dzbar: self.dzbar.iter().map(|a| a * fp).collect(),
        }
    }
}

/// The exp-based unit smoothstep: 0 on (−∞,0], 1 on [1,∞), C^∞ monotone
/// between. Returns (s, s′).
pub fn smoothstep(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= 1.0 {
        return (1.0, 0.0);
    }
    let e1 = libm::exp(-1.0 / x);
    let e2 = libm::exp(-1.0 / (1.0 - x));
    let s = e1 / (e1 + e2);
    let d1 = e1 / (x * x);
    let d2 = e2 / ((1.0 - x) * (1.0 - x));
    // s′ = (e1′ e2 − e1 e2′)/(e1+e2)², with e2′ = −d2.
    let sp = (d1 * e2 + e1 * d2) / ((e1 + e2) * (e1 + e2));
    (s, sp)
}

/// Regularization profile χ: 0 on t ≤ 1, 1 on t ≥ 2. Returns (χ, χ′).
pub fn chi(t: f64) -> (f64, f64) {
    smoothstep(t - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_endpoints_and_monotone() {
        assert_eq!(smoothstep(-1.0), (0.0, 0.0));
        assert_eq!(smoothstep(2.0), (1.0, 0.0));
        let (half, _) = smoothstep(0.5);
        assert!((half - 0.5).abs() < 1e-12);
        let mut prev = 0.0;
        for k in 1..100 {
            let (v, d) = smoothstep(k as f64 / 100.0);
            assert!(v >= prev && d >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn smoothstep_derivative_matches_finite_difference() {
        let h = 1e-6;
        for &x in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let (_, d) = smoothstep(x);
            let fd = (smoothstep(x + h).0 - smoothstep(x - h).0) / (2.0 * h);
            assert!((d - fd).abs() < 1e-5, "x={} d={} fd={}", x, d, fd);
        }
    }

    #[test]
    fn jet_chain_rule_on_norm() {
        // f = |z|²: ∂f/∂z = z̄, ∂f/∂z̄ = z.
        let z = Complex64::new(0.7, -0.3);
        let j = Jet::coord(1, 0, z).norm_sq();
        assert!((j.value - Complex64::new(z.norm_sqr(), 0.0)).norm() < 1e-14);
        assert!((j.dz[0] - z.conj()).norm() < 1e-14);
        assert!((j.dzbar[0] - z).norm() < 1e-14);
    }
}
