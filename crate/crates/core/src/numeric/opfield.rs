//! Pointwise operator fields built from a twisting cochain: the blockwise
//! Moore–Penrose inverse σ⁰, the twisted inverse σ, the form-valued u, the
//! defect projectors Q⁰ and Q, and the ε-regularized residue field
//! R_ε = (1−χ_ε)·id + χ_ε(Q − u∇Q) + ∂̄χ_ε ∧ u.
//!
//! All ∂̄'s of operator fields are central finite differences in the
//! conjugate variables, run at two step sizes when an observed convergence
//! order is required.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::cochain::NumCochain;
use super::pointform::{wedge_sign, FormMat, FormScalar};
use super::svd::{matmulc, pinv, CMat};
use crate::jet::chi;
use crate::matrix::Mat;
use crate::nerve::Nerve;
use crate::poly::Poly;
use crate::twist::TwistingCochain;

/// A holomorphic section tuple F with {F = 0} ⊇ Z, driving χ_ε = χ(|F|²/ε).
#[derive(Clone, Debug)]
pub struct Cutoff {
    pub polys: Vec<Poly>,
}

impl Cutoff {
    pub fn norm_sq(&self, z: &[Complex64]) -> f64 {
        self.polys.iter().map(|p| p.eval(z).norm_sqr()).sum()
    }

    /// (χ_ε, ∂̄χ_ε) at a point: ∂̄|F|² = Σ_i F_i · conj(∂F_i/∂z_j) dz̄_j.
    pub fn chi_eps(&self, z: &[Complex64], eps: f64) -> (f64, FormScalar) {
        let t = self.norm_sq(z) / eps;
        let (c, cp) = chi(t);
        let mut dbar = FormScalar::new();
        if cp != 0.0 {
            for j in 0..z.len() {
                let mut g = Complex64::new(0.0, 0.0);
                for p in self.polys.iter() {
                    g += p.eval(z) * p.derivative(j).eval(z).conj();
                }
                let v = g * (cp / eps);
                if v.norm() > 0.0 {
                    dbar.insert(1u8 << j, v);
                }
            }
        }
        (c, dbar)
    }

    /// True when the point is inside the exclusion margin around {F = 0}.
    pub fn excluded(&self, z: &[Complex64], margin: f64) -> bool {
        self.norm_sq(z) < margin * margin
    }
}

/// Evaluates a twisting cochain and its derived operator fields at points.
pub struct OpField<'a> {
    pub tw: &'a TwistingCochain,
    pub nerve: &'a Nerve,
    /// Rank threshold factor for the pseudoinverse (τ = rcond · σ_max).
    pub rcond: f64,
    /// Finite-difference step for ∂̄ of operator fields.
    pub fd_step: f64,
}

impl<'a> OpField<'a> {
    pub fn new(tw: &'a TwistingCochain, nerve: &'a Nerve) -> Self {
        OpField {
            tw,
            nerve,
            rcond: 1e-8,
            fd_step: 1e-3,
        }
    }

    /// The twisting cochain evaluated at z (holomorphic, mask-0 blocks).
    pub fn twist_at(&self, z: &[Complex64]) -> NumCochain {
        let mut out = NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
        for ((p, q, r), tuple, level, m) in self.tw.cochain.iter() {
            debug_assert_eq!(q, 0);
            let mat: CMat = m.map(|f| {
                f.to_holomorphic()
                    .expect("twisting data is holomorphic")
                    .eval(z)
            });
            out.set_block(p, r, tuple, level, FormMat::from_matrix(mat));
        }
        out
    }

    /// a′ = Σ_{k≥1} aᵏ at z.
    pub fn twist_higher_at(&self, z: &[Complex64]) -> NumCochain {
        let full = self.twist_at(z);
        let mut out = NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
        for ((p, r), t, lvl, m) in full.iter() {
            if p >= 1 {
                out.set_block(p, r, t, lvl, m.clone());
            }
        }
        out
    }

    fn a0_matrix(&self, chart: usize, src_level: i64, z: &[Complex64]) -> CMat {
        let rows = self.tw.family.rank(chart, src_level - 1);
        let cols = self.tw.family.rank(chart, src_level);
        match self.tw.cochain.block((0, 0, 1), &[chart], src_level) {
            Some(m) => m.map(|f| f.to_holomorphic().expect("holomorphic").eval(z)),
            None => Mat::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0)),
        }
    }

    /// Blockwise Moore–Penrose inverse of a⁰ at z.
    pub fn sigma0_at(&self, z: &[Complex64]) -> NumCochain {
        let mut out = NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
        for chart in 0..self.tw.family.ncharts() {
            for level in 1..=self.tw.family.max_level() {
                let a = self.a0_matrix(chart, level, z);
                if a.rows == 0 || a.cols == 0 {
                    continue;
                }
                // σ⁰ at source level level−1 maps F^{−(level−1)} → F^{−level}.
                let x = pinv(&a, self.rcond);
                out.set_block(0, -1, &[chart], level - 1, FormMat::from_matrix(x));
            }
        }
        out
    }

    /// σ = σ⁰ (id + a′σ⁰)⁻¹.
    pub fn sigma_at(&self, z: &[Complex64]) -> NumCochain {
        let s0 = self.sigma0_at(z);
        let n = self.twist_higher_at(z).mul(&s0, self.nerve);
        s0.mul(&n.neumann_inverse(self.nerve), self.nerve)
    }

    /// Central-difference ∂̄ of a field, with the cochain-level (−1)^p and
    /// the same odd-insertion signs as the formal algebra.
    pub fn dbar_field(
        &self,
        f: impl Fn(&[Complex64]) -> NumCochain,
        z: &[Complex64],
        h: f64,
    ) -> NumCochain {
        let n = z.len();
        let zero = NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
        let mut out = zero;
        for i in 0..n {
            let shift = |dre: f64, dim: f64| -> Vec<Complex64> {
                let mut w = z.to_vec();
                w[i] += Complex64::new(dre, dim);
                w
            };
            let fx = f(&shift(h, 0.0)).sub(&f(&shift(-h, 0.0))).scale((0.5 / h).into());
            let fy = f(&shift(0.0, h)).sub(&f(&shift(0.0, -h))).scale((0.5 / h).into());
            // ∂/∂z̄ = (∂x + i ∂y)/2
            let dzi = fx.add(&fy.scale(Complex64::new(0.0, 1.0))).scale(0.5.into());
            let bit = 1u8 << i;
            for ((p, r), t, lvl, m) in dzi.iter() {
                let mut shifted = FormMat::zero(m.rows, m.cols);
                for (&mask, mat) in &m.parts {
                    let Some(w) = wedge_sign(mask, bit) else {
                        continue;
                    };
                    let q = mask.count_ones();
                    let mut s = w * if q % 2 == 0 { 1.0 } else { -1.0 };
                    if p % 2 == 1 {
                        s = -s;
                    }
                    shifted.set_part(mask | bit, mat.map(|v| v * s));
                }
                out.set_block(p, r, t, lvl, shifted);
            }
        }
        out
    }

    /// u = σ (id − ∂̄σ)⁻¹ = σ + σ∂̄σ + σ(∂̄σ)² + …; the series ends at the
    /// ambient antiholomorphic dimension.
    pub fn u_at(&self, z: &[Complex64], h: f64) -> NumCochain {
        let sigma = self.sigma_at(z);
        let ds = self.dbar_field(|w| self.sigma_at(w), z, h);
        let mut acc = sigma.clone();
        let mut power = sigma;
        for _ in 0..z.len() {
            power = power.mul(&ds, self.nerve);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        acc
    }

    /// Q⁰ = id − a⁰σ⁰ − σ⁰a⁰.
    pub fn q0_at(&self, z: &[Complex64]) -> NumCochain {
        let id = NumCochain::identity(&self.tw.family);
        let s0 = self.sigma0_at(z);
        let a = self.twist_at(z);
        let a0 = {
            let mut out = NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
            for ((p, r), t, lvl, m) in a.iter() {
                if p == 0 {
                    out.set_block(p, r, t, lvl, m.clone());
                }
            }
            out
        };
        id.sub(&a0.mul(&s0, self.nerve)).sub(&s0.mul(&a0, self.nerve))
    }

    /// Q = id − Dσ.
    pub fn q_at(&self, z: &[Complex64]) -> NumCochain {
        let id = NumCochain::identity(&self.tw.family);
        let a = self.twist_at(z);
        let sigma = self.sigma_at(z);
        id.sub(&sigma.d_op(&a, &a, self.nerve))
    }

    /// ∇Q = DQ − ∂̄Q with ∂̄ by finite differences.
    pub fn nabla_q_at(&self, z: &[Complex64], h: f64) -> NumCochain {
        let a = self.twist_at(z);
        let q = self.q_at(z);
        let dq = q.d_op(&a, &a, self.nerve);
        dq.sub(&self.dbar_field(|w| self.q_at(w), z, h))
    }

    /// The ε-regularized residue field at z:
    /// R_ε = (1−χ_ε)·id + χ_ε(Q − u∇Q) + ∂̄χ_ε ∧ u.
    /// When `include_prime` is false the χ_ε(Q − u∇Q) part is dropped
    /// (valid whenever the resolved sheaf has positive codimension, where
    /// Q vanishes identically).
    pub fn r_eps_at(
        &self,
        z: &[Complex64],
        eps: f64,
        cutoff: &Cutoff,
        include_prime: bool,
        h: f64,
    ) -> NumCochain {
        let (c, dbar_chi) = cutoff.chi_eps(z, eps);
        let mut out = NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
        // The expensive u-field is needed only where ∂̄χ_ε or the Q-part
        // is active.
        let need_u = !dbar_chi.is_empty() || (include_prime && c > 0.0);
        if need_u {
            let u = self.u_at(z, h);
            if !dbar_chi.is_empty() {
                out = out.add(&u.map(|m| m.scale_form(&dbar_chi)));
            }
            if include_prime && c > 0.0 {
                let q = self.q_at(z);
                let unq = u.mul(&self.nabla_q_at(z, self.fd_step), self.nerve);
                out = out.add(&q.sub(&unq).scale(Complex64::new(c, 0.0)));
            }
        }
        if c < 1.0 {
            let id = NumCochain::identity(&self.tw.family);
            out = out.add(&id.scale(Complex64::new(1.0 - c, 0.0)));
        }
        out
    }

    /// U_ε = χ_ε · u at z.
    pub fn u_eps_at(
        &self,
        z: &[Complex64],
        eps: f64,
        cutoff: &Cutoff,
        h: f64,
    ) -> NumCochain {
        let (c, _) = cutoff.chi_eps(z, eps);
        if c == 0.0 {
            return NumCochain::zero(self.tw.family.clone(), self.tw.family.clone());
        }
        self.u_at(z, h).scale(Complex64::new(c, 0.0))
    }
}

/// Pointwise identity report over a sample set (numeric side of the
/// operator laws; exact-input data, floating evaluation).
#[derive(Clone, Debug)]
pub struct OpFieldReport {
    pub points_used: usize,
    pub points_rejected: usize,
    pub mp_axioms: f64,
    pub sigma0_sq: f64,
    pub sigma_sq: f64,
    pub q0_a0: f64,
    pub q_decomposition: f64,
    pub sigma_through_q0: f64,
    pub nabla_u_residual_h: f64,
    pub nabla_u_residual_h2: f64,
    pub nabla_u_observed_order: f64,
}

pub fn identity_report(
    field: &OpField<'_>,
    points: &[Vec<Complex64>],
    cutoff: &Cutoff,
    margin: f64,
) -> OpFieldReport {
    let nerve = field.nerve;
    let mut used = 0;
    let mut rejected = 0;
    let mut mp = 0.0f64;
    let mut s0sq = 0.0f64;
    let mut ssq = 0.0f64;
    let mut q0a0 = 0.0f64;
    let mut qdec = 0.0f64;
    let mut sq0 = 0.0f64;
    let mut res_h = 0.0f64;
    let mut res_h2 = 0.0f64;
    let h = field.fd_step;
    for z in points {
        if cutoff.excluded(z, margin) {
            rejected += 1;
            continue;
        }
        used += 1;
        // Moore–Penrose axioms per chart and level.
        for chart in 0..field.tw.family.ncharts() {
            for level in 1..=field.tw.family.max_level() {
                let a = field.a0_matrix(chart, level, z);
                if a.rows == 0 || a.cols == 0 {
                    continue;
                }
                let x = pinv(&a, field.rcond);
                let ax = matmulc(&a, &x);
                let xa = matmulc(&x, &a);
                mp = mp.max(super::svd::max_abs(&(&matmulc(&ax, &a) - &a)));
                mp = mp.max(super::svd::max_abs(&(&matmulc(&xa, &x) - &x)));
                mp = mp.max(super::svd::max_abs(&(&super::svd::adjoint(&ax) - &ax)));
                mp = mp.max(super::svd::max_abs(&(&super::svd::adjoint(&xa) - &xa)));
            }
        }
        let s0 = field.sigma0_at(z);
        let sigma = field.sigma_at(z);
        s0sq = s0sq.max(s0.mul(&s0, nerve).max_abs());
        ssq = ssq.max(sigma.mul(&sigma, nerve).max_abs());

        let a = field.twist_at(z);
        let a0 = {
            let mut out = NumCochain::zero(field.tw.family.clone(), field.tw.family.clone());
            for ((p, r), t, lvl, m) in a.iter() {
                if p == 0 {
                    out.set_block(p, r, t, lvl, m.clone());
                }
            }
            out
        };
        let q0 = field.q0_at(z);
        q0a0 = q0a0.max(q0.mul(&a0, nerve).max_abs());

        // Q = Q⁰ − σ DQ⁰ against Q = id − Dσ.
        let dq0 = q0.d_op(&a, &a, nerve);
        let q_via_q0 = q0.sub(&sigma.mul(&dq0, nerve));
        let q = field.q_at(z);
        qdec = qdec.max(q.sub(&q_via_q0).max_abs());

        // σ = σ⁰ (Dσ⁰ + Q⁰)⁻¹ via the structural inverse (id + a′σ⁰ + σ⁰a′)⁻¹.
        let aprime = field.twist_higher_at(z);
        let n = aprime
            .mul(&s0, nerve)
            .add(&s0.mul(&aprime, nerve));
        let sigma_formula = s0.mul(&n.neumann_inverse(nerve), nerve);
        sq0 = sq0.max(sigma.sub(&sigma_formula).max_abs());

        // ∇u = id − Q + u∇Q at two step sizes.
        for (hh, slot) in [(h, 0usize), (h / 2.0, 1usize)] {
            let u = field.u_at(z, hh);
            let du = u.d_op(&a, &a, nerve);
            let dbar_u = field.dbar_field(|w| field.u_at(w, hh), z, hh);
            let nabla_u = du.sub(&dbar_u);
            let id = NumCochain::identity(&field.tw.family);
            let rhs = id.sub(&field.q_at(z)).add(&u.mul(
                &{
                    let q_local = field.q_at(z);
                    let dq = q_local.d_op(&a, &a, nerve);
                    dq.sub(&field.dbar_field(|w| field.q_at(w), z, hh))
                },
                nerve,
            ));
            let r = nabla_u.sub(&rhs).max_abs();
            if slot == 0 {
                res_h = res_h.max(r);
            } else {
                res_h2 = res_h2.max(r);
            }
        }
    }
    let order = if res_h2 > 0.0 && res_h > 0.0 {
        libm::log2(res_h / res_h2)
    } else {
        2.0
    };
    OpFieldReport {
        points_used: used,
        points_rejected: rejected,
        mp_axioms: mp,
        sigma0_sq: s0sq,
        sigma_sq: ssq,
        q0_a0: q0a0,
        q_decomposition: qdec,
        sigma_through_q0: sq0,
        nabla_u_residual_h: res_h,
        nabla_u_residual_h2: res_h2,
        nabla_u_observed_order: order,
    }
}
