//! ε-regularized current pairings against test forms.
//!
//! Orientation convention, fixed once: a top-degree integrand
//! dz̄₁∧…∧dz̄ₙ∧dz₁∧…∧dzₙ reduces to (−1)^{n(n−1)/2}(2i)^n dV, which makes
//! ⟨∂̄[1/z], φ dz⟩ = +2πi·φ(0). All signs downstream inherit this choice.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::form::TestForm;
use super::opfield::{Cutoff, OpField};
use super::pointform::{fs_mul, FormScalar};
use super::quad::BoxRegion;
use super::schedule::{pairing_from_diag, CurrentPairing, Schedule};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::scalar::pairwise_sum;

#[derive(Debug, Clone)]
pub enum PairingError {
    /// The ε ladder did not contract; diagnostics attached.
    NonConvergent(String),
    /// The test form cannot complete the current to a top-degree form.
    DegreeMismatch,
}

impl core::fmt::Display for PairingError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PairingError::NonConvergent(s) => write!(f, "pairing did not converge: {}", s),
            PairingError::DegreeMismatch => write!(f, "test form degree mismatch"),
        }
    }
}

/// (−1)^{n(n−1)/2} (2i)^n — the factor turning the canonical top wedge
/// into Lebesgue measure.
pub fn orientation_factor(n: usize) -> Complex64 {
    let two_i = Complex64::new(0.0, 2.0);
    let mut f = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        f *= two_i;
    }
    if (n * (n - 1) / 2) % 2 == 1 {
        f = -f;
    }
    f
}

pub fn full_mask(n: usize) -> u8 {
    ((1u16 << n) - 1) as u8
}

/// Extracts the coefficient of the full dz̄-monomial and applies the
/// orientation factor.
pub fn top_value(fs: &FormScalar, n: usize) -> Complex64 {
    fs.get(&full_mask(n))
        .copied()
        .unwrap_or(Complex64::new(0.0, 0.0))
        * orientation_factor(n)
}

/// Runs the (ε, grid) diagonal for a vector-valued integrand and
/// extrapolates each component. Returns one pairing per component.
pub fn ladder_vec(
    sched: &Schedule,
    region: &BoxRegion,
    dim: usize,
    mut integrand: impl FnMut(&[Complex64], f64) -> Vec<Complex64>,
) -> Vec<CurrentPairing> {
    let diag = sched.diagonal();
    // Pad the box asymmetrically. Exactly scale-invariant kernels sample
    // identically along the (ε/4, grid×2) diagonal when the lattice is
    // centered, which stalls the extrapolation and hides the quadrature
    // bias; an uneven pad breaks the self-alignment.
    let region = {
        let mut r = region.clone();
        for i in 0..r.lo.len() {
            let w = r.hi[i] - r.lo[i];
            r.lo[i] -= 0.0173 * w;
            r.hi[i] += 0.0117 * w;
        }
        r
    };
    let region = &region;
    let dims = region.lo.len();
    let n = region.ndims();
    let mut per_cell: Vec<Vec<Complex64>> = Vec::new();
    for &(m, l) in &diag {
        let eps = sched.eps(m);
        let npts = sched.grid_n(l);
        let steps: Vec<f64> = region
            .lo
            .iter()
            .zip(&region.hi)
            .map(|(a, b)| (b - a) / npts as f64)
            .collect();
        let cell_volume: f64 = steps.iter().product();
        let mut sums: Vec<Vec<Complex64>> = vec![Vec::new(); dim];
        let mut idx = vec![0usize; dims];
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        'grid: loop {
            for i in 0..n {
                let x = region.lo[2 * i] + (idx[2 * i] as f64 + 0.5) * steps[2 * i];
                let y = region.lo[2 * i + 1] + (idx[2 * i + 1] as f64 + 0.5) * steps[2 * i + 1];
                z[i] = Complex64::new(x, y);
            }
            let vals = integrand(&z, eps);
            debug_assert_eq!(vals.len(), dim);
            for (k, v) in vals.into_iter().enumerate() {
                sums[k].push(v);
            }
            let mut d = dims;
            loop {
                if d == 0 {
                    break 'grid;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < npts {
                    break;
                }
                idx[d] = 0;
            }
        }
        per_cell.push(
            sums.iter()
                .map(|vs| pairwise_sum(vs) * cell_volume)
                .collect(),
        );
    }
    (0..dim)
        .map(|k| {
            let series: Vec<Complex64> = per_cell.iter().map(|c| c[k]).collect();
            pairing_from_diag(&diag, &series)
        })
        .collect()
}

pub fn ladder(
    sched: &Schedule,
    region: &BoxRegion,
    mut integrand: impl FnMut(&[Complex64], f64) -> Complex64,
) -> CurrentPairing {
    ladder_vec(sched, region, 1, |z, eps| vec![integrand(z, eps)])
        .pop()
        .expect("one component")
}

/// ⟨[num/den]·χ_ε, φ⟩ → the principal-value pairing.
pub fn principal_value_pairing(
    num: &Poly,
    den: &Poly,
    cutoff: &Cutoff,
    sched: &Schedule,
    phi: &TestForm,
) -> CurrentPairing {
    let n = phi.ndims;
    let region = phi.support_region();
    ladder(sched, &region, |z, eps| {
        let (c, _) = cutoff.chi_eps(z, eps);
        if c == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = num.eval(z) / den.eval(z);
        top_value(&phi.eval_scalar(z), n) * k * c
    })
}

/// ⟨lim ∂̄χ_ε ∧ num/den, φ⟩ — the residue of a semi-meromorphic kernel.
pub fn dbar_residue_pairing(
    num: &Poly,
    den: &Poly,
    cutoff: &Cutoff,
    sched: &Schedule,
    phi: &TestForm,
) -> CurrentPairing {
    let n = phi.ndims;
    let region = phi.support_region();
    ladder(sched, &region, |z, eps| {
        let (_, dchi) = cutoff.chi_eps(z, eps);
        if dchi.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let k = num.eval(z) / den.eval(z);
        let fs = fs_mul(&dchi, &phi.eval_scalar(z));
        top_value(&fs, n) * k
    })
}

/// Kernels that restriction can wrap.
pub enum Kernel<'k> {
    PrincipalValue { num: &'k Poly, den: &'k Poly, cutoff: &'k Cutoff },
    DbarPrincipalValue { num: &'k Poly, den: &'k Poly, cutoff: &'k Cutoff },
    Smooth { amplitude: &'k Poly },
}

impl Kernel<'_> {
    fn eval(&self, z: &[Complex64], eps: f64) -> FormScalar {
        let mut fs = FormScalar::new();
        match self {
            Kernel::PrincipalValue { num, den, cutoff } => {
                let (c, _) = cutoff.chi_eps(z, eps);
                if c > 0.0 {
                    fs.insert(0, num.eval(z) / den.eval(z) * c);
                }
            }
            Kernel::DbarPrincipalValue { num, den, cutoff } => {
                let (_, dchi) = cutoff.chi_eps(z, eps);
                if !dchi.is_empty() {
                    let k = num.eval(z) / den.eval(z);
                    for (m, v) in dchi {
                        fs.insert(m, v * k);
                    }
                }
            }
            Kernel::Smooth { amplitude } => {
                fs.insert(0, amplitude.eval(z));
            }
        }
        fs
    }
}

/// ⟨1_{X∖V} T, φ⟩ = lim_ε χ(|F_V|²/ε)·T against φ. The inner current is
/// itself a regularized limit; its ladder runs strictly faster
/// (δ = ε²/ε₀) so the two limits nest in the right order.
pub fn restriction_pairing(
    kernel: &Kernel<'_>,
    v_cutoff: &Cutoff,
    sched: &Schedule,
    phi: &TestForm,
) -> CurrentPairing {
    let n = phi.ndims;
    let region = phi.support_region();
    ladder(sched, &region, |z, eps| {
        let (cv, _) = v_cutoff.chi_eps(z, eps);
        if cv == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let inner_eps = eps * eps / sched.eps0;
        let fs = fs_mul(&kernel.eval(z, inner_eps), &phi.eval_scalar(z));
        top_value(&fs, n) * cv
    })
}

/// Extrapolated pairings of one block of the residue field against φ:
/// entry (i,j) of ⟨R^{tuple}(src→tgt), φ⟩. An optional holomorphic matrix
/// postfactor composes on the right before pairing (used for R·a⁰ probes).
pub struct BlockPairing {
    pub values: Mat<Complex64>,
    pub error: f64,
    pub converged: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn r_block_pairing(
    field: &OpField<'_>,
    cutoff: &Cutoff,
    sched: &Schedule,
    tuple: &[usize],
    src_level: i64,
    tgt_level: i64,
    phi: &TestForm,
    post: Option<&Mat<Poly>>,
) -> BlockPairing {
    let n = phi.ndims;
    let p = tuple.len() - 1;
    let fam = &field.tw.family;
    let (rows, src_rank) = (
        fam.rank(tuple[0], tgt_level),
        fam.rank(*tuple.last().unwrap(), src_level),
    );
    let cols = match post {
        Some(m) => {
            assert_eq!(m.rows, src_rank as usize);
            m.cols
        }
        None => src_rank,
    };
    if rows == 0 || cols == 0 {
        return BlockPairing {
            values: Mat::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0)),
            error: 0.0,
            converged: true,
        };
    }
    let region = phi.support_region();
    let r = src_level - tgt_level;
    let dim = rows * cols;
    let pairings = ladder_vec(sched, &region, dim, |z, eps| {
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        // Fast path: everything vanishes where χ ≡ 1, χ′ ≡ 0 unless the
        // Q-part is in play.
        let (c, dchi) = cutoff.chi_eps(z, eps);
        if c == 1.0 && dchi.is_empty() && !sched.include_prime {
            return out;
        }
        let r_eps = field.r_eps_at(z, eps, cutoff, sched.include_prime, sched.fd_step);
        let Some(block) = r_eps.block(p, r, tuple, src_level) else {
            return out;
        };
        let block = match post {
            Some(m) => {
                let pm = m.map(|q| q.eval(z));
                let mut composed = super::pointform::FormMat::zero(block.rows, pm.cols);
                for (&mask, a) in &block.parts {
                    composed.set_part(mask, super::svd::matmulc(a, &pm));
                }
                composed
            }
            None => block.clone(),
        };
        let phi_fs = phi.eval_scalar(z);
        let paired = block.scale_form_right(&phi_fs);
        let top = paired.part(full_mask(n));
        let of = orientation_factor(n);
        for i in 0..rows {
            for j in 0..cols {
                out[i * cols + j] = top.at(i, j) * of;
            }
        }
        out
    });
    let mut values = Mat::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0));
    let mut error = 0.0f64;
    let mut converged = true;
    for i in 0..rows {
        for j in 0..cols {
            let p = &pairings[i * cols + j];
            *values.at_mut(i, j) = p.value;
            error = error.max(p.error);
            converged &= p.converged || p.value.norm() < 1e-9;
        }
    }
    BlockPairing {
        values,
        error,
        converged,
    }
}

/// The four structural probes of the residue current, with numeric margins
/// relative to `scale` (the magnitude of the main residue value).
#[derive(Clone, Debug)]
pub struct ResidueProbeReport {
    pub upper_levels_vanish: f64,
    pub below_codim_vanish: f64,
    pub annihilates_differential: f64,
    pub off_support_vanish: f64,
    pub scale: f64,
}

impl ResidueProbeReport {
    pub fn all_within(&self, rel: f64) -> bool {
        let bound = rel * self.scale;
        self.upper_levels_vanish <= bound
            && self.below_codim_vanish <= bound
            && self.annihilates_differential <= bound
            && self.off_support_vanish <= bound
    }
}

#[allow(clippy::too_many_arguments)]
pub fn residue_probes(
    field: &OpField<'_>,
    cutoff: &Cutoff,
    sched: &Schedule,
    codim: usize,
    phi_on: &[TestForm],
    phi_off: &[TestForm],
    scale: f64,
) -> ResidueProbeReport {
    let fam = &field.tw.family;
    let max_level = fam.max_level();
    let mut upper = 0.0f64;
    let mut below = 0.0f64;
    let mut ann = 0.0f64;
    let mut off = 0.0f64;
    for chart in 0..fam.ncharts() {
        let tuple = [chart];
        for phi in phi_on {
            // (a) source levels ℓ ≥ 1 vanish.
            for src in 1..=max_level {
                for tgt in 0..=max_level {
                    let bp =
                        r_block_pairing(field, cutoff, sched, &tuple, src, tgt, phi, None);
                    upper = upper.max(super::svd::max_abs(&bp.values));
                }
            }
            // (b) R⁰_k = 0 for k < codim.
            for tgt in 0..(codim as i64).min(max_level + 1) {
                let bp = r_block_pairing(field, cutoff, sched, &tuple, 0, tgt, phi, None);
                below = below.max(super::svd::max_abs(&bp.values));
            }
            // (c) R a⁰ = 0: the composed block from source level 1.
            for tgt in 0..=max_level {
                let a0 = field.tw.cochain.block((0, 0, 1), &tuple, 1).map(|m| {
                    m.map(|f| f.to_holomorphic().expect("holomorphic twist"))
                });
                if let Some(a0) = a0 {
                    let bp = r_block_pairing(
                        field, cutoff, sched, &tuple, 0, tgt, phi,
                        Some(&a0),
                    );
                    ann = ann.max(super::svd::max_abs(&bp.values));
                }
            }
        }
        // (d) off-support pairings vanish for every component.
        for phi in phi_off {
            for src in 0..=max_level {
                for tgt in 0..=max_level {
                    let bp =
                        r_block_pairing(field, cutoff, sched, &tuple, src, tgt, phi, None);
                    off = off.max(super::svd::max_abs(&bp.values));
                }
            }
        }
    }
    ResidueProbeReport {
        upper_levels_vanish: upper,
        below_codim_vanish: below,
        annihilates_differential: ann,
        off_support_vanish: off,
        scale,
    }
}

/// Residual of the two-chart comparison identity
/// R⁰_α a¹_{αβ} − a¹_{αβ} R⁰_β = a⁰_α R¹_{αβ} − ∂̄R¹_{αβ}
/// paired against φ, with ∂̄ moved onto the test form.
pub fn comparison_residual(
    field: &OpField<'_>,
    cutoff: &Cutoff,
    sched: &Schedule,
    pair: (usize, usize),
    phi: &TestForm,
) -> BlockPairing {
    let n = phi.ndims;
    let fam = &field.tw.family;
    let (alpha, beta) = pair;
    let max_level = fam.max_level();
    // Component with source level 0 (R takes values in Hom(F⁰, F)); sum
    // target levels: each target level is a separate matrix block, so we
    // report the worst residual over target levels.
    let region = phi.support_region();
    let mut worst = BlockPairing {
        values: Mat::from_fn(0, 0, |_, _| Complex64::new(0.0, 0.0)),
        error: 0.0,
        converged: true,
    };
    let mut worst_norm = -1.0f64;
    for tgt in 0..=max_level {
        let rows_a = fam.rank(alpha, tgt);
        let cols_b = fam.rank(beta, 0);
        if rows_a == 0 || cols_b == 0 {
            continue;
        }
        let dim = rows_a * cols_b;
        let pairings = ladder_vec(sched, &region, dim, |z, eps| {
            let mut out = vec![Complex64::new(0.0, 0.0); dim];
            let r_eps = field.r_eps_at(z, eps, cutoff, sched.include_prime, sched.fd_step);
            let a = field.twist_at(z);
            let blk = |p: usize, t: &[usize], src: i64, tgt_l: i64| {
                r_eps
                    .block(p, src - tgt_l, t, src)
                    .cloned()
                    .unwrap_or_else(|| {
                        super::pointform::FormMat::zero(
                            fam.rank(t[0], tgt_l),
                            fam.rank(*t.last().unwrap(), src),
                        )
                    })
            };
            let a1 = |x: usize, y: usize, lvl: i64| {
                a.block(1, 0, &[x, y], lvl).cloned().unwrap_or_else(|| {
                    super::pointform::FormMat::zero(
                        fam.rank(x, lvl),
                        fam.rank(y, lvl),
                    )
                })
            };
            let a0 = |x: usize, lvl: i64| {
                a.block(0, 1, &[x], lvl).cloned().unwrap_or_else(|| {
                    super::pointform::FormMat::zero(
                        fam.rank(x, lvl - 1),
                        fam.rank(x, lvl),
                    )
                })
            };
            // Raw matrix combination at fixed target level `tgt`:
            // LHS − a⁰_α R¹ with ∂̄R¹ paired through ∂̄φ.
            let lhs = blk(0, &[alpha], 0, tgt)
                .matmul(&a1(alpha, beta, 0))
                .sub(&a1(alpha, beta, tgt).matmul(&blk(0, &[beta], 0, tgt)));
            let rhs_alg = a0(alpha, tgt + 1).matmul(&blk(1, &[alpha, beta], 0, tgt + 1));
            let residual_alg = lhs.sub(&rhs_alg);
            let phi_fs = phi.eval_scalar(z);
            let mut total = residual_alg.scale_form_right(&phi_fs).part(full_mask(n));
            // +⟨∂̄R¹, φ⟩ = −(−1)^{q}⟨R¹-part, ∂̄φ⟩ per form part.
            let r1 = blk(1, &[alpha, beta], 0, tgt);
            let dphi = phi.eval_dbar_scalar(z);
            for (&mask, mat) in &r1.parts {
                let q = mask.count_ones();
                let sign = if q % 2 == 0 { -1.0 } else { 1.0 };
                let mut single = super::pointform::FormMat::zero(mat.rows, mat.cols);
                single.set_part(mask, mat.clone());
                let tailed = single.scale_form_right(&dphi).part(full_mask(n));
                total = &total + &tailed.map(|v| v * sign);
            }
            let of = orientation_factor(n);
            for i in 0..rows_a {
                for j in 0..cols_b {
                    out[i * cols_b + j] = total.at(i, j) * of;
                }
            }
            out
        });
        let mut values = Mat::from_fn(rows_a, cols_b, |_, _| Complex64::new(0.0, 0.0));
        let mut error = 0.0f64;
        let mut converged = true;
        for i in 0..rows_a {
            for j in 0..cols_b {
                let p = &pairings[i * cols_b + j];
                *values.at_mut(i, j) = p.value;
                error = error.max(p.error);
                converged &= p.converged || p.value.norm() < 1e-9;
            }
        }
        let normv = super::svd::max_abs(&values);
        if normv > worst_norm {
            worst_norm = normv;
            worst = BlockPairing {
                values,
                error,
                converged,
            };
        }
    }
    worst
}
