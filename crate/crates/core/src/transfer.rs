//! The explicit transfer between the twisted-complex and Dolbeault-type
//! representations: the partition-of-unity contraction v with its exact
//! identities, the classical map for plain Čech cocycles, the hybrid map
//! ξ ↦ Σ_j (∂̄v)ʲ(ξR)ʲ with its ∇-potential certificate, and the two
//! routes of the Serre pairing on P¹.
//!
//! Everything that can be exact is exact: v, (∂̄v)ʲ and the classical map
//! live in the symbol algebra; residue parts are ε-regularized fields;
//! ∂̄'s of limit objects move onto test forms.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cochain::{Cochain, CochainError};
use crate::matrix::Mat;
use crate::nerve::{BundleFamily, Nerve};
use crate::numeric::cochain::NumCochain;
use crate::numeric::form::{PartitionOfUnity, TestForm};
use crate::numeric::opfield::{Cutoff, OpField};
use crate::numeric::pairing::{full_mask, ladder_vec, orientation_factor};
use crate::numeric::pointform::{fs_mul, FormMat, FormScalar};
use crate::numeric::quad::{integrate, BoxRegion};
use crate::numeric::schedule::{CurrentPairing, Schedule};
use crate::poly::Poly;
use crate::symbol::Form;

/// (vf)_{α₀…α_{p−1}} = Σ_α ρ_α f_{α α₀…α_{p−1}}, exact in the symbol
/// algebra; zero on 0-cochains.
pub fn v_op(f: &Cochain, nerve: &Nerve) -> Cochain {
    let ncharts = f.ncharts();
    let ndims = f.ndims;
    let mut out = Cochain::zero(f.source.clone(), f.target.clone(), ndims);
    for ((p, q, r), tuple, level, m) in f.iter() {
        if p == 0 {
            continue;
        }
        let alpha = tuple[0];
        let short = tuple[1..].to_vec();
        if !nerve.tuple_admissible(&short) {
            continue;
        }
        let rho = Form::rho(ncharts, ndims, alpha);
        let scaled = m.map(|e| rho.mul(e));
        out.set_block(nerve, (p - 1, q, r), &short, level, scaled);
    }
    out
}

/// (∂̄v)ʲ f, exact.
pub fn dbar_v_pow(f: &Cochain, j: usize, nerve: &Nerve) -> Cochain {
    let mut cur = f.clone();
    for _ in 0..j {
        cur = v_op(&cur, nerve).dbar(nerve);
    }
    cur
}

/// w f = Σ_{j≥0} v(∂̄v)ʲ f; the sum ends when the Čech degree runs out.
pub fn w_op(f: &Cochain, nerve: &Nerve) -> Cochain {
    let mut out = Cochain::zero(f.source.clone(), f.target.clone(), f.ndims);
    let mut cur = v_op(f, nerve);
    loop {
        if cur.is_zero() {
            return out;
        }
        out = out.add(&cur, nerve);
        cur = v_op(&cur.dbar(nerve), nerve);
    }
}

/// Exact residuals of the contraction identities: first
/// Dvf − (f − vDf − f⁰ + vDf⁰), then for each j = 1…max_j
/// Dv(∂̄v)ʲf − [(∂̄v)ʲf + v(∂̄v)^{j−1}∂̄f − v(∂̄v)ʲDf
///              − (∂̄v)ʲfʲ − v(∂̄v)^{j−1}∂̄fʲ + Σ_{ℓ≤j} v(∂̄v)ʲDf^ℓ].
pub fn contraction_identity_residuals(
    f: &Cochain,
    b: &Cochain,
    a: &Cochain,
    nerve: &Nerve,
    max_j: usize,
) -> Result<Vec<Cochain>, CochainError> {
    let d = |x: &Cochain| x.d_op(b, a, nerve);
    let mut out = Vec::new();
    let df = d(f)?;
    let f0 = f.cech_part(0);
    let lhs = d(&v_op(f, nerve))?;
    let rhs = f
        .sub(&v_op(&df, nerve), nerve)
        .sub(&f0, nerve)
        .add(&v_op(&d(&f0)?, nerve), nerve);
    out.push(lhs.sub(&rhs, nerve));
    for j in 1..=max_j {
        let vj = |x: &Cochain, k: usize| -> Cochain { v_op(&dbar_v_pow(x, k, nerve), nerve) };
        let lhs = d(&vj(f, j))?;
        let fj = f.cech_part(j);
        let mut rhs = dbar_v_pow(f, j, nerve)
            .add(&vj(&f.dbar(nerve), j - 1), nerve)
            .sub(&vj(&df, j), nerve)
            .sub(&dbar_v_pow(&fj, j, nerve), nerve)
            .sub(&vj(&fj.dbar(nerve), j - 1), nerve);
        for ell in 0..=j {
            let fl = f.cech_part(ell);
            rhs = rhs.add(&vj(&d(&fl)?, j), nerve);
        }
        out.push(lhs.sub(&rhs, nerve));
    }
    Ok(out)
}

/// The classical map for a holomorphic Čech k-cocycle c (as a Hom(𝒪,G)
/// cochain): per chart α, the restriction of
/// Σ ∂̄ρ_{α₀}∧…∧∂̄ρ_{α_{k−1}} ρ_{α_k} c_{α₀…α_k}, exact in the symbols.
pub fn cech_to_dolbeault(c: &Cochain, nerve: &Nerve) -> Result<Vec<Mat<Form>>, CochainError> {
    let ncharts = nerve.ncharts;
    let ndims = c.ndims;
    let k = c.components().map(|(p, _, _)| p).max().unwrap_or(0);
    let mut per_chart: Vec<Option<Mat<Form>>> = vec![None; ncharts];
    for ((p, q, _r), tuple, _level, m) in c.iter() {
        if q != 0 || p != k {
            return Err(CochainError::ShapeMismatch);
        }
        let mut pref = Form::one(ncharts, ndims);
        for &a in &tuple[..k] {
            pref = pref.mul(&Form::theta(ncharts, ndims, a));
        }
        pref = pref.mul(&Form::rho(ncharts, ndims, *tuple.last().unwrap()));
        for alpha in 0..ncharts {
            let mut with = tuple.clone();
            with.push(alpha);
            if !nerve.tuple_admissible(&with) {
                continue;
            }
            let ctx = 1usize << alpha;
            let term = m.map(|e| pref.mul(e).normalize(nerve, ctx));
            let slot = per_chart[alpha].get_or_insert_with(|| {
                Mat::from_fn(m.rows, m.cols, |_, _| Form::zero(ncharts, ndims))
            });
            *slot = Mat::from_fn(slot.rows, slot.cols, |i, j| {
                slot.at(i, j).add(term.at(i, j)).normalize(nerve, ctx)
            });
        }
    }
    Ok(per_chart
        .into_iter()
        .map(|o| o.unwrap_or_else(|| Mat::from_fn(0, 0, |_, _| Form::zero(ncharts, ndims))))
        .collect())
}

/// Evaluates a symbolic form numerically through the partition-of-unity
/// profiles: ρ_α and θ_α take their closed-form values, z/z̄ monomials are
/// evaluated, dz̄ bits stay as mask factors.
pub fn eval_form(f: &Form, pou: &PartitionOfUnity, z: &[Complex64]) -> FormScalar {
    let ncharts = f.ncharts;
    let mut acc = FormScalar::new();
    let mut pt = z.to_vec();
    pt.extend(z.iter().map(|w| w.conj()));
    for (key, coeff) in &f.terms {
        let mut scalar = coeff.eval(&pt);
        for (alpha, &e) in key.rho.iter().enumerate() {
            for _ in 0..e {
                scalar *= Complex64::new(pou.rho(alpha, z), 0.0);
            }
        }
        if scalar.norm() == 0.0 {
            continue;
        }
        let mut fs = FormScalar::new();
        fs.insert(0, scalar);
        let mut mask = key.odd;
        while mask != 0 {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            let factor: FormScalar = if b < ncharts {
                pou.theta(b, z)
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| v.norm() > 0.0)
                    .map(|(i, v)| (1u8 << i, v))
                    .collect()
            } else {
                let mut one = FormScalar::new();
                one.insert(1u8 << (b - ncharts), Complex64::new(1.0, 0.0));
                one
            };
            fs = fs_mul(&fs, &factor);
        }
        for (m, v) in fs {
            *acc.entry(m).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
    }
    acc
}

/// Evaluates an exact cochain numerically (entries may involve ρ, θ, z̄).
pub fn eval_cochain(c: &Cochain, pou: &PartitionOfUnity, z: &[Complex64]) -> NumCochain {
    let mut out = NumCochain::zero(c.source.clone(), c.target.clone());
    for ((p, _q, r), tuple, level, m) in c.iter() {
        let mut fm = FormMat::zero(m.rows, m.cols);
        for (i, j, f) in m.entries() {
            for (mask, v) in eval_form(f, pou, z) {
                let mut part = fm.part(mask);
                *part.at_mut(i, j) += v;
                fm.set_part(mask, part);
            }
        }
        out.set_block(p, r, tuple, level, fm);
    }
    out
}

/// The numeric contraction (vf)_T = Σ_α ρ_α(z) f_{(α,T)}.
pub fn v_num(
    f: &NumCochain,
    pou: &PartitionOfUnity,
    nerve: &Nerve,
    z: &[Complex64],
) -> NumCochain {
    let mut out = NumCochain::zero(f.source.clone(), f.target.clone());
    for ((p, r), tuple, level, m) in f.iter() {
        if p == 0 {
            continue;
        }
        let alpha = tuple[0];
        let short = tuple[1..].to_vec();
        if !nerve.tuple_admissible(&short) {
            continue;
        }
        let rho = pou.rho(alpha, z);
        if rho == 0.0 {
            continue;
        }
        out.set_block(p - 1, r, &short, level, m.scale(Complex64::new(rho, 0.0)));
    }
    out
}

/// The numeric unit 1-cochain of a plain bundle family on a nerve.
pub fn unit_twist_num(family: &BundleFamily, nerve: &Nerve) -> NumCochain {
    let mut c = NumCochain::zero(family.clone(), family.clone());
    for t in nerve.tuples(2) {
        for level in 0..=family.max_level() {
            let n = family.rank(t[0], level);
            if n == 0 {
                continue;
            }
            c.set_block(1, 0, &t, level, FormMat::identity(n));
        }
    }
    c
}

/// Hybrid transfer data: an exact D-closed ξ against a numeric residue
/// field, with the partition of unity binding the two.
pub struct TransferSetup<'a> {
    pub nerve: &'a Nerve,
    pub field: &'a OpField<'a>,
    pub g_family: &'a BundleFamily,
    pub pou: &'a PartitionOfUnity,
    pub xi: &'a Cochain,
    pub cutoff: &'a Cutoff,
    pub sched: &'a Schedule,
    pub ndims: usize,
}

impl TransferSetup<'_> {
    pub fn xi_at(&self, z: &[Complex64]) -> NumCochain {
        eval_cochain(self.xi, self.pou, z)
    }

    /// (ξ · R_ε)(z).
    pub fn xi_r_at(&self, z: &[Complex64], eps: f64) -> NumCochain {
        let r = self.field.r_eps_at(
            z,
            eps,
            self.cutoff,
            self.sched.include_prime,
            self.sched.fd_step,
        );
        self.xi_at(z).mul(&r, self.nerve)
    }

    /// (ξ · U_ε)(z) = ξ · χ_ε u.
    pub fn xi_u_at(&self, z: &[Complex64], eps: f64) -> NumCochain {
        let u = self.field.u_eps_at(z, eps, self.cutoff, self.sched.fd_step);
        self.xi_at(z).mul(&u, self.nerve)
    }

    /// (∂̄v)^depth applied to the Čech-degree-j part of ξR_ε, by nested
    /// central differences of the contracted field.
    fn iterated_term(&self, depth: usize, j: usize, z: &[Complex64], eps: f64) -> NumCochain {
        if depth == 0 {
            return self.xi_r_at(z, eps).cech_part(j);
        }
        let prev = |w: &[Complex64]| -> NumCochain {
            v_num(&self.iterated_term(depth - 1, j, w, eps), self.pou, self.nerve, w)
        };
        self.field.dbar_field(prev, z, self.sched.fd_step)
    }

    /// Σ_j (∂̄v)ʲ(ξR_ε)ʲ at z: a Čech-degree-0 Hom(F⁰, G)-valued form.
    /// Terms with j beyond the ambient antiholomorphic dimension vanish.
    pub fn transfer_at(&self, z: &[Complex64], eps: f64) -> NumCochain {
        let max_j = self.ndims;
        let mut acc = self.iterated_term(0, 0, z, eps);
        for j in 1..=max_j {
            let t = self.iterated_term(j, j, z, eps);
            if !t.is_zero() {
                acc = acc.add(&t);
            }
        }
        acc
    }

    /// w(ξR_ε) = Σ_{j≥0} v(∂̄v)ʲ(ξR_ε) at z.
    pub fn w_xi_r_at(&self, z: &[Complex64], eps: f64) -> NumCochain {
        let mut acc = NumCochain::zero(
            self.field.tw.family.clone(),
            self.g_family.clone(),
        );
        for j in 0..=self.ndims {
            let term = self.w_term(j, z, eps);
            if !term.is_zero() {
                acc = acc.add(&term);
            }
        }
        acc
    }

    fn w_term(&self, depth: usize, z: &[Complex64], eps: f64) -> NumCochain {
        if depth == 0 {
            return v_num(&self.xi_r_at(z, eps), self.pou, self.nerve, z);
        }
        let inner = self.field.dbar_field(
            |w| self.w_term(depth - 1, w, eps),
            z,
            self.sched.fd_step,
        );
        v_num(&inner, self.pou, self.nerve, z)
    }

    /// Pairs the transfer output composed with per-chart sections of F⁰
    /// against φ, partition-localized: Σ_α ρ_α (T_α s_α) ∧ φ.
    pub fn pair_against_sections(
        &self,
        sections: &[Mat<Poly>],
        phi: &TestForm,
    ) -> CurrentPairing {
        let n = phi.ndims;
        let region = phi.support_region();
        let ncharts = self.nerve.ncharts;
        ladder_vec(self.sched, &region, 1, |z, eps| {
            let t = self.transfer_at(z, eps);
            let mut total = Complex64::new(0.0, 0.0);
            for alpha in 0..ncharts {
                let rho = self.pou.rho(alpha, z);
                if rho == 0.0 {
                    continue;
                }
                let Some(block) = t.block(0, 0, &[alpha], 0) else {
                    continue;
                };
                let s = sections[alpha].map(|p| p.eval(z));
                let mut applied = FormMat::zero(block.rows, s.cols);
                for (&mask, mat) in &block.parts {
                    applied.set_part(mask, crate::numeric::svd::matmulc(mat, &s));
                }
                let top = applied
                    .scale_form_right(&phi.eval_scalar(z))
                    .part(full_mask(n));
                if top.rows > 0 && top.cols > 0 {
                    total += top.at(0, 0) * rho;
                }
            }
            vec![total * orientation_factor(n)]
        })
        .pop()
        .expect("one component")
    }

    /// The chart-level sheaf map ξ_α R⁰_α applied to sections, paired
    /// against a chart-supported φ (no partition weights).
    pub fn sheaf_route_pairing(
        &self,
        chart: usize,
        sections: &[Mat<Poly>],
        phi: &TestForm,
    ) -> CurrentPairing {
        let n = phi.ndims;
        let region = phi.support_region();
        ladder_vec(self.sched, &region, 1, |z, eps| {
            let xr = self.xi_r_at(z, eps);
            let mut total = Complex64::new(0.0, 0.0);
            if let Some(block) = xr.block(0, 0, &[chart], 0) {
                let s = sections[chart].map(|p| p.eval(z));
                let mut applied = FormMat::zero(block.rows, s.cols);
                for (&mask, mat) in &block.parts {
                    applied.set_part(mask, crate::numeric::svd::matmulc(mat, &s));
                }
                let top = applied
                    .scale_form_right(&phi.eval_scalar(z))
                    .part(full_mask(n));
                if top.rows > 0 && top.cols > 0 {
                    total += *top.at(0, 0);
                }
            }
            vec![total * orientation_factor(n)]
        })
        .pop()
        .expect("one component")
    }
}

/// One block slot of the potential identity, fixed before the ladder runs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Slot {
    p: usize,
    r: i64,
    tuple: Vec<usize>,
    level: i64,
    rows: usize,
    cols: usize,
}

fn collect_slots(samples: &[NumCochain]) -> Vec<Slot> {
    let mut slots: Vec<Slot> = Vec::new();
    for c in samples {
        for ((p, r), tuple, level, m) in c.iter() {
            let s = Slot {
                p,
                r,
                tuple: tuple.clone(),
                level,
                rows: m.rows,
                cols: m.cols,
            };
            if !slots.contains(&s) {
                slots.push(s);
            }
        }
    }
    slots.sort();
    slots
}

/// Residual report of the potential identity
/// ∇((−1)^k ξU + w(ξR)) = ξ − Σ_j (∂̄v)ʲ(ξR)ʲ,
/// paired per block entry against a φ bank, ∂̄ moved onto the forms.
pub struct PotentialReport {
    pub max_residual: f64,
    pub scale: f64,
    pub slots: usize,
}

pub fn potential_residuals(
    setup: &TransferSetup<'_>,
    b_twist: &NumCochain,
    phi_bank: &[TestForm],
    drop_w_term: bool,
) -> PotentialReport {
    let nerve = setup.nerve;
    let n = setup.ndims;
    let k = setup
        .xi
        .components()
        .map(|(p, q, r)| p as i64 + q as i64 + r)
        .max()
        .unwrap_or(0);
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };

    let x_at = |z: &[Complex64], eps: f64| -> NumCochain {
        let xi_u = setup.xi_u_at(z, eps).scale(Complex64::new(sign, 0.0));
        if drop_w_term {
            xi_u
        } else {
            xi_u.add(&setup.w_xi_r_at(z, eps))
        }
    };
    let rhs_at = |z: &[Complex64], eps: f64| -> NumCochain {
        setup.xi_at(z).sub(&setup.transfer_at(z, eps))
    };

    // Probe a few points to fix the slot list.
    let probe_eps = setup.sched.eps(1);
    let probes = [
        vec![Complex64::new(0.37, 0.21); n],
        vec![Complex64::new(-0.52, 0.33); n],
        vec![Complex64::new(1.13, -0.4); n],
    ];
    let mut samples = Vec::new();
    for pz in &probes {
        let a = setup.field.twist_at(pz);
        samples.push(x_at(pz, probe_eps).d_op(b_twist, &a, nerve));
        samples.push(x_at(pz, probe_eps));
        samples.push(rhs_at(pz, probe_eps));
    }
    let slots = collect_slots(&samples);

    let mut max_res = 0.0f64;
    let mut scale = 0.0f64;
    for phi in phi_bank {
        let region = phi.support_region();
        let dim = 2 * slots.len();
        let pairings = ladder_vec(setup.sched, &region, dim, |z, eps| {
            let mut out = vec![Complex64::new(0.0, 0.0); dim];
            let a = setup.field.twist_at(z);
            let x = x_at(z, eps);
            let dx = x.d_op(b_twist, &a, nerve);
            let rhs = rhs_at(z, eps);
            let phi_fs = phi.eval_scalar(z);
            let dphi_fs = phi.eval_dbar_scalar(z);
            let of = orientation_factor(n);
            for (si, slot) in slots.iter().enumerate() {
                let mut lhs_val = Complex64::new(0.0, 0.0);
                let mut rhs_val = Complex64::new(0.0, 0.0);
                if let Some(m) = dx.block(slot.p, slot.r, &slot.tuple, slot.level) {
                    let top = m.scale_form_right(&phi_fs).part(full_mask(n));
                    if top.rows > 0 && top.cols > 0 {
                        lhs_val += *top.at(0, 0);
                    }
                }
                // ⟨∇X, φ⟩ = ⟨DX, φ⟩ + (−1)^q ⟨X_q, ∂̄φ⟩.
                if let Some(m) = x.block(slot.p, slot.r, &slot.tuple, slot.level) {
                    for (&mask, mat) in &m.parts {
                        let q = mask.count_ones();
                        let s = if q % 2 == 0 { 1.0 } else { -1.0 };
                        let mut single = FormMat::zero(mat.rows, mat.cols);
                        single.set_part(mask, mat.clone());
                        let top = single.scale_form_right(&dphi_fs).part(full_mask(n));
                        if top.rows > 0 && top.cols > 0 {
                            lhs_val += top.at(0, 0) * s;
                        }
                    }
                }
                if let Some(m) = rhs.block(slot.p, slot.r, &slot.tuple, slot.level) {
                    let top = m.scale_form_right(&phi_fs).part(full_mask(n));
                    if top.rows > 0 && top.cols > 0 {
                        rhs_val += *top.at(0, 0);
                    }
                }
                out[2 * si] = (lhs_val - rhs_val) * of;
                out[2 * si + 1] = rhs_val * of;
            }
            out
        });
        for si in 0..slots.len() {
            max_res = max_res.max(pairings[2 * si].value.norm());
            scale = scale.max(pairings[2 * si + 1].value.norm());
        }
    }
    PotentialReport {
        max_residual: max_res,
        scale: scale.max(1e-12),
        slots: slots.len(),
    }
}

/// Integrates a per-chart family of global symbolic forms over the model
/// space: Σ_α ∫ ρ_α · value_α with the canonical orientation (the frame
/// dz's complete the degree).
pub fn integrate_global_form(
    values: &[Mat<Form>],
    pou: &PartitionOfUnity,
    region: &BoxRegion,
    npts: usize,
    n: usize,
) -> Complex64 {
    integrate(region, npts, |z| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, m) in values.iter().enumerate() {
            if m.rows == 0 {
                continue;
            }
            let rho = pou.rho(alpha, z);
            if rho == 0.0 {
                continue;
            }
            if let Some(&coeff) = eval_form(m.at(0, 0), pou, z).get(&full_mask(n)) {
                acc += coeff * rho;
            }
        }
        acc * orientation_factor(n)
    })
}
