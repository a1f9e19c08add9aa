//! Numeric oracles for the current engine, run before anything downstream
//! trusts it:
//!
//! * the Cauchy contour oracle: ⟨∂̄[1/zᵏ], φ dz⟩ evaluated as a small-circle
//!   contour integral with trapezoid quadrature and radius extrapolation —
//!   no ε-regularization, no grids, no operator fields;
//! * the iterated one-variable oracle for the two-variable Koszul residue;
//! * pointwise operator-field identity reports at acceptance tolerances.

use num_complex::Complex64;
use twixt_core::nerve::Nerve;
use twixt_core::numeric::form::{Bump, TestForm};
use twixt_core::numeric::opfield::{identity_report, Cutoff, OpField};
use twixt_core::numeric::pairing::{
    dbar_residue_pairing, principal_value_pairing, r_block_pairing, restriction_pairing, Kernel,
};
use twixt_core::numeric::schedule::Schedule;
use twixt_core::poly::Poly;
use twixt_core::resolution::free_resolution;
use twixt_core::twist::{from_global_resolution, ChartFrames};
use twixt_core::Mat;

const TAU: f64 = core::f64::consts::TAU;

fn zvars() -> [&'static str; 1] {
    ["z"]
}

fn p1(s: &str) -> Poly {
    Poly::parse(s, &zvars()).unwrap()
}

/// φ with amplitude poly(z, z̄)·bump, carrying the dz factor.
fn phi(poly: &str, r_in: f64, r_out: f64, center: Complex64) -> TestForm {
    let mut form = TestForm::bump(1, vec![center], r_in, r_out, 0b1, 0);
    form.terms[0].0 = Poly::parse(poly, &["z", "zbar"]).unwrap();
    form
}

/// Contour oracle: lim_{r→0} ∮_{|z|=r} φ(z)/zᵏ dz by trapezoid quadrature
/// at three radii with geometric extrapolation.
fn contour_oracle(phi: &TestForm, k: i32) -> Complex64 {
    let circle = |r: f64| -> Complex64 {
        let m = 2048;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let th = TAU * (j as f64) / (m as f64);
            let z = Complex64::from_polar(r, th);
            let dz = Complex64::new(0.0, 1.0) * z * (TAU / m as f64);
            acc += phi.amplitude(&[z]) / z.powi(k) * dz;
        }
        acc
    };
    let (a, b, c) = (circle(0.2), circle(0.1), circle(0.05));
    let d1 = b - a;
    let d2 = c - b;
    if d2.norm() < 1e-12 {
        return c;
    }
    let q = d2 / d1;
    c + d2 * q / (1.0 - q)
}

#[test]
fn contour_oracle_matches_taylor_coefficients() {
    // ⟨∂̄[1/zᵏ], φ dz⟩ = 2πi φ^{(k−1)}(0)/(k−1)! in the z-direction.
    let two_pi_i = Complex64::new(0.0, TAU);
    let cases: [(&str, i32, Complex64); 5] = [
        ("1", 1, two_pi_i),
        ("z", 2, two_pi_i),
        ("z^2", 3, two_pi_i),
        ("zbar", 1, Complex64::new(0.0, 0.0)),
        ("z*zbar", 2, Complex64::new(0.0, 0.0)),
    ];
    for (poly, k, expect) in cases {
        let form = phi(poly, 0.5, 1.0, Complex64::new(0.0, 0.0));
        let got = contour_oracle(&form, k);
        assert!(
            (got - expect).norm() < 1e-8,
            "poly {} k {}: got {} expect {}",
            poly,
            k,
            got,
            expect
        );
    }
}

fn pv_field(k: usize) -> (twixt_core::twist::TwistingCochain, Nerve) {
    let nerve = Nerve::complete(1);
    let d = Mat::from_rows(vec![vec![p1(&format!("z^{}", k))]]);
    let res = free_resolution(&d, 1, 1).unwrap();
    let tw = from_global_resolution(&res, &nerve, &ChartFrames::trivial(1, 1)).unwrap();
    (tw, nerve)
}

fn residue_schedule() -> Schedule {
    Schedule {
        eps0: 0.25,
        eps_levels: 4,
        grid_base: 160,
        grid_levels: 4,
        margin: 1e-6,
        fd_step: 1e-3,
        include_prime: false,
    }
}

#[test]
fn one_variable_residues_match_contour_oracle() {
    // Engine route: the R⁰-block pairing of the operator field of 𝒪/(zᵏ).
    for k in 1..=3usize {
        let (tw, nerve) = pv_field(k);
        let field = OpField::new(&tw, &nerve);
        let cutoff = Cutoff {
            polys: vec![p1(&format!("z^{}", k))],
        };
        let sched = residue_schedule();
        let prefactor = match k {
            1 => "1",
            2 => "z",
            _ => "z^2",
        };
        let form = phi(prefactor, 0.75, 1.2, Complex64::new(0.0, 0.0));
        let oracle = contour_oracle(&form, k as i32);
        let bp = r_block_pairing(&field, &cutoff, &sched, &[0], 0, 1, &form, None);
        let got = *bp.values.at(0, 0);
        let rel = (got - oracle).norm() / oracle.norm();
        assert!(
            rel < 1e-4,
            "k = {}: engine {} oracle {} rel {} err {}",
            k,
            got,
            oracle,
            rel,
            bp.error
        );
        assert!(bp.converged, "ladder did not converge for k = {}", k);

        // Independent kernel route through the explicit rational kernel.
        let kernel_pairing = dbar_residue_pairing(
            &Poly::one_in(1),
            &p1(&format!("z^{}", k)),
            &cutoff,
            &sched,
            &form,
        );
        let rel2 = (kernel_pairing.value - oracle).norm() / oracle.norm();
        assert!(rel2 < 1e-4, "kernel route k = {}: rel {}", k, rel2);
    }
}

#[test]
fn disjoint_support_pairs_to_zero() {
    let (tw, nerve) = pv_field(1);
    let field = OpField::new(&tw, &nerve);
    let cutoff = Cutoff { polys: vec![p1("z")] };
    let sched = residue_schedule();
    // Support in |z − 3| < 1/2: far from the singular point.
    let form = phi("1", 0.25, 0.5, Complex64::new(3.0, 0.0));
    let bp = r_block_pairing(&field, &cutoff, &sched, &[0], 0, 1, &form, None);
    assert!(bp.values.at(0, 0).norm() < 1e-12);
}

#[test]
fn restriction_has_sep_for_principal_values() {
    let sched = residue_schedule();
    let cutoff = Cutoff { polys: vec![p1("z")] };
    let form = phi("1", 0.75, 1.2, Complex64::new(0.0, 0.0));
    // φ needs both dz and dz̄ to pair with a (0,0)-current; the z-prefactor
    // keeps the principal value away from zero (radial bumps pair to 0
    // against 1/z by angular symmetry).
    let mut pv_form = phi("z", 0.75, 1.2, Complex64::new(0.0, 0.0));
    pv_form.dzbar_mask = 0b1;

    // ⟨1_{X∖{0}}[1/z], φ⟩ = ⟨[1/z], φ⟩.
    let plain = principal_value_pairing(&Poly::one_in(1), &p1("z"), &cutoff, &sched, &pv_form);
    let restricted = restriction_pairing(
        &Kernel::PrincipalValue {
            num: &Poly::one_in(1),
            den: &p1("z"),
            cutoff: &cutoff,
        },
        &cutoff,
        &sched,
        &pv_form,
    );
    let denom = plain.value.norm().max(1e-12);
    assert!(
        (plain.value - restricted.value).norm() / denom < 1e-3,
        "SEP fails: {} vs {}",
        plain.value,
        restricted.value
    );

    // ⟨1_{X∖{0}} ∂̄[1/z], φ dz⟩ = 0: the residue dies on its own support.
    let res_restricted = restriction_pairing(
        &Kernel::DbarPrincipalValue {
            num: &Poly::one_in(1),
            den: &p1("z"),
            cutoff: &cutoff,
        },
        &cutoff,
        &sched,
        &form,
    );
    assert!(
        res_restricted.value.norm() < 1e-6,
        "residue survived its own support cutoff: {}",
        res_restricted.value
    );

    // Smooth kernels are unchanged by any restriction.
    let smooth = p1("z^2 + 1");
    let direct = principal_value_pairing(&smooth, &Poly::one_in(1), &cutoff, &sched, &pv_form);
    let smooth_restricted = restriction_pairing(
        &Kernel::Smooth { amplitude: &smooth },
        &cutoff,
        &sched,
        &pv_form,
    );
    assert!(
        (direct.value - smooth_restricted.value).norm() / direct.value.norm().max(1e-12) < 1e-6
    );
}

#[test]
fn operator_field_identities_at_sample_points() {
    for k in [1usize, 2] {
        let (tw, nerve) = pv_field(k);
        let field = OpField::new(&tw, &nerve);
        let cutoff = Cutoff {
            polys: vec![p1(&format!("z^{}", k))],
        };
        // ≥200 sample points on a ring grid avoiding the singular point.
        let mut points = Vec::new();
        for i in 0..15 {
            for j in 0..15 {
                let z = Complex64::new(-1.4 + 0.2 * i as f64, -1.4 + 0.2 * j as f64);
                points.push(vec![z]);
            }
        }
        assert!(points.len() >= 200);
        let report = identity_report(&field, &points, &cutoff, 0.05);
        assert!(report.points_used >= 200);
        assert!(report.mp_axioms < 1e-10, "MP axioms: {}", report.mp_axioms);
        assert!(report.sigma0_sq < 1e-10);
        assert!(report.sigma_sq < 1e-10);
        assert!(report.q0_a0 < 1e-10);
        assert!(report.q_decomposition < 1e-10);
        assert!(report.sigma_through_q0 < 1e-10);
        assert!(
            report.nabla_u_observed_order >= 1.8 || report.nabla_u_residual_h < 1e-12,
            "order {} (residuals {} / {})",
            report.nabla_u_observed_order,
            report.nabla_u_residual_h,
            report.nabla_u_residual_h2
        );
    }
}

/// Iterated one-variable contour oracle for the two-variable Koszul
/// residue: (2πi)² φ(0,0) for the full residue component.
fn iterated_oracle(f: &TestForm) -> Complex64 {
    let circle2 = |r: f64| -> Complex64 {
        let m = 256;
        let mut acc = Complex64::new(0.0, 0.0);
        for j1 in 0..m {
            let t1 = TAU * (j1 as f64) / (m as f64);
            let z1 = Complex64::from_polar(r, t1);
            let dz1 = Complex64::new(0.0, 1.0) * z1 * (TAU / m as f64);
            for j2 in 0..m {
                let t2 = TAU * (j2 as f64) / (m as f64);
                let z2 = Complex64::from_polar(r, t2);
                let dz2 = Complex64::new(0.0, 1.0) * z2 * (TAU / m as f64);
                acc += f.amplitude(&[z1, z2]) / (z1 * z2) * dz1 * dz2;
            }
        }
        acc
    };
    let (a, b) = (circle2(0.1), circle2(0.05));
    // φ is constant near the origin for the bank used here; the two radii
    // agree to quadrature accuracy and the finer one is returned.
    assert!((a - b).norm() < 1e-6);
    b
}

#[test]
fn koszul_two_variable_residue() {
    let vars = ["z1", "z2"];
    let nerve = Nerve::complete(1);
    let d1 = Mat::from_rows(vec![vec![
        Poly::parse("z1", &vars).unwrap(),
        Poly::parse("z2", &vars).unwrap(),
    ]]);
    let mut res = free_resolution(&d1, 2, 2).unwrap();
    // Pin the Koszul orientation of the second differential: (−z2, z1)ᵀ.
    res.differentials[1] = Mat::from_rows(vec![
        vec![Poly::parse("-z2", &vars).unwrap()],
        vec![Poly::parse("z1", &vars).unwrap()],
    ]);
    assert!(res.composites_vanish());
    let tw = from_global_resolution(&res, &nerve, &ChartFrames::trivial(1, 2)).unwrap();
    let field = OpField::new(&tw, &nerve);
    let cutoff = Cutoff {
        polys: vec![
            Poly::parse("z1", &vars).unwrap(),
            Poly::parse("z2", &vars).unwrap(),
        ],
    };
    let sched = Schedule {
        eps0: 0.5,
        eps_levels: 4,
        grid_base: 24,
        grid_levels: 3,
        margin: 1e-6,
        fd_step: 1e-3,
        include_prime: false,
    };
    let form = TestForm::bump(
        2,
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        0.6,
        1.0,
        0b11,
        0,
    );
    let oracle = iterated_oracle(&form);
    let expect = Complex64::new(0.0, TAU) * Complex64::new(0.0, TAU);
    assert!((oracle - expect).norm() / expect.norm() < 1e-6);
    let bp = r_block_pairing(&field, &cutoff, &sched, &[0], 0, 2, &form, None);
    let got = *bp.values.at(0, 0);
    let rel = (got - oracle).norm() / oracle.norm();
    assert!(
        rel < 1e-3,
        "Koszul residue: engine {} oracle {} rel {} err {}",
        got,
        oracle,
        rel,
        bp.error
    );
}
