//! Transfer-layer verification: exact contraction identities, the
//! classical Čech→Dolbeault map with its Stokes-oracle integral, and the
//! hybrid main transfer on a two-chart skyscraper with its ∇-potential
//! certificate and fault detection.

use std::collections::BTreeMap;

use num_complex::Complex64;
use twixt_core::cochain::Cochain;
use twixt_core::nerve::{BundleFamily, Nerve};
use twixt_core::numeric::form::{Bump, PartitionOfUnity, TestForm};
use twixt_core::numeric::opfield::{Cutoff, OpField};
use twixt_core::numeric::quad::BoxRegion;
use twixt_core::numeric::schedule::Schedule;
use twixt_core::poly::Poly;
use twixt_core::rng::Sampler;
use twixt_core::symbol::{parse_form, Form};
use twixt_core::transfer::*;
use twixt_core::twist::{
    build_twisted_resolution, trivial_twist, ChartFrames, LocalPresentationSet,
};
use twixt_core::Mat;

const TAU: f64 = core::f64::consts::TAU;

#[test]
fn contraction_identities_vanish_exactly() {
    for trial in 0..40u64 {
        let ncharts = 2 + (trial % 2) as usize;
        let nerve = Nerve::complete(ncharts);
        let mut s = Sampler::new(1000 + trial, ncharts, 1);
        let f_fam = s.uniform_family(1, 2);
        let g_fam = BundleFamily::line(ncharts, 1);
        let a = trivial_twist(&f_fam, &nerve, 1);
        let b = trivial_twist(&g_fam, &nerve, 1);
        let mut f = Cochain::zero(f_fam.clone(), g_fam.clone(), 1);
        for _ in 0..3 {
            let deg = (s.range(3), s.range(2) as u32, s.range(2) as i64);
            let part = s.cochain(&nerve, &f_fam, &g_fam, deg, 0.7);
            f = f.add(&part, &nerve);
        }
        let residuals =
            contraction_identity_residuals(&f, &b.cochain, &a.cochain, &nerve, 3).unwrap();
        for (j, r) in residuals.iter().enumerate() {
            assert!(r.is_zero(), "trial {} identity {} has residual", trial, j);
        }
    }
}

#[test]
fn classical_map_on_p1_degree_minus_two() {
    // c₀₁ = 1/z as a Čech 1-cocycle for 𝒪(−2); the image must be θ₀·(1/z)
    // and its integral over P¹ must be −2πi.
    let nerve = Nerve::complete(2);
    let fam = BundleFamily::line(2, 1);
    let mut c = Cochain::zero(fam.clone(), fam.clone(), 1);
    let entry = |text: &str| {
        Mat::from_rows(vec![vec![parse_form(text, 2, 1).unwrap()]])
    };
    c.set_block(&nerve, (1, 0, 0), &[0, 1], 0, entry("z^-1"));
    c.set_block(&nerve, (1, 0, 0), &[1, 0], 0, entry("-z^-1"));
    // Full Čech cocycle: D c = 0 with unit twists on both sides.
    let o_twist = trivial_twist(&fam, &nerve, 1);
    assert!(c
        .d_op(&o_twist.cochain, &o_twist.cochain, &nerve)
        .unwrap()
        .is_zero());

    let values = cech_to_dolbeault(&c, &nerve).unwrap();
    let expect = parse_form("z^-1", 2, 1)
        .unwrap()
        .mul(&Form::theta(2, 1, 0));
    for alpha in 0..2 {
        let got = values[alpha].at(0, 0);
        let nf = expect.normalize(&nerve, 1 << alpha);
        assert_eq!(got, &nf, "chart {}", alpha);
        assert!(got.dbar().normalize(&nerve, 1 << alpha).is_zero());
    }

    // Stokes oracle: ∮_{|z|=1} dz/z = 2πi, and the annulus integral of
    // ∂̄ρ₀ ∧ dz/z equals −∮ = −2πi.
    let oracle = {
        let m = 4096;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let th = TAU * (j as f64) / (m as f64);
            let z = Complex64::from_polar(1.0, th);
            let dz = Complex64::new(0.0, 1.0) * z * (TAU / m as f64);
            acc += dz / z;
        }
        -acc
    };
    assert!((oracle - Complex64::new(0.0, -TAU)).norm() < 1e-10);

    let pou = PartitionOfUnity::P1Standard;
    let region = BoxRegion::around(&[Complex64::new(0.0, 0.0)], 1.8);
    let coarse = integrate_global_form(&values, &pou, &region, 360, 1);
    let fine = integrate_global_form(&values, &pou, &region, 520, 1);
    assert!(
        (fine - oracle).norm() / oracle.norm() < 1e-6,
        "integral {} vs oracle {}",
        fine,
        oracle
    );
    assert!((fine - coarse).norm() / oracle.norm() < 1e-6);
}

/// Two charts on ℂ, both containing the origin, with presentations (z)
/// and (3z) glued by the identity on cokernels. The partition of unity is
/// flat (ρ₀ ≡ 1) near the origin, so chart-supported checks against the
/// sheaf-level map are meaningful there.
struct SkyscraperSetup {
    nerve: Nerve,
    tw: twixt_core::twist::TwistingCochain,
    g_fam: BundleFamily,
    pou: PartitionOfUnity,
    cutoff: Cutoff,
    sched: Schedule,
    xi: Cochain,
}

fn two_chart_skyscraper() -> SkyscraperSetup {
    let nerve = Nerve::complete(2);
    let vars = ["z"];
    let p = |s: &str| Poly::parse(s, &vars).unwrap();
    let input = LocalPresentationSet {
        nvars: 1,
        frames: ChartFrames::trivial(2, 1),
        presentations: vec![
            Mat::from_rows(vec![vec![p("z")]]),
            Mat::from_rows(vec![vec![p("3*z")]]),
        ],
        identifications: {
            let mut ids = BTreeMap::new();
            ids.insert((0usize, 1usize), Mat::from_rows(vec![vec![p("1")]]));
            ids.insert((1usize, 0usize), Mat::from_rows(vec![vec![p("1")]]));
            ids
        },
    };
    let tw = build_twisted_resolution(&input, &nerve, 1).unwrap();
    assert!(tw.verify(&nerve).unwrap().is_twisting());
    let g_fam = BundleFamily::line(2, 1);
    let pou = PartitionOfUnity::NormalizedBumps {
        bumps: vec![
            Bump {
                center: vec![Complex64::new(0.0, 0.0)],
                r_in: 1.0,
                r_out: 1.6,
            },
            Bump {
                center: vec![Complex64::new(1.3, 0.0)],
                r_in: 0.7,
                r_out: 1.1,
            },
        ],
    };
    let cutoff = Cutoff { polys: vec![p("z")] };
    let sched = Schedule {
        eps0: 0.002,
        eps_levels: 4,
        grid_base: 128,
        grid_levels: 4,
        margin: 1e-6,
        fd_step: 1e-4,
        include_prime: false,
    };
    // ξ generates Ext¹(𝒪/(z), 𝒪): the unit map F₀^{−1} → 𝒪 on chart 0;
    // D-closure forces ξ₁ = ξ₀·a¹₀₁ = 3 on chart 1.
    let mut xi = Cochain::zero(tw.family.clone(), g_fam.clone(), 1);
    xi.set_block(
        &nerve,
        (0, 0, 1),
        &[0],
        1,
        Mat::from_rows(vec![vec![Form::one(2, 1)]]),
    );
    xi.set_block(
        &nerve,
        (0, 0, 1),
        &[1],
        1,
        Mat::from_rows(vec![vec![Form::constant(2, 1, twixt_core::Scalar::from_int(3))]]),
    );
    SkyscraperSetup {
        nerve,
        tw,
        g_fam,
        pou,
        cutoff,
        sched,
        xi,
    }
}

fn phi_dz(poly: &str, r_in: f64, r_out: f64, center: Complex64) -> TestForm {
    let mut f = TestForm::bump(1, vec![center], r_in, r_out, 0b1, 0);
    f.terms[0].0 = Poly::parse(poly, &["z", "zbar"]).unwrap();
    f
}

#[test]
fn main_transfer_skyscraper() {
    let s = two_chart_skyscraper();
    let field = OpField::new(&s.tw, &s.nerve);
    let setup = TransferSetup {
        nerve: &s.nerve,
        field: &field,
        g_family: &s.g_fam,
        pou: &s.pou,
        xi: &s.xi,
        cutoff: &s.cutoff,
        sched: &s.sched,
        ndims: 1,
    };
    // ξ is D-closed.
    let b = trivial_twist(&s.g_fam, &s.nerve, 1);
    assert!(s
        .xi
        .d_op(&b.cochain, &s.tw.cochain, &s.nerve)
        .unwrap()
        .is_zero());

    // The output pairs with bump·dz to 2πi·bump(0) through the unit
    // section of F⁰, and to ~0 against z·(anything).
    let unit_sections = vec![
        Mat::from_rows(vec![vec![Poly::one_in(1)]]),
        Mat::from_rows(vec![vec![Poly::one_in(1)]]),
    ];
    let phi = phi_dz("1", 0.1, 0.18, Complex64::new(0.0, 0.0));
    let pairing = setup.pair_against_sections(&unit_sections, &phi);
    let expect = Complex64::new(0.0, TAU);
    assert!(
        (pairing.value - expect).norm() / expect.norm() < 1e-3,
        "transfer pairing {} expect {} (err {})",
        pairing.value,
        expect,
        pairing.error
    );

    // Annihilation of im a⁰: compose with the section z·1.
    let z_sections = vec![
        Mat::from_rows(vec![vec![Poly::parse("z", &["z"]).unwrap()]]),
        Mat::from_rows(vec![vec![Poly::parse("z", &["z"]).unwrap()]]),
    ];
    let ann = setup.pair_against_sections(&z_sections, &phi);
    assert!(
        ann.value.norm() / expect.norm() < 1e-3,
        "im a⁰ not annihilated: {}",
        ann.value
    );

    // Agreement with the chart-level sheaf map on a chart-supported form
    // (ρ₀ ≡ 1 on the support).
    let sheaf = setup.sheaf_route_pairing(0, &unit_sections, &phi);
    assert!(
        (pairing.value - sheaf.value).norm() / expect.norm() < 1e-3,
        "sheaf route {} vs transfer {}",
        sheaf.value,
        pairing.value
    );
}

#[test]
fn potential_identity_certificate() {
    let s = two_chart_skyscraper();
    let field = OpField::new(&s.tw, &s.nerve);
    let setup = TransferSetup {
        nerve: &s.nerve,
        field: &field,
        g_family: &s.g_fam,
        pou: &s.pou,
        xi: &s.xi,
        cutoff: &s.cutoff,
        sched: &s.sched,
        ndims: 1,
    };
    let b_num = unit_twist_num(&s.g_fam, &s.nerve);
    // Six forms: on-support and transition-annulus supports with
    // polynomial prefactors {1, z, z̄}.
    let bank = vec![
        phi_dz("1", 0.2, 0.4, Complex64::new(0.0, 0.0)),
        phi_dz("z", 0.2, 0.4, Complex64::new(0.0, 0.0)),
        phi_dz("zbar", 0.2, 0.4, Complex64::new(0.0, 0.0)),
        phi_dz("1", 0.25, 0.5, Complex64::new(1.1, 0.0)),
        phi_dz("z", 0.25, 0.5, Complex64::new(1.1, 0.0)),
        phi_dz("zbar", 0.25, 0.5, Complex64::new(1.1, 0.0)),
    ];
    let report = potential_residuals(&setup, &b_num, &bank, false);
    assert!(
        report.max_residual / report.scale < 1e-3,
        "potential residual {} / scale {} over {} slots",
        report.max_residual,
        report.scale,
        report.slots
    );
    // Fault injection: dropping the w(ξR) term must blow the residual up.
    let faulty = potential_residuals(&setup, &b_num, &bank[..2], true);
    assert!(
        faulty.max_residual / faulty.scale > 0.05,
        "fault not detected: {} / {}",
        faulty.max_residual,
        faulty.scale
    );
}
