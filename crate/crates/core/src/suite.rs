//! Randomized exact verification: the differential and antiderivation laws
//! of the cochain algebra, checked with exact zero residuals on seeded
//! random inputs. The CLI `suite` command and the test-suite both run these.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cochain::Cochain;
use crate::nerve::{BundleFamily, Nerve};
use crate::poly::Poly;
use crate::resolution::free_resolution;
use crate::rng::Sampler;
use crate::symbol::Form;
use crate::twist::{from_global_resolution, trivial_twist, ChartFrames, TwistingCochain};

#[derive(Clone, Debug)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Verdict {
            name: String::from(name),
            pass,
            detail,
        }
    }
}

fn random_nerve(s: &mut Sampler, ncharts: usize) -> Nerve {
    // Mostly complete nerves; sometimes drop one maximal face.
    if ncharts >= 3 && s.range(4) == 0 {
        let sets: Vec<Vec<usize>> = (0..ncharts)
            .map(|i| vec![i, (i + 1) % ncharts])
            .collect();
        Nerve::from_maximal_sets(ncharts, &sets)
    } else {
        Nerve::complete(ncharts)
    }
}

fn random_degree(s: &mut Sampler) -> (usize, u32, i64) {
    (s.range(3), s.range(2) as u32, s.range(3) as i64 - 1)
}

/// δ² = 0 on random cochains.
pub fn check_delta_squared(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let ncharts = 2 + (t % 3);
        let mut s = Sampler::new(seed ^ (t as u64), ncharts, 1);
        let nerve = random_nerve(&mut s, ncharts);
        let src = s.family(2, 3);
        let tgt = s.family(2, 3);
        let deg = random_degree(&mut s);
        let f = s.cochain(&nerve, &src, &tgt, deg, 0.7);
        if !f.cech_delta(&nerve).cech_delta(&nerve).is_zero() {
            failures += 1;
        }
    }
    Verdict::new(
        "delta_squared_zero",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

/// ∂̄² = 0 on random cochains.
pub fn check_dbar_squared(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let ncharts = 2 + (t % 3);
        let mut s = Sampler::new(seed ^ 0x11 ^ (t as u64), ncharts, 1 + t % 2);
        let nerve = random_nerve(&mut s, ncharts);
        let src = s.family(2, 3);
        let tgt = s.family(2, 3);
        let deg = random_degree(&mut s);
        let f = s.cochain(&nerve, &src, &tgt, deg, 0.7);
        if !f.dbar(&nerve).dbar(&nerve).is_zero() {
            failures += 1;
        }
    }
    Verdict::new(
        "dbar_squared_zero",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

fn test_twists(nerve: &Nerve, pick: usize) -> TwistingCochain {
    let vars_z = ["z"];
    match pick % 3 {
        0 => {
            let d = crate::matrix::Mat::from_rows(vec![vec![Poly::parse("z^2", &vars_z).unwrap()]]);
            let res = free_resolution(&d, 1, 1).unwrap();
            from_global_resolution(&res, nerve, &ChartFrames::trivial(nerve.ncharts, 1)).unwrap()
        }
        1 => {
            let d = crate::matrix::Mat::from_rows(vec![vec![Poly::parse("z^3", &vars_z).unwrap()]]);
            let res = free_resolution(&d, 1, 1).unwrap();
            from_global_resolution(&res, nerve, &ChartFrames::trivial(nerve.ncharts, 1)).unwrap()
        }
        _ => trivial_twist(&BundleFamily::line(nerve.ncharts, 2), nerve, 1),
    }
}

/// D² = 0, ∇² = 0 and ∂̄D = −D∂̄ against valid twisting cochains.
pub fn check_d_nabla_squared(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    let mut detail = String::new();
    for t in 0..trials {
        let ncharts = 2 + (t % 2);
        let mut s = Sampler::new(seed ^ 0x22 ^ (t as u64), ncharts, 1);
        let nerve = Nerve::complete(ncharts);
        let a = test_twists(&nerve, t);
        let g_fam = BundleFamily::line(ncharts, 1 + t % 2);
        let b = trivial_twist(&g_fam, &nerve, 1);
        let deg = random_degree(&mut s);
        let f = s.cochain(&nerve, &a.family, &g_fam, deg, 0.8);
        let df = f.d_op(&b.cochain, &a.cochain, &nerve).unwrap();
        let ddf = df.d_op(&b.cochain, &a.cochain, &nerve).unwrap();
        let nf = f.nabla(&b.cochain, &a.cochain, &nerve).unwrap();
        let nnf = nf.nabla(&b.cochain, &a.cochain, &nerve).unwrap();
        let mix = df.dbar(&nerve).add(&f.dbar(&nerve).d_op(&b.cochain, &a.cochain, &nerve).unwrap(), &nerve);
        if !ddf.is_zero() || !nnf.is_zero() || !mix.is_zero() {
            failures += 1;
            if detail.is_empty() {
                detail = format!(
                    "trial {}: D²={} ∇²={} (∂̄D+D∂̄)={}",
                    t,
                    ddf.nnz(),
                    nnf.nnz(),
                    mix.nnz()
                );
            }
        }
    }
    Verdict::new(
        "d_nabla_squared_and_anticommute",
        failures == 0,
        if detail.is_empty() {
            format!("{} trials, 0 failures", trials)
        } else {
            detail
        },
    )
}

/// Antiderivation laws for δ, ∂̄, D, ∇ on products of homogeneous cochains.
pub fn check_leibniz(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let ncharts = 2 + (t % 2);
        let mut s = Sampler::new(seed ^ 0x33 ^ (t as u64), ncharts, 1);
        let nerve = Nerve::complete(ncharts);
        // E --g--> F --f--> G with F twisted, E and G plain.
        let a_f = test_twists(&nerve, t);
        let e_fam = s.uniform_family(1, 2);
        let g_fam = BundleFamily::line(ncharts, 1);
        let a_e = trivial_twist(&e_fam, &nerve, 1);
        let b_g = trivial_twist(&g_fam, &nerve, 1);

        let (p1, q1, r1) = random_degree(&mut s);
        let (p2, q2, r2) = random_degree(&mut s);
        let f = s.cochain(&nerve, &a_f.family, &g_fam, (p1, q1, r1), 0.8);
        let g = s.cochain(&nerve, &e_fam, &a_f.family, (p2, q2, r2), 0.8);
        let deg_f = p1 as i64 + q1 as i64 + r1;
        let sign = |c: Cochain| if deg_f.rem_euclid(2) == 1 { c.neg() } else { c };

        let fg = f.mul(&g, &nerve).unwrap();

        let lhs_delta = fg.cech_delta(&nerve);
        let rhs_delta = f
            .cech_delta(&nerve)
            .mul(&g, &nerve)
            .unwrap()
            .add(&sign(f.mul(&g.cech_delta(&nerve), &nerve).unwrap()), &nerve);

        let lhs_dbar = fg.dbar(&nerve);
        let rhs_dbar = f
            .dbar(&nerve)
            .mul(&g, &nerve)
            .unwrap()
            .add(&sign(f.mul(&g.dbar(&nerve), &nerve).unwrap()), &nerve);

        let lhs_d = fg.d_op(&b_g.cochain, &a_e.cochain, &nerve).unwrap();
        let rhs_d = f
            .d_op(&b_g.cochain, &a_f.cochain, &nerve)
            .unwrap()
            .mul(&g, &nerve)
            .unwrap()
            .add(
                &sign(
                    f.mul(&g.d_op(&a_f.cochain, &a_e.cochain, &nerve).unwrap(), &nerve)
                        .unwrap(),
                ),
                &nerve,
            );

        let lhs_nabla = fg.nabla(&b_g.cochain, &a_e.cochain, &nerve).unwrap();
        let rhs_nabla = f
            .nabla(&b_g.cochain, &a_f.cochain, &nerve)
            .unwrap()
            .mul(&g, &nerve)
            .unwrap()
            .add(
                &sign(
                    f.mul(&g.nabla(&a_f.cochain, &a_e.cochain, &nerve).unwrap(), &nerve)
                        .unwrap(),
                ),
                &nerve,
            );

        if lhs_delta != rhs_delta
            || lhs_dbar != rhs_dbar
            || lhs_d != rhs_d
            || lhs_nabla != rhs_nabla
        {
            failures += 1;
        }
    }
    Verdict::new(
        "antiderivation_laws",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

/// Associativity of the product on random triples.
pub fn check_associativity(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let mut s = Sampler::new(seed ^ 0x44 ^ (t as u64), 3, 1);
        let nerve = Nerve::complete(3);
        let fam_a = s.family(1, 2);
        let fam_b = s.family(1, 2);
        let fam_c = s.family(1, 2);
        let fam_d = s.family(1, 2);
        let (dg1, dg2, dg3) = (random_degree(&mut s), random_degree(&mut s), random_degree(&mut s));
        let f = s.cochain(&nerve, &fam_c, &fam_d, dg1, 0.7);
        let g = s.cochain(&nerve, &fam_b, &fam_c, dg2, 0.7);
        let h = s.cochain(&nerve, &fam_a, &fam_b, dg3, 0.7);
        let lhs = f.mul(&g, &nerve).unwrap().mul(&h, &nerve).unwrap();
        let rhs = f.mul(&g.mul(&h, &nerve).unwrap(), &nerve).unwrap();
        if lhs != rhs {
            failures += 1;
        }
    }
    Verdict::new(
        "mul_associativity",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

/// Tri-degree additivity of the product.
pub fn check_degree_additivity(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let mut s = Sampler::new(seed ^ 0x55 ^ (t as u64), 2, 1);
        let nerve = Nerve::complete(2);
        let fam_a = s.family(1, 2);
        let fam_b = s.family(1, 2);
        let fam_c = s.family(1, 2);
        let d1 = random_degree(&mut s);
        let d2 = random_degree(&mut s);
        let f = s.cochain(&nerve, &fam_b, &fam_c, d1, 0.9);
        let g = s.cochain(&nerve, &fam_a, &fam_b, d2, 0.9);
        let fg = f.mul(&g, &nerve).unwrap();
        let expect = (d1.0 + d2.0, d1.1 + d2.1, d1.2 + d2.2);
        if fg.components().any(|k| k != expect) {
            failures += 1;
        }
    }
    Verdict::new(
        "mul_degree_additive",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

/// Canonical forms do not depend on assembly order.
pub fn check_normal_form_confluence(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let ncharts = 2 + (t % 3);
        let mut s = Sampler::new(seed ^ 0x66 ^ (t as u64), ncharts, 1);
        let nerve = random_nerve(&mut s, ncharts);
        let parts: Vec<Form> = (0..4).map(|_| s.form((t % 3) as u32)).collect();
        let ctx = (1usize << ncharts) - 1;
        let ctx = if nerve.set_admissible(ctx) { ctx } else { 0b1 };
        let fwd = parts
            .iter()
            .fold(Form::zero(ncharts, 1), |acc, f| acc.add(f))
            .normalize(&nerve, ctx);
        let rev = parts
            .iter()
            .rev()
            .fold(Form::zero(ncharts, 1), |acc, f| acc.add(f))
            .normalize(&nerve, ctx);
        // Normalizing summand-wise then adding must agree as well.
        let piecewise = parts
            .iter()
            .map(|f| f.normalize(&nerve, ctx))
            .fold(Form::zero(ncharts, 1), |acc, f| acc.add(&f));
        if fwd != rev || fwd != piecewise || fwd != fwd.normalize(&nerve, ctx) {
            failures += 1;
        }
    }
    Verdict::new(
        "normal_form_confluence",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

/// Selector reassembly: Σ_p f^p = f, and selection is idempotent.
pub fn check_selectors(seed: u64, trials: usize) -> Verdict {
    let mut failures = 0;
    for t in 0..trials {
        let mut s = Sampler::new(seed ^ 0x77 ^ (t as u64), 2, 1);
        let nerve = Nerve::complete(2);
        let src = s.family(2, 2);
        let tgt = s.family(2, 2);
        let mut f = Cochain::zero(src.clone(), tgt.clone(), 1);
        for _ in 0..3 {
            let deg = random_degree(&mut s);
            let part = s.cochain(&nerve, &src, &tgt, deg, 0.8);
            f = f.add(&part, &nerve);
        }
        let mut sum = Cochain::zero(src.clone(), tgt.clone(), 1);
        for p in 0..=f.max_cech_degree().unwrap_or(0) {
            sum = sum.add(&f.cech_part(p), &nerve);
        }
        let sel = f.select(1, 0);
        if sum != f || sel.select(1, 0) != sel {
            failures += 1;
        }
    }
    Verdict::new(
        "selector_projections",
        failures == 0,
        format!("{} trials, {} failures", trials, failures),
    )
}

/// The full exact suite at the given seed.
pub fn exact_suite(seed: u64, trials: usize) -> Vec<Verdict> {
    vec![
        check_delta_squared(seed, trials),
        check_dbar_squared(seed, trials),
        check_d_nabla_squared(seed, trials / 2),
        check_leibniz(seed, trials / 2),
        check_associativity(seed, trials / 2),
        check_degree_additivity(seed, trials),
        check_normal_form_confluence(seed, trials),
        check_selectors(seed, trials / 2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_suite_small() {
        for v in exact_suite(7, 8) {
            assert!(v.pass, "{}: {}", v.name, v.detail);
        }
    }
}
