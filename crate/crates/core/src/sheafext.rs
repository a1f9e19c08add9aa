//! Sheaf-level Ext over each chart: cohomology of Hom(F_α^•, G) with the
//! right action of a⁰, presented as a finitely generated module with
//! explicit generators and relations, plus the overlap gluing induced by
//! a¹ and its triple-overlap cocycle check.

use alloc::vec;
use alloc::vec::Vec;


use crate::groebner::GroebnerBasis;
use crate::matrix::Mat;
use crate::nerve::{ChartId, Nerve};
use crate::poly::{Poly, PolyMatrix};
use crate::resolution::{lift_through, syzygy};
use crate::twist::{ChartFrames, TwistError, TwistingCochain};

/// Generators and relations for Ext^k(ℱ, 𝒪^g) over one chart:
/// the module is R^{generators.cols} / column-span(relations).
#[derive(Clone, Debug)]
pub struct SheafExtPresentation {
    pub chart: ChartId,
    pub degree: usize,
    /// Columns are kernel generators, flattened ξ-matrices in R^{g·rank_k}.
    pub generators: PolyMatrix,
    /// Relations among the generator columns.
    pub relations: PolyMatrix,
    /// The image generators (flattened), kept for class comparisons.
    pub image: PolyMatrix,
}

impl SheafExtPresentation {
    /// Zero module exactly when every generator is already a relation.
    pub fn is_zero_module(&self, nvars: usize) -> bool {
        if self.generators.cols == 0 {
            return true;
        }
        let ncomps = self.relations.rows.max(1);
        let gens: Vec<Vec<Poly>> = (0..self.relations.cols)
            .map(|j| self.relations.col(j))
            .collect();
        let Ok(gb) = GroebnerBasis::new(&gens, ncomps, nvars) else {
            return false;
        };
        (0..self.generators.cols).all(|j| {
            let mut unit = vec![Poly::zero_in(nvars); ncomps];
            unit[j] = Poly::one_in(nvars);
            gb.contains(&unit)
        })
    }
}

/// Extracts the chart differential d_j: F^{−j} → F^{−j+1} from the twist,
/// expressed in the chart's own polynomial frame.
fn chart_differential(
    tw: &TwistingCochain,
    frames: &ChartFrames,
    chart: ChartId,
    src_level: i64,
) -> PolyMatrix {
    let rows = tw.family.rank(chart, src_level - 1);
    let cols = tw.family.rank(chart, src_level);
    match tw.cochain.block((0, 0, 1), &[chart], src_level) {
        Some(m) => m.map(|f| {
            let mut p = f.to_holomorphic().expect("holomorphic twist");
            for (i, &flip) in frames.flips[chart].iter().enumerate() {
                if flip {
                    p = p.flip_var(i);
                }
            }
            p
        }),
        None => Mat::from_fn(rows, cols, |_, _| Poly::zero_in(tw.ndims)),
    }
}

/// The map ξ ↦ ξ∘d on flattened Hom(F^{−k}, 𝒪^g)-matrices (row-major by
/// (target row t, source column s)).
fn compose_matrix(d: &PolyMatrix, g_rank: usize, nvars: usize) -> PolyMatrix {
    // Input coordinates: ξ(t, s), t < g_rank, s < d.rows.
    // Output coordinates: (ξ∘d)(t, s′), s′ < d.cols.
    let rows = g_rank * d.cols;
    let cols = g_rank * d.rows;
    Mat::from_fn(rows, cols, |i, j| {
        let (t_o, s_o) = (i / d.cols, i % d.cols);
        let (t_i, s_i) = (j / d.rows, j % d.rows);
        if t_o == t_i {
            d.at(s_i, s_o).clone()
        } else {
            Poly::zero_in(nvars)
        }
    })
}

/// Presentation of Ext^k(ℱ, 𝒪^{g_rank}) over the given chart.
pub fn sheaf_ext_chart(
    tw: &TwistingCochain,
    frames: &ChartFrames,
    chart: ChartId,
    g_rank: usize,
    k: usize,
) -> Result<SheafExtPresentation, TwistError> {
    let nvars = tw.ndims;
    let rank_k = tw.family.rank(chart, k as i64);
    let flat_dim = g_rank * rank_k;
    if flat_dim == 0 {
        return Ok(SheafExtPresentation {
            chart,
            degree: k,
            generators: Mat::from_fn(0, 0, |_, _| Poly::zero_in(nvars)),
            relations: Mat::from_fn(0, 0, |_, _| Poly::zero_in(nvars)),
            image: Mat::from_fn(0, 0, |_, _| Poly::zero_in(nvars)),
        });
    }
    // Outgoing map uses d_{k+1}, incoming uses d_k.
    let d_out = chart_differential(tw, frames, chart, k as i64 + 1);
    let d_in = chart_differential(tw, frames, chart, k as i64);
    let m_out = compose_matrix(&d_out, g_rank, nvars);
    let m_in = compose_matrix(&d_in, g_rank, nvars);
    debug_assert_eq!(m_out.cols, flat_dim);
    debug_assert_eq!(m_in.rows, flat_dim);

    let generators = if m_out.rows == 0 {
        Mat::identity_with(flat_dim, Poly::one_in(nvars))
    } else {
        syzygy(&m_out, nvars)?
    };
    // Express the image inside the chosen kernel generators.
    let x = if generators.cols == 0 {
        Mat::from_fn(0, m_in.cols, |_, _| Poly::zero_in(nvars))
    } else {
        lift_through(&generators, &m_in, nvars)?
            .expect("image lies in the kernel")
    };
    let gen_relations = if generators.cols == 0 {
        Mat::from_fn(0, 0, |_, _| Poly::zero_in(nvars))
    } else {
        syzygy(&generators, nvars)?
    };
    let relations = if gen_relations.cols == 0 {
        x.clone()
    } else {
        x.hcat(&gen_relations)
    };
    Ok(SheafExtPresentation {
        chart,
        degree: k,
        generators,
        relations,
        image: m_in,
    })
}

/// The gluing H(a¹_{αβ}): Ext^k over α → Ext^k over β on representatives,
/// as a coefficient matrix on the two presentations' generators.
pub fn gluing_on_generators(
    tw: &TwistingCochain,
    frames: &ChartFrames,
    _nerve: &Nerve,
    presentation_from: &SheafExtPresentation,
    presentation_to: &SheafExtPresentation,
    pair: (ChartId, ChartId),
    g_rank: usize,
) -> Result<PolyMatrix, TwistError> {
    let nvars = tw.ndims;
    let k = presentation_from.degree;
    debug_assert_eq!(pair.0, presentation_from.chart);
    debug_assert_eq!(pair.1, presentation_to.chart);
    let a1 = tw
        .cochain
        .block((1, 0, 0), &[pair.0, pair.1], k as i64)
        .map(|m| m.map(|f| f.to_holomorphic().expect("holomorphic twist")))
        .unwrap_or_else(|| {
            Mat::from_fn(
                tw.family.rank(pair.0, k as i64),
                tw.family.rank(pair.1, k as i64),
                |_, _| Poly::zero_in(nvars),
            )
        });
    // ξ ↦ ξ∘a¹ on flattened matrices.
    let comp = compose_matrix(&a1, g_rank, nvars);
    let mapped = comp.matmul(&presentation_from.generators);
    // Express mapped generators modulo the image in the target generators:
    // solve [S_β | image_β]·(c; h) = mapped over the overlap ring.
    let stacked = presentation_to.generators.hcat(&presentation_to.image);
    let sol = frames
        .lift_on_tuple(&[pair.0, pair.1], &stacked, &mapped)?
        .ok_or(TwistError::LiftFailure(vec![pair.0, pair.1]))?;
    let rows: Vec<usize> = (0..presentation_to.generators.cols).collect();
    let cols: Vec<usize> = (0..sol.cols).collect();
    Ok(sol.submatrix(&rows, &cols))
}

/// Checks H(a¹_{αβ})H(a¹_{βγ}) = H(a¹_{αγ}) on representatives over the
/// triple overlap: the difference of the mapped generators must fall in
/// the image submodule.
pub fn gluing_cocycle_check(
    tw: &TwistingCochain,
    frames: &ChartFrames,
    nerve: &Nerve,
    charts: (ChartId, ChartId, ChartId),
    g_rank: usize,
    k: usize,
) -> Result<bool, TwistError> {
    let nvars = tw.ndims;
    let (alpha, beta, gamma) = charts;
    let pres_a = sheaf_ext_chart(tw, frames, alpha, g_rank, k)?;
    let a1 = |x: ChartId, y: ChartId| -> PolyMatrix {
        tw.cochain
            .block((1, 0, 0), &[x, y], k as i64)
            .map(|m| m.map(|f| f.to_holomorphic().expect("holomorphic twist")))
            .unwrap_or_else(|| {
                Mat::from_fn(
                    tw.family.rank(x, k as i64),
                    tw.family.rank(y, k as i64),
                    |_, _| Poly::zero_in(nvars),
                )
            })
    };
    let via = compose_matrix(&a1(beta, gamma), g_rank, nvars)
        .matmul(&compose_matrix(&a1(alpha, beta), g_rank, nvars));
    let direct = compose_matrix(&a1(alpha, gamma), g_rank, nvars);
    let via_gens = via.matmul(&pres_a.generators);
    let direct_gens = direct.matmul(&pres_a.generators);
    let diff = &via_gens - &direct_gens;
    // Class-level equality over the γ-chart complex: membership of each
    // difference column in im(·∘d_k) over the triple overlap ring.
    let pres_c = sheaf_ext_chart(tw, frames, gamma, g_rank, k)?;
    if pres_c.image.cols == 0 {
        return Ok(diff.is_zero());
    }
    let tuple = vec![alpha, beta, gamma];
    let _ = nerve;
    Ok(frames
        .lift_on_tuple(&tuple, &pres_c.image, &diff)?
        .is_some())
}

/// Class arithmetic: true when two flattened cocycles differ by an element
/// of the image over the chart ring.
pub fn same_ext_class(
    presentation: &SheafExtPresentation,
    frames: &ChartFrames,
    u: &[Poly],
    v: &[Poly],
    _nvars: usize,
) -> Result<bool, TwistError> {
    let n = u.len();
    assert_eq!(v.len(), n);
    let diff = Mat::from_fn(n, 1, |i, _| u[i].clone() - v[i].clone());
    if presentation.image.cols == 0 {
        return Ok(diff.is_zero());
    }
    Ok(frames
        .lift_on_tuple(&[presentation.chart], &presentation.image, &diff)?
        .is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::free_resolution;
    use crate::twist::{from_global_resolution, trivial_twist};
    use alloc::collections::BTreeMap;
    use crate::twist::{build_twisted_resolution, LocalPresentationSet};

    fn p(s: &str, vars: &[&str]) -> Poly {
        Poly::parse(s, vars).unwrap()
    }

    #[test]
    fn skyscraper_on_line() {
        // ℱ = 𝒪/(z), G = 𝒪: Ext⁰ = 0, Ext¹ ≅ 𝒪/(z).
        let nerve = Nerve::complete(1);
        let vars = ["z"];
        let d = Mat::from_rows(vec![vec![p("z", &vars)]]);
        let res = free_resolution(&d, 1, 1).unwrap();
        let frames = ChartFrames::trivial(1, 1);
        let tw = from_global_resolution(&res, &nerve, &frames).unwrap();
        let e0 = sheaf_ext_chart(&tw, &frames, 0, 1, 0).unwrap();
        assert!(e0.is_zero_module(1));
        let e1 = sheaf_ext_chart(&tw, &frames, 0, 1, 1).unwrap();
        assert!(!e1.is_zero_module(1));
        assert_eq!(e1.generators.cols, 1);
        // The single relation is multiplication by z.
        assert_eq!(e1.relations.cols, 1);
        assert_eq!(*e1.relations.at(0, 0), p("z", &vars));
    }

    #[test]
    fn free_module_has_no_higher_ext() {
        let nerve = Nerve::complete(1);
        let fam = crate::nerve::BundleFamily::line(1, 2);
        let tw = trivial_twist(&fam, &nerve, 1);
        let frames = ChartFrames::trivial(1, 1);
        for k in 1..=2 {
            let e = sheaf_ext_chart(&tw, &frames, 0, 1, k).unwrap();
            assert!(e.is_zero_module(1), "Ext^{} of a free module", k);
        }
    }

    #[test]
    fn two_chart_gluing_cocycle() {
        let nerve = Nerve::complete(2);
        let vars = ["z"];
        let mut ids = BTreeMap::new();
        let one_m = Mat::from_rows(vec![vec![p("1", &vars)]]);
        ids.insert((0usize, 1usize), one_m.clone());
        ids.insert((1usize, 0usize), one_m);
        let frames = ChartFrames::trivial(2, 1);
        let input = LocalPresentationSet {
            nvars: 1,
            frames: frames.clone(),
            presentations: vec![
                Mat::from_rows(vec![vec![p("z^2", &vars)]]),
                Mat::from_rows(vec![vec![p("2*z^2", &vars)]]),
            ],
            identifications: ids,
        };
        let tw = build_twisted_resolution(&input, &nerve, 1).unwrap();
        let pa = sheaf_ext_chart(&tw, &frames, 0, 1, 1).unwrap();
        let pb = sheaf_ext_chart(&tw, &frames, 1, 1, 1).unwrap();
        let g = gluing_on_generators(&tw, &frames, &nerve, &pa, &pb, (0, 1), 1).unwrap();
        assert_eq!(g.rows, 1);
        // Triple-overlap composites agree for every ordered triple.
        for triple in [(0, 1, 0), (1, 0, 1), (0, 0, 1), (0, 1, 1)] {
            assert!(
                gluing_cocycle_check(&tw, &frames, &nerve, triple, 1, 1).unwrap(),
                "cocycle fails on {:?}",
                triple
            );
        }
    }
}
