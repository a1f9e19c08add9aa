//! Construction and verification of twisting cochains.
//!
//! A twisting cochain is a family of graded free complexes per chart with
//! gluing data a = Σ aᵏ, aᵏ of degrees (k, 0, 1−k), satisfying δa + aa = 0
//! and a¹_{αα} = id. Twisted resolutions arise from local presentations of
//! one sheaf: chart resolutions give a⁰, overlap identifications extend to
//! chain maps a¹, and every higher aᵏ solves a homotopy equation on each
//! (k+1)-tuple by degreewise lifting.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::cochain::{Cochain, CochainError, Tuple};
use crate::groebner::AlgebraError;
use crate::matrix::Mat;
use crate::nerve::{BundleFamily, ChartId, Nerve};
use crate::poly::{Poly, PolyMatrix};
use crate::resolution::{free_resolution, lift_through, lift_through_laurent, FreeResolution, ResolutionError};
use crate::scalar::Scalar;
use crate::symbol::Form;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingCochain {
    pub family: BundleFamily,
    pub ndims: usize,
    /// The sum Σ aᵏ with components (k, 0, 1−k).
    pub cochain: Cochain,
}

impl TwistingCochain {
    pub fn component(&self, k: usize) -> Cochain {
        self.cochain.cech_part(k)
    }

    /// δa + aa, identically zero exactly when `self` is a twisting cochain.
    pub fn residual(&self, nerve: &Nerve) -> Result<Cochain, CochainError> {
        let delta = self.cochain.cech_delta(nerve);
        let sq = self.cochain.mul(&self.cochain, nerve)?;
        Ok(delta.add(&sq, nerve))
    }

    pub fn verify(&self, nerve: &Nerve) -> Result<TwistReport, CochainError> {
        let residual = self.residual(nerve)?;
        let max_deg = residual.max_cech_degree().unwrap_or(0).max(2);
        let mut by_degree = Vec::new();
        for p in 0..=max_deg {
            let part = residual.cech_part(p);
            by_degree.push((p, part.is_zero()));
        }
        // a¹_{αα} = id on every chart.
        let mut diag_ok = true;
        let ncharts = self.family.ncharts();
        for alpha in 0..ncharts {
            for level in 0..=self.family.max_level() {
                let n = self.family.rank(alpha, level);
                if n == 0 {
                    continue;
                }
                let id = Mat::identity_with(n, Form::one(ncharts, self.ndims));
                match self.cochain.block((1, 0, 0), &[alpha, alpha], level) {
                    Some(m) if *m == id => {}
                    _ => diag_ok = false,
                }
            }
        }
        Ok(TwistReport {
            residual_zero_by_degree: by_degree,
            diagonal_identity: diag_ok,
            residual,
        })
    }
}

/// Verification report: residuals per Čech degree (degrees 0, 1, 2 are the
/// complex, chain-map and homotopy identities respectively).
#[derive(Clone, Debug)]
pub struct TwistReport {
    pub residual_zero_by_degree: Vec<(usize, bool)>,
    pub diagonal_identity: bool,
    pub residual: Cochain,
}

impl TwistReport {
    pub fn is_twisting(&self) -> bool {
        self.diagonal_identity && self.residual_zero_by_degree.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistError {
    Algebra(AlgebraError),
    Resolution(ResolutionError),
    Cochain(CochainError),
    /// No lift exists at the reported tuple: the inputs do not glue to a
    /// coherent sheaf.
    LiftFailure(Tuple),
    /// An entry is not expressible in the required chart frame.
    FrameViolation(ChartId),
    /// Identifications missing for an admissible overlap.
    MissingIdentification(ChartId, ChartId),
}

impl From<AlgebraError> for TwistError {
    fn from(e: AlgebraError) -> Self {
        TwistError::Algebra(e)
    }
}
impl From<ResolutionError> for TwistError {
    fn from(e: ResolutionError) -> Self {
        TwistError::Resolution(e)
    }
}
impl From<CochainError> for TwistError {
    fn from(e: CochainError) -> Self {
        TwistError::Cochain(e)
    }
}

impl core::fmt::Display for TwistError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TwistError::Algebra(e) => write!(f, "{}", e),
            TwistError::Resolution(e) => write!(f, "{}", e),
            TwistError::Cochain(e) => write!(f, "{}", e),
            TwistError::LiftFailure(t) => write!(f, "no lift over tuple {:?}", t),
            TwistError::FrameViolation(c) => write!(f, "entry not valid in frame of chart {}", c),
            TwistError::MissingIdentification(a, b) => {
                write!(f, "missing identification for overlap ({}, {})", a, b)
            }
        }
    }
}

/// Chart frames: which global variables are inverted in each chart's own
/// polynomial coordinates (P¹'s second chart inverts z). Sections are
/// always *stored* in global-frame Laurent coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartFrames {
    pub nvars: usize,
    pub flips: Vec<Vec<bool>>,
}

impl ChartFrames {
    pub fn trivial(ncharts: usize, nvars: usize) -> Self {
        ChartFrames {
            nvars,
            flips: vec![vec![false; nvars]; ncharts],
        }
    }

    pub fn p1() -> Self {
        ChartFrames {
            nvars: 1,
            flips: vec![vec![false], vec![true]],
        }
    }

    fn to_chart(&self, chart: ChartId, p: &Poly) -> Poly {
        let mut q = p.clone();
        for (i, &f) in self.flips[chart].iter().enumerate() {
            if f {
                q = q.flip_var(i);
            }
        }
        q
    }

    /// Solves a·x = b over the ring of the tuple's overlap. On a uniform
    /// frame the system is transported to that chart's polynomial ring;
    /// on mixed frames the differing variables become units.
    pub fn lift_on_tuple(
        &self,
        tuple: &[ChartId],
        a: &PolyMatrix,
        b: &PolyMatrix,
    ) -> Result<Option<PolyMatrix>, TwistError> {
        let first = tuple[0];
        let uniform = tuple.iter().all(|&c| self.flips[c] == self.flips[first]);
        if uniform {
            let fa = a.map(|p| self.to_chart(first, p));
            let fb = b.map(|p| self.to_chart(first, p));
            if fa.entries().any(|(_, _, p)| p.is_laurent()) {
                return Err(TwistError::FrameViolation(first));
            }
            if fb.entries().any(|(_, _, p)| p.is_laurent()) {
                return Err(TwistError::FrameViolation(first));
            }
            let x = lift_through(&fa, &fb, self.nvars)?;
            Ok(x.map(|m| m.map(|p| self.to_chart(first, p))))
        } else {
            let mut invertible = vec![false; self.nvars];
            for i in 0..self.nvars {
                invertible[i] = tuple.iter().any(|&c| self.flips[c][i] != self.flips[first][i]);
            }
            // Express in the frame of the first chart; differing variables
            // are invertible on the overlap, so Laurent entries are fine.
            let fa = a.map(|p| self.to_chart(first, p));
            let fb = b.map(|p| self.to_chart(first, p));
            let x = lift_through_laurent(&fa, &fb, self.nvars, &invertible)?;
            Ok(x.map(|m| m.map(|p| self.to_chart(first, p))))
        }
    }
}

/// Local presentations of one sheaf plus overlap identifications on
/// generators. Identifications are required inputs for both directions of
/// every admissible ordered pair.
#[derive(Clone, Debug)]
pub struct LocalPresentationSet {
    pub nvars: usize,
    pub frames: ChartFrames,
    /// Presentation matrix of ℱ|_{U_α} per chart, in global coordinates.
    pub presentations: Vec<PolyMatrix>,
    /// (α, β) ↦ matrix on generators F⁰_β → F⁰_α inducing the cokernel
    /// identification over U_{αβ}.
    pub identifications: BTreeMap<(ChartId, ChartId), PolyMatrix>,
}

/// Builds a twisted resolution from local data. Chart resolutions are
/// computed in each chart's polynomial frame; a¹ extends the given
/// identifications degreewise; higher aᵏ solve the stage-k homotopy
/// equations tuple by tuple. Construction stops when δa + aa vanishes
/// identically, which is checked rather than assumed.
pub fn build_twisted_resolution(
    input: &LocalPresentationSet,
    nerve: &Nerve,
    max_len: usize,
) -> Result<TwistingCochain, TwistError> {
    let ncharts = nerve.ncharts;
    assert_eq!(input.presentations.len(), ncharts);
    let ndims = input.nvars;

    // Chart resolutions, computed in chart frames, stored globally.
    let mut resolutions: Vec<FreeResolution> = Vec::new();
    for (alpha, pres) in input.presentations.iter().enumerate() {
        let local = pres.map(|p| input.frames.to_chart(alpha, p));
        if local.entries().any(|(_, _, p)| p.is_laurent()) {
            return Err(TwistError::FrameViolation(alpha));
        }
        let mut res = free_resolution(&local, max_len, input.nvars)?;
        res.differentials = res
            .differentials
            .iter()
            .map(|d| d.map(|p| input.frames.to_chart(alpha, p)))
            .collect();
        resolutions.push(res);
    }

    let family = BundleFamily::new(resolutions.iter().map(|r| r.ranks.clone()).collect());
    let max_level = family.max_level();
    let mut cochain = Cochain::zero(family.clone(), family.clone(), ndims);

    // a⁰: chart differentials, degrees (0,0,1).
    for alpha in 0..ncharts {
        for (k, d) in resolutions[alpha].differentials.iter().enumerate() {
            let level = (k + 1) as i64;
            let m = d.map(|p| Form::from_holomorphic(ncharts, ndims, p));
            cochain.set_block(nerve, (0, 0, 1), &[alpha], level, m);
        }
    }

    // a¹ on pairs: identity on the diagonal, lifted chain maps elsewhere.
    for pair in nerve.tuples(2) {
        let (alpha, beta) = (pair[0], pair[1]);
        let x0 = if alpha == beta {
            Mat::identity_with(family.rank(alpha, 0), Poly::one_in(ndims))
        } else {
            input
                .identifications
                .get(&(alpha, beta))
                .cloned()
                .ok_or(TwistError::MissingIdentification(alpha, beta))?
        };
        let mut maps: Vec<PolyMatrix> = vec![x0];
        for level in 1..=max_level {
            let d_tgt = differential(&resolutions[alpha], level);
            let d_src = differential(&resolutions[beta], level);
            // Chain-map extension: d^α · X_ℓ = X_{ℓ−1} · d^β.
            let rhs = maps[(level - 1) as usize].matmul(&d_src);
            let x = match input.frames.lift_on_tuple(&pair, &d_tgt, &rhs)? {
                Some(x) => x,
                None => return Err(TwistError::LiftFailure(pair.clone())),
            };
            maps.push(x);
        }
        for (level, m) in maps.iter().enumerate() {
            if m.rows == 0 || m.cols == 0 {
                continue;
            }
            let fm = m.map(|p| Form::from_holomorphic(ncharts, ndims, p));
            cochain.set_block(nerve, (1, 0, 0), &pair, level as i64, fm);
        }
    }

    // Higher stages: solve (−1)^k a⁰ aᵏ + aᵏ a⁰ = −E_k on each tuple.
    let stage_cap = (max_level + 1).max(2) as usize;
    let mut partial = TwistingCochain {
        family: family.clone(),
        ndims,
        cochain,
    };
    for k in 2..=stage_cap {
        let residual = partial.residual(nerve)?;
        if residual.is_zero() {
            break;
        }
        let defect = residual.cech_part(k);
        if defect.is_zero() {
            continue;
        }
        let sign = if k % 2 == 0 {
            Scalar::from_int(-1)
        } else {
            Scalar::one()
        };
        for t in nerve.tuples(k + 1) {
            let alpha = t[0];
            let gamma = *t.last().unwrap();
            // Solve ascending in source level ℓ: aᵏ maps ℓ → ℓ + k − 1.
            let mut prev: Option<PolyMatrix> = None;
            for level in 0..=max_level {
                let tgt_level = level + k as i64 - 1;
                if tgt_level > max_level {
                    break;
                }
                let rows = family.rank(alpha, tgt_level);
                let cols = family.rank(gamma, level);
                if rows == 0 || cols == 0 {
                    prev = None;
                    continue;
                }
                let mut rhs = Mat::from_fn(
                    family.rank(alpha, tgt_level - 1),
                    cols,
                    |_, _| Poly::zero_in(ndims),
                );
                if let Some(e) = defect.block((k, 0, 2 - k as i64), &t, level) {
                    let e_poly = e.map(|f| {
                        f.to_holomorphic()
                            .expect("twisting residual is holomorphic")
                    });
                    rhs = Mat::from_fn(rhs.rows, rhs.cols, |i, j| {
                        e_poly.at(i, j).scale(&sign)
                    });
                }
                if let Some(p) = &prev {
                    let d_src = differential(&resolutions[gamma], level);
                    let extra = p.matmul(&d_src);
                    rhs = Mat::from_fn(rhs.rows, rhs.cols, |i, j| {
                        rhs.at(i, j).clone() + extra.at(i, j).scale(&sign)
                    });
                }
                let d_tgt = differential(&resolutions[alpha], tgt_level);
                let x = if rhs.rows == 0 {
                    Mat::from_fn(rows, cols, |_, _| Poly::zero_in(ndims))
                } else {
                    match input.frames.lift_on_tuple(&t, &d_tgt, &rhs)? {
                        Some(x) => x,
                        None => return Err(TwistError::LiftFailure(t.clone())),
                    }
                };
                let fm = x.map(|p| Form::from_holomorphic(ncharts, ndims, p));
                partial
                    .cochain
                    .set_block(nerve, (k, 0, 1 - k as i64), &t, level, fm);
                prev = Some(x);
            }
        }
    }

    let report = partial.verify(nerve)?;
    if !report.is_twisting() {
        // Some stage failed to close the residual; report the smallest bad tuple.
        let bad = report
            .residual
            .iter()
            .next()
            .map(|(_, t, _, _)| t.clone())
            .unwrap_or_default();
        return Err(TwistError::LiftFailure(bad));
    }
    Ok(partial)
}

fn differential(res: &FreeResolution, src_level: i64) -> PolyMatrix {
    let k = src_level as usize;
    if k == 0 || k > res.differentials.len() {
        let rows = res.ranks.get(k.wrapping_sub(1)).copied().unwrap_or(0);
        let cols = res.ranks.get(k).copied().unwrap_or(0);
        return Mat::from_fn(rows, cols, |_, _| Poly::zero_in(res.nvars));
    }
    res.differentials[k - 1].clone()
}

/// A twisting cochain from a global resolution: restrictions as chart
/// complexes, a¹ = id, higher components zero.
pub fn from_global_resolution(
    res: &FreeResolution,
    nerve: &Nerve,
    frames: &ChartFrames,
) -> Result<TwistingCochain, TwistError> {
    let ncharts = nerve.ncharts;
    let ndims = res.nvars;
    // Every differential must be expressible in every chart frame.
    for alpha in 0..ncharts {
        for d in &res.differentials {
            if d
                .entries()
                .any(|(_, _, p)| frames.to_chart(alpha, p).is_laurent() && !p.is_laurent())
            {
                return Err(TwistError::FrameViolation(alpha));
            }
        }
    }
    let family = BundleFamily::new(vec![res.ranks.clone(); ncharts]);
    let mut cochain = Cochain::zero(family.clone(), family.clone(), ndims);
    for alpha in 0..ncharts {
        for (k, d) in res.differentials.iter().enumerate() {
            let m = d.map(|p| Form::from_holomorphic(ncharts, ndims, p));
            cochain.set_block(nerve, (0, 0, 1), &[alpha], (k + 1) as i64, m);
        }
    }
    for pair in nerve.tuples(2) {
        for level in 0..=family.max_level() {
            let n = family.rank(pair[0], level);
            if n == 0 {
                continue;
            }
            let m = Mat::identity_with(n, Form::one(ncharts, ndims));
            cochain.set_block(nerve, (1, 0, 0), &pair, level, m);
        }
    }
    Ok(TwistingCochain {
        family,
        ndims,
        cochain,
    })
}

/// The trivial twisting cochain of a plain bundle family (b = b¹ = id).
pub fn trivial_twist(family: &BundleFamily, nerve: &Nerve, ndims: usize) -> TwistingCochain {
    TwistingCochain {
        family: family.clone(),
        ndims,
        cochain: Cochain::unit_one_cochain(family, nerve, ndims),
    }
}

/// Chain homotopy between two chain maps f, g: (src, d_src) → (tgt, d_tgt)
/// over the ring of `tuple`: returns h with f − g = d h + h d, or `None`
/// when the maps are not homotopic over this tuple.
pub fn homotopy_between(
    f: &[PolyMatrix],
    g: &[PolyMatrix],
    src: &FreeResolution,
    tgt: &FreeResolution,
    frames: &ChartFrames,
    tuple: &[ChartId],
) -> Result<Option<Vec<PolyMatrix>>, TwistError> {
    let levels = f.len();
    assert_eq!(g.len(), levels);
    let mut hs: Vec<PolyMatrix> = Vec::new();
    let nvars = src.nvars;
    for level in 0..levels {
        let diff = Mat::from_fn(f[level].rows, f[level].cols, |i, j| {
            f[level].at(i, j).clone() - g[level].at(i, j).clone()
        });
        // d_{ℓ+1} h_ℓ = (f−g)_ℓ − h_{ℓ−1} d_ℓ
        let mut rhs = diff;
        if level > 0 {
            let d_src = differential(src, level as i64);
            let corr = hs[level - 1].matmul(&d_src);
            rhs = Mat::from_fn(rhs.rows, rhs.cols, |i, j| {
                rhs.at(i, j).clone() - corr.at(i, j).clone()
            });
        }
        let d_tgt = differential(tgt, level as i64 + 1);
        if d_tgt.cols == 0 {
            if rhs.is_zero() {
                hs.push(Mat::from_fn(0, rhs.cols, |_, _| Poly::zero_in(nvars)));
                continue;
            }
            return Ok(None);
        }
        match frames.lift_on_tuple(tuple, &d_tgt, &rhs)? {
            Some(h) => hs.push(h),
            None => return Ok(None),
        }
    }
    Ok(Some(hs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, vars: &[&str]) -> Poly {
        Poly::parse(s, vars).unwrap()
    }

    fn pm(rows: &[&[&str]], vars: &[&str]) -> PolyMatrix {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| p(s, vars)).collect())
                .collect(),
        )
    }

    #[test]
    fn single_chart_principal_ideal() {
        let nerve = Nerve::complete(1);
        let input = LocalPresentationSet {
            nvars: 1,
            frames: ChartFrames::trivial(1, 1),
            presentations: vec![pm(&[&["z^2"]], &["z"])],
            identifications: BTreeMap::new(),
        };
        let tw = build_twisted_resolution(&input, &nerve, 1).unwrap();
        assert!(tw.verify(&nerve).unwrap().is_twisting());
        assert_eq!(tw.family.ranks[0], vec![1, 1]);
        // a⁰ is (z²).
        let blk = tw.cochain.block((0, 0, 1), &[0], 1).unwrap();
        assert_eq!(
            blk.at(0, 0).to_holomorphic().unwrap(),
            p("z^2", &["z"])
        );
    }

    #[test]
    fn two_charts_scaled_presentations() {
        // Two charts both seeing the origin, resolutions (z²) and (2z²).
        let nerve = Nerve::complete(2);
        let vars = ["z"];
        let mut ids = BTreeMap::new();
        // coker(z²) → coker(2z²): generator ↦ generator works both ways.
        ids.insert((0usize, 1usize), pm(&[&["1"]], &vars));
        ids.insert((1usize, 0usize), pm(&[&["1"]], &vars));
        let input = LocalPresentationSet {
            nvars: 1,
            frames: ChartFrames::trivial(2, 1),
            presentations: vec![pm(&[&["z^2"]], &vars), pm(&[&["2*z^2"]], &vars)],
            identifications: ids,
        };
        let tw = build_twisted_resolution(&input, &nerve, 1).unwrap();
        let report = tw.verify(&nerve).unwrap();
        assert!(report.is_twisting(), "{:?}", report.residual);
        // a¹₀₁ on F⁻¹ relates z² and 2z²: must be the constant 2.
        let blk = tw.cochain.block((1, 0, 0), &[0, 1], 1).unwrap();
        assert_eq!(
            blk.at(0, 0).to_holomorphic().unwrap(),
            p("2", &vars)
        );
        let blk_rev = tw.cochain.block((1, 0, 0), &[1, 0], 1).unwrap();
        assert_eq!(
            blk_rev.at(0, 0).to_holomorphic().unwrap(),
            p("1/2", &vars)
        );
    }

    #[test]
    fn p1_skyscraper() {
        // 𝒪_p at p = 1 on P¹: chart-0 generator (z−1), chart-1 generator
        // (w−1) = (1−z)/z in global coordinates.
        let nerve = Nerve::complete(2);
        let vars = ["z"];
        let mut ids = BTreeMap::new();
        ids.insert((0usize, 1usize), pm(&[&["1"]], &vars));
        ids.insert((1usize, 0usize), pm(&[&["1"]], &vars));
        let input = LocalPresentationSet {
            nvars: 1,
            frames: ChartFrames::p1(),
            presentations: vec![pm(&[&["z - 1"]], &vars), pm(&[&["z^-1 - 1"]], &vars)],
            identifications: ids,
        };
        let tw = build_twisted_resolution(&input, &nerve, 1).unwrap();
        let report = tw.verify(&nerve).unwrap();
        assert!(report.is_twisting(), "{:?}", report.residual);
        // a¹₀₁ on F⁻¹ is the Laurent unit relating (z−1) and (1/z−1).
        let blk = tw.cochain.block((1, 0, 0), &[0, 1], 1).unwrap();
        let u = blk.at(0, 0).to_holomorphic().unwrap();
        assert_eq!(u, p("-z^-1", &vars));
    }

    #[test]
    fn global_resolution_import() {
        let nerve = Nerve::complete(2);
        let vars = ["z1", "z2"];
        let d = pm(&[&["z1", "z2"]], &vars);
        let res = free_resolution(&d, 2, 2).unwrap();
        let tw = from_global_resolution(&res, &nerve, &ChartFrames::trivial(2, 2)).unwrap();
        let report = tw.verify(&nerve).unwrap();
        assert!(report.is_twisting());
        assert!(tw.cochain.cech_part(2).is_zero());
    }

    #[test]
    fn fault_injection_detected() {
        let nerve = Nerve::complete(2);
        let vars = ["z"];
        let mut ids = BTreeMap::new();
        ids.insert((0usize, 1usize), pm(&[&["1"]], &vars));
        ids.insert((1usize, 0usize), pm(&[&["1"]], &vars));
        let input = LocalPresentationSet {
            nvars: 1,
            frames: ChartFrames::trivial(2, 1),
            presentations: vec![pm(&[&["z^2"]], &vars), pm(&[&["2*z^2"]], &vars)],
            identifications: ids,
        };
        let mut tw = build_twisted_resolution(&input, &nerve, 1).unwrap();
        // Perturb a¹₀₁ on F⁰ by +z.
        let blk = tw.cochain.block((1, 0, 0), &[0, 1], 0).unwrap().clone();
        let perturbed = Mat::from_fn(1, 1, |_, _| {
            blk.at(0, 0)
                .add(&Form::from_holomorphic(2, 1, &p("z", &vars)))
        });
        tw.cochain.set_block(&nerve, (1, 0, 0), &[0, 1], 0, perturbed);
        let report = tw.verify(&nerve).unwrap();
        assert!(!report.is_twisting());
        // The chain-map identity (Čech degree 1) must break.
        assert!(!report.residual.cech_part(1).is_zero());
    }

    #[test]
    fn homotopy_between_equal_maps_is_zero_admissible() {
        let vars = ["z"];
        let d = pm(&[&["z^2"]], &vars);
        let res = free_resolution(&d, 1, 1).unwrap();
        let f = vec![
            pm(&[&["1"]], &vars),
            pm(&[&["1"]], &vars),
        ];
        let frames = ChartFrames::trivial(1, 1);
        let h = homotopy_between(&f, &f, &res, &res, &frames, &[0])
            .unwrap()
            .unwrap();
        assert!(h.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn non_homotopic_maps_rejected() {
        // Maps on coker(z²) given by 1 and 0 are not homotopic.
        let vars = ["z"];
        let d = pm(&[&["z^2"]], &vars);
        let res = free_resolution(&d, 1, 1).unwrap();
        let one = vec![pm(&[&["1"]], &vars), pm(&[&["1"]], &vars)];
        let zero = vec![pm(&[&["0"]], &vars), pm(&[&["0"]], &vars)];
        let frames = ChartFrames::trivial(1, 1);
        let h = homotopy_between(&one, &zero, &res, &res, &frames, &[0]).unwrap();
        assert!(h.is_none());
    }
}
