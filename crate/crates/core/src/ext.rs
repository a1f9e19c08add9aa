//! Total cohomology of twisted complexes in finite exact section models.
//!
//! Global sections are modeled exactly: polynomials with a total-degree cap
//! on ℂⁿ charts, Laurent windows with per-chart exponent bounds on P¹. The
//! differential is evaluated exactly on each basis vector; windows grow
//! along the complex so images are never truncated, and cohomology is
//! certified by re-running one widening step.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cochain::{Cochain, CochainError, Tuple};
use crate::linalg;
use crate::matrix::Mat;
use crate::nerve::Nerve;
use crate::poly::{Mono, Poly};
use crate::scalar::Scalar;
use crate::symbol::Form;
use crate::twist::{ChartFrames, TwistingCochain};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtError {
    /// A produced monomial escaped the target window; rerun with the
    /// suggested cap.
    WidenWindow { suggested_cap: i64 },
    /// The model only handles holomorphic data.
    NonHolomorphic,
    Cochain(CochainError),
}

impl From<CochainError> for ExtError {
    fn from(e: CochainError) -> Self {
        ExtError::Cochain(e)
    }
}

impl core::fmt::Display for ExtError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ExtError::WidenWindow { suggested_cap } => {
                write!(f, "section window too small; retry with cap {}", suggested_cap)
            }
            ExtError::NonHolomorphic => write!(f, "model requires holomorphic cochains"),
            ExtError::Cochain(e) => write!(f, "{}", e),
        }
    }
}

/// Exponent offsets of the summand frames: `offsets[chart][level][summand]`.
/// On an unflipped chart the summand's sections satisfy e ≥ offset; on a
/// flipped chart e ≤ offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOffsets(pub Vec<Vec<Vec<i64>>>);

impl GradedOffsets {
    /// All-zero offsets matching a family's rank table.
    pub fn zero(family: &crate::nerve::BundleFamily) -> Self {
        GradedOffsets(
            family
                .ranks
                .iter()
                .map(|levels| levels.iter().map(|&r| vec![0; r]).collect())
                .collect(),
        )
    }

    fn offset(&self, chart: usize, level: i64, summand: usize) -> i64 {
        self.0[chart][level as usize][summand]
    }
}

/// One side (source or target) of the Hom-complex: a twisting cochain with
/// section-frame offsets.
pub struct Side<'a> {
    pub twist: &'a TwistingCochain,
    pub offsets: &'a GradedOffsets,
}

/// Window policy: base cap and growth per total degree (the growth must
/// dominate the largest exponent shift in the twisting data).
#[derive(Clone, Copy, Debug)]
pub struct WindowSpec {
    pub cap: i64,
    pub growth: i64,
}

/// The finite model of ⊕_{p+r=ℓ} C^p(𝔘, Hom^r(F,G)).
pub struct TotalComplexModel<'a> {
    pub nerve: &'a Nerve,
    pub source: Side<'a>,
    pub target: Side<'a>,
    pub frames: ChartFrames,
    pub window: WindowSpec,
    pub ndims: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisItem {
    pub p: usize,
    pub tuple: Tuple,
    pub level: i64,
    pub row: usize,
    pub col: usize,
    pub mono: Mono,
}

pub struct SpotBasis {
    pub items: Vec<BasisItem>,
    pub index: BTreeMap<BasisItem, usize>,
}

impl SpotBasis {
    pub fn dim(&self) -> usize {
        self.items.len()
    }
}

/// Largest absolute exponent in the twisting data, the safe window growth.
pub fn suggested_growth(t: &TwistingCochain) -> i64 {
    let mut g = 1;
    for (_, _, _, m) in t.cochain.iter() {
        for (_, _, f) in m.entries() {
            for (_, c) in &f.terms {
                for (e, _) in &c.terms {
                    for &x in e.iter() {
                        g = g.max(x.abs());
                    }
                }
            }
        }
    }
    g
}

/// Interning dictionary for expansion coordinates; grows on demand so no
/// produced monomial is ever truncated.
pub struct Dict {
    pub items: Vec<BasisItem>,
    index: BTreeMap<BasisItem, usize>,
}

impl Dict {
    pub fn new() -> Self {
        Dict {
            items: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn from_basis(basis: &SpotBasis) -> Self {
        let mut d = Dict::new();
        for item in &basis.items {
            d.intern(item.clone());
        }
        d
    }

    pub fn intern(&mut self, item: BasisItem) -> usize {
        if let Some(&i) = self.index.get(&item) {
            return i;
        }
        let i = self.items.len();
        self.index.insert(item.clone(), i);
        self.items.push(item);
        i
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }
}

impl<'a> TotalComplexModel<'a> {
    fn cap_at(&self, _ell: i64) -> i64 {
        self.window.cap
    }

    /// Per-tuple exponent window for a Hom entry from source summand
    /// (f_level, f_sum) to target summand (g_level, g_sum). One-variable
    /// Laurent mode only; polynomial mode enumerates by total degree.
    fn entry_window(
        &self,
        ell: i64,
        tuple: &[usize],
        f_level: i64,
        f_sum: usize,
        g_level: i64,
        g_sum: usize,
    ) -> (i64, i64) {
        let cap = self.cap_at(ell);
        let mut lo = -cap;
        let mut hi = cap;
        // A chart's one-sided bound constrains sections only when every
        // chart of the tuple lies on the same side: the overlap of the two
        // P¹ charts is ℂ*, where both frame directions are unbounded.
        let flipped = |c: usize| self.frames.flips[c].iter().any(|&f| f);
        let has_flip = tuple.iter().any(|&c| flipped(c));
        let has_plain = tuple.iter().any(|&c| !flipped(c));
        for &chart in tuple {
            let d = self.target.offsets.offset(chart, g_level, g_sum)
                - self.source.offsets.offset(chart, f_level, f_sum);
            if flipped(chart) && !has_plain {
                hi = hi.min(d);
            } else if !flipped(chart) && !has_flip {
                lo = lo.max(d);
            }
        }
        (lo, hi)
    }

    pub fn spot_basis(&self, ell: i64) -> SpotBasis {
        let mut items = Vec::new();
        let lf = self.source.twist.family.max_level();
        let lg = self.target.twist.family.max_level();
        let p_min = (ell - lf).max(0);
        let p_max = ell + lg;
        for p in p_min..=p_max {
            let r = ell - p;
            for tuple in self.nerve.tuples(p as usize + 1) {
                let lead = tuple[0];
                let tail = *tuple.last().unwrap();
                for level in 0..=lf {
                    let g_level = level - r;
                    let rows = self.target.twist.family.rank(lead, g_level);
                    let cols = self.source.twist.family.rank(tail, level);
                    if rows == 0 || cols == 0 {
                        continue;
                    }
                    for row in 0..rows {
                        for col in 0..cols {
                            if self.ndims == 1 {
                                let (lo, hi) =
                                    self.entry_window(ell, &tuple, level, col, g_level, row);
                                for e in lo..=hi {
                                    items.push(BasisItem {
                                        p: p as usize,
                                        tuple: tuple.clone(),
                                        level,
                                        row,
                                        col,
                                        mono: vec![e],
                                    });
                                }
                            } else {
                                let cap = self.cap_at(ell);
                                for mono in monomials_up_to(self.ndims, cap) {
                                    items.push(BasisItem {
                                        p: p as usize,
                                        tuple: tuple.clone(),
                                        level,
                                        row,
                                        col,
                                        mono,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        let index = items
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        SpotBasis { items, index }
    }

    /// The cochain realizing one basis vector of the degree-ℓ spot.
    pub fn item_cochain_at(&self, item: &BasisItem, ell: i64) -> Cochain {
        let ncharts = self.nerve.ncharts;
        let r = ell - item.p as i64;
        let mut c = Cochain::zero(
            self.source.twist.family.clone(),
            self.target.twist.family.clone(),
            self.ndims,
        );
        let rows = self.target.twist.family.rank(item.tuple[0], item.level - r);
        let cols = self
            .source
            .twist
            .family
            .rank(*item.tuple.last().unwrap(), item.level);
        let m = Mat::from_fn(rows, cols, |i, j| {
            if i == item.row && j == item.col {
                Form::from_holomorphic(
                    ncharts,
                    self.ndims,
                    &Poly::term(self.ndims, item.mono.clone(), Scalar::one()),
                )
            } else {
                Form::zero(ncharts, self.ndims)
            }
        });
        c.set_block(self.nerve, (item.p, 0, r), &item.tuple, item.level, m);
        c
    }

    /// Expands a holomorphic cochain of total degree `ell` as sparse
    /// coordinates over the interning dictionary.
    pub fn expand(
        &self,
        c: &Cochain,
        ell: i64,
        dict: &mut Dict,
    ) -> Result<Vec<(usize, Scalar)>, ExtError> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for ((p, q, r), tuple, level, m) in c.iter() {
            if q != 0 {
                return Err(ExtError::NonHolomorphic);
            }
            debug_assert_eq!(p as i64 + r, ell);
            for (row, col, f) in m.entries() {
                let poly = f.to_holomorphic().ok_or(ExtError::NonHolomorphic)?;
                for (e, coeff) in &poly.terms {
                    let item = BasisItem {
                        p,
                        tuple: tuple.clone(),
                        level,
                        row,
                        col,
                        mono: e.clone(),
                    };
                    let i = dict.intern(item);
                    *out.entry(i).or_insert_with(Scalar::zero) += coeff.clone();
                }
            }
        }
        Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    fn d_columns(
        &self,
        basis: &SpotBasis,
        ell: i64,
        dict: &mut Dict,
    ) -> Result<Vec<Vec<(usize, Scalar)>>, ExtError> {
        let mut cols = Vec::with_capacity(basis.dim());
        for item in &basis.items {
            let c = self.item_cochain_at(item, ell);
            let dc = c.d_op(
                &self.target.twist.cochain,
                &self.source.twist.cochain,
                self.nerve,
            )?;
            cols.push(self.expand(&dc, ell + 1, dict)?);
        }
        Ok(cols)
    }

    /// Cohomology at degree k. The kernel is taken over the base window;
    /// the image comes from the previous spot with a wider window (one
    /// growth step), so coboundary witnesses near the cap are not missed.
    /// Nothing is truncated: all expansions intern new coordinates.
    pub fn cohomology(&self, k: i64) -> Result<ExtOutcome, ExtError> {
        let basis_k = self.spot_basis(k);
        let wide = TotalComplexModel {
            nerve: self.nerve,
            source: Side {
                twist: self.source.twist,
                offsets: self.source.offsets,
            },
            target: Side {
                twist: self.target.twist,
                offsets: self.target.offsets,
            },
            frames: self.frames.clone(),
            window: WindowSpec {
                cap: self.window.cap + self.window.growth.max(1),
                growth: self.window.growth,
            },
            ndims: self.ndims,
        };
        let basis_prev = wide.spot_basis(k - 1);

        // Kernel of D_k over the base window.
        let mut rows_k = Dict::new();
        let cols_k = self.d_columns(&basis_k, k, &mut rows_k)?;
        let d_k = Mat::from_fn(rows_k.len(), basis_k.dim(), |i, j| {
            cols_k[j]
                .iter()
                .find(|(r, _)| *r == i)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Scalar::zero)
        });
        let kernel = linalg::kernel_basis(&d_k);

        // Image of D_{k−1} from the widened previous window, expressed in a
        // common value-space dictionary with the kernel vectors.
        let mut dict = Dict::from_basis(&basis_k);
        let cols_prev = self.d_columns(&basis_prev, k - 1, &mut dict)?;
        let n = dict.len();
        let image = Mat::from_fn(n, basis_prev.dim(), |i, j| {
            cols_prev[j]
                .iter()
                .find(|(r, _)| *r == i)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Scalar::zero)
        });
        // Embed kernel vectors (coordinates over basis_k) into the dictionary.
        let kernel_embedded: Vec<Vec<Scalar>> = kernel
            .iter()
            .map(|v| {
                let mut w = vec![Scalar::zero(); n];
                w[..basis_k.dim()].clone_from_slice(v);
                w
            })
            .collect();

        // dim H = rank[ker] − dim(im ∩ span ker) = rank[im|ker] − rank[im].
        let ker_mat = Mat::from_fn(n, kernel_embedded.len(), |i, j| {
            kernel_embedded[j][i].clone()
        });
        let both = image.hcat(&ker_mat);
        let mut both_r = both;
        let pivots = linalg::rref(&mut both_r);
        let img_rank = linalg::rank(&image);
        let dim = pivots.iter().filter(|&&p| p >= image.cols).count();
        debug_assert_eq!(dim, pivots.len() - img_rank);

        // Representatives: kernel columns that added pivots beyond the image.
        let mut reps_vec: Vec<Vec<Scalar>> = Vec::new();
        for &p in &pivots {
            if p >= image.cols {
                reps_vec.push(kernel[p - image.cols].clone());
            }
        }
        let reps: Vec<Cochain> = reps_vec
            .iter()
            .map(|v| self.vector_cochain(v, k, &basis_k))
            .collect();
        Ok(ExtOutcome {
            dim,
            representatives: reps,
            rep_vectors: reps_vec,
            image,
            dict,
            basis: basis_k,
            spot: k,
        })
    }

    pub fn vector_cochain(&self, v: &[Scalar], ell: i64, basis: &SpotBasis) -> Cochain {
        let mut acc = Cochain::zero(
            self.source.twist.family.clone(),
            self.target.twist.family.clone(),
            self.ndims,
        );
        for (item, coeff) in basis.items.iter().zip(v) {
            if coeff.is_zero() {
                continue;
            }
            let c = self.item_cochain_at(item, ell).scale(coeff);
            acc = acc.add(&c, self.nerve);
        }
        acc
    }
}

pub struct ExtOutcome {
    pub dim: usize,
    pub representatives: Vec<Cochain>,
    pub rep_vectors: Vec<Vec<Scalar>>,
    /// Image of the previous differential in dictionary coordinates.
    pub image: Mat<Scalar>,
    pub dict: Dict,
    pub basis: SpotBasis,
    pub spot: i64,
}

impl ExtOutcome {
    /// True if `c` and `d` define the same class. Both must be cocycles of
    /// the model's degree.
    pub fn same_class(
        &mut self,
        model: &TotalComplexModel<'_>,
        c: &Cochain,
        d: &Cochain,
    ) -> Result<bool, ExtError> {
        let u = model.expand(c, self.spot, &mut self.dict)?;
        let v = model.expand(d, self.spot, &mut self.dict)?;
        let n = self.dict.len();
        let dense = |s: &[(usize, Scalar)]| {
            let mut w = vec![Scalar::zero(); n];
            for (i, c) in s {
                w[*i] = c.clone();
            }
            w
        };
        // New coordinates beyond the stored image get zero rows.
        let img = Mat::from_fn(n, self.image.cols, |i, j| {
            if i < self.image.rows {
                self.image.at(i, j).clone()
            } else {
                Scalar::zero()
            }
        });
        Ok(linalg::same_class(&img, &dense(&u), &dense(&v)))
    }
}

/// Runs the model at the given cap and once more at cap+growth; reports the
/// outcome plus whether the dimension is window-stable.
pub fn ext_with_stability(
    model: &TotalComplexModel<'_>,
    k: i64,
) -> Result<(ExtOutcome, bool), ExtError> {
    let out = model.cohomology(k)?;
    let widened = TotalComplexModel {
        nerve: model.nerve,
        source: Side {
            twist: model.source.twist,
            offsets: model.source.offsets,
        },
        target: Side {
            twist: model.target.twist,
            offsets: model.target.offsets,
        },
        frames: model.frames.clone(),
        window: WindowSpec {
            cap: model.window.cap + model.window.growth.max(1),
            growth: model.window.growth,
        },
        ndims: model.ndims,
    };
    let out2 = widened.cohomology(k)?;
    let stable = out.dim == out2.dim;
    Ok((out, stable))
}

/// Cup product on cochain representatives: the composition-valid product
/// pairing Hom(𝒪,F) with Hom(F,ω) classes into Hom(𝒪,ω).
pub fn cup(x: &Cochain, y: &Cochain, nerve: &Nerve) -> Result<Cochain, CochainError> {
    y.mul(x, nerve)
}

/// Monomials in n variables with 0 ≤ total degree ≤ cap, ordered.
pub fn monomials_up_to(n: usize, cap: i64) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        if cur.iter().sum::<i64>() <= cap {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] <= cap && cur[..=i].iter().sum::<i64>() <= cap {
                break;
            }
            cur[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nerve::BundleFamily;
    use crate::twist::trivial_twist;

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_up_to(1, 3).len(), 4);
        assert_eq!(monomials_up_to(2, 2).len(), 6);
    }

    /// H⁰ and H¹ of 𝒪(d) on P¹ through the twisted-complex model with the
    /// trivial twist, against the classical dimensions.
    #[test]
    fn p1_line_bundle_cohomology() {
        let nerve = Nerve::complete(2);
        for (d, h0, h1) in [(0i64, 1usize, 0usize), (-1, 0, 0), (-2, 0, 1), (1, 2, 0), (-3, 0, 2)] {
            let o_fam = BundleFamily::line(2, 1);
            let f = trivial_twist(&o_fam, &nerve, 1);
            let g = trivial_twist(&o_fam, &nerve, 1);
            let f_off = GradedOffsets::zero(&o_fam);
            let g_off = GradedOffsets(vec![vec![vec![0]], vec![vec![d]]]);
            let model = TotalComplexModel {
                nerve: &nerve,
                source: Side { twist: &f, offsets: &f_off },
                target: Side { twist: &g, offsets: &g_off },
                frames: ChartFrames::p1(),
                window: WindowSpec { cap: 6, growth: 1 },
                ndims: 1,
            };
            let (out0, stable0) = ext_with_stability(&model, 0).unwrap();
            let (out1, stable1) = ext_with_stability(&model, 1).unwrap();
            assert!(stable0 && stable1, "window instability at d={}", d);
            assert_eq!(out0.dim, h0, "H0 of O({})", d);
            assert_eq!(out1.dim, h1, "H1 of O({})", d);
            for rep in &out0.representatives {
                assert!(rep
                    .d_op(&g.cochain, &f.cochain, &nerve)
                    .unwrap()
                    .is_zero());
            }
        }
    }
}
