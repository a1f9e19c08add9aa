//! The tri-graded cochain algebra on a cover: tuple-indexed blocks of
//! symbol-valued matrices carrying (Čech, current, Hom) degrees, with the
//! signed product and the differentials δ, ∂̄, D, ∇.
//!
//! Conventions. A component of degree (p, q, r) assigns to each admissible
//! (p+1)-tuple (α₀,…,α_p) and each source level j a matrix representing a
//! morphism F_{α_p}^{−j} → G_{α₀}^{−j+r} with entries of odd degree q.
//! Degrees of bundles are nonpositive; we index by levels j ≥ 0.
//!
//! Signs. The block product carries (−1)^{r·q′} and the tuple product
//! (−1)^{(q+r)p′}; δ omits interior indices with sign (−1)^k; ∂̄ acts with
//! (−1)^p; D f = δf + b f − (−1)^{deg f} f a; ∇ = D − ∂̄.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::matrix::Mat;
use crate::nerve::{BundleFamily, ChartId, Nerve};
use crate::scalar::Scalar;
use crate::symbol::Form;

pub type Tuple = Vec<ChartId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CochainError {
    /// Source family of the left factor differs from target family of the
    /// right factor.
    FamilyMismatch,
    /// Matrix block shape disagrees with the declared rank tables.
    ShapeMismatch,
}

impl core::fmt::Display for CochainError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CochainError::FamilyMismatch => write!(f, "bundle families do not compose"),
            CochainError::ShapeMismatch => write!(f, "block shape disagrees with rank table"),
        }
    }
}

/// Per-source-level matrices of one homogeneous component at one tuple.
pub type Block = BTreeMap<i64, Mat<Form>>;

/// An element of the cochain algebra, as a sum of homogeneous components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain {
    pub source: BundleFamily,
    pub target: BundleFamily,
    pub ndims: usize,
    comps: BTreeMap<(usize, u32, i64), BTreeMap<Tuple, Block>>,
}

impl Cochain {
    pub fn zero(source: BundleFamily, target: BundleFamily, ndims: usize) -> Self {
        Cochain {
            source,
            target,
            ndims,
            comps: BTreeMap::new(),
        }
    }

    pub fn ncharts(&self) -> usize {
        self.source.ncharts()
    }

    /// The identity 0-cochain of a family.
    pub fn identity(family: &BundleFamily, nerve: &Nerve, ndims: usize) -> Self {
        let mut c = Cochain::zero(family.clone(), family.clone(), ndims);
        let ncharts = family.ncharts();
        for alpha in 0..ncharts {
            for level in 0..=family.max_level() {
                let n = family.rank(alpha, level);
                if n == 0 {
                    continue;
                }
                let m = Mat::identity_with(n, Form::one(ncharts, ndims));
                c.set_block(nerve, (0, 0, 0), &[alpha], level, m);
            }
        }
        c
    }

    /// The unit 1-cochain `b` with b_{αβ} = id on every admissible pair —
    /// the twisting cochain of a plain (untwisted) bundle family.
    pub fn unit_one_cochain(family: &BundleFamily, nerve: &Nerve, ndims: usize) -> Self {
        let mut c = Cochain::zero(family.clone(), family.clone(), ndims);
        let ncharts = family.ncharts();
        for t in nerve.tuples(2) {
            for level in 0..=family.max_level() {
                let n = family.rank(t[1], level);
                assert_eq!(
                    n,
                    family.rank(t[0], level),
                    "identity gluing requires chart-uniform ranks"
                );
                if n == 0 {
                    continue;
                }
                let m = Mat::identity_with(n, Form::one(ncharts, ndims));
                c.set_block(nerve, (1, 0, 0), &t, level, m);
            }
        }
        c
    }

    /// Inserts (accumulates) a block; values are normalized in the tuple
    /// context and zero blocks are pruned.
    pub fn set_block(
        &mut self,
        nerve: &Nerve,
        (p, q, r): (usize, u32, i64),
        tuple: &[ChartId],
        level: i64,
        mat: Mat<Form>,
    ) {
        assert_eq!(tuple.len(), p + 1, "tuple length must be p+1");
        assert!(nerve.tuple_admissible(tuple), "tuple not in the nerve");
        let rows = self.target.rank(tuple[0], level - r);
        let cols = self.source.rank(*tuple.last().unwrap(), level);
        assert!(
            mat.rows == rows && mat.cols == cols,
            "block shape {}x{} disagrees with rank table {}x{}",
            mat.rows,
            mat.cols,
            rows,
            cols
        );
        if rows == 0 || cols == 0 {
            return;
        }
        let ctx = Nerve::tuple_mask(tuple);
        let mat = mat.map(|f| {
            debug_assert!(f.is_zero() || f.odd_degree() == Some(q), "odd degree must equal q");
            f.normalize(nerve, ctx)
        });
        let entry = self
            .comps
            .entry((p, q, r))
            .or_default()
            .entry(tuple.to_vec())
            .or_default();
        match entry.get_mut(&level) {
            Some(existing) => {
                let sum = Mat::from_fn(rows, cols, |i, j| {
                    existing.at(i, j).add(mat.at(i, j)).normalize(nerve, ctx)
                });
                *existing = sum;
            }
            None => {
                entry.insert(level, mat);
            }
        }
        self.prune();
    }

    fn prune(&mut self) {
        for tuples in self.comps.values_mut() {
            for block in tuples.values_mut() {
                block.retain(|_, m| !m.is_zero());
            }
            tuples.retain(|_, b| !b.is_empty());
        }
        self.comps.retain(|_, t| !t.is_empty());
    }

    pub fn block(
        &self,
        (p, q, r): (usize, u32, i64),
        tuple: &[ChartId],
        level: i64,
    ) -> Option<&Mat<Form>> {
        self.comps
            .get(&(p, q, r))
            .and_then(|t| t.get(tuple))
            .and_then(|b| b.get(&level))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, u32, i64)> + '_ {
        self.comps.keys().copied()
    }

    pub fn iter(
        &self,
    ) -> impl Iterator<Item = ((usize, u32, i64), &Tuple, i64, &Mat<Form>)> + '_ {
        self.comps.iter().flat_map(|(k, tuples)| {
            tuples.iter().flat_map(move |(t, block)| {
                block.iter().map(move |(lvl, m)| (*k, t, *lvl, m))
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &Cochain, nerve: &Nerve) -> Cochain {
        let mut out = self.clone();
        for (k, t, lvl, m) in other.iter() {
            out.set_block(nerve, k, t, lvl, m.clone());
        }
        out
    }

    pub fn neg(&self) -> Cochain {
        self.map_blocks(|m| -m)
    }

    pub fn sub(&self, other: &Cochain, nerve: &Nerve) -> Cochain {
        self.add(&other.neg(), nerve)
    }

    pub fn scale(&self, s: &Scalar) -> Cochain {
        if s.is_zero() {
            return Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
        }
        self.map_blocks(|m| m.map(|f| f.scale(s)))
    }

    fn map_blocks(&self, mut f: impl FnMut(&Mat<Form>) -> Mat<Form>) -> Cochain {
        let mut out = self.clone();
        for tuples in out.comps.values_mut() {
            for block in tuples.values_mut() {
                for m in block.values_mut() {
                    *m = f(m);
                }
            }
        }
        out.prune();
        out
    }

    /// The signed product of the algebra. `self` must be a Hom(F,G)-cochain
    /// and `other` a Hom(E,F)-cochain.
    pub fn mul(&self, other: &Cochain, nerve: &Nerve) -> Result<Cochain, CochainError> {
        if self.source != other.target {
            return Err(CochainError::FamilyMismatch);
        }
        let mut out = Cochain::zero(other.source.clone(), self.target.clone(), self.ndims);
        for ((p1, q1, r1), tuples1) in &self.comps {
            for ((p2, q2, r2), tuples2) in &other.comps {
                let sign_exp = (*q1 as i64 + *r1) * (*p2 as i64) + *r1 * (*q2 as i64);
                let negate = sign_exp.rem_euclid(2) == 1;
                for (t1, block1) in tuples1 {
                    for (t2, block2) in tuples2 {
                        if t1.last() != t2.first() {
                            continue;
                        }
                        let mut joined = t1.clone();
                        joined.extend_from_slice(&t2[1..]);
                        if !nerve.tuple_admissible(&joined) {
                            continue;
                        }
                        for (j, m2) in block2 {
                            let Some(m1) = block1.get(&(j - r2)) else {
                                continue;
                            };
                            let mut prod = m1.matmul(m2);
                            if negate {
                                prod = -&prod;
                            }
                            out.set_block(
                                nerve,
                                (p1 + p2, q1 + q2, r1 + r2),
                                &joined,
                                *j,
                                prod,
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Čech-type coboundary omitting first and last index:
    /// (δf)_{α₀…α_{p+1}} = Σ_{k=1}^{p} (−1)^k f_{α₀…α̂_k…α_{p+1}}.
    pub fn cech_delta(&self, nerve: &Nerve) -> Cochain {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
        for ((p, q, r), tuples) in &self.comps {
            for (t, block) in tuples {
                // Insert chart c at interior position k of the result tuple.
                for k in 1..=*p {
                    for c in 0..self.ncharts() {
                        let mut big = t.clone();
                        big.insert(k, c);
                        if !nerve.tuple_admissible(&big) {
                            continue;
                        }
                        for (lvl, m) in block {
                            let signed = if k % 2 == 1 { -m } else { m.clone() };
                            out.set_block(nerve, (p + 1, *q, *r), &big, *lvl, signed);
                        }
                    }
                }
            }
        }
        out
    }

    /// (∂̄f)_{α₀…α_p} = (−1)^p ∂̄(f_{α₀…α_p}); current degree +1.
    pub fn dbar(&self, nerve: &Nerve) -> Cochain {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
        for ((p, q, r), tuples) in &self.comps {
            for (t, block) in tuples {
                for (lvl, m) in block {
                    let mut d = m.map(|f| f.dbar());
                    if p % 2 == 1 {
                        d = -&d;
                    }
                    if d.is_zero() {
                        continue;
                    }
                    out.set_block(nerve, (*p, q + 1, *r), t, *lvl, d);
                }
            }
        }
        out
    }

    /// D f = δf + b f − (−1)^{deg f} f a, with `b` the target-side and `a`
    /// the source-side twisting cochain (or unit cochain).
    pub fn d_op(&self, b: &Cochain, a: &Cochain, nerve: &Nerve) -> Result<Cochain, CochainError> {
        let mut out = self.cech_delta(nerve);
        out = out.add(&b.mul(self, nerve)?, nerve);
        // Split by parity of total degree for the right action.
        for ((p, q, r), tuples) in &self.comps {
            let deg = *p as i64 + *q as i64 + *r;
            let mut part = Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
            for (t, block) in tuples {
                for (lvl, m) in block {
                    part.set_block(nerve, (*p, *q, *r), t, *lvl, m.clone());
                }
            }
            let fa = part.mul(a, nerve)?;
            let signed = if deg.rem_euclid(2) == 0 { fa.neg() } else { fa };
            out = out.add(&signed, nerve);
        }
        Ok(out)
    }

    /// ∇f = Df − ∂̄f.
    pub fn nabla(&self, b: &Cochain, a: &Cochain, nerve: &Nerve) -> Result<Cochain, CochainError> {
        Ok(self.d_op(b, a, nerve)?.sub(&self.dbar(nerve), nerve))
    }

    /// Selector f^ℓ_k: the part mapping source level ℓ to target level k.
    pub fn select(&self, src_level: i64, tgt_level: i64) -> Cochain {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
        for ((p, q, r), tuples) in &self.comps {
            if *r != src_level - tgt_level {
                continue;
            }
            for (t, block) in tuples {
                if let Some(m) = block.get(&src_level) {
                    out.comps
                        .entry((*p, *q, *r))
                        .or_default()
                        .entry(t.clone())
                        .or_default()
                        .insert(src_level, m.clone());
                }
            }
        }
        out
    }

    /// Selector f^ℓ_•: everything with source level ℓ.
    pub fn select_source(&self, src_level: i64) -> Cochain {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
        for (k, tuples) in &self.comps {
            for (t, block) in tuples {
                if let Some(m) = block.get(&src_level) {
                    out.comps
                        .entry(*k)
                        .or_default()
                        .entry(t.clone())
                        .or_default()
                        .insert(src_level, m.clone());
                }
            }
        }
        out
    }

    /// Selector f^p: the part of Čech degree p.
    pub fn cech_part(&self, p: usize) -> Cochain {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.ndims);
        for (k, tuples) in &self.comps {
            if k.0 == p {
                out.comps.insert(*k, tuples.clone());
            }
        }
        out
    }

    pub fn max_cech_degree(&self) -> Option<usize> {
        self.comps.keys().map(|k| k.0).max()
    }

    /// Largest entry count, a cheap size diagnostic for reports.
    pub fn nnz(&self) -> usize {
        self.iter().map(|(_, _, _, m)| m.rows * m.cols).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::parse_form;

    fn mat1(f: Form) -> Mat<Form> {
        Mat::from_rows(alloc::vec![alloc::vec![f]])
    }

    fn line_cochain(nerve: &Nerve, items: &[((usize, u32, i64), &[ChartId], &str)]) -> Cochain {
        let fam = BundleFamily::line(nerve.ncharts, 1);
        let mut c = Cochain::zero(fam.clone(), fam, 1);
        for (key, tuple, text) in items {
            let f = parse_form(text, nerve.ncharts, 1).unwrap();
            c.set_block(nerve, *key, tuple, key.2, mat1(f));
        }
        c
    }

    #[test]
    fn identity_is_multiplicative_unit() {
        let nerve = Nerve::complete(2);
        let f = line_cochain(
            &nerve,
            &[
                ((0, 1, 0), &[0], "theta[0]*z"),
                ((1, 0, 0), &[0, 1], "z^2 - i"),
            ],
        );
        let id = Cochain::identity(&BundleFamily::line(2, 1), &nerve, 1);
        assert_eq!(f.mul(&id, &nerve).unwrap(), f);
        assert_eq!(id.mul(&f, &nerve).unwrap(), f);
    }

    #[test]
    fn delta_on_zero_and_one_cochains() {
        let nerve = Nerve::complete(2);
        let f0 = line_cochain(&nerve, &[((0, 0, 0), &[0], "z")]);
        assert!(f0.cech_delta(&nerve).is_zero());

        let f1 = line_cochain(&nerve, &[((1, 0, 0), &[0, 1], "z")]);
        let d = f1.cech_delta(&nerve);
        // (δf)_{αβγ} = −f_{αγ}: inserting any chart between 0 and 1.
        let expect = parse_form("-z", 2, 1);
        assert_eq!(
            d.block((2, 0, 0), &[0, 0, 1], 0).map(|m| m.at(0, 0).clone()),
            expect.clone()
        );
        assert_eq!(
            d.block((2, 0, 0), &[0, 1, 1], 0).map(|m| m.at(0, 0).clone()),
            expect
        );
    }

    #[test]
    fn product_sign_example() {
        // f a 0-cochain with (q,r) = (1,0), g a 1-cochain with (0,0):
        // (fg)_{αβ} = −f_α g_{αβ}.
        let nerve = Nerve::complete(2);
        let f = line_cochain(&nerve, &[((0, 1, 0), &[0], "theta[0]")]);
        let g = line_cochain(&nerve, &[((1, 0, 0), &[0, 1], "z")]);
        let fg = f.mul(&g, &nerve).unwrap();
        let expect = parse_form("-z*theta[0]", 2, 1).unwrap();
        assert_eq!(fg.block((1, 1, 0), &[0, 1], 0).unwrap().at(0, 0), &expect);
    }

    #[test]
    fn dbar_squares_to_zero_and_sign() {
        let nerve = Nerve::complete(2);
        // p = 1 entry ρ_0·c ↦ −θ_0·c.
        let f = line_cochain(&nerve, &[((1, 0, 0), &[0, 1], "rho[0]*(z-i)")]);
        let df = f.dbar(&nerve);
        let expect = parse_form("-theta[0]*(z-i)", 2, 1).unwrap().normalize(&nerve, 0b11);
        assert_eq!(df.block((1, 1, 0), &[0, 1], 0).unwrap().at(0, 0), &expect);
        assert!(df.dbar(&nerve).is_zero());
    }

    #[test]
    fn d_of_identity_vanishes() {
        let nerve = Nerve::complete(1);
        let fam = BundleFamily::line(1, 1);
        let id = Cochain::identity(&fam, &nerve, 1);
        let a = Cochain::unit_one_cochain(&fam, &nerve, 1);
        let d = id.d_op(&a, &a, &nerve).unwrap();
        assert!(d.is_zero(), "D(id) = a·id − id·a = 0, got {:?}", d);
    }

    #[test]
    fn selectors_reassemble() {
        let nerve = Nerve::complete(2);
        let f = line_cochain(
            &nerve,
            &[
                ((0, 0, 0), &[0], "z"),
                ((1, 0, 0), &[0, 1], "z^2"),
                ((2, 0, 0), &[0, 1, 0], "i*z"),
            ],
        );
        let mut sum = Cochain::zero(f.source.clone(), f.target.clone(), 1);
        for p in 0..=2 {
            sum = sum.add(&f.cech_part(p), &nerve);
        }
        assert_eq!(sum, f);
        // select is a projection.
        let s = f.select(0, 0);
        assert_eq!(s.select(0, 0), s);
    }
}
