//! Numeric counterpart of the cochain algebra: tuple-indexed blocks of
//! pointwise form-matrices with the same signed product and differentials,
//! evaluated at one sample point at a time.
//!
//! Unlike the exact layer, blocks may mix form degrees (u = σ + σ∂̄σ + …),
//! so the product signs are applied per dz̄-mask part.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::pointform::{wedge_sign, FormMat};
use crate::nerve::{BundleFamily, Nerve};

pub type Tuple = Vec<usize>;

#[derive(Clone, Debug)]
pub struct NumCochain {
    pub source: BundleFamily,
    pub target: BundleFamily,
    /// (p, r) → tuple → source level → block.
    pub comps: BTreeMap<(usize, i64), BTreeMap<Tuple, BTreeMap<i64, FormMat>>>,
}

impl NumCochain {
    pub fn zero(source: BundleFamily, target: BundleFamily) -> Self {
        NumCochain {
            source,
            target,
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(family: &BundleFamily) -> Self {
        let mut c = NumCochain::zero(family.clone(), family.clone());
        for alpha in 0..family.ncharts() {
            for level in 0..=family.max_level() {
                let n = family.rank(alpha, level);
                if n == 0 {
                    continue;
                }
                c.set_block(0, 0, &[alpha], level, FormMat::identity(n));
            }
        }
        c
    }

    pub fn set_block(&mut self, p: usize, r: i64, tuple: &[usize], level: i64, m: FormMat) {
        if m.is_zero() {
            return;
        }
        let entry = self
            .comps
            .entry((p, r))
            .or_default()
            .entry(tuple.to_vec())
            .or_default();
        match entry.get_mut(&level) {
            Some(existing) => {
                let sum = existing.add(&m);
                if sum.is_zero() {
                    entry.remove(&level);
                } else {
                    *existing = sum;
                }
            }
            None => {
                entry.insert(level, m);
            }
        }
    }

    pub fn block(&self, p: usize, r: i64, tuple: &[usize], level: i64) -> Option<&FormMat> {
        self.comps
            .get(&(p, r))
            .and_then(|t| t.get(tuple))
            .and_then(|b| b.get(&level))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, i64), &Tuple, i64, &FormMat)> + '_ {
        self.comps.iter().flat_map(|(k, tuples)| {
            tuples
                .iter()
                .flat_map(move |(t, block)| block.iter().map(move |(lvl, m)| (*k, t, *lvl, m)))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.iter().next().is_none()
    }

    pub fn add(&self, o: &NumCochain) -> NumCochain {
        let mut out = self.clone();
        for ((p, r), t, lvl, m) in o.iter() {
            out.set_block(p, r, t, lvl, m.clone());
        }
        out
    }

    pub fn neg(&self) -> NumCochain {
        self.map(|m| m.neg())
    }

    pub fn sub(&self, o: &NumCochain) -> NumCochain {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Complex64) -> NumCochain {
        self.map(|m| m.scale(c))
    }

    pub fn map(&self, mut f: impl FnMut(&FormMat) -> FormMat) -> NumCochain {
        let mut out = NumCochain::zero(self.source.clone(), self.target.clone());
        for ((p, r), t, lvl, m) in self.iter() {
            out.set_block(p, r, t, lvl, f(m));
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, _, _, m)| m.max_abs()).fold(0.0, f64::max)
    }

    /// Signed product. `left_parity_sign(p, q, r)` multiplies an extra
    /// factor depending on the left part's degrees (used by the right
    /// action in D); pass `|_, _, _| 1.0` for the plain product.
    pub fn mul_with(
        &self,
        o: &NumCochain,
        nerve: &Nerve,
        left_parity_sign: impl Fn(usize, u32, i64) -> f64,
    ) -> NumCochain {
        let mut out = NumCochain::zero(o.source.clone(), self.target.clone());
        for ((p1, r1), tuples1) in &self.comps {
            for ((p2, r2), tuples2) in &o.comps {
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
                            // Per-part signs: (−1)^{(q1+r1)p2 + r1 q2}.
                            let mut prod = FormMat::zero(m1.rows, m2.cols);
                            for (&mask1, a) in &m1.parts {
                                let q1 = mask1.count_ones();
                                for (&mask2, b) in &m2.parts {
                                    let q2 = mask2.count_ones();
                                    let Some(w) = wedge_sign(mask1, mask2) else {
                                        continue;
                                    };
                                    let exp = (q1 as i64 + r1) * (*p2 as i64)
                                        + r1 * (q2 as i64);
                                    let mut s = if exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                                    s *= w * left_parity_sign(*p1, q1, *r1);
                                    let piece =
                                        super::svd::matmulc(a, b).map(|v| v * s);
                                    let merged = match prod.parts.get(&(mask1 | mask2)) {
                                        Some(e) => &(e.clone()) + &piece,
                                        None => piece,
                                    };
                                    prod.set_part(mask1 | mask2, merged);
                                }
                            }
                            out.set_block(p1 + p2, r1 + r2, &joined, *j, prod);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &NumCochain, nerve: &Nerve) -> NumCochain {
        self.mul_with(o, nerve, |_, _, _| 1.0)
    }

    pub fn cech_delta(&self, nerve: &Nerve) -> NumCochain {
        let mut out = NumCochain::zero(self.source.clone(), self.target.clone());
        let ncharts = self.source.ncharts();
        for ((p, r), tuples) in &self.comps {
            for (t, block) in tuples {
                for k in 1..=*p {
                    for c in 0..ncharts {
                        let mut big = t.clone();
                        big.insert(k, c);
                        if !nerve.tuple_admissible(&big) {
                            continue;
                        }
                        for (lvl, m) in block {
                            let signed = if k % 2 == 1 { m.neg() } else { m.clone() };
                            out.set_block(p + 1, *r, &big, *lvl, signed);
                        }
                    }
                }
            }
        }
        out
    }

    /// D f = δf + b f − (−1)^{p+q+r} f a, with per-part parity on the right
    /// action since blocks may mix form degrees.
    pub fn d_op(&self, b: &NumCochain, a: &NumCochain, nerve: &Nerve) -> NumCochain {
        let mut out = self.cech_delta(nerve);
        out = out.add(&b.mul(self, nerve));
        let fa = self.mul_with(a, nerve, |p, q, r| {
            let deg = p as i64 + q as i64 + r;
            // the −(−1)^{deg f} prefactor of the right action
            if deg.rem_euclid(2) == 0 {
                -1.0
            } else {
                1.0
            }
        });
        out.add(&fa)
    }

    /// Selector: parts with the given source level mapped to target level.
    pub fn select(&self, src_level: i64, tgt_level: i64) -> NumCochain {
        let mut out = NumCochain::zero(self.source.clone(), self.target.clone());
        for ((p, r), t, lvl, m) in self.iter() {
            if lvl == src_level && lvl - r == tgt_level {
                out.set_block(p, r, t, lvl, m.clone());
            }
        }
        out
    }

    pub fn cech_part(&self, p: usize) -> NumCochain {
        let mut out = NumCochain::zero(self.source.clone(), self.target.clone());
        for ((pp, r), t, lvl, m) in self.iter() {
            if pp == p {
                out.set_block(pp, r, t, lvl, m.clone());
            }
        }
        out
    }

    /// Geometric series (id + self)⁻¹ = Σ (−1)^m self^m; `self` must be
    /// structurally nilpotent (bounded Hom or form degree).
    pub fn neumann_inverse(&self, nerve: &Nerve) -> NumCochain {
        let id = NumCochain::identity(&self.source);
        let mut acc = id.clone();
        let mut power = id;
        for step in 0..64 {
            power = power.mul(self, nerve);
            if power.is_zero() {
                return acc;
            }
            acc = if step % 2 == 0 {
                acc.sub(&power)
            } else {
                acc.add(&power)
            };
        }
        unreachable!("operand is not nilpotent");
    }
}
