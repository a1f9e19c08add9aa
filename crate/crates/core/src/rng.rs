//! Seeded random generators for the property suites. ChaCha-backed, so a
//! (seed, trial) pair reproduces the same objects on every platform.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cochain::Cochain;
use crate::matrix::Mat;
use crate::nerve::{BundleFamily, Nerve};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::symbol::{Form, FormKey};

pub struct Sampler {
    rng: ChaCha8Rng,
    pub ncharts: usize,
    pub ndims: usize,
}

impl Sampler {
    pub fn new(seed: u64, ncharts: usize, ndims: usize) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            ncharts,
            ndims,
        }
    }

    pub fn scalar(&mut self) -> Scalar {
        let pool = [
            Scalar::one(),
            Scalar::from_int(-1),
            Scalar::from_int(2),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(-1, 3),
            Scalar::i(),
            Scalar::from_parts(1, 1, 1, 1),
            Scalar::from_parts(0, 1, -1, 2),
        ];
        pool[self.rng.gen_range(0..pool.len())].clone()
    }

    /// Sparse Laurent polynomial in the 2·ndims coefficient variables.
    pub fn coeff_poly(&mut self, laurent: bool) -> Poly {
        let nv = 2 * self.ndims;
        let mut p = Poly::zero_in(nv);
        let nterms = self.rng.gen_range(1..=2);
        for _ in 0..nterms {
            let e: Vec<i64> = (0..nv)
                .map(|_| {
                    if laurent {
                        self.rng.gen_range(-1..=2)
                    } else {
                        self.rng.gen_range(0..=2)
                    }
                })
                .collect();
            p.add_term(e, self.scalar());
        }
        p
    }

    /// Random form of odd degree exactly `q`: q distinct odd generators,
    /// a few ρ factors, and a random coefficient.
    pub fn form(&mut self, q: u32) -> Form {
        let total_odd = self.ncharts + self.ndims;
        if (q as usize) > total_odd {
            return Form::zero(self.ncharts, self.ndims);
        }
        let mut f = Form::zero(self.ncharts, self.ndims);
        let nterms = self.rng.gen_range(1..=2);
        for _ in 0..nterms {
            let mut odd: u64 = 0;
            while odd.count_ones() < q {
                odd |= 1u64 << self.rng.gen_range(0..total_odd);
            }
            let mut rho = vec![0u16; self.ncharts];
            for e in rho.iter_mut() {
                *e = self.rng.gen_range(0..=1);
            }
            let key = FormKey { odd, rho };
            let coeff = self.coeff_poly(true);
            f = f.add(&{
                let mut g = Form::zero(self.ncharts, self.ndims);
                g.terms.insert(key, coeff);
                g
            });
        }
        f
    }

    pub fn family(&mut self, max_level: usize, max_rank: usize) -> BundleFamily {
        let levels = self.rng.gen_range(1..=max_level + 1);
        let ranks: Vec<Vec<usize>> = (0..self.ncharts)
            .map(|_| (0..levels).map(|_| self.rng.gen_range(1..=max_rank)).collect())
            .collect();
        BundleFamily::new(ranks)
    }

    /// Family with the same rank table on every chart, as required for
    /// identity gluing.
    pub fn uniform_family(&mut self, max_level: usize, max_rank: usize) -> BundleFamily {
        let levels = self.rng.gen_range(1..=max_level + 1);
        let row: Vec<usize> = (0..levels).map(|_| self.rng.gen_range(1..=max_rank)).collect();
        BundleFamily::new(vec![row; self.ncharts])
    }

    /// Random homogeneous cochain of tri-degree (p, q, r), filled over a
    /// random subset of admissible tuples.
    pub fn cochain(
        &mut self,
        nerve: &Nerve,
        source: &BundleFamily,
        target: &BundleFamily,
        (p, q, r): (usize, u32, i64),
        density: f64,
    ) -> Cochain {
        let mut c = Cochain::zero(source.clone(), target.clone(), self.ndims);
        for t in nerve.tuples(p + 1) {
            for level in 0..=source.max_level() {
                let rows = target.rank(t[0], level - r);
                let cols = source.rank(*t.last().unwrap(), level);
                if rows == 0 || cols == 0 {
                    continue;
                }
                if self.rng.gen::<f64>() > density {
                    continue;
                }
                let m = Mat::from_fn(rows, cols, |_, _| {
                    if self.rng.gen::<f64>() < 0.6 {
                        self.form(q)
                    } else {
                        Form::zero(self.ncharts, self.ndims)
                    }
                });
                c.set_block(nerve, (p, q, r), &t, level, m);
            }
        }
        c
    }

    pub fn range(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}
