//! Gröbner bases for submodules of free modules over ℚ(i)[x₁,…,xₙ],
//! by Buchberger's algorithm with the normal selection strategy.
//!
//! Monomial order is degrevlex; module order is position-over-term
//! (lower component index dominates), which doubles as the elimination
//! order used by the syzygy and lifting routines. Everything is
//! deterministic: the pair queue is kept sorted by (lcm degree, lcm
//! degrevlex, indices).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::One;

use crate::poly::{Mono, Poly};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// Ring with no declared variables.
    EmptyRing,
    /// Matrix shapes do not compose.
    DimensionMismatch,
    /// Negative exponents fed to a purely polynomial routine.
    NotPolynomial,
}

impl core::fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AlgebraError::EmptyRing => write!(f, "polynomial ring has no variables"),
            AlgebraError::DimensionMismatch => write!(f, "matrix dimensions do not compose"),
            AlgebraError::NotPolynomial => {
                write!(f, "negative exponent in a polynomial-only context")
            }
        }
    }
}

/// Degrevlex comparison: higher total degree wins; ties broken by the
/// *last* coordinate in which the exponents differ, smaller exponent wins.
pub fn degrevlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

/// Position-over-term on (component, monomial): lower component dominates.
pub fn pot(a: (usize, &[i64]), b: (usize, &[i64])) -> Ordering {
    match a.0.cmp(&b.0) {
        Ordering::Less => Ordering::Greater,
        Ordering::Greater => Ordering::Less,
        Ordering::Equal => degrevlex(a.1, b.1),
    }
}

/// Element of a free module R^c, stored densely by component.
pub type ModElem = Vec<Poly>;

pub fn elem_is_zero(e: &ModElem) -> bool {
    e.iter().all(|p| p.is_zero())
}

pub fn elem_sub(a: &ModElem, b: &ModElem) -> ModElem {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn elem_scale_term(e: &ModElem, mono: &[i64], c: &Scalar) -> ModElem {
    e.iter().map(|p| p.mul_term(mono, c)).collect()
}

/// Leading term of a module element: (component, monomial, coefficient).
pub fn leading_term(e: &ModElem) -> Option<(usize, Mono, Scalar)> {
    let mut best: Option<(usize, Mono, Scalar)> = None;
    for (comp, p) in e.iter().enumerate() {
        for (m, c) in &p.terms {
            let better = match &best {
                None => true,
                Some((bc, bm, _)) => pot((comp, m), (*bc, bm)) == Ordering::Greater,
            };
            if better {
                best = Some((comp, m.clone(), c.clone()));
            }
        }
    }
    best
}

fn mono_divides(d: &[i64], m: &[i64]) -> bool {
    d.iter().zip(m).all(|(a, b)| a <= b)
}

fn mono_lcm(a: &[i64], b: &[i64]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_sub(a: &[i64], b: &[i64]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A Gröbner basis that remembers how each element is expressed in the
/// original generators, so membership certificates translate back.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub ncomps: usize,
    pub nvars: usize,
    pub elems: Vec<ModElem>,
    /// `expr[k][j]`: coefficient of original generator `j` in `elems[k]`.
    pub expr: Vec<Vec<Poly>>,
    leads: Vec<(usize, Mono, Scalar)>,
}

impl GroebnerBasis {
    /// Buchberger on the given module generators. `nvars` must be positive.
    pub fn new(gens: &[ModElem], ncomps: usize, nvars: usize) -> Result<Self, AlgebraError> {
        if nvars == 0 {
            return Err(AlgebraError::EmptyRing);
        }
        for g in gens {
            assert_eq!(g.len(), ncomps, "generator has wrong component count");
            if g.iter().any(|p| p.is_laurent()) {
                return Err(AlgebraError::NotPolynomial);
            }
        }
        let mut basis: Vec<ModElem> = Vec::new();
        let mut expr: Vec<Vec<Poly>> = Vec::new();
        let unit = |j: usize, n: usize| -> Vec<Poly> {
            let mut v = vec![Poly::zero_in(nvars); n];
            v[j] = Poly::one_in(nvars);
            v
        };
        for (j, g) in gens.iter().enumerate() {
            if !elem_is_zero(g) {
                basis.push(g.clone());
                expr.push(unit(j, gens.len()));
            }
        }

        // Pair queue ordered by (lcm degrevlex, i, j); non-pairs drop out on pop.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        fn sort_pairs(pairs: &mut Vec<(usize, usize)>, basis: &[ModElem]) {
            pairs.sort_by(|&(i1, j1), &(i2, j2)| {
                let key = |i: usize, j: usize| -> Option<Mono> {
                    let (ci, mi, _) = leading_term(&basis[i])?;
                    let (cj, mj, _) = leading_term(&basis[j])?;
                    if ci != cj {
                        return None;
                    }
                    Some(mono_lcm(&mi, &mj))
                };
                match (key(i1, j1), key(i2, j2)) {
                    (Some(a), Some(b)) => degrevlex(&a, &b).then(i1.cmp(&i2)).then(j1.cmp(&j2)),
                    (None, Some(_)) => Ordering::Less,
                    (Some(_), None) => Ordering::Greater,
                    (None, None) => i1.cmp(&i2).then(j1.cmp(&j2)),
                }
            });
        }
        for k in 0..basis.len() {
            for i in 0..k {
                pairs.push((i, k));
            }
        }
        sort_pairs(&mut pairs, &basis);

        while let Some((i, j)) = pairs.first().cloned() {
            pairs.remove(0);
            let (ci, mi, coef_i) = leading_term(&basis[i]).expect("nonzero basis element");
            let (cj, mj, coef_j) = leading_term(&basis[j]).expect("nonzero basis element");
            if ci != cj {
                continue;
            }
            // Product criterion (same component, coprime leading monomials).
            if mi.iter().zip(&mj).all(|(a, b)| *a == 0 || *b == 0) && ncomps == 1 {
                continue;
            }
            let l = mono_lcm(&mi, &mj);
            let ui = mono_sub(&l, &mi);
            let uj = mono_sub(&l, &mj);
            let s: ModElem = elem_sub(
                &elem_scale_term(&basis[i], &ui, &coef_j),
                &elem_scale_term(&basis[j], &uj, &coef_i),
            );
            let s_expr: Vec<Poly> = elem_sub(
                &elem_scale_term(&expr[i], &ui, &coef_j),
                &elem_scale_term(&expr[j], &uj, &coef_i),
            );
            let (nf, nf_expr) = reduce_tracked(&s, &s_expr, &basis, &expr);
            if !elem_is_zero(&nf) {
                basis.push(nf);
                expr.push(nf_expr);
                let k = basis.len() - 1;
                for i2 in 0..k {
                    pairs.push((i2, k));
                }
                sort_pairs(&mut pairs, &basis);
            }
        }

        let mut gb = GroebnerBasis {
            ncomps,
            nvars,
            leads: basis
                .iter()
                .map(|e| leading_term(e).expect("nonzero"))
                .collect(),
            elems: basis,
            expr,
        };
        gb.autoreduce();
        Ok(gb)
    }

    /// Inter-reduces to the reduced Gröbner basis with monic leads, sorted
    /// by leading term. This makes the basis canonical for the order.
    fn autoreduce(&mut self) {
        let mut keep: Vec<bool> = vec![true; self.elems.len()];
        for i in 0..self.elems.len() {
            if !keep[i] {
                continue;
            }
            for j in 0..self.elems.len() {
                if i == j || !keep[j] {
                    continue;
                }
                let (ci, mi, _) = &self.leads[i];
                let (cj, mj, _) = &self.leads[j];
                if ci == cj && mono_divides(mj, mi) && (mi != mj || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut elems = Vec::new();
        let mut expr = Vec::new();
        for (k, e) in self.elems.iter().enumerate() {
            if keep[k] {
                elems.push(e.clone());
                expr.push(self.expr[k].clone());
            }
        }
        for i in 0..elems.len() {
            let mut others = elems.clone();
            let mut others_expr = expr.clone();
            others.remove(i);
            others_expr.remove(i);
            let (nf, nf_expr) = reduce_tracked(&elems[i], &expr[i], &others, &others_expr);
            if !elem_is_zero(&nf) {
                elems[i] = nf;
                expr[i] = nf_expr;
            }
        }
        for (e, ex) in elems.iter_mut().zip(expr.iter_mut()) {
            let (_, _, c) = leading_term(e).expect("nonzero");
            let inv = c.inv();
            for p in e.iter_mut() {
                *p = p.scale(&inv);
            }
            for p in ex.iter_mut() {
                *p = p.scale(&inv);
            }
        }
        let mut idx: Vec<usize> = (0..elems.len()).collect();
        idx.sort_by(|&a, &b| {
            let la = leading_term(&elems[a]).unwrap();
            let lb = leading_term(&elems[b]).unwrap();
            pot((lb.0, &lb.1), (la.0, &la.1))
        });
        self.elems = idx.iter().map(|&k| elems[k].clone()).collect();
        self.expr = idx.iter().map(|&k| expr[k].clone()).collect();
        self.leads = self
            .elems
            .iter()
            .map(|e| leading_term(e).expect("nonzero"))
            .collect();
    }

    /// Full normal form of `e` against the basis.
    pub fn normal_form(&self, e: &ModElem) -> ModElem {
        let ngens = self.expr.first().map(|x| x.len()).unwrap_or(0);
        let zero_expr = vec![Poly::zero_in(self.nvars); ngens];
        reduce_tracked(e, &zero_expr, &self.elems, &self.expr).0
    }

    /// If `e` lies in the module, returns coefficients on the *original*
    /// generators with `Σ coeff_j · gen_j = e`.
    pub fn membership(&self, e: &ModElem) -> Option<Vec<Poly>> {
        let ngens = self.expr.first().map(|x| x.len()).unwrap_or(0);
        let zero_expr = vec![Poly::zero_in(self.nvars); ngens];
        let (nf, nf_expr) = reduce_tracked(e, &zero_expr, &self.elems, &self.expr);
        if elem_is_zero(&nf) {
            Some(nf_expr.iter().map(|p| -p.clone()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, e: &ModElem) -> bool {
        elem_is_zero(&self.normal_form(e))
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = (usize, &Mono)> {
        self.leads.iter().map(|(c, m, _)| (*c, m))
    }
}

/// Division with expression tracking. Returns `(nf, expr)` with
/// `nf = input − (used combination of basis)` and
/// `expr = input_expr − (the same combination written in generators)`.
/// Every term (not just the lead) is reduced, so normal forms are canonical.
fn reduce_tracked(
    input: &ModElem,
    input_expr: &[Poly],
    basis: &[ModElem],
    basis_expr: &[Vec<Poly>],
) -> (ModElem, Vec<Poly>) {
    let mut cur = input.clone();
    let mut expr = input_expr.to_vec();
    let leads: Vec<Option<(usize, Mono, Scalar)>> =
        basis.iter().map(|e| leading_term(e)).collect();
    loop {
        let mut target: Option<(usize, Mono, Scalar, usize)> = None;
        for (comp, p) in cur.iter().enumerate() {
            for (m, c) in &p.terms {
                for (k, lead) in leads.iter().enumerate() {
                    let Some((lc, lm, _)) = lead else { continue };
                    if *lc == comp && mono_divides(lm, m) {
                        let better = match &target {
                            None => true,
                            Some((tc, tm, _, _)) => pot((comp, m), (*tc, tm)) == Ordering::Greater,
                        };
                        if better {
                            target = Some((comp, m.clone(), c.clone(), k));
                        }
                    }
                }
            }
        }
        let Some((_, m, c, k)) = target else {
            break;
        };
        let (_, lm, lcoef) = leads[k].as_ref().expect("reducer exists");
        let q = mono_sub(&m, lm);
        let factor = c / lcoef.clone();
        cur = elem_sub(&cur, &elem_scale_term(&basis[k], &q, &factor));
        expr = elem_sub(&expr, &elem_scale_term(&basis_expr[k], &q, &factor));
    }
    (cur, expr)
}

/// Gröbner basis of an ideal (single-component module).
pub fn ideal_basis(gens: &[Poly], nvars: usize) -> Result<GroebnerBasis, AlgebraError> {
    let elems: Vec<ModElem> = gens.iter().map(|p| vec![p.clone()]).collect();
    GroebnerBasis::new(&elems, 1, nvars)
}

/// Krull dimension of V(I) ⊆ ℂⁿ from the leading-term ideal:
/// the largest cardinality of a variable subset S such that no leading
/// monomial is supported inside S. Returns `None` for the empty variety
/// (1 ∈ I). The zero ideal has dimension n.
pub fn variety_dimension(gb: &GroebnerBasis) -> Option<usize> {
    assert_eq!(gb.ncomps, 1, "ideal expected");
    let leads: Vec<&Mono> = gb.leads.iter().map(|(_, m, _)| m).collect();
    if leads.iter().any(|m| m.iter().all(|&e| e == 0)) {
        return None; // unit ideal
    }
    let n = gb.nvars;
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let inside = |m: &&Mono| -> bool {
            m.iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || mask & (1 << i) != 0)
        };
        if !leads.iter().any(inside) {
            best = size;
        }
    }
    Some(best)
}

/// Radical membership via Rabinowitsch: f ∈ √I iff 1 ∈ I + (1 − t·f) in
/// the ring with one extra variable t.
pub fn in_radical(f: &Poly, gens: &[Poly], nvars: usize) -> Result<bool, AlgebraError> {
    if f.is_zero() {
        return Ok(true);
    }
    let extend = |p: &Poly| -> Poly {
        let mut q = Poly::zero_in(nvars + 1);
        for (e, c) in &p.terms {
            let mut e2 = e.clone();
            e2.push(0);
            q.add_term(e2, c.clone());
        }
        q
    };
    let mut new_gens: Vec<Poly> = gens.iter().map(extend).collect();
    let mut t_e = vec![0i64; nvars + 1];
    t_e[nvars] = 1;
    let t_f = extend(f).mul_term(&t_e, &Scalar::one());
    let one = Poly::one_in(nvars + 1);
    new_gens.push(one.clone() - t_f);
    let gb = ideal_basis(&new_gens, nvars + 1)?;
    Ok(gb.contains(&vec![one]))
}

/// Spec-level entry point: reduced Gröbner basis of the submodule generated
/// by `gens` in R^{ncomps}.
pub fn groebner_basis(
    gens: &[ModElem],
    ncomps: usize,
    nvars: usize,
) -> Result<Vec<ModElem>, AlgebraError> {
    Ok(GroebnerBasis::new(gens, ncomps, nvars)?.elems)
}
