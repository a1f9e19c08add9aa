//! Syzygies, map lifting, free resolutions and their rank loci.
//!
//! Kernels are computed by Gröbner elimination: the columns of `m`
//! together with unit tags live in R^t ⊕ R^s with the target block
//! dominating the position-over-term order, and basis elements with
//! vanishing target block are exactly the kernel generators.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::groebner::{AlgebraError, GroebnerBasis, ModElem};
use crate::matrix::Mat;
use crate::poly::{Poly, PolyMatrix};
use crate::scalar::Scalar;

/// Columns of the returned matrix generate `ker m` and satisfy
/// `m · col = 0` exactly.
pub fn syzygy(m: &PolyMatrix, nvars: usize) -> Result<PolyMatrix, AlgebraError> {
    let t = m.rows;
    let s = m.cols;
    let mut gens: Vec<ModElem> = Vec::new();
    for j in 0..s {
        let mut g = vec![Poly::zero_in(nvars); t + s];
        for i in 0..t {
            g[i] = m.at(i, j).clone();
        }
        g[t + j] = Poly::one_in(nvars);
        gens.push(g);
    }
    let gb = GroebnerBasis::new(&gens, t + s, nvars)?;
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for e in &gb.elems {
        if e[..t].iter().all(|p| p.is_zero()) {
            cols.push(e[t..].to_vec());
        }
    }
    let out = Mat::from_fn(s, cols.len(), |i, j| cols[j][i].clone());
    debug_assert!(m.matmul(&out).is_zero());
    Ok(out)
}

/// Solves `a · x = b` exactly over the polynomial ring; `Ok(None)` when
/// some column of `b` is outside the column span of `a`.
pub fn lift_through(
    a: &PolyMatrix,
    b: &PolyMatrix,
    nvars: usize,
) -> Result<Option<PolyMatrix>, AlgebraError> {
    if a.rows != b.rows {
        return Err(AlgebraError::DimensionMismatch);
    }
    if a.entries().any(|(_, _, p)| p.is_laurent()) || b.entries().any(|(_, _, p)| p.is_laurent()) {
        return lift_through_laurent(a, b, nvars, &vec![true; nvars]);
    }
    let gens: Vec<ModElem> = (0..a.cols).map(|j| a.col(j)).collect();
    let gb = GroebnerBasis::new(&gens, a.rows.max(1), nvars)?;
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for j in 0..b.cols {
        match gb.membership(&b.col(j)) {
            Some(coeffs) => cols.push(coeffs),
            None => return Ok(None),
        }
    }
    let x = Mat::from_fn(a.cols, b.cols, |i, j| cols[j][i].clone());
    debug_assert_eq!(a.matmul(&x), *b);
    Ok(Some(x))
}

/// Laurent variant: variables flagged in `invertible` are units. Each
/// negative power z⁻ᵏ is rewritten as a fresh variable tᵏ and the unit
/// relations z·t = 1 are adjoined on every component; membership
/// certificates are mapped back by t ↦ z⁻¹.
pub fn lift_through_laurent(
    a: &PolyMatrix,
    b: &PolyMatrix,
    nvars: usize,
    invertible: &[bool],
) -> Result<Option<PolyMatrix>, AlgebraError> {
    if a.rows != b.rows {
        return Err(AlgebraError::DimensionMismatch);
    }
    let inv_idx: Vec<usize> = (0..nvars).filter(|&i| invertible[i]).collect();
    let k = inv_idx.len();
    let big = nvars + k;
    let up = |p: &Poly| -> Result<Poly, AlgebraError> {
        let mut q = Poly::zero_in(big);
        for (e, c) in &p.terms {
            let mut e2 = vec![0i64; big];
            for (i, &x) in e.iter().enumerate() {
                if x >= 0 {
                    e2[i] = x;
                } else {
                    let Some(pos) = inv_idx.iter().position(|&v| v == i) else {
                        return Err(AlgebraError::NotPolynomial);
                    };
                    e2[nvars + pos] = -x;
                }
            }
            q.add_term(e2, c.clone());
        }
        Ok(q)
    };
    let down = |p: &Poly| -> Poly {
        let mut q = Poly::zero_in(nvars);
        for (e, c) in &p.terms {
            let mut e2 = vec![0i64; nvars];
            for i in 0..nvars {
                e2[i] = e[i];
            }
            for (pos, &i) in inv_idx.iter().enumerate() {
                e2[i] -= e[nvars + pos];
            }
            q.add_term(e2, c.clone());
        }
        q
    };

    let t = a.rows;
    let mut gens: Vec<ModElem> = Vec::new();
    for j in 0..a.cols {
        let mut g = Vec::with_capacity(t);
        for i in 0..t {
            g.push(up(a.at(i, j))?);
        }
        gens.push(g);
    }
    // Unit relations (z_i t_i − 1) e_comp.
    let mut relations: Vec<Poly> = Vec::new();
    for (pos, &i) in inv_idx.iter().enumerate() {
        let mut zt = vec![0i64; big];
        zt[i] = 1;
        zt[nvars + pos] = 1;
        relations.push(Poly::term(big, zt, Scalar::one()) - Poly::one_in(big));
    }
    let base_gens = gens.len();
    for rel in &relations {
        for comp in 0..t {
            let mut g = vec![Poly::zero_in(big); t];
            g[comp] = rel.clone();
            gens.push(g);
        }
    }
    let gb = GroebnerBasis::new(&gens, t.max(1), big)?;
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for j in 0..b.cols {
        let target: ModElem = (0..t).map(|i| up(b.at(i, j))).collect::<Result<_, _>>()?;
        match gb.membership(&target) {
            // Relation-generator coefficients drop out: z·t−1 ↦ 0 under t ↦ z⁻¹.
            Some(coeffs) => cols.push(coeffs[..base_gens].iter().map(&down).collect()),
            None => return Ok(None),
        }
    }
    let x = Mat::from_fn(a.cols, b.cols, |i, j| cols[j][i].clone());
    debug_assert_eq!(a.matmul(&x), *b);
    Ok(Some(x))
}

/// A finite free resolution … → R^{r₂} → R^{r₁} → R^{r₀} of the cokernel
/// of `augmentation`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub nvars: usize,
    /// Module ranks r₀, r₁, … from the augmented end.
    pub ranks: Vec<usize>,
    /// `differentials[k]` is d_{k+1}: R^{r_{k+1}} → R^{r_k}.
    pub differentials: Vec<PolyMatrix>,
    /// The presentation matrix the resolution was built from.
    pub augmentation: PolyMatrix,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    /// d_{k−1} · d_k = 0 for all consecutive pairs, exactly.
    pub fn composites_vanish(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[0].matmul(&w[1]).is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    Algebra(AlgebraError),
    /// The syzygy chain failed to terminate within the requested bound,
    /// which contradicts the syzygy theorem and indicates a bug.
    Internal(usize),
}

impl From<AlgebraError> for ResolutionError {
    fn from(e: AlgebraError) -> Self {
        ResolutionError::Algebra(e)
    }
}

impl core::fmt::Display for ResolutionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ResolutionError::Algebra(e) => write!(f, "{}", e),
            ResolutionError::Internal(n) => {
                write!(f, "free resolution does not terminate within {} steps", n)
            }
        }
    }
}

/// Builds a free resolution of `coker presentation` by iterated syzygies,
/// minimalizing each differential (constant-unit Gaussian elimination)
/// before taking the next kernel.
pub fn free_resolution(
    presentation: &PolyMatrix,
    max_len: usize,
    nvars: usize,
) -> Result<FreeResolution, ResolutionError> {
    let augmentation = presentation.clone();
    let mut ranks = vec![presentation.rows];
    let mut differentials: Vec<PolyMatrix> = Vec::new();
    let mut current = presentation.clone();
    for _step in 0..=max_len {
        // Minimalize: also rewrites the previous differential's columns.
        let prev = differentials.last_mut();
        current = minimalize(current, prev);
        if current.cols == 0 || current.is_zero() {
            break;
        }
        ranks.push(current.cols);
        differentials.push(current.clone());
        if differentials.len() > max_len {
            return Err(ResolutionError::Internal(max_len));
        }
        current = syzygy(&current, nvars)?;
    }
    // Adjust r₀ in case minimalization of d₁ removed generators.
    if let Some(d1) = differentials.first() {
        ranks[0] = d1.rows;
    }
    let res = FreeResolution {
        nvars,
        ranks,
        differentials,
        augmentation,
    };
    debug_assert!(res.composites_vanish());
    Ok(res)
}

/// Removes constant-unit entries from `d` by Gaussian elimination on rows
/// and columns, deleting the pivot row/column pair. Row operations and row
/// deletions are mirrored into `prev` (the differential into `d`'s target)
/// as column operations, keeping the composite identically zero.
fn minimalize(mut d: PolyMatrix, mut prev: Option<&mut PolyMatrix>) -> PolyMatrix {
    loop {
        let Some((pi, pj, u)) = d
            .entries()
            .find_map(|(i, j, p)| p.as_constant().filter(|c| !c.is_zero()).map(|c| (i, j, c)))
        else {
            return d;
        };
        let uinv = Poly::constant(d.at(pi, pj).nvars, u.inv());
        // Scale column pj so the pivot is 1.
        for i in 0..d.rows {
            let v = &d.at(i, pj).clone() * &uinv;
            *d.at_mut(i, pj) = v;
        }
        // Clear the pivot row across other columns (source basis change).
        for j in 0..d.cols {
            if j == pj || d.at(pi, j).is_zero() {
                continue;
            }
            let c = d.at(pi, j).clone();
            for i in 0..d.rows {
                let v = d.at(i, j).clone() - &c * d.at(i, pj);
                *d.at_mut(i, j) = v;
            }
        }
        // Clear the pivot column across other rows (target basis change),
        // mirrored into `prev` columns.
        for i in 0..d.rows {
            if i == pi || d.at(i, pj).is_zero() {
                continue;
            }
            let c = d.at(i, pj).clone();
            for j in 0..d.cols {
                let v = d.at(i, j).clone() - &c * d.at(pi, j);
                *d.at_mut(i, j) = v;
            }
            if let Some(p) = prev.as_deref_mut() {
                // row_i −= c·row_pi on d means col_pi += c·col_i on prev.
                for r in 0..p.rows {
                    let v = p.at(r, pi).clone() + &c * p.at(r, i);
                    *p.at_mut(r, pi) = v;
                }
            }
        }
        // Drop pivot row and column; drop the matching column of prev.
        let rows: Vec<usize> = (0..d.rows).filter(|&i| i != pi).collect();
        let cols: Vec<usize> = (0..d.cols).filter(|&j| j != pj).collect();
        d = d.submatrix(&rows, &cols);
        if let Some(p) = prev.as_deref_mut() {
            let pcols: Vec<usize> = (0..p.cols).filter(|&j| j != pi).collect();
            let prows: Vec<usize> = (0..p.rows).collect();
            *p = p.submatrix(&prows, &pcols);
        }
    }
}

/// Determinant by Laplace expansion; fine for the block sizes in play.
pub fn determinant(m: &PolyMatrix) -> Poly {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let nv = if n > 0 { m.at(0, 0).nvars } else { 0 };
    match n {
        0 => Poly::one_in(nv),
        1 => m.at(0, 0).clone(),
        _ => {
            let mut acc = Poly::zero_in(nv);
            let rows: Vec<usize> = (1..n).collect();
            for j in 0..n {
                if m.at(0, j).is_zero() {
                    continue;
                }
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = determinant(&m.submatrix(&rows, &cols));
                let signed = if j % 2 == 0 {
                    minor
                } else {
                    -minor
                };
                acc += m.at(0, j) * &signed;
            }
            acc
        }
    }
}

fn size_minors(m: &PolyMatrix, size: usize) -> Vec<Poly> {
    let mut out = Vec::new();
    let rows = combinations(m.rows, size);
    let cols = combinations(m.cols, size);
    for r in &rows {
        for c in &cols {
            let d = determinant(&m.submatrix(r, c));
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + 1 <= n - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Generic rank of a polynomial matrix: the largest minor size with a
/// nonvanishing determinant.
pub fn generic_rank(m: &PolyMatrix) -> usize {
    let maxr = m.rows.min(m.cols);
    for size in (1..=maxr).rev() {
        if !size_minors(m, size).is_empty() {
            return size;
        }
    }
    0
}

/// The locus where a differential drops below its generic rank, cut out by
/// the minors of that size.
#[derive(Clone, Debug)]
pub struct RankLocus {
    pub level: usize,
    pub generic_rank: usize,
    /// Generators (minors) of the locus ideal; empty means empty locus is
    /// impossible — an empty vector here encodes the zero ideal only when
    /// `generic_rank == 0`.
    pub ideal: Vec<Poly>,
}

/// Rank loci Z^k for every differential d_k (k = 1…length).
pub fn rank_loci(res: &FreeResolution) -> Vec<RankLocus> {
    res.differentials
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            let rho = generic_rank(d);
            let ideal = if rho == 0 {
                Vec::new()
            } else {
                size_minors(d, rho)
            };
            RankLocus {
                level: idx + 1,
                generic_rank: rho,
                ideal,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::{in_radical, variety_dimension, ideal_basis};

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
    fn koszul_syzygy_of_a_row() {
        let vars = ["z1", "z2"];
        let m = pm(&[&["z1", "z2"]], &vars);
        let s = syzygy(&m, 2).unwrap();
        assert!(m.matmul(&s).is_zero());
        assert_eq!(s.cols, 1);
        // The column is (−z2, z1)ᵀ up to a unit: each generates the other.
        let koszul = vec![p("-z2", &vars), p("z1", &vars)];
        let gb_s = GroebnerBasis::new(&[s.col(0)], 2, 2).unwrap();
        assert!(gb_s.contains(&koszul));
        let gb_k = GroebnerBasis::new(&[koszul], 2, 2).unwrap();
        assert!(gb_k.contains(&s.col(0)));
    }

    #[test]
    fn syzygy_of_identity_is_trivial() {
        let vars = ["z"];
        let m = pm(&[&["1", "0"], &["0", "1"]], &vars);
        let s = syzygy(&m, 1).unwrap();
        assert_eq!(s.cols, 0);
    }

    #[test]
    fn syzygy_of_zero_map_is_everything() {
        let vars = ["z"];
        let m = pm(&[&["0", "0"]], &vars);
        let s = syzygy(&m, 1).unwrap();
        let gb = GroebnerBasis::new(
            &(0..s.cols).map(|j| s.col(j)).collect::<Vec<_>>(),
            2,
            1,
        )
        .unwrap();
        assert!(gb.contains(&vec![Poly::one_in(1), Poly::zero_in(1)]));
        assert!(gb.contains(&vec![Poly::zero_in(1), Poly::one_in(1)]));
    }

    #[test]
    fn lift_examples() {
        let vars = ["z"];
        let a = pm(&[&["z"]], &vars);
        let b = pm(&[&["z^3"]], &vars);
        let x = lift_through(&a, &b, 1).unwrap().unwrap();
        assert_eq!(*x.at(0, 0), p("z^2", &vars));

        let one = pm(&[&["1"]], &vars);
        assert!(lift_through(&a, &one, 1).unwrap().is_none());

        let vars2 = ["z1", "z2"];
        let a2 = pm(&[&["z1", "z2"]], &vars2);
        let b2 = pm(&[&["z1^2 + z1*z2"]], &vars2);
        let x2 = lift_through(&a2, &b2, 2).unwrap().unwrap();
        assert_eq!(a2.matmul(&x2), b2);
    }

    #[test]
    fn laurent_lift_uses_units() {
        let vars = ["z"];
        let a = pm(&[&["z"]], &vars);
        let b = pm(&[&["1"]], &vars);
        let x = lift_through_laurent(&a, &b, 1, &[true]).unwrap().unwrap();
        assert_eq!(a.matmul(&x), b);
        assert_eq!(*x.at(0, 0), p("z^-1", &vars));
        // 1/z − 1 against z − 1 on the punctured line: unit factor −1/z.
        let a2 = pm(&[&["z - 1"]], &vars);
        let b2 = pm(&[&["z^-1 - 1"]], &vars);
        let x2 = lift_through(&a2, &b2, 1).unwrap().unwrap();
        assert_eq!(a2.matmul(&x2), b2);
    }

    #[test]
    fn resolution_principal_ideal() {
        let vars = ["z"];
        for k in 1..=3 {
            let d = pm(&[&[&alloc::format!("z^{}", k)]], &vars);
            let res = free_resolution(&d, 1, 1).unwrap();
            assert_eq!(res.ranks, vec![1, 1]);
            assert_eq!(res.length(), 1);
            assert!(res.composites_vanish());
        }
    }

    #[test]
    fn resolution_koszul_point() {
        let vars = ["z1", "z2"];
        let d = pm(&[&["z1", "z2"]], &vars);
        let res = free_resolution(&d, 2, 2).unwrap();
        assert_eq!(res.ranks, vec![1, 2, 1]);
        assert!(res.composites_vanish());
        // d2 is the Koszul relation (−z2, z1)ᵀ up to unit.
        let d2 = &res.differentials[1];
        assert!(res.differentials[0].matmul(d2).is_zero());
    }

    #[test]
    fn resolution_free_module() {
        let vars = ["z"];
        let zero = PolyMatrix::from_fn(2, 1, |_, _| Poly::zero_in(1));
        let res = free_resolution(&zero, 1, 1).unwrap();
        assert_eq!(res.length(), 0);
        assert_eq!(res.ranks, vec![2]);
        let _ = vars;
    }

    #[test]
    fn minimalization_removes_units() {
        let vars = ["z"];
        // Presentation with a unit row: coker is 𝒪/(z) ⊕ (killed generator).
        let d = pm(&[&["z", "0"], &["0", "1"]], &vars);
        let res = free_resolution(&d, 1, 1).unwrap();
        assert_eq!(res.ranks, vec![1, 1]);
        assert_eq!(*res.differentials[0].at(0, 0), p("z", &vars));
    }

    #[test]
    fn rank_loci_koszul_and_nesting() {
        let vars = ["z1", "z2"];
        let d = pm(&[&["z1", "z2"]], &vars);
        let res = free_resolution(&d, 2, 2).unwrap();
        let loci = rank_loci(&res);
        assert_eq!(loci.len(), 2);
        // Z¹ and Z² both cut out the origin.
        for locus in &loci {
            assert_eq!(locus.generic_rank, 1);
            for gen in [p("z1", &vars), p("z2", &vars)] {
                assert!(in_radical(&gen, &locus.ideal, 2).unwrap());
            }
            let gb = ideal_basis(&locus.ideal, 2).unwrap();
            let dim = variety_dimension(&gb).unwrap();
            assert!(2 - dim >= locus.level);
        }
        // Nesting Z² ⊆ Z¹ as radical containment I₁ ⊆ √I₂.
        for g in &loci[0].ideal {
            assert!(in_radical(g, &loci[1].ideal, 2).unwrap());
        }
    }

    #[test]
    fn rank_locus_principal() {
        let vars = ["z"];
        let d = pm(&[&["z^2"]], &vars);
        let res = free_resolution(&d, 1, 1).unwrap();
        let loci = rank_loci(&res);
        assert_eq!(loci.len(), 1);
        assert_eq!(loci[0].ideal, vec![p("z^2", &vars)]);
    }
}
