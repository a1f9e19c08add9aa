//! Exact dense linear algebra over ℚ(i): reduction, kernels, solves, and
//! kernel-modulo-image quotients for cohomology.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Row-reduces `m` in place to reduced row echelon form.
/// Returns the pivot columns in order.
pub fn rref(m: &mut Mat<Scalar>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(pr) = (row..m.rows).find(|&i| !m.at(i, col).is_zero()) else {
            continue;
        };
        if pr != row {
            for j in 0..m.cols {
                let a = m.at(pr, j).clone();
                let b = m.at(row, j).clone();
                *m.at_mut(pr, j) = b;
                *m.at_mut(row, j) = a;
            }
        }
        let inv = m.at(row, col).inv();
        for j in col..m.cols {
            let v = m.at(row, j).clone() * inv.clone();
            *m.at_mut(row, j) = v;
        }
        for i in 0..m.rows {
            if i == row || m.at(i, col).is_zero() {
                continue;
            }
            let factor = m.at(i, col).clone();
            for j in col..m.cols {
                let v = m.at(i, j).clone() - factor.clone() * m.at(row, j).clone();
                *m.at_mut(i, j) = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Mat<Scalar>) -> usize {
    let mut c = m.clone();
    rref(&mut c).len()
}

/// Basis of `ker m` as column vectors.
pub fn kernel_basis(m: &Mat<Scalar>) -> Vec<Vec<Scalar>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); m.cols];
        v[free] = Scalar::one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = -r.at(prow, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` exactly; `None` if inconsistent.
pub fn solve(a: &Mat<Scalar>, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.rows, b.len());
    let mut aug = Mat::from_fn(a.rows, a.cols + 1, |i, j| {
        if j < a.cols {
            a.at(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.contains(&a.cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); a.cols];
    for (prow, &pcol) in pivots.iter().enumerate() {
        x[pcol] = aug.at(prow, a.cols).clone();
    }
    Some(x)
}

/// True if `v` lies in the column span of `basis`.
pub fn in_span(basis: &Mat<Scalar>, v: &[Scalar]) -> bool {
    solve(basis, v).is_some()
}

pub fn matvec(a: &Mat<Scalar>, x: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(a.cols, x.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = Scalar::zero();
            for j in 0..a.cols {
                acc += a.at(i, j).clone() * x[j].clone();
            }
            acc
        })
        .collect()
}

/// Kernel-modulo-image data for one cohomology spot.
pub struct Quotient {
    pub dim: usize,
    /// Kernel vectors extending an image basis to a kernel basis.
    pub representatives: Vec<Vec<Scalar>>,
    /// The image generators, kept for class reduction downstream.
    pub image: Mat<Scalar>,
}

/// Computes `ker(out) / im(inc)` where `out: V → W`, `inc: U → V` and
/// `out ∘ inc = 0`.
pub fn quotient(out: &Mat<Scalar>, inc: &Mat<Scalar>) -> Quotient {
    assert_eq!(out.cols, inc.rows, "composable dimensions required");
    let ker = kernel_basis(out);
    let img_rank = rank(inc);
    // Row-reduce [inc | ker] column-wise and keep kernel columns adding pivots.
    let total_cols = inc.cols + ker.len();
    let stacked = Mat::from_fn(out.cols, total_cols, |i, j| {
        if j < inc.cols {
            inc.at(i, j).clone()
        } else {
            ker[j - inc.cols][i].clone()
        }
    });
    let mut r = stacked;
    let pivots = rref(&mut r);
    let mut representatives = Vec::new();
    for &p in &pivots {
        if p >= inc.cols {
            representatives.push(ker[p - inc.cols].clone());
        }
    }
    let dim = ker.len().saturating_sub(img_rank);
    debug_assert_eq!(dim, representatives.len());
    Quotient {
        dim,
        representatives,
        image: inc.clone(),
    }
}

/// Canonical reduction of `v` modulo the column span of `img`: subtracts the
/// echelon-basis components, independent of presentation of `img`. Returns
/// the zero vector exactly when `v` lies in the span.
pub fn reduce_mod_image(img: &Mat<Scalar>, v: &[Scalar]) -> Vec<Scalar> {
    assert_eq!(img.rows, v.len());
    let mut out = v.to_vec();
    if img.cols == 0 {
        return out;
    }
    let mut ech = img.transpose();
    let pivots = rref(&mut ech);
    for (r, &p) in pivots.iter().enumerate() {
        if !out[p].is_zero() {
            let f = out[p].clone();
            for k in 0..out.len() {
                out[k] = out[k].clone() - f.clone() * ech.at(r, k).clone();
            }
        }
    }
    out
}

/// True if `u − v` lies in the column span of `img` (same cohomology class).
pub fn same_class(img: &Mat<Scalar>, u: &[Scalar], v: &[Scalar]) -> bool {
    let diff: Vec<Scalar> = u
        .iter()
        .zip(v)
        .map(|(a, b)| a.clone() - b.clone())
        .collect();
    reduce_mod_image(img, &diff).iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Mat<Scalar> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(rank(&a), 1);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(matvec(&a, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let x = solve(&a, &[Scalar::from_int(3), Scalar::from_int(1)]).unwrap();
        assert_eq!(x, vec![Scalar::from_int(2), Scalar::from_int(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&b, &[Scalar::from_int(1), Scalar::from_int(0)]).is_none());
    }

    #[test]
    fn quotient_dims_and_reduction() {
        let inc = m(&[&[1, 0], &[0, 1], &[0, 0]]);
        let out = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let q = quotient(&out, &inc);
        assert_eq!(q.dim, 0);
        let out2 = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        let q2 = quotient(&out2, &inc);
        assert_eq!(q2.dim, 1);
        assert_eq!(q2.representatives.len(), 1);

        let red = reduce_mod_image(&inc, &[Scalar::from_int(5), Scalar::from_int(2), Scalar::from_int(7)]);
        assert_eq!(red, vec![Scalar::zero(), Scalar::zero(), Scalar::from_int(7)]);
        assert!(same_class(
            &inc,
            &[Scalar::from_int(1), Scalar::zero(), Scalar::from_int(3)],
            &[Scalar::zero(), Scalar::from_int(4), Scalar::from_int(3)]
        ));
    }
}
