//! One-sided Jacobi SVD for small complex matrices, and the Moore–Penrose
//! pseudoinverse with a relative rank threshold. Block sizes here stay in
//! the single digits, where Jacobi is simple, accurate and deterministic.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::matrix::Mat;

pub type CMat = Mat<Complex64>;

pub fn czero(rows: usize, cols: usize) -> CMat {
    Mat::from_fn(rows, cols, |_, _| Complex64::new(0.0, 0.0))
}

pub fn cident(n: usize) -> CMat {
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn adjoint(a: &CMat) -> CMat {
    Mat::from_fn(a.cols, a.rows, |i, j| a.at(j, i).conj())
}

pub fn frobenius(a: &CMat) -> f64 {
    let mut s = 0.0;
    for (_, _, v) in a.entries() {
        s += v.norm_sqr();
    }
    libm::sqrt(s)
}

/// Thin SVD by one-sided Jacobi on columns: returns (U, σ, V) with
/// A = U · diag(σ) · V^H, U m×n with orthonormal columns where σ > 0.
pub fn svd(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let m = a.rows;
    let n = a.cols;
    let mut w = a.clone();
    let mut v = cident(n);
    let col_dot = |w: &CMat, p: usize, q: usize| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..w.rows {
            s += w.at(i, p).conj() * w.at(i, q);
        }
        s
    };
    let scale = frobenius(a).max(1e-300);
    let tol = 1e-15 * scale * scale;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = col_dot(&w, p, q);
                if hpq.norm() <= tol {
                    continue;
                }
                off += hpq.norm();
                let hpp = col_dot(&w, p, p).re;
                let hqq = col_dot(&w, q, q).re;
                // Unitary 2×2 diagonalizing [[hpp, hpq],[h̄pq, hqq]].
                let phase = hpq / hpq.norm();
                let tau = (hqq - hpp) / (2.0 * hpq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                // Columns (p, q) ← (c·p − s·phase·q̄-part, …): apply the
                // rotation G with G[p][p] = c, G[p][q] = s·phase,
                // G[q][p] = −s·conj(phase), G[q][q] = c, to W and V.
                for i in 0..m {
                    let wp = *w.at(i, p);
                    let wq = *w.at(i, q);
                    *w.at_mut(i, p) = wp * c - wq * s * phase.conj();
                    *w.at_mut(i, q) = wp * s * phase + wq * c;
                }
                for i in 0..n {
                    let vp = *v.at(i, p);
                    let vq = *v.at(i, q);
                    *v.at_mut(i, p) = vp * c - vq * s * phase.conj();
                    *v.at_mut(i, q) = vp * s * phase + vq * c;
                }
            }
        }
        if off <= tol {
            break;
        }
    }
    let mut sigma = vec![0.0f64; n];
    let mut u = czero(m, n);
    for j in 0..n {
        let norm = libm::sqrt(col_dot(&w, j, j).re.max(0.0));
        sigma[j] = norm;
        if norm > 0.0 {
            for i in 0..m {
                *u.at_mut(i, j) = w.at(i, j) / norm;
            }
        }
    }
    // Descending singular values, permuting U and V together.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let su: CMat = Mat::from_fn(m, n, |i, j| *u.at(i, order[j]));
    let sv: CMat = Mat::from_fn(n, n, |i, j| *v.at(i, order[j]));
    let ss: Vec<f64> = order.iter().map(|&k| sigma[k]).collect();
    (su, ss, sv)
}

/// Moore–Penrose pseudoinverse with rank threshold τ = rcond · σ_max.
pub fn pinv(a: &CMat, rcond: f64) -> CMat {
    if a.rows == 0 || a.cols == 0 {
        return czero(a.cols, a.rows);
    }
    let (u, s, v) = svd(a);
    let smax = s.iter().cloned().fold(0.0f64, f64::max);
    let tol = rcond * smax;
    let mut out = czero(a.cols, a.rows);
    for k in 0..s.len() {
        if s[k] <= tol || s[k] == 0.0 {
            continue;
        }
        let inv = 1.0 / s[k];
        for i in 0..a.cols {
            for j in 0..a.rows {
                let add = *v.at(i, k) * inv * u.at(j, k).conj();
                *out.at_mut(i, j) += add;
            }
        }
    }
    out
}

pub fn matmulc(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.cols, b.rows);
    Mat::from_fn(a.rows, b.cols, |i, j| {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..a.cols {
            s += a.at(i, k) * b.at(k, j);
        }
        s
    })
}

pub fn max_abs(a: &CMat) -> f64 {
    a.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
}
