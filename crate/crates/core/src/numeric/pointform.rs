//! Pointwise (0,•)-form-valued matrices: a map from dz̄-masks to complex
//! matrices, with graded products. The numeric counterpart of one block of
//! a symbol-valued cochain, evaluated at a sample point.

use alloc::collections::BTreeMap;

use num_complex::Complex64;

use super::svd::{czero, matmulc, CMat};

/// Sign of merging two ascending odd monomials given as bitmasks; `None`
/// when they share a generator.
pub fn wedge_sign(m1: u8, m2: u8) -> Option<f64> {
    if m1 & m2 != 0 {
        return None;
    }
    let mut crossings = 0u32;
    let mut rest = m2;
    while rest != 0 {
        let b = rest.trailing_zeros();
        crossings += (m1 >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if crossings % 2 == 0 { 1.0 } else { -1.0 })
}

/// Scalar-valued form at a point: dz̄-mask → coefficient.
pub type FormScalar = BTreeMap<u8, Complex64>;

pub fn fs_mul(a: &FormScalar, b: &FormScalar) -> FormScalar {
    let mut out = FormScalar::new();
    for (&m1, &c1) in a {
        for (&m2, &c2) in b {
            if let Some(s) = wedge_sign(m1, m2) {
                *out.entry(m1 | m2).or_insert(Complex64::new(0.0, 0.0)) += c1 * c2 * s;
            }
        }
    }
    out
}

pub fn fs_scale(a: &FormScalar, c: Complex64) -> FormScalar {
    a.iter().map(|(&m, &v)| (m, v * c)).collect()
}

pub fn fs_add(a: &FormScalar, b: &FormScalar) -> FormScalar {
    let mut out = a.clone();
    for (&m, &v) in b {
        *out.entry(m).or_insert(Complex64::new(0.0, 0.0)) += v;
    }
    out
}

/// Matrix-valued form at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMat {
    pub rows: usize,
    pub cols: usize,
    pub parts: BTreeMap<u8, CMat>,
}

impl FormMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FormMat {
            rows,
            cols,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_matrix(m: CMat) -> Self {
        let (rows, cols) = (m.rows, m.cols);
        let mut parts = BTreeMap::new();
        if m.entries().any(|(_, _, v)| v.norm() != 0.0) {
            parts.insert(0u8, m);
        }
        FormMat { rows, cols, parts }
    }

    pub fn identity(n: usize) -> Self {
        FormMat::from_matrix(super::svd::cident(n))
    }

    pub fn part(&self, mask: u8) -> CMat {
        self.parts
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| czero(self.rows, self.cols))
    }

    pub fn set_part(&mut self, mask: u8, m: CMat) {
        assert!(m.rows == self.rows && m.cols == self.cols);
        if m.entries().all(|(_, _, v)| v.norm() == 0.0) {
            self.parts.remove(&mask);
        } else {
            self.parts.insert(mask, m);
        }
    }

    pub fn add(&self, o: &FormMat) -> FormMat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let mut out = self.clone();
        for (&m, mat) in &o.parts {
            let sum = match out.parts.get(&m) {
                Some(existing) => &(existing.clone()) + mat,
                None => mat.clone(),
            };
            out.set_part(m, sum);
        }
        out
    }

    pub fn neg(&self) -> FormMat {
        FormMat {
            rows: self.rows,
            cols: self.cols,
            parts: self.parts.iter().map(|(&m, mat)| (m, -mat)).collect(),
        }
    }

    pub fn sub(&self, o: &FormMat) -> FormMat {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Complex64) -> FormMat {
        FormMat {
            rows: self.rows,
            cols: self.cols,
            parts: self
                .parts
                .iter()
                .map(|(&m, mat)| (m, mat.map(|v| v * c)))
                .collect(),
        }
    }

    /// s ∧ self (the scalar form multiplies from the left).
    pub fn scale_form(&self, s: &FormScalar) -> FormMat {
        let mut out = FormMat::zero(self.rows, self.cols);
        for (&m1, &c) in s {
            for (&m2, mat) in &self.parts {
                if let Some(sign) = wedge_sign(m1, m2) {
                    let scaled = mat.map(|v| v * c * sign);
                    let merged = match out.parts.get(&(m1 | m2)) {
                        Some(e) => &(e.clone()) + &scaled,
                        None => scaled,
                    };
                    out.set_part(m1 | m2, merged);
                }
            }
        }
        out
    }

    /// self ∧ s (the scalar form multiplies from the right).
    pub fn scale_form_right(&self, s: &FormScalar) -> FormMat {
        let mut out = FormMat::zero(self.rows, self.cols);
        for (&m2, &c) in s {
            for (&m1, mat) in &self.parts {
                if let Some(sign) = wedge_sign(m1, m2) {
                    let scaled = mat.map(|v| v * c * sign);
                    let merged = match out.parts.get(&(m1 | m2)) {
                        Some(e) => &(e.clone()) + &scaled,
                        None => scaled,
                    };
                    out.set_part(m1 | m2, merged);
                }
            }
        }
        out
    }

    /// Graded matrix product: wedge on masks, compose matrices.
    pub fn matmul(&self, o: &FormMat) -> FormMat {
        assert_eq!(self.cols, o.rows);
        let mut out = FormMat::zero(self.rows, o.cols);
        for (&m1, a) in &self.parts {
            for (&m2, b) in &o.parts {
                if let Some(sign) = wedge_sign(m1, m2) {
                    let prod = matmulc(a, b).map(|v| v * sign);
                    let merged = match out.parts.get(&(m1 | m2)) {
                        Some(e) => &(e.clone()) + &prod,
                        None => prod,
                    };
                    out.set_part(m1 | m2, merged);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.parts
            .values()
            .map(super::svd::max_abs)
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Highest form degree present.
    pub fn top_degree(&self) -> u32 {
        self.parts.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_sign(0b01, 0b10), Some(1.0));
        assert_eq!(wedge_sign(0b10, 0b01), Some(-1.0));
        assert_eq!(wedge_sign(0b01, 0b01), None);
        assert_eq!(wedge_sign(0b11, 0b100), Some(1.0));
        assert_eq!(wedge_sign(0b100, 0b011), Some(1.0));
        assert_eq!(wedge_sign(0b010, 0b101), Some(-1.0));
    }

    #[test]
    fn graded_product_anticommutes() {
        let one = Complex64::new(1.0, 0.0);
        let mut a = FormMat::zero(1, 1);
        a.set_part(0b01, Mat::from_rows(alloc::vec![alloc::vec![one]]));
        let mut b = FormMat::zero(1, 1);
        b.set_part(0b10, Mat::from_rows(alloc::vec![alloc::vec![one]]));
        let ab = a.matmul(&b);
        let ba = b.matmul(&a);
        assert_eq!(ab.part(0b11).at(0, 0), &one);
        assert_eq!(ba.part(0b11).at(0, 0), &(-one));
        assert!(a.matmul(&a).is_zero());
    }

    use crate::matrix::Mat;
}
