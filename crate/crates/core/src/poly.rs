//! Sparse multivariate (Laurent) polynomials over ℚ(i).
//!
//! Exponents are signed: negative exponents realize Laurent windows on
//! punctured charts (P¹ overlaps). Plain polynomial callers (Gröbner,
//! syzygies) require all exponents nonnegative and assert so.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::matrix::Mat;
use crate::scalar::Scalar;

/// Exponent vector. Length equals the ambient variable count.
pub type Mono = Vec<i64>;

/// A sparse polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Mono, Scalar>,
}

pub type PolyMatrix = Mat<Poly>;

impl Poly {
    pub fn zero_in(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Poly::zero_in(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one_in(nvars: usize) -> Self {
        Poly::constant(nvars, Scalar::one())
    }

    /// The monomial `c · x^e`.
    pub fn term(nvars: usize, e: Mono, c: Scalar) -> Self {
        assert_eq!(e.len(), nvars);
        let mut p = Poly::zero_in(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0i64; nvars];
        e[i] = 1;
        Poly::term(nvars, e, Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// True if some exponent is negative.
    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    pub fn add_term(&mut self, e: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if self.nvars == 0 && self.terms.is_empty() && !e.is_empty() {
            // A detached zero (from the generic `Zero` impl) adopts the
            // ambient variable count on first use.
            self.nvars = e.len();
        }
        debug_assert_eq!(e.len(), self.nvars);
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero_in(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplication by a single term `c · x^e`.
    pub fn mul_term(&self, e: &[i64], c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero_in(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    let mut m2 = m.clone();
                    for (a, b) in m2.iter_mut().zip(e) {
                        *a += b;
                    }
                    (m2, v * c)
                })
                .collect(),
        }
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero_in(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * &Scalar::from_int(e[i]));
        }
        out
    }

    /// Replaces `x_i` by `x_i^{-1}`. Used to express sections on an inverted
    /// chart in that chart's own polynomial ring.
    pub fn flip_var(&self, i: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[i] = -e2[i];
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Per-variable minimum exponent over all terms (0 for zero polynomial).
    pub fn min_exponent(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    pub fn max_exponent(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        if self.terms.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        assert_eq!(point.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for (z, &k) in point.iter().zip(e.iter()) {
                t *= z.powi(k as i32);
            }
            acc += t;
        }
        acc
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, point: &[Scalar]) -> Scalar {
        if self.terms.is_empty() {
            return Scalar::zero();
        }
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (z, &k) in point.iter().zip(e.iter()) {
                if k >= 0 {
                    for _ in 0..k {
                        t = &t * z;
                    }
                } else {
                    let zi = z.inv();
                    for _ in 0..(-k) {
                        t = &t * &zi;
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// Parses expressions like `z1^2*z2 - 1/2*z2 + 3i`, `(1+i)*z^2`, `z^-1 - w`.
    /// `vars` gives the variable names in index order.
    pub fn parse(text: &str, vars: &[&str]) -> Option<Poly> {
        let nvars = vars.len();
        let mut out = Poly::zero_in(nvars);
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        // Split on top-level + and - (no parentheses except around coefficients).
        let mut pieces: Vec<String> = Vec::new();
        let mut cur = String::new();
        let mut depth = 0usize;
        for (k, ch) in s.char_indices() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.checked_sub(1)?;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 && k > 0 && !matches!(s.as_bytes()[k - 1], b'^' | b'*') => {
                    pieces.push(core::mem::take(&mut cur));
                    if ch == '-' {
                        cur.push('-');
                    }
                }
                _ => cur.push(ch),
            }
        }
        pieces.push(cur);
        for piece in pieces {
            if piece.is_empty() || piece == "-" {
                return None;
            }
            let mut coeff = Scalar::one();
            let mut exps = vec![0i64; nvars];
            let mut rest = piece.as_str();
            if let Some(r) = rest.strip_prefix('-') {
                coeff = -coeff;
                rest = r;
            }
            for factor in rest.split('*') {
                if factor.is_empty() {
                    return None;
                }
                let f = factor.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(factor);
                let (base, exp) = match f.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i64>().ok()?),
                    None => (f, 1),
                };
                if let Some(idx) = vars.iter().position(|v| *v == base) {
                    exps[idx] += exp;
                } else {
                    // a coefficient factor; '^' on coefficients unsupported
                    if exp != 1 {
                        return None;
                    }
                    coeff = &coeff * &Scalar::parse(base)?;
                }
            }
            out.add_term(exps, coeff);
        }
        Some(out)
    }

    pub fn display<'a>(&'a self, vars: &'a [&'a str]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, vars }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    vars: &'a [&'a str],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.poly.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = e.iter().all(|&x| x == 0);
            if is_const || !c.is_one() {
                write!(f, "({})", c)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut started = false;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if started {
                    write!(f, "*")?;
                }
                started = true;
                let name = self.vars.get(i).copied().unwrap_or("?");
                if k == 1 {
                    write!(f, "{}", name)?;
                } else {
                    write!(f, "{}^{}", name, k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| alloc::format!("x{}", i)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.display(&refs))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        if self.terms.is_empty() && self.nvars == 0 {
            return rhs;
        }
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        if self.terms.is_empty() && self.nvars == 0 {
            *self = rhs;
            return;
        }
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        (&self).mul(&rhs)
    }
}

impl<'a, 'b> Mul<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero_in(self.nvars.max(rhs.nvars));
        }
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero_in(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Mono = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        // The ambient variable count is contextual; a detached zero uses 0
        // and coerces on first addition.
        Poly::zero_in(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one_in(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_parse() {
        let vars = ["z1", "z2"];
        let p = Poly::parse("z1^2 + z2^2", &vars).unwrap();
        let q = Poly::parse("z1*z2", &vars).unwrap();
        let prod = &p * &q;
        assert_eq!(prod, Poly::parse("z1^3*z2 + z1*z2^3", &vars).unwrap());
        let s = Poly::parse("(1/2)*z1 - (1/2)*z1", &vars).unwrap();
        assert!(s.is_zero());
        let c = Poly::parse("(2-3i)", &vars).unwrap();
        assert_eq!(c.as_constant(), Some(Scalar::from_parts(2, 1, -3, 1)));
    }

    #[test]
    fn laurent_and_flip() {
        let vars = ["z"];
        let p = Poly::parse("z^-1 - 1/2", &vars).unwrap();
        assert!(p.is_laurent());
        let q = p.flip_var(0);
        assert_eq!(q, Poly::parse("z - 1/2", &vars).unwrap());
        assert_eq!(p.min_exponent(0), -1);
    }

    #[test]
    fn derivative_matches_hand_value() {
        let vars = ["z"];
        let p = Poly::parse("z^3 + 2*z^-1", &vars).unwrap();
        let d = p.derivative(0);
        assert_eq!(d, Poly::parse("3*z^2 - 2*z^-2", &vars).unwrap());
    }

    #[test]
    fn eval_complex() {
        let vars = ["z1", "z2"];
        let p = Poly::parse("z1^2*z2 - i", &vars).unwrap();
        let v = p.eval(&[Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)]);
        assert!((v - Complex64::new(-2.0, -1.0)).norm() < 1e-14);
    }
}
