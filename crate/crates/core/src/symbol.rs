//! The formal algebra housing partition-of-unity data: even symbols ρ_α,
//! odd symbols θ_α = ∂̄ρ_α, antiholomorphic cotangents dz̄_i, and
//! coefficients that are Laurent polynomials in z, z̄.
//!
//! Relations, applied per tuple context: symbols of charts that miss the
//! context vanish; on the remaining active set A, Σ_{α∈A} ρ_α = 1 and
//! Σ_{α∈A} θ_α = 0, eliminated by substituting the largest active chart.
//! The result is a free (super)commutative algebra on the surviving
//! generators, so normal forms are canonical and zero-tests are exact.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::nerve::{ChartId, Nerve};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Monomial part of a form term: odd generators as a bitmask (bits
/// `0..ncharts` are θ_α, bits `ncharts..ncharts+ndims` are dz̄_i, ascending
/// product order), plus ρ exponents per chart.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FormKey {
    pub odd: u64,
    pub rho: Vec<u16>,
}

impl FormKey {
    fn unit(ncharts: usize) -> Self {
        FormKey {
            odd: 0,
            rho: vec![0; ncharts],
        }
    }

    pub fn odd_degree(&self) -> u32 {
        self.odd.count_ones()
    }
}

/// An element of the symbol algebra. The coefficient ring is ℚ(i)[z±, z̄±]
/// with variables `0..ndims` holomorphic and `ndims..2·ndims` their
/// conjugates.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Form {
    pub ncharts: usize,
    pub ndims: usize,
    pub terms: BTreeMap<FormKey, Poly>,
}

fn crossings_below(mask: u64, pos: u32) -> u32 {
    (mask & ((1u64 << pos) - 1)).count_ones()
}

fn crossings_above(mask: u64, pos: u32) -> u32 {
    (mask >> (pos + 1)).count_ones()
}

impl Form {
    pub fn zero(ncharts: usize, ndims: usize) -> Self {
        Form {
            ncharts,
            ndims,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ncharts: usize, ndims: usize) -> Self {
        Form::from_coeff(ncharts, ndims, Poly::one_in(2 * ndims))
    }

    /// Scalar-function coefficient (Poly in 2·ndims variables z, z̄).
    pub fn from_coeff(ncharts: usize, ndims: usize, c: Poly) -> Self {
        assert_eq!(c.nvars, 2 * ndims);
        let mut f = Form::zero(ncharts, ndims);
        if !c.is_zero() {
            f.terms.insert(FormKey::unit(ncharts), c);
        }
        f
    }

    /// Embeds a holomorphic polynomial in `ndims` variables.
    pub fn from_holomorphic(ncharts: usize, ndims: usize, p: &Poly) -> Self {
        assert_eq!(p.nvars, ndims);
        let mut c = Poly::zero_in(2 * ndims);
        for (e, coef) in &p.terms {
            let mut e2 = e.clone();
            e2.extend(core::iter::repeat(0).take(ndims));
            c.add_term(e2, coef.clone());
        }
        Form::from_coeff(ncharts, ndims, c)
    }

    pub fn constant(ncharts: usize, ndims: usize, c: Scalar) -> Self {
        Form::from_coeff(ncharts, ndims, Poly::constant(2 * ndims, c))
    }

    pub fn rho(ncharts: usize, ndims: usize, alpha: ChartId) -> Self {
        assert!(alpha < ncharts);
        let mut key = FormKey::unit(ncharts);
        key.rho[alpha] = 1;
        let mut f = Form::zero(ncharts, ndims);
        f.terms.insert(key, Poly::one_in(2 * ndims));
        f
    }

    pub fn theta(ncharts: usize, ndims: usize, alpha: ChartId) -> Self {
        assert!(alpha < ncharts);
        let mut key = FormKey::unit(ncharts);
        key.odd = 1u64 << alpha;
        let mut f = Form::zero(ncharts, ndims);
        f.terms.insert(key, Poly::one_in(2 * ndims));
        f
    }

    pub fn dzbar(ncharts: usize, ndims: usize, i: usize) -> Self {
        assert!(i < ndims);
        let mut key = FormKey::unit(ncharts);
        key.odd = 1u64 << (ncharts as u32 + i as u32);
        let mut f = Form::zero(ncharts, ndims);
        f.terms.insert(key, Poly::one_in(2 * ndims));
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Odd degree if homogeneous, else `None`. The zero form is degree `d`
    /// for every `d`, reported as `Some(0)`.
    pub fn odd_degree(&self) -> Option<u32> {
        let mut deg = None;
        for k in self.terms.keys() {
            match deg {
                None => deg = Some(k.odd_degree()),
                Some(d) if d == k.odd_degree() => {}
                _ => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Purely holomorphic: no symbols, no z̄ dependence.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.iter().all(|(k, c)| {
            k.odd == 0
                && k.rho.iter().all(|&e| e == 0)
                && c.terms.keys().all(|e| e[self.ndims..].iter().all(|&x| x == 0))
        })
    }

    /// Extracts the holomorphic polynomial if `is_holomorphic`.
    pub fn to_holomorphic(&self) -> Option<Poly> {
        if !self.is_holomorphic() {
            return None;
        }
        let mut p = Poly::zero_in(self.ndims);
        for c in self.terms.values() {
            for (e, coef) in &c.terms {
                p.add_term(e[..self.ndims].to_vec(), coef.clone());
            }
        }
        Some(p)
    }

    fn add_part(&mut self, key: FormKey, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &Form) -> Form {
        if self.is_zero() {
            return other.clone();
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_part(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Form {
        Form {
            ncharts: self.ncharts,
            ndims: self.ndims,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero(self.ncharts, self.ndims);
        }
        Form {
            ncharts: self.ncharts,
            ndims: self.ndims,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.scale(s)))
                .collect(),
        }
    }

    /// Graded product. Odd generators anticommute; the coefficient ring is
    /// central. Signs come from sorting the concatenated odd monomial.
    pub fn mul(&self, other: &Form) -> Form {
        if self.is_zero() || other.is_zero() {
            return Form::zero(
                self.ncharts.max(other.ncharts),
                self.ndims.max(other.ndims),
            );
        }
        assert_eq!(self.ncharts, other.ncharts);
        assert_eq!(self.ndims, other.ndims);
        let mut out = Form::zero(self.ncharts, self.ndims);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                if k1.odd & k2.odd != 0 {
                    continue;
                }
                let mut crossings = 0u32;
                let mut m2 = k2.odd;
                while m2 != 0 {
                    let b = m2.trailing_zeros();
                    crossings += crossings_above(k1.odd, b);
                    m2 &= m2 - 1;
                }
                let mut key = FormKey {
                    odd: k1.odd | k2.odd,
                    rho: k1.rho.clone(),
                };
                for (a, b) in key.rho.iter_mut().zip(&k2.rho) {
                    *a += b;
                }
                let mut c = c1 * c2;
                if crossings % 2 == 1 {
                    c = -c;
                }
                out.add_part(key, c);
            }
        }
        out
    }

    /// Formal ∂̄: ρ_α ↦ θ_α, θ_α ↦ 0, dz̄ ↦ 0, coefficients differentiated
    /// in the z̄ variables with a dz̄_i attached. Odd antiderivation of
    /// degree +1; ∂̄∘∂̄ = 0.
    pub fn dbar(&self) -> Form {
        let n = self.ndims;
        let mut out = Form::zero(self.ncharts, n);
        for (key, c) in &self.terms {
            // ρ-part: Σ_α e_α ρ^{e−1_α} θ_α ∧ (odd monomial) · c
            for alpha in 0..self.ncharts {
                let e = key.rho[alpha];
                if e == 0 {
                    continue;
                }
                let bit = 1u64 << alpha;
                if key.odd & bit != 0 {
                    continue; // θ_α ∧ θ_α = 0
                }
                let mut k2 = key.clone();
                k2.rho[alpha] -= 1;
                k2.odd |= bit;
                let sign = crossings_below(key.odd, alpha as u32) % 2 == 1;
                let coef = c.scale(&Scalar::from_int(e as i64));
                out.add_part(k2, if sign { -coef } else { coef });
            }
            // z̄-part: (−1)^{|odd|} (odd ∧ dz̄_i) ∂c/∂z̄_i
            for i in 0..n {
                let dc = c.derivative(n + i);
                if dc.is_zero() {
                    continue;
                }
                let pos = (self.ncharts + i) as u32;
                let bit = 1u64 << pos;
                if key.odd & bit != 0 {
                    continue;
                }
                let mut k2 = key.clone();
                k2.odd |= bit;
                let parity =
                    (key.odd_degree() + crossings_above(key.odd, pos)) % 2 == 1;
                out.add_part(k2, if parity { -dc } else { dc });
            }
        }
        out
    }

    /// Normal form in the given tuple context: symbols of charts outside
    /// the active set vanish, and the largest active chart's ρ and θ are
    /// eliminated through Σρ = 1 and Σθ = 0.
    pub fn normalize(&self, nerve: &Nerve, context_mask: usize) -> Form {
        let active = nerve.active_charts(context_mask);
        let last = *active.last().expect("admissible context has active charts");
        let is_active = |a: usize| active.contains(&a);

        let mut cur = Form::zero(self.ncharts, self.ndims);
        'term: for (key, c) in &self.terms {
            for alpha in 0..self.ncharts {
                let has =
                    key.rho[alpha] > 0 || key.odd & (1u64 << alpha) != 0;
                if has && !is_active(alpha) {
                    continue 'term; // supported away from the context
                }
            }
            cur.add_part(key.clone(), c.clone());
        }

        // Eliminate ρ_last one factor at a time.
        loop {
            let Some((key, c)) = cur
                .terms
                .iter()
                .find(|(k, _)| k.rho[last] > 0)
                .map(|(k, c)| (k.clone(), c.clone()))
            else {
                break;
            };
            cur.terms.remove(&key);
            let mut base = key.clone();
            base.rho[last] -= 1;
            // ρ_last = 1 − Σ_{α active, α ≠ last} ρ_α
            cur.add_part(base.clone(), c.clone());
            for &alpha in &active {
                if alpha == last {
                    continue;
                }
                let mut k2 = base.clone();
                k2.rho[alpha] += 1;
                cur.add_part(k2, -c.clone());
            }
        }

        // Eliminate θ_last in one pass.
        let theta_terms: Vec<(FormKey, Poly)> = cur
            .terms
            .iter()
            .filter(|(k, _)| k.odd & (1u64 << last) != 0)
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        for (key, c) in theta_terms {
            cur.terms.remove(&key);
            let removal_sign = crossings_below(key.odd, last as u32) % 2 == 1;
            let mut stripped = key.clone();
            stripped.odd &= !(1u64 << last);
            for &alpha in &active {
                if alpha == last {
                    continue;
                }
                let bit = 1u64 << alpha;
                if stripped.odd & bit != 0 {
                    continue;
                }
                let insert_sign = crossings_below(stripped.odd, alpha as u32) % 2 == 1;
                let mut k2 = stripped.clone();
                k2.odd |= bit;
                // M = (−1)^r θ_L M′, θ_L = −Σθ_α, θ_α M′ = (−1)^s (M′∪α):
                // net sign (−1)^{r+s+1}.
                let neg = removal_sign == insert_sign;
                let coef = if neg { -c.clone() } else { c.clone() };
                cur.add_part(k2, coef);
            }
        }
        cur
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for i in 0..self.ndims {
            if self.ndims == 1 {
                names.push(String::from("z"));
            } else {
                names.push(alloc::format!("z{}", i + 1));
            }
        }
        for i in 0..self.ndims {
            if self.ndims == 1 {
                names.push(String::from("zbar"));
            } else {
                names.push(alloc::format!("zbar{}", i + 1));
            }
        }
        names
    }
}

impl core::ops::Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        Form::add(&self, &rhs)
    }
}

impl core::ops::Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        Form::sub(&self, &rhs)
    }
}

impl core::ops::Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form::neg(&self)
    }
}

impl<'a, 'b> core::ops::Mul<&'b Form> for &'a Form {
    type Output = Form;
    fn mul(self, rhs: &'b Form) -> Form {
        Form::mul(self, rhs)
    }
}

impl Zero for Form {
    fn zero() -> Self {
        Form::zero(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = self.var_names();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c.display(&refs))?;
            for (alpha, &e) in key.rho.iter().enumerate() {
                if e == 1 {
                    write!(f, " * rho[{}]", alpha)?;
                } else if e > 1 {
                    write!(f, " * rho[{}]^{}", alpha, e)?;
                }
            }
            let mut m = key.odd;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                if b < self.ncharts {
                    write!(f, " * theta[{}]", b)?;
                } else {
                    write!(f, " * dzbar[{}]", b - self.ncharts)?;
                }
                m &= m - 1;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses the cochain literal term syntax, e.g.
/// `1/2 * z^2 * zbar^-1 * rho[0] * theta[1] * dzbar[0] - i * z`.
pub fn parse_form(text: &str, ncharts: usize, ndims: usize) -> Option<Form> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
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

    let names = Form::zero(ncharts, ndims).var_names();
    let mut total = Form::zero(ncharts, ndims);
    for piece in pieces {
        let mut rest = piece.as_str();
        let mut acc = Form::one(ncharts, ndims);
        if let Some(r) = rest.strip_prefix('-') {
            acc = acc.neg();
            rest = r;
        }
        if rest.is_empty() {
            return None;
        }
        // Split into factors at depth-0 '*' only; coefficients may be full
        // parenthesized polynomials containing '*' and '+'.
        let mut factors: Vec<String> = Vec::new();
        let mut buf = String::new();
        let mut d = 0usize;
        for ch in rest.chars() {
            match ch {
                '(' => {
                    d += 1;
                    buf.push(ch);
                }
                ')' => {
                    d = d.checked_sub(1)?;
                    buf.push(ch);
                }
                '*' if d == 0 => factors.push(core::mem::take(&mut buf)),
                _ => buf.push(ch),
            }
        }
        factors.push(buf);
        for factor in factors.iter().map(|s| s.as_str()) {
            if factor.is_empty() {
                return None;
            }
            let paren = factor.strip_prefix('(').and_then(|x| x.strip_suffix(')'));
            let (base, exp) = match paren {
                // Parenthesized coefficient: no exponent syntax on it.
                Some(inner) => (inner, 1),
                None => match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<i64>().ok()?),
                    None => (factor, 1),
                },
            };
            let g = if let Some(idx) = base.strip_prefix("rho[").and_then(|x| x.strip_suffix(']')) {
                let alpha: usize = idx.parse().ok()?;
                if alpha >= ncharts || exp < 0 {
                    return None;
                }
                let mut g = Form::one(ncharts, ndims);
                for _ in 0..exp {
                    g = g.mul(&Form::rho(ncharts, ndims, alpha));
                }
                g
            } else if let Some(idx) = base.strip_prefix("theta[").and_then(|x| x.strip_suffix(']'))
            {
                if exp != 1 {
                    return None;
                }
                Form::theta(ncharts, ndims, idx.parse().ok()?)
            } else if let Some(idx) = base.strip_prefix("dzbar[").and_then(|x| x.strip_suffix(']'))
            {
                if exp != 1 {
                    return None;
                }
                Form::dzbar(ncharts, ndims, idx.parse().ok()?)
            } else if let Some(vi) = names.iter().position(|n| n == base) {
                let mut e = vec![0i64; 2 * ndims];
                e[vi] = exp;
                Form::from_coeff(ncharts, ndims, Poly::term(2 * ndims, e, Scalar::one()))
            } else if let Some(c) = Scalar::parse(base) {
                if exp != 1 {
                    return None;
                }
                Form::constant(ncharts, ndims, c)
            } else {
                if exp != 1 {
                    return None;
                }
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                Form::from_coeff(ncharts, ndims, Poly::parse(base, &refs)?)
            };
            acc = acc.mul(&g);
        }
        total = total.add(&acc);
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str, ncharts: usize, ndims: usize) -> Form {
        parse_form(s, ncharts, ndims).unwrap()
    }

    #[test]
    fn theta_anticommute() {
        let t0 = Form::theta(3, 1, 0);
        let t1 = Form::theta(3, 1, 1);
        let a = t0.mul(&t1);
        let b = t1.mul(&t0);
        assert_eq!(a, b.neg());
        assert!(t0.mul(&t0).is_zero());
    }

    #[test]
    fn dbar_rho_is_theta_and_squares_to_zero() {
        let rho = Form::rho(2, 1, 0);
        assert_eq!(rho.dbar(), Form::theta(2, 1, 0));
        let f = form("rho[0]^2 * rho[1] * zbar^2 + z*zbar - rho[1]*theta[0]", 2, 1);
        assert!(f.dbar().dbar().is_zero());
        let g = form("rho[0]*rho[1]^3*zbar*theta[1] + zbar^3*dzbar[0]", 2, 1);
        assert!(g.dbar().dbar().is_zero());
    }

    #[test]
    fn dbar_leibniz() {
        // ∂̄(fg) = (∂̄f)g + (−1)^{deg f} f(∂̄g) for homogeneous f.
        let f = form("rho[0]*theta[1]*zbar", 3, 1); // odd degree 1
        let g = form("rho[2]^2*zbar^2 + rho[1]", 3, 1); // even
        let lhs = f.mul(&g).dbar();
        let rhs = f.dbar().mul(&g).add(&f.mul(&g.dbar()).neg());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn normalize_single_chart() {
        let nerve = Nerve::complete(1);
        let f = form("rho[0]^2 * z", 1, 1);
        let nf = f.normalize(&nerve, 0b1);
        assert_eq!(nf, form("z", 1, 1));
        assert!(Form::theta(1, 1, 0).normalize(&nerve, 0b1).is_zero());
    }

    #[test]
    fn normalize_two_charts_collapses_cocycle_image() {
        // θ₀ρ₁(1/z) + θ₁ρ₀(−1/z) = θ₀(1/z) once ρ₁ = 1−ρ₀ and θ₁ = −θ₀.
        let nerve = Nerve::complete(2);
        let f = form("theta[0]*rho[1]*z^-1 - theta[1]*rho[0]*z^-1", 2, 1);
        let nf = f.normalize(&nerve, 0b11);
        assert_eq!(nf, form("theta[0]*z^-1", 2, 1));
    }

    #[test]
    fn normalize_drops_disjoint_charts() {
        // Chart 2 does not meet chart 0, so ρ₂-terms vanish on (0).
        let nerve = Nerve::from_maximal_sets(3, &[vec![0, 1], vec![1, 2]]);
        let f = form("rho[2]*z + rho[1]", 3, 1);
        let nf = f.normalize(&nerve, 0b001);
        // Active on (0) is {0,1}; ρ₁ = 1 − ρ₀ there.
        assert_eq!(nf, form("1 - rho[0]", 3, 1));
    }

    #[test]
    fn normalize_partition_sums_to_one() {
        let nerve = Nerve::complete(3);
        let sum = Form::rho(3, 1, 0)
            .add(&Form::rho(3, 1, 1))
            .add(&Form::rho(3, 1, 2));
        let nf = sum.normalize(&nerve, 0b111);
        assert_eq!(nf, Form::one(3, 1));
        let tsum = Form::theta(3, 1, 0)
            .add(&Form::theta(3, 1, 1))
            .add(&Form::theta(3, 1, 2));
        assert!(tsum.normalize(&nerve, 0b111).is_zero());
    }

    #[test]
    fn normalize_is_idempotent_and_order_independent() {
        let nerve = Nerve::complete(3);
        let f = form(
            "rho[2]^2*theta[1]*zbar + rho[0]*rho[2]*theta[2] - theta[0]*theta[1]*z",
            3,
            1,
        );
        let n1 = f.normalize(&nerve, 0b111);
        assert_eq!(n1, n1.normalize(&nerve, 0b111));
        // Assemble the same element in a different order of additions.
        let pieces = [
            form("rho[2]^2*theta[1]*zbar", 3, 1),
            form("rho[0]*rho[2]*theta[2]", 3, 1),
            form("-theta[0]*theta[1]*z", 3, 1),
        ];
        let g = pieces[2].add(&pieces[0]).add(&pieces[1]);
        assert_eq!(g.normalize(&nerve, 0b111), n1);
    }

    #[test]
    fn display_parse_round_trip() {
        let f = form("(1/2+i)*z^2*zbar^-1*rho[0]*theta[1] - rho[1]^2", 2, 1);
        let text = alloc::format!("{}", f);
        let g = parse_form(&text, 2, 1).unwrap();
        assert_eq!(f, g);
    }
}
