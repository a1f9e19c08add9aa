//! Gaussian rational scalars: the exact coefficient field ℚ(i).
//!
//! All exact computations in this crate run over ℚ(i). `num_rational`
//! keeps each component in reduced canonical form, so equality is
//! structural and hashing-free code can rely on `Ord`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of ℚ(i), stored as exact real and imaginary rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    /// The rational `n/d` as a real scalar.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(n), BigInt::from(d)),
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_ratio(n, 1)
    }

    /// `(a/b) + (c/d) i`.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(b != 0 && d != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(a), BigInt::from(b)),
            im: BigRational::new(BigInt::from(c), BigInt::from(d)),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|² = z z̄, a nonnegative rational (returned as a real scalar).
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero scalar");
        Scalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// Parses strings of the shape `a/b`, `a/b+c/d*i`, `i`, `-i`, `3i`, `-2/5i`.
    /// Used by the scenario file readers.
    pub fn parse(text: &str) -> Option<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        // Split into (real, imaginary) at a '+'/'-' that is not leading and
        // not part of an exponent-less rational (we have no exponents here).
        let bytes = s.as_bytes();
        let mut split = None;
        for k in 1..bytes.len() {
            if bytes[k] == b'+' || bytes[k] == b'-' {
                split = Some(k);
            }
        }
        let (re_str, im_str) = match split {
            Some(k) if s.contains('i') => (&s[..k], &s[k..]),
            _ => {
                if s.contains('i') {
                    ("0", &s[..])
                } else {
                    (&s[..], "0")
                }
            }
        };
        let re = parse_rational(re_str)?;
        let im = if im_str == "0" {
            BigRational::zero()
        } else {
            let t = im_str.strip_suffix('i')?;
            let t = t.strip_suffix('*').unwrap_or(t);
            match t {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                _ => parse_rational(t)?,
            }
        };
        Some(Scalar { re, im })
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a Scalar> for Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl<'a, 'b> Mul<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'b Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self = (&*self).mul(&rhs);
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs.inv())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return write!(f, "i");
            }
            if (-self.im.clone()).is_one() {
                return write!(f, "-i");
            }
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Sums a slice of complex values with a fixed pairwise tree in index order.
/// The result is independent of chunking decisions made by callers, which
/// keeps accumulated quadrature sums bitwise reproducible.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    match values.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Convenience: collects then pairwise-sums, for iterator producers.
pub fn pairwise_sum_iter<I: Iterator<Item = Complex64>>(iter: I) -> Complex64 {
    let values: Vec<Complex64> = iter.collect();
    pairwise_sum(&values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::from_parts(1, 2, -3, 4); // 1/2 - 3/4 i
        let b = Scalar::from_parts(2, 1, 1, 1); // 2 + i
        let prod = &a * &b;
        // (1/2 - 3/4 i)(2 + i) = 1 + 1/2 i - 3/2 i + 3/4 = 7/4 - i
        assert_eq!(prod, Scalar::from_parts(7, 4, -1, 1));
        let quot = prod.clone() / b.clone();
        assert_eq!(quot, a);
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn inverse_and_norm() {
        let z = Scalar::from_parts(3, 1, 4, 1);
        let w = z.inv();
        assert!((&z * &w).is_one());
        assert_eq!(z.norm_sq(), BigRational::from(BigInt::from(25)));
    }

    #[test]
    fn parse_round_trips() {
        for text in ["1/2", "-3", "i", "-i", "2i", "1/2+1/3i", "-1/2-i", "3-2i"] {
            let s = Scalar::parse(text).unwrap();
            let reparsed = Scalar::parse(&alloc::format!("{}", s)).unwrap();
            assert_eq!(s, reparsed, "{}", text);
        }
        assert_eq!(Scalar::parse("1/0"), None);
    }
}
