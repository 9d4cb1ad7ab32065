//! Ground-field abstraction: exact rationals for certificates, complex
//! floats for eigenvector work. Every algorithm in this crate is generic
//! over [`Field`] so the two backends share one code path.

pub mod unipoly;
pub mod roots;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// Comparison tolerance for the approximate backend. Used only for
/// equality-to-zero tests; residual checks carry their own tolerances.
pub const APPROX_EPS: f64 = 1e-9;

/// A field with enough structure for dense linear algebra, polynomial
/// arithmetic and (approximate) root finding.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Sized
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and equality is decidable.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_fraction(num: i64, den: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }
    /// Multiplicative inverse; `None` for zero.
    fn recip(&self) -> Option<Self>;

    /// Best-effort magnitude, used for pivoting and residual norms.
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    /// Injection of an approximate complex value; `None` in exact backends.
    fn from_c64(z: Complex64) -> Option<Self>;
}

/// Exact rational scalar (arbitrary-precision numerator/denominator).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(v: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    /// Parses "p", "-p" or "p/q".
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let num: BigInt = p.trim().parse().ok()?;
                let den: BigInt = q.trim().parse().ok()?;
                if den.is_zero() {
                    return None;
                }
                Some(Rat(BigRational::new(num, den)))
            }
            None => {
                let num: BigInt = t.parse().ok()?;
                Some(Rat(BigRational::from_integer(num)))
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, o: Rat) -> Rat {
        Rat(self.0 + o.0)
    }
}
impl Sub for Rat {
    type Output = Rat;
    fn sub(self, o: Rat) -> Rat {
        Rat(self.0 - o.0)
    }
}
impl Mul for Rat {
    type Output = Rat;
    fn mul(self, o: Rat) -> Rat {
        Rat(self.0 * o.0)
    }
}
impl Div for Rat {
    type Output = Rat;
    fn div(self, o: Rat) -> Rat {
        Rat(self.0 / o.0)
    }
}
impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Field for Rat {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        Rat::int(v)
    }
    fn from_fraction(num: i64, den: i64) -> Self {
        Rat::new(num, den)
    }
    fn from_rational(r: &BigRational) -> Self {
        Rat(r.clone())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn recip(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }
    fn magnitude(&self) -> f64 {
        self.0.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.0.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_c64(_z: Complex64) -> Option<Self> {
        None
    }
}

/// Approximate complex scalar with tolerance-based zero tests.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Cx(pub Complex64);

impl Cx {
    pub fn new(re: f64, im: f64) -> Self {
        Cx(Complex64::new(re, im))
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}{:+}i", self.0.re, self.0.im)
        }
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, o: Cx) -> Cx {
        Cx(self.0 + o.0)
    }
}
impl Sub for Cx {
    type Output = Cx;
    fn sub(self, o: Cx) -> Cx {
        Cx(self.0 - o.0)
    }
}
impl Mul for Cx {
    type Output = Cx;
    fn mul(self, o: Cx) -> Cx {
        Cx(self.0 * o.0)
    }
}
impl Div for Cx {
    type Output = Cx;
    fn div(self, o: Cx) -> Cx {
        Cx(self.0 / o.0)
    }
}
impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx(-self.0)
    }
}

impl Field for Cx {
    const EXACT: bool = false;

    fn zero() -> Self {
        Cx(Complex64::new(0.0, 0.0))
    }
    fn one() -> Self {
        Cx(Complex64::new(1.0, 0.0))
    }
    fn from_i64(v: i64) -> Self {
        Cx(Complex64::new(v as f64, 0.0))
    }
    fn from_fraction(num: i64, den: i64) -> Self {
        Cx(Complex64::new(num as f64 / den as f64, 0.0))
    }
    fn from_rational(r: &BigRational) -> Self {
        Cx(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0))
    }
    fn is_zero(&self) -> bool {
        self.0.norm() <= APPROX_EPS
    }
    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Cx(self.0.inv()))
        }
    }
    fn magnitude(&self) -> f64 {
        self.0.norm()
    }
    fn to_c64(&self) -> Complex64 {
        self.0
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(Cx(z))
    }
}

/// Rounds an approximate value to a nearby rational with bounded
/// denominator (continued-fraction expansion). Candidates must still be
/// verified exactly by the caller.
pub fn rationalize(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let mut a = x.floor();
    let mut frac = x - a;
    let (mut h0, mut h1) = (BigInt::one(), BigInt::from(a as i64));
    let (mut k0, mut k1) = (BigInt::zero(), BigInt::one());
    for _ in 0..64 {
        if k1 > BigInt::from(max_den) {
            break;
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let x1 = 1.0 / frac;
        a = x1.floor();
        frac = x1 - a;
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    if k1.is_zero() || k1 > BigInt::from(max_den) {
        if k0.is_zero() {
            return None;
        }
        return Some(BigRational::new(h0, k0));
    }
    Some(BigRational::new(h1, k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(a.clone() + b.clone(), Rat::new(1, 2));
        assert_eq!(a.clone() * b, Rat::new(1, 18));
        assert_eq!(a.recip().unwrap(), Rat::int(3));
    }

    #[test]
    fn rat_parsing_round_trips() {
        assert_eq!(Rat::parse("-7/3").unwrap(), Rat::new(-7, 3));
        assert_eq!(Rat::parse("42").unwrap(), Rat::int(42));
        assert!(Rat::parse("1/0").is_none());
        assert_eq!(Rat::parse("-7/3").unwrap().to_string(), "-7/3");
    }

    #[test]
    fn approx_zero_test_uses_tolerance() {
        assert!(Cx::new(1e-12, 1e-12).is_zero());
        assert!(!Cx::new(1e-6, 0.0).is_zero());
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        let r = rationalize(0.333333333333, 1000).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(1), BigInt::from(3)));
        let r = rationalize(-2.5, 1000).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(-5), BigInt::from(2)));
    }
}
