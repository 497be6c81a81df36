//! Exact coefficient fields.
//!
//! Everything in the crate is computed over [`Rat`] (arbitrary-precision
//! rationals) or over [`Cyc`], the cyclotomic fields Q(ζ_N) needed for the
//! phased eta identities. Generic code is written against [`Field`] and
//! [`Scalar`].

mod cyclotomic;
mod upoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, root_of_unity, Cyc};
pub use upoly::UPoly;

/// Arbitrary-precision rational number, always reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// A commutative ring in which nonzero elements (for graded fields: nonzero
/// homogeneous elements) can be inverted.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn checked_inv(&self) -> Option<Self>;

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.checked_inv().map(|inv| self.clone() * inv)
    }
}

/// A coefficient field for q-series: contains Q and (some) roots of unity.
pub trait Scalar: Field + fmt::Display + Send + Sync + 'static {
    fn from_rat(r: &Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(&Rat::from_integer(BigInt::from(n)))
    }

    /// `e(frac) = exp(2πi·frac)` if it lies in this field.
    fn root_of_unity(frac: &Rat) -> Option<Self>;

    /// A canonical `p`-th power, when one exists in the field.
    fn pow_rat(&self, p: &Rat) -> Option<Self>;

    fn to_rat(&self) -> Option<Rat>;
}

impl Field for Rat {
    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn root_of_unity(frac: &Rat) -> Option<Self> {
        let reduced = frac - frac.floor();
        if reduced.is_zero() {
            Some(Rat::one())
        } else if reduced == rat(1, 2) {
            Some(-Rat::one())
        } else {
            None
        }
    }

    fn pow_rat(&self, p: &Rat) -> Option<Self> {
        rat_pow(self, p)
    }

    fn to_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

/// `n/d` as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let text = text.trim();
    let bad = |msg: &str| Error::Syntax {
        pos: 0,
        msg: format!("{msg}: {text:?}"),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("invalid rational"))?;
    let den: BigInt = den.parse().map_err(|_| bad("invalid rational"))?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rat::new(num, den))
}

/// Converts an integral rational to `i64`.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Generalized binomial coefficient `binom(p, n)` for rational `p`.
pub fn binom_rat(p: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..n {
        acc = acc * (p - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// Ordinary binomial coefficient as a rational.
pub fn binom(n: u64, k: u64) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

fn exact_root(n: &BigInt, v: u32) -> Option<BigInt> {
    if n.is_negative() {
        if v % 2 == 0 {
            return None;
        }
        return exact_root(&-n, v).map(|r| -r);
    }
    let r = n.nth_root(v);
    if num_traits::pow(r.clone(), v as usize) == *n {
        Some(r)
    } else {
        None
    }
}

fn rat_pow(base: &Rat, p: &Rat) -> Option<Rat> {
    if base.is_zero() {
        return if p.is_positive() { Some(Rat::zero()) } else { None };
    }
    let v = p.denom().to_u32()?;
    let u = p.numer().to_i32()?;
    let root = if v == 1 {
        base.clone()
    } else {
        let n = exact_root(base.numer(), v)?;
        let d = exact_root(base.denom(), v)?;
        Rat::new(n, d)
    };
    Some(num_traits::Pow::pow(&root, u))
}

/// Least common multiple of two positive integers.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}
