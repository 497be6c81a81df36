use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{int, Field, Rat, Scalar, UPoly};
use crate::error::{Error, Result};

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The N-th cyclotomic polynomial, ascending coefficients.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d != 0 {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        let dd = den.len() - 1;
        let mut quot = vec![0i64; num.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = num[i + dd];
            quot[i] = c;
            if c != 0 {
                for (j, &b) in den.iter().enumerate() {
                    num[i + j] -= c * b;
                }
            }
        }
        num = quot;
    }
    let poly = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, poly.clone());
    poly
}

/// Element of Q(ζ_N) stored as a polynomial of degree < φ(N) in ζ_N.
#[derive(Clone, Debug)]
pub struct Cyc {
    order: u64,
    coeffs: Vec<Rat>,
}

fn reduce(mut poly: Vec<Rat>, order: u64) -> Vec<Rat> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for top in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[top], Rat::zero());
            if c.is_zero() {
                continue;
            }
            for (t, &b) in phi.iter().enumerate().take(deg) {
                if b != 0 {
                    poly[top - deg + t] -= &c * int(b);
                }
            }
        }
    }
    poly.resize(deg, Rat::zero());
    poly
}

impl Cyc {
    /// Canonical element of Q(ζ_N) from an arbitrary polynomial in ζ_N.
    pub fn from_poly(order: u64, poly: Vec<Rat>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Cyc {
            order,
            coeffs: reduce(poly, order),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        Cyc {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// The same element viewed in Q(ζ_M); `M` must be a multiple of the order.
    pub fn lift(&self, order: u64) -> Self {
        assert!(order % self.order == 0, "can only lift to a multiple of the order");
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut poly = vec![Rat::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Cyc::from_poly(order, poly)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let n = self.order.lcm(&other.order);
        (self.lift(n), other.lift(n))
    }

    /// The rational value, if this element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = self.coeffs.first().cloned().unwrap_or_else(Rat::zero);
            // Φ_1 = x - 1 reduces ζ_1 to the constant 1 already
            Some(c0)
        } else {
            None
        }
    }

    fn as_upoly(&self) -> UPoly<Rat> {
        UPoly::new(self.coeffs.clone())
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            self.checked_inv().ok_or(Error::DivisionByZero)?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Cyc::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Formats as a sum of `c*zeta(N)^j` terms.
    pub fn display(&self) -> String {
        if let Some(r) = self.as_rat() {
            return r.to_string();
        }
        let mut out = String::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let z = match j {
                0 => String::new(),
                1 => format!("zeta({})", self.order),
                _ => format!("zeta({})^{}", self.order, j),
            };
            if z.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&z);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}*{z}"));
            } else {
                out.push_str(&format!("({mag})*{z}"));
            }
        }
        out
    }
}

/// `e(a/N) = ζ_N^a` as a canonical element of Q(ζ_N).
pub fn root_of_unity(n: u64, a: i64) -> Cyc {
    assert!(n >= 1, "root of unity order must be positive");
    let e = a.rem_euclid(n as i64) as usize;
    let mut poly = vec![Rat::zero(); e + 1];
    poly[e] = Rat::one();
    Cyc::from_poly(n, poly)
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.unify(other);
        a.coeffs == b.coeffs
    }
}

impl Zero for Cyc {
    fn zero() -> Self {
        Cyc::from_rat(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl One for Cyc {
    fn one() -> Self {
        Cyc::from_rat(Rat::one())
    }
}

impl Add for Cyc {
    type Output = Cyc;
    fn add(self, rhs: Cyc) -> Cyc {
        let (a, b) = if self.order == rhs.order {
            (self, rhs)
        } else {
            self.unify(&rhs)
        };
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect();
        Cyc {
            order: a.order,
            coeffs,
        }
    }
}

impl Sub for Cyc {
    type Output = Cyc;
    fn sub(self, rhs: Cyc) -> Cyc {
        self + (-rhs)
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Cyc {
    type Output = Cyc;
    fn mul(self, rhs: Cyc) -> Cyc {
        if let Some(r) = rhs.as_rat() {
            return Cyc {
                order: self.order,
                coeffs: self.coeffs.into_iter().map(|c| c * &r).collect(),
            };
        }
        if let Some(r) = self.as_rat() {
            return rhs * Cyc::from_rat(r);
        }
        let (a, b) = if self.order == rhs.order {
            (self, rhs)
        } else {
            self.unify(&rhs)
        };
        let mut prod = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len()];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyc::from_poly(a.order, prod)
    }
}

impl Field for Cyc {
    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rat() {
            return Some(Cyc::from_rat(r.recip()));
        }
        let modulus = UPoly::new(
            cyclotomic_polynomial(self.order)
                .iter()
                .map(|&c| int(c))
                .collect(),
        );
        // s·a + t·Φ = 1 since Φ is irreducible and a ≢ 0
        let (g, s, _) = self.as_upoly().ext_gcd(&modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Some(Cyc::from_poly(self.order, s.into_coeffs()))
    }
}

impl Scalar for Cyc {
    fn from_rat(r: &Rat) -> Self {
        Cyc::from_rat(r.clone())
    }

    fn root_of_unity(frac: &Rat) -> Option<Self> {
        let n: u64 = num_traits::ToPrimitive::to_u64(frac.denom())?;
        let a: i64 = num_traits::ToPrimitive::to_i64(&frac.numer().mod_floor(frac.denom()))?;
        Some(root_of_unity(n, a))
    }

    fn pow_rat(&self, p: &Rat) -> Option<Self> {
        if p.is_integer() {
            let e = num_traits::ToPrimitive::to_i64(&p.to_integer())?;
            return self.pow_i64(e).ok();
        }
        let r = self.as_rat()?;
        r.pow_rat(p).map(Cyc::from_rat)
    }

    fn to_rat(&self) -> Option<Rat> {
        self.as_rat()
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}
