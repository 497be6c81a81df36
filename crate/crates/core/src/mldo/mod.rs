//! The skew polynomial ring of modular linear differential operators.
//!
//! An operator is stored in the normal form `a_n δ^n + … + a_1 δ + a_0` with
//! coefficients on the left. Multiplication follows from
//! `δ^n a = Σ binom(n, i) D^i[a] δ^(n−i)`, where `D[a] = [δ, a]` is the
//! coefficient derivation (see [`DiffCoeff::derive`]).
//!
//! The coefficient ring is a type parameter: [`ModForm`] gives the ring of
//! MLDOs proper, [`QuasiModForm`] its quasimodular enlargement, and the
//! meromorphic forms of [`crate::merore`] the Euclidean Ore ring.

mod apply;
mod division;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modform::{ModForm, QuasiModForm};
use crate::scalar::{binom, Field, Rat};

pub use apply::{apply_form, apply_series, expand_coefficients};
pub use division::{DivisionSide, GeneralDivision};

/// A graded differential coefficient ring.
pub trait DiffCoeff: Field + fmt::Display + Send + Sync {
    /// The derivation `∂` with `[δ, a] = ∂a`.
    fn derive(&self) -> Self;

    /// Weight of a homogeneous nonzero element.
    fn weight(&self) -> Option<i64>;

    fn is_homogeneous(&self) -> bool;

    /// Value at the cusp, when finite.
    fn eval_inf(&self) -> Option<Rat>;

    fn from_rat(r: &Rat) -> Self;

    /// Exact quotient, `None` if `other` does not divide `self`.
    fn div_exact(&self, other: &Self) -> Option<Self>;

    /// `(negative, magnitude)` where the magnitude can stand as a factor in
    /// a product, parenthesized if needed.
    fn signed_factor(&self) -> (bool, String);
}

/// Coefficient rings whose elements have q-expansions.
pub trait PolyCoeff: DiffCoeff {
    fn to_quasi(&self) -> QuasiModForm;
}

impl DiffCoeff for QuasiModForm {
    fn derive(&self) -> Self {
        QuasiModForm::derive(self)
    }
    fn weight(&self) -> Option<i64> {
        QuasiModForm::weight(self)
    }
    fn is_homogeneous(&self) -> bool {
        QuasiModForm::is_homogeneous(self)
    }
    fn eval_inf(&self) -> Option<Rat> {
        Some(QuasiModForm::eval_inf(self))
    }
    fn from_rat(r: &Rat) -> Self {
        QuasiModForm::constant(r.clone())
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        QuasiModForm::div_exact(self, other)
    }
    fn signed_factor(&self) -> (bool, String) {
        poly_signed_factor(self)
    }
}

impl PolyCoeff for QuasiModForm {
    fn to_quasi(&self) -> QuasiModForm {
        self.clone()
    }
}

impl DiffCoeff for ModForm {
    fn derive(&self) -> Self {
        ModForm::derive(self)
    }
    fn weight(&self) -> Option<i64> {
        ModForm::weight(self)
    }
    fn is_homogeneous(&self) -> bool {
        ModForm::is_homogeneous(self)
    }
    fn eval_inf(&self) -> Option<Rat> {
        Some(ModForm::eval_inf(self))
    }
    fn from_rat(r: &Rat) -> Self {
        ModForm::constant(r.clone())
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        ModForm::div_exact(self, other)
    }
    fn signed_factor(&self) -> (bool, String) {
        poly_signed_factor(self.as_quasi())
    }
}

impl PolyCoeff for ModForm {
    fn to_quasi(&self) -> QuasiModForm {
        self.as_quasi().clone()
    }
}

pub(crate) fn poly_signed_factor(f: &QuasiModForm) -> (bool, String) {
    if f.num_terms() == 1 {
        let text = f.display();
        match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        }
    } else {
        (false, format!("({})", f.display()))
    }
}

/// Whether the top coefficient is 1, has constant term 1, or neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Monic,
    Quasimonic,
    Neither,
}

/// `Σ a_i δ^i` in left normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct Mldo<C> {
    coeffs: Vec<C>,
}

impl<C: DiffCoeff> Mldo<C> {
    pub fn zero() -> Self {
        Mldo { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_coeff(C::one())
    }

    /// The generator δ.
    pub fn delta() -> Self {
        Self::delta_pow(1)
    }

    pub fn delta_pow(n: usize) -> Self {
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[n] = C::one();
        Mldo { coeffs }
    }

    /// Multiplication by a coefficient, `ι(c)`.
    pub fn from_coeff(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `Σ coeffs[i]·δ^i`.
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Mldo { coeffs }
    }

    /// `Σ δ^i·coeffs[i]`, converted to left normal form.
    pub fn from_right_coeffs(coeffs: Vec<C>) -> Self {
        let n = coeffs.len();
        let mut out = vec![C::zero(); n];
        for (i, b) in coeffs.into_iter().enumerate() {
            // δ^i b = Σ_t binom(i, t) ∂^t(b) δ^(i−t)
            let mut d = b;
            for t in 0..=i {
                if d.is_zero() {
                    break;
                }
                let c = C::from_rat(&binom(i as u64, t as u64));
                out[i - t] = out[i - t].clone() + c * d.clone();
                d = d.derive();
            }
        }
        Self::from_coeffs(out)
    }

    /// Coefficients `b_i` with `self = Σ δ^i·b_i`.
    pub fn right_coeffs(&self) -> Vec<C> {
        let n = self.coeffs.len();
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            // a δ^i = Σ_t (−1)^t binom(i, t) δ^(i−t) ∂^t(a)
            let mut d = a.clone();
            for t in 0..=i {
                if d.is_zero() {
                    break;
                }
                let mut c = C::from_rat(&binom(i as u64, t as u64));
                if t % 2 == 1 {
                    c = -c;
                }
                out[i - t] = out[i - t].clone() + c * d.clone();
                d = d.derive();
            }
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the order −∞ of the zero operator.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Top coefficient; zero for the zero operator.
    pub fn top(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(C::zero)
    }

    /// Common value of `wt(a_i) + 2i` over nonzero coefficients.
    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cw = c.weight()? + 2 * i as i64;
            match w {
                None => w = Some(cw),
                Some(x) if x != cw => return None,
                _ => {}
            }
        }
        w
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    /// Weight of a homogeneous nonzero operator, or [`Error::NotHomogeneous`].
    pub fn weight_checked(&self) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        self.weight().ok_or(Error::NotHomogeneous)
    }

    pub fn classify(&self) -> Class {
        let top = self.top();
        if top == C::one() {
            Class::Monic
        } else if top.eval_inf() == Some(Rat::one()) {
            Class::Quasimonic
        } else {
            Class::Neither
        }
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.top() == C::one()
    }

    /// Every coefficient vanishes at the cusp.
    pub fn in_z(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.eval_inf().is_some_and(|v| v.is_zero()))
    }

    /// `D[a] = [δ, a]`, the coefficient-wise derivation.
    pub fn d_bracket(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.derive()).collect())
    }

    pub fn d_bracket_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |a, _| a.d_bracket())
    }

    /// `c·self`.
    pub fn scale_left(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| c.clone() * a.clone()).collect())
    }

    /// `self·δ^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Mldo { coeffs }
    }

    /// Divides every coefficient by the top one.
    pub fn make_monic(&self) -> Option<Self> {
        let inv = self.coeffs.last()?.checked_inv()?;
        Some(self.scale_left(&inv))
    }

    pub fn map<D: DiffCoeff>(&self, f: impl Fn(&C) -> D) -> Mldo<D> {
        Mldo::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let n = self.coeffs.len() - 1;
        let m = other.coeffs.len() - 1;
        // derivative towers ∂^t b_j for t ≤ n
        let towers: Vec<Vec<C>> = other
            .coeffs
            .iter()
            .map(|b| {
                let mut v = Vec::with_capacity(n + 1);
                let mut d = b.clone();
                for _ in 0..=n {
                    let next = if d.is_zero() { C::zero() } else { d.derive() };
                    v.push(d);
                    d = next;
                }
                v
            })
            .collect();
        let mut out = vec![C::zero(); n + m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for t in 0..=i {
                let bc = C::from_rat(&binom(i as u64, t as u64));
                let at = a.clone() * bc;
                for (j, tower) in towers.iter().enumerate() {
                    let d = &tower[t];
                    if d.is_zero() {
                        continue;
                    }
                    let idx = i - t + j;
                    out[idx] = out[idx].clone() + at.clone() * d.clone();
                }
            }
        }
        Self::from_coeffs(out)
    }

    fn add_ref(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    fn neg_ref(&self) -> Self {
        Mldo {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Canonical text, descending powers of `D`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = c.signed_factor();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let d = match i {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{i}"),
            };
            if d.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&d);
            } else {
                out.push_str(&format!("{mag}*{d}"));
            }
        }
        out
    }
}

impl Mldo<ModForm> {
    /// The same operator over the quasimodular coefficient ring.
    pub fn to_quasi(&self) -> Mldo<QuasiModForm> {
        self.map(|c| c.as_quasi().clone())
    }
}

impl Mldo<QuasiModForm> {
    /// Back to modular coefficients, if no coefficient involves E2.
    pub fn to_modular(&self) -> Option<Mldo<ModForm>> {
        let coeffs: Option<Vec<ModForm>> = self.coeffs.iter().map(|c| c.to_modform()).collect();
        coeffs.map(Mldo::from_coeffs)
    }
}

impl<C: DiffCoeff> fmt::Display for Mldo<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl<C: DiffCoeff> Add<&Mldo<C>> for &Mldo<C> {
    type Output = Mldo<C>;
    fn add(self, o: &Mldo<C>) -> Mldo<C> {
        self.add_ref(o)
    }
}

impl<C: DiffCoeff> Sub<&Mldo<C>> for &Mldo<C> {
    type Output = Mldo<C>;
    fn sub(self, o: &Mldo<C>) -> Mldo<C> {
        self.add_ref(&o.neg_ref())
    }
}

impl<C: DiffCoeff> Mul<&Mldo<C>> for &Mldo<C> {
    type Output = Mldo<C>;
    fn mul(self, o: &Mldo<C>) -> Mldo<C> {
        self.mul_ref(o)
    }
}

impl<C: DiffCoeff> Neg for &Mldo<C> {
    type Output = Mldo<C>;
    fn neg(self) -> Mldo<C> {
        self.neg_ref()
    }
}

impl<C: DiffCoeff> Add for Mldo<C> {
    type Output = Mldo<C>;
    fn add(self, o: Mldo<C>) -> Mldo<C> {
        self.add_ref(&o)
    }
}

impl<C: DiffCoeff> Sub for Mldo<C> {
    type Output = Mldo<C>;
    fn sub(self, o: Mldo<C>) -> Mldo<C> {
        &self - &o
    }
}

impl<C: DiffCoeff> Mul for Mldo<C> {
    type Output = Mldo<C>;
    fn mul(self, o: Mldo<C>) -> Mldo<C> {
        self.mul_ref(&o)
    }
}

impl<C: DiffCoeff> Neg for Mldo<C> {
    type Output = Mldo<C>;
    fn neg(self) -> Mldo<C> {
        self.neg_ref()
    }
}

impl<C: DiffCoeff> Zero for Mldo<C> {
    fn zero() -> Self {
        Mldo::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<C: DiffCoeff> One for Mldo<C> {
    fn one() -> Self {
        Mldo::one()
    }
}
