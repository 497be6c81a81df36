//! The graded rings M = Q[E4, E6] and QM = Q[E2, E4, E6].
//!
//! Both are stored as sparse polynomials over [`Rat`]. [`ModForm`] is a
//! newtype over [`QuasiModForm`] that guarantees depth 0. The derivation
//! [`QuasiModForm::derive`] is the weight-independent part of the
//! Ramanujan–Serre operator: on a homogeneous form of weight `w`,
//! `D_k f = ∂f + ((w − k)/12)·E2·f`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{solve_fraction_free, Matrix};
use crate::qseries::{eisenstein, QSeries};
use crate::scalar::{int, rat, Field, Rat, UPoly};

/// Guard coefficients checked by [`recognize`] beyond the dimension.
pub const DEFAULT_GUARD: usize = 5;

/// `E2^e2 · E4^e4 · E6^e6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { e2: 0, e4: 0, e6: 0 };

    pub fn new(e2: u32, e4: u32, e6: u32) -> Self {
        Mono { e2, e4, e6 }
    }

    pub fn weight(&self) -> i64 {
        2 * self.e2 as i64 + 4 * self.e4 as i64 + 6 * self.e6 as i64
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono::new(self.e2 + o.e2, self.e4 + o.e4, self.e6 + o.e6)
    }

    fn divides(&self, o: &Mono) -> bool {
        self.e2 <= o.e2 && self.e4 <= o.e4 && self.e6 <= o.e6
    }

    fn div(&self, o: &Mono) -> Mono {
        Mono::new(self.e2 - o.e2, self.e4 - o.e4, self.e6 - o.e6)
    }
}

// degree-lexicographic: weight first, then E2 degree, then E4 degree
impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.weight(), self.e2, self.e4, self.e6).cmp(&(o.weight(), o.e2, o.e4, o.e6))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A quasimodular form: a polynomial in E2, E4, E6 over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuasiModForm {
    terms: BTreeMap<Mono, Rat>,
}

/// A modular form for SL(2, Z): a polynomial in E4, E6 over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModForm(QuasiModForm);

impl QuasiModForm {
    pub fn zero() -> Self {
        QuasiModForm::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, Mono::ONE)
    }

    pub fn monomial(c: Rat, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        QuasiModForm { terms }
    }

    pub fn e2() -> Self {
        Self::monomial(Rat::one(), Mono::new(1, 0, 0))
    }

    pub fn e4() -> Self {
        Self::monomial(Rat::one(), Mono::new(0, 1, 0))
    }

    pub fn e6() -> Self {
        Self::monomial(Rat::one(), Mono::new(0, 0, 1))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut out = QuasiModForm::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    /// The constant, if the form is one.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Mono::ONE).cloned(),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Mono::weight);
        match it.next() {
            Some(w) => it.all(|x| x == w),
            None => true,
        }
    }

    /// Weight of a homogeneous nonzero form.
    pub fn weight(&self) -> Option<i64> {
        if self.is_homogeneous() {
            self.terms.keys().next().map(Mono::weight)
        } else {
            None
        }
    }

    /// `Ok(None)` for zero, [`Error::NotHomogeneous`] for mixed weights.
    pub fn weight_of_homogeneous(&self) -> Result<Option<i64>> {
        if self.is_homogeneous() {
            Ok(self.terms.keys().next().map(Mono::weight))
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    pub fn homogeneous_part(&self, k: i64) -> Self {
        QuasiModForm {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Maximum E2 degree; `None` for zero.
    pub fn depth(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.e2).max()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QuasiModForm {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rat::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes E2 = E4 = E6 = 1, the constant term of the q-expansion.
    pub fn eval_inf(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |a, c| a + c)
    }

    /// The derivation ∂ = −(E2² + E4)/12·∂/∂E2 − E6/3·∂/∂E4 − E4²/2·∂/∂E6.
    pub fn derive(&self) -> Self {
        let mut out = QuasiModForm::zero();
        for (m, c) in &self.terms {
            if m.e2 > 0 {
                let f = c * int(m.e2 as i64) * rat(-1, 12);
                out.add_term(Mono::new(m.e2 + 1, m.e4, m.e6), f.clone());
                out.add_term(Mono::new(m.e2 - 1, m.e4 + 1, m.e6), f);
            }
            if m.e4 > 0 {
                let f = c * int(m.e4 as i64) * rat(-1, 3);
                out.add_term(Mono::new(m.e2, m.e4 - 1, m.e6 + 1), f);
            }
            if m.e6 > 0 {
                let f = c * int(m.e6 as i64) * rat(-1, 2);
                out.add_term(Mono::new(m.e2, m.e4 + 2, m.e6 - 1), f);
            }
        }
        out
    }

    /// Ramanujan–Serre derivative `D_k f = f' − (k/12)E2 f` of a homogeneous form.
    pub fn serre_d(&self, k: &Rat) -> Result<Self> {
        let w = match self.weight_of_homogeneous()? {
            Some(w) => w,
            None => return Ok(Self::zero()),
        };
        let shift = (int(w) - k) / int(12);
        Ok(&self.derive() + &(&Self::e2() * self).scale(&shift))
    }

    /// The q-expansion below `trunc`.
    pub fn qexp(&self, trunc: &Rat) -> Result<QSeries<Rat>> {
        let mut zero = QSeries::big_o(1, trunc)?;
        if self.is_zero() {
            return Ok(zero);
        }
        let base = [
            eisenstein::<Rat>(2, trunc)?,
            eisenstein::<Rat>(4, trunc)?,
            eisenstein::<Rat>(6, trunc)?,
        ];
        let mut powers: HashMap<(usize, u32), QSeries<Rat>> = HashMap::new();
        let one = QSeries::one(1).truncate(trunc)?;
        let mut power = |g: usize, e: u32| -> QSeries<Rat> {
            if e == 0 {
                return one.clone();
            }
            if let Some(p) = powers.get(&(g, e)) {
                return p.clone();
            }
            let mut acc = base[g].clone();
            for i in 2..=e {
                acc = match powers.get(&(g, i)) {
                    Some(p) => p.clone(),
                    None => {
                        let next = &acc * &base[g];
                        powers.insert((g, i), next.clone());
                        next
                    }
                };
            }
            acc
        };
        for (m, c) in &self.terms {
            let t = &(&power(0, m.e2) * &power(1, m.e4)) * &power(2, m.e6);
            zero = &zero + &t.scale(c);
        }
        Ok(zero)
    }

    /// Exact quotient `self / other`, `None` if `other` does not divide.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let mut rem = self.clone();
        let mut quot = QuasiModForm::zero();
        // lexicographic leading terms make the reduction terminate
        let lex = |f: &QuasiModForm| -> Option<(Mono, Rat)> {
            f.terms
                .iter()
                .max_by(|a, b| (a.0.e2, a.0.e4, a.0.e6).cmp(&(b.0.e2, b.0.e4, b.0.e6)))
                .map(|(m, c)| (*m, c.clone()))
        };
        let (llm, llc) = lex(other)?;
        while let Some((m, c)) = lex(&rem) {
            if !llm.divides(&m) {
                return None;
            }
            let t = QuasiModForm::monomial(c / &llc, m.div(&llm));
            rem = &rem - &(&t * other);
            quot = &quot + &t;
        }
        Some(quot)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        let mut out = QuasiModForm::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn add_ref(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    fn neg_ref(&self) -> Self {
        QuasiModForm {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    /// Drops the E2-free check; `None` if E2 occurs.
    pub fn to_modform(&self) -> Option<ModForm> {
        if self.terms.keys().all(|m| m.e2 == 0) {
            Some(ModForm(self.clone()))
        } else {
            None
        }
    }

    /// Prints with rational coefficients parenthesized unless integral.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let (neg, mag) = (c.is_negative(), c.abs());
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&format_term(&mag, m));
        }
        out
    }
}

pub(crate) fn format_rat_coeff(c: &Rat) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn mono_factors(m: &Mono) -> Vec<String> {
    let mut f = Vec::new();
    for (name, e) in [("E2", m.e2), ("E4", m.e4), ("E6", m.e6)] {
        match e {
            0 => {}
            1 => f.push(name.to_string()),
            _ => f.push(format!("{name}^{e}")),
        }
    }
    f
}

/// `c*E4^2*E6`, omitting a unit coefficient; `mag` is nonnegative.
fn format_term(mag: &Rat, m: &Mono) -> String {
    let mut factors = mono_factors(m);
    if factors.is_empty() {
        return format_rat_coeff(mag);
    }
    if !mag.is_one() {
        factors.insert(0, format_rat_coeff(mag));
    }
    factors.join("*")
}

impl fmt::Display for QuasiModForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

macro_rules! ring_ops {
    ($ty:ty, $wrap:expr, $inner:expr) => {
        impl Add<&$ty> for &$ty {
            type Output = $ty;
            fn add(self, o: &$ty) -> $ty {
                $wrap($inner(self).add_ref($inner(o)))
            }
        }
        impl Sub<&$ty> for &$ty {
            type Output = $ty;
            fn sub(self, o: &$ty) -> $ty {
                $wrap($inner(self).add_ref(&$inner(o).neg_ref()))
            }
        }
        impl Mul<&$ty> for &$ty {
            type Output = $ty;
            fn mul(self, o: &$ty) -> $ty {
                $wrap($inner(self).mul_ref($inner(o)))
            }
        }
        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $wrap($inner(self).neg_ref())
            }
        }
        impl Add for $ty {
            type Output = $ty;
            fn add(self, o: $ty) -> $ty {
                &self + &o
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, o: $ty) -> $ty {
                &self - &o
            }
        }
        impl Mul for $ty {
            type Output = $ty;
            fn mul(self, o: $ty) -> $ty {
                &self * &o
            }
        }
        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                -&self
            }
        }
        impl Zero for $ty {
            fn zero() -> Self {
                <$ty>::default()
            }
            fn is_zero(&self) -> bool {
                $inner(self).terms.is_empty()
            }
        }
        impl One for $ty {
            fn one() -> Self {
                $wrap(QuasiModForm::constant(Rat::one()))
            }
        }
        impl Field for $ty {
            /// Only nonzero constants are units.
            fn checked_inv(&self) -> Option<Self> {
                match $inner(self).as_constant() {
                    Some(c) if !c.is_zero() => Some($wrap(QuasiModForm::constant(c.recip()))),
                    _ => None,
                }
            }
        }
    };
}

fn qm_id(x: &QuasiModForm) -> &QuasiModForm {
    x
}

fn mf_inner(x: &ModForm) -> &QuasiModForm {
    &x.0
}

ring_ops!(QuasiModForm, |x| x, qm_id);
ring_ops!(ModForm, ModForm, mf_inner);

impl ModForm {
    pub fn zero() -> Self {
        ModForm::default()
    }

    pub fn constant(c: Rat) -> Self {
        ModForm(QuasiModForm::constant(c))
    }

    /// `c·E4^a·E6^b`.
    pub fn monomial(c: Rat, a: u32, b: u32) -> Self {
        ModForm(QuasiModForm::monomial(c, Mono::new(0, a, b)))
    }

    pub fn e4() -> Self {
        ModForm(QuasiModForm::e4())
    }

    pub fn e6() -> Self {
        ModForm(QuasiModForm::e6())
    }

    /// `Δ = (E4³ − E6²)/1728`.
    pub fn delta() -> Self {
        let f = &ModForm::e4().pow(3) - &ModForm::e6().pow(2);
        f.scale(&rat(1, 1728))
    }

    pub fn as_quasi(&self) -> &QuasiModForm {
        &self.0
    }

    pub fn into_quasi(self) -> QuasiModForm {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.0.terms()
    }

    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.0.leading()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.0.as_constant()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.0.is_homogeneous()
    }

    pub fn weight(&self) -> Option<i64> {
        self.0.weight()
    }

    pub fn weight_of_homogeneous(&self) -> Result<Option<i64>> {
        self.0.weight_of_homogeneous()
    }

    pub fn homogeneous_part(&self, k: i64) -> Self {
        ModForm(self.0.homogeneous_part(k))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        ModForm(self.0.scale(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        ModForm(self.0.pow(e))
    }

    pub fn eval_inf(&self) -> Rat {
        self.0.eval_inf()
    }

    /// ∂ restricted to M: `−E6/3·∂/∂E4 − E4²/2·∂/∂E6`.
    pub fn derive(&self) -> Self {
        ModForm(self.0.derive())
    }

    /// `D_k f` for `f` homogeneous of weight `k`, which stays in M.
    pub fn serre_d(&self) -> Result<Self> {
        self.0.weight_of_homogeneous()?;
        Ok(self.derive())
    }

    pub fn qexp(&self, trunc: &Rat) -> Result<QSeries<Rat>> {
        self.0.qexp(trunc)
    }

    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        self.0.div_exact(&other.0).map(ModForm)
    }

    pub fn display(&self) -> String {
        self.0.display()
    }

    /// Splits a homogeneous nonzero form as `E4^α·E6^β·H(E4³, E6²)` and returns
    /// `(α, β, u)` with `u(x) = H(x, 1)`, `u(0) ≠ 0`.
    fn split(&self) -> Option<(u32, u32, UPoly<Rat>)> {
        self.weight()?;
        let a_min = self.terms().map(|(m, _)| m.e4).min()?;
        let b_min = self.terms().map(|(m, _)| m.e6).min()?;
        let mut coeffs = Vec::new();
        for (m, c) in self.terms() {
            let i = ((m.e4 - a_min) / 3) as usize;
            if coeffs.len() <= i {
                coeffs.resize(i + 1, Rat::zero());
            }
            coeffs[i] = c.clone();
        }
        Some((a_min, b_min, UPoly::new(coeffs)))
    }

    fn unsplit(a: u32, b: u32, u: &UPoly<Rat>) -> Self {
        let d = u.degree().unwrap_or(0) as u32;
        let mut out = ModForm::zero();
        for (i, c) in u.coeffs().iter().enumerate() {
            let i = i as u32;
            out = &out + &ModForm::monomial(c.clone(), a + 3 * i, b + 2 * (d - i));
        }
        out
    }

    /// Greatest common divisor of homogeneous forms, normalized so that the
    /// leading coefficient is 1. `None` if either input is not homogeneous.
    pub fn gcd_homogeneous(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let (a1, b1, u1) = self.split()?;
        let (a2, b2, u2) = other.split()?;
        let g = u1.gcd(&u2);
        ModForm::unsplit(a1.min(a2), b1.min(b2), &g).normalized()
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn normalized(&self) -> Option<Self> {
        if !self.is_homogeneous() {
            return None;
        }
        match self.leading() {
            Some((_, c)) => Some(self.scale(&c.recip())),
            None => Some(self.clone()),
        }
    }
}

impl fmt::Display for ModForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl From<ModForm> for QuasiModForm {
    fn from(m: ModForm) -> Self {
        m.0
    }
}

impl TryFrom<QuasiModForm> for ModForm {
    type Error = Error;
    fn try_from(q: QuasiModForm) -> Result<Self> {
        q.to_modform()
            .ok_or_else(|| Error::WeightError("form involves E2".into()))
    }
}

/// Monomials `E4^a E6^b` of weight `k`, in increasing `a`.
pub fn basis(k: i64) -> Vec<Mono> {
    if k < 0 || k % 2 != 0 {
        return Vec::new();
    }
    (0..=k / 4)
        .filter(|a| (k - 4 * a) % 6 == 0)
        .map(|a| Mono::new(0, a as u32, ((k - 4 * a) / 6) as u32))
        .collect()
}

/// `dim M_k`.
pub fn dimension(k: i64) -> usize {
    basis(k).len()
}

/// The modular form of weight `k` whose q-expansion is `s`, using the
/// default guard margin.
pub fn recognize(s: &QSeries<Rat>, k: i64) -> Result<ModForm> {
    recognize_with_guard(s, k, DEFAULT_GUARD)
}

/// Solves for `f ∈ M_k` with `qexp(f) = s` on the first `dim M_k` coefficients
/// and checks every other available coefficient, at least `guard` of them.
pub fn recognize_with_guard(s: &QSeries<Rat>, k: i64, guard: usize) -> Result<ModForm> {
    let b = basis(k);
    let d = b.len();
    if s.terms().any(|(e, _)| !e.is_integer() || e.is_negative()) {
        return Err(Error::NoFit(k));
    }
    let available = match s.trunc() {
        Some(t) => {
            if t.is_positive() {
                t.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
            } else {
                0
            }
        }
        None => {
            let top = s.max_exponent().map_or(0, |e| e.to_integer().to_usize().unwrap_or(0) + 1);
            top.max(d + guard)
        }
    };
    if available < d + guard {
        return Err(Error::UnderDetermined {
            weight: k,
            available,
            needed: d + guard,
        });
    }
    if d == 0 {
        return if s.is_zero() {
            Ok(ModForm::zero())
        } else {
            Err(Error::NoFit(k))
        };
    }
    let t = int(available as i64);
    let cols: Vec<QSeries<Rat>> = b
        .iter()
        .map(|m| QuasiModForm::monomial(Rat::one(), *m).qexp(&t))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Rat>> = (0..available)
        .map(|n| cols.iter().map(|c| c.coeff(&int(n as i64))).collect())
        .collect();
    let rhs: Vec<Rat> = (0..available).map(|n| s.coeff(&int(n as i64))).collect();
    let x = solve_fraction_free(&Matrix::from_rows(rows), &rhs).ok_or(Error::NoFit(k))?;
    Ok(ModForm(QuasiModForm::from_terms(b.into_iter().zip(x))))
}

/// The monomial `E4^a E6^b` of weight `w` with the largest `a`, which has
/// constant term 1; `None` when `M_w` has no such monomial.
pub fn unit_monomial(w: i64) -> Option<ModForm> {
    basis(w)
        .last()
        .map(|m| ModForm::monomial(Rat::one(), m.e4, m.e6))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> QuasiModForm {
        QuasiModForm::e2()
    }
    fn e4() -> QuasiModForm {
        QuasiModForm::e4()
    }
    fn e6() -> QuasiModForm {
        QuasiModForm::e6()
    }

    #[test]
    fn product_weight() {
        let f = ModForm::e4() * ModForm::e6();
        assert_eq!(f.weight(), Some(10));
        assert_eq!(f.terms().count(), 1);
    }

    #[test]
    fn delta_shape() {
        let d = ModForm::delta();
        assert_eq!(d.weight(), Some(12));
        assert_eq!(d.terms().count(), 2);
        assert_eq!(d.eval_inf(), int(0));
        let q = d.qexp(&int(5)).unwrap();
        let expect = [0, 1, -24, 252, -1472];
        for (n, c) in expect.iter().enumerate() {
            assert_eq!(q.coeff(&int(n as i64)), int(*c));
        }
    }

    #[test]
    fn depth_and_weight() {
        let f = &(&(&e2().pow(2) * &e4()) + &(&e2() * &e6()).scale(&int(3))) - &e4().pow(2).scale(&int(2));
        assert_eq!(f.depth(), Some(2));
        assert_eq!(f.weight(), Some(8));
        assert_eq!(f.to_string(), "E2^2*E4 + 3*E2*E6 - 2*E4^2");
        let mixed = &e4() + &e6();
        assert_eq!(mixed.weight_of_homogeneous(), Err(Error::NotHomogeneous));
    }

    #[test]
    fn serre_derivatives() {
        assert_eq!(e4().serre_d(&int(4)).unwrap(), e6().scale(&rat(-1, 3)));
        assert_eq!(e6().serre_d(&int(6)).unwrap(), e4().pow(2).scale(&rat(-1, 2)));
        assert!(ModForm::delta().serre_d().unwrap().is_zero());
        let d2 = (&e2().pow(2) + &e4()).scale(&rat(-1, 12));
        assert_eq!(e2().serre_d(&int(2)).unwrap(), d2);
    }

    #[test]
    fn serre_matches_series() {
        let t = int(8);
        let f = &(&e2() * &e4()) + &e6().scale(&int(5));
        for k in [int(6), rat(1, 2), int(0)] {
            let lhs = f.serre_d(&k).unwrap().qexp(&t).unwrap();
            let fs = f.qexp(&t).unwrap();
            let e2s = e2().qexp(&t).unwrap();
            let rhs = &fs.theta() - &(&e2s * &fs).scale(&(&k / int(12)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn constant_qexp() {
        let one = ModForm::constant(int(1)).qexp(&int(4)).unwrap();
        assert_eq!(one.coeff(&int(0)), int(1));
        assert_eq!(one.num_terms(), 1);
        let e4s = ModForm::e4().qexp(&int(3)).unwrap();
        assert_eq!(e4s.coeff(&int(1)), int(240));
    }

    #[test]
    fn recognition() {
        let s = ModForm::e4().qexp(&int(8)).unwrap();
        assert_eq!(recognize(&s, 4).unwrap(), ModForm::e4());
        let z = QSeries::big_o(1, &int(8)).unwrap();
        assert_eq!(recognize(&z, 12).unwrap(), ModForm::zero());
        let mut bad = ModForm::e4().pow(2).qexp(&int(10)).unwrap();
        bad = &bad + &QSeries::monomial(int(1), &int(3), 1).unwrap();
        assert_eq!(recognize(&bad, 8), Err(Error::NoFit(8)));
        let short = ModForm::e4().qexp(&int(3)).unwrap();
        assert!(matches!(recognize(&short, 4), Err(Error::UnderDetermined { .. })));
    }

    #[test]
    fn recognize_roundtrip_all_monomials() {
        for k in (0..=36).step_by(2) {
            for m in basis(k) {
                let f = ModForm::monomial(int(1), m.e4, m.e6);
                let s = f.qexp(&int(dimension(k) as i64 + 6)).unwrap();
                assert_eq!(recognize(&s, k).unwrap(), f);
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension(2), 0);
        assert_eq!(dimension(0), 1);
        assert_eq!(dimension(12), 2);
        assert_eq!(dimension(24), 3);
        for k in (0..=36).step_by(2) {
            let count = (0..=k / 4).filter(|a| (k - 4 * a) % 6 == 0).count();
            assert_eq!(dimension(k), count);
        }
    }

    #[test]
    fn eval_at_cusp() {
        assert_eq!((&ModForm::e4().pow(3) - &ModForm::e6().pow(2)).eval_inf(), int(0));
        assert_eq!(ModForm::e4().scale(&int(5)).eval_inf(), int(5));
    }

    #[test]
    fn homogeneous_gcd() {
        let a = ModForm::e4().pow(2) * ModForm::delta() * ModForm::e6();
        let b = ModForm::e4() * ModForm::delta().pow(2);
        let g = a.gcd_homogeneous(&b).unwrap();
        let expect = (ModForm::e4() * ModForm::delta()).normalized().unwrap();
        assert_eq!(g, expect);
        assert_eq!(a.div_exact(&g).unwrap() * g.clone(), a);
        assert!(ModForm::e4().div_exact(&ModForm::e6()).is_none());
    }

    #[test]
    fn unit_monomials() {
        assert_eq!(unit_monomial(0), Some(ModForm::constant(int(1))));
        assert_eq!(unit_monomial(2), None);
        assert_eq!(unit_monomial(10), Some(ModForm::e4() * ModForm::e6()));
        assert_eq!(unit_monomial(12), Some(ModForm::e4().pow(3)));
    }
}
