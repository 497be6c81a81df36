//! Meromorphic modular forms and the Euclidean operator ring over them.
//!
//! [`MerForm`] is a quotient `num/den` of modular forms with a homogeneous
//! denominator. Nonzero homogeneous fractions are invertible, which is all
//! the Euclidean algorithm on homogeneous operators needs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{solve, Matrix};
use crate::mldo::{poly_signed_factor, DiffCoeff, Mldo};
use crate::modform::{basis, ModForm, Mono};
use crate::scalar::{Field, Rat};

/// `num/den` in lowest terms, `den` homogeneous with leading coefficient 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MerForm {
    num: ModForm,
    den: ModForm,
}

fn homogeneous_parts(f: &ModForm) -> Vec<ModForm> {
    let mut weights: Vec<i64> = f.terms().map(|(m, _)| m.weight()).collect();
    weights.dedup();
    weights.into_iter().map(|w| f.homogeneous_part(w)).collect()
}

fn lcm_form(a: &ModForm, b: &ModForm) -> ModForm {
    let g = a.gcd_homogeneous(b).expect("denominators are homogeneous");
    &a.div_exact(&g).expect("gcd divides") * b
}

impl MerForm {
    /// `num/den`; the denominator must be nonzero and homogeneous.
    pub fn new(num: ModForm, den: ModForm) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if !den.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(Self::reduced(num, den))
    }

    pub fn from_form(f: ModForm) -> Self {
        MerForm {
            num: f,
            den: ModForm::constant(Rat::one()),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_form(ModForm::constant(c))
    }

    fn reduced(num: ModForm, den: ModForm) -> Self {
        if num.is_zero() {
            return Self::from_form(ModForm::zero());
        }
        let mut g = den.normalized().expect("homogeneous denominator");
        for part in homogeneous_parts(&num) {
            if g.as_constant().is_some() {
                break;
            }
            g = g.gcd_homogeneous(&part).expect("homogeneous parts");
        }
        let (mut num, mut den) = if g.as_constant().is_some() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        MerForm { num, den }
    }

    pub fn num(&self) -> &ModForm {
        &self.num
    }

    pub fn den(&self) -> &ModForm {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    /// The form itself when the denominator is 1.
    pub fn to_form(&self) -> Option<ModForm> {
        self.is_polynomial().then(|| self.num.clone())
    }

    /// `wt(num) − wt(den)` for a nonzero homogeneous fraction.
    pub fn weight(&self) -> Option<i64> {
        Some(self.num.weight()? - self.den.weight()?)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.num.is_homogeneous()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() || !self.num.is_homogeneous() {
            return None;
        }
        Some(Self::reduced(self.den.clone(), self.num.clone()))
    }

    /// Value at the cusp; `None` at a pole.
    pub fn eval_inf(&self) -> Option<Rat> {
        let d = self.den.eval_inf();
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_inf() / d)
    }

    pub fn derive(&self) -> Self {
        if self.is_polynomial() {
            return Self::from_form(self.num.derive());
        }
        let n = &(&self.num.derive() * &self.den) - &(&self.num * &self.den.derive());
        Self::reduced(n, self.den.pow(2))
    }

    pub fn display(&self) -> String {
        if self.is_polynomial() {
            self.num.display()
        } else {
            format!("({})/({})", self.num.display(), self.den.display())
        }
    }

    fn add_ref(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::reduced(&self.num + &o.num, self.den.clone());
        }
        let l = lcm_form(&self.den, &o.den);
        let a = self.num.clone() * l.div_exact(&self.den).expect("lcm");
        let b = o.num.clone() * l.div_exact(&o.den).expect("lcm");
        Self::reduced(&a + &b, l)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::from_form(ModForm::zero());
        }
        if self.is_polynomial() && o.is_polynomial() {
            return Self::from_form(&self.num * &o.num);
        }
        Self::reduced(&self.num * &o.num, &self.den * &o.den)
    }
}

impl From<ModForm> for MerForm {
    fn from(f: ModForm) -> Self {
        MerForm::from_form(f)
    }
}

impl fmt::Display for MerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Add for MerForm {
    type Output = MerForm;
    fn add(self, o: MerForm) -> MerForm {
        self.add_ref(&o)
    }
}

impl Sub for MerForm {
    type Output = MerForm;
    fn sub(self, o: MerForm) -> MerForm {
        self.add_ref(&-o)
    }
}

impl Mul for MerForm {
    type Output = MerForm;
    fn mul(self, o: MerForm) -> MerForm {
        self.mul_ref(&o)
    }
}

impl Neg for MerForm {
    type Output = MerForm;
    fn neg(self) -> MerForm {
        MerForm {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Zero for MerForm {
    fn zero() -> Self {
        MerForm::from_form(ModForm::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for MerForm {
    fn one() -> Self {
        MerForm::constant(Rat::one())
    }
}

impl Field for MerForm {
    fn checked_inv(&self) -> Option<Self> {
        self.inv()
    }
}

impl DiffCoeff for MerForm {
    fn derive(&self) -> Self {
        MerForm::derive(self)
    }
    fn weight(&self) -> Option<i64> {
        MerForm::weight(self)
    }
    fn is_homogeneous(&self) -> bool {
        MerForm::is_homogeneous(self)
    }
    fn eval_inf(&self) -> Option<Rat> {
        MerForm::eval_inf(self)
    }
    fn from_rat(r: &Rat) -> Self {
        MerForm::constant(r.clone())
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }
    fn signed_factor(&self) -> (bool, String) {
        if self.is_polynomial() {
            return poly_signed_factor(self.num.as_quasi());
        }
        let single_negative = self.num.terms().count() == 1
            && self.num.terms().all(|(_, c)| c.is_negative());
        let (neg, num) = if single_negative {
            (true, -self.num.clone())
        } else {
            (false, self.num.clone())
        };
        (neg, format!("({})/({})", num.display(), self.den.display()))
    }
}

/// Extended Euclid output: `a_cof·a + b_cof·b = g` with `g` monic.
#[derive(Clone, Debug, PartialEq)]
pub struct Gcrd {
    pub g: Mldo<MerForm>,
    pub a_cof: Mldo<MerForm>,
    pub b_cof: Mldo<MerForm>,
}

impl Mldo<MerForm> {
    pub fn from_modular(a: &Mldo<ModForm>) -> Self {
        a.map(|c| MerForm::from_form(c.clone()))
    }

    /// Back to polynomial coefficients, if every denominator is 1.
    pub fn to_modular(&self) -> Option<Mldo<ModForm>> {
        let coeffs: Option<Vec<ModForm>> = self.coeffs().iter().map(|c| c.to_form()).collect();
        coeffs.map(Mldo::from_coeffs)
    }

    /// `self = q·b + r` with `ord(r) < ord(b)`.
    pub fn euclid_div_right(&self, b: &Self) -> Result<(Self, Self)> {
        let inv = b.top().inv().ok_or(if b.is_zero() {
            Error::ZeroOperator
        } else {
            Error::NotHomogeneous
        })?;
        self.reduce_right(b, |t| Some(t.clone() * inv.clone()))?
            .ok_or(Error::NotHomogeneous)
    }

    /// `self = b·q + r` with `ord(r) < ord(b)`.
    pub fn euclid_div_left(&self, b: &Self) -> Result<(Self, Self)> {
        let inv = b.top().inv().ok_or(if b.is_zero() {
            Error::ZeroOperator
        } else {
            Error::NotHomogeneous
        })?;
        self.reduce_left(b, |t| Some(inv.clone() * t.clone()))?
            .ok_or(Error::NotHomogeneous)
    }

    /// Runs the right Euclidean algorithm, keeping cofactors. Returns the
    /// last nonzero remainder row and the row that annihilates.
    fn euclid_rows(&self, b: &Self) -> Result<[(Self, Self, Self); 2]> {
        let mut prev = (self.clone(), Self::one(), Self::zero());
        let mut cur = (b.clone(), Self::zero(), Self::one());
        if cur.0.is_zero() {
            std::mem::swap(&mut prev, &mut cur);
        }
        while !cur.0.is_zero() {
            let (q, r) = prev.0.euclid_div_right(&cur.0)?;
            let s = &prev.1 - &(&q * &cur.1);
            let t = &prev.2 - &(&q * &cur.2);
            prev = std::mem::replace(&mut cur, (r, s, t));
        }
        Ok([prev, cur])
    }

    /// Monic greatest common right divisor with Bezout cofactors.
    pub fn gcrd(&self, b: &Self) -> Result<Gcrd> {
        if self.is_zero() && b.is_zero() {
            return Err(Error::BothZero);
        }
        let [(g, s, t), _] = self.euclid_rows(b)?;
        let inv = Mldo::from_coeff(g.top().inv().ok_or(Error::NotHomogeneous)?);
        Ok(Gcrd {
            g: &inv * &g,
            a_cof: &inv * &s,
            b_cof: &inv * &t,
        })
    }

    /// Monic least common left multiple.
    pub fn lclm(&self, b: &Self) -> Result<Self> {
        if self.is_zero() || b.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let [_, (_, s, _)] = self.euclid_rows(b)?;
        (&s * self).make_monic().ok_or(Error::NotHomogeneous)
    }

    /// `(m, a0)` with `m·self = a0`, `a0` with polynomial coefficients of
    /// integral content 1 and `m` the least common denominator.
    pub fn clear_denoms(&self) -> (ModForm, Mldo<ModForm>) {
        let one = ModForm::constant(Rat::one());
        let mut m = self
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .fold(one, |acc, c| lcm_form(&acc, c.den()));
        let a0: Vec<ModForm> = self
            .coeffs()
            .iter()
            .map(|c| {
                let f = MerForm::from_form(m.clone()) * c.clone();
                f.to_form().expect("common denominator clears")
            })
            .collect();
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for f in &a0 {
            for (_, c) in f.terms() {
                den_lcm = den_lcm.lcm(c.denom());
                num_gcd = num_gcd.gcd(c.numer());
            }
        }
        if num_gcd.is_zero() {
            return (m, Mldo::zero());
        }
        let s = Rat::new(den_lcm, num_gcd);
        m = m.scale(&s);
        (m, Mldo::from_coeffs(a0.iter().map(|f| f.scale(&s)).collect()))
    }

    /// An operator of order at most `ord(self)·ord(b)` killing `φψ` at weight
    /// `k + l` whenever `self[k]φ = 0` and `b[l]ψ = 0`. The result does not
    /// depend on `k` and `l`.
    ///
    /// Tracks `δ^r(φψ)` in the module spanned by `δ^iφ·δ^jψ` and stops at
    /// the first linear dependence.
    pub fn symmetric_product(&self, b: &Self) -> Result<Self> {
        let (Some(n), Some(m)) = (self.ord(), b.ord()) else {
            return Err(Error::ZeroOperator);
        };
        if !self.is_monic() || !b.is_monic() {
            return Err(Error::NotMonicTop);
        }
        if self.weight().is_none() || b.weight().is_none() {
            return Err(Error::NotHomogeneous);
        }
        if n == 0 || m == 0 {
            return Ok(Self::one());
        }
        let dim = n * m;
        let idx = |i: usize, j: usize| i * m + j;
        // δ of the vector with coordinates in the basis e_ij
        let step = |v: &[MerForm]| -> Vec<MerForm> {
            let mut out: Vec<MerForm> = v.iter().map(|c| c.derive()).collect();
            for i in 0..n {
                for j in 0..m {
                    let c = &v[idx(i, j)];
                    if c.is_zero() {
                        continue;
                    }
                    if i + 1 < n {
                        out[idx(i + 1, j)] = out[idx(i + 1, j)].clone() + c.clone();
                    } else {
                        for s in 0..n {
                            let a = self.coeff(s);
                            if !a.is_zero() {
                                out[idx(s, j)] = out[idx(s, j)].clone() - c.clone() * a;
                            }
                        }
                    }
                    if j + 1 < m {
                        out[idx(i, j + 1)] = out[idx(i, j + 1)].clone() + c.clone();
                    } else {
                        for s in 0..m {
                            let bs = b.coeff(s);
                            if !bs.is_zero() {
                                out[idx(i, s)] = out[idx(i, s)].clone() - c.clone() * bs;
                            }
                        }
                    }
                }
            }
            out
        };
        let mut vs: Vec<Vec<MerForm>> = Vec::new();
        let mut v = vec![MerForm::zero(); dim];
        v[0] = MerForm::one();
        loop {
            if !vs.is_empty() {
                let rows: Vec<Vec<MerForm>> = (0..dim)
                    .map(|r| vs.iter().map(|col| col[r].clone()).collect())
                    .collect();
                if let Some(x) = solve(&Matrix::from_rows(rows), &v) {
                    let r = vs.len();
                    let mut coeffs: Vec<MerForm> = x.into_iter().map(|c| -c).collect();
                    coeffs.push(MerForm::one());
                    debug_assert_eq!(coeffs.len(), r + 1);
                    return Ok(Mldo::from_coeffs(coeffs));
                }
            }
            let next = step(&v);
            vs.push(std::mem::replace(&mut v, next));
        }
    }
}

/// Default bound on the order of `a′` searched by [`ore_pair`].
pub const ORE_CAP: usize = 12;

/// Monic `a′` and `b′` in the polynomial ring with `a′·a = b′·b`, for
/// homogeneous `a` and monic homogeneous `b`.
///
/// Searches `a′ = δ^N + Σ g_i δ^(N−i)` with `g_i ∈ M_2i` for increasing `N`:
/// right reduction modulo monic `b` is left M-linear, so `a′a ≡ 0 (mod b)` is
/// a linear system over Q in the coefficients of the `g_i`.
pub fn ore_pair(a: &Mldo<ModForm>, b: &Mldo<ModForm>, cap: usize) -> Result<(Mldo<ModForm>, Mldo<ModForm>)> {
    if a.is_zero() {
        return Err(Error::ZeroOperator);
    }
    if !b.is_monic() {
        return Err(Error::NotMonicTop);
    }
    if a.weight().is_none() || b.weight().is_none() {
        return Err(Error::NotHomogeneous);
    }
    // rems[s] = δ^s·a mod b
    let mut rems = vec![a.divide_monic_right(b)?.1];
    let mut dpow = a.clone();
    for n in 0..=cap {
        if n > 0 {
            dpow = &Mldo::delta() * &dpow;
            rems.push(dpow.divide_monic_right(b)?.1);
        }
        let mut cols: Vec<Mldo<ModForm>> = Vec::new();
        let mut unknowns: Vec<(usize, Mono)> = Vec::new();
        for i in 1..=n {
            for mono in basis(2 * i as i64) {
                let g = ModForm::monomial(Rat::one(), mono.e4, mono.e6);
                cols.push(rems[n - i].scale_left(&g));
                unknowns.push((i, mono));
            }
        }
        let target = &rems[n];
        let mut keys: BTreeMap<(usize, Mono), usize> = BTreeMap::new();
        for op in cols.iter().chain(std::iter::once(target)) {
            for (s, c) in op.coeffs().iter().enumerate() {
                for (mono, _) in c.terms() {
                    let len = keys.len();
                    keys.entry((s, *mono)).or_insert(len);
                }
            }
        }
        let found = if keys.is_empty() {
            Some(vec![Rat::zero(); cols.len()])
        } else {
            let mut mat = Matrix::zeros(keys.len(), cols.len());
            let mut rhs = vec![Rat::zero(); keys.len()];
            for (j, op) in cols.iter().enumerate() {
                for (s, c) in op.coeffs().iter().enumerate() {
                    for (mono, v) in c.terms() {
                        mat.set(keys[&(s, *mono)], j, v.clone());
                    }
                }
            }
            for (s, c) in target.coeffs().iter().enumerate() {
                for (mono, v) in c.terms() {
                    rhs[keys[&(s, *mono)]] = -v.clone();
                }
            }
            solve(&mat, &rhs)
        };
        if let Some(x) = found {
            let mut coeffs = vec![ModForm::zero(); n + 1];
            coeffs[n] = ModForm::constant(Rat::one());
            for ((i, mono), v) in unknowns.iter().zip(x) {
                let t = ModForm::monomial(v, mono.e4, mono.e6);
                coeffs[n - i] = &coeffs[n - i] + &t;
            }
            let a1 = Mldo::from_coeffs(coeffs);
            let prod = &a1 * a;
            let b1 = prod.exact_div(b, crate::mldo::DivisionSide::Right)?;
            return Ok((a1, b1));
        }
    }
    Err(Error::PreconditionViolated(format!(
        "no Ore multiplier of order at most {cap}"
    )))
}
