//! Truncated series in fractional powers of q.
//!
//! A [`QSeries`] stores its exponents as integers over a common denominator
//! (the grid) and carries its own validity bound: every coefficient strictly
//! below the bound is exact, nothing is known at or above it. Exact (finite)
//! series have no bound. Arithmetic computes the tightest bound that is still
//! correct, so precision loss is visible instead of silent.

mod generators;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};

pub use generators::{eisenstein, eta, eta_power_at, euler_product, theta_dn, Coset};

/// Largest exponent denominator accepted before reporting [`Error::GridOverflow`].
pub const MAX_GRID: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<S> {
    grid: u64,
    terms: BTreeMap<i64, S>,
    trunc: Option<i64>,
}

fn rat_on_grid(r: &Rat, grid: u64) -> Option<i64> {
    let scaled = r * Rat::from_integer(BigInt::from(grid));
    if scaled.is_integer() {
        scaled.to_integer().to_i64()
    } else {
        None
    }
}

fn grid_for(r: &Rat) -> Result<u64> {
    r.denom()
        .to_u64()
        .filter(|&d| d <= MAX_GRID)
        .ok_or_else(|| Error::GridOverflow(r.to_string()))
}

impl<S: Scalar> QSeries<S> {
    /// The exact zero series.
    pub fn zero(grid: u64) -> Self {
        assert!(grid >= 1, "grid must be positive");
        QSeries {
            grid,
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    /// `O(q^trunc)`.
    pub fn big_o(grid: u64, trunc: &Rat) -> Result<Self> {
        QSeries::zero(grid).truncate(trunc)
    }

    pub fn one(grid: u64) -> Self {
        Self::constant(S::one(), grid)
    }

    pub fn constant(c: S, grid: u64) -> Self {
        let mut s = Self::zero(grid);
        if !c.is_zero() {
            s.terms.insert(0, c);
        }
        s
    }

    /// `c·q^exp`, exact.
    pub fn monomial(c: S, exp: &Rat, grid: u64) -> Result<Self> {
        Self::from_terms(grid, [(exp.clone(), c)], None)
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Terms at or above
    /// `trunc` are dropped; repeated exponents are summed.
    pub fn from_terms(
        grid: u64,
        terms: impl IntoIterator<Item = (Rat, S)>,
        trunc: Option<Rat>,
    ) -> Result<Self> {
        let mut s = Self::zero(grid);
        for (e, c) in terms {
            let k = rat_on_grid(&e, grid).ok_or_else(|| Error::GridMismatch {
                exponent: e.to_string(),
                grid,
            })?;
            s.add_term(k, c);
        }
        match trunc {
            Some(t) => s.truncate(&t),
            None => Ok(s),
        }
    }

    fn add_term(&mut self, k: i64, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(k, sum);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn grid(&self) -> u64 {
        self.grid
    }

    fn exp(&self, k: i64) -> Rat {
        Rat::new(BigInt::from(k), BigInt::from(self.grid))
    }

    /// Validity bound, `None` for exact series.
    pub fn trunc(&self) -> Option<Rat> {
        self.trunc.map(|t| self.exp(t))
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Leading exponent, `None` if no nonzero term is known.
    pub fn valuation(&self) -> Option<Rat> {
        self.terms.keys().next().map(|&k| self.exp(k))
    }

    pub fn lead_coeff(&self) -> Option<&S> {
        self.terms.values().next()
    }

    /// Largest exponent with a known nonzero coefficient.
    pub fn max_exponent(&self) -> Option<Rat> {
        self.terms.keys().next_back().map(|&k| self.exp(k))
    }

    pub fn coeff(&self, e: &Rat) -> S {
        rat_on_grid(e, self.grid)
            .and_then(|k| self.terms.get(&k).cloned())
            .unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Rat, &S)> + '_ {
        self.terms.iter().map(|(&k, c)| (self.exp(k), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-expresses the series on a finer grid (a multiple of the current one).
    pub fn with_grid(&self, grid: u64) -> Result<Self> {
        if grid % self.grid != 0 {
            return Err(Error::GridMismatch {
                exponent: format!("1/{}", self.grid),
                grid,
            });
        }
        if grid > MAX_GRID {
            return Err(Error::GridOverflow(format!("1/{grid}")));
        }
        let f = (grid / self.grid) as i64;
        Ok(QSeries {
            grid,
            terms: self.terms.iter().map(|(&k, c)| (k * f, c.clone())).collect(),
            trunc: self.trunc.map(|t| t * f),
        })
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let g = self.grid.lcm(&other.grid);
        (
            self.with_grid(g).expect("grid overflow"),
            other.with_grid(g).expect("grid overflow"),
        )
    }

    /// Lowers the validity bound to `min(trunc, t)`.
    pub fn truncate(&self, t: &Rat) -> Result<Self> {
        let mut s = self.clone();
        let k = match rat_on_grid(t, s.grid) {
            Some(k) => k,
            None => {
                let g = s.grid.lcm(&grid_for(t)?);
                s = s.with_grid(g)?;
                rat_on_grid(t, g).ok_or_else(|| Error::GridOverflow(t.to_string()))?
            }
        };
        let k = s.trunc.map_or(k, |old| old.min(k));
        s.terms = s.terms.range(..k).map(|(&e, c)| (e, c.clone())).collect();
        s.trunc = Some(k);
        Ok(s)
    }

    /// Checks that the series is known below `t`.
    pub fn require(&self, t: &Rat) -> Result<()> {
        match self.trunc() {
            Some(have) if &have < t => Err(Error::InsufficientTruncation {
                needed: t.to_string(),
                available: have.to_string(),
            }),
            _ => Ok(()),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return QSeries {
                grid: self.grid,
                terms: BTreeMap::new(),
                trunc: self.trunc,
            };
        }
        QSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v.clone() * c.clone()))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplies by `q^r`.
    pub fn shift(&self, r: &Rat) -> Result<Self> {
        let mut s = self.clone();
        let k = match rat_on_grid(r, s.grid) {
            Some(k) => k,
            None => {
                let g = s.grid.lcm(&grid_for(r)?);
                s = s.with_grid(g)?;
                rat_on_grid(r, g).ok_or_else(|| Error::GridOverflow(r.to_string()))?
            }
        };
        Ok(QSeries {
            grid: s.grid,
            terms: s.terms.into_iter().map(|(e, c)| (e + k, c)).collect(),
            trunc: s.trunc.map(|t| t + k),
        })
    }

    /// `θ = q d/dq`.
    pub fn theta(&self) -> Self {
        QSeries {
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .filter(|(&k, _)| k != 0)
                .map(|(&k, c)| (k, c.clone() * S::from_rat(&self.exp(k))))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// `q ↦ e(alpha)·q^m`: each term `c·q^e` becomes `c·e(alpha·e)·q^(m·e)`.
    pub fn substitute(&self, m: &Rat, alpha: &Rat) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::PreconditionViolated(format!(
                "substitution scale {m} must be positive"
            )));
        }
        let new_grid = self.grid * grid_for(m)?;
        if new_grid > MAX_GRID {
            return Err(Error::GridOverflow(format!("1/{new_grid}")));
        }
        let num = m.numer().to_i64().ok_or_else(|| Error::GridOverflow(m.to_string()))?;
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let phase_arg = alpha * self.exp(k);
            let phase = S::root_of_unity(&phase_arg)
                .ok_or_else(|| Error::NonComputablePower(format!("e({phase_arg})")))?;
            terms.insert(k * num, c.clone() * phase);
        }
        let s = QSeries {
            grid: new_grid,
            terms,
            trunc: self.trunc.map(|t| t * num),
        };
        Ok(s.reduce_grid())
    }

    /// Coarsest grid that still represents every exponent and the bound.
    pub fn reduce_grid(&self) -> Self {
        let mut g = self.grid as i64;
        for &k in self.terms.keys().chain(self.trunc.iter()) {
            g = g.gcd(&k);
            if g == 1 {
                return self.clone();
            }
        }
        if g <= 1 {
            return self.clone();
        }
        QSeries {
            grid: self.grid / g as u64,
            terms: self.terms.iter().map(|(&k, c)| (k / g, c.clone())).collect(),
            trunc: self.trunc.map(|t| t / g),
        }
    }

    /// `f^p`, normalized by the canonical power of the leading coefficient.
    ///
    /// With `f = c·q^λ·(1 + u)`, the series part `(1 + u)^p` is produced by the
    /// recurrence `j·h_j = Σ_{i≥1} (p·i − (j − i))·u_i·h_{j−i}`, which reduces
    /// to the binomial expansion.
    pub fn pow_rational(&self, p: &Rat) -> Result<Self> {
        let (&lead_k, lead_c) = self.terms.iter().next().ok_or(Error::ZeroLeadingTerm)?;
        let cp = lead_c
            .pow_rat(p)
            .ok_or_else(|| Error::NonComputablePower(lead_c.to_string()))?;
        let inv = lead_c.checked_inv().ok_or(Error::ZeroLeadingTerm)?;
        let mut step = 0i64;
        for &k in self.terms.keys() {
            step = step.gcd(&(k - lead_k));
        }
        if step == 0 {
            step = self.grid as i64;
        }
        let u: BTreeMap<usize, S> = self
            .terms
            .iter()
            .skip(1)
            .map(|(&k, c)| (((k - lead_k) / step) as usize, c.clone() * inv.clone()))
            .collect();
        let count = match self.trunc {
            Some(t) => ((t - lead_k) + step - 1).div_euclid(step) as usize,
            None => {
                let nonneg_int = p.is_integer() && !p.is_negative();
                if !nonneg_int {
                    return Err(Error::PreconditionViolated(
                        "non-integer power of an exact series needs a truncation bound".into(),
                    ));
                }
                let deg = u.keys().next_back().copied().unwrap_or(0);
                deg * p.to_integer().to_usize().unwrap_or(0) + 1
            }
        };
        let ps = S::from_rat(p);
        let mut h: Vec<S> = Vec::with_capacity(count);
        h.push(S::one());
        for j in 1..count {
            let mut acc = S::zero();
            for (&i, ui) in u.range(1..=j) {
                let hj = &h[j - i];
                if hj.is_zero() {
                    continue;
                }
                let w = ps.clone() * S::from_int(i as i64) - S::from_int((j - i) as i64);
                acc = acc + w * ui.clone() * hj.clone();
            }
            h.push(acc * S::from_rat(&Rat::new(BigInt::one(), BigInt::from(j))));
        }
        let lam = self.exp(lead_k);
        let plam = p * &lam;
        let grid = self.grid.lcm(&grid_for(&plam)?);
        if grid > MAX_GRID {
            return Err(Error::GridOverflow(format!("1/{grid}")));
        }
        let base = rat_on_grid(&plam, grid).ok_or_else(|| Error::GridOverflow(plam.to_string()))?;
        let f = (grid / self.grid) as i64;
        let mut out = QSeries::zero(grid);
        for (j, c) in h.into_iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(base + j as i64 * step * f, c * cp.clone());
            }
        }
        out.trunc = self.trunc.map(|t| base + (t - lead_k) * f);
        Ok(out)
    }

    /// Applies a coefficient map to every term.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QSeries<T> {
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(k, v);
            }
        }
        QSeries {
            grid: self.grid,
            terms,
            trunc: self.trunc,
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let (a, b) = if self.grid == other.grid {
            (self.clone(), other.clone())
        } else {
            self.unify(other)
        };
        // valuation of an unknown-zero series is its bound
        let va = a.terms.keys().next().copied().or(a.trunc);
        let vb = b.terms.keys().next().copied().or(b.trunc);
        let bound_from = |v: Option<i64>, t: Option<i64>| match (v, t) {
            (Some(v), Some(t)) => Some(v + t),
            _ => None,
        };
        let trunc = match (bound_from(va, b.trunc), bound_from(vb, a.trunc)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut acc: BTreeMap<i64, S> = BTreeMap::new();
        for (&ka, ca) in &a.terms {
            let range = match trunc {
                Some(t) => b.terms.range(..t - ka),
                None => b.terms.range(..),
            };
            for (&kb, cb) in range {
                let prod = ca.clone() * cb.clone();
                match acc.get_mut(&(ka + kb)) {
                    Some(v) => *v = v.clone() + prod,
                    None => {
                        acc.insert(ka + kb, prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        QSeries {
            grid: a.grid,
            terms: acc,
            trunc,
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        let (a, b) = if self.grid == other.grid {
            (self.clone(), other.clone())
        } else {
            self.unify(other)
        };
        let trunc = match (a.trunc, b.trunc) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut out = QSeries {
            grid: a.grid,
            terms: BTreeMap::new(),
            trunc,
        };
        for (k, c) in a.terms.into_iter().chain(b.terms) {
            if trunc.map_or(true, |t| k < t) {
                out.add_term(k, c);
            }
        }
        out
    }

    fn neg_ref(&self) -> Self {
        QSeries {
            grid: self.grid,
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl<S: Scalar> $tr<&QSeries<S>> for &QSeries<S> {
            type Output = QSeries<S>;
            fn $method(self, rhs: &QSeries<S>) -> QSeries<S> {
                self.$inner(rhs)
            }
        }
        impl<S: Scalar> $tr for QSeries<S> {
            type Output = QSeries<S>;
            fn $method(self, rhs: QSeries<S>) -> QSeries<S> {
                (&self).$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Mul, mul, mul_ref);

impl<S: Scalar> Sub<&QSeries<S>> for &QSeries<S> {
    type Output = QSeries<S>;
    fn sub(self, rhs: &QSeries<S>) -> QSeries<S> {
        self.add_ref(&rhs.neg_ref())
    }
}

impl<S: Scalar> Sub for QSeries<S> {
    type Output = QSeries<S>;
    fn sub(self, rhs: QSeries<S>) -> QSeries<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for QSeries<S> {
    type Output = QSeries<S>;
    fn neg(self) -> QSeries<S> {
        self.neg_ref()
    }
}

impl<S: Scalar> Neg for &QSeries<S> {
    type Output = QSeries<S>;
    fn neg(self) -> QSeries<S> {
        self.neg_ref()
    }
}

fn fmt_exponent(e: &Rat) -> String {
    format!("q^({e})")
}

impl<S: Scalar> fmt::Display for QSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let text = c.to_string();
            let simple = c.to_rat().is_some();
            let (neg, mag) = match c.to_rat() {
                Some(r) if r.is_negative() => (true, (-r).to_string()),
                Some(r) => (false, r.to_string()),
                None => (false, format!("({text})")),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if e.is_zero() {
                f.write_str(&mag)?;
            } else if simple && mag == "1" {
                f.write_str(&fmt_exponent(&e))?;
            } else {
                write!(f, "{mag}*{}", fmt_exponent(&e))?;
            }
        }
        if let Some(t) = self.trunc() {
            if first {
                write!(f, "O({})", fmt_exponent(&t))?;
            } else {
                write!(f, " + O({})", fmt_exponent(&t))?;
            }
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl QSeries<Rat> {
    /// Parses the printed form, e.g. `"1 - 24*q^(1) + O(q^(3))"`.
    pub fn parse(text: &str, grid: u64) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |pos: usize, msg: &str| Error::Syntax {
            pos,
            msg: msg.to_string(),
        };
        let mut terms = Vec::new();
        let mut trunc = None;
        let bytes = compact.as_bytes();
        let mut pos = 0;
        if compact.is_empty() {
            return Err(err(0, "empty series"));
        }
        if compact == "0" {
            return Ok(QSeries::zero(grid));
        }
        while pos < bytes.len() {
            let mut sign = Rat::one();
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                if bytes[pos] == b'-' {
                    sign = -sign;
                }
                pos += 1;
            } else if pos != 0 {
                return Err(err(pos, "expected '+' or '-'"));
            }
            let rest = &compact[pos..];
            if let Some(inner) = rest.strip_prefix("O(q^(") {
                let end = inner.find("))").ok_or_else(|| err(pos, "unterminated O(...)"))?;
                trunc = Some(crate::scalar::parse_rat(&inner[..end])?);
                pos += 6 + end + 2;
                continue;
            }
            let end = rest
                .char_indices()
                .skip(1)
                .find(|&(i, ch)| {
                    (ch == '+' || ch == '-') && !rest[..i].ends_with('(') && !rest[..i].ends_with('/')
                        && paren_depth(&rest[..i]) == 0
                })
                .map_or(rest.len(), |(i, _)| i);
            let term = &rest[..end];
            let (coeff, exp) = parse_term(term).map_err(|m| err(pos, &m))?;
            terms.push((exp, sign * coeff));
            pos += end;
        }
        QSeries::from_terms(grid, terms, trunc)
    }
}

fn paren_depth(s: &str) -> i32 {
    s.chars().fold(0, |d, c| match c {
        '(' => d + 1,
        ')' => d - 1,
        _ => d,
    })
}

fn parse_term(term: &str) -> std::result::Result<(Rat, Rat), String> {
    let (coeff_text, exp_text) = match term.find("q") {
        Some(i) => {
            let c = term[..i].trim_end_matches('*');
            let e = &term[i + 1..];
            let e = if e.is_empty() {
                "1".to_string()
            } else {
                let e = e.strip_prefix('^').ok_or("expected '^' after q")?;
                e.trim_start_matches('(').trim_end_matches(')').to_string()
            };
            (c.to_string(), e)
        }
        None => (term.to_string(), "0".to_string()),
    };
    let coeff_text = coeff_text.trim_start_matches('(').trim_end_matches(')');
    let coeff = if coeff_text.is_empty() {
        Rat::one()
    } else {
        crate::scalar::parse_rat(coeff_text).map_err(|e| e.to_string())?
    };
    let exp = crate::scalar::parse_rat(&exp_text).map_err(|e| e.to_string())?;
    Ok((coeff, exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{binom_rat, int, rat, root_of_unity, Cyc};

    type R = QSeries<Rat>;

    fn poly(cs: &[i64]) -> R {
        R::from_terms(1, cs.iter().enumerate().map(|(i, &c)| (int(i as i64), int(c))), None).unwrap()
    }

    #[test]
    fn product_of_binomials() {
        assert_eq!(poly(&[1, 1]) * poly(&[1, -1]), poly(&[1, 0, -1]));
    }

    #[test]
    fn half_powers_multiply() {
        let h = R::monomial(int(1), &rat(1, 2), 2).unwrap();
        assert_eq!(&h * &h, R::monomial(int(1), &int(1), 1).unwrap().with_grid(2).unwrap());
    }

    #[test]
    fn cancellation_moves_lead() {
        let a = R::from_terms(24, [(rat(1, 24), int(1)), (rat(25, 24), int(-1))], None).unwrap();
        let b = R::monomial(int(-1), &rat(1, 24), 24).unwrap();
        let s = a + b;
        assert_eq!(s.valuation(), Some(rat(25, 24)));
        assert_eq!(s.lead_coeff(), Some(&int(-1)));
    }

    #[test]
    fn truncation_bounds() {
        let a = poly(&[1, 1]).truncate(&int(5)).unwrap();
        let b = R::monomial(int(1), &int(2), 1).unwrap().truncate(&int(4)).unwrap();
        // known to O(q^5) times q^2·(1 + O(q^2)): min(0+4, 2+5) = 4
        assert_eq!((&a * &b).trunc(), Some(int(4)));
        let c = a.clone() + poly(&[0, 0, 0, 0, 0, 0, 7]);
        assert_eq!(c.trunc(), Some(int(5)));
        assert_eq!(c.coeff(&int(6)), int(0));
        let z = R::big_o(1, &int(3)).unwrap();
        assert_eq!((&z * &a).trunc(), Some(int(3)));
    }

    #[test]
    fn square_of_binomial() {
        assert_eq!(poly(&[1, 1]).pow_rational(&int(2)).unwrap(), poly(&[1, 2, 1]));
    }

    #[test]
    fn binomial_series_oracle() {
        let f = poly(&[1, -1]).truncate(&int(8)).unwrap();
        let h = f.pow_rational(&rat(1, 2)).unwrap();
        for n in 0..8u32 {
            let expect = binom_rat(&rat(1, 2), n) * if n % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(h.coeff(&int(n as i64)), expect);
        }
        assert_eq!(h.coeff(&int(1)), rat(-1, 2));
        assert_eq!(h.coeff(&int(2)), rat(-1, 8));
        assert_eq!(h.trunc(), Some(int(8)));
    }

    #[test]
    fn power_laws() {
        let f = R::from_terms(
            24,
            [(rat(1, 24), int(1)), (rat(25, 24), int(-1)), (rat(49, 24), int(3))],
            Some(rat(145, 24)),
        )
        .unwrap();
        let a = f.pow_rational(&rat(2, 3)).unwrap();
        let b = f.pow_rational(&rat(5, 7)).unwrap();
        let c = f.pow_rational(&(rat(2, 3) + rat(5, 7))).unwrap();
        assert!((&(&a * &b) - &c).is_zero());
        let inv = f.pow_rational(&int(-1)).unwrap();
        let one = &f * &inv;
        assert!((&one - &R::one(1)).is_zero());
    }

    #[test]
    fn leading_coefficient_power() {
        let f = R::constant(int(4), 1).truncate(&int(3)).unwrap();
        assert_eq!(f.pow_rational(&rat(1, 2)).unwrap().coeff(&int(0)), int(2));
        let g = R::constant(int(2), 1).truncate(&int(3)).unwrap();
        assert!(matches!(
            g.pow_rational(&rat(1, 2)),
            Err(Error::NonComputablePower(_))
        ));
        assert_eq!(R::zero(1).pow_rational(&int(2)), Err(Error::ZeroLeadingTerm));
    }

    #[test]
    fn sign_substitution() {
        let f = poly(&[1, 1]);
        assert_eq!(f.substitute(&int(1), &rat(1, 2)).unwrap(), poly(&[1, -1]));
    }

    #[test]
    fn cyclotomic_substitution() {
        let f: QSeries<Cyc> = QSeries::monomial(Cyc::one(), &int(1), 1).unwrap();
        let g = f.substitute(&rat(1, 2), &rat(1, 4)).unwrap();
        assert_eq!(g.coeff(&rat(1, 2)), root_of_unity(4, 1));
    }

    #[test]
    fn theta_derivative() {
        let f = R::from_terms(2, [(rat(1, 2), int(3)), (int(2), int(1))], None).unwrap();
        let t = f.theta();
        assert_eq!(t.coeff(&rat(1, 2)), rat(3, 2));
        assert_eq!(t.coeff(&int(2)), int(2));
    }

    #[test]
    fn print_and_parse() {
        let f = R::from_terms(
            24,
            [(rat(1, 24), int(1)), (rat(25, 24), rat(-3, 2)), (int(2), int(5))],
            Some(int(3)),
        )
        .unwrap();
        let text = f.to_string();
        assert_eq!(text, "q^(1/24) - 3/2*q^(25/24) + 5*q^(2) + O(q^(3))");
        assert_eq!(R::parse(&text, 24).unwrap(), f);
        assert_eq!(R::parse("1 - q + O(q^(2))", 1).unwrap(), poly(&[1, -1]).truncate(&int(2)).unwrap());
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(
            R::monomial(int(1), &rat(1, 5), 24),
            Err(Error::GridMismatch { .. })
        ));
    }
}
