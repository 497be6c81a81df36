//! Characteristic polynomials and root data of operators.
//!
//! For `a = Σ a_i δ^i` acting at weight `k`, the leading coefficient of
//! `a[k] q^λ` is `F(k, a, λ) = Σ a_i(∞) P_i(λ)` with
//! `P_i(λ) = Π_{t<i} (λ − (k + 2t)/12)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mldo::{DiffCoeff, DivisionSide, Mldo};
use crate::modform::{unit_monomial, ModForm};
use crate::scalar::{int, Rat, UPoly};

/// `F(k, a, λ)` with its rational roots split off.
#[derive(Clone, Debug, PartialEq)]
pub struct CharData {
    pub poly: UPoly<Rat>,
    /// Rational roots with multiplicity, ascending.
    pub rational_roots: Vec<Rat>,
    /// Monic factor without rational roots.
    pub residual: UPoly<Rat>,
    /// `F ≡ 0`, so every λ is a root.
    pub is_zero: bool,
}

impl CharData {
    pub fn from_poly(poly: UPoly<Rat>) -> Self {
        if poly.is_zero() {
            return CharData {
                poly,
                rational_roots: Vec::new(),
                residual: UPoly::zero(),
                is_zero: true,
            };
        }
        let (rational_roots, residual) = rational_roots(&poly);
        CharData {
            poly,
            rational_roots,
            residual,
            is_zero: false,
        }
    }

    /// All roots are rational.
    pub fn is_split(&self) -> bool {
        !self.is_zero && self.residual.degree() == Some(0)
    }

    pub fn lead(&self) -> Rat {
        self.poly.leading().cloned().unwrap_or_else(Rat::zero)
    }
}

fn factor_text(r: &Rat) -> String {
    if r.is_zero() {
        "λ".to_string()
    } else if r.is_negative() {
        format!("(λ + {})", -r)
    } else {
        format!("(λ - {r})")
    }
}

impl fmt::Display for CharData {
    /// Factored form, e.g. `λ(λ - 5/6)` or `(λ - 1/3)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero {
            return f.write_str("0");
        }
        let lead = self.lead();
        let mut out = String::new();
        if !lead.is_one() {
            if lead == -Rat::one() {
                out.push('-');
            } else if lead.is_integer() {
                out.push_str(&format!("{lead}*"));
            } else {
                out.push_str(&format!("({lead})*"));
            }
        }
        let mut i = 0;
        let roots = &self.rational_roots;
        while i < roots.len() {
            let mut j = i;
            while j < roots.len() && roots[j] == roots[i] {
                j += 1;
            }
            let base = factor_text(&roots[i]);
            let m = j - i;
            if m > 1 {
                if roots[i].is_zero() {
                    out.push_str(&format!("λ^{m}"));
                } else {
                    out.push_str(&format!("{base}^{m}"));
                }
            } else {
                out.push_str(&base);
            }
            i = j;
        }
        if self.residual.degree().is_some_and(|d| d > 0) {
            out.push_str(&format!("({})", self.residual.display_with("λ")));
        }
        if out.is_empty() || out == "-" {
            out.push('1');
        }
        f.write_str(&out)
    }
}

/// Sign changes of a Sturm sequence at `x`.
fn sign_changes(seq: &[UPoly<Rat>], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

/// An integer `B` with every complex root of the monic integer polynomial `g`
/// in `|z| < B`: `2·max |c_(n−i)|^(1/i)`, the last term using `|c_0/2|`.
fn fujiwara_bound(g: &UPoly<Rat>) -> Rat {
    let n = g.degree().unwrap_or(0);
    let mut best = BigInt::one();
    for i in 1..=n {
        let mut c = g.coeff(n - i).abs().ceil().to_integer();
        if i == n {
            c = (c + BigInt::one()) / BigInt::from(2);
        }
        let r = c.nth_root(i as u32) + BigInt::one();
        if r > best {
            best = r;
        }
    }
    Rat::from_integer(best * BigInt::from(2) + BigInt::one())
}

/// Distinct integer roots of a monic integer polynomial, ascending.
///
/// Real roots of the square-free part are isolated by Sturm bisection until
/// each interval is shorter than 1 and holds at most one integer.
fn integer_roots(g: &UPoly<Rat>) -> Vec<Rat> {
    let sf = {
        let d = g.gcd(&g.derivative());
        g.div_rem(&d).0.monic()
    };
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut seq = vec![sf.clone(), sf.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        // positive rescaling keeps every sign and tames coefficient growth
        let lead = r.leading().expect("nonzero").abs();
        seq.push(-r.scale(&lead.recip()));
    }
    let bound = fujiwara_bound(g);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if n == 0 {
            continue;
        }
        let width = &hi - &lo;
        if width < Rat::one() {
            // the only integer in (lo, hi], if any
            let m = Rat::from_integer(hi.floor().to_integer());
            if m > lo && sf.eval(&m).is_zero() {
                roots.push(m);
            }
            continue;
        }
        let mut mid = (&lo + &hi) / int(2);
        let mut step = &width / int(7);
        while sf.eval(&mid).is_zero() {
            if mid.is_integer() {
                roots.push(mid.clone());
            }
            // keep endpoints away from roots; the root itself is recorded
            // here and excluded from both halves by the shifted split
            mid = &mid + &step;
            step = step / int(3);
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Rational roots of `p` with multiplicity (ascending) and the monic
/// cofactor free of rational roots.
pub fn rational_roots(p: &UPoly<Rat>) -> (Vec<Rat>, UPoly<Rat>) {
    let Some(n) = p.degree() else {
        return (Vec::new(), UPoly::zero());
    };
    let f = p.monic();
    // x = Dλ turns f into a monic integer polynomial
    let d = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let d = Rat::from_integer(d);
    let g = UPoly::new(
        (0..=n)
            .map(|i| f.coeff(i) * num_traits::pow(d.clone(), n - i))
            .collect(),
    );
    let mut roots = Vec::new();
    let mut rest = f;
    for x in integer_roots(&g) {
        let r = x / &d;
        let lin = UPoly::linear(r.clone());
        loop {
            let (q, rem) = rest.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            roots.push(r.clone());
            rest = q;
        }
    }
    roots.sort();
    (roots, rest)
}

/// `P_i(λ)` at weight `k` for `i = 0..=n`.
fn falling_basis(k: &Rat, n: usize) -> Vec<UPoly<Rat>> {
    let mut out = vec![UPoly::constant(Rat::one())];
    for t in 0..n {
        let r = (k + int(2 * t as i64)) / int(12);
        let next = out[t].clone() * UPoly::linear(r);
        out.push(next);
    }
    out
}

/// `F(k, a, λ)`. Fails with `NotEvaluable` if a coefficient has a pole at
/// the cusp.
pub fn charpoly<C: DiffCoeff>(k: &Rat, a: &Mldo<C>) -> Result<CharData> {
    let n = a.coeffs().len();
    let basis = falling_basis(k, n.saturating_sub(1));
    let mut f = UPoly::zero();
    for (i, c) in a.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let v = c.eval_inf().ok_or(Error::NotEvaluable)?;
        if !v.is_zero() {
            f = f + basis[i].scale(&v);
        }
    }
    Ok(CharData::from_poly(f))
}

fn require_monic_2n(a: &Mldo<ModForm>) -> Result<usize> {
    let n = a.ord().ok_or(Error::ZeroOperator)?;
    if !a.is_monic() || a.weight() != Some(2 * n as i64) {
        return Err(Error::PreconditionViolated(
            "operator must be monic and homogeneous of weight 2·order".into(),
        ));
    }
    Ok(n)
}

/// Checks that the roots of `F(k, a, ·)` sum to `n(k + n − 1)/12`.
pub fn root_sum_check(k: &Rat, a: &Mldo<ModForm>) -> Result<bool> {
    let n = require_monic_2n(a)?;
    let f = charpoly(k, a)?;
    let sum = if n == 0 { Rat::zero() } else { -f.poly.coeff(n - 1) };
    Ok(sum == root_sum(k, n))
}

/// `n(k + n − 1)/12`.
pub fn root_sum(k: &Rat, n: usize) -> Rat {
    let n = int(n as i64);
    &n * (k + &n - int(1)) / int(12)
}

/// Coefficients `x_i` with `Π(λ − r) = Σ x_i P_i(λ)`.
fn falling_coordinates(k: &Rat, roots: &[Rat]) -> Vec<Rat> {
    let n = roots.len();
    let target = roots
        .iter()
        .fold(UPoly::constant(Rat::one()), |acc, r| acc * UPoly::linear(r.clone()));
    let basis = falling_basis(k, n);
    let mut rest = target;
    let mut x = vec![Rat::zero(); n + 1];
    for i in (0..=n).rev() {
        let c = rest.coeff(i);
        if !c.is_zero() {
            rest = rest - basis[i].scale(&c);
        }
        x[i] = c;
    }
    debug_assert!(rest.is_zero());
    x
}

/// A quasimonic operator of weight `l` and order `n = roots.len()` whose
/// characteristic roots at weight `k` are `roots`, with `a_i = x_i·u_(l−2i)`
/// for the canonical unit monomials `u_w`. For `l = 2n` this is
/// [`construct_monic`].
pub fn construct_quasimonic(k: &Rat, roots: &[Rat], l: i64) -> Result<Mldo<ModForm>> {
    let n = roots.len();
    if l == 2 * n as i64 {
        return construct_monic(k, roots);
    }
    let x = falling_coordinates(k, roots);
    let mut coeffs = vec![ModForm::zero(); n + 1];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let w = l - 2 * i as i64;
        let u = unit_monomial(w).ok_or(Error::WeightNotRealizable(w))?;
        coeffs[i] = u.scale(xi);
    }
    Ok(Mldo::from_coeffs(coeffs))
}

/// The monic operator of weight `2n` with characteristic roots `roots` at
/// weight `k`; needs `Σ roots = n(k + n − 1)/12`.
pub fn construct_monic(k: &Rat, roots: &[Rat]) -> Result<Mldo<ModForm>> {
    let n = roots.len();
    let sum = roots.iter().fold(Rat::zero(), |a, r| a + r);
    let expected = root_sum(k, n);
    if sum != expected {
        return Err(Error::RootSumMismatch {
            expected: expected.to_string(),
            actual: sum.to_string(),
        });
    }
    let x = falling_coordinates(k, roots);
    debug_assert!(n == 0 || x[n - 1].is_zero());
    let mut coeffs = vec![ModForm::zero(); n + 1];
    coeffs[n] = ModForm::constant(Rat::one());
    for i in 0..n.saturating_sub(1) {
        if x[i].is_zero() {
            continue;
        }
        let w = 2 * (n - i) as i64;
        let u = unit_monomial(w).ok_or(Error::WeightNotRealizable(w))?;
        coeffs[i] = u.scale(&x[i]);
    }
    Ok(Mldo::from_coeffs(coeffs))
}

/// Multiset intersection of two ascending root lists.
pub fn intersect_roots(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Output of [`map_solution_space`]: `c·b = d·a + r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionMap {
    pub c: Mldo<ModForm>,
    pub d: Mldo<ModForm>,
    /// Common roots removed from `ch(0, a)`, ascending.
    pub common: Vec<Rat>,
    /// The root fixed by the sum condition.
    pub lambda_star: Rat,
    /// Nonzero only in forced runs outside the proven range.
    pub remainder: Mldo<ModForm>,
    pub remainder_in_z: bool,
}

/// A monic `c` of order `n − N + 1` and weight `2n − 2N + 2` such that
/// `c·b` is right divisible by `a`, so that `b[k]` maps `ker a[k]` into
/// `ker c[k + l]`.
///
/// `c` has roots `{λ*} ∪ (ch(0, a) minus N common roots)` at weight `l`,
/// taking the smallest common roots. With `force`, the weight bound
/// `l + 2n − 2N ≤ 8` is not enforced and the remainder of `c·b` modulo `a`
/// is reported instead of failing.
pub fn map_solution_space(
    k: &Rat,
    a: &Mldo<ModForm>,
    b: &Mldo<ModForm>,
    big_n: usize,
    force: bool,
) -> Result<SolutionMap> {
    let n = require_monic_2n(a)?;
    let l = b.weight_checked()?;
    if b.top().eval_inf() != Rat::one() {
        return Err(Error::PreconditionViolated("b must be quasimonic".into()));
    }
    if big_n == 0 || big_n > n {
        return Err(Error::PreconditionViolated("need 1 <= N <= ord(a)".into()));
    }
    let bound = l + 2 * n as i64 - 2 * big_n as i64;
    if bound > 8 && !force {
        return Err(Error::WeightBoundViolated(bound));
    }
    let shift = k / int(12);
    let ch_a = charpoly(k, a)?;
    let ch_b = charpoly(k, b)?;
    let common = intersect_roots(&ch_a.rational_roots, &ch_b.rational_roots);
    if common.len() < big_n {
        return Err(Error::EmptyIntersection(big_n));
    }
    let common: Vec<Rat> = common[..big_n].iter().map(|r| r - &shift).collect();
    if !ch_a.is_split() {
        return Err(Error::IrrationalRoots);
    }
    let mut rest: Vec<Rat> = ch_a.rational_roots.iter().map(|r| r - &shift).collect();
    for r in &common {
        let pos = rest.iter().position(|x| x == r).expect("common root");
        rest.remove(pos);
    }
    let order_c = n - big_n + 1;
    let lw = int(l);
    let lambda_star = root_sum(&lw, order_c) - rest.iter().fold(Rat::zero(), |s, r| s + r);
    let mut roots_c = vec![lambda_star.clone()];
    roots_c.extend(rest);
    let c = construct_monic(&lw, &roots_c)?;
    let cb = &c * b;
    let (d, r) = cb.divide_monic_right(a)?;
    if !r.is_zero() && !force {
        return Err(Error::NotDivisible);
    }
    Ok(SolutionMap {
        remainder_in_z: r.in_z(),
        c,
        d,
        common,
        lambda_star,
        remainder: r,
    })
}

/// Checks `c·b = d·a` and returns `ch(k, a) ∩ ch(k, b)` (rational roots).
pub fn necessity_check(
    k: &Rat,
    a: &Mldo<ModForm>,
    b: &Mldo<ModForm>,
    c: &Mldo<ModForm>,
) -> Result<Vec<Rat>> {
    (c * b).exact_div(a, DivisionSide::Right)?;
    let ch_a = charpoly(k, a)?;
    let ch_b = charpoly(k, b)?;
    Ok(intersect_roots(&ch_a.rational_roots, &ch_b.rational_roots))
}
