//! Annihilators: monic operator search for quasimodular forms, Frobenius
//! solutions of monic equations, and operators rebuilt from solutions via
//! the modular Wronskian.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{solve_fraction_free, Matrix};
use crate::mldo::{apply_form, apply_series, Mldo};
use crate::modform::{basis, recognize, ModForm, Mono, QuasiModForm};
use crate::qseries::{eisenstein, eta_power_at, QSeries};
use crate::scalar::{int, Rat};
use crate::spectra::{charpoly, CharData};

/// A monic operator with an exact proof that it kills a form.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorCertificate {
    pub operator: Mldo<ModForm>,
    pub weight: Rat,
    pub order: usize,
    /// The operator applied to the form is the zero element of QM.
    pub verified: bool,
}

impl fmt::Display for AnnihilatorCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "weight={} order={} operator={} verified={}",
            self.weight, self.order, self.operator, self.verified
        )
    }
}

/// `D_k^(i) φ` for `i = 0..=n`, exactly.
fn serre_iterates(phi: &QuasiModForm, k: &Rat, n: usize) -> Result<Vec<QuasiModForm>> {
    let mut out = vec![phi.clone()];
    for i in 0..n {
        let next = out[i].serre_d(&(k + int(2 * i as i64)))?;
        out.push(next);
    }
    Ok(out)
}

/// A monic `δ^n + Σ_{i≥2} g_i δ^(n−i)` with `g_i ∈ M_2i` killing `φ` at weight
/// `k`, or `None` if there is none of order `n`.
///
/// The coefficients of the `g_i` are the unknowns of a linear system over Q,
/// ordered by `i` and then by the monomial basis; free unknowns are set to 0.
pub fn monic_annihilator(phi: &QuasiModForm, k: &Rat, n: usize) -> Result<Option<AnnihilatorCertificate>> {
    if n == 0 {
        return Ok(None);
    }
    if !phi.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let iter = serre_iterates(phi, k, n)?;
    let mut cols: Vec<QuasiModForm> = Vec::new();
    let mut unknowns: Vec<(usize, Mono)> = Vec::new();
    for i in 2..=n {
        for m in basis(2 * i as i64) {
            cols.push(&QuasiModForm::monomial(Rat::one(), m) * &iter[n - i]);
            unknowns.push((i, m));
        }
    }
    let target = &iter[n];
    let mut rows: BTreeMap<Mono, usize> = BTreeMap::new();
    for f in cols.iter().chain(std::iter::once(target)) {
        for (m, _) in f.terms() {
            let len = rows.len();
            rows.entry(*m).or_insert(len);
        }
    }
    let x = if rows.is_empty() {
        vec![Rat::zero(); cols.len()]
    } else if cols.is_empty() {
        return Ok(None);
    } else {
        let mut mat = Matrix::zeros(rows.len(), cols.len());
        for (j, f) in cols.iter().enumerate() {
            for (m, v) in f.terms() {
                mat.set(rows[m], j, v.clone());
            }
        }
        let mut rhs = vec![Rat::zero(); rows.len()];
        for (m, v) in target.terms() {
            rhs[rows[m]] = -v.clone();
        }
        match solve_fraction_free(&mat, &rhs) {
            Some(x) => x,
            None => return Ok(None),
        }
    };
    let mut coeffs = vec![ModForm::zero(); n + 1];
    coeffs[n] = ModForm::constant(Rat::one());
    for ((i, m), v) in unknowns.iter().zip(x) {
        coeffs[n - i] = &coeffs[n - i] + &ModForm::monomial(v, m.e4, m.e6);
    }
    let operator = Mldo::from_coeffs(coeffs);
    let verified = apply_form(&operator, k, phi)?.is_zero();
    Ok(Some(AnnihilatorCertificate {
        operator,
        weight: k.clone(),
        order: n,
        verified,
    }))
}

/// Least `n ≤ cap` with a monic annihilator of order `n`, with its witness;
/// `None` when every order up to `cap` fails.
pub fn mord(phi: &QuasiModForm, k: &Rat, cap: usize) -> Result<Option<AnnihilatorCertificate>> {
    for n in 1..=cap {
        if let Some(c) = monic_annihilator(phi, k, n)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `dwt(φ) = weight − depth`, with a witness of order at most `cap` at that
/// weight when one exists.
pub fn dwt(phi: &QuasiModForm, cap: usize) -> Result<(i64, Option<AnnihilatorCertificate>)> {
    if phi.is_zero() {
        return Err(Error::PreconditionViolated("dwt of zero".into()));
    }
    let w = phi.weight().ok_or(Error::NotHomogeneous)?;
    let s = phi.depth().expect("nonzero") as i64;
    let value = w - s;
    Ok((value, mord(phi, &int(value), cap)?))
}

fn frobenius_roots(ch: &CharData, n: usize) -> Result<Vec<Rat>> {
    if ch.is_zero || !ch.is_split() {
        return Err(Error::IrrationalRoots);
    }
    let roots = ch.rational_roots.clone();
    debug_assert_eq!(roots.len(), n);
    for w in roots.windows(2) {
        if w[0] == w[1] {
            return Err(Error::RepeatedRoots(w[0].to_string()));
        }
    }
    for a in &roots {
        for b in &roots {
            let d = a - b;
            if d.is_positive() && d.is_integer() {
                return Err(Error::ResonantRoots(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(roots)
}

/// One normalized series solution `q^λ(1 + O(q))` of `a[k] f = 0` per
/// characteristic root, known below `trunc`, in ascending order of `λ`.
///
/// Coefficients follow from `c_m F(k, a, λ + m) = −[q^(λ+m)] a[k](Σ_{j<m} c_j q^(λ+j))`;
/// the residual is kept up to date by adding `c_m·a[k] q^(λ+m)`.
pub fn frobenius_solve(a: &Mldo<ModForm>, k: &Rat, trunc: &Rat) -> Result<Vec<QSeries<Rat>>> {
    let n = a.ord().ok_or(Error::ZeroOperator)?;
    if !a.is_monic() {
        return Err(Error::NotMonicTop);
    }
    let ch = charpoly(k, a)?;
    let roots = frobenius_roots(&ch, n)?;
    let mut out = Vec::new();
    for lam in roots {
        let grid = lam.denom().to_u64().ok_or_else(|| Error::GridOverflow(lam.to_string()))?;
        let mut f: QSeries<Rat> = QSeries::zero(grid);
        let mut residual: QSeries<Rat> = QSeries::big_o(grid, trunc)?;
        let mut m = 0i64;
        loop {
            let mu = &lam + int(m);
            if &mu >= trunc {
                break;
            }
            let c = if m == 0 {
                Rat::one()
            } else {
                let r = residual.coeff(&mu);
                if r.is_zero() {
                    Rat::zero()
                } else {
                    -r / ch.poly.eval(&mu)
                }
            };
            if !c.is_zero() {
                let mono = QSeries::monomial(c, &mu, grid)?;
                residual = &residual + &apply_series(a, k, &mono, trunc)?;
                f = &f + &mono;
            }
            m += 1;
        }
        out.push(f.truncate(trunc)?);
    }
    Ok(out)
}

/// Result of [`kernel_containment`].
#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    /// `b` is right divisible by `a`.
    pub divisible: bool,
    /// `b[k]` kills the Frobenius basis of `a[k]` below the bound, when that
    /// basis exists.
    pub numeric: Option<bool>,
}

/// Decides `ker a[k] ⊂ ker b[k]` as right divisibility of `b` by monic `a`,
/// cross-checked on Frobenius solutions known below `trunc` when available.
pub fn kernel_containment(a: &Mldo<ModForm>, b: &Mldo<ModForm>, k: &Rat, trunc: &Rat) -> Result<Containment> {
    let (_, r) = b.divide_monic_right(a)?;
    let divisible = r.is_zero();
    let numeric = match frobenius_solve(a, k, trunc) {
        Ok(sols) => {
            let mut all = true;
            for f in &sols {
                if !apply_series(b, k, f, trunc)?.is_zero() {
                    all = false;
                }
            }
            Some(all)
        }
        Err(_) => None,
    };
    Ok(Containment { divisible, numeric })
}

/// Result of [`mason_mlde`].
#[derive(Clone, Debug, PartialEq)]
pub struct MasonResult {
    /// `n(k + n − 1) ≥ 12 Σ λ_i`.
    pub inequality_ok: bool,
    /// The monic operator, in the equality case.
    pub monic: Option<Mldo<ModForm>>,
    /// `24N − 2i` in the strict case.
    pub multiplier_exponent: Option<i64>,
    /// In the strict case, `Σ (−1)^j η^(24N−2i) W^j/η^(2l) δ^j`.
    pub operator: Option<Mldo<ModForm>>,
}

/// `D_k^(j) f` for `j = 0..=n` on a truncated series.
fn serre_series(f: &QSeries<Rat>, k: &Rat, n: usize) -> Result<Vec<QSeries<Rat>>> {
    let t = f.trunc().ok_or_else(|| Error::PreconditionViolated("series must be truncated".into()))?;
    let v = f.valuation().ok_or(Error::ZeroLeadingTerm)?;
    let e2: QSeries<Rat> = eisenstein(2, &(&t - &v))?;
    let mut out = vec![f.clone()];
    for j in 0..n {
        let g = &out[j];
        let w = (k + int(2 * j as i64)) / int(12);
        let next = (&g.theta() - &(&e2 * g).scale(&w)).truncate(&t)?;
        out.push(next);
    }
    Ok(out)
}

/// All permutations of `0..n` with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(Vec::new(), true)];
    }
    let mut out = Vec::new();
    for (p, even) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting at `pos` moves the new element past `len − pos` others
            let parity = (p.len() - pos) % 2 == 0;
            out.push((q, even == parity));
        }
    }
    out
}

fn det_series(cols: &[&Vec<QSeries<Rat>>], grid: u64) -> QSeries<Rat> {
    let n = cols.len();
    let mut acc: Option<QSeries<Rat>> = None;
    for (perm, even) in permutations(n) {
        let mut term = QSeries::one(grid);
        for (row, &c) in perm.iter().enumerate() {
            term = &term * &cols[c][row];
        }
        if !even {
            term = -term;
        }
        acc = Some(match acc {
            Some(a) => &a + &term,
            None => term,
        });
    }
    acc.unwrap_or_else(|| QSeries::one(grid))
}

fn recognize_err(e: Error) -> Error {
    match e {
        Error::UnderDetermined { available, needed, .. } => Error::InsufficientTruncation {
            needed: format!("{needed} integral coefficients"),
            available: available.to_string(),
        },
        Error::NoFit(w) => Error::RecognitionFailed(format!("no modular form of weight {w} fits")),
        other => other,
    }
}

/// Reconstructs the order-`n` equation of weight `k` satisfied by `n` series
/// with distinct leading exponents, following the modular Wronskian
/// argument. The series are taken as they are; the caller guarantees that
/// they span a modular representation.
pub fn mason_mlde(series: &[QSeries<Rat>], k: &Rat) -> Result<MasonResult> {
    let n = series.len();
    if n == 0 {
        return Err(Error::PreconditionViolated("no series".into()));
    }
    let mut lams = Vec::new();
    for s in series {
        lams.push(s.valuation().ok_or(Error::ZeroLeadingTerm)?);
    }
    let mut sorted = lams.clone();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::ExponentsNotDistinct);
    }
    let lam = lams.iter().fold(Rat::zero(), |a, b| a + b);
    let nn = int(n as i64);
    let l = &nn * (k + &nn - int(1));
    let inequality_ok = l >= int(12) * &lam;
    let grid = series.iter().fold(1u64, |g, s| num_integer::lcm(g, s.grid()));
    let rows: Vec<Vec<QSeries<Rat>>> = series
        .iter()
        .map(|s| serre_series(&s.with_grid(grid)?, k, n))
        .collect::<Result<_>>()?;
    // column j of the Wronskian matrix is (D^j f_1, …, D^j f_n)
    let cols: Vec<Vec<QSeries<Rat>>> = (0..=n)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let minors: Vec<QSeries<Rat>> = (0..=n)
        .map(|j| {
            let sel: Vec<&Vec<QSeries<Rat>>> = (0..=n).filter(|&c| c != j).map(|c| &cols[c]).collect();
            det_series(&sel, grid)
        })
        .collect();
    let w = &minors[n];
    let vw = w.valuation().ok_or(Error::ZeroLeadingTerm)?;
    let tw = w.trunc().expect("truncated inputs");

    // multiplier: W/η^(2l) has exponents in i/12 + Z
    let (eta_exp, weight_shift, mult) = if inequality_ok && l == int(12) * &lam {
        (-int(2) * &l, 0i64, None)
    } else {
        let lead = &vw - &l / int(12);
        let frac = &lead - Rat::from_integer(lead.floor().to_integer());
        let i12 = frac * int(12);
        if !i12.is_integer() {
            return Err(Error::RecognitionFailed("multiplier is not a power of the eta character".into()));
        }
        let i = i12.to_integer().to_i64().expect("small");
        let big_n = (Rat::from_integer(i.into()) / int(12) - &lam + &l / int(12)).ceil();
        let big_n = big_n.to_integer().to_i64().expect("small");
        let e = 24 * big_n - 2 * i;
        (int(e) - int(2) * &l, 12 * big_n - i, Some(e))
    };
    let v_eta = &eta_exp / int(24);
    let eta_trunc = &tw - &vw + &v_eta;
    let eta_p: QSeries<Rat> = eta_power_at(&eta_exp, &Rat::one(), &Rat::zero(), false, &eta_trunc, grid)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for (j, m) in minors.iter().enumerate() {
        let h = (m * &eta_p).reduce_grid();
        let weight = weight_shift + 2 * (n - j) as i64;
        let f = recognize(&h, weight).map_err(recognize_err)?;
        coeffs.push(if j % 2 == 0 { f } else { -f });
    }
    if mult.is_none() {
        let top = coeffs[n]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::RecognitionFailed("Wronskian quotient is not a nonzero constant".into()))?;
        let inv = top.recip();
        let op = Mldo::from_coeffs(coeffs.iter().map(|c| c.scale(&inv)).collect());
        return Ok(MasonResult {
            inequality_ok,
            monic: Some(op),
            multiplier_exponent: None,
            operator: None,
        });
    }
    Ok(MasonResult {
        inequality_ok,
        monic: None,
        multiplier_exponent: mult,
        operator: Some(Mldo::from_coeffs(coeffs)),
    })
}
