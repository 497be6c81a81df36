//! Builtin series specs for `--series`.
//!
//! A spec is a `*`-separated product of factors:
//!
//! | factor | series |
//! |---|---|
//! | `E2`, `E4`, `E6`, `delta` | Eisenstein series, the discriminant |
//! | `eta^p` | `η(z)^p` |
//! | `eta2z^p`, `etahalf^p` | `η^p(2z)`, `η^p(z/2)` |
//! | `etahalfshift^p` | `η^p((z+1)/2)` without its constant phase |
//! | `eta3z^p`, `etathird<j>^p` | `η^p(3z)`, `η^p((z+j)/3)` without its phase |
//! | `thetaD:n:coset` | coset theta series of D_n, coset in `0, s, t, s+t` |
//!
//! `^p` is optional and defaults to 1; `p` is an integer or `a/b`.

use mldo_core::modform::QuasiModForm;
use mldo_core::qseries::{eta_power_at, theta_dn, Coset};
use mldo_core::scalar::{int, parse_rat, rat};
use mldo_core::{Cyc, CycSeries, Error, ModForm, Rat, Result, Series};
use num_traits::One;

/// A series over Q, or over a cyclotomic field when a factor needs one.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesValue {
    Rat(Series),
    Cyc(CycSeries),
}

impl SeriesValue {
    fn to_cyc(&self) -> CycSeries {
        match self {
            SeriesValue::Rat(s) => s.map(|c| Cyc::from_rat(c.clone())),
            SeriesValue::Cyc(s) => s.clone(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (SeriesValue::Rat(a), SeriesValue::Rat(b)) => SeriesValue::Rat(a * b),
            _ => SeriesValue::Cyc(&self.to_cyc() * &other.to_cyc()),
        }
    }

    pub fn truncate(&self, t: &Rat) -> Result<Self> {
        Ok(match self {
            SeriesValue::Rat(s) => SeriesValue::Rat(s.truncate(t)?),
            SeriesValue::Cyc(s) => SeriesValue::Cyc(s.truncate(t)?),
        })
    }

    /// Lifts every cyclotomic coefficient into Q(ζ_N).
    pub fn in_field(self, order: u64) -> Result<Self> {
        match self {
            SeriesValue::Rat(s) => Ok(SeriesValue::Rat(s)),
            SeriesValue::Cyc(s) => {
                if let Some((_, c)) = s.terms().find(|(_, c)| order % c.order() != 0) {
                    return Err(Error::PreconditionViolated(format!(
                        "coefficient {c} is not in Q(zeta({order}))"
                    )));
                }
                Ok(SeriesValue::Cyc(s.map(|c| c.lift(order))))
            }
        }
    }

    pub fn to_rat(&self) -> Option<Series> {
        match self {
            SeriesValue::Rat(s) => Some(s.clone()),
            SeriesValue::Cyc(s) => {
                if s.terms().any(|(_, c)| c.as_rat().is_none()) {
                    return None;
                }
                Some(s.map(|c| c.as_rat().expect("checked rational")))
            }
        }
    }
}

impl std::fmt::Display for SeriesValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesValue::Rat(s) => s.fmt(f),
            SeriesValue::Cyc(s) => s.fmt(f),
        }
    }
}

fn bad(spec: &str, msg: &str) -> Error {
    Error::Syntax {
        pos: 0,
        msg: format!("series spec {spec:?}: {msg}"),
    }
}

fn factor(spec: &str, t: &Rat, grid: u64) -> Result<SeriesValue> {
    if let Some(rest) = spec.strip_prefix("thetaD:") {
        let (n, coset) = rest.split_once(':').ok_or_else(|| bad(spec, "expected thetaD:n:coset"))?;
        let n: usize = n.parse().map_err(|_| bad(spec, "n must be a positive integer"))?;
        return Ok(SeriesValue::Rat(theta_dn(n, Coset::parse(coset)?, t, grid)?));
    }
    let (name, p) = match spec.split_once('^') {
        Some((name, p)) => (name, parse_rat(p)?),
        None => (spec, Rat::one()),
    };
    let rat_eta = |m: Rat, alpha: Rat, strip: bool| -> Result<SeriesValue> {
        Ok(SeriesValue::Rat(eta_power_at(&p, &m, &alpha, strip, t, grid)?))
    };
    let form = |f: QuasiModForm| -> Result<SeriesValue> {
        let e = u32::try_from(mldo_core::scalar::rat_to_i64(&p).ok_or_else(|| bad(spec, "power must be an integer"))?)
            .map_err(|_| bad(spec, "power must be nonnegative"))?;
        Ok(SeriesValue::Rat(f.pow(e).qexp(t)?.with_grid(grid)?))
    };
    match name {
        "E2" => form(QuasiModForm::e2()),
        "E4" => form(QuasiModForm::e4()),
        "E6" => form(QuasiModForm::e6()),
        "delta" | "Delta" => form(ModForm::delta().into_quasi()),
        "eta" => rat_eta(int(1), int(0), false),
        "eta2z" => rat_eta(int(2), int(0), false),
        "etahalf" => rat_eta(rat(1, 2), int(0), false),
        "etahalfshift" => rat_eta(rat(1, 2), rat(1, 2), true),
        "eta3z" => rat_eta(int(3), int(0), false),
        _ => {
            let j: i64 = name
                .strip_prefix("etathird")
                .and_then(|j| if j.is_empty() { Some(0) } else { j.parse().ok() })
                .filter(|j| (0..3).contains(j))
                .ok_or_else(|| bad(spec, "unknown series"))?;
            Ok(SeriesValue::Cyc(eta_power_at(&p, &rat(1, 3), &rat(j, 3), true, t, grid)?))
        }
    }
}

/// Evaluates a series spec below `t` on exponent grid `1/grid`.
pub fn series_from_spec(spec: &str, t: &Rat, grid: u64) -> Result<SeriesValue> {
    let mut acc: Option<SeriesValue> = None;
    for f in spec.split('*') {
        let f = f.trim();
        if f.is_empty() {
            return Err(bad(spec, "empty factor"));
        }
        let v = factor(f, t, grid)?;
        acc = Some(match acc {
            None => v,
            Some(a) => a.mul(&v),
        });
    }
    acc.expect("split yields at least one factor").truncate(t)
}
