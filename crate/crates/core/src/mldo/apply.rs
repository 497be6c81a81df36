//! Operators acting on weighted functions: `a[k] f = Σ a_i·D_k^(i) f`.


use super::{Mldo, PolyCoeff};
use crate::error::Result;
use crate::modform::QuasiModForm;
use crate::qseries::QSeries;
use crate::scalar::{int, Rat, Scalar};

/// q-expansions of the coefficients of `a`, known below `trunc`.
pub fn expand_coefficients<C: PolyCoeff>(a: &Mldo<C>, trunc: &Rat) -> Result<Vec<QSeries<Rat>>> {
    a.coeffs().iter().map(|c| c.to_quasi().qexp(trunc)).collect()
}

/// `a[k] f` below `trunc`. Fails with `InsufficientTruncation` if `f` is not
/// known that far.
///
/// Uses `D_k^(i+1) f = θ(D_k^(i) f) − ((k + 2i)/12)·E2·D_k^(i) f`; neither step
/// loses precision because E2 starts at `q^0`.
pub fn apply_series<C: PolyCoeff, S: Scalar>(
    a: &Mldo<C>,
    k: &Rat,
    f: &QSeries<S>,
    trunc: &Rat,
) -> Result<QSeries<S>> {
    f.require(trunc)?;
    let g0 = f.truncate(trunc)?;
    let v = match g0.valuation() {
        Some(v) => v,
        None => return QSeries::big_o(g0.grid(), trunc),
    };
    let depth = trunc - &v;
    let to_s = |s: &QSeries<Rat>| s.map(|c| S::from_rat(c));
    let e2 = to_s(&QuasiModForm::e2().qexp(&depth)?);
    let coeffs: Vec<QSeries<S>> = expand_coefficients(a, &depth)?.iter().map(to_s).collect();
    let mut acc = QSeries::big_o(g0.grid(), trunc)?;
    let mut g = g0;
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(c * &g);
        }
        if i + 1 < coeffs.len() {
            let w = (k + int(2 * i as i64)) / int(12);
            g = &g.theta() - &(&e2 * &g).scale(&S::from_rat(&w));
        }
    }
    acc.truncate(trunc)
}

/// `a(f, k)` computed exactly in QM for a homogeneous quasimodular `f`.
pub fn apply_form<C: PolyCoeff>(a: &Mldo<C>, k: &Rat, f: &QuasiModForm) -> Result<QuasiModForm> {
    let mut acc = QuasiModForm::zero();
    let mut g = f.clone();
    for (i, c) in a.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(&c.to_quasi() * &g);
        }
        if i + 1 < a.coeffs().len() {
            g = g.serre_d(&(k + int(2 * i as i64)))?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::modform::ModForm;
    use crate::scalar::rat;

    type Op = Mldo<ModForm>;

    fn kz4() -> Op {
        &Op::delta_pow(2) - &Op::from_coeff(ModForm::e4().scale(&rat(1, 6)))
    }

    #[test]
    fn kaneko_zagier_on_e4() {
        let t = int(10);
        let s = ModForm::e4().qexp(&t).unwrap();
        assert!(apply_series(&kz4(), &int(4), &s, &t).unwrap().is_zero());
        assert!(apply_form(&kz4(), &int(4), ModForm::e4().as_quasi()).unwrap().is_zero());
    }

    #[test]
    fn constants_are_killed() {
        let one: QSeries<Rat> = QSeries::one(1).truncate(&int(5)).unwrap();
        assert!(apply_series(&Op::delta(), &int(0), &one, &int(5)).unwrap().is_zero());
    }

    #[test]
    fn leading_exponent_shift() {
        let lam = rat(1, 3);
        let k = rat(5, 2);
        let f: QSeries<Rat> = QSeries::monomial(int(1), &lam, 6).unwrap().truncate(&int(4)).unwrap();
        let g = apply_series(&Op::delta(), &k, &f, &int(4)).unwrap();
        assert_eq!(g.valuation(), Some(lam.clone()));
        assert_eq!(g.coeff(&lam), &lam - &k / int(12));
    }

    #[test]
    fn short_input_fails() {
        let f: QSeries<Rat> = QSeries::one(1).truncate(&int(3)).unwrap();
        assert!(matches!(
            apply_series(&Op::delta(), &int(0), &f, &int(5)),
            Err(Error::InsufficientTruncation { .. })
        ));
    }
}
