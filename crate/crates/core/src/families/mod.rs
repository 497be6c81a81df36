//! Concrete operator families and the identity verification suite.

mod verify;

use crate::error::{Error, Result};
use crate::mldo::{apply_form, Mldo};
use crate::modform::{ModForm, QuasiModForm};
use crate::scalar::{int, Rat};

pub use verify::{verify_suite, verify_suite_with, Entry, Status, SuiteOptions, VerificationReport};



fn c(r: Rat) -> ModForm {
    ModForm::constant(r)
}

/// `δ^3 − ((3p² − 24p + 128)/2304)·e4·δ − (p²(p − 24)/55296)·e6`, whose
/// kernel at weight `p/2` contains `η^p(2z)`, `η^p(z/2)` and `η^p((z+1)/2)`.
pub fn phi_p(p: &Rat) -> Mldo<ModForm> {
    let p2 = p * p;
    let x = (int(3) * &p2 - int(24) * p + int(128)) / int(2304);
    let y = &p2 * (p - int(24)) / int(55296);
    Mldo::from_coeffs(vec![
        ModForm::e6().scale(&-y),
        ModForm::e4().scale(&-x),
        ModForm::zero(),
        c(int(1)),
    ])
}

/// The fourth-order analogue of [`phi_p`] for `η^p(3z)` and `η^p((z+j)/3)`:
/// the monic operator at weight 0 with characteristic roots `p/12` and
/// `j/3 − p/36` for `j = 0, 1, 2`.
pub fn psi_p(p: &Rat) -> Mldo<ModForm> {
    let p2 = p * p;
    let p3 = &p2 * p;
    let x = (&p2 - int(6) * p + int(18)) / int(216);
    let y = (&p3 - int(18) * &p2 + int(45) * p - int(81)) / int(5832);
    let z = &p2 * (&p2 - int(36) * p + int(288)) / int(559872);
    Mldo::from_coeffs(vec![
        ModForm::e4().pow(2).scale(&-z),
        ModForm::e6().scale(&-y),
        ModForm::e4().scale(&-x),
        ModForm::zero(),
        c(int(1)),
    ])
}

/// `δ^2 − (k(k + 2)/144)·e4` for `k ∈ {4, 6, 10}`.
pub fn kaneko_zagier(k: i64) -> Result<Mldo<ModForm>> {
    if ![4, 6, 10].contains(&k) {
        return Err(Error::UnsupportedWeight(k.to_string()));
    }
    let x = Rat::new((k * (k + 2)).into(), 144.into());
    Ok(Mldo::from_coeffs(vec![ModForm::e4().scale(&-x), ModForm::zero(), c(int(1))]))
}

/// `δ^3 − ((3n² − 12n + 32)/576)·e4·δ − (n²(n − 12)/6912)·e6`, which kills
/// the coset theta series of D_n at weight `n/2`.
pub fn dn_operator(n: u32) -> Result<Mldo<ModForm>> {
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()));
    }
    let n = int(n as i64);
    let n2 = &n * &n;
    let x = (int(3) * &n2 - int(12) * &n + int(32)) / int(576);
    let y = &n2 * (&n - int(12)) / int(6912);
    Ok(Mldo::from_coeffs(vec![
        ModForm::e6().scale(&-y),
        ModForm::e4().scale(&-x),
        ModForm::zero(),
        c(int(1)),
    ]))
}

/// The two-parameter family of quasimodular-coefficient operators of weight
/// 6 that annihilate E2 at weight 2.
pub fn e2_qm_operator(x: &Rat, y: &Rat) -> Mldo<QuasiModForm> {
    let e2 = QuasiModForm::e2();
    let e4 = QuasiModForm::e4();
    let e6 = QuasiModForm::e6();
    let a0 = &(&e2.pow(3).scale(&((int(1) - int(4) * x + int(24) * y) / int(288)))
        + &(&e2 * &e4).scale(&((int(-3) - int(4) * x + int(24) * y) / int(288))))
        + &e6.scale(&((int(1) - int(6) * x) / int(216)));
    let a1 = &e2.pow(2).scale(y) - &e4.scale(&Rat::new(13.into(), 72.into()));
    let a2 = e2.scale(x);
    Mldo::from_coeffs(vec![a0, a1, a2, QuasiModForm::constant(int(1))])
}

/// Applies [`e2_qm_operator`] to E2 at weight 2 and checks for the zero
/// quasimodular form.
pub fn e2_qm_identity(x: &Rat, y: &Rat) -> Result<bool> {
    let r = apply_form(&e2_qm_operator(x, y), &int(2), &QuasiModForm::e2())?;
    Ok(r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn phi_values() {
        assert_eq!(phi_p(&int(8)).coeff(1), ModForm::e4().scale(&rat(-1, 18)));
        let a = phi_p(&int(2));
        assert_eq!(a.coeff(1), ModForm::e4().scale(&rat(-23, 576)));
        assert_eq!(a.coeff(0), ModForm::e6().scale(&rat(11, 6912)));
        let z = phi_p(&int(0));
        assert_eq!(z.coeff(1), ModForm::e4().scale(&rat(-1, 18)));
        assert!(z.coeff(0).is_zero());
        assert_eq!((a.ord(), a.weight()), (Some(3), Some(6)));
    }

    #[test]
    fn psi_values() {
        let a = psi_p(&int(1));
        assert_eq!(a.coeff(2), ModForm::e4().scale(&rat(-13, 216)));
        assert_eq!(a.coeff(1), ModForm::e6().scale(&rat(53, 5832)));
        assert_eq!(a.coeff(0), ModForm::e4().pow(2).scale(&rat(-253, 559872)));
        assert_eq!((a.ord(), a.weight()), (Some(4), Some(8)));
        for p in [int(1), int(2), rat(7, 3), int(-5)] {
            let r = -&p / int(36);
            let roots = [&p / int(12), r.clone(), &r + rat(1, 3), &r + rat(2, 3)];
            assert_eq!(crate::spectra::construct_monic(&int(0), &roots).unwrap(), psi_p(&p));
        }
    }

    #[test]
    fn kaneko_zagier_values() {
        assert_eq!(kaneko_zagier(4).unwrap().coeff(0), ModForm::e4().scale(&rat(-1, 6)));
        assert_eq!(kaneko_zagier(6).unwrap().coeff(0), ModForm::e4().scale(&rat(-1, 3)));
        assert_eq!(kaneko_zagier(10).unwrap().coeff(0), ModForm::e4().scale(&rat(-5, 6)));
        assert!(matches!(kaneko_zagier(8), Err(Error::UnsupportedWeight(_))));
    }

    #[test]
    fn dn_matches_phi() {
        for n in 1..=12u32 {
            assert_eq!(dn_operator(n).unwrap(), phi_p(&int(2 * n as i64)));
        }
        assert_eq!(dn_operator(4).unwrap().coeff(1), ModForm::e4().scale(&rat(-1, 18)));
        let d1 = dn_operator(1).unwrap();
        assert_eq!(d1.coeff(1), ModForm::e4().scale(&rat(-23, 576)));
        assert_eq!(d1.coeff(0), ModForm::e6().scale(&rat(11, 6912)));
    }

    #[test]
    fn e2_identity() {
        for (x, y) in [(int(0), int(0)), (int(1), int(0)), (int(0), rat(1, 24)), (rat(-7, 5), rat(3, 11))] {
            assert!(e2_qm_identity(&x, &y).unwrap());
        }
    }
}
