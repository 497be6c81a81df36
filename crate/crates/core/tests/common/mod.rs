#![allow(dead_code)]

use mldo_core::modform::basis;
use mldo_core::scalar::int;
use mldo_core::{ModForm, Operator};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random element of M_w with small integer coordinates; `nonzero` retries
/// until the result is nonzero (M_w must then be nonzero).
pub fn form(rng: &mut ChaCha8Rng, w: i64, nonzero: bool) -> ModForm {
    let b = basis(w);
    loop {
        let f = b.iter().fold(ModForm::zero(), |acc, m| {
            let c = rng.gen_range(-3i64..=3);
            &acc + &ModForm::monomial(int(c), m.e4, m.e6)
        });
        if !nonzero || !f.is_zero() || b.is_empty() {
            return f;
        }
    }
}

/// Random homogeneous operator of order `ord` and weight `w` with nonzero top.
pub fn operator(rng: &mut ChaCha8Rng, ord: usize, w: i64) -> Operator {
    let coeffs = (0..=ord).map(|s| form(rng, w - 2 * s as i64, s == ord)).collect();
    Operator::from_coeffs(coeffs)
}

/// Random monic operator of order `ord` (weight `2·ord`).
pub fn monic(rng: &mut ChaCha8Rng, ord: usize) -> Operator {
    let mut coeffs: Vec<ModForm> = (0..ord).map(|s| form(rng, 2 * (ord - s) as i64, false)).collect();
    coeffs.push(ModForm::constant(int(1)));
    Operator::from_coeffs(coeffs)
}

/// Order and weight with `ord ≤ max_ord`, `w ≤ max_w`, and `M_(w − 2 ord) ≠ 0`.
pub fn shape(rng: &mut ChaCha8Rng, max_ord: usize, max_w: i64) -> (usize, i64) {
    loop {
        let ord = rng.gen_range(0..=max_ord);
        let w = 2 * rng.gen_range(0..=max_w / 2);
        if !basis(w - 2 * ord as i64).is_empty() {
            return (ord, w);
        }
    }
}
