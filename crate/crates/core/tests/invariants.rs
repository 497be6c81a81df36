mod common;

use mldo_core::annihilate::frobenius_solve;
use mldo_core::mldo::{apply_form, apply_series, DivisionSide};
use mldo_core::qseries::eisenstein;
use mldo_core::scalar::{int, rat, root_of_unity, Field};
use mldo_core::spectra::{charpoly, construct_monic, root_sum};
use mldo_core::{Cyc, Operator, QuasiModForm, Rat, Series};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_op(r: &mut ChaCha8Rng) -> Operator {
    let (ord, w) = common::shape(r, 3, 14);
    common::operator(r, ord, w)
}

fn random_cyc(r: &mut ChaCha8Rng) -> Cyc {
    let n = [1u64, 3, 4, 8, 12, 48][r.gen_range(0..6)];
    let poly = (0..6).map(|_| rat(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
    Cyc::from_poly(n, poly)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random_op(&mut r), random_op(&mut r), random_op(&mut r));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn top_and_order_are_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_op(&mut r), random_op(&mut r));
        let ab = &a * &b;
        prop_assert_eq!(ab.ord(), Some(a.ord().unwrap() + b.ord().unwrap()));
        prop_assert_eq!(ab.top(), &a.top() * &b.top());
        prop_assert_eq!(ab.weight(), Some(a.weight().unwrap() + b.weight().unwrap()));
    }

    #[test]
    fn bracket_with_forms_is_the_serre_derivative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = 2 * r.gen_range(2..=8);
        let f = common::form(&mut r, w, false);
        let d = Operator::delta();
        let fo = Operator::from_coeff(f.clone());
        prop_assert_eq!(&(&d * &fo) - &(&fo * &d), Operator::from_coeff(f.serre_d().unwrap()));
        prop_assert_eq!(fo.d_bracket(), Operator::from_coeff(f.derive()));
    }

    #[test]
    fn monic_division(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_op(&mut r);
        let ob = r.gen_range(1..=3);
        let b = common::monic(&mut r, ob);
        let (c, rem) = a.divide_monic_right(&b).unwrap();
        prop_assert_eq!(&(&c * &b) + &rem, a.clone());
        prop_assert!(rem.ord().is_none_or(|o| o < ob));
        let (c, rem) = a.divide_monic_left(&b).unwrap();
        prop_assert_eq!(&(&b * &c) + &rem, a.clone());
        prop_assert!(rem.ord().is_none_or(|o| o < ob));
        let ab = &a * &b;
        prop_assert_eq!(ab.exact_div(&b, DivisionSide::Right).unwrap(), a.clone());
        prop_assert_eq!(ab.exact_div(&a, DivisionSide::Left).unwrap(), b);
    }

    #[test]
    fn construct_then_charpoly(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4usize);
        let k = rat(r.gen_range(-6..=12), r.gen_range(1..=2));
        let mut roots: Vec<Rat> = (1..n).map(|_| rat(r.gen_range(-30..=30), 24)).collect();
        let s: Rat = roots.iter().fold(Rat::zero(), |acc, x| acc + x);
        roots.push(root_sum(&k, n) - s);
        let a = construct_monic(&k, &roots).unwrap();
        prop_assert!(a.is_monic() && a.weight() == Some(2 * n as i64));
        let mut got = charpoly(&k, &a).unwrap().rational_roots;
        roots.sort();
        got.sort();
        prop_assert_eq!(got, roots);
    }

    #[test]
    fn cyclotomic_field_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random_cyc(&mut r), random_cyc(&mut r), random_cyc(&mut r));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.checked_inv().unwrap(), Cyc::one());
        }
        let n = [3u64, 8, 24, 48][r.gen_range(0..4)];
        let j = r.gen_range(0..n as i64);
        prop_assert_eq!(root_of_unity(n, j).pow_i64(n as i64).unwrap(), Cyc::one());
    }

    #[test]
    fn rational_powers_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = int(8);
        let e4: Series = eisenstein(4, &t).unwrap();
        let p = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
        let q = rat(r.gen_range(-6..=6), r.gen_range(1..=4));
        let lhs = e4.pow_rational(&p).unwrap().pow_rational(&q).unwrap();
        let rhs = e4.pow_rational(&(&p * &q)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_action_matches_form_action(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_op(&mut r);
        let w = 2 * r.gen_range(0..=6);
        let f = QuasiModForm::from(common::form(&mut r, w, false));
        let k = int(w);
        let t = int(6);
        let exact = apply_form(&a, &k, &f).unwrap().qexp(&t).unwrap();
        let series = apply_series(&a, &k, &f.qexp(&t).unwrap(), &t).unwrap();
        prop_assert_eq!(series, exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn frobenius_solutions_are_killed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3usize);
        let k = int(r.gen_range(0..=4));
        // distinct roots on a 1/7 grid never differ by a positive integer
        let mut roots: Vec<Rat> = Vec::new();
        while roots.len() + 1 < n {
            let x = rat(r.gen_range(0..7), 7);
            if !roots.contains(&x) {
                roots.push(x);
            }
        }
        let s: Rat = roots.iter().fold(Rat::zero(), |acc, x| acc + x);
        let last = root_sum(&k, n) - s;
        let clash = roots.iter().any(|x| (x - &last).is_integer());
        prop_assume!(!clash);
        roots.push(last);
        let a = construct_monic(&k, &roots).unwrap();
        let t = int(6);
        let sols = frobenius_solve(&a, &k, &t).unwrap();
        prop_assert_eq!(sols.len(), n);
        for s in &sols {
            prop_assert!(apply_series(&a, &k, s, &t).unwrap().is_zero());
            prop_assert_eq!(s.lead_coeff(), Some(&Rat::one()));
        }
    }
}

#[test]
fn modform_ring_is_commutative() {
    let mut r = rng(7);
    for _ in 0..50 {
        let f = common::form(&mut r, 8, false);
        let g = common::form(&mut r, 10, false);
        assert_eq!(&f * &g, &g * &f);
        assert_eq!((&f * &g).weight().unwrap_or(18), 18);
    }
}
