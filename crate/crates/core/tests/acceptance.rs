//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one line; exits nonzero if any criterion fails or
//! exceeds its time limit.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mldo_core::annihilate::{dwt, frobenius_solve, mason_mlde, monic_annihilator, mord};
use mldo_core::families::{dn_operator, e2_qm_identity, kaneko_zagier, phi_p};
use mldo_core::mldo::apply_series;
use mldo_core::qseries::{eta_power_at, theta_dn, Coset};
use mldo_core::scalar::{int, rat, Scalar};
use mldo_core::spectra::{charpoly, map_solution_space, root_sum_check};
use mldo_core::{Cyc, CycSeries, MerOperator, ModForm, Operator, QuasiModForm, Rat, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c1_commutators() -> Outcome {
    let d = Operator::delta();
    let e4 = Operator::from_coeff(ModForm::e4());
    let e6 = Operator::from_coeff(ModForm::e6());
    let br = |a: &Operator, b: &Operator| &(a * b) - &(b * a);
    ensure(br(&d, &e4) == Operator::from_coeff(ModForm::e6().scale(&rat(-1, 3))), || "[δ,e4]".into())?;
    ensure(br(&d, &e6) == Operator::from_coeff(ModForm::e4().pow(2).scale(&rat(-1, 2))), || "[δ,e6]".into())?;
    ensure(br(&e4, &e6).is_zero(), || "[e4,e6]".into())?;
    Ok("three brackets exact".into())
}

fn c2_division() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut pairs = 0;
    while pairs < 200 {
        let (i, n) = common::shape(&mut rng, 3, 16);
        let (j, m) = common::shape(&mut rng, 3, 16);
        if j > i {
            continue;
        }
        let a = common::operator(&mut rng, i, n);
        let b = common::operator(&mut rng, j, m);
        let d = if rng.gen_bool(0.5) {
            ModForm::constant(int(1))
        } else {
            a.top().gcd_homogeneous(&b.top()).expect("homogeneous tops")
        };
        let l = d.weight().unwrap_or(0);
        let p = (m - 2 * j as i64) * (i - j + 1) as i64 - l - m + n;
        let q = p + m;
        let mult_w = (m - 2 * j as i64) * (i - j + 1) as i64 - l;
        for right in [true, false] {
            let g = ok(if right { a.divide_general_right(&b, &d) } else { a.divide_general_left(&b, &d) })?;
            let mm = Operator::from_coeff(g.multiplier.clone());
            let (lhs, rhs) = if right {
                (&mm * &a, &(&g.quotient * &b) + &g.remainder)
            } else {
                (&a * &mm, &(&b * &g.quotient) + &g.remainder)
            };
            let tag = format!("pair {pairs} (i={i}, n={n}, j={j}, m={m}, l={l}, right={right})");
            ensure(lhs == rhs, || format!("{tag}: identity"))?;
            ensure(g.remainder.ord().is_none_or(|o| o < j), || format!("{tag}: ord(c') >= j"))?;
            ensure(g.quotient.ord().is_none_or(|o| o <= i - j), || format!("{tag}: ord(c) > i - j"))?;
            ensure(g.quotient.is_zero() || g.quotient.weight() == Some(p), || format!("{tag}: weight(c) != {p}"))?;
            ensure(g.remainder.is_zero() || g.remainder.weight() == Some(q), || format!("{tag}: weight(c') != {q}"))?;
            ensure(g.multiplier.weight() == Some(mult_w), || format!("{tag}: multiplier weight"))?;
        }
        pairs += 1;
    }
    Ok("200 pairs, both sides".into())
}

fn c3_euclid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nontrivial = 0;
    for t in 0..50 {
        let (a, b) = if t % 2 == 0 {
            let (i, n) = loop {
                let s = common::shape(&mut rng, 3, 12);
                if s.0 > 0 {
                    break s;
                }
            };
            let (j, m) = common::shape(&mut rng, 3, 12);
            (common::operator(&mut rng, i, n), common::operator(&mut rng, j, m))
        } else {
            let (og, ox, oy) = (rng.gen_range(1..=2), rng.gen_range(0..=1), rng.gen_range(0..=1));
            let g = common::monic(&mut rng, og);
            let x = common::operator(&mut rng, ox, 4 + 2 * ox as i64);
            let y = common::operator(&mut rng, oy, 6 + 2 * oy as i64);
            (&x * &g, &y * &g)
        };
        let (a, b) = (MerOperator::from_modular(&a), MerOperator::from_modular(&b));
        let g = ok(a.gcrd(&b))?;
        let l = ok(a.lclm(&b))?;
        let ord = |x: &MerOperator| x.ord().unwrap_or(0);
        ensure(ord(&g.g) + ord(&l) == ord(&a) + ord(&b), || format!("pair {t}: degree identity"))?;
        ensure(&(&g.a_cof * &a) + &(&g.b_cof * &b) == g.g, || format!("pair {t}: Bezout"))?;
        ensure(g.g.is_monic() && l.is_monic(), || format!("pair {t}: not monic"))?;
        if ord(&g.g) > 0 {
            nontrivial += 1;
        }
    }
    Ok(format!("50 pairs, {nontrivial} with a nontrivial gcrd"))
}

fn c4_kaneko_zagier() -> Outcome {
    for (k, f) in [
        (4, QuasiModForm::e4()),
        (6, QuasiModForm::e6()),
        (10, &QuasiModForm::e4() * &QuasiModForm::e6()),
    ] {
        let cert = ok(monic_annihilator(&f, &int(k), 2))?.ok_or(format!("E{k}: none of order 2"))?;
        let x = rat(k * (k + 2), 144);
        let want = Operator::from_coeffs(vec![ModForm::e4().scale(&-x), ModForm::zero(), ModForm::constant(int(1))]);
        ensure(cert.operator == want, || format!("E{k}: got {}", cert.operator))?;
        ensure(cert.operator == ok(kaneko_zagier(k))?, || format!("E{k}: family mismatch"))?;
    }
    Ok("k = 4, 6, 10".into())
}

fn c5_e2() -> Outcome {
    let cert = ok(monic_annihilator(&QuasiModForm::e2(), &int(1), 3))?.ok_or("no order-3 annihilator")?;
    let want = Operator::from_coeffs(vec![
        ModForm::e6().scale(&rat(-1, 216)),
        ModForm::e4().scale(&rat(-23, 144)),
        ModForm::zero(),
        ModForm::constant(int(1)),
    ]);
    ensure(cert.operator == want, || format!("got {}", cert.operator))?;
    let (w, _) = ok(dwt(&QuasiModForm::e2(), 5))?;
    ensure(w == 1, || format!("dwt(E2) = {w}"))?;
    Ok(format!("{}; dwt = 1", cert.operator))
}

fn c6_phi() -> Outcome {
    let t = int(10);
    for p in [1i64, 2, 5, 7] {
        let pr = int(p);
        let a = phi_p(&pr);
        let k = &pr / int(2);
        for (m, alpha, strip) in [(int(2), int(0), false), (rat(1, 2), int(0), false), (rat(1, 2), rat(1, 2), true)] {
            let s: Series = ok(eta_power_at(&pr, &m, &alpha, strip, &t, 48))?;
            let r = ok(apply_series(&a, &k, &s, &t))?;
            ensure(r.is_zero() && r.trunc() == Some(t.clone()), || format!("p={p}, m={m}, alpha={alpha}: {r}"))?;
        }
    }
    Ok("12 series, O(q^10)".into())
}

fn c7_theta() -> Outcome {
    let t = int(10);
    for n in 1..=8u32 {
        let a = ok(dn_operator(n))?;
        for coset in Coset::ALL {
            let th: Series = ok(theta_dn(n as usize, coset, &t, 8))?;
            let r = ok(apply_series(&a, &rat(n as i64, 2), &th, &t))?;
            ensure(r.is_zero(), || format!("n={n}, coset {}: {r}", coset.name()))?;
        }
    }
    for n in 1..=4i64 {
        let eta: Series = ok(eta_power_at(&int(n), &int(1), &int(0), false, &t, 24))?;
        for coset in Coset::ALL {
            let th: Series = ok(theta_dn(n as usize, coset, &t, 24))?;
            let f = ok((&eta * &th).truncate(&t))?;
            let r = ok(apply_series(&phi_p(&int(2 * n)), &int(n), &f, &t))?;
            ensure(r.is_zero(), || format!("phi_{}(eta^{n} theta_{}): {r}", 2 * n, coset.name()))?;
        }
    }
    Ok("32 thetas, 16 eta-theta products".into())
}

fn c8_eta() -> Outcome {
    let t = int(6);
    let eta = |p: i64, m: Rat, alpha: Rat| -> Result<CycSeries, String> { ok(eta_power_at(&int(p), &m, &alpha, false, &t, 48)) };
    let lhs = &(&eta(1, int(2), int(0))? * &eta(1, rat(1, 2), int(0))?) * &eta(1, rat(1, 2), rat(1, 2))?;
    let rhs = eta(3, int(1), int(0))?.scale(&Cyc::root_of_unity(&rat(1, 48)).expect("root"));
    let d = ok((&lhs - &rhs).truncate(&t))?;
    ensure(d.is_zero(), || format!("product identity: {d}"))?;
    let s = &(&eta(8, int(2), int(0))?.scale(&Cyc::from_int(16)) + &eta(8, rat(1, 2), int(0))?)
        - &eta(8, rat(1, 2), rat(1, 2))?.scale(&Cyc::root_of_unity(&rat(-1, 6)).expect("root"));
    let s = ok(s.truncate(&t))?;
    ensure(s.is_zero(), || format!("eighth powers: {s}"))?;
    ensure(lhs.terms().any(|(_, c)| c.to_rat().is_none()), || "expected genuinely cyclotomic coefficients".into())?;
    Ok("both identities O(q^6) over Q(zeta_48)".into())
}

fn c9_example() -> Outcome {
    for p in [int(2), int(6)] {
        let a = phi_p(&p);
        let cases = [
            (
                -(&p * (&p - int(4))) / int(576),
                (int(3) * &p * &p + int(72) * &p + int(512)) / int(2304),
                (&p + int(16)) * (&p + int(16)) * (&p - int(8)) / int(55296),
            ),
            (
                -(&p * (&p + int(8))) / int(2304),
                (int(3) * &p * &p - int(72) * &p + int(512)) / int(2304),
                (&p - int(8)) * (&p - int(8)) * (&p - int(32)) / int(55296),
            ),
            (
                -((&p - int(16)) * (&p - int(24))) / int(2304),
                (int(3) * &p * &p - int(72) * &p + int(1664)) / int(2304),
                (&p + int(16)) * (&p - int(8)) * (&p - int(56)) / int(55296),
            ),
        ];
        for (x, c1, c0) in cases {
            let b = Operator::from_coeffs(vec![ModForm::e4().scale(&x), ModForm::zero(), ModForm::constant(int(1))]);
            let m = ok(map_solution_space(&int(0), &a, &b, 1, false))?;
            let want = Operator::from_coeffs(vec![
                ModForm::e6().scale(&-c0),
                ModForm::e4().scale(&-c1),
                ModForm::zero(),
                ModForm::constant(int(1)),
            ]);
            ensure(m.c == want, || format!("p={p}, x={x}: got {}", m.c))?;
            ensure(&m.c * &b == &m.d * &a, || format!("p={p}, x={x}: c·b != d·a"))?;
        }
    }
    Ok("6 (x, c) pairs".into())
}

fn c10_mord() -> Outcome {
    let mut table = Vec::new();
    for m in 0..=3u32 {
        let mut row = Vec::new();
        for n in 0..=3u32 {
            let phi = &QuasiModForm::e4().pow(m) * &QuasiModForm::e6().pow(n);
            let cert = ok(mord(&phi, &int(4 * m as i64 + 6 * n as i64), 5))?;
            let bound = m.max(n) as usize + 1;
            match &cert {
                Some(c) => {
                    ensure(c.verified, || format!("({m},{n}) unverified"))?;
                    ensure(c.order >= bound, || format!("({m},{n}): {} < {bound}", c.order))?;
                    if m == 0 || n == 0 || m == n {
                        ensure(c.order == bound, || format!("({m},{n}): {} != {bound}", c.order))?;
                    }
                }
                None => ensure(!(m == 0 || n == 0 || m == n), || format!("({m},{n}): none up to 5"))?,
            }
            row.push(cert.map_or(">5".to_string(), |c| c.order.to_string()));
        }
        table.push(row.join(" "));
    }
    Ok(format!("rows m=0..3: [{}]", table.join(" | ")))
}

fn c11_mason() -> Outcome {
    for (a, k) in [(phi_p(&int(2)), int(1)), (ok(kaneko_zagier(4))?, int(4))] {
        let sols = ok(frobenius_solve(&a, &k, &int(12)))?;
        ensure(sols.len() == a.ord().unwrap_or(0), || "solution count".into())?;
        let r = ok(mason_mlde(&sols, &k))?;
        ensure(r.monic.as_ref() == Some(&a), || format!("{a}: got {:?}", r.monic.map(|m| m.to_string())))?;
    }
    Ok("phi_2 and KZ4 recovered".into())
}

fn c12_qm() -> Outcome {
    for (x, y) in [(int(0), int(0)), (int(1), int(0)), (int(0), rat(1, 24))] {
        ensure(ok(e2_qm_identity(&x, &y))?, || format!("(x, y) = ({x}, {y})"))?;
    }
    Ok("3 parameter pairs".into())
}

fn c13_characteristic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let ops: Vec<Operator> = (0..50)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            common::monic(&mut rng, n)
        })
        .collect();
    for (idx, a) in ops.iter().enumerate() {
        let b = &ops[(idx * 7 + 3) % ops.len()];
        let k = rat(rng.gen_range(-12..=24), rng.gen_range(1..=4));
        let lhs = ok(charpoly(&k, &(a * b)))?.poly;
        // b[k] lands in weight k + wt(b), where a acts next
        let kb = &k + int(b.weight().expect("homogeneous"));
        let rhs = ok(charpoly(&kb, a))?.poly * ok(charpoly(&k, b))?.poly;
        ensure(lhs == rhs, || format!("op {idx}: F not multiplicative at k = {k}"))?;
        ensure(ok(root_sum_check(&k, a))?, || format!("op {idx}: root sum at k = {k}"))?;
    }
    for p in [int(1), rat(5, 3), int(-7), rat(13, 2), int(10)] {
        let mut got = ok(charpoly(&int(0), &phi_p(&p)))?.rational_roots;
        let mut want = vec![&p / int(24), -&p / int(48), rat(1, 2) - &p / int(48)];
        got.sort();
        want.sort();
        ensure(got == want, || format!("p={p}: roots {got:?}"))?;
    }
    Ok("50 operators, 5 values of p".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 13] = [
        ("commutation relations", c1_commutators, 1),
        ("division theorems", c2_division, 10),
        ("gcrd/lclm degree and Bezout identities", c3_euclid, 10),
        ("Kaneko-Zagier annihilators", c4_kaneko_zagier, 1),
        ("E2 witness and dwt", c5_e2, 1),
        ("phi_p on eta powers", c6_phi, 30),
        ("D_n theta operators", c7_theta, 60),
        ("eta identities over Q(zeta_48)", c8_eta, 10),
        ("solution-space example", c9_example, 5),
        ("mord table", c10_mord, 120),
        ("Mason round trip", c11_mason, 30),
        ("quasimodular E2 identity", c12_qm, 1),
        ("characteristic polynomial machinery", c13_characteristic, 5),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = match res {
            Ok(d) if took > Duration::from_secs(*limit) => Err(format!("{d}; too slow")),
            r => r,
        };
        let (tag, detail) = match &res {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        if res.is_err() {
            failed += 1;
        }
        println!(
            "{tag} {:>2}. {name}: {detail} [{:.3} s, limit {limit} s]",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
