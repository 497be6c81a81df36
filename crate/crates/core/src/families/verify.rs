//! The verification suite: every concrete identity, checked exactly on
//! forms or below a truncation bound on q-series.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::{One, Zero};

use super::{dn_operator, e2_qm_identity, kaneko_zagier, phi_p, psi_p};
use crate::annihilate::{frobenius_solve, mason_mlde, mord};
use crate::error::Result;
use crate::mldo::{apply_series, Mldo};
use crate::modform::{ModForm, QuasiModForm};
use crate::qseries::{eta_power_at, theta_dn, Coset, QSeries};
use crate::scalar::{int, rat, Cyc, Rat, Scalar};
use crate::spectra::{charpoly, construct_monic, map_solution_space, necessity_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub entries: Vec<Entry>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    /// One tab-separated `name, status, detail` record per line.
    pub fn to_records(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{}\t{}\t{}\n", e.name, e.status, e.detail))
            .collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "[{}] {}: {}", e.status, e.name, e.detail)?;
        }
        let passed = self.entries.iter().filter(|e| e.status == Status::Pass).count();
        write!(f, "{passed}/{} passed", self.entries.len())
    }
}

/// Suite parameters. `corrupt_phi` perturbs the `e4·δ` coefficient of the
/// operators used in the eta-power annihilation entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub trunc: Rat,
    pub corrupt_phi: Option<Rat>,
    pub threads: usize,
}

impl SuiteOptions {
    pub fn new(trunc: Rat) -> Self {
        SuiteOptions {
            trunc,
            corrupt_phi: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

type Check = Box<dyn Fn() -> Result<(bool, String)> + Send + Sync>;

struct Plan {
    checks: Vec<(String, Check)>,
}

impl Plan {
    fn add(&mut self, name: impl Into<String>, f: impl Fn() -> Result<(bool, String)> + Send + Sync + 'static) {
        self.checks.push((name.into(), Box::new(f)));
    }
}

fn zero_below<S: Scalar>(s: &QSeries<S>, t: &Rat) -> (bool, String) {
    if s.is_zero() {
        (true, format!("O(q^{t})"))
    } else {
        let v = s.valuation().expect("nonzero");
        (false, format!("residual starts at q^({v})"))
    }
}

fn equal_below<S: Scalar>(a: &QSeries<S>, b: &QSeries<S>, t: &Rat) -> Result<(bool, String)> {
    let d = (a - b).truncate(t)?;
    Ok(zero_below(&d, t))
}

fn eta_at(p: &Rat, m: Rat, alpha: Rat, strip: bool, t: &Rat, grid: u64) -> Result<QSeries<Rat>> {
    eta_power_at(p, &m, &alpha, strip, t, grid)
}

/// The three eta-power solutions of `φ_p` at weight `p/2`.
fn phi_solutions(p: &Rat, t: &Rat) -> Result<Vec<(&'static str, QSeries<Rat>)>> {
    let g = 48;
    Ok(vec![
        ("eta^p(2z)", eta_at(p, int(2), int(0), false, t, g)?),
        ("eta^p(z/2)", eta_at(p, rat(1, 2), int(0), false, t, g)?),
        ("eta^p((z+1)/2)", eta_at(p, rat(1, 2), rat(1, 2), true, t, g)?),
    ])
}

fn perturbed(a: Mldo<ModForm>, eps: &Option<Rat>) -> Mldo<ModForm> {
    match eps {
        Some(e) => &a + &Mldo::from_coeffs(vec![ModForm::zero(), ModForm::e4().scale(e)]),
        None => a,
    }
}

fn plan(opts: &SuiteOptions) -> Plan {
    let mut plan = Plan { checks: Vec::new() };
    let t = opts.trunc.clone();

    // Ramanujan identities and the Leibniz rule on q-expansions
    {
        let t = t.clone();
        plan.add("ramanujan.E2", move || {
            let e2 = QuasiModForm::e2();
            let lhs = e2.qexp(&t)?.theta();
            let rhs = (&e2.pow(2) - &QuasiModForm::e4()).scale(&rat(1, 12)).qexp(&t)?;
            equal_below(&lhs, &rhs, &t)
        });
    }
    for (name, f, w, df) in [
        ("ramanujan.E4", ModForm::e4(), 4, ModForm::e6().scale(&rat(-1, 3))),
        ("ramanujan.E6", ModForm::e6(), 6, ModForm::e4().pow(2).scale(&rat(-1, 2))),
    ] {
        let t = t.clone();
        plan.add(name, move || {
            let lhs = apply_series(&Mldo::<ModForm>::delta(), &int(w), &f.qexp(&t)?, &t)?;
            equal_below(&lhs, &df.qexp(&t)?, &t)
        });
    }
    {
        let t = t.clone();
        plan.add("leibniz.E4E6", move || {
            let d = Mldo::<ModForm>::delta();
            let (f, g) = (ModForm::e4().qexp(&t)?, ModForm::e6().qexp(&t)?);
            let lhs = apply_series(&d, &int(10), &(&f * &g), &t)?;
            let rhs = &(&apply_series(&d, &int(4), &f, &t)? * &g) + &(&f * &apply_series(&d, &int(6), &g, &t)?);
            equal_below(&lhs, &rhs, &t)
        });
    }

    // commutators
    plan.add("commutator.delta_e4", || {
        let d = Mldo::<ModForm>::delta();
        let e4 = Mldo::from_coeff(ModForm::e4());
        let br = &(&d * &e4) - &(&e4 * &d);
        Ok((br == Mldo::from_coeff(ModForm::e6().scale(&rat(-1, 3))), br.to_string()))
    });
    plan.add("commutator.delta_e6", || {
        let d = Mldo::<ModForm>::delta();
        let e6 = Mldo::from_coeff(ModForm::e6());
        let br = &(&d * &e6) - &(&e6 * &d);
        Ok((br == Mldo::from_coeff(ModForm::e4().pow(2).scale(&rat(-1, 2))), br.to_string()))
    });
    plan.add("commutator.e4_e6", || {
        let e4 = Mldo::from_coeff(ModForm::e4());
        let e6 = Mldo::from_coeff(ModForm::e6());
        let br = &(&e4 * &e6) - &(&e6 * &e4);
        Ok((br.is_zero(), br.to_string()))
    });
    plan.add("commutator.delta_Delta", || {
        let d = Mldo::<ModForm>::delta();
        let dl = Mldo::from_coeff(ModForm::delta());
        let br = &(&d * &dl) - &(&dl * &d);
        Ok((br.is_zero(), br.to_string()))
    });

    // φ_p on eta powers
    for p in [1i64, 2, 5, 7] {
        let names = ["eta^p(2z)", "eta^p(z/2)", "eta^p((z+1)/2)"];
        for (idx, sname) in names.iter().enumerate() {
            let t = t.clone();
            let eps = opts.corrupt_phi.clone();
            plan.add(format!("phi_p.p={p}.{sname}"), move || {
                let p = int(p);
                let a = perturbed(phi_p(&p), &eps);
                let s = phi_solutions(&p, &t)?.swap_remove(idx).1;
                Ok(zero_below(&apply_series(&a, &(&p / int(2)), &s, &t)?, &t))
            });
        }
    }
    {
        let t = t.clone();
        plan.add("phi_p.p=8.order2_factor", move || {
            let b = Mldo::from_coeffs(vec![ModForm::e4().scale(&rat(-1, 18)), ModForm::zero(), ModForm::constant(int(1))]);
            let p = int(8);
            let sols = phi_solutions(&p, &t)?;
            let mut ok = true;
            for (_, s) in &sols[..2] {
                ok &= apply_series(&b, &int(4), s, &t)?.is_zero();
            }
            Ok((ok, "δ^2 - (1/18)e4 kills eta^8(2z), eta^8(z/2)".into()))
        });
    }

    // ψ_1 over Q(ζ_3), grid 72
    {
        let t = t.clone();
        let eps = opts.corrupt_phi.clone();
        plan.add("psi_p.p=1", move || {
            let p = Rat::one();
            let a = perturbed(psi_p(&p), &eps).map(|c| c.clone());
            let mut sols: Vec<QSeries<Cyc>> = vec![eta_power_at(&p, &int(3), &int(0), false, &t, 72)?];
            for j in 0..3 {
                sols.push(eta_power_at(&p, &rat(1, 3), &rat(j, 3), true, &t, 72)?);
            }
            let mut ok = true;
            for s in &sols {
                ok &= apply_series(&a, &rat(1, 2), s, &t)?.is_zero();
            }
            Ok((ok, "eta(3z), eta((z+j)/3), j = 0, 1, 2".into()))
        });
    }

    // Kaneko–Zagier
    for k in [4i64, 6, 10] {
        let t = t.clone();
        plan.add(format!("kaneko_zagier.E{k}"), move || {
            let f = match k {
                4 => ModForm::e4(),
                6 => ModForm::e6(),
                _ => &ModForm::e4() * &ModForm::e6(),
            };
            Ok(zero_below(&apply_series(&kaneko_zagier(k)?, &int(k), &f.qexp(&t)?, &t)?, &t))
        });
    }

    // D_n thetas
    for n in (1..=8u32).chain([12]) {
        for coset in Coset::ALL {
            let t = t.clone();
            plan.add(format!("dn.n={n}.{}", coset.name()), move || {
                let th: QSeries<Rat> = theta_dn(n as usize, coset, &t, 8)?;
                let r = apply_series(&dn_operator(n)?, &rat(n as i64, 2), &th, &t)?;
                Ok(zero_below(&r, &t))
            });
        }
    }
    for n in 1..=4u32 {
        let t = t.clone();
        plan.add(format!("phi_2n_eta_theta.n={n}"), move || {
            let p = int(2 * n as i64);
            let eta_n: QSeries<Rat> = eta_power_at(&int(n as i64), &Rat::one(), &Rat::zero(), false, &t, 24)?;
            let mut ok = true;
            for coset in Coset::ALL {
                let th: QSeries<Rat> = theta_dn(n as usize, coset, &t, 24)?;
                let f = (&eta_n * &th).truncate(&t)?;
                ok &= apply_series(&phi_p(&p), &int(n as i64), &f, &t)?.is_zero();
            }
            Ok((ok, "all four cosets".into()))
        });
    }

    // eta identities over Q(ζ_48)
    {
        let t = t.clone();
        plan.add("eta.product", move || {
            let one = Rat::one();
            let a: QSeries<Cyc> = eta_power_at(&one, &int(2), &int(0), false, &t, 48)?;
            let b: QSeries<Cyc> = eta_power_at(&one, &rat(1, 2), &int(0), false, &t, 48)?;
            let c: QSeries<Cyc> = eta_power_at(&one, &rat(1, 2), &rat(1, 2), false, &t, 48)?;
            let lhs = &(&a * &b) * &c;
            let e3: QSeries<Cyc> = eta_power_at(&int(3), &one, &int(0), false, &t, 48)?;
            let rhs = e3.scale(&Cyc::root_of_unity(&rat(1, 48)).expect("cyclotomic"));
            equal_below(&lhs, &rhs, &t)
        });
    }
    {
        let t = t.clone();
        plan.add("eta.eighth_powers", move || {
            let p = int(8);
            let a: QSeries<Cyc> = eta_power_at(&p, &int(2), &int(0), false, &t, 48)?;
            let b: QSeries<Cyc> = eta_power_at(&p, &rat(1, 2), &int(0), false, &t, 48)?;
            let c: QSeries<Cyc> = eta_power_at(&p, &rat(1, 2), &rat(1, 2), false, &t, 48)?;
            let phase = Cyc::root_of_unity(&rat(-1, 6)).expect("cyclotomic");
            let s = &(&a.scale(&Cyc::from_int(16)) + &b) - &c.scale(&phase);
            Ok(zero_below(&s.truncate(&t)?, &t))
        });
    }
    {
        let t = t.clone();
        plan.add("eta.24th_power_is_Delta", move || {
            let e: QSeries<Rat> = eta_power_at(&int(24), &Rat::one(), &Rat::zero(), false, &t, 1)?;
            equal_below(&e, &ModForm::delta().qexp(&t)?, &t)
        });
    }

    // prescribed roots reproduce φ_p
    plan.add("construct_monic.phi_p", || {
        let mut ok = true;
        for p in [int(1), int(2), rat(5, 3), int(-7), rat(13, 2)] {
            let roots = [&p / int(24), -&p / int(48), rat(1, 2) - &p / int(48)];
            ok &= construct_monic(&int(0), &roots)? == phi_p(&p);
            let mut got = charpoly(&int(0), &phi_p(&p))?.rational_roots;
            let mut want = roots.to_vec();
            got.sort();
            want.sort();
            ok &= got == want;
        }
        Ok((ok, "p = 1, 2, 5/3, -7, 13/2".into()))
    });

    // the solution-space example
    for p in [2i64, 6] {
        type Case = (fn(&Rat) -> Rat, fn(&Rat) -> (Rat, Rat), fn(&Rat) -> Rat, &'static str);
        let cases: [Case; 3] = [
            (
                |p| -(p * (p - int(4))) / int(576),
                |p| {
                    let q = p + int(16);
                    ((int(3) * p * p + int(72) * p + int(512)) / int(2304), &q * &q * (p - int(8)) / int(55296))
                },
                |p| p / int(24),
                "p/24",
            ),
            (
                |p| -(p * (p + int(8))) / int(2304),
                |p| {
                    let q = p - int(8);
                    ((int(3) * p * p - int(72) * p + int(512)) / int(2304), &q * &q * (p - int(32)) / int(55296))
                },
                |p| -p / int(48),
                "-p/48",
            ),
            (
                |p| -((p - int(16)) * (p - int(24))) / int(2304),
                |p| {
                    (
                        (int(3) * p * p - int(72) * p + int(1664)) / int(2304),
                        (p + int(16)) * (p - int(8)) * (p - int(56)) / int(55296),
                    )
                },
                |p| rat(1, 2) - p / int(48),
                "1/2-p/48",
            ),
        ];
        for (xf, cf, rootf, label) in cases {
            plan.add(format!("example.p={p}.root={label}"), move || {
                let p = int(p);
                let a = phi_p(&p);
                let x = xf(&p);
                let b = Mldo::from_coeffs(vec![ModForm::e4().scale(&x), ModForm::zero(), ModForm::constant(int(1))]);
                let m = map_solution_space(&int(0), &a, &b, 1, false)?;
                let (c1, c0) = cf(&p);
                let expect = Mldo::from_coeffs(vec![
                    ModForm::e6().scale(&-c0),
                    ModForm::e4().scale(&-c1),
                    ModForm::zero(),
                    ModForm::constant(int(1)),
                ]);
                let common = necessity_check(&int(0), &a, &b, &m.c)?;
                let ok = m.c == expect && &(&m.c * &b) == &(&m.d * &a) && common.contains(&rootf(&p));
                Ok((ok, format!("x = {x}, c = {}", m.c)))
            });
        }
    }

    // E2 identity
    for (x, y) in [(int(0), int(0)), (int(1), int(0)), (int(0), rat(1, 24))] {
        plan.add(format!("e2_identity.x={x}.y={y}"), move || Ok((e2_qm_identity(&x, &y)?, "exact in QM".into())));
    }

    // mord table
    for m in 0..=3u32 {
        for n in 0..=3u32 {
            plan.add(format!("mord.E4^{m}E6^{n}"), move || {
                let phi = &QuasiModForm::e4().pow(m) * &QuasiModForm::e6().pow(n);
                let lower = m.max(n) as usize + 1;
                let k = int(4 * m as i64 + 6 * n as i64);
                let cert = mord(&phi, &k, 5)?;
                let value = cert.as_ref().map(|c| c.order);
                let exact_expected = m == 0 || n == 0 || m == n;
                let ok = match value {
                    Some(v) => cert.as_ref().is_some_and(|c| c.verified) && v >= lower && (!exact_expected || v == lower),
                    None => !exact_expected && lower <= 5,
                };
                let shown = value.map_or("> 5".to_string(), |v| v.to_string());
                Ok((ok, format!("mord = {shown}, bound {lower}")))
            });
        }
    }

    // Mason round trips
    {
        let t = t.clone();
        plan.add("mason.phi_2", move || {
            let a = phi_p(&int(2));
            let sols = frobenius_solve(&a, &int(1), &t)?;
            let r = mason_mlde(&sols, &int(1))?;
            Ok((r.monic.as_ref() == Some(&a), format!("{:?}", r.monic.map(|m| m.to_string()))))
        });
    }
    {
        let t = t.clone();
        plan.add("mason.kaneko_zagier_4", move || {
            let a = kaneko_zagier(4)?;
            let sols = frobenius_solve(&a, &int(4), &t)?;
            let r = mason_mlde(&sols, &int(4))?;
            Ok((r.monic.as_ref() == Some(&a), format!("{:?}", r.monic.map(|m| m.to_string()))))
        });
    }
    {
        let t = t.clone();
        plan.add("mason.theta_D3", move || {
            let sols: Vec<QSeries<Rat>> = [Coset::Zero, Coset::S, Coset::T]
                .into_iter()
                .map(|c| theta_dn(3, c, &t, 8))
                .collect::<Result<_>>()?;
            let r = mason_mlde(&sols, &rat(3, 2))?;
            Ok((r.monic.as_ref() == Some(&dn_operator(3)?), format!("{:?}", r.monic.map(|m| m.to_string()))))
        });
    }
    plan
}

/// Runs the suite at truncation `trunc`.
pub fn verify_suite(trunc: &Rat) -> VerificationReport {
    verify_suite_with(&SuiteOptions::new(trunc.clone()))
}

/// Runs the suite; entries are evaluated on worker threads and reported in
/// plan order.
pub fn verify_suite_with(opts: &SuiteOptions) -> VerificationReport {
    let plan = plan(opts);
    let n = plan.checks.len();
    let results: Mutex<Vec<Option<Entry>>> = Mutex::new(vec![None; n]);
    let next = AtomicUsize::new(0);
    let workers = opts.threads.clamp(1, n.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let (name, check) = &plan.checks[i];
                let (status, detail) = match check() {
                    Ok((true, d)) => (Status::Pass, d),
                    Ok((false, d)) => (Status::Fail, d),
                    Err(e) => (Status::Fail, e.to_string()),
                };
                let entry = Entry {
                    name: name.clone(),
                    status,
                    detail,
                };
                results.lock().expect("no poisoned workers")[i] = Some(entry);
            });
        }
    });
    let entries: Vec<Entry> = results
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|e| e.expect("every entry ran"))
        .collect();
    let all_pass = entries.iter().all(|e| e.status == Status::Pass);
    VerificationReport { entries, all_pass }
}
