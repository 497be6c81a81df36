//! Standard series: Eisenstein series, eta powers and theta series of D_n.

use std::collections::HashMap;

use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::QSeries;
use crate::error::{Error, Result};
use crate::scalar::{int, rat, Rat, Scalar};

fn int_bound(t: &Rat) -> i64 {
    // number of integer exponents n >= 0 with n < t
    if !t.is_positive() {
        return 0;
    }
    t.ceil().to_integer().to_i64().unwrap_or(i64::MAX)
}

fn divisor_power_sum(n: i64, p: u32) -> i64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += d.pow(p);
            let e = n / d;
            if e != d {
                s += e.pow(p);
            }
        }
        d += 1;
    }
    s
}

/// `E_k` for `k ∈ {2, 4, 6}` with constant term 1, known below `trunc`.
pub fn eisenstein<S: Scalar>(k: u32, trunc: &Rat) -> Result<QSeries<S>> {
    let factor: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(Error::UnsupportedWeight(k.to_string())),
    };
    let n_max = int_bound(trunc);
    let terms = (0..n_max).map(|n| {
        let c = if n == 0 {
            1
        } else {
            factor * divisor_power_sum(n, k - 1)
        };
        (int(n), S::from_int(c))
    });
    QSeries::from_terms(1, terms, Some(trunc.clone()))
}

/// `∏_{n≥1}(1 − q^n)` below `trunc`, from the pentagonal number theorem.
pub fn euler_product<S: Scalar>(trunc: &Rat) -> Result<QSeries<S>> {
    let n_max = int_bound(trunc);
    let mut terms = Vec::new();
    if n_max > 0 {
        terms.push((int(0), S::one()));
    }
    for k in 1i64.. {
        let (e1, e2) = (k * (3 * k - 1) / 2, k * (3 * k + 1) / 2);
        if e1 >= n_max {
            break;
        }
        let sign = S::from_int(if k % 2 == 0 { 1 } else { -1 });
        terms.push((int(e1), sign.clone()));
        if e2 < n_max {
            terms.push((int(e2), sign));
        }
    }
    QSeries::from_terms(1, terms, Some(trunc.clone()))
}

/// `η(z)^p` evaluated at `m·z + alpha`, known below `trunc`, expressed on `grid`.
///
/// `q ↦ e(alpha)·q^m`, so the result is `e(alpha·p/24)·q^(m·p/24)·P(e(alpha)q^m)^p`
/// with `P` the Euler product. With `strip_phase` the global constant
/// `e(alpha·p/24)` is dropped.
pub fn eta_power_at<S: Scalar>(
    p: &Rat,
    m: &Rat,
    alpha: &Rat,
    strip_phase: bool,
    trunc: &Rat,
    grid: u64,
) -> Result<QSeries<S>> {
    if !m.is_positive() {
        return Err(Error::PreconditionViolated(format!("scale {m} must be positive")));
    }
    let lead = p / int(24);
    // series part is needed for exponents j with m·(p/24 + j) < trunc
    let inner_bound = trunc / m - &lead;
    let out = if inner_bound.is_positive() {
        let part: QSeries<S> = euler_product(&inner_bound)?;
        let powered = part.pow_rational(p)?;
        let mut s = powered.substitute(m, alpha)?.shift(&(m * &lead))?;
        if !strip_phase {
            let arg = alpha * &lead;
            let phase = S::root_of_unity(&arg)
                .ok_or_else(|| Error::NonComputablePower(format!("e({arg})")))?;
            s = s.scale(&phase);
        }
        s.truncate(trunc)?
    } else {
        QSeries::big_o(1, trunc)?
    };
    let g = out.grid();
    if grid % g != 0 {
        return Err(Error::GridMismatch {
            exponent: format!("1/{g}"),
            grid,
        });
    }
    out.with_grid(grid)
}

/// `η(z) = q^(1/24)∏(1 − q^n)` below `trunc`.
pub fn eta<S: Scalar>(trunc: &Rat, grid: u64) -> Result<QSeries<S>> {
    eta_power_at(&Rat::one(), &Rat::one(), &Rat::zero(), false, trunc, grid)
}

/// Classes of the discriminant group of D_n: the lattice, the vector class,
/// and the two spinor classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coset {
    Zero,
    S,
    T,
    ST,
}

impl Coset {
    pub const ALL: [Coset; 4] = [Coset::Zero, Coset::S, Coset::T, Coset::ST];

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "0" => Ok(Coset::Zero),
            "s" => Ok(Coset::S),
            "t" => Ok(Coset::T),
            "s+t" | "st" => Ok(Coset::ST),
            _ => Err(Error::Syntax {
                pos: 0,
                msg: format!("unknown coset {text:?}"),
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coset::Zero => "0",
            Coset::S => "s",
            Coset::T => "t",
            Coset::ST => "s+t",
        }
    }
}

/// Counts points by norm. Coordinates are doubled so every shift is integral:
/// `y = 2(x + p)`, and `bound` limits `Σ y²` (exclusive).
fn enumerate(
    shifts: &[i64],
    parity: Option<i64>,
    bound: i64,
    out: &mut HashMap<i64, u64>,
) {
    fn rec(
        shifts: &[i64],
        idx: usize,
        budget: i64,
        norm: i64,
        xsum: i64,
        parity: Option<i64>,
        out: &mut HashMap<i64, u64>,
    ) {
        if idx == shifts.len() {
            if parity.map_or(true, |p| xsum.rem_euclid(2) == p) {
                *out.entry(norm).or_insert(0) += 1;
            }
            return;
        }
        let s = shifts[idx];
        // y = 2x + s with y² < budget
        let r = budget.max(0).sqrt() + 2;
        let lo = (-r - s).div_euclid(2) - 1;
        let hi = (r - s).div_euclid(2) + 1;
        for x in lo..=hi {
            let y = 2 * x + s;
            let y2 = y * y;
            if y2 < budget {
                rec(shifts, idx + 1, budget - y2, norm + y2, xsum + x, parity, out);
            }
        }
    }
    rec(shifts, 0, bound, 0, 0, parity, out);
}

/// `θ_{p+D_n}(z) = Σ_{x∈D_n} q^{(x+p,x+p)/2}` below `trunc`.
///
/// For n ≥ 3 (and n = 1, where D_1 = 2Z) the lattice is `{x ∈ Z^n : Σx even}`
/// with s = (1,0,…,0) and t = (1/2,…,1/2). For n = 2 the lattice is
/// `√2Z ⊕ √2Z` with s = (√2/2, 0) and t = (0, √2/2).
pub fn theta_dn<S: Scalar>(n: usize, coset: Coset, trunc: &Rat, grid: u64) -> Result<QSeries<S>> {
    if n == 0 {
        return Err(Error::PreconditionViolated("theta series needs n >= 1".into()));
    }
    let mut counts = HashMap::new();
    let denom: i64;
    if n == 2 {
        // exponent (a + p1)² + (b + p2)² = (y1² + y2²)/4 with y = 2(a + p)
        let shifts = match coset {
            Coset::Zero => [0, 0],
            Coset::S => [1, 0],
            Coset::T => [0, 1],
            Coset::ST => [1, 1],
        };
        denom = 4;
        let bound = (trunc * int(denom)).ceil().to_integer().to_i64().unwrap_or(0);
        enumerate(&shifts, None, bound.max(0), &mut counts);
    } else {
        // exponent Σ(x + p)²/2 = Σy²/8 with y = 2(x + p)
        let mut shifts = vec![0i64; n];
        match coset {
            Coset::Zero => {}
            Coset::S => shifts[0] = 2,
            Coset::T => shifts.iter_mut().for_each(|s| *s = 1),
            Coset::ST => {
                shifts.iter_mut().for_each(|s| *s = 1);
                shifts[0] = 3;
            }
        }
        denom = 8;
        let bound = (trunc * int(denom)).ceil().to_integer().to_i64().unwrap_or(0);
        enumerate(&shifts, Some(0), bound.max(0), &mut counts);
    }
    let terms = counts
        .into_iter()
        .map(|(norm, c)| (rat(norm, denom), S::from_int(c as i64)));
    let s = QSeries::from_terms(8, terms, Some(trunc.clone()))?;
    if grid % 8 != 0 {
        let reduced = s.reduce_grid();
        if grid % reduced.grid() != 0 {
            return Err(Error::GridMismatch {
                exponent: format!("1/{}", reduced.grid()),
                grid,
            });
        }
        return reduced.with_grid(grid);
    }
    s.with_grid(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{root_of_unity, Cyc};

    type R = QSeries<Rat>;

    #[test]
    fn eisenstein_coefficients() {
        let e4: R = eisenstein(4, &int(3)).unwrap();
        assert_eq!(e4.coeff(&int(1)), int(240));
        assert_eq!(e4.coeff(&int(2)), int(2160));
        let e6: R = eisenstein(6, &int(3)).unwrap();
        assert_eq!(e6.coeff(&int(1)), int(-504));
        assert_eq!(e6.coeff(&int(2)), int(-16632));
        let e2: R = eisenstein(2, &int(3)).unwrap();
        assert_eq!(e2.coeff(&int(1)), int(-24));
        assert_eq!(e2.coeff(&int(2)), int(-72));
    }

    #[test]
    fn pentagonal_matches_product() {
        let t = int(40);
        let fast: R = euler_product(&t).unwrap();
        let mut slow = R::one(1).truncate(&t).unwrap();
        for n in 1..40 {
            let f = R::from_terms(1, [(int(0), int(1)), (int(n), int(-1))], None).unwrap();
            slow = &slow * &f;
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn eta_leading_terms() {
        let e: R = eta(&int(6), 24).unwrap();
        assert_eq!(e.valuation(), Some(rat(1, 24)));
        let expect = [(1, 1), (25, -1), (49, -1), (121, 1)];
        for (num, c) in expect {
            assert_eq!(e.coeff(&rat(num, 24)), int(c));
        }
        assert_eq!(e.coeff(&rat(73, 24)), int(0));
    }

    #[test]
    fn eta_24_is_delta() {
        let e: R = eta(&int(5), 24).unwrap();
        let d = e.pow_rational(&int(24)).unwrap();
        assert_eq!(d.coeff(&int(1)), int(1));
        assert_eq!(d.coeff(&int(2)), int(-24));
        assert_eq!(d.coeff(&int(3)), int(252));
        assert_eq!(d.coeff(&int(4)), int(-1472));
        assert_eq!(d.trunc(), Some(int(6) - rat(1, 24)));
    }

    #[test]
    fn eta_power_leading_exponent() {
        let p = rat(7, 3);
        let e: R = eta_power_at(&p, &int(1), &int(0), false, &int(3), 72).unwrap();
        assert_eq!(e.valuation(), Some(rat(7, 72)));
        assert_eq!(e.coeff(&(rat(7, 72) + int(1))), -p);
    }

    #[test]
    fn eta_doubled_argument() {
        let e: R = eta_power_at(&int(1), &int(2), &int(0), false, &int(3), 48).unwrap();
        assert_eq!(e.valuation(), Some(rat(1, 12)));
        assert_eq!(e.coeff(&(rat(1, 12) + int(2))), int(-1));
    }

    #[test]
    fn eta_half_shift_by_hand() {
        // η((z+1)/2) = e(1/48)·q^(1/48)·(1 + q^(1/2) - q - ...)
        let e: QSeries<Cyc> =
            eta_power_at(&int(1), &rat(1, 2), &rat(1, 2), false, &int(2), 48).unwrap();
        let ph = root_of_unity(48, 1);
        assert_eq!(e.coeff(&rat(1, 48)), ph.clone());
        assert_eq!(e.coeff(&(rat(1, 48) + rat(1, 2))), ph.clone());
        assert_eq!(e.coeff(&(rat(1, 48) + int(1))), -ph);
        let stripped: R = eta_power_at(&int(1), &rat(1, 2), &rat(1, 2), true, &int(2), 48).unwrap();
        assert_eq!(stripped.coeff(&(rat(1, 48) + rat(1, 2))), int(1));
    }

    #[test]
    fn theta_leading_terms() {
        let t = int(3);
        for n in 1..=8usize {
            let zero: R = theta_dn(n, Coset::Zero, &t, 8).unwrap();
            assert_eq!(zero.valuation(), Some(int(0)));
            assert_eq!(zero.coeff(&int(0)), int(1));
            if n != 2 {
                let s: R = theta_dn(n, Coset::S, &t, 8).unwrap();
                assert_eq!(s.valuation(), Some(rat(1, 2)));
                assert_eq!(s.coeff(&rat(1, 2)), int(2 * n as i64));
                let st: R = theta_dn(n, Coset::ST, &t, 8).unwrap();
                let tt: R = theta_dn(n, Coset::T, &t, 8).unwrap();
                assert_eq!(st.valuation(), Some(rat(n as i64, 8)));
                assert_eq!(st.coeff(&rat(n as i64, 8)), int(1 << (n - 1)));
                assert_eq!(st, tt);
            }
        }
    }

    #[test]
    fn theta_d2() {
        let t = int(5);
        let z: R = theta_dn(2, Coset::Zero, &t, 8).unwrap();
        assert_eq!(z.coeff(&int(1)), int(4));
        assert_eq!(z.coeff(&int(2)), int(4));
        let s: R = theta_dn(2, Coset::S, &t, 8).unwrap();
        assert_eq!(s.coeff(&rat(1, 4)), int(2));
        assert_eq!(s.coeff(&rat(5, 4)), int(4));
        assert_eq!(s.coeff(&rat(9, 4)), int(2));
        let st: R = theta_dn(2, Coset::ST, &t, 8).unwrap();
        assert_eq!(st.coeff(&rat(1, 2)), int(4));
        assert_eq!(st.coeff(&rat(5, 2)), int(8));
        assert_eq!(st.coeff(&rat(9, 2)), int(4));
    }
}
