//! Division with remainder.


use super::{DiffCoeff, Mldo};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DivisionSide {
    /// `a = c·b + r`
    Right,
    /// `a = b·c + r`
    Left,
}

/// Output of the general division: `m·a = c·b + r` (right) or
/// `a·m = b·c + r` (left), with `m = top(b)^(i−j)·b'`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralDivision<C> {
    pub multiplier: C,
    pub quotient: Mldo<C>,
    pub remainder: Mldo<C>,
}

fn coeff_pow<C: DiffCoeff>(c: &C, e: usize) -> C {
    (0..e).fold(C::one(), |acc, _| acc * c.clone())
}

impl<C: DiffCoeff> Mldo<C> {
    /// `self = c·b + r` with `ord(r) < ord(b)`, for `b` with top coefficient 1.
    pub fn divide_monic_right(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() || b.top() != C::one() {
            return Err(Error::NotMonicTop);
        }
        self.reduce_right(b, |t| Some(t.clone()))
            .map(|r| r.expect("monic division cannot fail"))
    }

    /// `self = b·c + r` with `ord(r) < ord(b)`, for `b` with top coefficient 1.
    pub fn divide_monic_left(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() || b.top() != C::one() {
            return Err(Error::NotMonicTop);
        }
        self.reduce_left(b, |t| Some(t.clone()))
            .map(|r| r.expect("monic division cannot fail"))
    }

    /// Right division when top coefficients can be divided: each step removes
    /// the top term of the remainder with `quot(top(r))·δ^(ord r − ord b)`.
    /// Returns `Ok(None)` if `quot` fails.
    pub(crate) fn reduce_right(
        &self,
        b: &Self,
        quot: impl Fn(&C) -> Option<C>,
    ) -> Result<Option<(Self, Self)>> {
        let j = b.ord().ok_or(Error::ZeroOperator)?;
        let mut r = self.clone();
        let mut c = Mldo::zero();
        while let Some(o) = r.ord() {
            if o < j {
                break;
            }
            let Some(x) = quot(&r.top()) else {
                return Ok(None);
            };
            let t = Mldo::from_coeff(x).shift(o - j);
            r = &r - &(&t * b);
            debug_assert!(r.ord().map_or(true, |n| n < o));
            c = &c + &t;
        }
        Ok(Some((c, r)))
    }

    /// Left analogue of [`Mldo::reduce_right`]: the step term is chosen with
    /// `top(b·x·δ^d) = top(b)·x`.
    pub(crate) fn reduce_left(
        &self,
        b: &Self,
        quot: impl Fn(&C) -> Option<C>,
    ) -> Result<Option<(Self, Self)>> {
        let j = b.ord().ok_or(Error::ZeroOperator)?;
        let mut r = self.clone();
        let mut c = Mldo::zero();
        while let Some(o) = r.ord() {
            if o < j {
                break;
            }
            let Some(x) = quot(&r.top()) else {
                return Ok(None);
            };
            let t = Mldo::from_coeff(x).shift(o - j);
            r = &r - &(b * &t);
            debug_assert!(r.ord().map_or(true, |n| n < o));
            c = &c + &t;
        }
        Ok(Some((c, r)))
    }

    /// The unique `c` with `self = c·b` (right) or `self = b·c` (left).
    pub fn exact_div(&self, b: &Self, side: DivisionSide) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let top = b.top();
        let q = |t: &C| t.div_exact(&top);
        let res = match side {
            DivisionSide::Right => self.reduce_right(b, q)?,
            DivisionSide::Left => self.reduce_left(b, q)?,
        };
        match res {
            Some((c, r)) if r.is_zero() => Ok(c),
            _ => Err(Error::NotDivisible),
        }
    }

    /// `top(b)^(i−j)·b'·self = c·b + r` with `ord(r) < j`, where
    /// `i = ord(self)`, `j = ord(b)`, and `d·a' = top(self)`, `d·b' = top(b)`.
    ///
    /// Follows the constructive proof: compare tops directly when `i = j`,
    /// otherwise cancel the top with `a'·δ^(i−j)·b` and recurse on the
    /// difference when its order is still at least `j`.
    pub fn divide_general_right(&self, b: &Self, d: &C) -> Result<GeneralDivision<C>> {
        let res = self.general(b, d, DivisionSide::Right)?;
        let lhs = &Mldo::from_coeff(res.multiplier.clone()) * self;
        let rhs = &(&res.quotient * b) + &res.remainder;
        if lhs != rhs {
            return Err(Error::PreconditionViolated("division identity failed".into()));
        }
        Ok(res)
    }

    /// `self·top(b)^(i−j)·b' = b·c + r` with `ord(r) < j`.
    pub fn divide_general_left(&self, b: &Self, d: &C) -> Result<GeneralDivision<C>> {
        let res = self.general(b, d, DivisionSide::Left)?;
        let lhs = self * &Mldo::from_coeff(res.multiplier.clone());
        let rhs = &(b * &res.quotient) + &res.remainder;
        if lhs != rhs {
            return Err(Error::PreconditionViolated("division identity failed".into()));
        }
        Ok(res)
    }

    fn general(&self, b: &Self, d: &C, side: DivisionSide) -> Result<GeneralDivision<C>> {
        let (Some(i), Some(j)) = (self.ord(), b.ord()) else {
            return Err(Error::ZeroOperator);
        };
        if i < j {
            return Err(Error::OrderMismatch {
                dividend: i,
                divisor: j,
            });
        }
        let not_divisor = || Error::NotACommonDivisor(d.to_string());
        let a_top = self.top();
        let b_top = b.top();
        let a1 = a_top.div_exact(d).ok_or_else(not_divisor)?;
        let b1 = b_top.div_exact(d).ok_or_else(not_divisor)?;
        let a1_op = Mldo::from_coeff(a1.clone());
        let b1_op = Mldo::from_coeff(b1.clone());
        let right = side == DivisionSide::Right;
        if i == j {
            let remainder = if right {
                &(&b1_op * self) - &(&a1_op * b)
            } else {
                &(self * &b1_op) - &(b * &a1_op)
            };
            return Ok(GeneralDivision {
                multiplier: b1,
                quotient: a1_op,
                remainder,
            });
        }
        let gap = i - j;
        let tb_gap = Mldo::from_coeff(coeff_pow(&b_top, gap));
        let lead = a1_op.shift(gap);
        let e = if right {
            &(&b1_op * self) - &(&lead * b)
        } else {
            &(self * &b1_op) - &(b * &lead)
        };
        let multiplier = coeff_pow(&b_top, gap) * b1;
        let (base_q, base_r) = if right {
            (&tb_gap * &lead, &tb_gap * &e)
        } else {
            (&lead * &tb_gap, &e * &tb_gap)
        };
        match e.ord() {
            Some(j2) if j2 >= j => {
                let inner = e.general(b, &C::one(), side)?;
                let k = i - j2 - 1;
                let tk = Mldo::from_coeff(coeff_pow(&b_top, k));
                let (q, r) = if right {
                    (&base_q + &(&tk * &inner.quotient), &tk * &inner.remainder)
                } else {
                    (&base_q + &(&inner.quotient * &tk), &inner.remainder * &tk)
                };
                Ok(GeneralDivision {
                    multiplier,
                    quotient: q,
                    remainder: r,
                })
            }
            _ => Ok(GeneralDivision {
                multiplier,
                quotient: base_q,
                remainder: base_r,
            }),
        }
    }
}
