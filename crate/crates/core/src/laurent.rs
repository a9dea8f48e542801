//! Integral Laurent polynomials and hyperderivatives.
//!
//! The hyperderivative acts on monomials by `D^(r) x^p = C(p, r) x^(p-r)` for
//! every integer `p`, using the generalized binomial for negative exponents.
//! For a final position `{w_1 >= ... >= w_c}` with sum `2s + e`, the
//! certificate polynomial `g = x^(s+e-1) (1 + x^-w_2) ... (1 + x^-w_c)`
//! satisfies `(D^(e-1) g)(-1) = (-1)^s delta^(e)_e(M)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rules::Position;
use crate::statistics::{binomial, delta_b, sw, ExactInt};

/// Sparse map from exponent to non-zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, ExactInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(ExactInt::one(), 0)
    }

    pub fn monomial(coeff: impl Into<ExactInt>, exponent: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coeff.into());
        p
    }

    /// Builds from `(coefficient, exponent)` pairs; repeated exponents are summed.
    pub fn from_terms<C: Into<ExactInt>>(terms: impl IntoIterator<Item = (C, i64)>) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exponent: i64, coeff: ExactInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> ExactInt {
        self.terms.get(&exponent).cloned().unwrap_or_default()
    }

    /// Non-zero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn hyperderivative(&self, r: u64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&p, c) in &self.terms {
            out.add_term(p - r as i64, binomial(p, r) * c);
        }
        out
    }

    /// `sum coeff(p) (-1)^p`.
    pub fn eval_at_minus_one(&self) -> ExactInt {
        let mut acc = ExactInt::zero();
        for (&p, c) in &self.terms {
            if p.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        (0..k).fold(LaurentPoly::one(), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&p, c) in &rhs.terms {
            out.add_term(p, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&p, c)| (p, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&p, a) in &self.terms {
            for (&q, b) in &rhs.terms {
                out.add_term(p + q, a * b);
            }
        }
        out
    }
}

/// Descending exponents, e.g. `2x^3 - x^-1 + 4`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&p, c)) in self.terms.iter().rev().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if p == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            if p == 1 {
                f.write_str("x")?;
            } else {
                write!(f, "x^{p}")?;
            }
        }
        Ok(())
    }
}

fn require_final(position: &Position, e: u32) -> Result<u64> {
    let s = position.s_of(e)?;
    if !position.is_final(e)? {
        return Err(Error::PositionNotFinal { e });
    }
    Ok(s)
}

/// `g = x^(s+e-1) * prod_{i >= 2} (1 + x^-w_i)` for a final position.
pub fn final_certificate_poly(position: &Position, e: u32) -> Result<LaurentPoly> {
    let s = require_final(position, e)?;
    let mut g = LaurentPoly::monomial(1, (s + e as u64) as i64 - 1);
    for &w in &position.elements()[1..] {
        let factor = LaurentPoly::from_terms([(1, 0), (1, -(w as i64))]);
        g = &g * &factor;
    }
    Ok(g)
}

/// `(D^(e-1) g)(-1)` for the certificate polynomial of a final position.
pub fn certificate_value(position: &Position, e: u32) -> Result<ExactInt> {
    let g = final_certificate_poly(position, e)?;
    Ok(g.hyperderivative(e as u64 - 1).eval_at_minus_one())
}

/// The signed right-hand side `(-1)^s delta^(e)_e(M)` that the certificate
/// value must equal.
pub fn signed_delta(position: &Position, e: u32) -> Result<ExactInt> {
    let s = position.s_of(e)?;
    let d = delta_b(position, e, e)?;
    Ok(if s % 2 == 0 { d } else { -d })
}

/// Whether `SW_e(M) >= |M|` for a final position.
pub fn final_bound_check(position: &Position, e: u32) -> Result<bool> {
    require_final(position, e)?;
    Ok(sw(position, e)? >= crate::statistics::Valuation::Finite(position.len() as u64))
}
