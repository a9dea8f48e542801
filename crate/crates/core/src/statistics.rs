//! Exact subposition statistics.
//!
//! For a position `M` with `sum(M) = 2s + e`, `delta_e(M)` is the signed count
//! `sum (-1)^{sum N}` over subpositions `N` whose complement outweighs them by
//! at least `e`, i.e. `sum N <= s`. The higher statistics are iterated tail
//! sums `delta^(b)_e = sum_t delta^(b-1)_{e+2t}`, and `SW_e = e + P(delta^(e)_e)`
//! where `P` is the 2-adic valuation.
//!
//! Subpositions are index subsets, so a position with `c` elements has `2^c`
//! of them even when weights repeat.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rules::Position;

/// Exact signed integer used for every count and binomial.
pub type ExactInt = BigInt;

/// Element count above which [`delta_bruteforce`] refuses to enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// A value in `N_0 ∪ {∞}`. `Infinite` orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<u64> {
        match *self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<u64> for Valuation {
    type Output = Valuation;

    fn add(self, rhs: u64) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Serialized as a number, or `null` for infinity.
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => serializer.serialize_u64(*v),
            Valuation::Infinite => serializer.serialize_none(),
        }
    }
}

/// Number of ones in the binary expansion of `m`.
pub fn binary_weight(m: u64) -> u32 {
    m.count_ones()
}

/// Exponent of the highest power of two dividing `r`; infinite for zero.
pub fn two_adic_valuation(r: &ExactInt) -> Valuation {
    match r.trailing_zeros() {
        Some(t) => Valuation::Finite(t),
        None => Valuation::Infinite,
    }
}

/// `p (p-1) ... (p-r+1) / r!` for any integer `p`.
pub fn binomial(p: i64, r: u64) -> ExactInt {
    if p >= 0 && r as i128 > p as i128 {
        return ExactInt::zero();
    }
    let mut numerator = ExactInt::one();
    let mut denominator = ExactInt::one();
    for i in 0..r {
        numerator *= ExactInt::from(p as i128 - i as i128);
        denominator *= ExactInt::from(i + 1);
    }
    numerator / denominator
}

/// `alpha_r(M)`: the number of subpositions of `M` with weight `r`, for
/// `0 <= r <= sum(M)`. These are the coefficients of `prod (1 + x^w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaVector(Vec<ExactInt>);

impl AlphaVector {
    pub fn coefficients(&self) -> &[ExactInt] {
        &self.0
    }

    /// `alpha_r`, zero outside `0..=sum(M)`.
    pub fn get(&self, r: u64) -> ExactInt {
        usize::try_from(r)
            .ok()
            .and_then(|r| self.0.get(r).cloned())
            .unwrap_or_default()
    }
}

pub fn alpha_counts(position: &Position) -> AlphaVector {
    let mut coeffs = vec![ExactInt::one()];
    for &w in position.elements() {
        let w = w as usize;
        let mut next = vec![ExactInt::zero(); coeffs.len() + w];
        for (r, c) in coeffs.iter().enumerate() {
            next[r] += c;
            next[r + w] += c;
        }
        coeffs = next;
    }
    AlphaVector(coeffs)
}

fn check_parity(position: &Position, e: u32) -> Result<u64> {
    let sum = position.sum();
    if sum % 2 != e as u64 % 2 {
        return Err(Error::ParityMismatch { sum, e });
    }
    Ok(sum)
}

/// `delta_e(M)` by enumerating every subposition.
///
/// This is the reference oracle for all other `delta` routines and is
/// limited to [`BRUTE_FORCE_LIMIT`] elements.
pub fn delta_bruteforce(position: &Position, e: u32) -> Result<ExactInt> {
    let total = check_parity(position, e)?;
    delta_bruteforce_wide(position, e as u64, total)
}

fn delta_bruteforce_wide(position: &Position, e: u64, total: u64) -> Result<ExactInt> {
    let weights = position.elements();
    if weights.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::OracleTooLarge {
            len: weights.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    // Gray-code walk: step i toggles element trailing_zeros(i).
    let mut included = vec![false; weights.len()];
    let mut sub: u64 = 0;
    let mut acc: i64 = 0;
    for step in 0u64..(1u64 << weights.len()) {
        if step > 0 {
            let idx = step.trailing_zeros() as usize;
            included[idx] = !included[idx];
            if included[idx] {
                sub += weights[idx] as u64;
            } else {
                sub -= weights[idx] as u64;
            }
        }
        // epsilon = (total - sub) - sub
        if total as i128 - 2 * sub as i128 >= e as i128 {
            acc += if sub.is_multiple_of(2) { 1 } else { -1 };
        }
    }
    Ok(ExactInt::from(acc))
}

/// `delta^(b)_e(M)` from the subposition counts:
/// `sum_{r=0}^{s} C(s+b-1-r, b-1) (-1)^r alpha_r(M)`.
pub fn delta_b(position: &Position, e: u32, b: u32) -> Result<ExactInt> {
    let alpha = alpha_counts(position);
    delta_b_with_alpha(position, &alpha, e, b)
}

/// As [`delta_b`], reusing precomputed subposition counts for `position`.
pub fn delta_b_with_alpha(
    position: &Position,
    alpha: &AlphaVector,
    e: u32,
    b: u32,
) -> Result<ExactInt> {
    if b == 0 {
        return Err(Error::ZeroOrder);
    }
    let total = check_parity(position, e)?;
    if e as u64 > total {
        return Ok(ExactInt::zero());
    }
    let s = (total - e as u64) / 2;
    let mut acc = ExactInt::zero();
    for r in 0..=s {
        let a = alpha.get(r);
        if a.is_zero() {
            continue;
        }
        let term = binomial((s + b as u64 - 1 - r) as i64, b as u64 - 1) * a;
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `delta^(b)_e(M)` by the defining recursion, bottoming out in the
/// brute-force oracle.
pub fn delta_b_recursive(position: &Position, e: u32, b: u32) -> Result<ExactInt> {
    DeltaRecursion::new(position).delta(e, b)
}

/// Memoized evaluation of the defining recursion for one fixed position.
#[derive(Debug)]
pub struct DeltaRecursion<'a> {
    position: &'a Position,
    total: u64,
    memo: HashMap<(u64, u32), ExactInt>,
}

impl<'a> DeltaRecursion<'a> {
    pub fn new(position: &'a Position) -> Self {
        Self {
            position,
            total: position.sum(),
            memo: HashMap::new(),
        }
    }

    pub fn delta(&mut self, e: u32, b: u32) -> Result<ExactInt> {
        if b == 0 {
            return Err(Error::ZeroOrder);
        }
        check_parity(self.position, e)?;
        self.eval(e as u64, b)
    }

    fn eval(&mut self, e: u64, b: u32) -> Result<ExactInt> {
        if e > self.total {
            return Ok(ExactInt::zero());
        }
        if let Some(v) = self.memo.get(&(e, b)) {
            return Ok(v.clone());
        }
        let value = if b == 1 {
            delta_bruteforce_wide(self.position, e, self.total)?
        } else {
            let mut acc = ExactInt::zero();
            let mut d = e;
            while d <= self.total {
                acc += self.eval(d, b - 1)?;
                d += 2;
            }
            acc
        };
        self.memo.insert((e, b), value.clone());
        Ok(value)
    }
}

/// `SW^(b)_e(M) = e + P(delta^(b)_e(M))`.
pub fn sw_b(position: &Position, e: u32, b: u32) -> Result<Valuation> {
    Ok(two_adic_valuation(&delta_b(position, e, b)?) + e as u64)
}

/// `SW_e(M) = SW^(e)_e(M)`. Requires `e >= 1`.
pub fn sw(position: &Position, e: u32) -> Result<Valuation> {
    sw_b(position, e, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pos(v: &[u32]) -> Position {
        Position::new(v.to_vec())
    }

    fn int(v: i64) -> ExactInt {
        ExactInt::from(v)
    }

    #[test]
    fn weights_and_valuations() {
        assert_eq!(binary_weight(0), 0);
        assert_eq!(binary_weight(6), 2);
        assert_eq!(binary_weight(7), 3);
        assert_eq!(two_adic_valuation(&int(12)), Valuation::Finite(2));
        assert_eq!(two_adic_valuation(&int(-20)), Valuation::Finite(2));
        assert_eq!(two_adic_valuation(&int(1)), Valuation::Finite(0));
        assert_eq!(two_adic_valuation(&int(0)), Valuation::Infinite);
    }

    #[test]
    fn valuation_order_and_sum() {
        assert!(Valuation::Infinite > Valuation::Finite(u64::MAX));
        assert_eq!(Valuation::Finite(3) + 4, Valuation::Finite(7));
        assert_eq!(Valuation::Infinite + 4, Valuation::Infinite);
        assert_eq!(Valuation::Finite(1).min(Valuation::Infinite), Valuation::Finite(1));
        assert_eq!(Valuation::Infinite.to_string(), "inf");
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(5, 0), int(1));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(-2, 1), int(-2));
        assert_eq!(binomial(-1, 2), int(1));
        assert_eq!(binomial(-1, 3), int(-1));
        assert_eq!(binomial(-3, 2), int(6));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(0, 1), int(0));
    }

    #[test]
    fn alpha_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(alpha_counts(&pos(&[1, 1])).coefficients(), ints(&[1, 2, 1]).as_slice());
        assert_eq!(alpha_counts(&pos(&[2, 1])).coefficients(), ints(&[1, 1, 1, 1]).as_slice());
        assert_eq!(alpha_counts(&pos(&[])).coefficients(), ints(&[1]).as_slice());
        assert_eq!(alpha_counts(&pos(&[3, 1])).coefficients(), ints(&[1, 1, 0, 1, 1]).as_slice());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(delta_bruteforce(&pos(&[1, 1, 1]), 1), Ok(int(-2)));
        assert_eq!(delta_bruteforce(&pos(&[]), 0), Ok(int(1)));
        assert_eq!(delta_bruteforce(&pos(&[2, 1, 1]), 2), Ok(int(-1)));
        assert!(matches!(
            delta_bruteforce(&pos(&[1, 1]), 1),
            Err(Error::ParityMismatch { .. })
        ));
        assert!(matches!(
            delta_bruteforce(&Position::new(vec![1; 25]), 1),
            Err(Error::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(delta_b(&pos(&[1; 5]), 1, 2), Ok(int(3)));
        assert_eq!(delta_b(&pos(&[3, 1]), 2, 2), Ok(int(1)));
        assert_eq!(delta_b(&pos(&[1, 1, 1]), 1, 1), Ok(int(-2)));
        assert_eq!(delta_b(&pos(&[1, 1]), 4, 3), Ok(int(0)));
        assert_eq!(delta_b(&pos(&[1, 1]), 1, 1).unwrap_err(), Error::ParityMismatch { sum: 2, e: 1 });
        assert_eq!(delta_b(&pos(&[1]), 1, 0).unwrap_err(), Error::ZeroOrder);
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(delta_b_recursive(&pos(&[1; 5]), 1, 2), Ok(int(3)));
        assert_eq!(delta_b_recursive(&pos(&[3, 1]), 2, 2), Ok(int(1)));
        for p in [pos(&[1, 1, 1]), pos(&[4, 2, 1]), pos(&[3, 3, 0])] {
            let e = (p.sum() % 2) as u32 + 2;
            assert_eq!(delta_b_recursive(&p, e, 1), delta_bruteforce(&p, e));
        }
    }

    #[test]
    fn sw_examples() {
        assert_eq!(sw_b(&pos(&[1; 7]), 1, 1), Ok(Valuation::Finite(3)));
        assert_eq!(sw_b(&pos(&[3, 1]), 2, 2), Ok(Valuation::Finite(2)));
        // delta_1({2,1}) = 1 - 1 = 0
        assert_eq!(sw_b(&pos(&[2, 1]), 1, 1), Ok(Valuation::Infinite));
        assert_eq!(sw(&pos(&[1; 7]), 1), Ok(Valuation::Finite(3)));
        assert_eq!(sw(&pos(&[2, 1, 1, 1, 1, 1]), 1), Ok(Valuation::Finite(4)));
        assert_eq!(sw(&pos(&[3, 1]), 2), Ok(Valuation::Finite(2)));
    }

    #[test]
    fn exact_at_large_sizes() {
        // delta_1({1^65}) = (-1)^32 C(64, 32); the alternating partial sums exceed i64
        let d = delta_b(&Position::new(vec![1; 65]), 1, 1).unwrap();
        assert_eq!(d, binomial(64, 32));
        let d = delta_b(&Position::new(vec![1; 67]), 1, 1).unwrap();
        assert_eq!(d, -binomial(66, 33));
        assert_eq!(two_adic_valuation(&d), Valuation::Finite(binary_weight(33) as u64));
    }

    proptest! {
        #[test]
        fn ultrametric(x in any::<i64>(), y in any::<i64>(), shift in 0u32..80) {
            let x = int(x) << shift;
            let y = int(y);
            let sum = &x + &y;
            prop_assert!(two_adic_valuation(&sum) >= two_adic_valuation(&x).min(two_adic_valuation(&y)));
        }

        #[test]
        fn alpha_invariants(v in proptest::collection::vec(0u32..7, 0..14)) {
            let p = Position::new(v);
            let alpha = alpha_counts(&p);
            let c = alpha.coefficients();
            prop_assert_eq!(c.len() as u64, p.sum() + 1);
            // alpha_0 counts subsets of the zero elements
            let zeros = p.elements().iter().filter(|&&w| w == 0).count();
            prop_assert_eq!(&c[0], &(int(1) << zeros));
            prop_assert_eq!(c.iter().sum::<ExactInt>(), int(1) << p.len());
            for r in 0..c.len() {
                prop_assert_eq!(&c[r], &c[c.len() - 1 - r]);
            }
        }

        #[test]
        fn closed_form_matches_oracles(v in proptest::collection::vec(0u32..5, 0..9), extra in 0u32..4, b in 1u32..5) {
            let p = Position::new(v);
            let e = (p.sum() % 2) as u32 + 2 * extra;
            let closed = delta_b(&p, e, b).unwrap();
            prop_assert_eq!(&closed, &delta_b_recursive(&p, e, b).unwrap());
            if b == 1 {
                prop_assert_eq!(&closed, &delta_bruteforce(&p, e).unwrap());
            }
        }
    }
}
