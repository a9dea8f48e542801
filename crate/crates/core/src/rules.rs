//! Positions of the weight game and its rules.
//!
//! A position is the multiset of component weights of the question graph.
//! Each turn the Selector picks two elements `w >= w'` and the Assigner
//! replaces them with `w + w'` or `w - w'`. With `sum = 2s + e`, a position
//! is final once its largest element reaches `s + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(n, k)` together with the minimum excess `e = 2k - n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameParams {
    n: u32,
    k: u32,
    e: u32,
}

impl GameParams {
    pub fn new(n: i64, k: i64) -> Result<Self> {
        let reject = |reason| Err(Error::InvalidParams { n, k, reason });
        if n < 1 {
            return reject("n must be at least 1");
        }
        if n > u32::MAX as i64 {
            return reject("n is too large");
        }
        if 2 * k <= n {
            return reject("k must exceed n/2");
        }
        if k > n {
            return reject("k must not exceed n");
        }
        Ok(Self {
            n: n as u32,
            k: k as u32,
            e: (2 * k - n) as u32,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Minimum excess of the majority colour, `k - (n - k)`.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// `n - k`, which equals `s` at the starting position.
    pub fn minority_bound(&self) -> u32 {
        self.n - self.k
    }

    /// Every valid parameter pair with `1 <= n <= max_n`, ordered by `n` then `k`.
    pub fn all_up_to(max_n: u32) -> impl Iterator<Item = GameParams> {
        (1..=max_n as i64).flat_map(|n| {
            (n / 2 + 1..=n).map(move |k| GameParams::new(n, k).expect("enumerated params are valid"))
        })
    }
}

impl fmt::Display for GameParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} e={}", self.n, self.k, self.e)
    }
}

/// Multiset of non-negative component weights, kept sorted in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Position(Vec<u32>);

impl Position {
    pub fn new(mut elements: Vec<u32>) -> Self {
        elements.sort_unstable_by(|a, b| b.cmp(a));
        Self(elements)
    }

    /// `n` copies of weight 1.
    pub fn start(params: &GameParams) -> Self {
        Self(vec![1; params.n as usize])
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&w| w as u64).sum()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// A copy with one more element of the given weight.
    pub fn with(&self, weight: u32) -> Self {
        let mut elements = self.0.clone();
        elements.push(weight);
        Self::new(elements)
    }

    /// The `s` with `sum = 2s + e`.
    pub fn s_of(&self, e: u32) -> Result<u64> {
        let sum = self.sum();
        if sum < e as u64 {
            return Err(Error::SumBelowExcess { sum, e });
        }
        if !(sum - e as u64).is_multiple_of(2) {
            return Err(Error::ParityMismatch { sum, e });
        }
        Ok((sum - e as u64) / 2)
    }

    pub fn is_final(&self, e: u32) -> Result<bool> {
        let s = self.s_of(e)?;
        Ok(self.max().is_some_and(|w| w as u64 > s))
    }

    /// One move per distinct value pair `(w, w')`, largest pairs first.
    pub fn legal_moves(&self) -> Vec<Move> {
        let v = &self.0;
        let mut moves = Vec::new();
        for i in 0..v.len() {
            if i > 0 && v[i] == v[i - 1] {
                continue;
            }
            for j in i + 1..v.len() {
                if j > i + 1 && v[j] == v[j - 1] {
                    continue;
                }
                moves.push(Move { first: i, second: j });
            }
        }
        moves
    }

    pub fn apply(&self, m: Move, choice: AssignerChoice) -> Result<Position> {
        let (w, w2) = m.values(self)?;
        let merged = match choice {
            AssignerChoice::Plus => w + w2,
            AssignerChoice::Minus => w - w2,
        };
        let mut elements: Vec<u32> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(idx, _)| idx != m.first && idx != m.second)
            .map(|(_, &x)| x)
            .collect();
        elements.push(merged);
        Ok(Position::new(elements))
    }

    /// Both successors `(M+, M-)` of a move.
    pub fn successors(&self, m: Move) -> Result<(Position, Position)> {
        Ok((
            self.apply(m, AssignerChoice::Plus)?,
            self.apply(m, AssignerChoice::Minus)?,
        ))
    }

    /// The move whose value pair is `(w, w')`, if both values are present.
    pub fn move_for_values(&self, w: u32, w2: u32) -> Option<Move> {
        let (hi, lo) = if w >= w2 { (w, w2) } else { (w2, w) };
        let first = self.0.iter().position(|&x| x == hi)?;
        let second = self
            .0
            .iter()
            .enumerate()
            .position(|(idx, &x)| idx != first && x == lo)?;
        Some(Move::new(first, second))
    }
}

impl From<Position> for String {
    fn from(p: Position) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Position {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Renders as `[2,1^5]`; runs of equal weights use the `^` shorthand.
impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut idx = 0;
        let mut first = true;
        while idx < self.0.len() {
            let w = self.0[idx];
            let run = self.0[idx..].iter().take_while(|&&x| x == w).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if run > 1 {
                write!(f, "{w}^{run}")?;
            } else {
                write!(f, "{w}")?;
            }
            idx += run;
        }
        f.write_str("]")
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: String| Error::ParsePosition {
            input: input.to_string(),
            reason,
        };
        let trimmed = input.trim();
        let body = match (trimmed.strip_prefix('['), trimmed.strip_suffix(']')) {
            (Some(_), Some(_)) => &trimmed[1..trimmed.len() - 1],
            (None, None) => trimmed,
            _ => return Err(fail("unbalanced brackets".into())),
        };
        let mut elements = Vec::new();
        if body.trim().is_empty() {
            return Ok(Position::default());
        }
        for token in body.split(',') {
            let token = token.trim();
            let (weight, count) = match token.split_once('^') {
                Some((w, c)) => (w.trim(), c.trim()),
                None => (token, "1"),
            };
            let weight: u32 = weight
                .parse()
                .map_err(|_| fail(format!("bad weight {weight:?}")))?;
            let count: usize = count
                .parse()
                .map_err(|_| fail(format!("bad multiplicity {count:?}")))?;
            if count > 1 << 20 {
                return Err(fail(format!("multiplicity {count} is too large")));
            }
            elements.extend(std::iter::repeat_n(weight, count));
        }
        Ok(Position::new(elements))
    }
}

/// A Selector move: two distinct indices into a canonical position with
/// `position[first] >= position[second]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub first: usize,
    pub second: usize,
}

impl Move {
    pub fn new(first: usize, second: usize) -> Self {
        Self { first, second }
    }

    /// The value pair `(w, w')` selected in `position`.
    pub fn values(&self, position: &Position) -> Result<(u32, u32)> {
        let illegal = Error::IllegalMove {
            first: self.first,
            second: self.second,
            len: position.len(),
        };
        let v = position.elements();
        if self.first == self.second || self.first >= v.len() || self.second >= v.len() {
            return Err(illegal);
        }
        let (w, w2) = (v[self.first], v[self.second]);
        if w < w2 {
            return Err(illegal);
        }
        Ok((w, w2))
    }
}

/// The Assigner's reply: merge into `w + w'` or `w - w'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignerChoice {
    Plus,
    Minus,
}

impl AssignerChoice {
    pub const BOTH: [AssignerChoice; 2] = [AssignerChoice::Plus, AssignerChoice::Minus];
}

impl fmt::Display for AssignerChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignerChoice::Plus => "plus",
            AssignerChoice::Minus => "minus",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn pos(v: &[u32]) -> Position {
        Position::new(v.to_vec())
    }

    #[test]
    fn params() {
        assert_eq!(GameParams::new(5, 3).unwrap().e(), 1);
        assert_eq!(GameParams::new(5, 4).unwrap().e(), 3);
        assert!(GameParams::new(4, 2).is_err());
        assert!(GameParams::new(0, 1).is_err());
        assert!(GameParams::new(3, 4).is_err());
        assert_eq!(GameParams::new(1, 1).unwrap().e(), 1);
        assert_eq!(GameParams::all_up_to(4).count(), 1 + 1 + 2 + 2);
    }

    #[test]
    fn start_positions() {
        for n in [1, 3, 7] {
            let p = Position::start(&GameParams::new(n, n).unwrap());
            assert_eq!(p.elements(), vec![1; n as usize].as_slice());
        }
    }

    #[test]
    fn s_and_final() {
        assert_eq!(pos(&[1, 1, 1, 0]).s_of(3), Ok(0));
        assert_eq!(pos(&[1; 5]).s_of(1), Ok(2));
        assert!(matches!(pos(&[1, 1]).s_of(1), Err(Error::ParityMismatch { .. })));
        assert!(matches!(pos(&[1]).s_of(3), Err(Error::SumBelowExcess { .. })));

        assert_eq!(pos(&[1; 5]).is_final(1), Ok(false));
        assert_eq!(pos(&[1, 1, 1, 0]).is_final(3), Ok(true));
        for w in 1..20u32 {
            for e in (1..=w).filter(|e| (w - e) % 2 == 0) {
                assert_eq!(pos(&[w]).is_final(e), Ok(true));
            }
        }
    }

    #[test]
    fn moves() {
        let vals = |p: &Position| -> Vec<(u32, u32)> {
            p.legal_moves().iter().map(|m| m.values(p).unwrap()).collect()
        };
        assert_eq!(vals(&pos(&[1, 1, 1])), vec![(1, 1)]);
        assert_eq!(vals(&pos(&[2, 1, 0])), vec![(2, 1), (2, 0), (1, 0)]);
        assert!(pos(&[5]).legal_moves().is_empty());
        assert_eq!(
            vals(&pos(&[2, 2, 1, 1])),
            vec![(2, 2), (2, 1), (1, 1)]
        );
    }

    #[test]
    fn apply_examples() {
        let m = Move::new(0, 1);
        assert_eq!(pos(&[1, 1, 1]).apply(m, AssignerChoice::Plus).unwrap(), pos(&[2, 1]));
        assert_eq!(pos(&[1, 1, 1]).apply(m, AssignerChoice::Minus).unwrap(), pos(&[1, 0]));
        assert_eq!(pos(&[3, 1]).apply(m, AssignerChoice::Minus).unwrap(), pos(&[2]));
        assert!(pos(&[3, 1]).apply(Move::new(1, 0), AssignerChoice::Plus).is_err());
        assert!(pos(&[3, 1]).apply(Move::new(0, 0), AssignerChoice::Plus).is_err());
        assert!(pos(&[3, 1]).apply(Move::new(0, 2), AssignerChoice::Plus).is_err());
    }

    #[test]
    fn text_format() {
        assert_eq!("[2,1^5]".parse::<Position>().unwrap(), pos(&[2, 1, 1, 1, 1, 1]));
        assert_eq!("[1,2,1,1,1,1]".parse::<Position>().unwrap(), pos(&[2, 1, 1, 1, 1, 1]));
        assert_eq!(pos(&[2, 1, 1, 1, 1, 1]).to_string(), "[2,1^5]");
        assert_eq!(pos(&[3, 1, 0]).to_string(), "[3,1,0]");
        assert_eq!(Position::default().to_string(), "[]");
        assert_eq!("[]".parse::<Position>().unwrap(), Position::default());
        assert_eq!("1^3, 0".parse::<Position>().unwrap(), pos(&[1, 1, 1, 0]));
        assert!("[1,x]".parse::<Position>().is_err());
        assert!("[1,2".parse::<Position>().is_err());
        assert!("[-1]".parse::<Position>().is_err());
    }

    /// Breadth-first closure of the start position under every move and choice.
    fn reachable(params: &GameParams) -> HashSet<Position> {
        let e = params.e();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([Position::start(params)]);
        while let Some(p) = queue.pop_front() {
            if !seen.insert(p.clone()) || p.is_final(e).unwrap() {
                continue;
            }
            for m in p.legal_moves() {
                for c in AssignerChoice::BOTH {
                    queue.push_back(p.apply(m, c).unwrap());
                }
            }
        }
        seen
    }

    #[test]
    fn reachable_positions_respect_sum_floor() {
        for params in GameParams::all_up_to(10) {
            for p in reachable(&params) {
                assert!(p.s_of(params.e()).is_ok(), "{p} for {params}");
            }
        }
    }

    #[test]
    fn plays_terminate_with_comparison_count() {
        // Every play from the start reaches a final position of size c after n - c moves.
        fn walk(p: &Position, e: u32, moves: usize, n: usize) {
            if p.is_final(e).unwrap() {
                assert_eq!(moves, n - p.len());
                return;
            }
            assert!(p.len() >= 2 && moves < n - 1);
            for m in p.legal_moves() {
                for c in AssignerChoice::BOTH {
                    walk(&p.apply(m, c).unwrap(), e, moves + 1, n);
                }
            }
        }
        for params in GameParams::all_up_to(7) {
            walk(&Position::start(&params), params.e(), 0, params.n() as usize);
        }
    }

    proptest! {
        #[test]
        fn text_round_trip(v in proptest::collection::vec(0u32..6, 0..12)) {
            let p = Position::new(v);
            prop_assert_eq!(p.to_string().parse::<Position>().unwrap(), p);
        }

        #[test]
        fn apply_shrinks_and_keeps_parity(v in proptest::collection::vec(0u32..8, 2..10)) {
            let p = Position::new(v);
            for m in p.legal_moves() {
                for c in AssignerChoice::BOTH {
                    let q = p.apply(m, c).unwrap();
                    prop_assert_eq!(q.len(), p.len() - 1);
                    prop_assert_eq!(q.sum() % 2, p.sum() % 2);
                    prop_assert!(q.elements().windows(2).all(|w| w[0] >= w[1]));
                }
            }
        }
    }
}
