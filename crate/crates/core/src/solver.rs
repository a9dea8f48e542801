//! Exact minimax values of the weight game.
//!
//! The value `V(M)` is the size of the final position reached under optimal
//! play. The Selector maximizes it and the Assigner minimizes it, so
//! `V(M) = max_moves min(V(M+), V(M-))` and `K(n, k) = n - V(start)`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rules::{AssignerChoice, GameParams, Move, Position};
use crate::statistics::{binary_weight, sw, two_adic_valuation, ExactInt, Valuation};
use crate::verify::Report;

/// Largest `n` for the exhaustive reachability suites.
pub const EXHAUSTIVE_GUARD: u32 = 12;

/// Largest `m` accepted by [`verify_nonprediction`].
pub const NONPREDICTION_GUARD: u64 = 7;

/// Memoizing minimax solver for a fixed excess `e`.
///
/// The memo is a concurrent map. Entries are exact values, so racing
/// inserts of the same key are idempotent.
#[derive(Debug)]
pub struct Solver {
    e: u32,
    memo: DashMap<Position, u32>,
    memo_limit: Option<usize>,
    threads: usize,
}

/// Both outcomes of one Selector move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveAnalysis {
    pub pair: (u32, u32),
    pub plus: u32,
    pub minus: u32,
    pub value: u32,
    pub selector_optimal: bool,
    pub assigner_choices: Vec<AssignerChoice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PvStep {
    pub position: Position,
    pub pair: (u32, u32),
    pub choice: AssignerChoice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub position: Position,
    pub value: u32,
    pub optimal_selector_moves: Vec<(u32, u32)>,
    pub moves: Vec<MoveAnalysis>,
    pub principal_variation: Vec<PvStep>,
    pub final_position: Position,
}

impl Solver {
    pub fn new(e: u32) -> Self {
        Self {
            e,
            memo: DashMap::new(),
            memo_limit: None,
            threads: 1,
        }
    }

    pub fn for_params(params: &GameParams) -> Self {
        Self::new(params.e())
    }

    /// Abort with [`Error::MemoLimitExceeded`] instead of growing past `limit`.
    pub fn with_memo_limit(mut self, limit: Option<usize>) -> Self {
        self.memo_limit = limit;
        self
    }

    /// Evaluate root moves on a pool of this many threads.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn value(&self, position: &Position) -> Result<u32> {
        position.s_of(self.e)?;
        if self.threads > 1 && !position.is_final(self.e)? {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .expect("thread pool");
            let best = pool.install(|| {
                position
                    .legal_moves()
                    .par_iter()
                    .map(|&m| self.move_value(position, m))
                    .collect::<Result<Vec<u32>>>()
            })?;
            let v = best.into_iter().max().unwrap_or(position.len() as u32);
            self.remember(position, v)?;
            return Ok(v);
        }
        self.eval(position)
    }

    fn move_value(&self, position: &Position, m: Move) -> Result<u32> {
        let (plus, minus) = position.successors(m)?;
        Ok(self.eval(&plus)?.min(self.eval(&minus)?))
    }

    fn remember(&self, position: &Position, v: u32) -> Result<()> {
        if let Some(limit) = self.memo_limit {
            if self.memo.len() >= limit && !self.memo.contains_key(position) {
                return Err(Error::MemoLimitExceeded { limit });
            }
        }
        self.memo.insert(position.clone(), v);
        Ok(())
    }

    fn eval(&self, position: &Position) -> Result<u32> {
        if position.is_final(self.e)? {
            return Ok(position.len() as u32);
        }
        if let Some(v) = self.memo.get(position) {
            return Ok(*v);
        }
        // A non-final position needs at least one more merge.
        let ceiling = position.len() as u32 - 1;
        let mut best = 0;
        for m in position.legal_moves() {
            let (plus, minus) = position.successors(m)?;
            let first = self.eval(&minus)?;
            if first <= best {
                continue;
            }
            best = best.max(first.min(self.eval(&plus)?));
            if best == ceiling {
                break;
            }
        }
        self.remember(position, best)?;
        Ok(best)
    }

    /// Exact outcome of every value-distinct move from a non-final position.
    pub fn analyse_moves(&self, position: &Position) -> Result<Vec<MoveAnalysis>> {
        if position.is_final(self.e)? {
            return Err(Error::PositionFinal { e: self.e });
        }
        let mut out = Vec::new();
        for m in position.legal_moves() {
            let (plus, minus) = position.successors(m)?;
            let (plus, minus) = (self.value(&plus)?, self.value(&minus)?);
            let value = plus.min(minus);
            let assigner_choices = AssignerChoice::BOTH
                .into_iter()
                .filter(|c| match c {
                    AssignerChoice::Plus => plus == value,
                    AssignerChoice::Minus => minus == value,
                })
                .collect();
            out.push(MoveAnalysis {
                pair: m.values(position)?,
                plus,
                minus,
                value,
                selector_optimal: false,
                assigner_choices,
            });
        }
        let best = out.iter().map(|a| a.value).max().unwrap_or(0);
        for a in &mut out {
            a.selector_optimal = a.value == best;
        }
        Ok(out)
    }

    /// The Assigner replies that minimize the value after move `m`.
    pub fn optimal_assigner_choices(&self, position: &Position, m: Move) -> Result<Vec<AssignerChoice>> {
        if position.is_final(self.e)? {
            return Err(Error::PositionFinal { e: self.e });
        }
        let (plus, minus) = position.successors(m)?;
        let (plus, minus) = (self.value(&plus)?, self.value(&minus)?);
        let low = plus.min(minus);
        Ok(AssignerChoice::BOTH
            .into_iter()
            .filter(|c| match c {
                AssignerChoice::Plus => plus == low,
                AssignerChoice::Minus => minus == low,
            })
            .collect())
    }

    /// Lexicographically smallest optimal value pair.
    pub fn best_move(&self, position: &Position) -> Result<Move> {
        let analysis = self.analyse_moves(position)?;
        let pair = analysis
            .iter()
            .filter(|a| a.selector_optimal)
            .map(|a| a.pair)
            .min()
            .expect("non-final positions have moves");
        Ok(position
            .move_for_values(pair.0, pair.1)
            .expect("pair comes from the position"))
    }

    /// The deterministic optimal Assigner reply, preferring Minus on ties.
    pub fn best_reply(&self, position: &Position, m: Move) -> Result<AssignerChoice> {
        let choices = self.optimal_assigner_choices(position, m)?;
        Ok(if choices.contains(&AssignerChoice::Minus) {
            AssignerChoice::Minus
        } else {
            AssignerChoice::Plus
        })
    }

    pub fn principal_variation(&self, position: &Position) -> Result<Vec<PvStep>> {
        let mut line = Vec::new();
        let mut current = position.clone();
        while !current.is_final(self.e)? {
            let m = self.best_move(&current)?;
            let choice = self.best_reply(&current, m)?;
            let next = current.apply(m, choice)?;
            line.push(PvStep {
                pair: m.values(&current)?,
                position: current,
                choice,
            });
            current = next;
        }
        Ok(line)
    }

    pub fn solve(&self, position: &Position) -> Result<SolveResult> {
        let value = self.value(position)?;
        let moves = if position.is_final(self.e)? {
            Vec::new()
        } else {
            self.analyse_moves(position)?
        };
        let optimal_selector_moves = moves
            .iter()
            .filter(|a| a.selector_optimal)
            .map(|a| a.pair)
            .collect();
        let principal_variation = self.principal_variation(position)?;
        let final_position = match principal_variation.last() {
            Some(step) => step
                .position
                .apply(
                    step.position.move_for_values(step.pair.0, step.pair.1).expect("pv move"),
                    step.choice,
                )?,
            None => position.clone(),
        };
        Ok(SolveResult {
            position: position.clone(),
            value,
            optimal_selector_moves,
            moves,
            principal_variation,
            final_position,
        })
    }
}

/// `V(M)` by plain recursion with no memo and no cutoffs.
pub fn value_unmemoized(position: &Position, e: u32) -> Result<u32> {
    if position.is_final(e)? {
        return Ok(position.len() as u32);
    }
    let mut best = 0;
    for m in position.legal_moves() {
        let (plus, minus) = position.successors(m)?;
        best = best.max(value_unmemoized(&plus, e)?.min(value_unmemoized(&minus, e)?));
    }
    Ok(best)
}

/// `K(n, k)` together with the full solve of the starting position.
pub fn solve_game(params: &GameParams) -> Result<(u32, SolveResult)> {
    let solver = Solver::for_params(params);
    let result = solver.solve(&Position::start(params))?;
    Ok((params.n() - result.value, result))
}

/// `2(n-k) - B(n-k)`.
pub fn k_formula(params: &GameParams) -> u32 {
    let m = params.minority_bound();
    2 * m - binary_weight(m as u64)
}

/// The reply whose successor has the smaller `SW_e`; Minus on ties.
pub fn sw_guided_assigner(position: &Position, e: u32, m: Move) -> Result<AssignerChoice> {
    if position.is_final(e)? {
        return Err(Error::PositionFinal { e });
    }
    let (plus, minus) = position.successors(m)?;
    Ok(if sw(&plus, e)? < sw(&minus, e)? {
        AssignerChoice::Plus
    } else {
        AssignerChoice::Minus
    })
}

/// Every position reachable from the start, in sorted order. Play stops at
/// final positions.
pub fn reachable_positions(params: &GameParams) -> Result<Vec<Position>> {
    let e = params.e();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([Position::start(params)]);
    while let Some(p) = queue.pop_front() {
        if seen.contains(&p) {
            continue;
        }
        if !p.is_final(e)? {
            for m in p.legal_moves() {
                let (plus, minus) = p.successors(m)?;
                queue.push_back(plus);
                queue.push_back(minus);
            }
        }
        seen.insert(p);
    }
    let sorted: BTreeSet<Position> = seen.into_iter().collect();
    Ok(sorted.into_iter().collect())
}

fn guard(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        return Err(Error::GuardExceeded { what, value, limit });
    }
    Ok(())
}

/// Checks `SW_e(M) >= V(M)` and the one-step potential inequality on every
/// reachable position, with the default guard `n <= 12`.
pub fn verify_sw_dominates(params: &GameParams) -> Result<Report> {
    verify_sw_dominates_with_guard(params, EXHAUSTIVE_GUARD)
}

pub fn verify_sw_dominates_with_guard(params: &GameParams, max_n: u32) -> Result<Report> {
    guard("n", params.n() as u64, max_n as u64)?;
    let e = params.e();
    let solver = Solver::for_params(params);
    let mut report = Report::new("sw-dominates");
    let mut min_slack: Option<(u64, Position)> = None;
    let mut sw_choice_suboptimal = 0u64;
    let mut move_cases = 0u64;
    for p in reachable_positions(params)? {
        report.case();
        let potential = sw(&p, e)?;
        let value = solver.value(&p)?;
        if potential < Valuation::Finite(value as u64) {
            report.fail(format!("{p}: SW={potential} < V={value}"));
        }
        if let Some(v) = potential.finite() {
            let slack = v - value as u64;
            if min_slack.as_ref().is_none_or(|(s, _)| slack < *s) {
                min_slack = Some((slack, p.clone()));
            }
        }
        if p.is_final(e)? {
            continue;
        }
        for m in p.legal_moves() {
            move_cases += 1;
            let (plus, minus) = p.successors(m)?;
            let low = sw(&plus, e)?.min(sw(&minus, e)?);
            if potential < low {
                report.fail(format!("{p} move {:?}: SW={potential} < min successor {low}", m.values(&p)?));
            }
            let guided = sw_guided_assigner(&p, e, m)?;
            if !solver.optimal_assigner_choices(&p, m)?.contains(&guided) {
                sw_choice_suboptimal += 1;
            }
        }
    }
    report.cases += move_cases;
    report.witness("params", params.to_string());
    if let Some((slack, p)) = min_slack {
        report.witness("min_slack", format!("{slack} at {p}"));
    }
    report.witness("moves_checked", move_cases.to_string());
    report.witness("sw_assigner_suboptimal_moves", sw_choice_suboptimal.to_string());
    Ok(report)
}

/// Closed form for `SW_1({2, 1^(2m-1)})`.
pub fn lemma_last_closed_form(m: u64) -> Valuation {
    assert!(m >= 1);
    let b = binary_weight(m - 1) as u64;
    if m % 2 == 1 {
        Valuation::Finite(2 + b) + two_adic_valuation(&ExactInt::from(m - 1))
    } else {
        let p = two_adic_valuation(&ExactInt::from(m))
            .finite()
            .expect("m is non-zero");
        Valuation::Finite(2 + b - p)
    }
}

/// `{2, 1^(2m-1)}`, the Plus successor of the first move with `n = 2m + 1`.
pub fn lemma_last_position(m: u64) -> Position {
    let mut v = vec![1u32; 2 * m as usize - 1];
    v.push(2);
    Position::new(v)
}

pub fn verify_lemma_last(m_max: u64) -> Result<Report> {
    let mut report = Report::new("lemma-last");
    for m in 1..=m_max {
        report.case();
        let direct = sw(&lemma_last_position(m), 1)?;
        let closed = lemma_last_closed_form(m);
        if direct != closed {
            report.fail(format!("m={m}: direct {direct} != closed form {closed}"));
        }
    }
    report.witness("m_max", m_max.to_string());
    Ok(report)
}

/// Shows that both Assigner replies to the first move are optimal when
/// `m = 3 mod 4`, although `SW_1` prefers Minus.
pub fn verify_nonprediction(m: u64) -> Result<Report> {
    verify_nonprediction_with_guard(m, NONPREDICTION_GUARD)
}

pub fn verify_nonprediction_with_guard(m: u64, max_m: u64) -> Result<Report> {
    if m % 4 != 3 {
        return Err(Error::NotThreeModFour { m });
    }
    guard("m", m, max_m)?;
    let params = GameParams::new(2 * m as i64 + 1, m as i64 + 1)?;
    let start = Position::start(&params);
    let first = Move::new(0, 1);
    let (plus, minus) = start.successors(first)?;
    let bm = binary_weight(m) as u64;
    let mut report = Report::new("nonpredict");

    let mut expect = |label: &str, got: Valuation, want: Valuation| {
        report.case();
        if got != want {
            report.fail(format!("{label}: got {got}, expected {want}"));
        }
    };
    expect("SW_1(M+)", sw(&plus, 1)?, Valuation::Finite(2 + bm));
    expect("SW_1(M-)", sw(&minus, 1)?, Valuation::Finite(1 + bm));
    let mut shorter = vec![1u32; 2 * m as usize - 3];
    shorter.extend([2, 0]);
    expect("SW_1({2,1^(2m-3),0})", sw(&Position::new(shorter), 1)?, Valuation::Finite(1 + bm));
    expect(
        "SW_1({1^(2m-1)})",
        sw(&Position::new(vec![1; 2 * m as usize - 1]), 1)?,
        Valuation::Finite(bm),
    );

    let solver = Solver::for_params(&params);
    let (vs, vp, vm) = (solver.value(&start)?, solver.value(&plus)?, solver.value(&minus)?);
    report.case();
    if !(vp == vs && vm == vs) {
        report.fail(format!("values differ: V(start)={vs} V(M+)={vp} V(M-)={vm}"));
    }
    let choices = solver.optimal_assigner_choices(&start, first)?;
    report.case();
    if choices != AssignerChoice::BOTH {
        report.fail(format!("optimal replies {choices:?}, expected both"));
    }
    report.case();
    if sw_guided_assigner(&start, 1, first)? != AssignerChoice::Minus {
        report.fail("SW-guided Assigner does not choose Minus".to_string());
    }
    report.witness("params", params.to_string());
    report.witness("values", format!("V(start)={vs} V(M+)={vp} V(M-)={vm}"));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pos(v: &[u32]) -> Position {
        Position::new(v.to_vec())
    }

    #[test]
    fn value_examples() {
        let solver = Solver::new(1);
        assert_eq!(solver.value(&pos(&[1, 1, 1])), Ok(2));
        assert_eq!(solver.value(&pos(&[1; 5])), Ok(2));
        assert_eq!(solver.value(&pos(&[3, 1, 1])), Ok(3));
        assert_eq!(Solver::new(2).value(&pos(&[3, 1])), Ok(2));
        assert!(solver.value(&pos(&[1, 1])).is_err());
    }

    #[test]
    fn game_examples() {
        let k = |n, k| solve_game(&GameParams::new(n, k).unwrap()).unwrap().0;
        assert_eq!(k(5, 4), 1);
        assert_eq!(k(7, 4), 4);
        assert_eq!(k(5, 3), 3);
        for n in 1..9 {
            assert_eq!(k(n, n), 0);
        }
    }

    #[test]
    fn solve_result_is_consistent() {
        let params = GameParams::new(7, 4).unwrap();
        let (k, result) = solve_game(&params).unwrap();
        assert_eq!(k, 4);
        assert_eq!(result.value, 3);
        assert_eq!(result.principal_variation.len(), 4);
        assert_eq!(result.final_position.len(), 3);
        assert!(result.final_position.is_final(1).unwrap());
        assert!(!result.optimal_selector_moves.is_empty());
        // replay
        let mut p = result.position.clone();
        for step in &result.principal_variation {
            assert_eq!(step.position, p);
            p = p.apply(p.move_for_values(step.pair.0, step.pair.1).unwrap(), step.choice).unwrap();
        }
        assert_eq!(p, result.final_position);
    }

    #[test]
    fn assigner_choice_examples() {
        let solver = Solver::new(1);
        let both = AssignerChoice::BOTH.to_vec();
        assert_eq!(solver.optimal_assigner_choices(&pos(&[1, 1, 1]), Move::new(0, 1)), Ok(both.clone()));
        assert_eq!(solver.optimal_assigner_choices(&pos(&[1; 7]), Move::new(0, 1)), Ok(both));
        let solver4 = Solver::new(2);
        let p = pos(&[3, 1, 1, 1]);
        assert_eq!(
            solver4.optimal_assigner_choices(&p, Move::new(0, 1)).unwrap_err(),
            Error::PositionFinal { e: 2 }
        );
        // {2,1,1,1,1}, e=2: s=2, non-final. Pair (2,1): Plus {3,1,1,1} final c=4,
        // Minus {1,1,1,1} non-final with value below 4.
        let p = pos(&[2, 1, 1, 1, 1]);
        let m = p.move_for_values(2, 1).unwrap();
        let (vp, vm) = (
            solver4.value(&p.apply(m, AssignerChoice::Plus).unwrap()).unwrap(),
            solver4.value(&p.apply(m, AssignerChoice::Minus).unwrap()).unwrap(),
        );
        assert_eq!(vp, 4);
        assert!(vm < vp);
        assert_eq!(solver4.optimal_assigner_choices(&p, m), Ok(vec![AssignerChoice::Minus]));
    }

    #[test]
    fn sw_guided_examples() {
        let start = pos(&[1; 7]);
        assert_eq!(sw_guided_assigner(&start, 1, Move::new(0, 1)), Ok(AssignerChoice::Minus));
        // Ties go to Minus: find a non-final reachable position whose two
        // successors have equal SW.
        let params = GameParams::new(9, 5).unwrap();
        let tie = reachable_positions(&params)
            .unwrap()
            .into_iter()
            .filter(|p| !p.is_final(1).unwrap())
            .flat_map(|p| p.legal_moves().into_iter().map(move |m| (p.clone(), m)))
            .find(|(p, m)| {
                let (a, b) = p.successors(*m).unwrap();
                sw(&a, 1).unwrap() == sw(&b, 1).unwrap()
            })
            .expect("a tied move exists");
        assert_eq!(sw_guided_assigner(&tie.0, 1, tie.1), Ok(AssignerChoice::Minus));
        assert_eq!(
            sw_guided_assigner(&pos(&[3, 1, 1]), 1, Move::new(0, 1)),
            Err(Error::PositionFinal { e: 1 })
        );
    }

    #[test]
    fn memo_matches_plain_recursion() {
        for params in GameParams::all_up_to(8) {
            let solver = Solver::for_params(&params);
            for p in reachable_positions(&params).unwrap() {
                assert_eq!(solver.value(&p), value_unmemoized(&p, params.e()), "{p} {params}");
            }
        }
    }

    #[test]
    fn threaded_solver_agrees() {
        for params in GameParams::all_up_to(11) {
            let single = Solver::for_params(&params);
            let multi = Solver::for_params(&params).with_threads(4);
            let start = Position::start(&params);
            assert_eq!(single.value(&start), multi.value(&start));
            assert_eq!(single.principal_variation(&start), multi.principal_variation(&start));
        }
    }

    #[test]
    fn memo_limit_aborts() {
        let solver = Solver::new(1).with_memo_limit(Some(3));
        assert_eq!(
            solver.value(&pos(&[1; 11])),
            Err(Error::MemoLimitExceeded { limit: 3 })
        );
        assert_eq!(Solver::new(1).with_memo_limit(Some(100_000)).value(&pos(&[1; 11])), Ok(3));
    }

    #[test]
    fn dominance_examples() {
        for (n, k) in [(7, 4), (5, 4), (9, 5)] {
            let report = verify_sw_dominates(&GameParams::new(n, k).unwrap()).unwrap();
            assert!(report.passed(), "{report:?}");
        }
        assert_eq!(sw(&pos(&[1; 5]), 3), Ok(Valuation::Finite(4)));
        assert!(verify_sw_dominates(&GameParams::new(13, 7).unwrap()).is_err());
    }

    #[test]
    fn lemma_last_examples() {
        assert_eq!(lemma_last_closed_form(3), Valuation::Finite(4));
        assert_eq!(lemma_last_closed_form(2), Valuation::Finite(2));
        // 2 + B(3) - P(4) = 2 + 2 - 2
        assert_eq!(lemma_last_closed_form(4), Valuation::Finite(2));
        assert_eq!(lemma_last_closed_form(1), Valuation::Infinite);
        for m in 1..=6 {
            assert_eq!(sw(&lemma_last_position(m), 1).unwrap(), lemma_last_closed_form(m));
        }
        assert!(verify_lemma_last(12).unwrap().passed());
    }

    #[test]
    fn nonprediction_examples() {
        assert!(verify_nonprediction(3).unwrap().passed());
        assert_eq!(verify_nonprediction(5).unwrap_err(), Error::NotThreeModFour { m: 5 });
        assert!(matches!(verify_nonprediction(11), Err(Error::GuardExceeded { .. })));
    }
}
