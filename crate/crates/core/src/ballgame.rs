//! The ball-level question game.
//!
//! Comparisons are recorded in a union-find structure where every ball also
//! stores its side of its component's bipartition. A component with sides
//! `X` and `Y` has weight `||X| - |Y||`, and the multiset of component weights
//! is the [`Position`] of the weight game.
//!
//! Balls are numbered `1..=n` in the public API.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{AssignerChoice, GameParams, Position};
use crate::solver::{sw_guided_assigner, Solver};

/// Largest component count accepted by [`QuestionGraph::consistent_colouring_exists`].
pub const COLOURING_GUARD: usize = 20;

/// Largest `n` for the exhaustive ball-level searches.
pub const BALL_SEARCH_GUARD: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BallAnswer {
    Same,
    Different,
}

impl BallAnswer {
    pub const BOTH: [BallAnswer; 2] = [BallAnswer::Same, BallAnswer::Different];

    fn as_str(&self) -> &'static str {
        match self {
            BallAnswer::Same => "same",
            BallAnswer::Different => "different",
        }
    }
}

impl fmt::Display for BallAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BallAnswer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same" => Ok(BallAnswer::Same),
            "different" => Ok(BallAnswer::Different),
            other => Err(Error::ParseTranscript(format!("unknown answer {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Comparison {
    pub i: usize,
    pub j: usize,
    pub answer: BallAnswer,
}

/// Whether a ball is asked about as belonging to the majority or minority colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColourStatus {
    Majority,
    Minority,
}

/// A connected component of the question graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Side with more balls; on a tie, the side holding the smallest ball.
    pub larger: Vec<usize>,
    pub smaller: Vec<usize>,
}

impl Component {
    pub fn weight(&self) -> u32 {
        (self.larger.len() - self.smaller.len()) as u32
    }

    pub fn smallest_ball(&self) -> usize {
        self.larger[0].min(self.smaller.first().copied().unwrap_or(usize::MAX))
    }

    pub fn contains(&self, ball: usize) -> bool {
        self.larger.contains(&ball) || self.smaller.contains(&ball)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionGraph {
    parent: Vec<usize>,
    rank: Vec<u8>,
    /// Side relative to the parent: `true` means opposite colour.
    parity: Vec<bool>,
    history: Vec<Comparison>,
}

impl QuestionGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams {
                n: n as i64,
                k: 0,
                reason: "n must be at least 1",
            });
        }
        Ok(Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            parity: vec![false; n],
            history: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn history(&self) -> &[Comparison] {
        &self.history
    }

    fn index(&self, ball: usize) -> Result<usize> {
        if ball == 0 || ball > self.n() {
            return Err(Error::BallOutOfRange { ball, n: self.n() });
        }
        Ok(ball - 1)
    }

    /// Root of `x` and the parity of `x` relative to it.
    fn find(&self, mut x: usize) -> (usize, bool) {
        let mut p = false;
        while self.parent[x] != x {
            p ^= self.parity[x];
            x = self.parent[x];
        }
        (x, p)
    }

    /// The answer already implied by the transcript, if the balls are connected.
    pub fn forced_answer(&self, i: usize, j: usize) -> Result<Option<BallAnswer>> {
        let (ri, pi) = self.find(self.index(i)?);
        let (rj, pj) = self.find(self.index(j)?);
        Ok((ri == rj).then_some(if pi == pj {
            BallAnswer::Same
        } else {
            BallAnswer::Different
        }))
    }

    pub fn add_comparison(&mut self, i: usize, j: usize, answer: BallAnswer) -> Result<()> {
        if i == j {
            return Err(Error::SelfComparison { ball: i });
        }
        let (xi, xj) = (self.index(i)?, self.index(j)?);
        let (ri, pi) = self.find(xi);
        let (rj, pj) = self.find(xj);
        let different = answer == BallAnswer::Different;
        if ri == rj {
            if (pi != pj) != different {
                return Err(Error::InconsistentAnswer {
                    i,
                    j,
                    forced: if pi == pj { "same" } else { "different" },
                });
            }
        } else {
            let (child, root) = if self.rank[ri] < self.rank[rj] { (ri, rj) } else { (rj, ri) };
            self.parent[child] = root;
            self.parity[child] = pi ^ pj ^ different;
            if self.rank[ri] == self.rank[rj] {
                self.rank[root] += 1;
            }
        }
        self.history.push(Comparison { i, j, answer });
        Ok(())
    }

    /// Components ordered by their smallest ball.
    pub fn components(&self) -> Vec<Component> {
        let mut sides: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for x in 0..self.n() {
            let (root, p) = self.find(x);
            let idx = *slot.entry(root).or_insert_with(|| {
                sides.push((Vec::new(), Vec::new()));
                sides.len() - 1
            });
            // side `false` holds ball x when x is the first ball seen
            let first_parity = sides[idx]
                .0
                .first()
                .map(|&b| self.find(b - 1).1)
                .unwrap_or(p);
            if p == first_parity {
                sides[idx].0.push(x + 1);
            } else {
                sides[idx].1.push(x + 1);
            }
        }
        sides
            .into_iter()
            .map(|(a, b)| {
                if b.len() > a.len() {
                    Component { larger: b, smaller: a }
                } else {
                    Component { larger: a, smaller: b }
                }
            })
            .collect()
    }

    pub fn weights(&self) -> Position {
        Position::new(self.components().iter().map(Component::weight).collect())
    }

    /// Whether some colouring with at least `k` balls of one colour fits the answers.
    pub fn is_consistent(&self, params: &GameParams) -> bool {
        self.weights().s_of(params.e()).is_ok()
    }

    /// A ball that has the majority colour in every consistent colouring:
    /// the smallest ball on the larger side of a component of weight at
    /// least `s + 1`. `None` while the position is not final, or when no
    /// colouring is consistent.
    pub fn identify_majority(&self, params: &GameParams) -> Option<usize> {
        let s = self.weights().s_of(params.e()).ok()?;
        self.components()
            .iter()
            .filter(|c| c.weight() as u64 > s)
            .map(|c| c.larger[0])
            .min()
    }

    /// Exhaustive check over all `2^c` side-to-colour assignments.
    pub fn consistent_colouring_exists(
        &self,
        params: &GameParams,
        ball: usize,
        status: ColourStatus,
    ) -> Result<bool> {
        self.index(ball)?;
        let comps = self.components();
        if comps.len() > COLOURING_GUARD {
            return Err(Error::GuardExceeded {
                what: "components",
                value: comps.len() as u64,
                limit: COLOURING_GUARD as u64,
            });
        }
        let n = self.n();
        let k = params.k() as usize;
        for mask in 0u32..(1 << comps.len()) {
            // bit set: the larger side gets colour A
            let mut colour_a = vec![false; n + 1];
            for (idx, c) in comps.iter().enumerate() {
                let a_side = if mask >> idx & 1 == 1 { &c.larger } else { &c.smaller };
                for &b in a_side {
                    colour_a[b] = true;
                }
            }
            let count_a = colour_a.iter().filter(|&&x| x).count();
            let majority_is_a = if count_a >= k {
                true
            } else if n - count_a >= k {
                false
            } else {
                continue;
            };
            let in_majority = colour_a[ball] == majority_is_a;
            if in_majority == (status == ColourStatus::Majority) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn side(&self, ball: usize) -> (Component, bool) {
        let comps = self.components();
        let c = comps
            .into_iter()
            .find(|c| c.contains(ball))
            .expect("every ball lies in a component");
        let larger = c.larger.contains(&ball);
        (c, larger)
    }

    /// The weight-game step a comparison of `i` and `j` with `answer`
    /// performs: the value pair and the Plus/Minus it realizes. `None` when
    /// the balls are already connected.
    pub fn induced_step(
        &self,
        i: usize,
        j: usize,
        answer: BallAnswer,
    ) -> Result<Option<((u32, u32), AssignerChoice)>> {
        if i == j {
            return Err(Error::SelfComparison { ball: i });
        }
        if self.forced_answer(i, j)?.is_some() {
            return Ok(None);
        }
        let (ci, li) = self.side(i);
        let (cj, lj) = self.side(j);
        let (wi, wj) = (ci.weight(), cj.weight());
        let pair = (wi.max(wj), wi.min(wj));
        // Same joins the larger sides exactly when both balls sit on like sides.
        let plus = (answer == BallAnswer::Same) == (li == lj);
        let choice = if plus { AssignerChoice::Plus } else { AssignerChoice::Minus };
        Ok(Some((pair, choice)))
    }

    /// The answer to `(i, j)` that realizes `choice`. Comparisons touching a
    /// weight-0 component answer Same, since both replies give the same weights.
    pub fn answer_for(&self, i: usize, j: usize, choice: AssignerChoice) -> Result<BallAnswer> {
        if let Some(forced) = self.forced_answer(i, j)? {
            return Ok(forced);
        }
        let (ci, li) = self.side(i);
        let (cj, lj) = self.side(j);
        if ci.weight() == 0 || cj.weight() == 0 {
            return Ok(BallAnswer::Same);
        }
        let same_sides = li == lj;
        Ok(if (choice == AssignerChoice::Plus) == same_sides {
            BallAnswer::Same
        } else {
            BallAnswer::Different
        })
    }

    /// Per-ball `(smallest ball of component, opposite side to it)`;
    /// equal keys mean equal graphs up to history.
    pub fn canonical_key(&self) -> Vec<(u8, bool)> {
        let mut key = vec![(0u8, false); self.n()];
        for c in self.components() {
            let anchor = c.smallest_ball();
            let anchor_larger = c.larger.contains(&anchor);
            for &b in &c.larger {
                key[b - 1] = (anchor as u8, !anchor_larger);
            }
            for &b in &c.smaller {
                key[b - 1] = (anchor as u8, anchor_larger);
            }
        }
        key
    }

    pub fn transcript(&self, params: &GameParams) -> Transcript {
        Transcript {
            n: params.n(),
            k: params.k(),
            records: self.history.clone(),
        }
    }
}

/// How the adversary picks between Plus and Minus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryMode {
    /// Exact minimax, preferring Minus among optimal replies.
    Optimal,
    /// Follow the smaller `SW_e` successor, Minus on ties.
    Sw,
}

/// Ball-level answering strategy backed by the weight-game Assigner.
#[derive(Debug)]
pub struct Adversary {
    params: GameParams,
    mode: AdversaryMode,
    solver: Solver,
}

impl Adversary {
    pub fn new(params: GameParams, mode: AdversaryMode) -> Self {
        Self {
            params,
            mode,
            solver: Solver::for_params(&params),
        }
    }

    /// Uses a preconfigured solver, e.g. one with a memo limit. The solver's
    /// excess must match `params`.
    pub fn with_solver(params: GameParams, mode: AdversaryMode, solver: Solver) -> Self {
        assert_eq!(solver.e(), params.e(), "solver excess does not match the game");
        Self {
            params,
            mode,
            solver,
        }
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    /// Once the weights are final the game is decided; later questions get
    /// the Plus-realizing answer, which keeps the transcript consistent.
    pub fn answer(&self, graph: &QuestionGraph, i: usize, j: usize) -> Result<BallAnswer> {
        if i == j {
            return Err(Error::SelfComparison { ball: i });
        }
        if let Some(forced) = graph.forced_answer(i, j)? {
            return Ok(forced);
        }
        let e = self.params.e();
        let position = graph.weights();
        if position.is_final(e)? {
            return graph.answer_for(i, j, AssignerChoice::Plus);
        }
        let (wi, wj) = (graph.side(i).0.weight(), graph.side(j).0.weight());
        let m = position
            .move_for_values(wi, wj)
            .expect("component weights are in the position");
        let choice = match self.mode {
            AdversaryMode::Optimal => self.solver.best_reply(&position, m)?,
            AdversaryMode::Sw => sw_guided_assigner(&position, e, m)?,
        };
        graph.answer_for(i, j, choice)
    }
}

pub fn adversarial_answer(
    graph: &QuestionGraph,
    i: usize,
    j: usize,
    params: &GameParams,
    mode: AdversaryMode,
) -> Result<BallAnswer> {
    Adversary::new(*params, mode).answer(graph, i, j)
}

/// The comparison an optimal weight-game Selector makes: the smallest balls
/// of the first two distinct components carrying the chosen weights.
pub fn solver_selector_query(solver: &Solver, graph: &QuestionGraph) -> Result<(usize, usize)> {
    let position = graph.weights();
    let m = solver.best_move(&position)?;
    let (w, w2) = m.values(&position)?;
    let comps = graph.components();
    let a = comps
        .iter()
        .position(|c| c.weight() == w)
        .expect("weight present");
    let b = comps
        .iter()
        .enumerate()
        .position(|(idx, c)| idx != a && c.weight() == w2)
        .expect("weight present");
    Ok((comps[a].smallest_ball(), comps[b].smallest_ball()))
}

/// Plays the solver-driven Selector against `adversary` until a majority
/// ball is identified. Returns the transcript of comparisons.
pub fn play_solver_selector(adversary: &Adversary) -> Result<Vec<Comparison>> {
    let params = *adversary.params();
    let mut graph = QuestionGraph::new(params.n() as usize)?;
    while graph.identify_majority(&params).is_none() {
        let (i, j) = solver_selector_query(adversary.solver(), &graph)?;
        let answer = adversary.answer(&graph, i, j)?;
        graph.add_comparison(i, j, answer)?;
    }
    Ok(graph.history().to_vec())
}

/// Longest identification time of the solver-driven Selector over every
/// consistent sequence of answers.
pub fn solver_selector_worst_case(params: &GameParams) -> Result<u32> {
    fn go(solver: &Solver, params: &GameParams, graph: &QuestionGraph) -> Result<u32> {
        if graph.identify_majority(params).is_some() {
            return Ok(0);
        }
        let (i, j) = solver_selector_query(solver, graph)?;
        let mut worst = 0;
        for answer in BallAnswer::BOTH {
            let mut next = graph.clone();
            next.add_comparison(i, j, answer)?;
            if next.is_consistent(params) {
                worst = worst.max(1 + go(solver, params, &next)?);
            }
        }
        Ok(worst)
    }
    let solver = Solver::for_params(params);
    go(&solver, params, &QuestionGraph::new(params.n() as usize)?)
}

fn ball_guard(params: &GameParams) -> Result<()> {
    if params.n() > BALL_SEARCH_GUARD {
        return Err(Error::GuardExceeded {
            what: "n",
            value: params.n() as u64,
            limit: BALL_SEARCH_GUARD as u64,
        });
    }
    Ok(())
}

fn open_pairs(graph: &QuestionGraph) -> Vec<(usize, usize)> {
    let n = graph.n();
    let mut pairs = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if graph.forced_answer(i, j).expect("balls in range").is_none() {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Minimum over Selector decision trees of the worst case over consistent
/// answers: the number of comparisons needed at ball level, by exhaustive
/// minimax on question graphs.
pub fn ball_game_value(params: &GameParams) -> Result<u32> {
    ball_guard(params)?;
    fn go(
        params: &GameParams,
        graph: &QuestionGraph,
        memo: &mut HashMap<Vec<(u8, bool)>, u32>,
    ) -> Result<u32> {
        if graph.identify_majority(params).is_some() {
            return Ok(0);
        }
        let key = graph.canonical_key();
        if let Some(&v) = memo.get(&key) {
            return Ok(v);
        }
        let mut best = u32::MAX;
        for (i, j) in open_pairs(graph) {
            let mut worst = 0;
            for answer in BallAnswer::BOTH {
                let mut next = graph.clone();
                next.add_comparison(i, j, answer)?;
                if next.is_consistent(params) {
                    worst = worst.max(1 + go(params, &next, memo)?);
                }
                if worst >= best {
                    break;
                }
            }
            best = best.min(worst);
        }
        memo.insert(key, best);
        Ok(best)
    }
    go(params, &QuestionGraph::new(params.n() as usize)?, &mut HashMap::new())
}

/// Fewest comparisons any Selector needs against a fixed deterministic
/// adversary, by breadth-first search over question graphs.
pub fn shortest_identification_against(adversary: &Adversary) -> Result<u32> {
    let params = *adversary.params();
    ball_guard(&params)?;
    let start = QuestionGraph::new(params.n() as usize)?;
    let mut seen = HashSet::from([start.canonical_key()]);
    let mut queue = VecDeque::from([(start, 0u32)]);
    while let Some((graph, depth)) = queue.pop_front() {
        if graph.identify_majority(&params).is_some() {
            return Ok(depth);
        }
        for (i, j) in open_pairs(&graph) {
            let answer = adversary.answer(&graph, i, j)?;
            let mut next = graph.clone();
            next.add_comparison(i, j, answer)?;
            if seen.insert(next.canonical_key()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    unreachable!("a single component always identifies a majority ball")
}

/// Header `(n, k)` followed by comparison records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub n: u32,
    pub k: u32,
    pub records: Vec<Comparison>,
}

impl Transcript {
    pub fn params(&self) -> Result<GameParams> {
        GameParams::new(self.n as i64, self.k as i64)
    }

    pub fn replay(&self) -> Result<QuestionGraph> {
        self.params()?;
        let mut graph = QuestionGraph::new(self.n as usize)?;
        for r in &self.records {
            graph.add_comparison(r.i, r.j, r.answer)?;
        }
        Ok(graph)
    }

    /// Line format: `n=<n> k=<k>` then one `i j same|different` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} k={}\n", self.n, self.k);
        for r in &self.records {
            out.push_str(&format!("{} {} {}\n", r.i, r.j, r.answer));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::ParseTranscript(msg);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header".into()))?;
        let mut n = None;
        let mut k = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => n = v.parse().ok(),
                Some(("k", v)) => k = v.parse().ok(),
                _ => return Err(bad(format!("bad header field {field:?}"))),
            }
        }
        let (n, k) = n.zip(k).ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let mut records = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [i, j, a] = parts.as_slice() else {
                return Err(bad(format!("bad record {line:?}")));
            };
            records.push(Comparison {
                i: i.parse().map_err(|_| bad(format!("bad ball {i:?}")))?,
                j: j.parse().map_err(|_| bad(format!("bad ball {j:?}")))?,
                answer: a.parse()?,
            });
        }
        Ok(Self { n, k, records })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ParseTranscript(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::k_formula;
    use crate::statistics::Valuation;
    use proptest::prelude::*;

    fn params(n: i64, k: i64) -> GameParams {
        GameParams::new(n, k).unwrap()
    }

    fn graph(n: usize, comparisons: &[(usize, usize, BallAnswer)]) -> QuestionGraph {
        let mut g = QuestionGraph::new(n).unwrap();
        for &(i, j, a) in comparisons {
            g.add_comparison(i, j, a).unwrap();
        }
        g
    }

    use BallAnswer::{Different, Same};

    #[test]
    fn fresh_graphs() {
        assert_eq!(QuestionGraph::new(5).unwrap().weights(), Position::new(vec![1; 5]));
        assert_eq!(QuestionGraph::new(1).unwrap().weights(), Position::new(vec![1]));
        assert!(QuestionGraph::new(0).is_err());
    }

    #[test]
    fn comparisons_update_weights() {
        assert_eq!(graph(5, &[(1, 2, Different)]).weights(), Position::new(vec![1, 1, 1, 0]));
        let mut g = graph(5, &[(1, 2, Same)]);
        assert_eq!(g.weights(), Position::new(vec![2, 1, 1, 1]));
        assert!(matches!(
            g.add_comparison(1, 2, Different),
            Err(Error::InconsistentAnswer { forced: "same", .. })
        ));
        assert_eq!(g.history().len(), 1);
        g.add_comparison(2, 1, Same).unwrap();
        assert_eq!(g.weights(), Position::new(vec![2, 1, 1, 1]));
        assert!(matches!(g.add_comparison(3, 3, Same), Err(Error::SelfComparison { ball: 3 })));
        assert!(g.add_comparison(0, 3, Same).is_err());
        assert!(g.add_comparison(6, 3, Same).is_err());

        assert_eq!(graph(4, &[(1, 2, Same), (2, 3, Same)]).weights(), Position::new(vec![3, 1]));
        assert_eq!(graph(3, &[(1, 2, Different)]).weights(), Position::new(vec![1, 0]));
    }

    #[test]
    fn identification_examples() {
        let g = graph(5, &[(1, 2, Different)]);
        assert_eq!(g.identify_majority(&params(5, 4)), Some(3));
        assert_eq!(g.identify_majority(&params(5, 3)), None);
        assert_eq!(QuestionGraph::new(3).unwrap().identify_majority(&params(3, 3)), Some(1));

        assert_eq!(g.consistent_colouring_exists(&params(5, 4), 3, ColourStatus::Minority), Ok(false));
        assert_eq!(g.consistent_colouring_exists(&params(5, 3), 3, ColourStatus::Minority), Ok(true));
        let fresh = QuestionGraph::new(3).unwrap();
        assert_eq!(fresh.consistent_colouring_exists(&params(3, 2), 1, ColourStatus::Minority), Ok(true));
        assert_eq!(fresh.consistent_colouring_exists(&params(3, 2), 1, ColourStatus::Majority), Ok(true));
    }

    #[test]
    fn answer_translation() {
        let p = params(5, 3);
        let fresh = QuestionGraph::new(5).unwrap();
        let answer = adversarial_answer(&fresh, 1, 2, &p, AdversaryMode::Optimal).unwrap();
        let choices = Solver::for_params(&p)
            .optimal_assigner_choices(&fresh.weights(), crate::rules::Move::new(0, 1))
            .unwrap();
        let realized = fresh.induced_step(1, 2, answer).unwrap().unwrap().1;
        assert!(choices.contains(&realized));
        assert_eq!(fresh.answer_for(1, 2, AssignerChoice::Minus), Ok(Different));

        // weights 2 ({1,2} vs nothing) and 1 (ball 3): larger vs larger, Minus -> Different
        let g = graph(5, &[(1, 2, Same)]);
        assert_eq!(g.answer_for(1, 3, AssignerChoice::Minus), Ok(Different));
        assert_eq!(g.answer_for(1, 3, AssignerChoice::Plus), Ok(Same));
        // smaller-side ball against larger-side ball flips the translation
        let g = graph(5, &[(1, 2, Same), (1, 3, Different)]);
        assert_eq!(g.weights(), Position::new(vec![1, 1, 1]));
        assert_eq!(g.answer_for(3, 4, AssignerChoice::Plus), Ok(Different));
        // weight-0 components answer Same
        let g = graph(5, &[(1, 2, Different)]);
        assert_eq!(g.answer_for(1, 3, AssignerChoice::Minus), Ok(Same));
        // forced answers leave the graph unchanged
        let g = graph(5, &[(1, 2, Same)]);
        let adversary = Adversary::new(p, AdversaryMode::Sw);
        assert_eq!(adversary.answer(&g, 2, 1), Ok(Same));
        assert_eq!(adversary.answer(&g, 1, 1).unwrap_err(), Error::SelfComparison { ball: 1 });
    }

    #[test]
    fn induced_steps_commute_with_apply() {
        let g = graph(6, &[(1, 2, Same), (3, 4, Different)]);
        for (i, j) in [(1, 3), (2, 5), (5, 6), (1, 6)] {
            for a in BallAnswer::BOTH {
                let ((w, w2), c) = g.induced_step(i, j, a).unwrap().unwrap();
                let before = g.weights();
                let expected = before.apply(before.move_for_values(w, w2).unwrap(), c).unwrap();
                let mut after = g.clone();
                after.add_comparison(i, j, a).unwrap();
                assert_eq!(after.weights(), expected);
            }
        }
        assert_eq!(g.induced_step(1, 2, Same), Ok(None));
    }

    #[test]
    fn solver_selector_meets_bound() {
        for p in GameParams::all_up_to(7) {
            let adversary = Adversary::new(p, AdversaryMode::Optimal);
            let transcript = play_solver_selector(&adversary).unwrap();
            assert_eq!(transcript.len() as u32, k_formula(&p), "{p}");
        }
    }

    #[test]
    fn ball_level_minimax_small() {
        for p in GameParams::all_up_to(5) {
            assert_eq!(ball_game_value(&p).unwrap(), k_formula(&p), "{p}");
        }
        assert!(ball_game_value(&params(9, 5)).is_err());
    }

    #[test]
    fn sw_adversary_answers_consistently() {
        let p = params(7, 4);
        let adversary = Adversary::new(p, AdversaryMode::Sw);
        let transcript = play_solver_selector(&adversary).unwrap();
        assert!(transcript.len() as u32 <= k_formula(&p));
        assert!(crate::statistics::sw(&Position::start(&p), 1).unwrap() >= Valuation::Finite(3));
    }

    #[test]
    fn transcript_formats() {
        let g = graph(5, &[(1, 2, Same), (3, 1, Different)]);
        let t = g.transcript(&params(5, 3));
        let text = t.to_text();
        assert_eq!(text, "n=5 k=3\n1 2 same\n3 1 different\n");
        assert_eq!(Transcript::from_text(&text).unwrap(), t);
        assert_eq!(Transcript::from_text(&text).unwrap().to_text(), text);
        let json = t.to_json();
        assert_eq!(json, r#"{"n":5,"k":3,"records":[{"i":1,"j":2,"answer":"same"},{"i":3,"j":1,"answer":"different"}]}"#);
        assert_eq!(Transcript::from_json(&json).unwrap(), t);
        assert_eq!(t.replay().unwrap().weights(), g.weights());
        assert!(Transcript::from_text("n=5\n").is_err());
        assert!(Transcript::from_text("n=5 k=3\n1 2 maybe\n").is_err());
        assert!(Transcript::from_text("n=5 k=3\n1 2\n").is_err());
    }

    proptest! {
        #[test]
        fn forced_answers_match_path_parity(
            n in 2usize..9,
            raw in proptest::collection::vec((1usize..9, 1usize..9, any::<bool>()), 0..16),
        ) {
            // Build a consistent transcript from a hidden colouring.
            let colour: Vec<bool> = (0..=n).map(|b| (b * 7919) % 3 == 0).collect();
            let mut g = QuestionGraph::new(n).unwrap();
            let mut edges = Vec::new();
            for (i, j, _) in raw {
                let (i, j) = ((i - 1) % n + 1, (j - 1) % n + 1);
                if i == j {
                    continue;
                }
                let a = if colour[i] == colour[j] { Same } else { Different };
                g.add_comparison(i, j, a).unwrap();
                edges.push((i, j));
            }
            // Compare with parity along BFS paths over the recorded edges.
            for start in 1..=n {
                let mut side = vec![None; n + 1];
                side[start] = Some(false);
                let mut queue = VecDeque::from([start]);
                while let Some(u) = queue.pop_front() {
                    for &(a, b) in &edges {
                        let v = if a == u { b } else if b == u { a } else { continue };
                        if side[v].is_none() {
                            side[v] = Some(side[u].unwrap() ^ (colour[u] != colour[v]));
                            queue.push_back(v);
                        }
                    }
                }
                for (other, side) in side.iter().enumerate().skip(1) {
                    let expected = side.map(|s| if s { Different } else { Same });
                    prop_assert_eq!(g.forced_answer(start, other).unwrap(), expected);
                }
            }
        }
    }
}
