//! Seeded verification suites for the identities behind the lower bound.
//!
//! Every suite returns a [`Report`]; a suite passes when no case failed.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ballgame::{BallAnswer, ColourStatus, QuestionGraph};
use crate::error::Result;
use crate::laurent::{certificate_value, final_bound_check, final_certificate_poly, signed_delta, LaurentPoly};
use crate::rules::{GameParams, Move, Position};
use crate::solver::{
    k_formula, verify_lemma_last, verify_nonprediction_with_guard, verify_sw_dominates_with_guard,
    Solver,
};
use crate::statistics::{
    alpha_counts, binary_weight, binomial, delta_b, delta_b_with_alpha, delta_bruteforce, sw,
    two_adic_valuation, DeltaRecursion, ExactInt, Valuation,
};

const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub name: String,
    pub value: String,
}

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: u64,
    pub failed: u64,
    /// The first few failures, verbatim.
    pub failures: Vec<String>,
    pub witnesses: Vec<Witness>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            cases: 0,
            failed: 0,
            failures: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, message: String) {
        self.failed += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(message);
        }
    }

    /// Counts a case and records `message` when `ok` is false.
    pub fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.case();
        if !ok {
            self.fail(message());
        }
    }

    pub fn witness(&mut self, name: &str, value: String) {
        self.witnesses.push(Witness {
            name: name.to_string(),
            value,
        });
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn absorb(&mut self, other: Report) {
        self.cases += other.cases;
        let unrecorded = other.failed - other.failures.len() as u64;
        for f in other.failures {
            self.fail(f);
        }
        self.failed += unrecorded;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Conserved,
    Star,
    Start,
    Alt,
    Leibniz,
    Certificate,
    FinalBound,
    SwDominates,
    Theorem,
    LemmaLast,
    Nonpredict,
    BallgameCommute,
    Adversary,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::Conserved,
        Suite::Star,
        Suite::Start,
        Suite::Alt,
        Suite::Leibniz,
        Suite::Certificate,
        Suite::FinalBound,
        Suite::SwDominates,
        Suite::Theorem,
        Suite::LemmaLast,
        Suite::Nonpredict,
        Suite::BallgameCommute,
        Suite::Adversary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Conserved => "conserved",
            Suite::Star => "star",
            Suite::Start => "start",
            Suite::Alt => "alt",
            Suite::Leibniz => "leibniz",
            Suite::Certificate => "certificate",
            Suite::FinalBound => "final-bound",
            Suite::SwDominates => "sw-dominates",
            Suite::Theorem => "theorem",
            Suite::LemmaLast => "lemma-last",
            Suite::Nonpredict => "nonpredict",
            Suite::BallgameCommute => "ballgame-commute",
            Suite::Adversary => "adversary",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Knobs shared by all suites. `None` selects the suite's default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: Option<u64>,
    pub max_n: Option<u32>,
    pub m: Option<u64>,
    pub max_sum: Option<u64>,
    /// Overrides the solver scale guards.
    pub guard: Option<u32>,
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<Report> {
    let seed = opts.seed;
    match suite {
        Suite::Conserved => Ok(conserved(seed, opts.trials.unwrap_or(1000), 1)),
        Suite::Star => Ok(conserved(seed, opts.trials.unwrap_or(1000), 4)),
        Suite::Start => start_formula(opts.max_n.unwrap_or(24), opts.trials.unwrap_or(10_000)),
        Suite::Alt => closed_form_vs_recursion(opts.max_sum.unwrap_or(14), 2, 6),
        Suite::Leibniz => Ok(leibniz(seed, opts.trials.unwrap_or(500), 5)),
        Suite::Certificate => final_certificates(opts.max_sum.unwrap_or(16), 2),
        Suite::FinalBound => final_bounds(opts.max_sum.unwrap_or(16), 2),
        Suite::SwDominates => {
            let max_n = opts.max_n.unwrap_or(10);
            let mut report = Report::new("sw-dominates");
            for params in GameParams::all_up_to(max_n) {
                let sub = verify_sw_dominates_with_guard(&params, opts.guard.unwrap_or(12))?;
                report.absorb(sub);
            }
            report.witness("max_n", max_n.to_string());
            Ok(report)
        }
        Suite::Theorem => theorem(opts.max_n.unwrap_or(12)),
        Suite::LemmaLast => verify_lemma_last(opts.m.unwrap_or(32)),
        Suite::Nonpredict => {
            verify_nonprediction_with_guard(opts.m.unwrap_or(3), opts.guard.map_or(7, |g| g as u64))
        }
        Suite::BallgameCommute => ballgame_commute(
            seed,
            opts.trials.unwrap_or(10_000),
            opts.max_n.unwrap_or(10),
            7,
            6,
        ),
        Suite::Adversary => adversary_bound(opts.max_n.unwrap_or(9), 7),
    }
}

/// All multisets of positive weights with the given sum, weakly decreasing.
pub fn partitions(total: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(cap)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// Every position with sum at most `max_sum` and up to `max_zeros` zero elements.
pub fn positions_up_to(max_sum: u32, max_zeros: usize) -> Vec<Position> {
    let mut out = Vec::new();
    for total in 0..=max_sum {
        for p in partitions(total) {
            for zeros in 0..=max_zeros {
                let mut v = p.clone();
                v.extend(std::iter::repeat_n(0, zeros));
                out.push(Position::new(v));
            }
        }
    }
    out
}

fn random_position(rng: &mut ChaCha8Rng, max_sum: u64) -> Position {
    loop {
        let len = rng.gen_range(2..=12);
        let v: Vec<u32> = (0..len).map(|_| rng.gen_range(0..=7)).collect();
        let p = Position::new(v);
        if p.sum() <= max_sum {
            return p;
        }
    }
}

/// `delta^(b)_e(M) = delta^(b)_e(M+) + (-1)^w' delta^(b)_e(M-)` on random
/// positions and moves, for `1 <= b <= b_max`. Positions with sum at most 14
/// are cross-checked against the recursive definition and brute force.
pub fn conserved(seed: u64, trials: u64, b_max: u32) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(if b_max == 1 { "conserved" } else { "star" });
    let mut oracle_checked = 0u64;
    for _ in 0..trials {
        let p = random_position(&mut rng, 24);
        let sum = p.sum();
        let e = 1 + (1 - sum % 2) as u32 + 2 * rng.gen_range(0..=(sum / 2 + 1)) as u32;
        let mut idx: Vec<usize> = (0..p.len()).collect();
        idx.shuffle(&mut rng);
        let m = Move::new(idx[0].min(idx[1]), idx[0].max(idx[1]));
        let (_, w2) = m.values(&p).expect("indices are valid");
        let (plus, minus) = p.successors(m).expect("legal move");
        let with_oracle = sum <= 14;
        let mut lhs_recursive = DeltaRecursion::new(&p);
        let mut plus_recursive = DeltaRecursion::new(&plus);
        let mut minus_recursive = DeltaRecursion::new(&minus);
        for b in 1..=b_max {
            let d = |q: &Position| delta_b(q, e, b).expect("parity matches");
            let (lhs, dp, dm) = (d(&p), d(&plus), d(&minus));
            let rhs = if w2 % 2 == 0 { &dp + &dm } else { &dp - &dm };
            report.check(lhs == rhs, || {
                format!("{p} move {:?} e={e} b={b}: {lhs} != {dp} + (-1)^{w2} {dm}", (p.elements()[m.first], w2))
            });
            if with_oracle {
                oracle_checked += 1;
                let ok = lhs_recursive.delta(e, b) == Ok(lhs.clone())
                    && plus_recursive.delta(e, b) == Ok(dp.clone())
                    && minus_recursive.delta(e, b) == Ok(dm.clone());
                let brute_ok = b != 1
                    || (delta_bruteforce(&p, e) == Ok(lhs.clone())
                        && delta_bruteforce(&plus, e) == Ok(dp.clone())
                        && delta_bruteforce(&minus, e) == Ok(dm.clone()));
                report.check(ok && brute_ok, || format!("{p} e={e} b={b}: closed form disagrees with oracle"));
            }
        }
    }
    report.witness("seed", seed.to_string());
    report.witness("trials", trials.to_string());
    report.witness("oracle_cross_checks", oracle_checked.to_string());
    report
}

/// `delta^(b)_e({1^n}) = (-1)^s C(n-b, s)`, `SW_e(start) = e + B(s)`, and
/// `P(C(2t, t)) = B(t)` for `t <= t_max`.
pub fn start_formula(max_n: u32, t_max: u64) -> Result<Report> {
    let mut report = Report::new("start");
    for n in 1..=max_n {
        let start = Position::new(vec![1; n as usize]);
        let alpha = alpha_counts(&start);
        for e in (1..=n).filter(|e| (n - e) % 2 == 0) {
            let s = ((n - e) / 2) as u64;
            for b in 1..=n {
                let got = delta_b_with_alpha(&start, &alpha, e, b)?;
                let mut want = binomial((n - b) as i64, s);
                if s % 2 == 1 {
                    want = -want;
                }
                report.check(got == want, || format!("n={n} e={e} b={b}: {got} != {want}"));
            }
            let potential = sw(&start, e)?;
            let want = Valuation::Finite(e as u64 + binary_weight(s) as u64);
            report.check(potential == want, || format!("SW_{e}([1^{n}]) = {potential}, expected {want}"));
        }
    }
    // Central binomials by the ratio C(2t+2, t+1) = C(2t, t) (2t+1)(2t+2) / (t+1)^2.
    let mut central = ExactInt::from(1);
    for t in 0..=t_max {
        if t > 0 {
            let u = t - 1;
            central = central * ExactInt::from((2 * u + 1) * (2 * u + 2)) / ExactInt::from((u + 1) * (u + 1));
        }
        let got = two_adic_valuation(&central);
        let want = Valuation::Finite(binary_weight(t) as u64);
        report.check(got == want, || format!("P(C({}, {t})) = {got}, expected {want}", 2 * t));
    }
    report.witness("max_n", max_n.to_string());
    report.witness("t_max", t_max.to_string());
    Ok(report)
}

/// Closed form against the defining recursion on every position with sum at
/// most `max_sum` (plus up to `max_zeros` zeros), every matching `e` up to
/// `sum + 2`, and `b <= b_max`.
pub fn closed_form_vs_recursion(max_sum: u64, max_zeros: usize, b_max: u32) -> Result<Report> {
    let mut report = Report::new("alt");
    for p in positions_up_to(max_sum as u32, max_zeros) {
        let sum = p.sum() as u32;
        let alpha = alpha_counts(&p);
        let mut recursion = DeltaRecursion::new(&p);
        let first_e = if sum.is_multiple_of(2) { 2 } else { 1 };
        for e in (first_e..=sum + 2).step_by(2) {
            for b in 1..=b_max {
                let closed = delta_b_with_alpha(&p, &alpha, e, b)?;
                let recursive = recursion.delta(e, b)?;
                report.check(closed == recursive, || format!("{p} e={e} b={b}: {closed} != {recursive}"));
                if b == 1 {
                    let brute = delta_bruteforce(&p, e)?;
                    report.check(closed == brute, || format!("{p} e={e}: {closed} != brute force {brute}"));
                }
            }
        }
    }
    report.witness("max_sum", max_sum.to_string());
    report.witness("b_max", b_max.to_string());
    Ok(report)
}

fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let terms = rng.gen_range(0..=6);
    LaurentPoly::from_terms((0..terms).map(|_| (rng.gen_range(-9i64..=9), rng.gen_range(-8i64..=8))))
}

/// `D^(r)(fg) = sum_t D^(t) f D^(r-t) g` on random Laurent polynomials.
pub fn leibniz(seed: u64, trials: u64, r_max: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("leibniz");
    for _ in 0..trials {
        let (f, g) = (random_laurent(&mut rng), random_laurent(&mut rng));
        let product = &f * &g;
        for r in 0..=r_max {
            let lhs = product.hyperderivative(r);
            let rhs = (0..=r).fold(LaurentPoly::zero(), |acc, t| {
                &acc + &(&f.hyperderivative(t) * &g.hyperderivative(r - t))
            });
            report.check(lhs == rhs, || format!("f={f} g={g} r={r}: {lhs} != {rhs}"));
        }
    }
    report.witness("seed", seed.to_string());
    report.witness("trials", trials.to_string());
    report
}

/// `(position, e)` for every final position with sum at most `max_sum`
/// and `1 <= e <= sum` of matching parity.
pub fn final_positions(max_sum: u64, max_zeros: usize) -> Vec<(Position, u32)> {
    let mut out = Vec::new();
    for p in positions_up_to(max_sum as u32, max_zeros) {
        let sum = p.sum() as u32;
        for e in (1..=sum).filter(|e| (sum - e).is_multiple_of(2)) {
            if p.is_final(e).unwrap_or(false) {
                out.push((p.clone(), e));
            }
        }
    }
    out
}

/// Signed certificate identity, the unsigned valuation identity, and the
/// agreement of the low coefficients of `g` with the subposition counts.
pub fn final_certificates(max_sum: u64, max_zeros: usize) -> Result<Report> {
    let mut report = Report::new("certificate");
    for (p, e) in final_positions(max_sum, max_zeros) {
        let value = certificate_value(&p, e)?;
        let signed = signed_delta(&p, e)?;
        report.check(value == signed, || format!("{p} e={e}: (D g)(-1) = {value}, (-1)^s delta = {signed}"));
        let via_certificate = two_adic_valuation(&value) + e as u64;
        let potential = sw(&p, e)?;
        report.check(via_certificate == potential, || {
            format!("{p} e={e}: e + P(cert) = {via_certificate} but SW = {potential}")
        });
        let s = p.s_of(e)?;
        let g = final_certificate_poly(&p, e)?;
        let alpha = alpha_counts(&p);
        let top = (s + e as u64 - 1) as i64;
        let ok = g.min_exponent().is_none_or(|lo| lo >= 0)
            && (0..=s).all(|r| g.coeff(top - r as i64) == alpha.get(r));
        report.check(ok, || format!("{p} e={e}: certificate polynomial {g} disagrees with alpha"));
    }
    report.witness("max_sum", max_sum.to_string());
    Ok(report)
}

/// `SW_e(M) >= |M|` on every final position.
pub fn final_bounds(max_sum: u64, max_zeros: usize) -> Result<Report> {
    let mut report = Report::new("final-bound");
    let mut tightest: Option<(u64, String)> = None;
    for (p, e) in final_positions(max_sum, max_zeros) {
        let ok = final_bound_check(&p, e)?;
        report.check(ok, || format!("{p} e={e}: SW below {}", p.len()));
        if let Some(v) = sw(&p, e)?.finite() {
            let slack = v.saturating_sub(p.len() as u64);
            if tightest.as_ref().is_none_or(|(s, _)| slack < *s) {
                tightest = Some((slack, format!("{p} e={e}")));
            }
        }
    }
    if let Some((slack, at)) = tightest {
        report.witness("min_slack", format!("{slack} at {at}"));
    }
    Ok(report)
}

/// `K(n, k) = 2(n-k) - B(n-k)` and `V(start) <= B(n-k) + e` for every
/// valid pair with `n <= max_n`.
pub fn theorem(max_n: u32) -> Result<Report> {
    let mut report = Report::new("theorem");
    for params in GameParams::all_up_to(max_n) {
        let solver = Solver::for_params(&params);
        let value = solver.value(&Position::start(&params))?;
        let k = params.n() - value;
        let want = k_formula(&params);
        report.check(k == want, || format!("{params}: solver K={k}, formula {want}"));
        let bound = binary_weight(params.minority_bound() as u64) + params.e();
        report.check(value <= bound, || format!("{params}: V(start)={value} exceeds B(n-k)+e={bound}"));
    }
    report.witness("max_n", max_n.to_string());
    Ok(report)
}

/// Random ball-level transcripts map step by step onto weight-game moves,
/// and identification agrees with the colouring oracle on every graph
/// reachable within `depth` comparisons for `n <= ident_max_n`.
pub fn ballgame_commute(
    seed: u64,
    trials: u64,
    max_n: u32,
    ident_max_n: u32,
    depth: u32,
) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("ballgame-commute");
    for _ in 0..trials {
        let n = rng.gen_range(2..=max_n as usize);
        let mut g = QuestionGraph::new(n)?;
        let steps = rng.gen_range(1..=n);
        for _ in 0..steps {
            let i = rng.gen_range(1..=n);
            let j = loop {
                let j = rng.gen_range(1..=n);
                if j != i {
                    break j;
                }
            };
            let answer = match g.forced_answer(i, j)? {
                Some(a) => a,
                None if rng.gen_bool(0.5) => BallAnswer::Same,
                None => BallAnswer::Different,
            };
            let before = g.weights();
            let step = g.induced_step(i, j, answer)?;
            g.add_comparison(i, j, answer)?;
            let expected = match step {
                Some(((w, w2), choice)) => before
                    .apply(before.move_for_values(w, w2).expect("weights present"), choice)?,
                None => before.clone(),
            };
            let after = g.weights();
            report.check(after == expected, || {
                format!("n={n} {i}-{j} {answer}: weights {after}, weight game gives {expected}")
            });
        }
    }

    let mut graphs = 0u64;
    for n in 1..=ident_max_n {
        for k in n / 2 + 1..=n {
            let params = GameParams::new(n as i64, k as i64)?;
            for g in graphs_within(&params, depth)? {
                graphs += 1;
                let identified = g.identify_majority(&params);
                let never_minority: Vec<usize> = (1..=n as usize)
                    .filter(|&b| {
                        !g.consistent_colouring_exists(&params, b, ColourStatus::Minority)
                            .expect("within guard")
                    })
                    .collect();
                report.check(identified == never_minority.first().copied(), || {
                    format!(
                        "{params} graph {:?}: identified {identified:?}, oracle {never_minority:?}",
                        g.history()
                    )
                });
            }
        }
    }
    report.witness("seed", seed.to_string());
    report.witness("transcripts", trials.to_string());
    report.witness("graphs_checked", graphs.to_string());
    Ok(report)
}

/// Distinct question graphs consistent with `params` reachable within
/// `depth` comparisons.
pub fn graphs_within(params: &GameParams, depth: u32) -> Result<Vec<QuestionGraph>> {
    let n = params.n() as usize;
    let start = QuestionGraph::new(n)?;
    let mut seen = HashSet::from([start.canonical_key()]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((g, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for i in 1..=n {
            for j in i + 1..=n {
                if g.forced_answer(i, j)?.is_some() {
                    continue;
                }
                for answer in BallAnswer::BOTH {
                    let mut next = g.clone();
                    next.add_comparison(i, j, answer)?;
                    if next.is_consistent(params) && seen.insert(next.canonical_key()) {
                        out.push(next.clone());
                        queue.push_back((next, d + 1));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The solver-driven Selector needs exactly `K(n, k)` comparisons against the
/// optimal adversary and at most that against any answers (`n <= play_max_n`);
/// no Selector does better at ball level (`n <= search_max_n`).
pub fn adversary_bound(play_max_n: u32, search_max_n: u32) -> Result<Report> {
    use crate::ballgame::{
        ball_game_value, play_solver_selector, shortest_identification_against,
        solver_selector_worst_case, Adversary, AdversaryMode,
    };
    let mut report = Report::new("adversary");
    for params in GameParams::all_up_to(play_max_n) {
        let want = k_formula(&params);
        let adversary = Adversary::new(params, AdversaryMode::Optimal);
        let used = play_solver_selector(&adversary)?.len() as u32;
        report.check(used == want, || format!("{params}: solver Selector used {used}, K={want}"));
        let worst = solver_selector_worst_case(&params)?;
        report.check(worst == want, || format!("{params}: worst case over answers {worst}, K={want}"));
        if params.n() <= search_max_n {
            let fastest = shortest_identification_against(&adversary)?;
            report.check(fastest == want, || format!("{params}: some Selector finishes in {fastest} < K={want}"));
            let minimax = ball_game_value(&params)?;
            report.check(minimax == want, || format!("{params}: ball-level minimax {minimax}, K={want}"));
        }
    }
    report.witness("play_max_n", play_max_n.to_string());
    report.witness("search_max_n", search_max_n.to_string());
    Ok(report)
}

/// Run several suites, stopping at the first hard error.
pub fn run_suites(suites: &[Suite], opts: &SuiteOptions) -> Result<Vec<Report>> {
    suites.iter().map(|&s| run_suite(s, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|t| partitions(t).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert!(partitions(6).iter().all(|p| p.iter().sum::<u32>() == 6));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        assert!(conserved(7, 60, 1).passed());
        assert!(conserved(7, 30, 3).passed());
        assert!(start_formula(10, 200).unwrap().passed());
        assert!(closed_form_vs_recursion(8, 1, 4).unwrap().passed());
        assert!(leibniz(1, 40, 4).passed());
        assert!(final_certificates(10, 1).unwrap().passed());
        assert!(final_bounds(10, 1).unwrap().passed());
        assert!(theorem(8).unwrap().passed());
        assert!(ballgame_commute(3, 200, 8, 4, 4).unwrap().passed());
        assert!(adversary_bound(5, 4).unwrap().passed());
    }

    #[test]
    fn report_records_failures() {
        let mut r = Report::new("x");
        for i in 0..30 {
            r.check(i % 2 == 0, || format!("odd {i}"));
        }
        assert_eq!((r.cases, r.failed), (30, 15));
        assert_eq!(r.failures.len(), MAX_RECORDED_FAILURES.min(15));
        assert!(!r.passed());
    }
}
