//! Line-oriented interactive play. Input and output are injected so the
//! loop can be driven from tests.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use majority_core::ballgame::{solver_selector_query, Adversary, AdversaryMode, BallAnswer, QuestionGraph};
use majority_core::solver::{k_formula, sw_guided_assigner, Solver};
use majority_core::{AssignerChoice, GameParams, Move, Position};

use crate::error::CliError;
use crate::{Level, Phrasing, Role, SolverConfig};

#[derive(Debug, Clone)]
pub struct Settings {
    pub role: Role,
    pub adversary: AdversaryMode,
    pub level: Level,
    pub phrasing: Phrasing,
    pub transcript: Option<PathBuf>,
    pub guard: u32,
}

struct Session<'a, R> {
    input: R,
    out: &'a mut dyn Write,
    phrasing: Phrasing,
}

enum Input {
    Line(String),
    Quit,
}

impl<R: BufRead> Session<'_, R> {
    /// Next non-empty line, or an error once input runs out.
    fn prompt(&mut self, prompt: &str) -> Result<Input, CliError> {
        loop {
            write!(self.out, "{prompt}")?;
            self.out.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                writeln!(self.out)?;
                return Err(CliError::Failure("input ended before the game finished".into()));
            }
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if matches!(line, "q" | "quit" | "exit") {
                return Ok(Input::Quit);
            }
            return Ok(Input::Line(line.to_string()));
        }
    }

    fn describe(&self, i: usize, j: usize, answer: BallAnswer) -> String {
        match (self.phrasing, answer) {
            (Phrasing::Colours, BallAnswer::Same) => format!("balls {i} and {j} have the same colour"),
            (Phrasing::Colours, BallAnswer::Different) => format!("balls {i} and {j} have different colours"),
            (Phrasing::Knights, BallAnswer::Same) => format!("person {i} says person {j} is a knight"),
            (Phrasing::Knights, BallAnswer::Different) => format!("person {i} says person {j} is a knave"),
        }
    }

    fn question(&self, i: usize, j: usize) -> String {
        match self.phrasing {
            Phrasing::Colours => format!("balls {i} and {j}: same or different? "),
            Phrasing::Knights => format!("person {i}, is person {j} a knight? (yes/no) "),
        }
    }
}

fn parse_pair<T: std::str::FromStr>(line: &str) -> Option<(T, T)> {
    let mut parts = line.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty());
    let a = parts.next()?.parse().ok()?;
    let b = parts.next()?.parse().ok()?;
    parts.next().is_none().then_some((a, b))
}

fn parse_answer(line: &str) -> Option<BallAnswer> {
    match line.to_ascii_lowercase().as_str() {
        "same" | "s" | "yes" | "y" | "knight" => Some(BallAnswer::Same),
        "different" | "d" | "no" | "n" | "knave" => Some(BallAnswer::Different),
        _ => None,
    }
}

fn parse_choice(line: &str) -> Option<AssignerChoice> {
    match line.to_ascii_lowercase().as_str() {
        "plus" | "p" | "+" => Some(AssignerChoice::Plus),
        "minus" | "m" | "-" => Some(AssignerChoice::Minus),
        _ => None,
    }
}

/// Runs one game. Returns `Ok(true)` once it finishes; quitting or running
/// out of input is a failure.
pub fn play<R: BufRead>(
    input: R,
    out: &mut dyn Write,
    config: SolverConfig,
    n: i64,
    k: i64,
    settings: &Settings,
) -> Result<bool, CliError> {
    let params = GameParams::new(n, k)?;
    if params.n() > settings.guard {
        return Err(CliError::Usage(format!(
            "n = {} exceeds the solver guard {} (raise it with --guard)",
            params.n(),
            settings.guard
        )));
    }
    if settings.level == Level::Weights && settings.transcript.is_some() {
        return Err(CliError::Usage("--out records ball-level games only".into()));
    }
    let mut session = Session {
        input,
        out,
        phrasing: settings.phrasing,
    };
    let solver = config.solver(params.e());
    match (settings.level, settings.role) {
        (Level::Balls, role) => {
            let mut graph = QuestionGraph::new(params.n() as usize)?;
            let outcome = match role {
                Role::Selector => {
                    let adversary = Adversary::with_solver(params, settings.adversary, solver);
                    balls_as_selector(&mut session, &params, &adversary, &mut graph)
                }
                Role::Assigner => balls_as_assigner(&mut session, &params, &solver, &mut graph),
            };
            if let Some(path) = &settings.transcript {
                let transcript = graph.transcript(&params);
                let text = if path.extension().is_some_and(|ext| ext == "json") {
                    transcript.to_json()
                } else {
                    transcript.to_text()
                };
                std::fs::write(path, text)?;
            }
            outcome
        }
        (Level::Weights, Role::Selector) => weights_as_selector(&mut session, &params, &solver, settings.adversary),
        (Level::Weights, Role::Assigner) => weights_as_assigner(&mut session, &params, &solver),
    }
}

fn comparisons(count: usize) -> String {
    match count {
        1 => "1 comparison".to_string(),
        _ => format!("{count} comparisons"),
    }
}

fn quit() -> Result<bool, CliError> {
    Err(CliError::Failure("game abandoned".into()))
}

fn balls_as_selector<R: BufRead>(
    session: &mut Session<'_, R>,
    params: &GameParams,
    adversary: &Adversary,
    graph: &mut QuestionGraph,
) -> Result<bool, CliError> {
    let target = k_formula(params);
    writeln!(
        session.out,
        "{} balls, at least {} of one colour. Compare pairs (\"i j\") until a majority ball is certain; \"quit\" gives up.",
        params.n(),
        params.k()
    )?;
    loop {
        if let Some(ball) = graph.identify_majority(params) {
            writeln!(
                session.out,
                "Ball {ball} certainly has the majority colour. You used {}; the optimal worst case is {target}.",
                comparisons(graph.history().len())
            )?;
            return Ok(true);
        }
        let line = match session.prompt("compare> ")? {
            Input::Quit => return quit(),
            Input::Line(line) => line,
        };
        let Some((i, j)) = parse_pair::<usize>(&line) else {
            writeln!(session.out, "enter two ball numbers between 1 and {}", params.n())?;
            continue;
        };
        let answer = match adversary.answer(graph, i, j) {
            Ok(answer) => answer,
            Err(err) => {
                writeln!(session.out, "{err}")?;
                continue;
            }
        };
        graph.add_comparison(i, j, answer)?;
        writeln!(session.out, "{}", session.describe(i, j, answer))?;
    }
}

fn balls_as_assigner<R: BufRead>(
    session: &mut Session<'_, R>,
    params: &GameParams,
    solver: &Solver,
    graph: &mut QuestionGraph,
) -> Result<bool, CliError> {
    let target = k_formula(params);
    writeln!(
        session.out,
        "{} balls, at least {} of one colour. Answer my questions consistently; \"quit\" gives up.",
        params.n(),
        params.k()
    )?;
    loop {
        if let Some(ball) = graph.identify_majority(params) {
            writeln!(
                session.out,
                "Ball {ball} has the majority colour. I needed {}; I never need more than {target}.",
                comparisons(graph.history().len())
            )?;
            return Ok(true);
        }
        let (i, j) = solver_selector_query(solver, graph)?;
        loop {
            let question = session.question(i, j);
            let line = match session.prompt(&question)? {
                Input::Quit => return quit(),
                Input::Line(line) => line,
            };
            let Some(answer) = parse_answer(&line) else {
                writeln!(session.out, "answer same or different (yes or no)")?;
                continue;
            };
            let mut trial = graph.clone();
            trial.add_comparison(i, j, answer)?;
            if !trial.is_consistent(params) {
                writeln!(
                    session.out,
                    "that leaves fewer than {} balls of either colour; answer again",
                    params.k()
                )?;
                continue;
            }
            *graph = trial;
            break;
        }
    }
}

fn read_move<R: BufRead>(session: &mut Session<'_, R>, position: &Position) -> Result<Option<Move>, CliError> {
    loop {
        let line = match session.prompt("move> ")? {
            Input::Quit => return Ok(None),
            Input::Line(line) => line,
        };
        let Some((a, b)) = parse_pair::<u32>(&line) else {
            writeln!(session.out, "enter two weights from the position")?;
            continue;
        };
        match position.move_for_values(a.max(b), a.min(b)) {
            Some(m) => return Ok(Some(m)),
            None => writeln!(session.out, "{position} has no pair of weights {a} and {b}")?,
        }
    }
}

fn weights_as_selector<R: BufRead>(
    session: &mut Session<'_, R>,
    params: &GameParams,
    solver: &Solver,
    mode: AdversaryMode,
) -> Result<bool, CliError> {
    let e = params.e();
    let target = k_formula(params);
    let mut position = Position::start(params);
    let mut moves = 0;
    writeln!(
        session.out,
        "Weight game with e={e}. Pick two weights (\"w w'\") until one reaches s+1, where the total is 2s+e; \"quit\" gives up."
    )?;
    loop {
        if position.is_final(e)? {
            writeln!(
                session.out,
                "Final position {position} after {}; the optimal worst case is {target}.",
                comparisons(moves)
            )?;
            return Ok(true);
        }
        writeln!(session.out, "position {position}")?;
        let Some(m) = read_move(session, &position)? else {
            return quit();
        };
        let choice = match mode {
            AdversaryMode::Optimal => solver.best_reply(&position, m)?,
            AdversaryMode::Sw => sw_guided_assigner(&position, e, m)?,
        };
        position = position.apply(m, choice)?;
        moves += 1;
        writeln!(session.out, "assigner plays {choice}")?;
    }
}

fn weights_as_assigner<R: BufRead>(
    session: &mut Session<'_, R>,
    params: &GameParams,
    solver: &Solver,
) -> Result<bool, CliError> {
    let e = params.e();
    let target = k_formula(params);
    let mut position = Position::start(params);
    let mut moves = 0;
    writeln!(session.out, "Weight game with e={e}. Answer plus or minus; \"quit\" gives up.")?;
    loop {
        if position.is_final(e)? {
            writeln!(
                session.out,
                "Final position {position} after {}; I never need more than {target}.",
                comparisons(moves)
            )?;
            return Ok(true);
        }
        let m = solver.best_move(&position)?;
        let (w, w2) = m.values(&position)?;
        let choice = loop {
            let line = match session.prompt(&format!("position {position}, selector picks ({w},{w2}): plus or minus? "))? {
                Input::Quit => return quit(),
                Input::Line(line) => line,
            };
            match parse_choice(&line) {
                Some(choice) => break choice,
                None => writeln!(session.out, "answer plus or minus")?,
            }
        };
        position = position.apply(m, choice)?;
        moves += 1;
    }
}
