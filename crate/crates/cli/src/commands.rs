use std::io::Write;
use std::str::FromStr;

use majority_core::solver::{k_formula, MoveAnalysis};
use majority_core::statistics::{alpha_counts, delta_b, sw_b};
use majority_core::verify::{run_suite, Report, Suite, SuiteOptions};
use majority_core::{AssignerChoice, GameParams, Position, Valuation};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{write_csv, write_json, Format};
use crate::SolverConfig;

fn check_guard(what: &str, value: u32, guard: u32) -> Result<(), CliError> {
    if value > guard {
        return Err(CliError::Usage(format!(
            "{what} = {value} exceeds the solver guard {guard} (raise it with --guard)"
        )));
    }
    Ok(())
}

fn pair_text((w, w2): (u32, u32)) -> String {
    format!("({w},{w2})")
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Serialize)]
struct TableParams {
    max_n: u32,
}

#[derive(Debug, Serialize)]
struct TableRow {
    n: u32,
    k: u32,
    k_solver: u32,
    k_formula: u32,
    #[serde(rename = "match")]
    matches: bool,
}

pub fn table(
    out: &mut dyn Write,
    format: Format,
    config: SolverConfig,
    max_n: u32,
    guard: u32,
) -> Result<bool, CliError> {
    if max_n < 1 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    check_guard("max-n", max_n, guard)?;
    let mut rows = Vec::new();
    for params in GameParams::all_up_to(max_n) {
        let solver = config.solver(params.e());
        let value = solver.value(&Position::start(&params))?;
        let k_solver = params.n() - value;
        let k_formula = k_formula(&params);
        rows.push(TableRow {
            n: params.n(),
            k: params.k(),
            k_solver,
            k_formula,
            matches: k_solver == k_formula,
        });
    }
    let failures: Vec<String> = rows
        .iter()
        .filter(|r| !r.matches)
        .map(|r| format!("n={} k={}: solver {} formula {}", r.n, r.k, r.k_solver, r.k_formula))
        .collect();
    let ok = failures.is_empty();
    match format {
        Format::Text => {
            writeln!(out, "{:>4} {:>4} {:>9} {:>10} {:>6}", "n", "k", "K_solver", "K_formula", "match")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>4} {:>4} {:>9} {:>10} {:>6}",
                    r.n, r.k, r.k_solver, r.k_formula, r.matches
                )?;
            }
        }
        Format::Json => write_json(out, "table", TableParams { max_n }, rows, failures)?,
        Format::Csv => write_csv(out, &rows)?,
    }
    Ok(ok)
}

#[derive(Debug, Serialize)]
struct ValueParams {
    n: Option<i64>,
    k: Option<i64>,
    position: Position,
    e: u32,
}

#[derive(Debug, Serialize)]
struct ValueResult {
    position: Position,
    e: u32,
    value: u32,
    comparisons: u32,
    #[serde(rename = "final")]
    is_final: bool,
    optimal_moves: Vec<(u32, u32)>,
    moves: Vec<MoveAnalysis>,
}

#[derive(Debug, Serialize)]
struct ValueRow {
    position: String,
    e: u32,
    value: u32,
    comparisons: u32,
    #[serde(rename = "final")]
    is_final: bool,
    optimal_moves: String,
}

#[allow(clippy::too_many_arguments)]
pub fn value(
    out: &mut dyn Write,
    format: Format,
    config: SolverConfig,
    n: Option<i64>,
    k: Option<i64>,
    position: Option<Position>,
    e: Option<u32>,
    guard: u32,
) -> Result<bool, CliError> {
    let params = match (n, k) {
        (Some(n), Some(k)) => Some(GameParams::new(n, k)?),
        (None, None) => None,
        _ => return Err(CliError::Usage("--n and --k must be given together".into())),
    };
    let e = match (e, params) {
        (Some(e), Some(p)) if e != p.e() => {
            return Err(CliError::Usage(format!("--e {e} contradicts {p}")));
        }
        (Some(e), _) => e,
        (None, Some(p)) => p.e(),
        (None, None) => return Err(CliError::Usage("give --n and --k, or --position and --e".into())),
    };
    let position = match (position, params) {
        (Some(pos), _) => pos,
        (None, Some(p)) => Position::start(&p),
        (None, None) => unreachable!("e without params requires a position"),
    };
    position.s_of(e)?;
    check_guard("position size", position.len() as u32, guard)?;

    let solver = config.solver(e);
    let result = solver.solve(&position)?;
    let res = ValueResult {
        e,
        value: result.value,
        comparisons: position.len() as u32 - result.value,
        is_final: position.is_final(e)?,
        optimal_moves: result.optimal_selector_moves,
        moves: result.moves,
        position: position.clone(),
    };
    match format {
        Format::Text => {
            writeln!(out, "position {}  e={}", res.position, res.e)?;
            writeln!(out, "value {}", res.value)?;
            writeln!(out, "comparisons {}", res.comparisons)?;
            writeln!(out, "final {}", res.is_final)?;
            if !res.moves.is_empty() {
                writeln!(out, "optimal moves {}", join(res.optimal_moves.iter().copied().map(pair_text), " "))?;
                writeln!(out, "moves:")?;
                for m in &res.moves {
                    writeln!(
                        out,
                        "  {:<8} plus {:>3}  minus {:>3}  value {:>3}{}  assigner {}",
                        pair_text(m.pair),
                        m.plus,
                        m.minus,
                        m.value,
                        if m.selector_optimal { "  optimal" } else { "" },
                        join(&m.assigner_choices, ",")
                    )?;
                }
            }
        }
        Format::Json => {
            let params = ValueParams {
                n,
                k,
                position: res.position.clone(),
                e,
            };
            write_json(out, "value", params, vec![res], Vec::new())?
        }
        Format::Csv => {
            let row = ValueRow {
                position: res.position.to_string(),
                e: res.e,
                value: res.value,
                comparisons: res.comparisons,
                is_final: res.is_final,
                optimal_moves: join(res.optimal_moves.iter().copied().map(pair_text), " "),
            };
            write_csv(out, &[row])?
        }
    }
    Ok(true)
}

#[derive(Debug, Serialize)]
struct StatsParams {
    position: Position,
    e: u32,
    b: Option<u32>,
}

/// Exact integers are decimal strings in JSON so no precision is lost.
#[derive(Debug, Serialize)]
struct OrderStats {
    b: u32,
    delta: String,
    sw_b: Option<u64>,
    sw_b_infinite: bool,
}

#[derive(Debug, Serialize)]
struct StatsResult {
    position: Position,
    e: u32,
    s: u64,
    alpha: Vec<String>,
    orders: Vec<OrderStats>,
    sw: Option<u64>,
    sw_infinite: bool,
}

#[derive(Debug, Serialize)]
struct StatsRow {
    position: String,
    e: u32,
    b: u32,
    delta: String,
    sw_b: String,
}

pub fn stats(
    out: &mut dyn Write,
    format: Format,
    position: &Position,
    e: u32,
    b: Option<u32>,
) -> Result<bool, CliError> {
    let s = position.s_of(e)?;
    let orders: Vec<u32> = match b {
        Some(0) => return Err(CliError::Usage("--b must be at least 1".into())),
        Some(b) => vec![b],
        None if e == 0 => return Err(CliError::Usage("e = 0 has no potential; pass --b".into())),
        None => (1..=e).collect(),
    };
    let alpha = alpha_counts(position);
    let mut order_stats = Vec::new();
    let mut valuations = Vec::new();
    for &b in &orders {
        let delta = delta_b(position, e, b)?;
        let v = sw_b(position, e, b)?;
        valuations.push(v);
        order_stats.push(OrderStats {
            b,
            delta: delta.to_string(),
            sw_b: v.finite(),
            sw_b_infinite: v.is_infinite(),
        });
    }
    let sw: Option<Valuation> = if e >= 1 {
        Some(majority_core::statistics::sw(position, e)?)
    } else {
        None
    };
    match format {
        Format::Text => {
            writeln!(out, "position {}  e={}  s={}", position, e, s)?;
            writeln!(out, "alpha {}", join(alpha.coefficients(), " "))?;
            for (o, v) in order_stats.iter().zip(&valuations) {
                writeln!(out, "b={}  delta {}  SW^(b) {}", o.b, o.delta, v)?;
            }
            if let Some(sw) = sw {
                writeln!(out, "SW {sw}")?;
            }
        }
        Format::Json => {
            let res = StatsResult {
                position: position.clone(),
                e,
                s,
                alpha: alpha.coefficients().iter().map(|a| a.to_string()).collect(),
                orders: order_stats,
                sw: sw.and_then(|v| v.finite()),
                sw_infinite: sw.is_some_and(|v| v.is_infinite()),
            };
            let params = StatsParams {
                position: position.clone(),
                e,
                b,
            };
            write_json(out, "stats", params, vec![res], Vec::new())?
        }
        Format::Csv => {
            let rows: Vec<StatsRow> = order_stats
                .into_iter()
                .zip(&valuations)
                .map(|(o, v)| StatsRow {
                    position: position.to_string(),
                    e,
                    b: o.b,
                    delta: o.delta,
                    sw_b: v.to_string(),
                })
                .collect();
            write_csv(out, &rows)?
        }
    }
    Ok(true)
}

#[derive(Debug, Serialize)]
struct VerifyParams<'a> {
    suite: &'a str,
    #[serde(flatten)]
    options: &'a SuiteOptions,
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    suite: String,
    passed: bool,
    cases: u64,
    failed: u64,
}

pub fn verify(out: &mut dyn Write, format: Format, suite: &str, opts: &SuiteOptions) -> Result<bool, CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::from_str(suite).map_err(|err| {
            CliError::Usage(format!("{err}; expected one of: all, {}", join(Suite::ALL.iter().map(|s| s.name()), ", ")))
        })?]
    };
    let mut reports: Vec<Report> = Vec::new();
    for s in suites {
        reports.push(run_suite(s, opts)?);
    }
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .flat_map(|r| {
            let head = format!("{}: {} of {} cases failed", r.suite, r.failed, r.cases);
            std::iter::once(head).chain(r.failures.iter().map(move |f| format!("{}: {f}", r.suite)))
        })
        .collect();
    let ok = failures.is_empty();
    match format {
        Format::Text => {
            for r in &reports {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "[{tag}] {}: {} cases, {} failed", r.suite, r.cases, r.failed)?;
                for w in &r.witnesses {
                    writeln!(out, "    {} = {}", w.name, w.value)?;
                }
                for f in &r.failures {
                    writeln!(out, "    failure: {f}")?;
                }
            }
        }
        Format::Json => {
            let params = VerifyParams { suite, options: opts };
            write_json(out, "verify", params, reports, failures)?
        }
        Format::Csv => {
            let rows: Vec<VerifyRow> = reports
                .iter()
                .map(|r| VerifyRow {
                    suite: r.suite.clone(),
                    passed: r.passed(),
                    cases: r.cases,
                    failed: r.failed,
                })
                .collect();
            write_csv(out, &rows)?
        }
    }
    Ok(ok)
}

#[derive(Debug, Serialize)]
struct TraceStep {
    step: usize,
    position: Position,
    sw: Valuation,
    pair: (u32, u32),
    choice: AssignerChoice,
    successor: Position,
    successor_sw: Valuation,
}

#[derive(Debug, Serialize)]
struct TraceResult {
    comparisons: usize,
    k_formula: u32,
    steps: Vec<TraceStep>,
    final_position: Position,
    final_size: usize,
}

#[derive(Debug, Serialize)]
struct TraceRow {
    step: usize,
    position: String,
    sw: String,
    pair: String,
    choice: AssignerChoice,
    successor: String,
    successor_sw: String,
}

pub fn trace(
    out: &mut dyn Write,
    format: Format,
    config: SolverConfig,
    n: i64,
    k: i64,
    guard: u32,
) -> Result<bool, CliError> {
    let params = GameParams::new(n, k)?;
    check_guard("n", params.n(), guard)?;
    let e = params.e();
    let solver = config.solver(e);
    let start = Position::start(&params);
    let pv = solver.principal_variation(&start)?;
    let mut steps = Vec::with_capacity(pv.len());
    let mut current = start;
    for (idx, step) in pv.into_iter().enumerate() {
        let m = step
            .position
            .move_for_values(step.pair.0, step.pair.1)
            .expect("principal variation moves are legal");
        let successor = step.position.apply(m, step.choice)?;
        steps.push(TraceStep {
            step: idx + 1,
            sw: majority_core::statistics::sw(&step.position, e)?,
            successor_sw: majority_core::statistics::sw(&successor, e)?,
            position: step.position,
            pair: step.pair,
            choice: step.choice,
            successor: successor.clone(),
        });
        current = successor;
    }
    let res = TraceResult {
        k_formula: k_formula(&params),
        comparisons: steps.len(),
        final_size: current.len(),
        final_position: current,
        steps,
    };
    match format {
        Format::Text => {
            writeln!(out, "{params}  comparisons={}  formula={}", res.comparisons, res.k_formula)?;
            for s in &res.steps {
                writeln!(
                    out,
                    "{:>3}. {}  SW={}  selector {}  assigner {:<5}  -> {}  SW={}",
                    s.step,
                    s.position,
                    s.sw,
                    pair_text(s.pair),
                    s.choice,
                    s.successor,
                    s.successor_sw
                )?;
            }
            writeln!(
                out,
                "final {}  size {}  comparisons {}",
                res.final_position, res.final_size, res.comparisons
            )?;
        }
        Format::Json => write_json(out, "trace", params, vec![res], Vec::new())?,
        Format::Csv => {
            let rows: Vec<TraceRow> = res
                .steps
                .iter()
                .map(|s| TraceRow {
                    step: s.step,
                    position: s.position.to_string(),
                    sw: s.sw.to_string(),
                    pair: pair_text(s.pair),
                    choice: s.choice,
                    successor: s.successor.to_string(),
                    successor_sw: s.successor_sw.to_string(),
                })
                .collect();
            write_csv(out, &rows)?
        }
    }
    Ok(true)
}
