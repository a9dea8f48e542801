//! Acceptance criteria for the toolkit. Each criterion prints one line; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use majority_core::rules::GameParams;
use majority_core::solver::{k_formula, solve_game, verify_lemma_last, verify_nonprediction, verify_sw_dominates};
use majority_core::statistics::binary_weight;
use majority_core::verify::{
    adversary_bound, ballgame_commute, closed_form_vs_recursion, conserved, final_bounds,
    final_certificates, leibniz, start_formula, theorem, Report,
};

const SEED: u64 = 0x6d616a;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: Vec<Report>) -> Outcome {
    let cases: u64 = reports.iter().map(|r| r.cases).sum();
    let failed: u64 = reports.iter().map(|r| r.failed).sum();
    let mut detail = format!("{cases} cases, {failed} failed");
    if let Some(first) = reports.iter().flat_map(|r| &r.failures).next() {
        detail.push_str(&format!("; first failure: {first}"));
    }
    Outcome { passed: failed == 0 && cases > 0, detail }
}

fn solver_k(n: i64, k: i64) -> u32 {
    solve_game(&GameParams::new(n, k).unwrap()).unwrap().0
}

fn main_theorem() -> Outcome {
    let mut reports = vec![theorem(12).unwrap()];
    let mut spot = Report::new("spot rows");
    for (n, k, want) in [(5, 3, 3), (7, 4, 4), (13, 7, 10)] {
        let got = solver_k(n, k);
        spot.check(got == want, || format!("K({n},{k}) = {got}, expected {want}"));
        let formula = k_formula(&GameParams::new(n, k).unwrap());
        spot.check(formula == want, || format!("formula K({n},{k}) = {formula}"));
    }
    reports.push(spot);
    from_reports(reports)
}

fn odd_majority_case() -> Outcome {
    let mut report = Report::new("K(2m+1, m+1)");
    for m in 0..=5u32 {
        let got = solver_k(2 * m as i64 + 1, m as i64 + 1);
        let want = 2 * m - binary_weight(m as u64);
        report.check(got == want, || format!("m={m}: K={got}, expected {want}"));
    }
    from_reports(vec![report])
}

fn conservation() -> Outcome {
    let delta = conserved(SEED, 1000, 1);
    let star = conserved(SEED ^ 1, 1000, 4);
    let mut outcome = from_reports(vec![delta.clone(), star.clone()]);
    let oracle_checks = |r: &Report| {
        r.witnesses
            .iter()
            .find(|w| w.name == "oracle_cross_checks")
            .map_or(0, |w| w.value.parse::<u64>().unwrap())
    };
    let (a, b) = (oracle_checks(&delta), oracle_checks(&star));
    outcome.passed &= a > 0 && b > 0;
    outcome.detail.push_str(&format!("; oracle cross-checks {a} + {b}"));
    outcome
}

fn starting_positions() -> Outcome {
    from_reports(vec![start_formula(24, 10_000).unwrap()])
}

fn closed_form() -> Outcome {
    from_reports(vec![closed_form_vs_recursion(14, 2, 6).unwrap()])
}

fn hyperderivative() -> Outcome {
    from_reports(vec![leibniz(SEED, 500, 5)])
}

fn certificate() -> Outcome {
    from_reports(vec![final_certificates(16, 2).unwrap(), final_bounds(16, 2).unwrap()])
}

fn potential_dominates() -> Outcome {
    let reports = GameParams::all_up_to(10)
        .map(|p| verify_sw_dominates(&p).unwrap())
        .collect();
    from_reports(reports)
}

fn lemma_last() -> Outcome {
    from_reports(vec![verify_lemma_last(32).unwrap()])
}

fn nonprediction() -> Outcome {
    from_reports(vec![verify_nonprediction(3).unwrap(), verify_nonprediction(7).unwrap()])
}

fn reformulation() -> Outcome {
    from_reports(vec![ballgame_commute(SEED, 10_000, 10, 7, 6).unwrap()])
}

fn adversarial_bound() -> Outcome {
    from_reports(vec![adversary_bound(9, 7).unwrap()])
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 main theorem K(n,k) = 2(n-k) - B(n-k), n <= 12", main_theorem),
        ("2 K(2m+1, m+1) = 2m - B(m), m <= 5", odd_majority_case),
        ("3 conservation and star identities", conservation),
        ("4 starting-position formula and P(C(2t,t)) = B(t)", starting_positions),
        ("5 closed form equals recursion, sum <= 14, b <= 6", closed_form),
        ("6 Leibniz rule for hyperderivatives", hyperderivative),
        ("7 final-position certificate and SW_e >= c", certificate),
        ("8 SW_e(M) >= V(M) on reachable positions, n <= 10", potential_dominates),
        ("9 closed form for SW_1({2,1^(2m-1)}), m <= 32", lemma_last),
        ("10 both Assigner replies optimal, m = 3 and 7", nonprediction),
        ("11 ball game commutes with weight game", reformulation),
        ("12 adversarial bound at ball level", adversarial_bound),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        all &= outcome.passed;
        println!(
            "[{}] criterion {name} ({}; {:.1}s)",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
