//! Prints one PASS/FAIL line per acceptance criterion and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::criteria::*;
use common::PROPERTY_CASES;

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("corpus replay", corpus_replay),
        ("countermodels", countermodels),
        ("internalization", || internalization(40)),
        ("projection", projection),
        ("deduction round trip", deduction_round_trip),
        ("oracle equivalence", || oracles(200)),
        ("invariant suites", || invariants(PROPERTY_CASES)),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(summary) => println!("criterion {} {name}: PASS ({summary}; {ms} ms)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
