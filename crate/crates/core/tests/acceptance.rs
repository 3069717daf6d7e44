//! The ten acceptance criteria, one PASS/FAIL line each. Exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::thread;

use hurwitz::cli::suites::{self, SuiteError, SuiteReport};
use hurwitz::HurwitzType;

type Check = (&'static str, fn() -> Result<SuiteReport, SuiteError>);

const CRITERIA: [Check; 10] = [
    ("1 three-way equality, d <= 5, b <= 4", || suites::equality(5, 4)),
    ("2 degree bound 4g-3+m+n, pure and mixed", || {
        suites::degree(&[(0, 1, 2), (0, 1, 3), (0, 2, 2), (1, 1, 1), (1, 1, 2), (1, 2, 1)], 8)
    }),
    ("3 monotone constant term closed form", || suites::constant_term(&[0, 1, 2], &[(1, 1), (1, 2), (2, 1)])),
    ("4 Bernoulli coefficient identity", || Ok(suites::bernoulli_identity(&[1, 2, 3]))),
    ("5 one-part numbers 1/d, d <= 6", || suites::one_part(6)),
    ("6 wall-crossing, monotone and strict, g = 0, 1", || {
        suites::wallcross(&suites::wallcross_pure_splits(&[0, 1]), 5)
    }),
    ("7 wall-crossing, mixed (1,1,0)", || suites::wallcross(&[(1, 1, 0)], 5)),
    ("8 tau coefficients, n <= 4, exponents <= 3", || suites::tau(4, 3)),
    ("9 monotone and strict conventions agree, d <= 5", || {
        suites::conventions(5, 4, &[HurwitzType::Monotone, HurwitzType::Strict])
    }),
    ("10 connected counts", || suites::connected(5, 4)),
];

fn main() -> ExitCode {
    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = CRITERIA.iter().map(|(_, run)| s.spawn(run)).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut all = true;
    for ((name, _), result) in CRITERIA.iter().zip(results) {
        match result {
            Ok(report) => {
                let failed: Vec<_> = report.failures().collect();
                println!(
                    "{} criterion {name}: {} instances, {} mismatches",
                    if report.passed { "PASS" } else { "FAIL" },
                    report.count,
                    failed.len()
                );
                for inst in failed.iter().take(12) {
                    println!("    {}: expected {}, got {}", inst.label, inst.expected, inst.actual);
                }
                all &= report.passed;
            }
            Err(e) => {
                println!("FAIL criterion {name}: {e}");
                all = false;
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
