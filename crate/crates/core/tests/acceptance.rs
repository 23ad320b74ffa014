//! Acceptance criteria T1..T9. Prints one PASS/FAIL line per criterion followed by the
//! computed values, and exits nonzero if any criterion fails.

use std::process::ExitCode;

use thinseq_core::suites::{run_suite, Corpus, SuiteId, SuiteReport};
use thinseq_core::{Exec, Generator};

fn print(report: &SuiteReport, prefix: &str) {
    let status = if report.passed() { "PASS" } else { "FAIL" };
    println!("{prefix}{} {status} {}", report.id, report.title);
    if let Some(e) = &report.error {
        println!("{prefix}    error: {e}");
    }
    for c in &report.checks {
        println!("{prefix}    [{}] {c}", if c.pass { "ok" } else { "x" });
    }
}

fn main() -> ExitCode {
    let reference = Corpus::reference(0).expect("reference corpus");
    let superexp = Corpus::with_thin(Generator::RadialSuperexp { q: 0.5 }, 0).expect("superexp corpus");
    let mut failed = Vec::new();
    for id in SuiteId::ALL {
        let report = run_suite(id, &reference, Exec::Parallel);
        print(&report, "");
        if !report.passed() {
            failed.push(id);
        }
        if matches!(id, SuiteId::T1 | SuiteId::T2 | SuiteId::T3) {
            // Same thresholds on radial-superexp(0.5); informational only.
            print(&run_suite(id, &superexp, Exec::Parallel), "  supplementary radial-superexp(0.5): ");
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
