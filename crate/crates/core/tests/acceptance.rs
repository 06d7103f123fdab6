//! One line per acceptance criterion, each followed by its individual checks.
//! Runs without the test harness so the table is always printed; the exit
//! status is non-zero if any criterion fails.

use std::process::ExitCode;

use twotasep_core::validation::{run_suite, Suite};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (k, suite) in Suite::ALL.into_iter().enumerate() {
        let report = run_suite(suite);
        let status = if report.passed() { "PASS" } else { "FAIL" };
        let budget = report.budget_secs.map_or(String::new(), |b| format!(" (budget {b:.0} s)"));
        println!(
            "[{status}] {:>2}. {:<12} {} -- {:.2} s{budget}",
            k + 1,
            suite.name(),
            suite.description(),
            report.elapsed_secs
        );
        for c in &report.checks {
            println!(
                "         {} {}: {:.3e} (limit {:.3e})",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance
            );
        }
        if let Some(e) = &report.error {
            println!("         error: {e}");
        }
        if !report.passed() {
            failed.push(suite.name());
        }
    }
    let passed = Suite::ALL.len() - failed.len();
    println!("acceptance: {passed}/{} criteria passed", Suite::ALL.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
