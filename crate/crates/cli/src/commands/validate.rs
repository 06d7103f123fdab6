use anyhow::{anyhow, Result};
use clap::Args;
use twotasep_core::validation::{run_suite, Suite};

use super::Status;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Suite name, or `all`
    suite: String,
}

pub fn run(args: &ValidateArgs) -> Result<Status> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![Suite::parse(&args.suite).ok_or_else(|| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            anyhow!("unknown suite '{}'; expected all or one of {}", args.suite, names.join(", "))
        })?]
    };
    let mut ok = true;
    for suite in suites {
        let report = run_suite(suite);
        let status = if report.passed() { "PASS" } else { "FAIL" };
        let budget = report.budget_secs.map_or(String::new(), |b| format!(" (budget {b:.0} s)"));
        println!("[{status}] {:<12} {} -- {:.2} s{budget}", suite.name(), suite.description(), report.elapsed_secs);
        for c in &report.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            println!("    {mark} {}: {:.3e} (limit {:.3e})", c.name, c.value, c.tolerance);
        }
        if let Some(e) = &report.error {
            println!("    error: {e}");
        }
        ok &= report.passed();
    }
    Ok(if ok { Status::Success } else { Status::ChecksFailed })
}
