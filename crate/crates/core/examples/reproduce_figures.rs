//! Run every figure scenario with its defaults and print the embedded checks.
//!
//! ```text
//! cargo run --release --example reproduce_figures -- out
//! ```

use std::path::PathBuf;

use rotsense::experiments::{run, ExperimentConfig, Scenario};

fn main() -> rotsense::Result<()> {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out".into()));
    let mut failed = 0;
    for scenario in [
        Scenario::Sagnac,
        Scenario::Fig5,
        Scenario::Fig4,
        Scenario::Fig3,
        Scenario::Fig2a,
        Scenario::Fig2b,
    ] {
        let mut cfg = ExperimentConfig::defaults(scenario);
        cfg.output_dir = root.join(scenario.name());
        let report = run(&cfg, 0)?;
        for c in &report.checks {
            println!(
                "{scenario:<6} {} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        failed += report.failed_checks().count();
    }
    println!("{failed} failed checks");
    Ok(())
}
