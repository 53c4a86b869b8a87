//! Quick empirical coverage validation: every bound's one-sided miscoverage
//! frequency stays below alpha (plus Monte Carlo slack) on its valid
//! generator class, including the self-normalized bound under martingale
//! dependence.
//!
//! Run with: cargo run --release --example coverage_check
//! (Pass a replication count as the first argument; default 500.)

use matrix_eb::sim::{self, SimConfig, TableKind, COVERAGE_N};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reps: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(500);
    let config = SimConfig::new(TableKind::Coverage, reps, 1, 100_000);
    let report = sim::run_table(&config)?;

    let slack = 3.0 * (0.05f64 * 0.95 / reps as f64).sqrt();
    println!(
        "one-sided empirical miscoverage at n = {COVERAGE_N}, alpha = 0.05, {reps} replications"
    );
    println!("tolerance: alpha + 3*MC sigma = {:.4}\n", 0.05 + slack);
    println!("{:<18} {:>12} {:>8}", "method", "miscoverage", "ok?");
    for row in &report.rows {
        let miscoverage = 1.0 - row.coverage.unwrap();
        println!(
            "{:<18} {:>12.4} {:>8}",
            row.method,
            miscoverage,
            miscoverage <= 0.05 + slack
        );
    }
    Ok(())
}
