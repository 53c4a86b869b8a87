//! Relative widths of the empirical matrix bounds against the oracle across
//! sample sizes: the replication-mean of D/D_oracle approaches 1 as n grows,
//! with the self-normalized bound converging much faster.
//!
//! Run with: cargo run --release --example relative_widths
//! (Pass a replication count as the first argument; default 20.)

use matrix_eb::sim::{self, SimConfig, TableKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reps: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(20);
    let config = SimConfig::new(TableKind::MatrixRatiosClassical, reps, 1, 10_000);
    let report = sim::run_table(&config)?;

    println!(
        "relative one-sided 95% widths vs the oracle ({} replications):\n",
        reps
    );
    println!(
        "{:>8} {:>12} {:>12} {:>12}",
        "n", "meb1/tb", "meb1c/tb", "meb2/tb"
    );
    for &n in &[100usize, 1_000, 10_000] {
        let get = |m: &str| report.cell(n, m).and_then(|r| r.ratio_mean).unwrap();
        println!(
            "{:>8} {:>12.3} {:>12.3} {:>12.3}",
            n,
            get("meb1"),
            get("meb1c"),
            get("meb2")
        );
    }
    println!("\n(runtime {:.2}s; rerun with more replications for tighter cells)", report.runtime_secs);
    Ok(())
}
