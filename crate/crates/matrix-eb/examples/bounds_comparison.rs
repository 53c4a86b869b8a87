//! Computes every implemented deviation radius for one simulated sample of
//! bounded random matrices and compares them against the oracle bound that
//! knows the true variance.
//!
//! Run with: cargo run --release --example bounds_comparison

use matrix_eb::bounds::{self, BoundRequest};
use matrix_eb::estimators;
use matrix_eb::seqeb;
use matrix_eb::sim::{Generator, GeneratorKind, PROJECTION_VARIANCE_NORM};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 0.05;
    let n = 1_000;
    let generator = Generator::new(GeneratorKind::ProjectionMixture, 42);
    let sample = generator.sample(n, 0)?;
    let d = sample.dim();

    println!("sample: n={n}, d={d}, eigenvalues in [0,1], alpha={alpha}");
    println!("true mean I/2, true variance norm {PROJECTION_VARIANCE_NORM:.6}\n");

    // Oracle bounds get the true variance; empirical bounds read the sample.
    let oracle_req = BoundRequest::new(n, d, alpha)?
        .with_variance_norm(PROJECTION_VARIANCE_NORM)?
        .with_trace_v(3.0 * PROJECTION_VARIANCE_NORM)?;
    let tb = bounds::matrix_bennett_bernstein(&oracle_req)?;
    let mb = bounds::minsker_radius(&oracle_req)?;
    let hoeffding = bounds::matrix_hoeffding_radius(n, d, alpha, 0.25)?;
    let meb1 = bounds::meb1_radius(&sample, alpha)?;
    let meb1c = bounds::meb1c_radius(&sample, alpha)?;
    let meb2 = seqeb::meb2_fixed_n(&sample, alpha)?;

    println!(
        "{:<34} {:>10} {:>12}",
        "method", "radius", "vs oracle"
    );
    let print_row = |label: &str, radius: f64| {
        println!("{label:<34} {radius:>10.6} {:>11.3}x", radius / tb.radius);
    };
    print_row("oracle Bennett-Bernstein (tb)", tb.radius);
    print_row("dimension-free oracle (mb)", mb.radius);
    print_row("matrix Hoeffding, (X-M)^2 <= I/4", hoeffding.radius);
    print_row("empirical: paired variance (meb1)", meb1.radius);
    print_row("empirical: classical var (meb1c)", meb1c.radius);
    print_row("empirical: self-normalized (meb2)", meb2.radius);

    // The empirical bounds actually cover the truth on this draw.
    let mean = estimators::sample_mean(&sample);
    let deviation = mean.sub(&generator.true_mean()).lambda_max()?;
    println!("\nobserved lambda_max(mean - M) = {deviation:.6}");
    println!(
        "weighted-mean deviation        = {:.6} (radius {:.6})",
        meb2.weighted_mean.sub(&generator.true_mean()).lambda_max()?,
        meb2.radius
    );
    println!(
        "variance proxy v_n = {:.6} (true variance norm {:.6})",
        meb2.variance_proxy, PROJECTION_VARIANCE_NORM
    );
    Ok(())
}
