//! Scalar confidence intervals for a bounded mean: the Maurer-Pontil
//! empirical Bernstein interval, its sharpened union-bound variant, and the
//! self-normalized interval, all against the oracle interval that knows the
//! variance.
//!
//! Run with: cargo run --release --example scalar_intervals

use matrix_eb::bounds;
use matrix_eb::estimators::{self, MatrixSample};
use matrix_eb::seqeb;
use matrix_eb::symmat::SymMat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 0.05;
    let n = 1_000;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let xs: Vec<f64> = (0..n).map(|_| rng.random()).collect();

    let mean = xs.iter().sum::<f64>() / n as f64;
    let items: Vec<SymMat> = xs.iter().map(|&x| SymMat::from_diag(&[x])).collect();
    let sample = MatrixSample::unit_interval(items)?;
    let sigma_hat2 = estimators::bessel_variance(&sample)?.matrix.get(0, 0);

    let oracle = bounds::scalar_bennett_bernstein(n, alpha, 1.0, 1.0 / 12.0)?;
    let mp = bounds::maurer_pontil_radius(n, alpha, sigma_hat2)?;
    let sharp = bounds::sharp_mp_radius(n, alpha, sigma_hat2)?;
    let selfnorm = seqeb::meb2_fixed_n(&sample, alpha)?;

    println!("Unif[0,1] sample: n = {n}, mean = {mean:.4}, sigma_hat^2 = {sigma_hat2:.4}\n");
    println!("{:<28} {:>10} {:>12}", "method", "radius", "vs oracle");
    for (label, radius) in [
        ("oracle Bennett-Bernstein", oracle.radius),
        ("Maurer-Pontil", mp.radius),
        ("sharp Maurer-Pontil", sharp.radius),
        ("self-normalized", selfnorm.radius),
    ] {
        println!("{label:<28} {radius:>10.6} {:>11.3}x", radius / oracle.radius);
    }

    // Two-sided convenience: one-sided radius at alpha/2 covers both tails.
    let two_sided = bounds::two_sided(alpha, |a| bounds::sharp_mp_radius(n, a, sigma_hat2))?;
    println!(
        "\ntwo-sided 95% sharp-MP interval: [{:.4}, {:.4}]",
        mean - two_sided.radius,
        mean + two_sided.radius
    );
    Ok(())
}
