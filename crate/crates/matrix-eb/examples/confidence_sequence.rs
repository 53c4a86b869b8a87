//! Anytime-valid confidence sequence: the time-uniform radius around the
//! weighted mean shrinks as observations stream in, stays valid at every
//! step simultaneously, and can be tightened at a stopping time with an
//! independent uniform draw (randomized Ville refinement).
//!
//! Run with: cargo run --release --example confidence_sequence

use matrix_eb::seqeb::{GammaSchedule, Predictor, SeqEbState};
use matrix_eb::sim::{Generator, GeneratorKind};
use matrix_eb::symmat::SymMat;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 2_000;
    let alpha = 0.05;
    let generator = Generator::new(GeneratorKind::ProjectionMixture, 3);
    let sample = generator.sample(n, 0)?;
    let truth = generator.true_mean();

    let mut state = SeqEbState::new(
        3,
        alpha,
        GammaSchedule::FixedNAdaptive { n },
        Predictor::RunningMean,
    )?;
    let zero = SymMat::zeros(3);

    println!("confidence sequence for the common mean (alpha = {alpha}):\n");
    println!(
        "{:>6} {:>12} {:>16} {:>10}",
        "step", "radius", "true deviation", "covers?"
    );
    let checkpoints = [10usize, 50, 100, 500, 1_000, 2_000];
    for (i, x) in sample.items().iter().enumerate() {
        let (next, _) = state.update(x, &zero)?;
        state = next;
        if checkpoints.contains(&(i + 1)) {
            let radius = state.time_uniform_radius(None)?;
            let deviation = state.weighted_mean()?.sub(&truth).lambda_max()?;
            println!(
                "{:>6} {:>12.6} {:>16.6} {:>10}",
                i + 1,
                radius,
                deviation,
                deviation < radius
            );
        }
    }

    // At a stopping time, an independent U ~ Unif(0,1) shrinks the
    // threshold from log(d/alpha) to log(U d/alpha).
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let u: f64 = rng.random();
    let plain = state.time_uniform_radius(None)?;
    let randomized = state.time_uniform_radius(Some(u))?;
    println!("\nat the stop (n = {n}):");
    println!("  plain Ville radius       = {plain:.6}");
    println!("  randomized (U = {u:.3})    = {randomized:.6}");
    Ok(())
}
