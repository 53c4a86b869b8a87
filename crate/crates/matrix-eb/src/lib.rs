//! Sharp empirical Bernstein confidence sets for the spectral mean of
//! bounded symmetric random matrices.
//!
//! Given observations X₁,…,Xₙ with eigenvalues in [0,1] and common
//! (conditional) mean M, the library computes closed-form one-sided radii r
//! such that `λ_max(estimate − M) < r` with probability at least 1 − α:
//!
//! * [`bounds::meb1_radius`] — plug-in empirical Bernstein bound driven by
//!   the paired sample variance; independent observations.
//! * [`bounds::meb1c_radius`] — the same idea on the classical
//!   Bessel-corrected sample variance.
//! * [`seqeb::meb2_fixed_n`] — self-normalized bound from a trace-exponential
//!   supermartingale; allows martingale dependence, powers anytime-valid
//!   confidence sequences and a sequential mean test.
//! * Oracle comparators in [`bounds`]: matrix Bennett-Bernstein, a
//!   dimension-free variant, matrix Hoeffding, and the scalar
//!   Maurer-Pontil pair.
//!
//! Both empirical bounds are sharp: their √n-scaled radii converge to
//! `√(2·log(d/α)·‖V‖)`, the oracle limit, without ever seeing ‖V‖.
//!
//! The [`sim`] module houses seeded generators and the Monte Carlo harness
//! that compares every method against the oracle; [`cli`] wires the four
//! subcommands (`radius`, `monitor`, `simulate`, `generate`).
//!
//! Start with the runnable examples:
//!
//! ```text
//! cargo run --release --example bounds_comparison
//! cargo run --release --example sequential_test
//! cargo run --release --example confidence_sequence
//! cargo run --release --example covariance_estimation
//! cargo run --release --example relative_widths
//! cargo run --release --example scalar_intervals
//! cargo run --release --example coverage_check
//! ```

pub mod bounds;
pub mod cli;
pub mod estimators;
pub mod io;
pub mod seqeb;
pub mod sim;
pub mod symmat;

pub use bounds::{BoundRequest, BoundResult, Method};
pub use estimators::{MatrixSample, RunningProxy};
pub use seqeb::{GammaSchedule, Meb2Result, Predictor, SeqDecision, SeqEbState};
pub use sim::{Generator, GeneratorKind, SimConfig, SimReport, TableKind};
pub use symmat::{SpectralDecomp, SymMat};
