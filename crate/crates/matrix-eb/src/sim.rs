//! Seeded data generators and the Monte Carlo comparison harness.
//!
//! Replications are driven by a counter-based generator (ChaCha8): every
//! replication r of an experiment block b draws from the stream
//! `(b << 32) | r` of the master seed, so replications are independent,
//! order-free, and safe to run in parallel. Identical configurations produce
//! bit-identical reports; aggregation always reduces in replication order.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundRequest};
use crate::estimators::{self, EstimatorError, MatrixSample};
use crate::seqeb::{self, SeqEbError};
use crate::symmat::{SymMat, SymMatError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("bad simulation config: {0}")]
    Config(String),
    #[error(transparent)]
    Matrix(#[from] SymMatError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Bound(#[from] bounds::BoundError),
    #[error(transparent)]
    SeqEb(#[from] SeqEbError),
}

/// ‖V‖ of the projection-mixture generator: per projection the eigenvalue is
/// Unif[0,1], so the variance matrix is Var(U)·I = I/12.
pub const PROJECTION_VARIANCE_NORM: f64 = 1.0 / 12.0;

/// What a generator emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `Σ_k U_k P_k` over three fixed orthonormal projections summing to the
    /// identity (d = 3), each eigenvalue an independent Unif[0,1] draw.
    /// True mean I/2, true variance I/12.
    ProjectionMixture,
    /// Unif[0,1] scalars embedded as 1×1 matrices.
    ScalarUniform,
    /// Outer products `x xᵀ` of the built-in law: x is a uniform draw on the
    /// unit sphere with probability 1/2 and the zero vector otherwise, so
    /// `‖x‖ ≤ 1` and the true covariance is `I/(2d)`.
    CovarianceOuter { dim: usize },
    /// Projection mixture with Unif eigenvalues replaced by Beta(s, s) draws
    /// whose shape s depends on the running sample mean; the conditional
    /// mean stays I/2 by symmetry while the law depends on the history.
    DependentStream,
}

/// A seeded, stream-addressable sample source.
#[derive(Debug, Clone)]
pub struct Generator {
    kind: GeneratorKind,
    seed: u64,
}

/// Fixed rotation applied to the projection bases, derived once from seed 0
/// so that the projections are reproducible but not axis-aligned.
#[allow(clippy::needless_range_loop)]
fn rotation_basis() -> [f64; 9] {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut cols = [[0.0_f64; 3]; 3];
    for col in cols.iter_mut() {
        for x in col.iter_mut() {
            *x = StandardNormal.sample(&mut rng);
        }
    }
    // Gram-Schmidt.
    for j in 0..3 {
        for k in 0..j {
            let dot: f64 = (0..3).map(|i| cols[j][i] * cols[k][i]).sum();
            for i in 0..3 {
                cols[j][i] -= dot * cols[k][i];
            }
        }
        let norm: f64 = (0..3).map(|i| cols[j][i] * cols[j][i]).sum::<f64>().sqrt();
        for i in 0..3 {
            cols[j][i] /= norm;
        }
    }
    let mut q = [0.0; 9];
    for i in 0..3 {
        for (j, col) in cols.iter().enumerate() {
            q[i * 3 + j] = col[i];
        }
    }
    q
}

/// `Q diag(values) Qᵀ` for the fixed 3×3 rotation.
fn rotated_diag(q: &[f64; 9], values: [f64; 3]) -> SymMat {
    let mut data = [0.0; 9];
    for i in 0..3 {
        for j in i..3 {
            let mut acc = 0.0;
            for (k, v) in values.iter().enumerate() {
                acc += v * q[i * 3 + k] * q[j * 3 + k];
            }
            data[i * 3 + j] = acc;
            data[j * 3 + i] = acc;
        }
    }
    SymMat::from_dense(3, &data, 0.0).expect("constructed symmetric")
}

impl Generator {
    pub fn new(kind: GeneratorKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            GeneratorKind::ProjectionMixture | GeneratorKind::DependentStream => 3,
            GeneratorKind::ScalarUniform => 1,
            GeneratorKind::CovarianceOuter { dim } => dim,
        }
    }

    pub fn true_mean(&self) -> SymMat {
        match self.kind {
            GeneratorKind::ProjectionMixture | GeneratorKind::DependentStream => {
                SymMat::scaled_identity(3, 0.5)
            }
            GeneratorKind::ScalarUniform => SymMat::scaled_identity(1, 0.5),
            GeneratorKind::CovarianceOuter { dim } => {
                SymMat::scaled_identity(dim, 0.5 / dim as f64)
            }
        }
    }

    /// `‖V‖` of the per-observation variance, when the generator has a fixed
    /// one (the dependent stream does not).
    pub fn true_variance_norm(&self) -> Option<f64> {
        match self.kind {
            GeneratorKind::ProjectionMixture | GeneratorKind::ScalarUniform => {
                Some(PROJECTION_VARIANCE_NORM)
            }
            GeneratorKind::CovarianceOuter { dim } => {
                let d = dim as f64;
                // V = Σ − Σ² with Σ = I/(2d).
                Some((2.0 * d - 1.0) / (4.0 * d * d))
            }
            GeneratorKind::DependentStream => None,
        }
    }

    pub fn true_variance_trace(&self) -> Option<f64> {
        self.true_variance_norm()
            .map(|v| v * self.dim() as f64)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Draws an n-item sample from the given stream index.
    pub fn sample(&self, n: usize, stream: u64) -> Result<MatrixSample, SimError> {
        let mut rng = self.rng(stream);
        let items = self.draw_items(n, &mut rng);
        Ok(MatrixSample::unit_interval(items)?)
    }

    fn draw_items(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<SymMat> {
        match self.kind {
            GeneratorKind::ProjectionMixture => {
                let q = rotation_basis();
                (0..n)
                    .map(|_| {
                        rotated_diag(&q, [rng.random(), rng.random(), rng.random()])
                    })
                    .collect()
            }
            GeneratorKind::ScalarUniform => (0..n)
                .map(|_| SymMat::from_diag(&[rng.random::<f64>()]))
                .collect(),
            GeneratorKind::CovarianceOuter { dim } => (0..n)
                .map(|_| {
                    if rng.random::<f64>() < 0.5 {
                        SymMat::zeros(dim)
                    } else {
                        let mut v: Vec<f64> =
                            (0..dim).map(|_| StandardNormal.sample(rng)).collect();
                        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if norm == 0.0 {
                            v[0] = 1.0;
                        } else {
                            for x in v.iter_mut() {
                                *x /= norm;
                            }
                        }
                        SymMat::outer(&v)
                    }
                })
                .collect(),
            GeneratorKind::DependentStream => {
                let q = rotation_basis();
                let mut items = Vec::with_capacity(n);
                let mut running_mean = SymMat::scaled_identity(3, 0.5);
                for i in 0..n {
                    // Mixing rule: the Beta concentration follows how far the
                    // history mean has wandered from I/2. Mean stays 1/2.
                    let drift = running_mean
                        .sub(&SymMat::scaled_identity(3, 0.5))
                        .frobenius_norm();
                    let shape = 0.4 + 4.0 * drift;
                    let beta = Beta::new(shape, shape).expect("positive shape");
                    let x = rotated_diag(
                        &q,
                        [beta.sample(rng), beta.sample(rng), beta.sample(rng)],
                    );
                    let k = (i + 1) as f64;
                    if i == 0 {
                        running_mean = x.clone();
                    } else {
                        let step = x.sub(&running_mean).scale(1.0 / k);
                        running_mean.add_scaled_in_place(1.0, &step);
                    }
                    items.push(x);
                }
                items
            }
        }
    }
}

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Matrix ratio table: meb1 and meb2 radii over the oracle radius.
    MatrixRatios,
    /// Scalar ratio table: mp, sharp-mp and the self-normalized bound over
    /// the scalar oracle.
    ScalarRatios,
    /// Matrix ratio table extended with the classical-variance bound.
    MatrixRatiosClassical,
    /// One-sided empirical coverage of every bound at n = 200.
    Coverage,
    /// `√n·D / √(2·log(d/α)·‖V‖)` trend over the sample-size grid.
    Sharpness,
}

impl TableKind {
    pub fn parse(tag: &str) -> Option<Self> {
        Some(match tag {
            "1" => TableKind::MatrixRatios,
            "2" => TableKind::ScalarRatios,
            "3" => TableKind::MatrixRatiosClassical,
            "coverage" => TableKind::Coverage,
            "sharpness" => TableKind::Sharpness,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::MatrixRatios => "1",
            TableKind::ScalarRatios => "2",
            TableKind::MatrixRatiosClassical => "3",
            TableKind::Coverage => "coverage",
            TableKind::Sharpness => "sharpness",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub table: TableKind,
    pub reps: usize,
    pub seed: u64,
    pub max_n: usize,
    /// Opt-in for the n = 10⁶ grid point, which is slow.
    pub allow_large_n: bool,
}

impl SimConfig {
    pub fn new(table: TableKind, reps: usize, seed: u64, max_n: usize) -> Self {
        Self {
            table,
            reps,
            seed,
            max_n,
            allow_large_n: false,
        }
    }
}

/// One aggregated cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub table: &'static str,
    pub n: usize,
    pub method: String,
    pub ratio_mean: Option<f64>,
    pub ratio_sd: Option<f64>,
    pub coverage: Option<f64>,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SimReport {
    pub rows: Vec<SimRow>,
    pub reps: usize,
    pub seed: u64,
    pub runtime_secs: f64,
}

impl SimReport {
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "table,n,method,ratio_mean,ratio_sd,coverage,reps,seed")?;
        for r in &self.rows {
            let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.table,
                r.n,
                r.method,
                fmt(r.ratio_mean),
                fmt(r.ratio_sd),
                fmt(r.coverage),
                r.reps,
                r.seed
            )?;
        }
        Ok(())
    }

    /// Looks up a cell by (n, method).
    pub fn cell(&self, n: usize, method: &str) -> Option<&SimRow> {
        self.rows.iter().find(|r| r.n == n && r.method == method)
    }
}

/// Sample-size grid shared by the ratio and sharpness tables, capped at 10⁵
/// unless the caller opts into the 10⁶ point.
pub fn grid(max_n: usize, allow_large_n: bool) -> Vec<usize> {
    let mut g = vec![100, 1_000, 10_000, 100_000];
    if allow_large_n {
        g.push(1_000_000);
    }
    g.retain(|&n| n <= max_n);
    g
}

fn stream_for(block: u64, rep: usize) -> u64 {
    (block << 32) | rep as u64
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs one experiment. Deterministic: identical configs (including the
/// seed) give identical reports.
pub fn run_table(config: &SimConfig) -> Result<SimReport, SimError> {
    if config.reps == 0 {
        return Err(SimError::Config("reps must be positive".into()));
    }
    if config.max_n < 100 && !matches!(config.table, TableKind::Coverage) {
        return Err(SimError::Config(
            "max_n below the smallest grid point 100".into(),
        ));
    }
    let started = Instant::now();
    let rows = match config.table {
        TableKind::MatrixRatios => matrix_ratio_rows(config, false)?,
        TableKind::MatrixRatiosClassical => matrix_ratio_rows(config, true)?,
        TableKind::ScalarRatios => scalar_ratio_rows(config)?,
        TableKind::Coverage => coverage_rows(config)?,
        TableKind::Sharpness => sharpness_rows(config)?,
    };
    Ok(SimReport {
        rows,
        reps: config.reps,
        seed: config.seed,
        runtime_secs: started.elapsed().as_secs_f64(),
    })
}

const ALPHA: f64 = 0.05;

fn matrix_ratio_rows(config: &SimConfig, classical: bool) -> Result<Vec<SimRow>, SimError> {
    let table = if classical { "3" } else { "1" };
    let generator = Generator::new(GeneratorKind::ProjectionMixture, config.seed);
    let mut rows = Vec::new();
    for (n_idx, &n) in grid(config.max_n, config.allow_large_n).iter().enumerate() {
        let oracle = matrix_oracle_radius(n)?;
        let per_rep: Vec<Result<(f64, f64, f64), SimError>> = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let sample = generator.sample(n, stream_for(n_idx as u64, rep))?;
                let meb1 = bounds::meb1_radius(&sample, ALPHA)?.radius;
                let meb2 = seqeb::meb2_fixed_n(&sample, ALPHA)?.radius;
                let meb1c = if classical {
                    bounds::meb1c_radius(&sample, ALPHA)?.radius
                } else {
                    f64::NAN
                };
                Ok((meb1 / oracle, meb1c / oracle, meb2 / oracle))
            })
            .collect();
        let mut meb1_ratios = Vec::with_capacity(config.reps);
        let mut meb1c_ratios = Vec::with_capacity(config.reps);
        let mut meb2_ratios = Vec::with_capacity(config.reps);
        for r in per_rep {
            let (a, b, c) = r?;
            meb1_ratios.push(a);
            meb1c_ratios.push(b);
            meb2_ratios.push(c);
        }
        push_ratio_row(&mut rows, table, n, "meb1", &meb1_ratios, config);
        if classical {
            push_ratio_row(&mut rows, table, n, "meb1c", &meb1c_ratios, config);
        }
        push_ratio_row(&mut rows, table, n, "meb2", &meb2_ratios, config);
    }
    Ok(rows)
}

fn matrix_oracle_radius(n: usize) -> Result<f64, SimError> {
    let req = BoundRequest::new(n, 3, ALPHA)?
        .with_variance_norm(PROJECTION_VARIANCE_NORM)?;
    Ok(bounds::matrix_bennett_bernstein(&req)?.radius)
}

fn push_ratio_row(
    rows: &mut Vec<SimRow>,
    table: &'static str,
    n: usize,
    method: &str,
    ratios: &[f64],
    config: &SimConfig,
) {
    let (mean, sd) = mean_sd(ratios);
    rows.push(SimRow {
        table,
        n,
        method: method.to_string(),
        ratio_mean: Some(mean),
        ratio_sd: Some(sd),
        coverage: None,
        reps: config.reps,
        seed: config.seed,
    });
}

fn scalar_ratio_rows(config: &SimConfig) -> Result<Vec<SimRow>, SimError> {
    let generator = Generator::new(GeneratorKind::ScalarUniform, config.seed);
    let mut rows = Vec::new();
    for (n_idx, &n) in grid(config.max_n, config.allow_large_n).iter().enumerate() {
        let oracle = bounds::scalar_bennett_bernstein(n, ALPHA, 1.0, PROJECTION_VARIANCE_NORM)?
            .radius;
        let per_rep: Vec<Result<(f64, f64, f64), SimError>> = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let sample = generator.sample(n, stream_for(n_idx as u64, rep))?;
                let sigma_hat2 = estimators::bessel_variance(&sample)?.matrix.get(0, 0);
                let mp = bounds::maurer_pontil_radius(n, ALPHA, sigma_hat2)?.radius;
                let sharp = bounds::sharp_mp_radius(n, ALPHA, sigma_hat2)?.radius;
                let selfnorm = seqeb::meb2_fixed_n(&sample, ALPHA)?.radius;
                Ok((mp / oracle, sharp / oracle, selfnorm / oracle))
            })
            .collect();
        let mut mp_r = Vec::with_capacity(config.reps);
        let mut sharp_r = Vec::with_capacity(config.reps);
        let mut self_r = Vec::with_capacity(config.reps);
        for r in per_rep {
            let (a, b, c) = r?;
            mp_r.push(a);
            sharp_r.push(b);
            self_r.push(c);
        }
        push_ratio_row(&mut rows, "2", n, "mp", &mp_r, config);
        push_ratio_row(&mut rows, "2", n, "sharp-mp", &sharp_r, config);
        push_ratio_row(&mut rows, "2", n, "self-normalized", &self_r, config);
    }
    Ok(rows)
}

/// Fixed sample size of the coverage experiment.
pub const COVERAGE_N: usize = 200;

fn coverage_rows(config: &SimConfig) -> Result<Vec<SimRow>, SimError> {
    let n = COVERAGE_N;
    let matrix_gen = Generator::new(GeneratorKind::ProjectionMixture, config.seed);
    let scalar_gen = Generator::new(GeneratorKind::ScalarUniform, config.seed);
    let dependent_gen = Generator::new(GeneratorKind::DependentStream, config.seed);
    let true_mean = matrix_gen.true_mean();

    // Matrix-valued methods share one stream block.
    let matrix_miss: Vec<Result<[bool; 5], SimError>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = matrix_gen.sample(n, stream_for(0, rep))?;
            let mean = estimators::sample_mean(&sample);
            let deviation = mean.sub(&true_mean).lambda_max()?;

            let tb = matrix_oracle_radius(n)?;
            let meb1 = bounds::meb1_radius(&sample, ALPHA)?.radius;
            let meb1c = bounds::meb1c_radius(&sample, ALPHA)?.radius;
            // (X − I/2)² ⪯ I/4 for the projection mixture.
            let hoeff = bounds::matrix_hoeffding_radius(n, 3, ALPHA, 0.25)?.radius;
            let meb2 = seqeb::meb2_fixed_n(&sample, ALPHA)?;
            let dev_weighted = meb2.weighted_mean.sub(&true_mean).lambda_max()?;
            Ok([
                deviation >= tb,
                deviation >= meb1,
                deviation >= meb1c,
                deviation >= hoeff,
                dev_weighted >= meb2.radius,
            ])
        })
        .collect();

    let scalar_miss: Vec<Result<[bool; 2], SimError>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = scalar_gen.sample(n, stream_for(1, rep))?;
            let mean = estimators::sample_mean(&sample).get(0, 0);
            let deviation = mean - 0.5;
            let sigma_hat2 = estimators::bessel_variance(&sample)?.matrix.get(0, 0);
            let mp = bounds::maurer_pontil_radius(n, ALPHA, sigma_hat2)?.radius;
            let sharp = bounds::sharp_mp_radius(n, ALPHA, sigma_hat2)?.radius;
            Ok([deviation >= mp, deviation >= sharp])
        })
        .collect();

    let dependent_miss: Vec<Result<bool, SimError>> = (0..config.reps)
        .into_par_iter()
        .map(|rep| {
            let sample = dependent_gen.sample(n, stream_for(2, rep))?;
            let meb2 = seqeb::meb2_fixed_n(&sample, ALPHA)?;
            let deviation = meb2.weighted_mean.sub(&true_mean).lambda_max()?;
            Ok(deviation >= meb2.radius)
        })
        .collect();

    let mut counts = [0usize; 5];
    for r in matrix_miss {
        for (c, m) in counts.iter_mut().zip(r?.iter()) {
            *c += usize::from(*m);
        }
    }
    let mut scalar_counts = [0usize; 2];
    for r in scalar_miss {
        for (c, m) in scalar_counts.iter_mut().zip(r?.iter()) {
            *c += usize::from(*m);
        }
    }
    let mut dep_count = 0usize;
    for r in dependent_miss {
        dep_count += usize::from(r?);
    }

    let reps_f = config.reps as f64;
    let mut rows = Vec::new();
    let methods = ["tb", "meb1", "meb1c", "hoeffding", "meb2"];
    for (method, misses) in methods.iter().zip(counts.iter()) {
        rows.push(coverage_row(config, method, *misses as f64 / reps_f));
    }
    for (method, misses) in ["mp", "sharp-mp"].iter().zip(scalar_counts.iter()) {
        rows.push(coverage_row(config, method, *misses as f64 / reps_f));
    }
    rows.push(coverage_row(config, "meb2-dependent", dep_count as f64 / reps_f));
    Ok(rows)
}

fn coverage_row(config: &SimConfig, method: &str, miscoverage: f64) -> SimRow {
    SimRow {
        table: "coverage",
        n: COVERAGE_N,
        method: method.to_string(),
        ratio_mean: None,
        ratio_sd: None,
        coverage: Some(1.0 - miscoverage),
        reps: config.reps,
        seed: config.seed,
    }
}

fn sharpness_rows(config: &SimConfig) -> Result<Vec<SimRow>, SimError> {
    let generator = Generator::new(GeneratorKind::ProjectionMixture, config.seed);
    let log_term = (3.0_f64 / ALPHA).ln();
    let limit = (2.0 * log_term * PROJECTION_VARIANCE_NORM).sqrt();
    let mut rows = Vec::new();
    for (n_idx, &n) in grid(config.max_n, config.allow_large_n).iter().enumerate() {
        let per_rep: Vec<Result<(f64, f64), SimError>> = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let sample = generator.sample(n, stream_for(n_idx as u64, rep))?;
                let scale = (n as f64).sqrt() / limit;
                let meb1 = bounds::meb1_radius(&sample, ALPHA)?.radius * scale;
                let meb2 = seqeb::meb2_fixed_n(&sample, ALPHA)?.radius * scale;
                Ok((meb1, meb2))
            })
            .collect();
        let mut meb1_vals = Vec::with_capacity(config.reps);
        let mut meb2_vals = Vec::with_capacity(config.reps);
        for r in per_rep {
            let (a, b) = r?;
            meb1_vals.push(a);
            meb2_vals.push(b);
        }
        push_ratio_row(&mut rows, "sharpness", n, "meb1", &meb1_vals, config);
        push_ratio_row(&mut rows, "sharpness", n, "meb2", &meb2_vals, config);
    }
    Ok(rows)
}
