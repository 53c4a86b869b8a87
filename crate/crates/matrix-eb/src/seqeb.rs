//! Self-normalized (supermartingale) empirical Bernstein method.
//!
//! The driving object is the nonnegative supermartingale
//!
//! ```text
//! L_n = tr exp( Σ γᵢ(Xᵢ − Mᵢ) − Σ ψ_E(γᵢ)(Xᵢ − X̂ᵢ)² )
//! ```
//!
//! for a predictable (0,1)-valued weight sequence {γᵢ} and a predictable
//! plug-in prediction X̂ᵢ of the next observation. Ville's inequality turns
//! it into a level-α sequential test of H₀: E[Xᵢ | past] = M_null, and the
//! same accumulators give a time-uniform confidence radius around the
//! γ-weighted mean:
//!
//! ```text
//! radius_n = ( log(d/α) + λ_max(Σ ψ_E(γᵢ)(Xᵢ − X̂ᵢ)²) ) / Σ γᵢ.
//! ```
//!
//! Everything runs in the log domain because L_n explodes under an
//! alternative. States are values: `update` consumes and returns, so one
//! stream is sequenced by its owner while distinct streams run in parallel.

use crate::estimators::{EstimatorError, MatrixSample, RunningProxy};
use crate::symmat::{SymMat, SymMatError};
use thiserror::Error;

/// Largest γ the fixed-horizon adaptive schedule can emit: the proxy floor
/// `5·log(d/α)/n` forces `γ = √(2log(d/α)/(n·v̄)) ≤ √(2/5)`.
pub const GAMMA_CAP_FIXED_N: f64 = 0.632_455_532_033_675_9;

/// Slack allowed when validating `λ_min(Xᵢ − X̂ᵢ) ≥ −1`.
const PREDICTOR_RANGE_ATOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SeqEbError {
    #[error("gamma {0} outside [0,1)")]
    GammaDomain(f64),
    #[error("user schedule exhausted at step {step}")]
    ScheduleExhausted { step: usize },
    #[error("randomization variable {0} outside (0,1]")]
    RandomizeDomain(f64),
    #[error("state holds no observations yet")]
    StateEmpty,
    #[error("alpha {0} outside (0,1)")]
    Alpha(f64),
    #[error(
        "observation at step {step} has lambda_min(x - prediction) = {lambda_min} < -1; \
         the exponential inequality does not apply"
    )]
    PredictorRange { step: usize, lambda_min: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("sample eigenvalue interval [{lo}, {hi}] is not contained in [0, 1]")]
    Boundedness { lo: f64, hi: f64 },
    #[error(transparent)]
    Matrix(#[from] SymMatError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
}

/// `ψ_E(γ) = −log(1−γ) − γ`, the CGF of a centered standard exponential;
/// the penalty weight attached to each squared prediction error.
pub fn psi_e(gamma: f64) -> Result<f64, SeqEbError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(SeqEbError::GammaDomain(gamma));
    }
    Ok(-(-gamma).ln_1p() - gamma)
}

/// How the per-step weights γᵢ are chosen. Both modes are predictable: the
/// step-i weight only sees observations strictly before i.
#[derive(Debug, Clone)]
pub enum GammaSchedule {
    /// `γᵢ = √(2log(d/α)/(n·v̄_{i−1}))` for a horizon fixed at n, with the
    /// running variance proxy floored at `5·log(d/α)/n`.
    FixedNAdaptive { n: usize },
    /// Caller-supplied weights, validated to (0,1) per step; out-of-range
    /// values are errors, never clamped.
    UserSupplied(Vec<f64>),
}

/// Plug-in prediction of the next observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    /// Plain running mean `X̄_{i−1}` (zero at i = 1).
    RunningMean,
    /// `Σψ_E(γⱼ)Xⱼ / Σψ_E(γⱼ)` over past observations (zero at i = 1);
    /// the minimizer of the accumulated weighted squared error.
    PsiWeightedMean,
}

/// Outcome of one monitoring step.
#[derive(Debug, Clone)]
pub struct SeqDecision {
    pub step: usize,
    /// Weight drawn for this step, before the observation was incorporated.
    pub gamma: f64,
    /// `log L_i` for the null sequence supplied so far.
    pub log_supermartingale: f64,
    /// `log(d/α)`, or `log(u·d/α)` when a randomization variable is set.
    pub threshold: f64,
    pub reject: bool,
    /// Current time-uniform confidence radius around the weighted mean.
    pub current_radius: f64,
    pub weighted_mean: SymMat,
}

/// Streaming state of the supermartingale method.
#[derive(Debug, Clone)]
pub struct SeqEbState {
    dim: usize,
    alpha: f64,
    schedule: GammaSchedule,
    predictor: Predictor,
    randomize_u: Option<f64>,
    step: usize,
    gamma_sum: f64,
    /// Σ γᵢ Xᵢ
    weighted_obs_sum: SymMat,
    /// Σ γᵢ Mᵢ for the null values supplied to `update`.
    null_weighted_sum: SymMat,
    /// Σ ψ_E(γᵢ)(Xᵢ − X̂ᵢ)², PSD by construction.
    penalty: SymMat,
    psi_weight_sum: f64,
    /// Σ ψ_E(γᵢ) Xᵢ, feeding the ψ-weighted predictor.
    psi_weighted_obs_sum: SymMat,
    /// Plain running mean X̄_i, feeding the default predictor.
    running_mean: SymMat,
    proxy: RunningProxy,
}

impl SeqEbState {
    pub fn new(
        dim: usize,
        alpha: f64,
        schedule: GammaSchedule,
        predictor: Predictor,
    ) -> Result<Self, SeqEbError> {
        if alpha.is_nan() || alpha <= 0.0 || alpha >= 1.0 {
            return Err(SeqEbError::Alpha(alpha));
        }
        let proxy = match &schedule {
            GammaSchedule::FixedNAdaptive { n } => RunningProxy::for_horizon(dim, alpha, *n),
            GammaSchedule::UserSupplied(_) => RunningProxy::new(dim, 0.0),
        };
        Ok(Self {
            dim,
            alpha,
            schedule,
            predictor,
            randomize_u: None,
            step: 0,
            gamma_sum: 0.0,
            weighted_obs_sum: SymMat::zeros(dim),
            null_weighted_sum: SymMat::zeros(dim),
            penalty: SymMat::zeros(dim),
            psi_weight_sum: 0.0,
            psi_weighted_obs_sum: SymMat::zeros(dim),
            running_mean: SymMat::zeros(dim),
            proxy: RunningProxy::new(dim, 0.0),
        }
        .with_proxy(proxy))
    }

    fn with_proxy(mut self, proxy: RunningProxy) -> Self {
        self.proxy = proxy;
        self
    }

    /// Installs an a-priori uniform draw for the randomized-Ville threshold
    /// `log(u·d/α)`. The caller must have drawn `u` independently of the
    /// data stream; the library never draws it internally.
    pub fn with_randomize_u(mut self, u: f64) -> Result<Self, SeqEbError> {
        if u.is_nan() || u <= 0.0 || u > 1.0 {
            return Err(SeqEbError::RandomizeDomain(u));
        }
        self.randomize_u = Some(u);
        Ok(self)
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma_sum(&self) -> f64 {
        self.gamma_sum
    }

    pub fn penalty_matrix(&self) -> &SymMat {
        &self.penalty
    }

    pub fn psi_weight_sum(&self) -> f64 {
        self.psi_weight_sum
    }

    pub fn proxy(&self) -> &RunningProxy {
        &self.proxy
    }

    /// γ-weighted mean of the observations so far.
    pub fn weighted_mean(&self) -> Result<SymMat, SeqEbError> {
        if self.step == 0 {
            return Err(SeqEbError::StateEmpty);
        }
        Ok(self.weighted_obs_sum.scale(1.0 / self.gamma_sum))
    }

    /// The plug-in prediction X̂ for the next (not yet seen) observation.
    /// Zero before the first observation; afterwards a convex combination of
    /// past observations, so it stays inside any interval the data lives in.
    pub fn predictor_next(&self) -> SymMat {
        if self.step == 0 {
            return SymMat::zeros(self.dim);
        }
        match self.predictor {
            Predictor::RunningMean => self.running_mean.clone(),
            Predictor::PsiWeightedMean => {
                if self.psi_weight_sum > 0.0 {
                    self.psi_weighted_obs_sum.scale(1.0 / self.psi_weight_sum)
                } else {
                    SymMat::zeros(self.dim)
                }
            }
        }
    }

    /// The γ the schedule will emit for the next observation. Exposed so
    /// callers can log it; `update` draws exactly this value.
    pub fn peek_gamma(&self) -> Result<f64, SeqEbError> {
        let next_step = self.step + 1;
        let gamma = match &self.schedule {
            GammaSchedule::FixedNAdaptive { n } => {
                let log_term = (self.dim as f64 / self.alpha).ln();
                (2.0 * log_term / (*n as f64 * self.proxy.vbar())).sqrt()
            }
            GammaSchedule::UserSupplied(values) => *values
                .get(next_step - 1)
                .ok_or(SeqEbError::ScheduleExhausted { step: next_step })?,
        };
        if gamma.is_nan() || gamma <= 0.0 || gamma >= 1.0 {
            return Err(SeqEbError::GammaDomain(gamma));
        }
        Ok(gamma)
    }

    fn threshold(&self) -> f64 {
        let u = self.randomize_u.unwrap_or(1.0);
        (u * self.dim as f64 / self.alpha).ln()
    }

    /// Advances the state by one observation without evaluating the
    /// supermartingale; shared by `update` and the batch pipeline.
    fn advance(&mut self, x: &SymMat, m_null: &SymMat) -> Result<f64, SeqEbError> {
        if x.dim() != self.dim {
            return Err(SeqEbError::DimMismatch {
                left: x.dim(),
                right: self.dim,
            });
        }
        if m_null.dim() != self.dim {
            return Err(SeqEbError::DimMismatch {
                left: m_null.dim(),
                right: self.dim,
            });
        }
        let gamma = self.peek_gamma()?;
        let prediction = self.predictor_next();
        let centered = x.sub(&prediction);
        let lambda_min = centered.lambda_min()?;
        if lambda_min < -1.0 - PREDICTOR_RANGE_ATOL {
            return Err(SeqEbError::PredictorRange {
                step: self.step + 1,
                lambda_min,
            });
        }
        let psi = psi_e(gamma)?;

        self.penalty.add_scaled_in_place(psi, &centered.square());
        self.weighted_obs_sum.add_scaled_in_place(gamma, x);
        self.null_weighted_sum.add_scaled_in_place(gamma, m_null);
        self.gamma_sum += gamma;
        self.psi_weight_sum += psi;
        self.psi_weighted_obs_sum.add_scaled_in_place(psi, x);

        self.step += 1;
        let mean_step = x.sub(&self.running_mean).scale(1.0 / self.step as f64);
        self.running_mean.add_scaled_in_place(1.0, &mean_step);
        let proxy = std::mem::replace(&mut self.proxy, RunningProxy::new(self.dim, 0.0));
        self.proxy = proxy.update(x)?;
        Ok(gamma)
    }

    /// Incorporates one observation against the null value `m_null` (held
    /// constant across steps for the H₀ test; a time-varying sequence is
    /// accepted and accumulated faithfully). The step weight γ is drawn from
    /// the schedule before the observation is touched.
    pub fn update(
        mut self,
        x: &SymMat,
        m_null: &SymMat,
    ) -> Result<(Self, SeqDecision), SeqEbError> {
        let gamma = self.advance(x, m_null)?;
        let drift = self.weighted_obs_sum.sub(&self.null_weighted_sum);
        let log_supermartingale = drift.sub(&self.penalty).log_trace_exp()?;
        let threshold = self.threshold();
        let current_radius = self.time_uniform_radius(self.randomize_u)?;
        let weighted_mean = self.weighted_mean()?;
        let decision = SeqDecision {
            step: self.step,
            gamma,
            log_supermartingale,
            threshold,
            reject: log_supermartingale >= threshold,
            current_radius,
            weighted_mean,
        };
        Ok((self, decision))
    }

    /// Time-uniform radius `(log(u·d/α) + λ_max(penalty)) / Σγ`, valid
    /// simultaneously over all steps. `randomize_u` tightens the threshold
    /// at a stopping time via an independent uniform draw; `u = 1` (or
    /// `None`) is the plain Ville threshold.
    pub fn time_uniform_radius(&self, randomize_u: Option<f64>) -> Result<f64, SeqEbError> {
        if self.step == 0 {
            return Err(SeqEbError::StateEmpty);
        }
        let u = match randomize_u {
            Some(u) if u.is_nan() || u <= 0.0 || u > 1.0 => {
                return Err(SeqEbError::RandomizeDomain(u))
            }
            Some(u) => u,
            None => 1.0,
        };
        let log_term = (u * self.dim as f64 / self.alpha).ln();
        let penalty_top = self.penalty.lambda_max()?;
        Ok(log_term / self.gamma_sum + penalty_top / self.gamma_sum)
    }
}

/// Output of the fixed-horizon pipeline.
#[derive(Debug, Clone)]
pub struct Meb2Result {
    /// γ-weighted mean X̄ⁿ_γ, the center of the confidence set.
    pub weighted_mean: SymMat,
    /// One-sided radius D^meb2.
    pub radius: f64,
    /// Variance proxy `v = radius²·n/(2·log(d/α))`; converges to ‖V‖ under
    /// conditional homoscedasticity.
    pub variance_proxy: f64,
    pub gamma_sum: f64,
    pub penalty_lambda_max: f64,
    pub n_used: usize,
}

/// Second matrix empirical Bernstein bound at a fixed sample size: runs the
/// fixed-n adaptive schedule with the running-mean predictor over the whole
/// sample and returns the weighted mean, the radius, and the variance proxy.
pub fn meb2_fixed_n(sample: &MatrixSample, alpha: f64) -> Result<Meb2Result, SeqEbError> {
    let (lo, hi) = sample.interval();
    if lo < -PREDICTOR_RANGE_ATOL || hi > 1.0 + PREDICTOR_RANGE_ATOL {
        return Err(SeqEbError::Boundedness { lo, hi });
    }
    let n = sample.len();
    let dim = sample.dim();
    let mut state = SeqEbState::new(
        dim,
        alpha,
        GammaSchedule::FixedNAdaptive { n },
        Predictor::RunningMean,
    )?;
    let zero = SymMat::zeros(dim);
    for x in sample.items() {
        state.advance(x, &zero)?;
    }
    let radius = state.time_uniform_radius(None)?;
    let log_term = (dim as f64 / alpha).ln();
    Ok(Meb2Result {
        weighted_mean: state.weighted_mean()?,
        radius,
        variance_proxy: radius * radius * n as f64 / (2.0 * log_term),
        gamma_sum: state.gamma_sum,
        penalty_lambda_max: state.penalty.lambda_max()?,
        n_used: n,
    })
}
