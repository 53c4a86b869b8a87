//! Closed-form one-sided deviation radii for the spectral mean of bounded
//! symmetric random matrices.
//!
//! Oracle bounds (`tb`, `mb`, `hoeffding`, the scalar Bennett-Bernstein) take
//! a known variance or boundedness norm. Empirical bounds (`meb1`, `meb1c`,
//! `mp`, `sharp-mp`) read everything they need off the sample. Every radius
//! comes back as a [`BoundResult`] whose term breakdown sums exactly to the
//! radius.

use serde::Serialize;
use thiserror::Error;

use crate::estimators::{self, EstimatorError, MatrixSample};

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("parameter out of range: {0}")]
    Param(String),
    #[error("sample too small: need {needed}, have {have}")]
    SampleTooSmall { needed: usize, have: usize },
    #[error("negative input {0} outside the domain")]
    Domain(f64),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
}

/// Which inequality produced a radius. The string forms double as the CLI
/// method tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Oracle matrix (or scalar, d=1) Bennett-Bernstein.
    Tb,
    /// Matrix empirical Bernstein, paired sample variance.
    Meb1,
    /// Matrix empirical Bernstein, classical Bessel-corrected variance.
    Meb1c,
    /// Dimension-free oracle Bernstein with effective dimension.
    Mb,
    /// Matrix Hoeffding with a squared-boundedness norm.
    Hoeffding,
    /// Scalar Maurer-Pontil empirical Bernstein.
    Mp,
    /// Sharpened Maurer-Pontil with the imbalanced union-bound split.
    SharpMp,
    /// Self-normalized matrix empirical Bernstein (supermartingale method).
    Meb2,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Tb => "tb",
            Method::Meb1 => "meb1",
            Method::Meb1c => "meb1c",
            Method::Mb => "mb",
            Method::Hoeffding => "hoeffding",
            Method::Mp => "mp",
            Method::SharpMp => "sharp-mp",
            Method::Meb2 => "meb2",
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        Some(match tag {
            "tb" => Method::Tb,
            "meb1" => Method::Meb1,
            "meb1c" => Method::Meb1c,
            "mb" => Method::Mb,
            "hoeffding" => Method::Hoeffding,
            "mp" => Method::Mp,
            "sharp-mp" => Method::SharpMp,
            "meb2" => Method::Meb2,
            _ => return None,
        })
    }
}

/// Which tail a radius bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    OneSidedUpper,
    TwoSided,
}

/// Named breakdown of a radius. `radius` is always the exact sum
/// `bounded + variance + correction`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Terms {
    /// Boundedness / threshold term.
    pub bounded: f64,
    /// Variance-driven term.
    pub variance: f64,
    /// Higher-order empirical correction.
    pub correction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundResult {
    pub method: Method,
    pub n_used: usize,
    pub radius: f64,
    pub terms: Terms,
    pub side: Side,
}

impl BoundResult {
    fn one_sided(method: Method, n_used: usize, terms: Terms) -> Self {
        Self {
            method,
            n_used,
            radius: terms.bounded + terms.variance + terms.correction,
            terms,
            side: Side::OneSidedUpper,
        }
    }
}

/// Shared validated inputs for the oracle bounds: sample size, dimension,
/// error level, eigenvalue upper bound B, and optional variance information.
#[derive(Debug, Clone)]
pub struct BoundRequest {
    n: usize,
    d: usize,
    alpha: f64,
    bound_b: f64,
    variance_norm: Option<f64>,
    trace_v: Option<f64>,
}

impl BoundRequest {
    pub fn new(n: usize, d: usize, alpha: f64) -> Result<Self, BoundError> {
        if n < 1 {
            return Err(BoundError::Param("n must be at least 1".into()));
        }
        if d < 1 {
            return Err(BoundError::Param("d must be at least 1".into()));
        }
        check_alpha(alpha)?;
        Ok(Self {
            n,
            d,
            alpha,
            bound_b: 1.0,
            variance_norm: None,
            trace_v: None,
        })
    }

    pub fn with_bound_b(mut self, b: f64) -> Result<Self, BoundError> {
        if !b.is_finite() || b <= 0.0 {
            return Err(BoundError::Param(format!("B must be positive, got {b}")));
        }
        self.bound_b = b;
        Ok(self)
    }

    pub fn with_variance_norm(mut self, v: f64) -> Result<Self, BoundError> {
        if !v.is_finite() || v < 0.0 {
            return Err(BoundError::Param(format!(
                "variance norm must be nonnegative, got {v}"
            )));
        }
        self.variance_norm = Some(v);
        Ok(self)
    }

    pub fn with_trace_v(mut self, t: f64) -> Result<Self, BoundError> {
        if !t.is_finite() || t < 0.0 {
            return Err(BoundError::Param(format!(
                "trace must be nonnegative, got {t}"
            )));
        }
        self.trace_v = Some(t);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn bound_b(&self) -> f64 {
        self.bound_b
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), BoundError> {
    if alpha.is_nan() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(BoundError::Param(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    Ok(())
}

/// Bennett's `h(u) = (1+u)log(1+u) − u` for `u ≥ 0`.
pub fn h_fn(u: f64) -> Result<f64, BoundError> {
    if u.is_nan() || u < 0.0 {
        return Err(BoundError::Domain(u));
    }
    Ok((1.0 + u) * u.ln_1p() - u)
}

/// Polynomial upper bound on the inverse: `h⁻¹(x) ≤ √(2x) + x/3`.
pub fn h_inv_upper(x: f64) -> Result<f64, BoundError> {
    if x.is_nan() || x < 0.0 {
        return Err(BoundError::Domain(x));
    }
    Ok((2.0 * x).sqrt() + x / 3.0)
}

/// Scalar Bennett-Bernstein deviation at error level α:
/// `B·log(1/α)/(3n) + √(2σ²log(1/α)/n)`.
pub fn scalar_bennett_bernstein(
    n: usize,
    alpha: f64,
    bound_b: f64,
    sigma2: f64,
) -> Result<BoundResult, BoundError> {
    let req = BoundRequest::new(n, 1, alpha)?
        .with_bound_b(bound_b)?
        .with_variance_norm(sigma2)?;
    matrix_bennett_bernstein(&req)
}

/// Oracle matrix Bennett-Bernstein radius
/// `D^tb = B·log(d/α)/(3n) + √(2·log(d/α)·‖V‖/n)`.
pub fn matrix_bennett_bernstein(req: &BoundRequest) -> Result<BoundResult, BoundError> {
    let Some(vnorm) = req.variance_norm else {
        return Err(BoundError::Param(
            "matrix Bennett-Bernstein needs a variance norm".into(),
        ));
    };
    let n = req.n as f64;
    let log_term = (req.d as f64 / req.alpha).ln();
    let terms = Terms {
        bounded: req.bound_b * log_term / (3.0 * n),
        variance: (2.0 * log_term * vnorm / n).sqrt(),
        correction: 0.0,
    };
    Ok(BoundResult::one_sided(Method::Tb, req.n, terms))
}

/// First matrix empirical Bernstein radius, driven by the paired variance
/// estimator. With `m` the even-adjusted count and
/// `L₁ = log(md/((m−1)α))`, `L₂ = log(2md/α)`:
///
/// ```text
/// D^meb1 = L₁/(3m) + √(2‖V*‖L₁/m) + (√(5/3)+1)·√(L₁L₂)/m
/// ```
pub fn meb1_radius(sample: &MatrixSample, alpha: f64) -> Result<BoundResult, BoundError> {
    check_alpha(alpha)?;
    let paired = estimators::paired_variance(sample)?;
    let vnorm = paired.matrix.spectral_norm().map_err(EstimatorError::from)?;
    meb1_radius_from_stats(paired.n_used, sample.dim(), alpha, vnorm)
}

pub(crate) fn meb1_radius_from_stats(
    m_used: usize,
    d: usize,
    alpha: f64,
    paired_norm: f64,
) -> Result<BoundResult, BoundError> {
    if m_used < 2 {
        return Err(BoundError::SampleTooSmall {
            needed: 2,
            have: m_used,
        });
    }
    let m = m_used as f64;
    let d = d as f64;
    let log1 = (m * d / ((m - 1.0) * alpha)).ln();
    let log2 = (2.0 * m * d / alpha).ln();
    let terms = Terms {
        bounded: log1 / (3.0 * m),
        variance: (2.0 * paired_norm * log1 / m).sqrt(),
        correction: ((5.0_f64 / 3.0).sqrt() + 1.0) * (log1 * log2).sqrt() / m,
    };
    Ok(BoundResult::one_sided(Method::Meb1, m_used, terms))
}

/// First matrix empirical Bernstein radius built on the classical
/// Bessel-corrected variance. With `L₁ = log(nd/((n−1)α))`,
/// `L₂ = log(2nd/α)`:
///
/// ```text
/// D^meb1c = √(2L₁/n)·( ‖V̂‖^½ + min(√(L₂/(2n‖V̂‖)), (2L₂/n)^¼) ) + L₁/(3n)
/// ```
///
/// At `‖V̂‖ = 0` the min resolves to the fourth-root branch (the other is
/// +∞ by convention), keeping the radius finite.
pub fn meb1c_radius(sample: &MatrixSample, alpha: f64) -> Result<BoundResult, BoundError> {
    check_alpha(alpha)?;
    let bessel = estimators::bessel_variance(sample)?;
    let vnorm = bessel.matrix.spectral_norm().map_err(EstimatorError::from)?;
    meb1c_radius_from_stats(sample.len(), sample.dim(), alpha, vnorm)
}

pub(crate) fn meb1c_radius_from_stats(
    n_used: usize,
    d: usize,
    alpha: f64,
    bessel_norm: f64,
) -> Result<BoundResult, BoundError> {
    if n_used < 2 {
        return Err(BoundError::SampleTooSmall {
            needed: 2,
            have: n_used,
        });
    }
    let n = n_used as f64;
    let d = d as f64;
    let log1 = (n * d / ((n - 1.0) * alpha)).ln();
    let log2 = (2.0 * n * d / alpha).ln();
    let quarter_branch = (2.0 * log2 / n).powf(0.25);
    let min_branch = if bessel_norm > 0.0 {
        (log2 / (2.0 * n * bessel_norm)).sqrt().min(quarter_branch)
    } else {
        quarter_branch
    };
    let scale = (2.0 * log1 / n).sqrt();
    let terms = Terms {
        bounded: log1 / (3.0 * n),
        variance: scale * bessel_norm.sqrt(),
        correction: scale * min_branch,
    };
    Ok(BoundResult::one_sided(Method::Meb1c, n_used, terms))
}

/// Dimension-free oracle Bernstein radius with effective dimension
/// `d' = 14·tr(V)/‖V‖`:
///
/// ```text
/// D^mb = ( B·log(d'/α) + √(B²·log²(d'/α) + 18n·log(d'/α)·‖V‖) ) / (3n)
/// ```
pub fn minsker_radius(req: &BoundRequest) -> Result<BoundResult, BoundError> {
    let Some(vnorm) = req.variance_norm else {
        return Err(BoundError::Param("minsker bound needs a variance norm".into()));
    };
    let Some(trace_v) = req.trace_v else {
        return Err(BoundError::Param("minsker bound needs trace(V)".into()));
    };
    if vnorm <= 0.0 {
        return Err(BoundError::Param(
            "minsker bound needs a strictly positive variance norm".into(),
        ));
    }
    if trace_v < vnorm {
        return Err(BoundError::Param(format!(
            "trace(V) = {trace_v} smaller than ‖V‖ = {vnorm} is impossible"
        )));
    }
    let n = req.n as f64;
    let b = req.bound_b;
    let d_eff = 14.0 * trace_v / vnorm;
    let log_term = (d_eff / req.alpha).ln();
    let terms = Terms {
        bounded: b * log_term / (3.0 * n),
        variance: (b * b * log_term * log_term + 18.0 * n * log_term * vnorm).sqrt() / (3.0 * n),
        correction: 0.0,
    };
    Ok(BoundResult::one_sided(Method::Mb, req.n, terms))
}

/// Matrix Hoeffding radius `√(2‖B‖·log(d/α)/n)` under the squared
/// boundedness assumption `(Xᵢ − M)² ⪯ B`.
pub fn matrix_hoeffding_radius(
    n: usize,
    d: usize,
    alpha: f64,
    bound_norm: f64,
) -> Result<BoundResult, BoundError> {
    let req = BoundRequest::new(n, d, alpha)?;
    if !bound_norm.is_finite() || bound_norm <= 0.0 {
        return Err(BoundError::Param(format!(
            "boundedness norm must be positive, got {bound_norm}"
        )));
    }
    let n_f = req.n as f64;
    let log_term = (req.d as f64 / req.alpha).ln();
    let terms = Terms {
        bounded: 0.0,
        variance: (2.0 * bound_norm * log_term / n_f).sqrt(),
        correction: 0.0,
    };
    Ok(BoundResult::one_sided(Method::Hoeffding, n, terms))
}

/// Maurer-Pontil scalar empirical Bernstein radius
/// `√(2σ̂²log(2/α)/n) + 7·log(2/α)/(3(n−1))`.
pub fn maurer_pontil_radius(
    n: usize,
    alpha: f64,
    sigma_hat2: f64,
) -> Result<BoundResult, BoundError> {
    check_alpha(alpha)?;
    check_sigma2(sigma_hat2)?;
    if n < 2 {
        return Err(BoundError::SampleTooSmall { needed: 2, have: n });
    }
    let n_f = n as f64;
    let log_term = (2.0 / alpha).ln();
    let terms = Terms {
        bounded: 7.0 * log_term / (3.0 * (n_f - 1.0)),
        variance: (2.0 * sigma_hat2 * log_term / n_f).sqrt(),
        correction: 0.0,
    };
    Ok(BoundResult::one_sided(Method::Mp, n, terms))
}

/// Sharpened Maurer-Pontil radius from the imbalanced
/// `α = α(n−1)/n + α/n` union-bound split. With `L₁ = log(n/((n−1)α))`:
///
/// ```text
/// ρ = L₁/(3n) + √(2σ̂²L₁/n) + 2√(L₁·log(n/α)/(n(n−1)))
/// ```
pub fn sharp_mp_radius(n: usize, alpha: f64, sigma_hat2: f64) -> Result<BoundResult, BoundError> {
    check_alpha(alpha)?;
    check_sigma2(sigma_hat2)?;
    if n < 2 {
        return Err(BoundError::SampleTooSmall { needed: 2, have: n });
    }
    let n_f = n as f64;
    let log1 = (n_f / ((n_f - 1.0) * alpha)).ln();
    let log2 = (n_f / alpha).ln();
    let terms = Terms {
        bounded: log1 / (3.0 * n_f),
        variance: (2.0 * sigma_hat2 * log1 / n_f).sqrt(),
        correction: 2.0 * (log1 * log2 / (n_f * (n_f - 1.0))).sqrt(),
    };
    Ok(BoundResult::one_sided(Method::SharpMp, n, terms))
}

fn check_sigma2(sigma2: f64) -> Result<(), BoundError> {
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(BoundError::Param(format!(
            "variance must be nonnegative, got {sigma2}"
        )));
    }
    Ok(())
}

/// Two-sided convenience: evaluates a one-sided radius at `α/2`, which then
/// bounds both tails of `X̄ − M` simultaneously.
pub fn two_sided<F>(alpha: f64, one_sided: F) -> Result<BoundResult, BoundError>
where
    F: FnOnce(f64) -> Result<BoundResult, BoundError>,
{
    check_alpha(alpha)?;
    let mut result = one_sided(alpha / 2.0)?;
    result.side = Side::TwoSided;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmat::SymMat;

    fn unit_sample(items: Vec<SymMat>) -> MatrixSample {
        MatrixSample::unit_interval(items).unwrap()
    }

    #[test]
    fn h_function_values() {
        assert_eq!(h_fn(0.0).unwrap(), 0.0);
        assert_eq!(h_inv_upper(0.0).unwrap(), 0.0);
        assert!((h_fn(1.0).unwrap() - 0.386_294_361_119_890_6).abs() < 1e-15);
        assert!(matches!(h_fn(-0.1).unwrap_err(), BoundError::Domain(_)));
        assert!(matches!(h_inv_upper(-1.0).unwrap_err(), BoundError::Domain(_)));
    }

    #[test]
    fn h_inverse_bound_dominates() {
        // h is increasing, so h(h_inv_upper(x)) ≥ x certifies the bound.
        let mut x = 0.01;
        while x <= 10.0 {
            let hh = h_fn(h_inv_upper(x).unwrap()).unwrap();
            assert!(hh >= x, "h(h_inv_upper({x})) = {hh} < {x}");
            x *= 1.07;
        }
    }

    #[test]
    fn scalar_bb_frozen_value() {
        let r = scalar_bennett_bernstein(100, 0.05, 1.0, 1.0 / 12.0).unwrap();
        assert!((r.terms.bounded - 0.009_985_774_245_179_97).abs() < 1e-12);
        assert!((r.terms.variance - 0.070_660_364_580_081_14).abs() < 1e-12);
        assert!((r.radius - 0.080_646_138_825_261_12).abs() < 1e-12);
    }

    #[test]
    fn scalar_bb_zero_variance_is_pure_boundedness() {
        let r = scalar_bennett_bernstein(100, 0.05, 2.0, 0.0).unwrap();
        assert_eq!(r.terms.variance, 0.0);
        assert!((r.radius - 2.0 * (20.0_f64).ln() / 300.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_bb_frozen_value() {
        let req = BoundRequest::new(100, 3, 0.05)
            .unwrap()
            .with_variance_norm(0.1)
            .unwrap();
        let r = matrix_bennett_bernstein(&req).unwrap();
        assert!((r.terms.bounded - 0.013_647_815_207_407_002).abs() < 1e-12);
        assert!((r.terms.variance - 0.090_491_375_967_239_01).abs() < 1e-12);
        assert!((r.radius - 0.104_139_191_174_646_01).abs() < 1e-12);
    }

    #[test]
    fn matrix_bb_d1_reduces_to_scalar() {
        for &(n, alpha, sigma2) in &[(10usize, 0.1, 0.3), (500, 0.01, 0.02), (97, 0.2, 0.0)] {
            let scalar = scalar_bennett_bernstein(n, alpha, 1.0, sigma2).unwrap();
            let req = BoundRequest::new(n, 1, alpha)
                .unwrap()
                .with_variance_norm(sigma2)
                .unwrap();
            let matrix = matrix_bennett_bernstein(&req).unwrap();
            assert_eq!(scalar.radius, matrix.radius);
        }
    }

    #[test]
    fn matrix_bb_requires_variance() {
        let req = BoundRequest::new(10, 3, 0.05).unwrap();
        assert!(matches!(
            matrix_bennett_bernstein(&req).unwrap_err(),
            BoundError::Param(_)
        ));
    }

    #[test]
    fn meb1_zero_variance_drops_middle_term() {
        let s = unit_sample(vec![SymMat::scaled_identity(3, 0.5); 8]);
        let r = meb1_radius(&s, 0.05).unwrap();
        assert_eq!(r.n_used, 8);
        assert!(r.terms.variance.abs() < 1e-12);
        assert!(r.terms.bounded > 0.0 && r.terms.correction > 0.0);
        assert!((r.radius - (r.terms.bounded + r.terms.correction)).abs() < 1e-15);
    }

    #[test]
    fn meb1_rejects_tiny_samples() {
        let s = unit_sample(vec![SymMat::identity(3)]);
        assert!(meb1_radius(&s, 0.05).is_err());
    }

    #[test]
    fn meb1c_handles_zero_variance() {
        let s = unit_sample(vec![SymMat::scaled_identity(3, 0.5); 8]);
        let r = meb1c_radius(&s, 0.05).unwrap();
        assert!(r.radius.is_finite());
        assert!(r.terms.variance.abs() < 1e-7);
        // Fourth-root branch selected.
        let n = 8.0_f64;
        let log2 = (2.0 * n * 3.0 / 0.05_f64).ln();
        let expect = (2.0 * log2 / n).powf(0.25) * (2.0 * (n * 3.0 / (7.0 * 0.05)).ln() / n).sqrt();
        assert!((r.terms.correction - expect).abs() < 1e-9);
    }

    #[test]
    fn minsker_effective_dimension() {
        // Rank-one V: tr(V) = ‖V‖ so d' = 14.
        let req = BoundRequest::new(100, 3, 0.05)
            .unwrap()
            .with_variance_norm(0.2)
            .unwrap()
            .with_trace_v(0.2)
            .unwrap();
        let r = minsker_radius(&req).unwrap();
        let log_term = (14.0 / 0.05_f64).ln();
        let want = (log_term + (log_term * log_term + 1800.0 * log_term * 0.2).sqrt()) / 300.0;
        assert!((r.radius - want).abs() < 1e-12);
    }

    #[test]
    fn minsker_frozen_value() {
        // V = 0.1·I with d = 3: ‖V‖ = 0.1, tr V = 0.3, d' = 42.
        let req = BoundRequest::new(100, 3, 0.05)
            .unwrap()
            .with_variance_norm(0.1)
            .unwrap()
            .with_trace_v(0.3)
            .unwrap();
        let r = minsker_radius(&req).unwrap();
        assert!((r.radius - 0.140_641_826_612_505_65).abs() < 1e-12);
        assert!(r.radius > 0.0);
    }

    #[test]
    fn minsker_rejects_impossible_trace() {
        let req = BoundRequest::new(100, 3, 0.05)
            .unwrap()
            .with_variance_norm(0.2)
            .unwrap()
            .with_trace_v(0.1)
            .unwrap();
        assert!(matches!(minsker_radius(&req).unwrap_err(), BoundError::Param(_)));
    }

    #[test]
    fn hoeffding_frozen_value_and_scaling() {
        let r = matrix_hoeffding_radius(100, 1, 0.05, 0.25).unwrap();
        assert!((r.radius - 0.122_387_341_534_040_82).abs() < 1e-12);

        let r4 = matrix_hoeffding_radius(400, 1, 0.05, 0.25).unwrap();
        assert!((r4.radius - r.radius / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hoeffding_dominates_bb_variance_term() {
        // Whenever ‖V‖ ≤ ‖B‖ the Hoeffding radius is at least the oracle
        // Bernstein variance term.
        for &n in &[50usize, 200, 1000] {
            for &v in &[0.01, 0.1, 0.24] {
                let hoeff = matrix_hoeffding_radius(n, 3, 0.05, 0.25).unwrap();
                let req = BoundRequest::new(n, 3, 0.05)
                    .unwrap()
                    .with_variance_norm(v)
                    .unwrap();
                let bb = matrix_bennett_bernstein(&req).unwrap();
                assert!(hoeff.radius >= bb.terms.variance);
            }
        }
    }

    #[test]
    fn mp_zero_variance() {
        let r = maurer_pontil_radius(100, 0.05, 0.0).unwrap();
        let want = 7.0 * (40.0_f64).ln() / (3.0 * 99.0);
        assert!((r.radius - want).abs() < 1e-15);
    }

    #[test]
    fn mp_and_sharp_mp_reject_n1() {
        assert!(matches!(
            maurer_pontil_radius(1, 0.05, 0.1).unwrap_err(),
            BoundError::SampleTooSmall { .. }
        ));
        assert!(matches!(
            sharp_mp_radius(1, 0.05, 0.1).unwrap_err(),
            BoundError::SampleTooSmall { .. }
        ));
    }

    #[test]
    fn radii_decrease_in_n_increase_as_alpha_shrinks() {
        let sigma2 = 0.08;
        let n_grid = [10usize, 100, 1000, 10_000];
        let alpha_grid = [0.2, 0.1, 0.05, 0.01];
        // Each entry: radius as a function of (n, alpha) with data stats
        // held fixed.
        type RadiusFn = Box<dyn Fn(usize, f64) -> f64>;
        let evaluators: Vec<(&str, RadiusFn)> = vec![
            ("tb", Box::new(|n, a| {
                let req = BoundRequest::new(n, 3, a)
                    .unwrap()
                    .with_variance_norm(0.1)
                    .unwrap();
                matrix_bennett_bernstein(&req).unwrap().radius
            })),
            ("mb", Box::new(|n, a| {
                let req = BoundRequest::new(n, 3, a)
                    .unwrap()
                    .with_variance_norm(0.1)
                    .unwrap()
                    .with_trace_v(0.3)
                    .unwrap();
                minsker_radius(&req).unwrap().radius
            })),
            ("hoeffding", Box::new(|n, a| {
                matrix_hoeffding_radius(n, 3, a, 0.25).unwrap().radius
            })),
            ("meb1", Box::new(move |n, a| {
                meb1_radius_from_stats(n, 3, a, sigma2).unwrap().radius
            })),
            ("meb1c", Box::new(move |n, a| {
                meb1c_radius_from_stats(n, 3, a, sigma2).unwrap().radius
            })),
            ("mp", Box::new(move |n, a| {
                maurer_pontil_radius(n, a, sigma2).unwrap().radius
            })),
            ("sharp-mp", Box::new(move |n, a| {
                sharp_mp_radius(n, a, sigma2).unwrap().radius
            })),
        ];
        for (name, eval) in &evaluators {
            let mut prev = f64::INFINITY;
            for &n in &n_grid {
                let r = eval(n, 0.05);
                assert!(r < prev, "{name} radius not decreasing in n");
                prev = r;
            }
            let mut prev = 0.0;
            for &alpha in &alpha_grid {
                let r = eval(200, alpha);
                assert!(r > prev, "{name} radius not increasing as alpha shrinks");
                prev = r;
            }
        }
    }

    #[test]
    fn terms_always_sum_to_radius() {
        let s = unit_sample(
            (0..10)
                .map(|i| SymMat::from_diag(&[0.1 * i as f64, 0.05 * i as f64, 0.3]))
                .collect(),
        );
        let req = BoundRequest::new(10, 3, 0.05)
            .unwrap()
            .with_variance_norm(0.07)
            .unwrap()
            .with_trace_v(0.2)
            .unwrap();
        let results = vec![
            matrix_bennett_bernstein(&req).unwrap(),
            meb1_radius(&s, 0.05).unwrap(),
            meb1c_radius(&s, 0.05).unwrap(),
            minsker_radius(&req).unwrap(),
            matrix_hoeffding_radius(10, 3, 0.05, 1.0).unwrap(),
            maurer_pontil_radius(10, 0.05, 0.07).unwrap(),
            sharp_mp_radius(10, 0.05, 0.07).unwrap(),
        ];
        for r in results {
            let sum = r.terms.bounded + r.terms.variance + r.terms.correction;
            assert!((r.radius - sum).abs() < 1e-12);
            assert!(r.radius >= 0.0);
        }
    }

    #[test]
    fn two_sided_halves_alpha() {
        let one = maurer_pontil_radius(100, 0.025, 0.08).unwrap();
        let two = two_sided(0.05, |a| maurer_pontil_radius(100, a, 0.08)).unwrap();
        assert_eq!(one.radius, two.radius);
        assert_eq!(two.side, Side::TwoSided);
    }

    #[test]
    fn invalid_alpha_rejected_everywhere() {
        assert!(BoundRequest::new(10, 3, 1.5).is_err());
        assert!(BoundRequest::new(10, 3, 0.0).is_err());
        assert!(scalar_bennett_bernstein(10, -0.1, 1.0, 0.1).is_err());
        assert!(matrix_hoeffding_radius(10, 3, 1.0, 0.5).is_err());
    }
}
