//! Sample statistics consumed by the deviation bounds: plain and weighted
//! means, the paired variance estimator, the classical Bessel-corrected
//! variance, and an incremental variance proxy for streaming use.

use serde::Serialize;
use thiserror::Error;

use crate::symmat::{SymMat, SymMatError};

/// Tolerance for validating declared eigenvalue ranges on ingestion.
/// Violations beyond this are errors, never clamped: the bounds are simply
/// invalid outside the declared interval.
pub const RANGE_ATOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("sample must contain at least {needed} matrices, found {have}")]
    TooFew { needed: usize, have: usize },
    #[error("matrix {index} has dimension {got}, expected {expected}")]
    MixedDims {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error(
        "matrix {index} has eigenvalue {eigenvalue} outside the declared interval [{lo}, {hi}]"
    )]
    OutOfRange {
        index: usize,
        eigenvalue: f64,
        lo: f64,
        hi: f64,
    },
    #[error("weights must be positive and match the sample length: {reason}")]
    Weight { reason: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("declared interval [{lo}, {hi}] is empty")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error(transparent)]
    Matrix(#[from] SymMatError),
}

/// An ordered sample of symmetric matrices with a declared eigenvalue
/// interval, validated on ingestion.
#[derive(Debug, Clone)]
pub struct MatrixSample {
    dim: usize,
    items: Vec<SymMat>,
    interval: (f64, f64),
}

impl MatrixSample {
    /// Validates dimensions and the eigenvalue range `[lo−1e-9, hi+1e-9]`
    /// for every item.
    pub fn new(items: Vec<SymMat>, interval: (f64, f64)) -> Result<Self, EstimatorError> {
        let (lo, hi) = interval;
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(EstimatorError::EmptyInterval { lo, hi });
        }
        let Some(first) = items.first() else {
            return Err(EstimatorError::TooFew { needed: 1, have: 0 });
        };
        let dim = first.dim();
        for (index, m) in items.iter().enumerate() {
            if m.dim() != dim {
                return Err(EstimatorError::MixedDims {
                    index,
                    got: m.dim(),
                    expected: dim,
                });
            }
            let eig = m.eig()?;
            let min = eig.eigenvalues()[0];
            let max = eig.eigenvalues()[dim - 1];
            if min < lo - RANGE_ATOL || max > hi + RANGE_ATOL {
                let eigenvalue = if min < lo - RANGE_ATOL { min } else { max };
                return Err(EstimatorError::OutOfRange {
                    index,
                    eigenvalue,
                    lo,
                    hi,
                });
            }
        }
        Ok(Self {
            dim,
            items,
            interval,
        })
    }

    /// Sample with the default `[0, 1]` eigenvalue interval.
    pub fn unit_interval(items: Vec<SymMat>) -> Result<Self, EstimatorError> {
        Self::new(items, (0.0, 1.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[SymMat] {
        &self.items
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }
}

/// A variance estimate plus the number of observations that actually entered
/// it (the paired estimator drops the last observation when n is odd).
#[derive(Debug, Clone)]
pub struct VarianceEstimate {
    pub matrix: SymMat,
    pub n_used: usize,
}

/// JSON summary of an estimator output, as emitted by the CLI.
#[derive(Debug, Serialize)]
pub struct EstimateSummary {
    pub estimator: &'static str,
    pub n_used: usize,
    pub spectral_norm: f64,
}

/// Plain sample average `n⁻¹ Σ Xᵢ`.
pub fn sample_mean(sample: &MatrixSample) -> SymMat {
    let mut acc = SymMat::zeros(sample.dim());
    for m in sample.items() {
        acc.add_scaled_in_place(1.0, m);
    }
    acc.scale(1.0 / sample.len() as f64)
}

/// Weighted average `(Σ wᵢXᵢ)/(Σ wᵢ)` for strictly positive weights.
pub fn weighted_mean(sample: &MatrixSample, weights: &[f64]) -> Result<SymMat, EstimatorError> {
    if weights.len() != sample.len() {
        return Err(EstimatorError::Weight {
            reason: format!("{} weights for {} matrices", weights.len(), sample.len()),
        });
    }
    let mut total = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(EstimatorError::Weight {
                reason: format!("weight {w} at index {i}"),
            });
        }
        total += w;
    }
    let mut acc = SymMat::zeros(sample.dim());
    for (m, &w) in sample.items().iter().zip(weights) {
        acc.add_scaled_in_place(w, m);
    }
    Ok(acc.scale(1.0 / total))
}

/// Paired variance estimator
/// `m⁻¹ Σ_{j=1..m/2} (X_{2j−1} − X_{2j})²`, with `m = n` for even n and
/// `m = n − 1` otherwise (the trailing observation is dropped; `n_used`
/// records how many entered). PSD by construction.
pub fn paired_variance(sample: &MatrixSample) -> Result<VarianceEstimate, EstimatorError> {
    let n = sample.len();
    if n < 2 {
        return Err(EstimatorError::TooFew { needed: 2, have: n });
    }
    let m = if n.is_multiple_of(2) { n } else { n - 1 };
    let mut acc = SymMat::zeros(sample.dim());
    let items = sample.items();
    for j in 0..m / 2 {
        let diff = items[2 * j].sub(&items[2 * j + 1]);
        acc.add_scaled_in_place(1.0, &diff.square());
    }
    Ok(VarianceEstimate {
        matrix: acc.scale(1.0 / m as f64),
        n_used: m,
    })
}

/// Bessel-corrected sample variance `(n−1)⁻¹ Σ (Xᵢ − X̄)²`, computed through
/// the O(n) identity `Σ_{i<j}(Xᵢ−Xⱼ)² = n ΣXᵢ² − (ΣXᵢ)²`, which for
/// symmetric matrices equals the pairwise U-statistic
/// `(n(n−1))⁻¹ Σ_{i<j} (Xᵢ − Xⱼ)²`.
pub fn bessel_variance(sample: &MatrixSample) -> Result<VarianceEstimate, EstimatorError> {
    let n = sample.len();
    if n < 2 {
        return Err(EstimatorError::TooFew { needed: 2, have: n });
    }
    let mut sum = SymMat::zeros(sample.dim());
    let mut sum_sq = SymMat::zeros(sample.dim());
    for m in sample.items() {
        sum.add_scaled_in_place(1.0, m);
        sum_sq.add_scaled_in_place(1.0, &m.square());
    }
    let nf = n as f64;
    let numer = sum_sq.scale(nf).sub(&sum.square());
    Ok(VarianceEstimate {
        matrix: numer.scale(1.0 / (nf * (nf - 1.0))),
        n_used: n,
    })
}

/// Streaming variance proxy: running mean, running second moment, and
/// `v̄_k = max(‖V̄_k‖, floor)` where `V̄_k = k⁻¹ΣXᵢ² − X̄_k²` (the second
/// moments rather than centered sums are stored so the algebra is exact at
/// every k). At k = 0 the proxy is `max(‖I/4‖, floor)`.
#[derive(Debug, Clone)]
pub struct RunningProxy {
    count: usize,
    mean: SymMat,
    second_moment: SymMat,
    vbar: f64,
    floor: f64,
}

impl RunningProxy {
    /// Fresh proxy with an explicit floor.
    pub fn new(dim: usize, floor: f64) -> Self {
        Self {
            count: 0,
            mean: SymMat::zeros(dim),
            second_moment: SymMat::zeros(dim),
            vbar: 0.25_f64.max(floor),
            floor,
        }
    }

    /// Fresh proxy with the fixed-horizon floor `5·log(d/α)/n`.
    pub fn for_horizon(dim: usize, alpha: f64, n: usize) -> Self {
        let floor = 5.0 * (dim as f64 / alpha).ln() / n as f64;
        Self::new(dim, floor)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> &SymMat {
        &self.mean
    }

    pub fn second_moment(&self) -> &SymMat {
        &self.second_moment
    }

    /// Current `V̄_k` as a matrix.
    pub fn variance_matrix(&self) -> SymMat {
        self.second_moment.sub(&self.mean.square())
    }

    pub fn vbar(&self) -> f64 {
        self.vbar
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Absorbs one observation and returns the updated proxy.
    pub fn update(mut self, x: &SymMat) -> Result<Self, EstimatorError> {
        if x.dim() != self.mean.dim() {
            return Err(EstimatorError::DimMismatch {
                left: x.dim(),
                right: self.mean.dim(),
            });
        }
        self.count += 1;
        let k = self.count as f64;
        // mean += (x - mean)/k ; second_moment += (x² - second_moment)/k
        let mean_step = x.sub(&self.mean).scale(1.0 / k);
        self.mean.add_scaled_in_place(1.0, &mean_step);
        let sq_step = x.square().sub(&self.second_moment).scale(1.0 / k);
        self.second_moment.add_scaled_in_place(1.0, &sq_step);
        let vnorm = self.variance_matrix().spectral_norm()?;
        self.vbar = vnorm.max(self.floor);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_unit_sym(rng: &mut impl Rng, d: usize) -> SymMat {
        // Random matrix with eigenvalues in [0,1]: convex mixture of
        // projections onto a random orthogonal frame is overkill here; a
        // diagonal draw conjugated by nothing suffices for estimator tests.
        let diag: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
        SymMat::from_diag(&diag)
    }

    fn random_sym(rng: &mut impl Rng, d: usize, scale: f64) -> SymMat {
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let v = (rng.random::<f64>() * 2.0 - 1.0) * scale;
                data[i * d + j] = v;
                data[j * d + i] = v;
            }
        }
        SymMat::from_dense(d, &data, 0.0).unwrap()
    }

    fn sample_of(items: Vec<SymMat>) -> MatrixSample {
        MatrixSample::unit_interval(items).unwrap()
    }

    #[test]
    fn ingestion_rejects_out_of_range() {
        let err = MatrixSample::unit_interval(vec![SymMat::from_diag(&[0.5, 1.5])]).unwrap_err();
        assert!(matches!(err, EstimatorError::OutOfRange { .. }));
    }

    #[test]
    fn ingestion_tolerates_tiny_overshoot() {
        let items = vec![SymMat::from_diag(&[0.5, 1.0 + 0.5e-9])];
        assert!(MatrixSample::unit_interval(items).is_ok());
    }

    #[test]
    fn ingestion_rejects_empty_and_mixed() {
        assert!(matches!(
            MatrixSample::unit_interval(vec![]).unwrap_err(),
            EstimatorError::TooFew { .. }
        ));
        let err = MatrixSample::unit_interval(vec![SymMat::identity(2), SymMat::identity(3)])
            .unwrap_err();
        assert!(matches!(err, EstimatorError::MixedDims { .. }));
    }

    #[test]
    fn mean_of_constant_sample() {
        let a = SymMat::from_diag(&[0.25, 0.75]);
        let s = sample_of(vec![a.clone(); 5]);
        assert!(sample_mean(&s).sub(&a).frobenius_norm() < 1e-15);
    }

    #[test]
    fn mean_of_zero_and_identity() {
        let s = sample_of(vec![SymMat::zeros(2), SymMat::identity(2)]);
        let want = SymMat::scaled_identity(2, 0.5);
        assert!(sample_mean(&s).sub(&want).frobenius_norm() < 1e-15);
    }

    #[test]
    fn mean_matches_entrywise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let items: Vec<SymMat> = (0..17).map(|_| random_unit_sym(&mut rng, 3)).collect();
        let s = sample_of(items.clone());
        let got = sample_mean(&s);
        for i in 0..3 {
            for j in 0..3 {
                let oracle: f64 =
                    items.iter().map(|m| m.get(i, j)).sum::<f64>() / items.len() as f64;
                assert!((got.get(i, j) - oracle).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weighted_mean_uniform_equals_plain() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = sample_of((0..9).map(|_| random_unit_sym(&mut rng, 2)).collect());
        let w = vec![0.37; 9];
        let got = weighted_mean(&s, &w).unwrap();
        assert!(got.sub(&sample_mean(&s)).frobenius_norm() < 1e-13);
    }

    #[test]
    fn weighted_mean_rejects_bad_weights() {
        let s = sample_of(vec![SymMat::identity(2), SymMat::zeros(2)]);
        assert!(matches!(
            weighted_mean(&s, &[1.0, 0.0]).unwrap_err(),
            EstimatorError::Weight { .. }
        ));
        assert!(matches!(
            weighted_mean(&s, &[1.0]).unwrap_err(),
            EstimatorError::Weight { .. }
        ));
    }

    #[test]
    fn weighted_mean_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let items: Vec<SymMat> = (0..8).map(|_| random_unit_sym(&mut rng, 3)).collect();
        let weights: Vec<f64> = (0..8).map(|_| 0.1 + rng.random::<f64>()).collect();
        let s = sample_of(items.clone());
        let got = weighted_mean(&s, &weights).unwrap();
        let total: f64 = weights.iter().sum();
        for i in 0..3 {
            for j in 0..3 {
                let oracle: f64 = items
                    .iter()
                    .zip(&weights)
                    .map(|(m, w)| w * m.get(i, j))
                    .sum::<f64>()
                    / total;
                assert!((got.get(i, j) - oracle).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn paired_variance_of_constant_sample_is_zero() {
        let s = sample_of(vec![SymMat::scaled_identity(2, 0.5); 6]);
        let v = paired_variance(&s).unwrap();
        assert_eq!(v.n_used, 6);
        assert!(v.matrix.frobenius_norm() < 1e-15);
    }

    #[test]
    fn paired_variance_zero_identity_pair() {
        let s = sample_of(vec![SymMat::zeros(2), SymMat::identity(2)]);
        let v = paired_variance(&s).unwrap();
        let want = SymMat::scaled_identity(2, 0.5);
        assert!(v.matrix.sub(&want).frobenius_norm() < 1e-15);
    }

    #[test]
    fn paired_variance_matches_three_pair_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let items: Vec<SymMat> = (0..6).map(|_| random_unit_sym(&mut rng, 3)).collect();
        let s = sample_of(items.clone());
        let got = paired_variance(&s).unwrap();
        let mut oracle = SymMat::zeros(3);
        for j in 0..3 {
            oracle = oracle.add(&items[2 * j].sub(&items[2 * j + 1]).square());
        }
        let oracle = oracle.scale(1.0 / 6.0);
        assert!(got.matrix.sub(&oracle).frobenius_norm() < 1e-12);
    }

    #[test]
    fn paired_variance_drops_odd_tail() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut items: Vec<SymMat> = (0..6).map(|_| random_unit_sym(&mut rng, 2)).collect();
        let s_even = sample_of(items.clone());
        items.push(random_unit_sym(&mut rng, 2));
        let s_odd = sample_of(items);
        let even = paired_variance(&s_even).unwrap();
        let odd = paired_variance(&s_odd).unwrap();
        assert_eq!(odd.n_used, 6);
        assert!(even.matrix.sub(&odd.matrix).frobenius_norm() < 1e-15);
    }

    #[test]
    fn paired_variance_needs_two() {
        let s = sample_of(vec![SymMat::identity(2)]);
        assert!(matches!(
            paired_variance(&s).unwrap_err(),
            EstimatorError::TooFew { .. }
        ));
    }

    #[test]
    fn bessel_variance_of_two_point_sample() {
        // Pairwise U-statistic oracle at n=2: (1/(2·1))(0 − I)² = I/2.
        let s = sample_of(vec![SymMat::zeros(2), SymMat::identity(2)]);
        let v = bessel_variance(&s).unwrap();
        let want = SymMat::scaled_identity(2, 0.5);
        assert!(v.matrix.sub(&want).frobenius_norm() < 1e-15);
    }

    #[test]
    fn bessel_variance_matches_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = 20;
            let items: Vec<SymMat> = (0..n).map(|_| random_unit_sym(&mut rng, 3)).collect();
            let s = sample_of(items.clone());
            let got = bessel_variance(&s).unwrap();
            let mut oracle = SymMat::zeros(3);
            for i in 0..n {
                for j in i + 1..n {
                    oracle = oracle.add(&items[i].sub(&items[j]).square());
                }
            }
            let oracle = oracle.scale(1.0 / (n as f64 * (n as f64 - 1.0)));
            assert!(got.matrix.sub(&oracle).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn variance_estimators_are_psd_and_unit_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let items: Vec<SymMat> = (0..10).map(|_| random_unit_sym(&mut rng, 3)).collect();
            let s = sample_of(items);
            for est in [paired_variance(&s).unwrap(), bessel_variance(&s).unwrap()] {
                assert!(est.matrix.lambda_min().unwrap() >= -1e-10);
            }
            // Each (Xᵢ−Xⱼ)² ⪯ I for unit-interval samples.
            assert!(paired_variance(&s).unwrap().matrix.spectral_norm().unwrap() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn scale_shift_covariance_of_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let items: Vec<SymMat> = (0..12).map(|_| random_unit_sym(&mut rng, 3)).collect();
        let s = sample_of(items.clone());
        let plain = sample_mean(&s);

        // Affine map with a power-of-two scale is exact in floating point.
        let (a, width) = (0.0, 0.5);
        let mapped: Vec<SymMat> = items
            .iter()
            .map(|m| {
                m.sub(&SymMat::scaled_identity(3, a)).scale(1.0 / width)
            })
            .collect();
        let s2 = MatrixSample::new(mapped, (0.0, 2.0)).unwrap();
        let lhs = sample_mean(&s2);
        let rhs = plain.sub(&SymMat::scaled_identity(3, a)).scale(1.0 / width);
        assert_eq!(lhs, rhs);

        // General shift agrees to rounding error.
        let (a, width) = (0.21, 0.6);
        let mapped: Vec<SymMat> = items
            .iter()
            .map(|m| {
                m.sub(&SymMat::scaled_identity(3, a)).scale(1.0 / width)
            })
            .collect();
        let s3 = MatrixSample::new(mapped, (-1.0, 2.0)).unwrap();
        let lhs = sample_mean(&s3);
        let rhs = plain.sub(&SymMat::scaled_identity(3, a)).scale(1.0 / width);
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-14);
    }

    #[test]
    fn running_proxy_floor_at_start() {
        // 5·log(60)/100 ≈ 0.2047 < 1/4, so the fresh proxy sits at 1/4.
        let p = RunningProxy::for_horizon(3, 0.05, 100);
        assert!((p.floor() - 0.204_717_228_111_105_04).abs() < 1e-12);
        assert_eq!(p.vbar(), 0.25);

        // A tighter horizon pushes the floor above 1/4.
        let p2 = RunningProxy::for_horizon(3, 0.05, 50);
        assert!(p2.floor() > 0.25);
        assert_eq!(p2.vbar(), p2.floor());
    }

    #[test]
    fn running_proxy_constant_stream_hits_floor() {
        let mut p = RunningProxy::for_horizon(3, 0.05, 100);
        let x = SymMat::scaled_identity(3, 0.7);
        for _ in 0..5 {
            p = p.update(&x).unwrap();
        }
        assert!(p.variance_matrix().frobenius_norm() < 1e-12);
        assert_eq!(p.vbar(), p.floor());
    }

    #[test]
    fn running_proxy_matches_batch_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let items: Vec<SymMat> = (0..10).map(|_| random_sym(&mut rng, 3, 0.5)).collect();
        let mut p = RunningProxy::new(3, 0.0);
        for x in &items {
            p = p.update(x).unwrap();
        }
        let k = items.len() as f64;
        let mut mean = SymMat::zeros(3);
        for x in &items {
            mean.add_scaled_in_place(1.0 / k, x);
        }
        let mut batch = SymMat::zeros(3);
        for x in &items {
            batch.add_scaled_in_place(1.0 / k, &x.sub(&mean).square());
        }
        assert!(p.variance_matrix().sub(&batch).frobenius_norm() < 1e-10);
        assert!((p.vbar() - batch.spectral_norm().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn running_proxy_rejects_dim_mismatch() {
        let p = RunningProxy::new(3, 0.0);
        assert!(matches!(
            p.update(&SymMat::identity(2)).unwrap_err(),
            EstimatorError::DimMismatch { .. }
        ));
    }
}
