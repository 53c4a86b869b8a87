//! Dense symmetric-matrix kernel.
//!
//! Everything downstream (variance estimators, deviation bounds, the
//! supermartingale monitor) runs on small dense symmetric matrices, so this
//! module keeps the whole spectral toolbox self-contained: validated
//! construction, a cyclic Jacobi eigensolver, spectral functions lifted from
//! scalar functions, Loewner-order comparison, and a log-safe `tr exp`.
//!
//! All values are immutable after construction and safe to share across
//! threads.

use thiserror::Error;

/// Relative symmetrization tolerance used by [`SymMat::from_dense_auto`].
pub const DEFAULT_SYM_ATOL_REL: f64 = 1e-9;

/// Off-diagonal Frobenius mass threshold, relative to the input norm, at
/// which the Jacobi sweep stops.
const JACOBI_REL_TOL: f64 = 1e-12;

/// Sweep budget for the Jacobi eigensolver.
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error)]
pub enum SymMatError {
    #[error("matrix data has {len} entries, expected {dim}x{dim}")]
    BadShape { len: usize, dim: usize },
    #[error("asymmetry {skew:e} at ({i},{j}) exceeds tolerance {atol:e}")]
    Asymmetry {
        i: usize,
        j: usize,
        skew: f64,
        atol: f64,
    },
    #[error("non-finite entry {value} at ({i},{j})")]
    NonFinite { i: usize, j: usize, value: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    Convergence { sweeps: usize },
    #[error("eigenvalue {value} is outside the domain of {func}")]
    Domain { func: &'static str, value: f64 },
}

/// A d×d real symmetric matrix, stored row-major and exactly symmetric
/// (`entries[i*d+j] == entries[j*d+i]` bit-for-bit after construction).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMat {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &v) in diag.iter().enumerate() {
            m.entries[i * dim + i] = v;
        }
        m
    }

    /// Builds a symmetric matrix from raw row-major data, symmetrizing via
    /// `(raw + rawᵀ)/2`. Rejects skew larger than `atol` and non-finite
    /// entries.
    pub fn from_dense(dim: usize, data: &[f64], atol: f64) -> Result<Self, SymMatError> {
        if data.len() != dim * dim || dim == 0 {
            return Err(SymMatError::BadShape {
                len: data.len(),
                dim,
            });
        }
        for i in 0..dim {
            for j in 0..dim {
                let v = data[i * dim + j];
                if !v.is_finite() {
                    return Err(SymMatError::NonFinite { i, j, value: v });
                }
            }
        }
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                let skew = (a - b).abs();
                if skew > atol {
                    return Err(SymMatError::Asymmetry { i, j, skew, atol });
                }
                let v = 0.5 * (a + b);
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        Ok(Self { dim, entries })
    }

    /// [`SymMat::from_dense`] with tolerance `1e-9 · max|entry|`, which
    /// absorbs round-off accumulated by streaming sums.
    pub fn from_dense_auto(dim: usize, data: &[f64]) -> Result<Self, SymMatError> {
        let scale = data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Self::from_dense(dim, data, DEFAULT_SYM_ATOL_REL * scale)
    }

    /// Rank-one matrix `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = v[i] * v[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    fn assert_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "symmetric matrix dimensions must agree"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_dim(other);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_dim(other);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let entries = self.entries.iter().map(|a| a * c).collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    /// In-place `self += c · other`; the workhorse of the streaming updates.
    pub fn add_scaled_in_place(&mut self, c: f64, other: &Self) {
        self.assert_same_dim(other);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    /// `A²`, which is symmetric whenever `A` is.
    pub fn square(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += self.entries[i * d + k] * self.entries[k * d + j];
                }
                entries[i * d + j] = acc;
                entries[j * d + i] = acc;
            }
        }
        Self { dim: d, entries }
    }

    /// Full eigendecomposition via cyclic Jacobi rotations. Eigenvalues come
    /// back ascending with deterministically signed eigenvectors, so equal
    /// inputs give bit-equal outputs.
    pub fn eig(&self) -> Result<SpectralDecomp, SymMatError> {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut v = vec![0.0; d * d];
        for i in 0..d {
            v[i * d + i] = 1.0;
        }
        let input_norm = self.frobenius_norm();
        let threshold = JACOBI_REL_TOL * input_norm;

        let off_mass = |a: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        s += a[i * d + j] * a[i * d + j];
                    }
                }
            }
            s.sqrt()
        };

        let mut converged = off_mass(&a) <= threshold;
        if !converged {
            for _sweep in 0..JACOBI_MAX_SWEEPS {
                for p in 0..d - 1 {
                    for q in p + 1..d {
                        let apq = a[p * d + q];
                        if apq == 0.0 {
                            continue;
                        }
                        let app = a[p * d + p];
                        let aqq = a[q * d + q];
                        let theta = (aqq - app) / (2.0 * apq);
                        // Stable tan of the smaller rotation angle.
                        let t = if theta >= 0.0 {
                            1.0 / (theta + (1.0 + theta * theta).sqrt())
                        } else {
                            -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                        };
                        let c = 1.0 / (1.0 + t * t).sqrt();
                        let s = t * c;

                        a[p * d + p] = app - t * apq;
                        a[q * d + q] = aqq + t * apq;
                        a[p * d + q] = 0.0;
                        a[q * d + p] = 0.0;
                        for k in 0..d {
                            if k != p && k != q {
                                let akp = a[k * d + p];
                                let akq = a[k * d + q];
                                let new_kp = c * akp - s * akq;
                                let new_kq = s * akp + c * akq;
                                a[k * d + p] = new_kp;
                                a[p * d + k] = new_kp;
                                a[k * d + q] = new_kq;
                                a[q * d + k] = new_kq;
                            }
                        }
                        for k in 0..d {
                            let vkp = v[k * d + p];
                            let vkq = v[k * d + q];
                            v[k * d + p] = c * vkp - s * vkq;
                            v[k * d + q] = s * vkp + c * vkq;
                        }
                    }
                }
                if off_mass(&a) <= threshold {
                    converged = true;
                    break;
                }
            }
        }
        if !converged {
            return Err(SymMatError::Convergence {
                sweeps: JACOBI_MAX_SWEEPS,
            });
        }

        let mut eigenvalues: Vec<f64> = (0..d).map(|i| a[i * d + i]).collect();
        let mut vectors: Vec<Vec<f64>> = (0..d)
            .map(|j| (0..d).map(|i| v[i * d + j]).collect())
            .collect();
        // Sign convention: first component of magnitude > 1e-12 is positive.
        for col in vectors.iter_mut() {
            if let Some(&lead) = col.iter().find(|x| x.abs() > 1e-12) {
                if lead < 0.0 {
                    for x in col.iter_mut() {
                        *x = -*x;
                    }
                }
            }
        }
        // Ascending eigenvalues; exact ties ordered by eigenvector
        // lexicographic comparison for determinism.
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&i, &j| {
            eigenvalues[i].total_cmp(&eigenvalues[j]).then_with(|| {
                for (a, b) in vectors[i].iter().zip(&vectors[j]) {
                    let c = a.total_cmp(b);
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        let sorted_values: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let mut sorted_vectors = vec![0.0; d * d];
        for (new_j, &old_j) in order.iter().enumerate() {
            for i in 0..d {
                sorted_vectors[i * d + new_j] = vectors[old_j][i];
            }
        }
        eigenvalues = sorted_values;

        Ok(SpectralDecomp {
            dim: d,
            eigenvalues,
            eigenvectors: sorted_vectors,
        })
    }

    pub fn lambda_max(&self) -> Result<f64, SymMatError> {
        Ok(*self
            .eig()?
            .eigenvalues
            .last()
            .expect("dimension is positive"))
    }

    pub fn lambda_min(&self) -> Result<f64, SymMatError> {
        Ok(self.eig()?.eigenvalues[0])
    }

    /// Spectral norm: the largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> Result<f64, SymMatError> {
        let eig = self.eig()?;
        let lo = eig.eigenvalues[0];
        let hi = eig.eigenvalues[self.dim - 1];
        Ok(lo.abs().max(hi.abs()))
    }

    /// Loewner comparison `self ⪯ other`, i.e. `λ_min(other − self) ≥ −tol`.
    pub fn loewner_leq(&self, other: &Self, tol: f64) -> Result<bool, SymMatError> {
        if self.dim != other.dim {
            return Err(SymMatError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(other.sub(self).lambda_min()? >= -tol)
    }

    /// Lifts a scalar function through the eigendecomposition:
    /// `U diag(f(λ)) Uᵀ`. A non-finite `f(λ)` is reported as a domain error.
    pub fn spectral_fn<F>(&self, name: &'static str, f: F) -> Result<Self, SymMatError>
    where
        F: Fn(f64) -> f64,
    {
        let decomp = self.eig()?;
        let mut mapped = Vec::with_capacity(self.dim);
        for &lam in &decomp.eigenvalues {
            let y = f(lam);
            if !y.is_finite() {
                return Err(SymMatError::Domain {
                    func: name,
                    value: lam,
                });
            }
            mapped.push(y);
        }
        Ok(decomp.assemble(&mapped))
    }

    pub fn matrix_exp(&self) -> Result<Self, SymMatError> {
        self.spectral_fn("exp", f64::exp)
    }

    /// Matrix logarithm; requires a positive definite input.
    pub fn matrix_log(&self) -> Result<Self, SymMatError> {
        let decomp = self.eig()?;
        if decomp.eigenvalues[0] <= 0.0 {
            return Err(SymMatError::Domain {
                func: "log",
                value: decomp.eigenvalues[0],
            });
        }
        let mapped: Vec<f64> = decomp.eigenvalues.iter().map(|&l| l.ln()).collect();
        Ok(decomp.assemble(&mapped))
    }

    /// `tr exp(A) = Σ exp(λᵢ)`, evaluated as `exp(λ_max) Σ exp(λᵢ − λ_max)`.
    /// Returns `+∞` once `λ_max` exceeds the representable exponent range.
    pub fn trace_exp(&self) -> Result<f64, SymMatError> {
        let decomp = self.eig()?;
        let lam_max = decomp.eigenvalues[self.dim - 1];
        let shifted: f64 = decomp.eigenvalues.iter().map(|&l| (l - lam_max).exp()).sum();
        Ok(lam_max.exp() * shifted)
    }

    /// `log tr exp(A)`, finite even when `tr exp(A)` overflows. This is what
    /// the sequential test compares against `log(d/α)`.
    pub fn log_trace_exp(&self) -> Result<f64, SymMatError> {
        let decomp = self.eig()?;
        let lam_max = decomp.eigenvalues[self.dim - 1];
        let shifted: f64 = decomp.eigenvalues.iter().map(|&l| (l - lam_max).exp()).sum();
        Ok(lam_max + shifted.ln())
    }
}

/// Eigendecomposition of a [`SymMat`]: ascending eigenvalues and the matching
/// orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    dim: usize,
    eigenvalues: Vec<f64>,
    /// Row-major d×d; column j is the eigenvector of `eigenvalues[j]`.
    eigenvectors: Vec<f64>,
}

impl SpectralDecomp {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.eigenvectors[i * self.dim + j])
            .collect()
    }

    /// `U diag(values) Uᵀ` for caller-supplied spectrum values.
    pub fn assemble(&self, values: &[f64]) -> SymMat {
        assert_eq!(values.len(), self.dim);
        let d = self.dim;
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for j in i..d {
                let mut acc = 0.0;
                for (k, &val) in values.iter().enumerate() {
                    acc += val * self.eigenvectors[i * d + k] * self.eigenvectors[j * d + k];
                }
                entries[i * d + j] = acc;
                entries[j * d + i] = acc;
            }
        }
        SymMat { dim: d, entries }
    }

    /// `‖U diag(λ) Uᵀ − A‖_F`, for checking the reconstruction invariant.
    pub fn reconstruction_error(&self, original: &SymMat) -> f64 {
        self.assemble(&self.eigenvalues).sub(original).frobenius_norm()
    }

    /// `‖UᵀU − I‖_F`, for checking orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        let d = self.dim;
        let mut defect = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut dot = 0.0;
                for i in 0..d {
                    dot += self.eigenvectors[i * d + a] * self.eigenvectors[i * d + b];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                defect += (dot - target) * (dot - target);
            }
        }
        defect.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

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

    fn random_psd(rng: &mut impl Rng, d: usize, scale: f64) -> SymMat {
        random_sym(rng, d, scale).square()
    }

    #[test]
    fn from_dense_accepts_symmetric_input() {
        let id = SymMat::from_dense(3, &[1., 0., 0., 0., 1., 0., 0., 0., 1.], 1e-9).unwrap();
        assert_eq!(id, SymMat::identity(3));
    }

    #[test]
    fn from_dense_symmetrizes_negligible_skew() {
        let m = SymMat::from_dense(2, &[1.0, 2.0 + 1e-12, 2.0, 1.0], 1e-9).unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0));
        assert!((m.get(0, 1) - 2.0).abs() < 1e-11);
    }

    #[test]
    fn from_dense_rejects_dominant_skew() {
        let err = SymMat::from_dense(2, &[0.0, 1.0, 0.0, 0.0], 1e-9).unwrap_err();
        assert!(matches!(err, SymMatError::Asymmetry { .. }));
    }

    #[test]
    fn from_dense_rejects_non_finite() {
        let err = SymMat::from_dense(2, &[0.0, f64::NAN, f64::NAN, 0.0], 1e-9).unwrap_err();
        assert!(matches!(err, SymMatError::NonFinite { .. }));
    }

    #[test]
    fn eig_diagonal_sorts_ascending() {
        let m = SymMat::from_diag(&[3.0, 1.0, 2.0]);
        let e = m.eig().unwrap();
        assert_eq!(e.eigenvalues(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn eig_exchange_matrix() {
        let m = SymMat::from_dense(2, &[0.0, 1.0, 1.0, 0.0], 0.0).unwrap();
        let e = m.eig().unwrap();
        assert!((e.eigenvalues()[0] + 1.0).abs() < 1e-12);
        assert!((e.eigenvalues()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_reconstruction_thousand_seeds() {
        for &d in &[1usize, 2, 3, 5, 10] {
            for seed in 0..1000u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed * 17 + d as u64);
                let m = random_sym(&mut rng, d, 3.0);
                let e = m.eig().unwrap();
                let tol = 1e-10 * (1.0 + m.frobenius_norm());
                assert!(
                    e.reconstruction_error(&m) <= tol,
                    "reconstruction failed at d={d} seed={seed}"
                );
                assert!(e.orthonormality_defect() <= 1e-10);
            }
        }
    }

    #[test]
    fn eig_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_sym(&mut rng, 4, 1.0);
        let a = m.eig().unwrap();
        let b = m.eig().unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn lambda_extremes() {
        let id = SymMat::identity(3);
        assert_eq!(id.lambda_max().unwrap(), 1.0);
        assert_eq!(id.lambda_min().unwrap(), 1.0);
        assert_eq!(id.spectral_norm().unwrap(), 1.0);

        let m = SymMat::from_diag(&[-2.0, 1.0]);
        assert_eq!(m.lambda_max().unwrap(), 1.0);
        assert_eq!(m.lambda_min().unwrap(), -2.0);
        assert_eq!(m.spectral_norm().unwrap(), 2.0);
    }

    #[test]
    fn spectral_norm_equals_lambda_max_on_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = random_psd(&mut rng, 4, 1.0);
            let norm = p.spectral_norm().unwrap();
            let lmax = p.lambda_max().unwrap();
            assert!((norm - lmax).abs() <= 1e-12 * (1.0 + lmax.abs()));
        }
    }

    #[test]
    fn loewner_comparisons() {
        let zero = SymMat::zeros(3);
        let id = SymMat::identity(3);
        assert!(zero.loewner_leq(&id, 0.0).unwrap());
        assert!(!id.loewner_leq(&zero, 0.0).unwrap());
        let err = zero.loewner_leq(&SymMat::identity(2), 0.0).unwrap_err();
        assert!(matches!(err, SymMatError::DimMismatch { .. }));
    }

    #[test]
    fn spectral_fn_identity_and_exp_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = random_sym(&mut rng, 3, 2.0);
        let same = m.spectral_fn("id", |x| x).unwrap();
        assert!(same.sub(&m).frobenius_norm() <= 1e-10 * (1.0 + m.frobenius_norm()));

        let z = SymMat::zeros(3);
        let e = z.matrix_exp().unwrap();
        assert!(e.sub(&SymMat::identity(3)).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn exp_log_roundtrip_on_pd() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let p = random_psd(&mut rng, 3, 1.0).add(&SymMat::scaled_identity(3, 0.1));
            let back = p.matrix_exp().unwrap().matrix_log().unwrap();
            assert!(back.sub(&p).frobenius_norm() <= 1e-8 * (1.0 + p.frobenius_norm()));
        }
    }

    #[test]
    fn log_of_non_pd_is_domain_error() {
        let m = SymMat::from_diag(&[1.0, -0.5]);
        assert!(matches!(
            m.matrix_log().unwrap_err(),
            SymMatError::Domain { func: "log", .. }
        ));
    }

    #[test]
    fn trace_exp_values() {
        let z = SymMat::zeros(3);
        assert!((z.trace_exp().unwrap() - 3.0).abs() < 1e-12);

        let m = SymMat::from_diag(&[2.0_f64.ln(), 3.0_f64.ln()]);
        assert!((m.trace_exp().unwrap() - 5.0).abs() < 1e-12);
        assert!((m.log_trace_exp().unwrap() - 5.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn trace_exp_overflow_policy() {
        let m = SymMat::from_diag(&[800.0, 0.0]);
        assert!(m.trace_exp().unwrap().is_infinite());
        // The log form stays finite and usable.
        let log_form = m.log_trace_exp().unwrap();
        assert!((log_form - 800.0).abs() < 1e-9);
    }

    #[test]
    fn trace_exp_matches_eigenvalue_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let m = random_sym(&mut rng, 4, 2.0);
            let via_eig: f64 = m
                .eig()
                .unwrap()
                .eigenvalues()
                .iter()
                .map(|l| l.exp())
                .sum();
            let got = m.trace_exp().unwrap();
            assert!((got - via_eig).abs() <= 1e-8 * via_eig);
        }
    }

    #[test]
    fn lambda_max_subadditive() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let a = random_sym(&mut rng, 3, 1.5);
            let b = random_sym(&mut rng, 3, 1.5);
            let lhs = a.add(&b).lambda_max().unwrap();
            let rhs = a.lambda_max().unwrap() + b.lambda_max().unwrap();
            assert!(lhs <= rhs + 1e-10);
        }
    }

    #[test]
    fn monotone_trace_transfer() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let a = random_sym(&mut rng, 3, 1.0);
            let b = a.add(&random_psd(&mut rng, 3, 0.7));
            for (name, f) in [
                ("exp", f64::exp as fn(f64) -> f64),
                ("cube", |x: f64| x * x * x),
            ] {
                let ta = a.spectral_fn(name, f).unwrap().trace();
                let tb = b.spectral_fn(name, f).unwrap().trace();
                assert!(ta <= tb + 1e-10, "tr {name} not monotone: {ta} > {tb}");
            }
        }
    }

    #[test]
    fn difference_of_squares_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..200 {
            let a = random_sym(&mut rng, 3, 1.2);
            let b = random_sym(&mut rng, 3, 1.2);
            let lhs = a.square().sub(&b.square()).spectral_norm().unwrap();
            let nb = b.spectral_norm().unwrap();
            let diff = a.sub(&b).spectral_norm().unwrap();
            assert!(lhs <= 2.0 * nb * diff + diff * diff + 1e-10);
        }
    }
}
