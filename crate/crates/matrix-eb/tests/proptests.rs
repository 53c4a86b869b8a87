//! Property tests over randomized inputs: spectral kernel invariants, bound
//! decomposition, and record-format round-trips.

use matrix_eb::bounds;
use matrix_eb::estimators::{self, MatrixSample};
use matrix_eb::io as mio;
use matrix_eb::symmat::SymMat;
use proptest::prelude::*;

fn sym_from_upper(d: usize, upper: &[f64]) -> SymMat {
    let mut data = vec![0.0; d * d];
    let mut idx = 0;
    for i in 0..d {
        for j in i..d {
            data[i * d + j] = upper[idx];
            data[j * d + i] = upper[idx];
            idx += 1;
        }
    }
    SymMat::from_dense(d, &data, 0.0).expect("symmetric")
}

fn arb_sym(max_dim: usize) -> impl Strategy<Value = SymMat> {
    (1..=max_dim).prop_flat_map(|d| {
        let len = d * (d + 1) / 2;
        proptest::collection::vec(-3.0f64..3.0, len)
            .prop_map(move |upper| sym_from_upper(d, &upper))
    })
}

fn arb_sym_pair(max_dim: usize) -> impl Strategy<Value = (SymMat, SymMat)> {
    (1..=max_dim).prop_flat_map(|d| {
        let len = d * (d + 1) / 2;
        (
            proptest::collection::vec(-3.0f64..3.0, len),
            proptest::collection::vec(-3.0f64..3.0, len),
        )
            .prop_map(move |(a, b)| (sym_from_upper(d, &a), sym_from_upper(d, &b)))
    })
}

proptest! {
    #[test]
    fn eig_reconstructs_and_is_orthonormal(m in arb_sym(6)) {
        let e = m.eig().unwrap();
        let tol = 1e-10 * (1.0 + m.frobenius_norm());
        prop_assert!(e.reconstruction_error(&m) <= tol);
        prop_assert!(e.orthonormality_defect() <= 1e-10);
        let values = e.eigenvalues();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn lambda_max_is_subadditive((a, b) in arb_sym_pair(5)) {
        let lhs = a.add(&b).lambda_max().unwrap();
        let rhs = a.lambda_max().unwrap() + b.lambda_max().unwrap();
        prop_assert!(lhs <= rhs + 1e-10);
    }

    #[test]
    fn squares_difference_bound((a, b) in arb_sym_pair(5)) {
        let lhs = a.square().sub(&b.square()).spectral_norm().unwrap();
        let diff = a.sub(&b).spectral_norm().unwrap();
        let nb = b.spectral_norm().unwrap();
        prop_assert!(lhs <= 2.0 * nb * diff + diff * diff + 1e-10);
    }

    #[test]
    fn variance_estimators_stay_psd(
        diags in proptest::collection::vec(
            proptest::collection::vec(0.0f64..1.0, 3), 2..40)
    ) {
        let items: Vec<SymMat> = diags.iter().map(|d| SymMat::from_diag(d)).collect();
        let sample = MatrixSample::unit_interval(items).unwrap();
        let paired = estimators::paired_variance(&sample).unwrap().matrix;
        let bessel = estimators::bessel_variance(&sample).unwrap().matrix;
        prop_assert!(paired.lambda_min().unwrap() >= -1e-10);
        prop_assert!(bessel.lambda_min().unwrap() >= -1e-10);
        prop_assert!(paired.spectral_norm().unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn bound_terms_sum_and_shrink(
        n in 4usize..5_000,
        alpha in 0.001f64..0.5,
        sigma2 in 0.0f64..0.25,
    ) {
        let r = bounds::sharp_mp_radius(n, alpha, sigma2).unwrap();
        let sum = r.terms.bounded + r.terms.variance + r.terms.correction;
        prop_assert!((r.radius - sum).abs() < 1e-12);
        prop_assert!(r.radius >= 0.0);
        let bigger_n = bounds::sharp_mp_radius(n * 2, alpha, sigma2).unwrap();
        prop_assert!(bigger_n.radius < r.radius);
        let smaller_alpha = bounds::sharp_mp_radius(n, alpha / 2.0, sigma2).unwrap();
        prop_assert!(smaller_alpha.radius > r.radius);
    }

    #[test]
    fn matrix_records_roundtrip(m in arb_sym(5)) {
        let mut text = Vec::new();
        mio::write_matrices(&mut text, std::slice::from_ref(&m)).unwrap();
        let back = mio::read_matrices(text.as_slice()).unwrap();
        prop_assert_eq!(&back[0], &m);

        let mut csv = Vec::new();
        mio::write_matrices_csv(&mut csv, std::slice::from_ref(&m)).unwrap();
        let back = mio::read_matrices_csv(csv.as_slice()).unwrap();
        prop_assert_eq!(&back[0], &m);
    }
}
