//! Ridge-regression readout `W_out = Y X^T (X X^T + beta I)^{-1}`.

use super::linalg::{cholesky, cholesky_solve, Matrix};
use super::StateMatrix;
use crate::{to_f64, Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutModel<T> {
    /// `outputs x features`.
    pub w_out: Matrix<T>,
    pub beta: T,
}

/// Fits a readout to `targets` (`outputs x steps`).
pub fn train_readout<T: Scalar>(x: &StateMatrix<T>, targets: &Matrix<T>, beta: T) -> Result<ReadoutModel<T>> {
    if !(beta >= T::zero() && beta.is_finite()) {
        return Err(Error::domain("beta", to_f64(beta), "must be finite and >= 0"));
    }
    if targets.cols() != x.steps() {
        return Err(Error::DimensionMismatch {
            what: "target columns",
            expected: x.steps(),
            found: targets.cols(),
        });
    }
    let xm = x.matrix();
    let mut a = xm.gram();
    for i in 0..a.rows() {
        a[(i, i)] = a[(i, i)] + beta;
    }
    // (X X^T + beta I) W_out^T = X Y^T
    let rhs = xm.matmul(&targets.transpose())?;
    let l = cholesky(&a)?;
    let w_out = cholesky_solve(&l, &rhs)?.transpose();
    if !w_out.is_finite() {
        return Err(Error::SingularSystem);
    }
    Ok(ReadoutModel { w_out, beta })
}

/// Single-output convenience wrapper.
pub fn train_readout_vec<T: Scalar>(x: &StateMatrix<T>, target: &[T], beta: T) -> Result<ReadoutModel<T>> {
    let y = Matrix::from_row_major(1, target.len(), target.to_vec())?;
    train_readout(x, &y, beta)
}

/// `Y = W_out X`.
pub fn predict<T: Scalar>(model: &ReadoutModel<T>, x: &StateMatrix<T>) -> Result<Matrix<T>> {
    if model.w_out.cols() != x.features() {
        return Err(Error::DimensionMismatch {
            what: "readout features",
            expected: model.w_out.cols(),
            found: x.features(),
        });
    }
    model.w_out.matmul(x.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::{Matrix, StateMatrix};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_states(features: usize, steps: usize, seed: u64) -> StateMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(features, steps);
        for n in 0..steps {
            m[(0, n)] = 1.0;
            for i in 1..features {
                m[(i, n)] = rng.random_range(-1.0..1.0);
            }
        }
        StateMatrix::new(m).unwrap()
    }

    #[test]
    fn rank_one_minimum_norm() {
        let x = StateMatrix::new(Matrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap()).unwrap();
        let y = Matrix::from_rows(&[vec![4.0]]).unwrap();
        assert!(matches!(train_readout(&x, &y, 0.0), Err(Error::SingularSystem)));
        let model = train_readout(&x, &y, 1e-12).unwrap();
        assert_relative_eq!(model.w_out[(0, 0)], 0.8, max_relative = 1e-6);
        assert_relative_eq!(model.w_out[(0, 1)], 1.6, max_relative = 1e-6);
        let pred = predict(&model, &x).unwrap();
        assert!((pred[(0, 0)] - 4.0f64).abs() < 1e-6);
    }

    #[test]
    fn square_system_is_exact() {
        let x = StateMatrix::new(
            Matrix::from_rows(&[vec![1.0, 1.0, 1.0], vec![0.5, -1.0, 2.0], vec![3.0, 0.2, -0.7]]).unwrap(),
        )
        .unwrap();
        let y = Matrix::from_rows(&[vec![1.0, -2.0, 0.25]]).unwrap();
        let model = train_readout(&x, &y, 0.0).unwrap();
        let pred = predict(&model, &x).unwrap();
        for (p, t) in pred.as_slice().iter().zip(y.as_slice()) {
            assert!(f64::abs(p - t) < 1e-8);
        }
    }

    #[test]
    fn ridge_shrinks_monotonically() {
        let x = random_states(5, 50, 3);
        let target: Vec<f64> = (0..50).map(|n| x.column(n)[2] * 3.0 - 1.0).collect();
        let mut last = f64::INFINITY;
        for beta in [1e-6, 1e-2, 1.0, 1e2, 1e4, 1e6, 1e9] {
            let norm = train_readout_vec(&x, &target, beta).unwrap().w_out.frobenius_norm();
            assert!(norm < last);
            last = norm;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn zero_features_predict_bias() {
        let x = random_states(4, 30, 5);
        let target: Vec<f64> = (0..30).map(|n| n as f64 * 0.1).collect();
        let model = train_readout_vec(&x, &target, 1e-6).unwrap();
        let mut z = Matrix::zeros(4, 3);
        for n in 0..3 {
            z[(0, n)] = 1.0;
        }
        let pred = predict(&model, &StateMatrix::new(z).unwrap()).unwrap();
        for n in 0..3 {
            assert_eq!(pred[(0, n)], model.w_out[(0, 0)]);
        }
    }

    #[test]
    fn mismatches() {
        let x = random_states(4, 10, 1);
        assert!(train_readout_vec(&x, &[0.0; 9], 1e-3).is_err());
        assert!(train_readout_vec(&x, &[0.0; 10], -1.0).is_err());
        let model = train_readout_vec(&x, &[1.0; 10], 1e-3).unwrap();
        assert!(predict(&model, &random_states(5, 10, 1)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn exact_linear_targets_are_recovered(seed in 0u64..10_000, features in 2usize..8) {
            let steps = 3 * features + 5;
            let x = random_states(features, steps, seed);
            let coef: Vec<f64> = (0..features).map(|i| (i as f64 * 1.7 + seed as f64).sin()).collect();
            let target: Vec<f64> = (0..steps)
                .map(|n| x.column(n).iter().zip(&coef).map(|(a, b)| a * b).sum())
                .collect();
            let model = train_readout_vec(&x, &target, 1e-12).unwrap();
            let pred = predict(&model, &x).unwrap();
            let r2 = crate::analysis::pearson_r2(pred.row(0), &target).unwrap();
            prop_assert!(r2 >= 0.999);
        }

        #[test]
        fn prediction_is_linear(seed in 0u64..10_000) {
            let x = random_states(4, 20, seed);
            let target: Vec<f64> = (0..20).map(|n| (n as f64).cos()).collect();
            let model = train_readout_vec(&x, &target, 1e-4).unwrap();
            let a = random_states(4, 6, seed + 1);
            let b = random_states(4, 6, seed + 2);
            let mut sum = a.matrix().clone();
            for i in 0..4 {
                for n in 0..6 {
                    sum[(i, n)] = a.matrix()[(i, n)] + b.matrix()[(i, n)];
                }
            }
            // The summed bias row is 2; compare W_out (a + b) with W_out a + W_out b directly.
            let pa = predict(&model, &a).unwrap();
            let pb = predict(&model, &b).unwrap();
            let ps = model.w_out.matmul(&sum).unwrap();
            for n in 0..6 {
                prop_assert!((ps[(0, n)] - pa[(0, n)] - pb[(0, n)]).abs() < 1e-9);
            }
        }
    }
}
