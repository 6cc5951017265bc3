//! Gaussian-kernel ridge regression.
//!
//! Fitting centers the response, builds the RBF kernel matrix over the
//! training rows and solves `(K + λI) α = y − ȳ` with an LDLᵀ factorization.
//! Predictions are `K(X_new, X) α + ȳ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix, DenseVector, Ldlt};

/// Hyperparameters: ridge penalty `lambda` and RBF bandwidth `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelRidgeConfig {
    lambda: f64,
    sigma: f64,
}

impl KernelRidgeConfig {
    pub fn new(lambda: f64, sigma: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidConfig("lambda must be non-negative."));
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidConfig("sigma must be positive."));
        }
        Ok(KernelRidgeConfig { lambda, sigma })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// `K(i, j) = exp(-‖a_i − b_j‖² / (2σ²))`.
///
/// Entries are formed from explicit row differences, so `kernel_matrix(a, a, σ)`
/// is exactly symmetric with a unit diagonal. Entries for rows much farther
/// apart than `σ` underflow to zero.
pub fn kernel_matrix(a: &DenseMatrix, b: &DenseMatrix, sigma: f64) -> Result<DenseMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::dims(
            "A and B must have the same number of columns.",
            format!("A has {}, B has {}", a.cols(), b.cols()),
        ));
    }
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidConfig("sigma must be positive."));
    }
    let scale = 2.0 * sigma * sigma;
    let mut k = DenseMatrix::zeros(a.rows(), b.rows());
    for (i, ai) in a.row_iter().enumerate() {
        for (kij, bj) in k.row_mut(i).iter_mut().zip(b.row_iter()) {
            *kij = (-linalg::squared_distance(ai, bj) / scale).exp();
        }
    }
    Ok(k)
}

/// Symmetric training kernel; fills the lower triangle and mirrors it.
fn gram_matrix(x: &DenseMatrix, sigma: f64) -> DenseMatrix {
    let n = x.rows();
    let scale = 2.0 * sigma * sigma;
    let mut k = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let xi = x.row(i);
        for j in 0..i {
            let v = (-linalg::squared_distance(xi, x.row(j)) / scale).exp();
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
        k[(i, i)] = 1.0;
    }
    k
}

/// A fitted kernel ridge regressor. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRidgeModel {
    config: KernelRidgeConfig,
    x_train: DenseMatrix,
    alpha: DenseVector,
    y_mean: f64,
}

impl KernelRidgeModel {
    /// Reassembles a model from stored parts (used when loading archives).
    pub fn from_parts(
        config: KernelRidgeConfig,
        x_train: DenseMatrix,
        alpha: DenseVector,
        y_mean: f64,
    ) -> Result<Self> {
        if alpha.len() != x_train.rows() {
            return Err(Error::dims(
                "alpha length must equal the number of training rows.",
                format!("alpha={}, rows={}", alpha.len(), x_train.rows()),
            ));
        }
        if x_train.rows() == 0 {
            return Err(Error::NotFitted);
        }
        Ok(KernelRidgeModel {
            config,
            x_train,
            alpha,
            y_mean,
        })
    }

    pub fn config(&self) -> KernelRidgeConfig {
        self.config
    }

    pub fn lambda(&self) -> f64 {
        self.config.lambda
    }

    pub fn sigma(&self) -> f64 {
        self.config.sigma
    }

    pub fn x_train(&self) -> &DenseMatrix {
        &self.x_train
    }

    /// Dual coefficients.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }

    /// Predicts one value per row of `x_new`.
    pub fn predict(&self, x_new: &DenseMatrix) -> Result<DenseVector> {
        // An empty input file carries no column count worth checking.
        if x_new.rows() == 0 {
            return Ok(DenseVector::new());
        }
        if x_new.cols() != self.x_train.cols() {
            return Err(Error::dims(
                "A and B must have the same number of columns.",
                format!(
                    "inputs have {} columns, model was trained on {}",
                    x_new.cols(),
                    self.x_train.cols()
                ),
            ));
        }
        let k_new = kernel_matrix(x_new, &self.x_train, self.config.sigma)?;
        let mut pred = k_new.mul_vec(&self.alpha)?;
        for p in &mut pred {
            *p += self.y_mean;
        }
        Ok(pred)
    }

    /// `‖(K + λI)α − (y − ȳ)‖∞` for the responses the model was fitted on.
    pub fn residual_inf_norm(&self, y: &[f64]) -> Result<f64> {
        if y.len() != self.x_train.rows() {
            return Err(Error::dims(
                "Number of rows in X must match length of y.",
                format!("X has {} rows, y has {}", self.x_train.rows(), y.len()),
            ));
        }
        let mut k = gram_matrix(&self.x_train, self.config.sigma);
        k.add_diagonal(self.config.lambda);
        let lhs = k.mul_vec(&self.alpha)?;
        Ok(lhs
            .iter()
            .zip(y)
            .fold(0.0_f64, |m, (l, yi)| m.max((l - (yi - self.y_mean)).abs())))
    }
}

/// Fits a kernel ridge model on the rows of `x` against responses `y`.
pub fn krr_fit(x: &DenseMatrix, y: &[f64], config: KernelRidgeConfig) -> Result<KernelRidgeModel> {
    if x.rows() != y.len() {
        return Err(Error::dims(
            "Number of rows in X must match length of y.",
            format!("X has {} rows, y has {}", x.rows(), y.len()),
        ));
    }
    if x.rows() == 0 {
        return Err(Error::dims(
            "training set must contain at least one row.",
            "X has 0 rows",
        ));
    }
    let y_mean = linalg::mean(y);
    let y_centered: DenseVector = y.iter().map(|v| v - y_mean).collect();

    let mut system = gram_matrix(x, config.sigma);
    system.add_diagonal(config.lambda);
    let alpha = Ldlt::in_place(system)?.solve(&y_centered)?;

    Ok(KernelRidgeModel {
        config,
        x_train: x.clone(),
        alpha,
        y_mean,
    })
}

/// Stateful estimator: construct with hyperparameters, call
/// [`KernelRidge::fit`], then predict.
#[derive(Debug, Clone)]
pub struct KernelRidge {
    config: KernelRidgeConfig,
    model: Option<KernelRidgeModel>,
}

impl KernelRidge {
    pub fn new(lambda: f64, sigma: f64) -> Result<Self> {
        Ok(KernelRidge {
            config: KernelRidgeConfig::new(lambda, sigma)?,
            model: None,
        })
    }

    pub fn fit(&mut self, x: &DenseMatrix, y: &[f64]) -> Result<()> {
        self.model = Some(krr_fit(x, y, self.config)?);
        Ok(())
    }

    pub fn predict(&self, x_new: &DenseMatrix) -> Result<DenseVector> {
        self.model()?.predict(x_new)
    }

    pub fn model(&self) -> Result<&KernelRidgeModel> {
        self.model.as_ref().ok_or(Error::NotFitted)
    }

    pub fn config(&self) -> KernelRidgeConfig {
        self.config
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[f64]) -> DenseMatrix {
        DenseMatrix::column(v)
    }

    #[test]
    fn config_validation_messages() {
        let e = KernelRidgeConfig::new(-1.0, 1.0).unwrap_err();
        assert_eq!(e.to_string(), "lambda must be non-negative.");
        let e = KernelRidgeConfig::new(0.0, 0.0).unwrap_err();
        assert_eq!(e.to_string(), "sigma must be positive.");
        assert!(KernelRidgeConfig::new(f64::NAN, 1.0).is_err());
        assert!(KernelRidgeConfig::new(0.0, -2.0).is_err());
        assert!(KernelRidgeConfig::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn kernel_two_points_unit_bandwidth() {
        let a = col(&[0.0, 1.0]);
        let k = kernel_matrix(&a, &a, 1.0).unwrap();
        let off = (-0.5_f64).exp();
        assert!((off - 0.6065306597).abs() < 1e-10);
        assert_eq!(k.to_rows(), vec![vec![1.0, off], vec![off, 1.0]]);
    }

    #[test]
    fn kernel_identical_rows_is_all_ones() {
        let a = DenseMatrix::from_rows(&[[0.3, -1.0], [0.3, -1.0], [0.3, -1.0]]).unwrap();
        let k = kernel_matrix(&a, &a, 0.7).unwrap();
        assert!(k.as_slice().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn kernel_three_four_five() {
        let a = DenseMatrix::from_rows(&[[0.0, 0.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[3.0, 4.0]]).unwrap();
        let k = kernel_matrix(&a, &b, 1.0).unwrap();
        assert_eq!(k.shape(), (1, 1));
        assert!((k[(0, 0)] - (-12.5_f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn kernel_column_mismatch() {
        let a = DenseMatrix::zeros(2, 2);
        let b = DenseMatrix::zeros(2, 3);
        let e = kernel_matrix(&a, &b, 1.0).unwrap_err();
        assert!(e
            .to_string()
            .starts_with("A and B must have the same number of columns."));
    }

    #[test]
    fn gram_matches_general_kernel() {
        let x = DenseMatrix::from_rows(&[[0.1, 0.2], [0.9, -0.4], [2.0, 1.5]]).unwrap();
        assert_eq!(gram_matrix(&x, 0.8), kernel_matrix(&x, &x, 0.8).unwrap());
    }

    #[test]
    fn single_point_fit() {
        let m = krr_fit(
            &col(&[0.0]),
            &[5.0],
            KernelRidgeConfig::new(0.3, 2.0).unwrap(),
        )
        .unwrap();
        assert_eq!(m.y_mean(), 5.0);
        assert_eq!(m.alpha(), &[0.0]);
    }

    #[test]
    fn constant_response_gives_zero_alpha() {
        let x = col(&[0.0, 0.5, 1.7, -2.0]);
        let m = krr_fit(&x, &[3.0; 4], KernelRidgeConfig::new(0.01, 0.5).unwrap()).unwrap();
        assert!(m.alpha().iter().all(|&a| a == 0.0));
        let p = m.predict(&col(&[0.2, 9.0])).unwrap();
        assert_eq!(p, vec![3.0, 3.0]);
    }

    #[test]
    fn two_point_fit_matches_hand_solve() {
        // (K + 0.1 I) α = [-1, 1], K = [[1, e], [e, 1]], e = exp(-1/2).
        // By symmetry α = [-a, a] with a = 1 / (1.1 - e).
        let e = (-0.5_f64).exp();
        let a = 1.0 / (1.1 - e);
        let x = col(&[0.0, 1.0]);
        let m = krr_fit(&x, &[0.0, 2.0], KernelRidgeConfig::new(0.1, 1.0).unwrap()).unwrap();
        assert_eq!(m.y_mean(), 1.0);
        assert!((m.alpha()[0] + a).abs() < 1e-14);
        assert!((m.alpha()[1] - a).abs() < 1e-14);

        // prediction at training inputs: y_mean ± (1 - e) a
        let p = m.predict(&x).unwrap();
        let delta = (1.0 - e) * a;
        assert!((p[0] - (1.0 - delta)).abs() < 1e-14);
        assert!((p[1] - (1.0 + delta)).abs() < 1e-14);
    }

    #[test]
    fn far_point_predicts_mean() {
        let x = col(&[0.0, 0.4, 1.0]);
        let m = krr_fit(
            &x,
            &[1.0, -2.0, 4.0],
            KernelRidgeConfig::new(0.1, 0.3).unwrap(),
        )
        .unwrap();
        let p = m.predict(&col(&[1e4])).unwrap();
        assert!((p[0] - m.y_mean()).abs() < 1e-9);
    }

    #[test]
    fn row_count_mismatch_names_both_counts() {
        let e = krr_fit(
            &col(&[0.0, 1.0, 2.0]),
            &[1.0, 2.0],
            KernelRidgeConfig::new(0.1, 1.0).unwrap(),
        )
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.starts_with("Number of rows in X must match length of y."));
        assert!(msg.contains('3') && msg.contains('2'));
    }

    #[test]
    fn empty_training_set_rejected() {
        let e = krr_fit(
            &DenseMatrix::zeros(0, 2),
            &[],
            KernelRidgeConfig::new(0.1, 1.0).unwrap(),
        );
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn singular_system_without_ridge_fails() {
        let x = col(&[1.0, 1.0]);
        let e = krr_fit(&x, &[0.0, 1.0], KernelRidgeConfig::new(0.0, 1.0).unwrap());
        assert!(matches!(e, Err(Error::Factorization { .. })));
    }

    #[test]
    fn unfitted_estimator_refuses_to_predict() {
        let est = KernelRidge::new(0.1, 1.0).unwrap();
        let e = est.predict(&col(&[0.0])).unwrap_err();
        assert_eq!(e.to_string(), "Model has not been fitted yet.");
    }

    #[test]
    fn predict_checks_columns_and_accepts_empty() {
        let m = krr_fit(
            &col(&[0.0, 1.0]),
            &[0.0, 1.0],
            KernelRidgeConfig::new(0.1, 1.0).unwrap(),
        )
        .unwrap();
        assert!(m.predict(&DenseMatrix::zeros(2, 2)).is_err());
        assert!(m.predict(&DenseMatrix::zeros(0, 1)).unwrap().is_empty());
        assert!(m.predict(&DenseMatrix::zeros(0, 3)).unwrap().is_empty());
    }

    #[test]
    fn shrinkage_with_huge_lambda() {
        let x = col(&[-1.0, -0.3, 0.2, 0.8]);
        let y = [0.5, -1.0, 2.0, 0.0];
        let m = krr_fit(&x, &y, KernelRidgeConfig::new(1e8, 0.5).unwrap()).unwrap();
        assert!(linalg::inf_norm(m.alpha()) < 1e-7);
        for p in m.predict(&x).unwrap() {
            assert!((p - m.y_mean()).abs() < 1e-4);
        }
    }
}
