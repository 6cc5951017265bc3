//! Gaussian kernel ridge regression and biased matrix factorization trained
//! by stochastic gradient descent, on a small row-major dense matrix type.
//!
//! ```
//! use densekit::{krr_fit, DenseMatrix, KernelRidgeConfig};
//!
//! let x = DenseMatrix::column(&[0.0, 0.5, 1.0]);
//! let model = krr_fit(&x, &[0.0, 1.0, 0.0], KernelRidgeConfig::new(1e-3, 0.3)?)?;
//! let pred = model.predict(&DenseMatrix::column(&[0.25]))?;
//! assert_eq!(pred.len(), 1);
//! # Ok::<(), densekit::Error>(())
//! ```

pub mod bench;
pub mod data_io;
pub mod error;
pub mod kernel_ridge;
pub mod linalg;
pub mod mf_sgd;

pub use error::{Axis, Error, Result};
pub use kernel_ridge::{kernel_matrix, krr_fit, KernelRidge, KernelRidgeConfig, KernelRidgeModel};
pub use linalg::{DenseMatrix, DenseVector, Ldlt};
pub use mf_sgd::{EpochReport, MfConfig, MfModel, Rating};
