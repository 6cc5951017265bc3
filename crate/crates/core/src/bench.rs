//! Fit-time benchmarking for kernel ridge regression.
//!
//! Synthetic inputs are uniform on `[0, 1]^d` with standard normal responses.
//! Each repeat is a full fresh fit (kernel construction plus solve) timed with
//! a monotonic clock; no warm-up run is made, so the first repeat may carry
//! cold-cache effects.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel_ridge::{krr_fit, KernelRidgeConfig};
use crate::linalg::{DenseMatrix, DenseVector};

/// Seed used by the CLI benchmark when none is given.
pub const DEFAULT_BENCH_SEED: u64 = 20_240_601;

/// Label identifying this implementation in benchmark output.
pub const METHOD_LABEL: &str = "densekit-ldlt";

/// One benchmark row: mean fit time at sample size `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub n: usize,
    pub method: String,
    pub fit_time_s: f64,
    pub repeats: usize,
}

/// Measures how long a closure takes.
pub trait Clock {
    fn time<T>(&mut self, f: impl FnOnce() -> T) -> (T, f64);
}

/// Wall-clock timer backed by [`std::time::Instant`].
#[derive(Debug, Default, Clone, Copy)]
pub struct MonotonicClock;

impl Clock for MonotonicClock {
    fn time<T>(&mut self, f: impl FnOnce() -> T) -> (T, f64) {
        let start = std::time::Instant::now();
        let out = f();
        (out, start.elapsed().as_secs_f64())
    }
}

/// Deterministic `(X, y)` with `X ~ U[0,1]^{n×d}` and `y ~ N(0,1)^n`.
pub fn gen_synthetic(n: usize, d: usize, seed: u64) -> Result<(DenseMatrix, DenseVector)> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidConfig("n and d must be positive."));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n * d).map(|_| rng.random::<f64>()).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok((DenseMatrix::from_row_major(n, d, x)?, y))
}

/// Fits `repeats` times and records the mean duration reported by `clock`.
pub fn time_fit_with<C: Clock>(
    clock: &mut C,
    x: &DenseMatrix,
    y: &[f64],
    config: KernelRidgeConfig,
    repeats: usize,
) -> Result<BenchRecord> {
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be positive."));
    }
    let mut total = 0.0;
    for _ in 0..repeats {
        let (fit, secs) = clock.time(|| krr_fit(x, y, config));
        fit?;
        total += secs;
    }
    Ok(BenchRecord {
        n: x.rows(),
        method: METHOD_LABEL.to_owned(),
        fit_time_s: total / repeats as f64,
        repeats,
    })
}

pub fn time_fit(
    x: &DenseMatrix,
    y: &[f64],
    config: KernelRidgeConfig,
    repeats: usize,
) -> Result<BenchRecord> {
    time_fit_with(&mut MonotonicClock, x, y, config, repeats)
}
