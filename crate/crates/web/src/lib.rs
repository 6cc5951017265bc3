//! Browser demo: fits run in WebAssembly, `www/index.js` draws the results.
//!
//! Three interactive operations are exported:
//! - [`fit_sine`] fits kernel ridge regression to noisy samples of `sin(2πx)`,
//! - [`kernel_heatmap`] evaluates the RBF kernel on a 1-D grid,
//! - [`train_planted`] trains the factorization model on planted low-rank ratings.

use densekit::{kernel_matrix, krr_fit, DenseMatrix, KernelRidgeConfig, MfConfig, MfModel, Rating};
use wasm_bindgen::prelude::*;

/// Small xorshift generator for demo data. The core's generators are not
/// part of its public API, and the demo only needs repeatable noise.
struct DemoRng(u64);

impl DemoRng {
    fn new(seed: u64) -> Self {
        DemoRng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }

    fn next_f64(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Box–Muller.
    fn normal(&mut self) -> f64 {
        let u1 = self.next_f64().max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Training samples plus the fitted curve on a dense grid.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct SineFit {
    train_x: Vec<f64>,
    train_y: Vec<f64>,
    grid_x: Vec<f64>,
    grid_pred: Vec<f64>,
    grid_truth: Vec<f64>,
    max_abs_error: f64,
}

#[wasm_bindgen]
impl SineFit {
    #[wasm_bindgen(getter)]
    pub fn train_x(&self) -> Vec<f64> {
        self.train_x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn train_y(&self) -> Vec<f64> {
        self.train_y.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn grid_x(&self) -> Vec<f64> {
        self.grid_x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn grid_pred(&self) -> Vec<f64> {
        self.grid_pred.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn grid_truth(&self) -> Vec<f64> {
        self.grid_truth.clone()
    }

    /// Max |prediction − sin(2πx)| over the grid.
    #[wasm_bindgen(getter)]
    pub fn max_abs_error(&self) -> f64 {
        self.max_abs_error
    }
}

pub fn sine_fit(
    lambda: f64,
    sigma: f64,
    n_train: usize,
    noise: f64,
    seed: u64,
    n_grid: usize,
) -> densekit::Result<SineFit> {
    let config = KernelRidgeConfig::new(lambda, sigma)?;
    let mut rng = DemoRng::new(seed);
    let truth = |x: f64| (std::f64::consts::TAU * x).sin();
    let train_x = linspace(-1.0, 1.0, n_train);
    let train_y: Vec<f64> = train_x
        .iter()
        .map(|&x| truth(x) + noise * rng.normal())
        .collect();
    let model = krr_fit(&DenseMatrix::column(&train_x), &train_y, config)?;

    let grid_x = linspace(-1.0, 1.0, n_grid);
    let grid_pred = model.predict(&DenseMatrix::column(&grid_x))?;
    let grid_truth: Vec<f64> = grid_x.iter().map(|&x| truth(x)).collect();
    let max_abs_error = grid_pred
        .iter()
        .zip(&grid_truth)
        .map(|(p, t)| (p - t).abs())
        .fold(0.0, f64::max);
    Ok(SineFit {
        train_x,
        train_y,
        grid_x,
        grid_pred,
        grid_truth,
        max_abs_error,
    })
}

/// `n × n` kernel matrix over an evenly spaced grid on `[-1, 1]`, row-major.
pub fn kernel_grid(sigma: f64, n: usize) -> densekit::Result<Vec<f64>> {
    KernelRidgeConfig::new(0.0, sigma)?;
    let grid = DenseMatrix::column(&linspace(-1.0, 1.0, n));
    Ok(kernel_matrix(&grid, &grid, sigma)?.into_vec())
}

/// Per-epoch RMSE and the final prediction matrix for a planted-model run.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct PlantedRun {
    rmse: Vec<f64>,
    truth: Vec<f64>,
    prediction: Vec<f64>,
    observed: Vec<u8>,
    n_users: usize,
    n_items: usize,
}

#[wasm_bindgen]
impl PlantedRun {
    /// Training RMSE after each epoch.
    #[wasm_bindgen(getter)]
    pub fn rmse(&self) -> Vec<f64> {
        self.rmse.clone()
    }

    /// Noiseless planted ratings, users × items row-major.
    #[wasm_bindgen(getter)]
    pub fn truth(&self) -> Vec<f64> {
        self.truth.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn prediction(&self) -> Vec<f64> {
        self.prediction.clone()
    }

    /// 1 where the cell was part of the training set.
    #[wasm_bindgen(getter)]
    pub fn observed(&self) -> Vec<u8> {
        self.observed.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn n_users(&self) -> usize {
        self.n_users
    }

    #[wasm_bindgen(getter)]
    pub fn n_items(&self) -> usize {
        self.n_items
    }
}

#[allow(clippy::too_many_arguments)]
pub fn planted_run(
    n_users: usize,
    n_items: usize,
    rank: usize,
    density: f64,
    config: MfConfig,
    data_seed: u64,
) -> densekit::Result<PlantedRun> {
    let mut rng = DemoRng::new(data_seed);
    let pu: Vec<f64> = (0..n_users * rank).map(|_| rng.normal()).collect();
    let qi: Vec<f64> = (0..n_items * rank).map(|_| rng.normal()).collect();
    let mut truth = Vec::with_capacity(n_users * n_items);
    let mut observed = Vec::with_capacity(n_users * n_items);
    let mut ratings = Vec::new();
    for u in 0..n_users {
        for i in 0..n_items {
            let v = 3.0
                + (0..rank)
                    .map(|f| pu[u * rank + f] * qi[i * rank + f])
                    .sum::<f64>();
            truth.push(v);
            let seen = rng.next_f64() < density;
            observed.push(u8::from(seen));
            if seen {
                ratings.push(Rating::new(u, i, v));
            }
        }
    }
    let mut model = MfModel::new(MfConfig {
        n_users,
        n_items,
        ..config
    })?;
    let reports = model.fit(&ratings, false)?;
    Ok(PlantedRun {
        rmse: reports.iter().map(|r| r.train_rmse).collect(),
        truth,
        prediction: model.full_prediction().into_vec(),
        observed,
        n_users,
        n_items,
    })
}

fn js_err(e: densekit::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn fit_sine(
    lambda: f64,
    sigma: f64,
    n_train: usize,
    noise: f64,
    seed: u32,
    n_grid: usize,
) -> Result<SineFit, JsError> {
    sine_fit(lambda, sigma, n_train, noise, u64::from(seed), n_grid).map_err(js_err)
}

#[wasm_bindgen]
pub fn kernel_heatmap(sigma: f64, n: usize) -> Result<Vec<f64>, JsError> {
    kernel_grid(sigma, n).map_err(js_err)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn train_planted(
    n_users: usize,
    n_items: usize,
    rank: usize,
    density: f64,
    n_factors: usize,
    lr: f64,
    reg: f64,
    n_epochs: usize,
    seed: u32,
) -> Result<PlantedRun, JsError> {
    let config = MfConfig {
        n_factors,
        lr,
        reg,
        n_epochs,
        seed: u64::from(seed),
        ..MfConfig::new(n_users, n_items)
    };
    planted_run(n_users, n_items, rank, density, config, u64::from(seed) + 1).map_err(js_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_defaults_fit_well() {
        let fit = sine_fit(0.001, 0.2, 100, 0.0, 1, 200).unwrap();
        assert_eq!(fit.train_x.len(), 100);
        assert_eq!(fit.grid_pred.len(), 200);
        // Includes the interval ends, where the fit is loosest.
        assert!(fit.max_abs_error < 0.1, "{}", fit.max_abs_error);
    }

    #[test]
    fn sine_rejects_bad_hyperparameters() {
        assert!(sine_fit(-1.0, 0.2, 10, 0.0, 1, 10).is_err());
        assert!(sine_fit(0.1, 0.0, 10, 0.0, 1, 10).is_err());
        assert!(sine_fit(0.1, 0.2, 0, 0.0, 1, 10).is_err());
    }

    #[test]
    fn noise_is_repeatable() {
        let a = sine_fit(0.01, 0.2, 30, 0.3, 9, 5).unwrap();
        let b = sine_fit(0.01, 0.2, 30, 0.3, 9, 5).unwrap();
        assert_eq!(a.train_y, b.train_y);
        assert_ne!(
            a.train_y,
            sine_fit(0.01, 0.2, 30, 0.3, 10, 5).unwrap().train_y
        );
    }

    #[test]
    fn heatmap_shape_and_diagonal() {
        let k = kernel_grid(0.3, 16).unwrap();
        assert_eq!(k.len(), 256);
        assert!((0..16).all(|i| k[i * 16 + i] == 1.0));
        assert!(kernel_grid(-1.0, 4).is_err());
    }

    #[test]
    fn planted_run_learns() {
        let config = MfConfig {
            n_epochs: 100,
            ..MfConfig::new(1, 1)
        };
        let run = planted_run(30, 20, 3, 0.6, config, 5).unwrap();
        assert_eq!(run.rmse.len(), 100);
        assert_eq!(run.prediction.len(), 600);
        assert!(run.rmse[99] < run.rmse[0]);
    }
}
