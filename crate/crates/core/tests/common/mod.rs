//! Independent oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls into the solver or kernel code under test.

#![allow(dead_code)]

use densekit::{DenseMatrix, KernelRidgeConfig, KernelRidgeModel, MfConfig, MfModel, Rating};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian kernel written straight from the formula, one entry at a time.
pub fn oracle_kernel(a: &[Vec<f64>], b: &[Vec<f64>], sigma: f64) -> Vec<Vec<f64>> {
    a.iter()
        .map(|ai| {
            b.iter()
                .map(|bj| {
                    let d2: f64 = ai.iter().zip(bj).map(|(x, y)| (x - y).powi(2)).sum();
                    (-d2 / (2.0 * sigma.powi(2))).exp()
                })
                .collect()
        })
        .collect()
}

/// Dense Gaussian elimination with partial pivoting on an augmented copy.
pub fn gauss_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *v -= f * p;
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| m[r][c] * x[c]).sum();
        x[r] = (m[r][n] - s) / m[r][r];
    }
    x
}

/// α from the textbook recipe: center y, build K + λI, eliminate.
pub fn oracle_alpha(x: &[Vec<f64>], y: &[f64], lambda: f64, sigma: f64) -> Vec<f64> {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let yc: Vec<f64> = y.iter().map(|v| v - mean).collect();
    let mut k = oracle_kernel(x, x, sigma);
    for (i, row) in k.iter_mut().enumerate() {
        row[i] += lambda;
    }
    gauss_solve(&k, &yc)
}

/// Random points whose pairwise distances are all at least `min_dist`.
pub fn separated_points(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    span: f64,
    min_dist: f64,
) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    while pts.len() < n {
        let p: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * span).collect();
        let ok = pts.iter().all(|q| {
            q.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum::<f64>() >= min_dist * min_dist
        });
        if ok {
            pts.push(p);
        }
    }
    pts
}

pub fn normal_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

pub fn to_matrix(rows: &[Vec<f64>]) -> DenseMatrix {
    DenseMatrix::from_rows(rows).unwrap()
}

/// Noiseless ratings from a planted rank-`k` model, each cell observed with
/// probability `density`.
pub fn planted_ratings(
    seed: u64,
    n_users: usize,
    n_items: usize,
    k: usize,
    density: f64,
) -> Vec<Rating> {
    let mut rng = rng(seed);
    let pu = normal_vec(&mut rng, n_users * k);
    let qi = normal_vec(&mut rng, n_items * k);
    let mut out = Vec::new();
    for u in 0..n_users {
        for i in 0..n_items {
            if rng.random::<f64>() < density {
                let v = 3.0 + (0..k).map(|f| pu[u * k + f] * qi[i * k + f]).sum::<f64>();
                out.push(Rating::new(u, i, v));
            }
        }
    }
    out
}

pub fn random_ratings(
    rng: &mut ChaCha8Rng,
    n_users: usize,
    n_items: usize,
    count: usize,
) -> Vec<Rating> {
    (0..count)
        .map(|_| {
            Rating::new(
                rng.random_range(0..n_users),
                rng.random_range(0..n_items),
                rng.random_range(1.0..5.0),
            )
        })
        .collect()
}

pub fn random_krr(rng: &mut ChaCha8Rng) -> KernelRidgeModel {
    let n = rng.random_range(1..=30);
    let d = rng.random_range(1..=4);
    let x: Vec<Vec<f64>> = (0..n).map(|_| normal_vec(rng, d)).collect();
    let y = normal_vec(rng, n);
    let lambda = [1e-3, 0.1, 1.0][rng.random_range(0..3)];
    let sigma = rng.random_range(0.2..2.0);
    densekit::krr_fit(
        &to_matrix(&x),
        &y,
        KernelRidgeConfig::new(lambda, sigma).unwrap(),
    )
    .unwrap()
}

pub fn random_mf(rng: &mut ChaCha8Rng) -> MfModel {
    let config = MfConfig {
        n_users: rng.random_range(1..=12),
        n_items: rng.random_range(1..=12),
        n_factors: rng.random_range(1..=6),
        lr: rng.random_range(0.001..0.05),
        reg: rng.random_range(0.0..0.1),
        n_epochs: rng.random_range(1..=8),
        seed: rng.random(),
    };
    let count = rng.random_range(1..40);
    let ratings = random_ratings(rng, config.n_users, config.n_items, count);
    let mut m = MfModel::new(config).unwrap();
    m.fit(&ratings, false).unwrap();
    m
}

pub fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}
