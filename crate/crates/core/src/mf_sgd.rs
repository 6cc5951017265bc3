//! Biased matrix factorization trained with per-rating stochastic gradient descent.
//!
//! The model predicts `μ + b_u + b_i + p_u · q_i`. All randomness (factor
//! initialization, then one shuffle per epoch) comes from a single ChaCha8
//! stream seeded from the config, so a seed fully determines training.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Axis, Error, Result};
use crate::linalg::{dot, DenseMatrix, DenseVector};

/// Standard deviation of the initial factor entries.
pub const INIT_STDDEV: f64 = 0.1;

/// One observed `(user, item, value)` triplet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rating {
    pub user: usize,
    pub item: usize,
    pub value: f64,
}

impl Rating {
    pub fn new(user: usize, item: usize, value: f64) -> Self {
        Rating { user, item, value }
    }
}

/// Training hyperparameters.
///
/// [`MfConfig::new`] fills in the defaults:
/// 10 factors, learning rate 0.01, regularization 0.02, 20 epochs, seed 42.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MfConfig {
    pub n_users: usize,
    pub n_items: usize,
    pub n_factors: usize,
    pub lr: f64,
    pub reg: f64,
    pub n_epochs: usize,
    pub seed: u64,
}

impl MfConfig {
    pub const DEFAULT_FACTORS: usize = 10;
    pub const DEFAULT_LR: f64 = 0.01;
    pub const DEFAULT_REG: f64 = 0.02;
    pub const DEFAULT_EPOCHS: usize = 20;
    pub const DEFAULT_SEED: u64 = 42;

    pub fn new(n_users: usize, n_items: usize) -> Self {
        MfConfig {
            n_users,
            n_items,
            n_factors: Self::DEFAULT_FACTORS,
            lr: Self::DEFAULT_LR,
            reg: Self::DEFAULT_REG,
            n_epochs: Self::DEFAULT_EPOCHS,
            seed: Self::DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_users == 0 || self.n_items == 0 || self.n_factors == 0 {
            return Err(Error::InvalidConfig(
                "n_users, n_items, n_factors must be positive.",
            ));
        }
        if !self.lr.is_finite() || self.lr <= 0.0 {
            return Err(Error::InvalidConfig("learning rate must be positive."));
        }
        if !self.reg.is_finite() || self.reg < 0.0 {
            return Err(Error::InvalidConfig("regularization must be non-negative."));
        }
        if self.n_epochs == 0 {
            return Err(Error::InvalidConfig("n_epochs must be positive."));
        }
        Ok(())
    }
}

/// Training RMSE measured after one epoch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochReport {
    /// 1-based.
    pub epoch: usize,
    pub train_rmse: f64,
}

impl std::fmt::Display for EpochReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RMSE = {:.6}", self.train_rmse)
    }
}

/// Factor model state: `P` (users × k), `Q` (items × k), biases, global mean
/// and the generator that drives initialization and shuffling.
#[derive(Debug, Clone, PartialEq)]
pub struct MfModel {
    config: MfConfig,
    p: DenseMatrix,
    q: DenseMatrix,
    bu: DenseVector,
    bi: DenseVector,
    global_mean: f64,
    rng: ChaCha8Rng,
}

impl MfModel {
    /// Draws `P` then `Q` row by row from Normal(0, 0.1); biases and μ start at zero.
    pub fn new(config: MfConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let dist = Normal::new(0.0, INIT_STDDEV).expect("finite positive stddev");
        let k = config.n_factors;
        let mut draw = |rows: usize| {
            let data = (0..rows * k).map(|_| dist.sample(&mut rng)).collect();
            DenseMatrix::from_row_major(rows, k, data).expect("shape matches buffer")
        };
        let p = draw(config.n_users);
        let q = draw(config.n_items);
        Ok(MfModel {
            config,
            p,
            q,
            bu: vec![0.0; config.n_users],
            bi: vec![0.0; config.n_items],
            global_mean: 0.0,
            rng,
        })
    }

    /// Reassembles a model from stored parts. `rng_word_pos` is the generator
    /// position returned by [`MfModel::rng_word_pos`].
    pub fn from_parts(
        config: MfConfig,
        p: DenseMatrix,
        q: DenseMatrix,
        bu: DenseVector,
        bi: DenseVector,
        global_mean: f64,
        rng_word_pos: u128,
    ) -> Result<Self> {
        config.validate()?;
        let k = config.n_factors;
        if p.shape() != (config.n_users, k)
            || q.shape() != (config.n_items, k)
            || bu.len() != config.n_users
            || bi.len() != config.n_items
        {
            return Err(Error::dims(
                "factor and bias shapes must match the config.",
                format!(
                    "P {:?}, Q {:?}, bu {}, bi {} for {} users, {} items, {} factors",
                    p.shape(),
                    q.shape(),
                    bu.len(),
                    bi.len(),
                    config.n_users,
                    config.n_items,
                    k
                ),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_word_pos(rng_word_pos);
        Ok(MfModel {
            config,
            p,
            q,
            bu,
            bi,
            global_mean,
            rng,
        })
    }

    pub fn config(&self) -> &MfConfig {
        &self.config
    }

    pub fn user_factors(&self) -> &DenseMatrix {
        &self.p
    }

    pub fn item_factors(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn user_bias(&self) -> &[f64] {
        &self.bu
    }

    pub fn item_bias(&self) -> &[f64] {
        &self.bi
    }

    pub fn global_mean(&self) -> f64 {
        self.global_mean
    }

    /// Position of the generator in its stream, in 32-bit words.
    pub fn rng_word_pos(&self) -> u128 {
        self.rng.get_word_pos()
    }

    fn check_index(&self, axis: Axis, index: usize) -> Result<()> {
        let len = match axis {
            Axis::User => self.config.n_users,
            Axis::Item => self.config.n_items,
        };
        if index >= len {
            return Err(Error::IndexOutOfRange { axis, index, len });
        }
        Ok(())
    }

    fn validate_ratings(&self, ratings: &[Rating]) -> Result<()> {
        if ratings.is_empty() {
            return Err(Error::EmptyRatings);
        }
        for r in ratings {
            self.check_index(Axis::User, r.user)?;
            self.check_index(Axis::Item, r.item)?;
        }
        Ok(())
    }

    #[inline]
    fn predict_unchecked(&self, user: usize, item: usize) -> f64 {
        self.global_mean + self.bu[user] + self.bi[item] + dot(self.p.row(user), self.q.row(item))
    }

    pub fn predict(&self, user: usize, item: usize) -> Result<f64> {
        self.check_index(Axis::User, user)?;
        self.check_index(Axis::Item, item)?;
        Ok(self.predict_unchecked(user, item))
    }

    /// Every user × item prediction. Entry `(u, i)` is bit-identical to `predict(u, i)`.
    pub fn full_prediction(&self) -> DenseMatrix {
        let (n_users, n_items) = (self.config.n_users, self.config.n_items);
        let mut pred = DenseMatrix::filled(n_users, n_items, self.global_mean);
        for u in 0..n_users {
            let pu = self.p.row(u);
            for (i, out) in pred.row_mut(u).iter_mut().enumerate() {
                *out += self.bu[u];
                *out += self.bi[i];
                *out += dot(pu, self.q.row(i));
            }
        }
        pred
    }

    /// Root mean squared error of the model over `ratings`.
    pub fn rmse(&self, ratings: &[Rating]) -> Result<f64> {
        self.validate_ratings(ratings)?;
        Ok(self.rmse_unchecked(ratings))
    }

    fn rmse_unchecked(&self, ratings: &[Rating]) -> f64 {
        let sse = ratings.iter().fold(0.0, |acc, r| {
            let err = r.value - self.predict_unchecked(r.user, r.item);
            acc + err * err
        });
        (sse / ratings.len() as f64).sqrt()
    }

    /// Applies one SGD update for `rating` against the current global mean.
    ///
    /// Biases update first, each reading its own current value. Both factor
    /// rows then update from copies taken before either was touched.
    pub fn sgd_step(&mut self, rating: &Rating) -> Result<()> {
        self.check_index(Axis::User, rating.user)?;
        self.check_index(Axis::Item, rating.item)?;
        let mut scratch = vec![0.0; 2 * self.config.n_factors];
        self.step_unchecked(rating, &mut scratch);
        Ok(())
    }

    fn step_unchecked(&mut self, r: &Rating, scratch: &mut [f64]) {
        let (u, i) = (r.user, r.item);
        let (lr, reg) = (self.config.lr, self.config.reg);
        let err = r.value - self.predict_unchecked(u, i);

        let (pu, qi) = scratch.split_at_mut(self.config.n_factors);
        pu.copy_from_slice(self.p.row(u));
        qi.copy_from_slice(self.q.row(i));

        self.bu[u] += lr * (err - reg * self.bu[u]);
        self.bi[i] += lr * (err - reg * self.bi[i]);

        for ((p, &pk), &qk) in self.p.row_mut(u).iter_mut().zip(pu.iter()).zip(qi.iter()) {
            *p += lr * (err * qk - reg * pk);
        }
        for ((q, &pk), &qk) in self.q.row_mut(i).iter_mut().zip(pu.iter()).zip(qi.iter()) {
            *q += lr * (err * pk - reg * qk);
        }
    }

    /// Trains for `n_epochs`, returning the training RMSE after each epoch.
    /// With `verbose`, also prints `[Epoch e/T] RMSE = r` per epoch to stdout.
    pub fn fit(&mut self, ratings: &[Rating], verbose: bool) -> Result<Vec<EpochReport>> {
        let total = self.config.n_epochs;
        self.fit_with(ratings, |report| {
            if verbose {
                println!("[Epoch {}/{}] {}", report.epoch, total, report);
            }
        })
    }

    /// Like [`MfModel::fit`], handing each epoch's report to `on_epoch`.
    pub fn fit_with<F>(&mut self, ratings: &[Rating], mut on_epoch: F) -> Result<Vec<EpochReport>>
    where
        F: FnMut(&EpochReport),
    {
        self.validate_ratings(ratings)?;
        self.global_mean = ratings.iter().map(|r| r.value).sum::<f64>() / ratings.len() as f64;

        let mut shuffled = ratings.to_vec();
        let mut scratch = vec![0.0; 2 * self.config.n_factors];
        let mut reports = Vec::with_capacity(self.config.n_epochs);
        for epoch in 1..=self.config.n_epochs {
            shuffled.shuffle(&mut self.rng);
            for r in &shuffled {
                self.step_unchecked(r, &mut scratch);
            }
            let report = EpochReport {
                epoch,
                train_rmse: self.rmse_unchecked(ratings),
            };
            on_epoch(&report);
            reports.push(report);
        }
        Ok(reports)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(mu: f64, bu: f64, bi: f64, p: &[f64], q: &[f64]) -> MfModel {
        let k = p.len();
        let mut config = MfConfig::new(1, 1);
        config.n_factors = k;
        MfModel::from_parts(
            config,
            DenseMatrix::from_row_major(1, k, p.to_vec()).unwrap(),
            DenseMatrix::from_row_major(1, k, q.to_vec()).unwrap(),
            vec![bu],
            vec![bi],
            mu,
            0,
        )
        .unwrap()
    }

    #[test]
    fn defaults() {
        let c = MfConfig::new(3, 4);
        assert_eq!(
            (c.n_factors, c.lr, c.reg, c.n_epochs, c.seed),
            (10, 0.01, 0.02, 20, 42)
        );
    }

    #[test]
    fn config_errors() {
        let base = MfConfig::new(2, 2);
        let cases: [(MfConfig, &str); 6] = [
            (
                MfConfig {
                    n_factors: 0,
                    ..base
                },
                "n_users, n_items, n_factors must be positive.",
            ),
            (
                MfConfig { n_users: 0, ..base },
                "n_users, n_items, n_factors must be positive.",
            ),
            (
                MfConfig { lr: 0.0, ..base },
                "learning rate must be positive.",
            ),
            (
                MfConfig {
                    lr: f64::NAN,
                    ..base
                },
                "learning rate must be positive.",
            ),
            (
                MfConfig { reg: -0.1, ..base },
                "regularization must be non-negative.",
            ),
            (
                MfConfig {
                    n_epochs: 0,
                    ..base
                },
                "n_epochs must be positive.",
            ),
        ];
        for (c, msg) in cases {
            assert_eq!(MfModel::new(c).unwrap_err().to_string(), msg);
        }
    }

    #[test]
    fn fresh_model_state() {
        let m = MfModel::new(MfConfig::new(2, 3)).unwrap();
        assert_eq!(m.user_factors().shape(), (2, 10));
        assert_eq!(m.item_factors().shape(), (3, 10));
        assert_eq!(m.user_bias(), &[0.0, 0.0]);
        assert_eq!(m.item_bias(), &[0.0, 0.0, 0.0]);
        assert_eq!(m.global_mean(), 0.0);
        assert_eq!(m, MfModel::new(MfConfig::new(2, 3)).unwrap());
    }

    #[test]
    fn different_seeds_differ() {
        let a = MfModel::new(MfConfig::new(2, 2)).unwrap();
        let b = MfModel::new(MfConfig {
            seed: 7,
            ..MfConfig::new(2, 2)
        })
        .unwrap();
        assert_ne!(a.user_factors(), b.user_factors());
    }

    #[test]
    fn hand_set_prediction() {
        let m = tiny(1.0, 0.5, 0.25, &[1.0, 2.0], &[3.0, 4.0]);
        assert_eq!(m.predict(0, 0).unwrap(), 12.75);
        assert_eq!(m.full_prediction().to_rows(), vec![vec![12.75]]);
    }

    #[test]
    fn predict_index_errors() {
        let m = MfModel::new(MfConfig::new(2, 2)).unwrap();
        assert_eq!(
            m.predict(2, 0).unwrap_err().to_string(),
            "user index out of range. (user 2, expected < 2)"
        );
        assert!(m
            .predict(0, 5)
            .unwrap_err()
            .to_string()
            .starts_with("item index out of range."));
    }

    #[test]
    fn rmse_examples() {
        let m = tiny(2.0, 0.0, 0.0, &[0.0], &[0.0]);
        assert_eq!(m.rmse(&[Rating::new(0, 0, 2.0)]).unwrap(), 0.0);
        assert_eq!(m.rmse(&[Rating::new(0, 0, 4.0)]).unwrap(), 2.0);
        let two = [Rating::new(0, 0, 5.0), Rating::new(0, 0, 6.0)];
        assert!((m.rmse(&two).unwrap() - 12.5_f64.sqrt()).abs() < 1e-15);
        assert!(matches!(m.rmse(&[]), Err(Error::EmptyRatings)));
    }

    #[test]
    fn fit_rejects_bad_input() {
        let mut m = MfModel::new(MfConfig::new(2, 2)).unwrap();
        assert_eq!(
            m.fit(&[], false).unwrap_err().to_string(),
            "ratings must not be empty."
        );
        let e = m.fit(&[Rating::new(2, 0, 1.0)], false).unwrap_err();
        assert!(e.to_string().starts_with("user index out of range."));
        let e = m.fit(&[Rating::new(0, 9, 1.0)], false).unwrap_err();
        assert!(e.to_string().starts_with("item index out of range."));
    }

    #[test]
    fn three_rating_workflow() {
        let ratings = [
            Rating::new(0, 0, 5.0),
            Rating::new(0, 1, 3.0),
            Rating::new(1, 0, 4.0),
        ];
        let mut m = MfModel::new(MfConfig::new(2, 2)).unwrap();
        let reports = m.fit(&ratings, false).unwrap();
        assert_eq!(m.global_mean(), 4.0);
        assert_eq!(reports.len(), 20);
        assert_eq!(
            reports.iter().map(|r| r.epoch).collect::<Vec<_>>(),
            (1..=20).collect::<Vec<_>>()
        );
        assert!(m.predict(0, 1).unwrap().is_finite());
        assert_eq!(m.full_prediction().shape(), (2, 2));
    }

    #[test]
    fn single_rating_converges() {
        let mut c = MfConfig::new(1, 1);
        c.reg = 0.0;
        c.lr = 0.05;
        c.n_epochs = 2000;
        let mut m = MfModel::new(c).unwrap();
        let reports = m.fit(&[Rating::new(0, 0, 3.5)], false).unwrap();
        assert_eq!(m.global_mean(), 3.5);
        assert!(reports.last().unwrap().train_rmse < 1e-3);
    }

    #[test]
    fn duplicate_pairs_are_independent_observations() {
        let mut m = MfModel::new(MfConfig::new(1, 1)).unwrap();
        let r = [Rating::new(0, 0, 1.0), Rating::new(0, 0, 3.0)];
        m.fit(&r, false).unwrap();
        assert_eq!(m.global_mean(), 2.0);
    }

    #[test]
    fn regularization_shrinks_when_error_is_zero() {
        // err = 0 when the rating equals the current prediction.
        let mut m = tiny(1.0, 0.3, -0.2, &[0.4, -0.5], &[0.1, 0.6]);
        m.config.reg = 0.5;
        m.config.lr = 0.1;
        let v = m.predict(0, 0).unwrap();
        let before = (
            m.bu[0].abs(),
            m.bi[0].abs(),
            norm(m.p.row(0)),
            norm(m.q.row(0)),
        );
        m.sgd_step(&Rating::new(0, 0, v)).unwrap();
        let after = (
            m.bu[0].abs(),
            m.bi[0].abs(),
            norm(m.p.row(0)),
            norm(m.q.row(0)),
        );
        assert!(
            after.0 < before.0 && after.1 < before.1 && after.2 < before.2 && after.3 < before.3
        );
    }

    fn norm(v: &[f64]) -> f64 {
        dot(v, v).sqrt()
    }
}
