use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use densekit::bench::{gen_synthetic, time_fit, DEFAULT_BENCH_SEED};
use densekit::data_io;
use densekit::{krr_fit, KernelRidgeConfig, MfConfig, MfModel};

#[derive(Parser)]
#[command(
    name = "densekit",
    version,
    about = "Kernel ridge regression and matrix factorization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a Gaussian kernel ridge model.
    KrrFit {
        /// Training inputs, one row per sample (CSV, no header).
        #[arg(long)]
        x: PathBuf,
        /// Responses, one per line.
        #[arg(long)]
        y: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long, allow_negative_numbers = true)]
        sigma: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict with a fitted kernel ridge model.
    KrrPredict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a matrix factorization model with SGD.
    MfFit {
        /// Ratings CSV with header `user,item,value`.
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long)]
        users: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, default_value_t = MfConfig::DEFAULT_FACTORS)]
        factors: usize,
        #[arg(long, default_value_t = MfConfig::DEFAULT_LR, allow_negative_numbers = true)]
        lr: f64,
        #[arg(long, default_value_t = MfConfig::DEFAULT_REG, allow_negative_numbers = true)]
        reg: f64,
        #[arg(long, default_value_t = MfConfig::DEFAULT_EPOCHS)]
        epochs: usize,
        #[arg(long, default_value_t = MfConfig::DEFAULT_SEED)]
        seed: u64,
        /// Suppress per-epoch RMSE lines.
        #[arg(long)]
        quiet: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Create an untrained factorization model archive.
    MfInit {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        items: usize,
        #[arg(long, default_value_t = MfConfig::DEFAULT_FACTORS)]
        factors: usize,
        #[arg(long, default_value_t = MfConfig::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict one user/item rating.
    MfPredict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        user: usize,
        #[arg(long)]
        item: usize,
    },
    /// Write the full users × items prediction matrix.
    MfFull {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time kernel ridge fits on synthetic data.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,3000,4000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        ntest: usize,
        #[arg(long, default_value_t = 1e-4)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 15)]
        repeats: usize,
        #[arg(long, default_value_t = DEFAULT_BENCH_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::KrrFit {
            x,
            y,
            lambda,
            sigma,
            out,
        } => {
            let config = KernelRidgeConfig::new(lambda, sigma)?;
            let x = data_io::load_matrix(&x)?;
            let y = data_io::load_vector(&y)?;
            let model = krr_fit(&x, &y, config)?;
            let residual = model.residual_inf_norm(&y)?;
            data_io::save_model(&model.into(), &out)?;
            println!(
                "n={} d={} lambda={lambda} sigma={sigma} residual={residual:e}",
                x.rows(),
                x.cols()
            );
        }
        Command::KrrPredict { model, x, out } => {
            let model = data_io::load_kernel_ridge(&model)?;
            let x = data_io::load_matrix(&x)?;
            let pred = model.predict(&x)?;
            data_io::write_vector(&out, &pred)?;
        }
        Command::MfFit {
            ratings,
            users,
            items,
            factors,
            lr,
            reg,
            epochs,
            seed,
            quiet,
            out,
        } => {
            let config = MfConfig {
                n_users: users,
                n_items: items,
                n_factors: factors,
                lr,
                reg,
                n_epochs: epochs,
                seed,
            };
            let mut model = MfModel::new(config)?;
            let ratings = data_io::load_ratings(&ratings)?;
            // Header is line 1, so rating k sits on line k + 2.
            for (k, r) in ratings.iter().enumerate() {
                model
                    .predict(r.user, r.item)
                    .with_context(|| format!("line {}", k + 2))?;
            }
            model.fit(&ratings, !quiet)?;
            data_io::save_model(&model.clone().into(), &out)?;
            println!("global_mean={}", model.global_mean());
        }
        Command::MfInit {
            users,
            items,
            factors,
            seed,
            out,
        } => {
            let config = MfConfig {
                n_factors: factors,
                seed,
                ..MfConfig::new(users, items)
            };
            data_io::save_model(&MfModel::new(config)?.into(), &out)?;
        }
        Command::MfPredict { model, user, item } => {
            let model = data_io::load_mf(&model)?;
            println!("{}", model.predict(user, item)?);
        }
        Command::MfFull { model, out } => {
            let model = data_io::load_mf(&model)?;
            data_io::write_matrix(&out, &model.full_prediction())?;
        }
        Command::Bench {
            sizes,
            dim,
            ntest,
            lambda,
            sigma,
            repeats,
            seed,
            out,
        } => bench(&sizes, dim, ntest, lambda, sigma, repeats, seed, &out)?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    sizes: &[usize],
    dim: usize,
    ntest: usize,
    lambda: f64,
    sigma: f64,
    repeats: usize,
    seed: u64,
    out: &std::path::Path,
) -> Result<()> {
    if sizes.is_empty() || sizes.contains(&0) || dim == 0 || ntest == 0 || repeats == 0 {
        bail!("sizes, dim, ntest and repeats must all be positive.");
    }
    if lambda.is_nan() || lambda <= 0.0 {
        bail!("lambda must be positive for benchmarking.");
    }
    let config = KernelRidgeConfig::new(lambda, sigma)?;
    let mut rows = vec!["n,method,fit_time_s".to_owned()];
    let mut previous: Option<(usize, f64)> = None;
    for &n in sizes {
        let (x, y) = gen_synthetic(n + ntest, dim, seed ^ n as u64)?;
        let (train, test) = x.as_slice().split_at(n * dim);
        let x_train = densekit::DenseMatrix::from_row_major(n, dim, train.to_vec())?;
        let x_test = densekit::DenseMatrix::from_row_major(ntest, dim, test.to_vec())?;
        let y_train = &y[..n];

        let record = time_fit(&x_train, y_train, config, repeats)?;
        let model = krr_fit(&x_train, y_train, config)?;
        let start = std::time::Instant::now();
        model.predict(&x_test)?;
        let predict_s = start.elapsed().as_secs_f64();

        println!(
            "n={n} method={} fit_time_s={:.6} repeats={repeats} predict_time_s={predict_s:.6} (ntest={ntest})",
            record.method, record.fit_time_s
        );
        if let Some((pn, pt)) = previous {
            if n > pn && record.fit_time_s <= pt {
                eprintln!("warning: fit time did not increase from n={pn} to n={n} (timer noise?)");
            }
        }
        previous = Some((n, record.fit_time_s));
        rows.push(format!(
            "{},{},{}",
            record.n, record.method, record.fit_time_s
        ));
    }
    std::fs::write(out, rows.join("\n") + "\n").with_context(|| out.display().to_string())?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", first.trim());
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
