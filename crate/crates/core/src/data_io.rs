//! CSV ingestion and model archives.
//!
//! CSV dialect: comma separated, `.` decimal point, no quoting. Ratings files
//! start with the header `user,item,value`; matrix and vector files have no
//! header.
//!
//! Archives are JSON documents of the form
//! `{"kind": ..., "version": 1, "payload": {name: {"dtype", "shape", "data"}}}`.
//! Floats are written in shortest round-trip form and parsed back exactly;
//! non-finite values are spelled `"NaN"`, `"inf"` and `"-inf"`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel_ridge::{KernelRidgeConfig, KernelRidgeModel};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::mf_sgd::{MfConfig, MfModel, Rating};

pub const RATINGS_HEADER: &str = "user,item,value";
pub const ARCHIVE_VERSION: u32 = 1;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn read_records(path: &Path) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut reader = csv_reader(path)?;
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path.to_path_buf(),
                source: std::io::Error::other(e.to_string()),
            },
            _ => Error::Parse {
                path: path.to_path_buf(),
                line: e.position().map_or(0, csv::Position::line),
                message: e.to_string(),
            },
        })?;
        let line = rec.position().map_or(0, csv::Position::line);
        out.push((line, rec));
    }
    Ok(out)
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: u64, field: &str, what: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("cannot parse `{field}` as {what}"),
    })
}

fn parse_finite(path: &Path, line: u64, field: &str) -> Result<f64> {
    let v: f64 = parse_field(path, line, field, "a number")?;
    if !v.is_finite() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("`{field}` is not a finite number"),
        });
    }
    Ok(v)
}

/// Reads `user,item,value` rows in file order.
pub fn load_ratings(path: impl AsRef<Path>) -> Result<Vec<Rating>> {
    let path = path.as_ref();
    let records = read_records(path)?;
    let mut rows = records.into_iter();
    let header = match rows.next() {
        Some((_, h)) => h.iter().collect::<Vec<_>>().join(","),
        None => String::new(),
    };
    if header != RATINGS_HEADER {
        return Err(Error::Header {
            path: path.to_path_buf(),
            expected: RATINGS_HEADER,
            found: header,
        });
    }
    rows.map(|(line, rec)| {
        if rec.len() != 3 {
            return Err(Error::Ragged {
                path: path.to_path_buf(),
                line,
                expected: 3,
                found: rec.len(),
            });
        }
        Ok(Rating {
            user: parse_field(path, line, &rec[0], "a user index")?,
            item: parse_field(path, line, &rec[1], "an item index")?,
            value: parse_finite(path, line, &rec[2])?,
        })
    })
    .collect()
}

/// Reads a headerless rectangular numeric CSV. An empty file yields a 0×0 matrix.
pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let records = read_records(path)?;
    let cols = records.first().map_or(0, |(_, r)| r.len());
    let mut data = Vec::with_capacity(records.len() * cols);
    for (line, rec) in &records {
        if rec.len() != cols {
            return Err(Error::Ragged {
                path: path.to_path_buf(),
                line: *line,
                expected: cols,
                found: rec.len(),
            });
        }
        for field in rec {
            data.push(parse_finite(path, *line, field)?);
        }
    }
    DenseMatrix::from_row_major(records.len(), cols, data)
}

/// Reads a single-column numeric CSV.
pub fn load_vector(path: impl AsRef<Path>) -> Result<DenseVector> {
    let path = path.as_ref();
    let m = load_matrix(path)?;
    if m.cols() > 1 {
        return Err(Error::Ragged {
            path: path.to_path_buf(),
            line: 1,
            expected: 1,
            found: m.cols(),
        });
    }
    Ok(m.into_vec())
}

/// Writes one CSV line per matrix row.
pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for row in m.row_iter() {
        let line = row.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        writeln!(w, "{line}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes one value per line.
pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    write_matrix(path, &DenseMatrix::column(v))
}

pub fn write_ratings(path: impl AsRef<Path>, ratings: &[Rating]) -> Result<()> {
    let path = path.as_ref();
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    writeln!(w, "{RATINGS_HEADER}").map_err(io_err(path))?;
    for r in ratings {
        writeln!(w, "{},{},{}", r.user, r.item, r.value).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Either estimator, as stored in an archive.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Model {
    KernelRidge(KernelRidgeModel),
    MatrixFactorization(MfModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::KernelRidge(_) => ModelKind::KernelRidge,
            Model::MatrixFactorization(_) => ModelKind::MfSgd,
        }
    }
}

impl From<KernelRidgeModel> for Model {
    fn from(m: KernelRidgeModel) -> Self {
        Model::KernelRidge(m)
    }
}

impl From<MfModel> for Model {
    fn from(m: MfModel) -> Self {
        Model::MatrixFactorization(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    KernelRidge,
    MfSgd,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::KernelRidge => "kernel_ridge",
            ModelKind::MfSgd => "mf_sgd",
        }
    }
}

/// f64 that survives JSON even when it is not finite.
#[derive(Debug, Clone, Copy)]
struct JsonF64(f64);

impl Serialize for JsonF64 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_nan() {
            s.serialize_str("NaN")
        } else if v == f64::INFINITY {
            s.serialize_str("inf")
        } else if v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(v)
        }
    }
}

impl<'de> Deserialize<'de> for JsonF64 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(JsonF64(v)),
            Repr::Str(s) => match s.as_str() {
                "NaN" => Ok(JsonF64(f64::NAN)),
                "inf" => Ok(JsonF64(f64::INFINITY)),
                "-inf" => Ok(JsonF64(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!("invalid float `{other}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "dtype", rename_all = "lowercase")]
enum Field {
    F64 {
        shape: Vec<usize>,
        data: Vec<JsonF64>,
    },
    U64 {
        shape: Vec<usize>,
        data: Vec<u64>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct Archive {
    kind: String,
    version: u32,
    payload: BTreeMap<String, Field>,
}

#[derive(Default)]
struct Payload(BTreeMap<String, Field>);

impl Payload {
    fn f64s(&mut self, name: &str, shape: Vec<usize>, data: &[f64]) {
        let data = data.iter().copied().map(JsonF64).collect();
        self.0.insert(name.to_owned(), Field::F64 { shape, data });
    }

    fn scalar(&mut self, name: &str, v: f64) {
        self.f64s(name, vec![], &[v]);
    }

    fn u64s(&mut self, name: &str, data: Vec<u64>) {
        self.0.insert(
            name.to_owned(),
            Field::U64 {
                shape: vec![data.len()],
                data,
            },
        );
    }

    fn take(&mut self, name: &str) -> Result<Field> {
        self.0
            .remove(name)
            .ok_or_else(|| Error::Archive(format!("missing field `{name}`")))
    }

    fn get_f64s(&mut self, name: &str) -> Result<(Vec<usize>, Vec<f64>)> {
        match self.take(name)? {
            Field::F64 { shape, data } => {
                let expected: usize = shape.iter().product();
                if expected != data.len() {
                    return Err(Error::Archive(format!(
                        "field `{name}` has shape {shape:?} but {} values",
                        data.len()
                    )));
                }
                Ok((shape, data.into_iter().map(|v| v.0).collect()))
            }
            Field::U64 { .. } => Err(Error::Archive(format!("field `{name}` must be f64"))),
        }
    }

    fn get_scalar(&mut self, name: &str) -> Result<f64> {
        match self.get_f64s(name)? {
            (shape, data) if shape.is_empty() => Ok(data[0]),
            (shape, _) => Err(Error::Archive(format!(
                "field `{name}` must be a scalar, has shape {shape:?}"
            ))),
        }
    }

    fn get_vector(&mut self, name: &str) -> Result<Vec<f64>> {
        match self.get_f64s(name)? {
            (shape, data) if shape.len() == 1 => Ok(data),
            (shape, _) => Err(Error::Archive(format!(
                "field `{name}` must be 1-D, has shape {shape:?}"
            ))),
        }
    }

    fn get_matrix(&mut self, name: &str) -> Result<DenseMatrix> {
        match self.get_f64s(name)? {
            (shape, data) if shape.len() == 2 => {
                DenseMatrix::from_row_major(shape[0], shape[1], data)
            }
            (shape, _) => Err(Error::Archive(format!(
                "field `{name}` must be 2-D, has shape {shape:?}"
            ))),
        }
    }

    fn get_u64s(&mut self, name: &str, len: usize) -> Result<Vec<u64>> {
        match self.take(name)? {
            Field::U64 { data, .. } if data.len() == len => Ok(data),
            _ => Err(Error::Archive(format!(
                "field `{name}` must hold {len} u64 values"
            ))),
        }
    }

    fn get_usize(&mut self, name: &str) -> Result<usize> {
        let v = self.get_u64s(name, 1)?[0];
        usize::try_from(v).map_err(|_| Error::Archive(format!("field `{name}` out of range")))
    }
}

fn matrix_field(p: &mut Payload, name: &str, m: &DenseMatrix) {
    p.f64s(name, vec![m.rows(), m.cols()], m.as_slice());
}

fn encode(model: &Model) -> Archive {
    let mut p = Payload::default();
    match model {
        Model::KernelRidge(m) => {
            p.scalar("lambda", m.lambda());
            p.scalar("sigma", m.sigma());
            p.scalar("y_mean", m.y_mean());
            matrix_field(&mut p, "x_train", m.x_train());
            p.f64s("alpha", vec![m.alpha().len()], m.alpha());
        }
        Model::MatrixFactorization(m) => {
            let c = m.config();
            p.u64s("n_users", vec![c.n_users as u64]);
            p.u64s("n_items", vec![c.n_items as u64]);
            p.u64s("n_factors", vec![c.n_factors as u64]);
            p.u64s("n_epochs", vec![c.n_epochs as u64]);
            p.u64s("seed", vec![c.seed]);
            p.scalar("lr", c.lr);
            p.scalar("reg", c.reg);
            p.scalar("global_mean", m.global_mean());
            matrix_field(&mut p, "user_factors", m.user_factors());
            matrix_field(&mut p, "item_factors", m.item_factors());
            p.f64s("user_bias", vec![m.user_bias().len()], m.user_bias());
            p.f64s("item_bias", vec![m.item_bias().len()], m.item_bias());
            let pos = m.rng_word_pos();
            p.u64s("rng_word_pos", vec![(pos >> 64) as u64, pos as u64]);
        }
    }
    Archive {
        kind: model.kind().as_str().to_owned(),
        version: ARCHIVE_VERSION,
        payload: p.0,
    }
}

fn decode(archive: Archive) -> Result<Model> {
    if archive.version != ARCHIVE_VERSION {
        return Err(Error::VersionMismatch {
            found: archive.version,
            supported: ARCHIVE_VERSION,
        });
    }
    let mut p = Payload(archive.payload);
    match archive.kind.as_str() {
        "kernel_ridge" => {
            let config = KernelRidgeConfig::new(p.get_scalar("lambda")?, p.get_scalar("sigma")?)?;
            let y_mean = p.get_scalar("y_mean")?;
            let x_train = p.get_matrix("x_train")?;
            let alpha = p.get_vector("alpha")?;
            Ok(KernelRidgeModel::from_parts(config, x_train, alpha, y_mean)?.into())
        }
        "mf_sgd" => {
            let config = MfConfig {
                n_users: p.get_usize("n_users")?,
                n_items: p.get_usize("n_items")?,
                n_factors: p.get_usize("n_factors")?,
                n_epochs: p.get_usize("n_epochs")?,
                seed: p.get_u64s("seed", 1)?[0],
                lr: p.get_scalar("lr")?,
                reg: p.get_scalar("reg")?,
            };
            let global_mean = p.get_scalar("global_mean")?;
            let pm = p.get_matrix("user_factors")?;
            let qm = p.get_matrix("item_factors")?;
            let bu = p.get_vector("user_bias")?;
            let bi = p.get_vector("item_bias")?;
            let pos = p.get_u64s("rng_word_pos", 2)?;
            let word_pos = (u128::from(pos[0]) << 64) | u128::from(pos[1]);
            Ok(MfModel::from_parts(config, pm, qm, bu, bi, global_mean, word_pos)?.into())
        }
        other => Err(Error::Archive(format!("unknown model kind `{other}`"))),
    }
}

/// Serializes a model to its archive text.
pub fn model_to_string(model: &Model) -> String {
    serde_json::to_string_pretty(&encode(model)).expect("archive serialization is infallible")
}

/// Parses archive text.
pub fn model_from_str(text: &str) -> Result<Model> {
    let archive: Archive = serde_json::from_str(text).map_err(|e| Error::Archive(e.to_string()))?;
    decode(archive)
}

pub fn save_model(model: &Model, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, model_to_string(model)).map_err(io_err(path))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(io_err(path))?;
    model_from_str(&text)
}

/// Loads an archive that must hold a kernel ridge model.
pub fn load_kernel_ridge(path: impl AsRef<Path>) -> Result<KernelRidgeModel> {
    match load_model(path)? {
        Model::KernelRidge(m) => Ok(m),
        other => Err(Error::KindMismatch {
            expected: ModelKind::KernelRidge.as_str(),
            found: other.kind().as_str(),
        }),
    }
}

/// Loads an archive that must hold a matrix factorization model.
pub fn load_mf(path: impl AsRef<Path>) -> Result<MfModel> {
    match load_model(path)? {
        Model::MatrixFactorization(m) => Ok(m),
        other => Err(Error::KindMismatch {
            expected: ModelKind::MfSgd.as_str(),
            found: other.kind().as_str(),
        }),
    }
}
