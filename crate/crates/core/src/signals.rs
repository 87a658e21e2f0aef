//! Sampled signals, CSV ingestion and Hankel matrices.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// A finite real signal `s_0, …, s_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidData(
                "time series must hold at least one sample".into(),
            ));
        }
        if let Some(t) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite sample at t = {t}")));
        }
        Ok(Self { samples })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a series holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// The last time index `T`.
    pub fn horizon(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|v| v * factor).collect())
    }
}

impl std::ops::Index<usize> for TimeSeries {
    type Output = f64;

    fn index(&self, t: usize) -> &f64 {
        &self.samples[t]
    }
}

/// Input/output samples `(U, Y)` over a shared horizon.
#[derive(Clone, Debug, PartialEq)]
pub struct DataSet {
    input: TimeSeries,
    output: TimeSeries,
}

impl DataSet {
    pub fn new(input: TimeSeries, output: TimeSeries) -> Result<Self> {
        if input.len() != output.len() {
            return Err(Error::InvalidData(format!(
                "input has {} samples but output has {}",
                input.len(),
                output.len()
            )));
        }
        Ok(Self { input, output })
    }

    pub fn from_vecs(input: Vec<f64>, output: Vec<f64>) -> Result<Self> {
        Self::new(TimeSeries::new(input)?, TimeSeries::new(output)?)
    }

    pub fn input(&self) -> &TimeSeries {
        &self.input
    }

    pub fn output(&self) -> &TimeSeries {
        &self.output
    }

    pub fn horizon(&self) -> usize {
        self.input.horizon()
    }

    /// Both signals multiplied by the same factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.input.scaled(factor)?, self.output.scaled(factor)?)
    }

    /// Renders the data as `t,u,y` CSV. Values use the shortest representation
    /// that parses back to the same `f64`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,u,y\n");
        for (t, (u, y)) in self
            .input
            .samples
            .iter()
            .zip(&self.output.samples)
            .enumerate()
        {
            out.push_str(&format!("{t},{u},{y}\n"));
        }
        out
    }
}

/// Loads a `t,u,y` CSV file.
pub fn load_csv(path: impl AsRef<Path>) -> Result<DataSet> {
    let path = path.as_ref();
    let (u, y) = read_columns(path, true)?;
    DataSet::from_vecs(u, y.expect("output column is required"))
}

/// Loads only the input column of a `t,u[,y]` CSV file.
pub fn load_input_csv(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let (u, _) = read_columns(path.as_ref(), false)?;
    TimeSeries::new(u)
}

/// Parses `t,u,y` CSV text; `origin` only labels error messages.
pub fn parse_csv(text: &str, origin: impl AsRef<Path>) -> Result<DataSet> {
    let (u, y) = parse_columns(text.as_bytes(), origin.as_ref(), true)?;
    DataSet::from_vecs(u, y.expect("output column is required"))
}

fn read_columns(path: &Path, require_output: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut text = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut text))
        .map_err(io_err)?;
    parse_columns(&text, path, require_output)
}

fn parse_columns(
    text: &[u8],
    path: &Path,
    require_output: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let header_err = |message: String| Error::CsvHeader {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::None)
        .from_reader(text);

    let headers = reader
        .headers()
        .map_err(|e| header_err(format!("unreadable header: {e}")))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let expected: &[&str] = if require_output || names.len() == 3 {
        &["t", "u", "y"]
    } else {
        &["t", "u"]
    };
    if names != expected {
        return Err(header_err(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            names.join(",")
        )));
    }
    let has_output = names.len() == 3;

    let mut u = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::Csv {
                path: path.to_path_buf(),
                row,
                message: format!("malformed row ({e})"),
            }
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let row_err = |message: String| Error::Csv {
            path: path.to_path_buf(),
            row,
            message,
        };
        if record.len() != names.len() {
            return Err(row_err(format!(
                "malformed row (expected {} fields, found {})",
                names.len(),
                record.len()
            )));
        }
        let t: usize = record[0]
            .parse()
            .map_err(|_| row_err(format!("malformed time index `{}`", &record[0])))?;
        if t != u.len() {
            return Err(row_err("non-contiguous time index".into()));
        }
        u.push(parse_value(&record[1], "u").map_err(&row_err)?);
        if has_output {
            y.push(parse_value(&record[2], "y").map_err(&row_err)?);
        }
    }
    if u.is_empty() {
        return Err(header_err("no data rows".into()));
    }
    Ok((u, has_output.then_some(y)))
}

fn parse_value(field: &str, column: &str) -> std::result::Result<f64, String> {
    let value: f64 = field
        .parse()
        .map_err(|_| format!("malformed value `{field}` in column {column}"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("non-finite value `{field}` in column {column}"))
    }
}

/// Hankel matrix of depth `depth`: `(depth+1) × (T-depth+1)` with entry
/// `(i, j) = s[i + j]`.
pub fn hankel(series: &TimeSeries, depth: usize) -> Result<DMatrix<f64>> {
    let horizon = series.horizon();
    if depth > horizon {
        return Err(Error::DepthExceedsHorizon { depth, horizon });
    }
    let s = series.samples();
    Ok(DMatrix::from_fn(depth + 1, horizon - depth + 1, |i, j| {
        s[i + j]
    }))
}

/// `hankel(series, n)` without its last row.
pub fn hankel_trimmed(series: &TimeSeries, n: usize) -> Result<DMatrix<f64>> {
    let full = hankel(series, n)?;
    Ok(full.rows(0, n).into_owned())
}
