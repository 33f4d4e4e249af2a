//! Plain-text vector files: one decimal per line, `#` starts a comment line,
//! blank lines are skipped.

use std::fs;
use std::path::{Path, PathBuf};

use owl_core::{oscar_weights, OscarParams, WeightVector};

use crate::error::{Error, Result};

/// Values paired with their 1-based line numbers.
pub fn parse_vector(text: &str, path: &Path) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("expected a number, found {line:?}"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("value {line} is not finite"),
            });
        }
        out.push((i + 1, v));
    }
    Ok(out)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = read_text(path)?;
    Ok(parse_vector(&text, path)?
        .into_iter()
        .map(|(_, v)| v)
        .collect())
}

pub fn format_vector(x: &[f64]) -> String {
    let mut s = String::with_capacity(x.len() * 20);
    for v in x {
        s.push_str(&format!("{v:?}\n"));
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_vector(path: &Path, x: &[f64]) -> Result<()> {
    write_text(path, &format_vector(x))
}

/// Reads a weight file, reporting validation failures at the offending line.
pub fn read_weights(path: &Path) -> Result<WeightVector> {
    let text = read_text(path)?;
    let entries = parse_vector(&text, path)?;
    let (lines, values): (Vec<usize>, Vec<f64>) = entries.into_iter().unzip();
    WeightVector::new(values).map_err(|e| {
        // NotSorted names the first entry of the increasing pair; point at
        // the second.
        let line = match e {
            owl_core::Error::NotSorted { index } => lines.get(index + 1).copied(),
            owl_core::Error::Negative { index } | owl_core::Error::NonFinite { index } => {
                lines.get(index).copied()
            }
            _ => None,
        };
        match line {
            Some(line) => Error::InvalidWeights {
                path: path.to_path_buf(),
                line,
                source: e,
            },
            None => Error::Core(e),
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    File(PathBuf),
    Oscar { mu1: f64, mu2: f64 },
}

impl std::str::FromStr for WeightSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let Some(rest) = s.strip_prefix("oscar:") else {
            return Ok(WeightSpec::File(PathBuf::from(s)));
        };
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        let [a, b] = parts[..] else {
            return Err(format!("expected oscar:MU1,MU2, found {s:?}"));
        };
        let parse = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| format!("bad OSCAR parameter {t:?}"))
        };
        Ok(WeightSpec::Oscar {
            mu1: parse(a)?,
            mu2: parse(b)?,
        })
    }
}

impl WeightSpec {
    pub fn resolve(&self, n: usize) -> Result<WeightVector> {
        let w = match self {
            WeightSpec::File(p) => read_weights(p)?,
            WeightSpec::Oscar { mu1, mu2 } => oscar_weights(OscarParams::new(*mu1, *mu2, n)?)?,
        };
        if w.len() != n {
            return Err(owl_core::Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            }
            .into());
        }
        Ok(w)
    }
}
