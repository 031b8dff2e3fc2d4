//! CSV tables and manifests, written atomically.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field {
    Int(i64),
    Real(f64),
    Text(&'static str),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(v.into())
    }
}

impl From<Option<f64>> for Field {
    /// Undefined values become `nan`.
    fn from(v: Option<f64>) -> Self {
        Field::Real(v.unwrap_or(f64::NAN))
    }
}

impl From<&'static str> for Field {
    fn from(v: &'static str) -> Self {
        Field::Text(v)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reals use 17 significant digits so every value round-trips.
    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, field) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match *field {
                    Field::Int(v) => write!(out, "{v}"),
                    Field::Real(v) if v.is_nan() => write!(out, "nan"),
                    Field::Real(v) => write!(out, "{v:.16e}"),
                    Field::Text(v) => write!(out, "{v}"),
                }
                .expect("writing to a String cannot fail");
            }
            out.push('\n');
        }
        out
    }
}

/// Writes through a temporary file in the destination directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
