//! Deterministic CSV tables and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        // avoid "-0.0000000000e0"
        return format!("{:.10e}", 0.0);
    }
    format!("{v:.10e}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// What produced a table; written as `#` lines ahead of the header.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub config_path: PathBuf,
    pub config_digest: String,
    pub out_dir: PathBuf,
    /// Grid and option settings, in display order.
    pub grid: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(manifest: &RunManifest, header: &[&str]) -> Self {
        let mut metadata = vec![
            ("format_version".to_string(), FORMAT_VERSION.to_string()),
            ("command".to_string(), manifest.command.clone()),
            ("config".to_string(), manifest.config_path.display().to_string()),
            ("config_sha256".to_string(), manifest.config_digest.clone()),
        ];
        metadata.extend(manifest.grid.iter().cloned());
        Self { metadata, header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

/// Output directory that refuses to replace files unless allowed to.
#[derive(Debug, Clone)]
pub struct OutputDir {
    dir: PathBuf,
    overwrite: bool,
}

impl OutputDir {
    pub fn new(dir: &Path, overwrite: bool) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), overwrite })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Fails before anything is written if any target already exists.
    pub fn reserve(&self, names: &[String]) -> Result<()> {
        if self.overwrite {
            return Ok(());
        }
        for name in names {
            let p = self.path(name);
            if p.exists() {
                return Err(Error::OutputExists(p));
            }
        }
        Ok(())
    }

    /// Writes through a temporary file in the same directory and renames it
    /// into place.
    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let target = self.path(name);
        if !self.overwrite && target.exists() {
            return Err(Error::OutputExists(target));
        }
        let tmp = self.path(&format!(".{name}.tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })?;
        Ok(target)
    }
}
