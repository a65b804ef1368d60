//! CSV tables and JSON summary sidecars.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Formats with 12 significant digits, plain decimal where reasonable.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Header, rows, and optional `#`-prefixed trailer lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub trailer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Comma-separated, LF line endings.
    pub fn render(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("in-memory write");
        }
        let mut out =
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells");
        for line in &self.trailer {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// `<output>.json` next to the CSV.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Output {
        path: path.display().to_string(),
        source,
    })
}

/// Fails early when the output file cannot be created.
pub fn check_writable(path: &Path) -> Result<(), CliError> {
    let existed = path.exists();
    fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map(drop)
        .map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        })?;
    if !existed {
        // Leave nothing behind if the run itself fails later.
        let _ = fs::remove_file(path);
    }
    Ok(())
}

/// Writes the CSV and its sidecar, or the CSV to stdout and the summary to stderr.
pub fn emit(
    table: &Table,
    summary: &serde_json::Value,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let summary = serde_json::to_string_pretty(summary).expect("summary is valid JSON") + "\n";
    match output {
        Some(path) => {
            write_file(path, &table.render())?;
            write_file(&sidecar_path(path), &summary)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(table.render().as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })?;
            eprint!("{summary}");
            Ok(())
        }
    }
}
