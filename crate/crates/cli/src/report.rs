//! CSV experiment reports. Every report echoes its full configuration
//! (including both user-visible seeds) as `#` comment lines, then a header
//! row and data rows; re-running with the same configuration reproduces the
//! bytes exactly, so wall time goes to stderr rather than into the file.

use std::fs;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub header: String,
    pub rows: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>, header: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            params: Vec::new(),
            header: header.into(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# experiment={}\n", self.name));
        for (k, v) in &self.params {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        out
    }

    /// Writes to the file when given, otherwise to stdout.
    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        match out {
            Some(path) => fs::write(path, self.to_csv())
                .map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display())),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(self.to_csv().as_bytes())?;
                Ok(())
            }
        }
    }
}

/// Canonical float formatting for CSV cells.
pub fn cell(v: f64) -> String {
    format!("{v:.6}")
}
