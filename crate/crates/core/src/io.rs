//! Small CSV helpers shared by every exporter.
//!
//! Floats are written with 17 significant digits so files round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;

pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(header: &str) -> Self {
        let mut buf = String::with_capacity(1 << 16);
        buf.push_str(header);
        buf.push('\n');
        CsvWriter { buf }
    }

    pub fn row_f64(&mut self, vals: &[f64]) {
        for (j, v) in vals.iter().enumerate() {
            if j > 0 {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{:.16e}", v);
        }
        self.buf.push('\n');
    }

    /// Row made of preformatted cells.
    pub fn row(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.buf
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        fs::write(path, &self.buf)?;
        Ok(())
    }
}
