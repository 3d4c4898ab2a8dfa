//! CSV tables with comment headers, and all-or-nothing bundle writing.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub(crate) struct Table {
    pub file: &'static str,
    title: &'static str,
    columns: &'static [&'static str],
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &'static str, title: &'static str, columns: &'static [&'static str]) -> Self {
        Self {
            file,
            title,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "{}", self.file);
        self.rows.push(row);
    }

    /// Comment header (`# table`, `# mode`, `# inputs-sha256`) followed by CSV.
    pub fn render(&self, mode: &str, inputs_sha256: &str) -> Result<String> {
        let mut out = format!(
            "# table: {}\n# mode: {mode}\n# inputs-sha256: {inputs_sha256}\n",
            self.title
        );
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Validation(format!("{}: {e}", self.file));
        writer.write_record(self.columns).map_err(csv_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(csv_err)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Validation(format!("{}: {e}", self.file)))?;
        out.push_str(&String::from_utf8(bytes).expect("CSV of UTF-8 fields"));
        Ok(out)
    }
}

/// Shortest round-trip form; non-finite values as `inf`, `-inf`, `nan`.
pub(crate) fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Write every file into `dir`. On failure the files already written are
/// removed, and so is `dir` if this call created it.
pub(crate) fn write_all(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    let created = !dir.exists();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        if let Some(parent) = path.parent() {
            if let Err(e) = std::fs::create_dir_all(parent) {
                cleanup(dir, &written, created);
                return Err(Error::io(parent, e));
            }
        }
        if let Err(e) = std::fs::write(&path, bytes) {
            cleanup(dir, &written, created);
            return Err(Error::io(&path, e));
        }
        written.push(path);
    }
    Ok(written)
}

fn cleanup(dir: &Path, written: &[PathBuf], created: bool) {
    for path in written {
        let _ = std::fs::remove_file(path);
    }
    if created {
        let _ = std::fs::remove_dir_all(dir);
    }
}
