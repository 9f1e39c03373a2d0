//! CSV tables, JSON summaries and gnuplot scripts.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so equal
//! values always produce equal bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

/// A CSV table with a header row; every experiment appends the config hash
/// as the last column.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// `{config_hash, verdicts, maxima}` plus observations that are reported
/// but do not decide the exit status.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub config_hash: String,
    pub verdicts: BTreeMap<String, bool>,
    pub observations: BTreeMap<String, bool>,
    pub maxima: BTreeMap<String, Option<f64>>,
}

impl Summary {
    pub fn new(experiment: &str, config_hash: &str) -> Self {
        Self {
            experiment: experiment.into(),
            config_hash: config_hash.into(),
            verdicts: BTreeMap::new(),
            observations: BTreeMap::new(),
            maxima: BTreeMap::new(),
        }
    }

    pub fn verdict(&mut self, name: impl Into<String>, ok: bool) {
        self.verdicts.insert(name.into(), ok);
    }

    pub fn observation(&mut self, name: impl Into<String>, seen: bool) {
        self.observations.insert(name.into(), seen);
    }

    /// Non-finite values are stored as `null`.
    pub fn maximum(&mut self, name: impl Into<String>, value: f64) {
        self.maxima.insert(name.into(), value.is_finite().then_some(value));
    }

    pub fn passed(&self) -> bool {
        self.verdicts.values().all(|&ok| ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub tables: Vec<Table>,
    pub summary: Summary,
    /// `(file name, gnuplot script)`
    pub plots: Vec<(String, String)>,
}

impl Output {
    /// Write `<table>.csv` for every table, `<experiment>_summary.json`, and
    /// the plot scripts when `plots` is set. Returns the written paths.
    pub fn write(&self, dir: &Path, plots: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::new();
        let mut put = |name: &str, text: &str| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);
            Ok(())
        };
        for t in &self.tables {
            put(&format!("{}.csv", t.name), &t.to_csv())?;
        }
        put(&format!("{}_summary.json", self.summary.experiment.replace('-', "_")), &self.summary.to_json())?;
        if plots {
            for (name, script) in &self.plots {
                put(name, script)?;
            }
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_summary_nulls() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(vec!["x,y".into(), "1".into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1\n");
        let mut s = Summary::new("e", "h");
        s.maximum("inf", f64::INFINITY);
        s.verdict("ok", true);
        assert!(s.passed());
        assert!(s.to_json().contains("\"inf\": null"));
        s.verdict("bad", false);
        assert!(!s.passed());
    }

    #[test]
    fn writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = Output {
            tables: vec![Table::new("rows", &["a"])],
            summary: Summary::new("wave-sweep", "h"),
            plots: vec![("p.gp".into(), "plot 'rows.csv'\n".into())],
        };
        let paths = out.write(dir.path(), true).unwrap();
        assert_eq!(paths.len(), 3);
        assert!(dir.path().join("wave_sweep_summary.json").exists());
        assert_eq!(out.write(dir.path(), false).unwrap().len(), 2);
    }
}
