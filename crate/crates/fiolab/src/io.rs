//! Grid function files.
//!
//! The binary container `name.bin` holds the samples in row-major order as
//! little-endian `(re, im)` pairs of `f64`; the sidecar `name.json` holds
//! `{"n": .., "L": .., "N": ..}`. For small grids a CSV file with a leading
//! `# n=.. L=.. N=..` line and columns `i0,i1,x1,x2,re,im` is also available.

use std::fs;
use std::path::{Path, PathBuf};

use fiolab_core::{Complex64, GridFunction, GridSpec};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "N")]
    pub samples: usize,
}

impl GridMeta {
    pub fn of(spec: &GridSpec) -> Self {
        Self { n: spec.dim(), length: spec.length(), samples: spec.samples() }
    }

    pub fn spec(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(self.n, self.length, self.samples)?)
    }
}

pub fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

pub fn write_grid(f: &GridFunction, bin: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 * f.values().len());
    for z in f.values() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    fs::write(bin, bytes).map_err(|e| Error::io(bin, e))?;
    let meta = serde_json::to_string_pretty(&GridMeta::of(f.spec())).expect("metadata serializes");
    let side = sidecar_path(bin);
    fs::write(&side, meta + "\n").map_err(|e| Error::io(side, e))
}

pub fn read_grid(bin: &Path) -> Result<GridFunction> {
    let side = sidecar_path(bin);
    let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta: GridMeta = serde_json::from_str(&text).map_err(|e| Error::format(&side, e))?;
    let spec = meta.spec()?;
    let bytes = fs::read(bin).map_err(|e| Error::io(bin, e))?;
    if bytes.len() != 16 * spec.len() {
        return Err(Error::format(bin, format!("expected {} bytes for {:?}, found {}", 16 * spec.len(), meta, bytes.len())));
    }
    let word = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    let values = bytes.chunks_exact(16).map(|c| Complex64::new(word(&c[..8]), word(&c[8..]))).collect();
    Ok(GridFunction::new(spec, values)?)
}

pub fn write_grid_csv(f: &GridFunction, path: &Path) -> Result<()> {
    let spec = f.spec();
    let mut out = format!("# n={} L={} N={}\n", spec.dim(), spec.length(), spec.samples());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i0", "i1", "x1", "x2", "re", "im"]).map_err(|e| Error::format(path, e))?;
    let n = spec.samples();
    for (idx, z) in f.values().iter().enumerate() {
        let (i0, i1) = if spec.dim() == 1 { (idx, 0) } else { (idx / n, idx % n) };
        let x = spec.point(idx);
        w.serialize((i0, i1, x[0], x[1], z.re, z.im)).map_err(|e| Error::format(path, e))?;
    }
    out.push_str(&String::from_utf8(w.into_inner().map_err(|e| Error::format(path, e))?).expect("csv is utf-8"));
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_grid_csv(path: &Path) -> Result<GridFunction> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (first, body) = text.split_once('\n').ok_or_else(|| Error::format(path, "empty file"))?;
    let meta = parse_csv_header(first).ok_or_else(|| Error::format(path, format!("bad header line {first:?}")))?;
    let spec = meta.spec()?;
    let mut values = vec![Complex64::new(0.0, 0.0); spec.len()];
    let mut seen = vec![false; spec.len()];
    let n = spec.samples();
    for row in csv::Reader::from_reader(body.as_bytes()).deserialize::<(usize, usize, f64, f64, f64, f64)>() {
        let (i0, i1, _, _, re, im) = row.map_err(|e| Error::format(path, e))?;
        let idx = if spec.dim() == 1 { i0 } else { i0 * n + i1 };
        if idx >= spec.len() || (spec.dim() == 1 && i1 != 0) || (spec.dim() == 2 && i1 >= n) {
            return Err(Error::format(path, format!("sample index ({i0}, {i1}) outside the grid")));
        }
        values[idx] = Complex64::new(re, im);
        seen[idx] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::format(path, format!("sample {missing} missing")));
    }
    Ok(GridFunction::new(spec, values)?)
}

fn parse_csv_header(line: &str) -> Option<GridMeta> {
    let mut n = None;
    let mut length = None;
    let mut samples = None;
    for field in line.strip_prefix('#')?.split_whitespace() {
        let (key, value) = field.split_once('=')?;
        match key {
            "n" => n = value.parse().ok(),
            "L" => length = value.parse().ok(),
            "N" => samples = value.parse().ok(),
            _ => return None,
        }
    }
    Some(GridMeta { n: n?, length: length?, samples: samples? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(dim: usize) -> GridFunction {
        let spec = GridSpec::new(dim, 3.0, 8).unwrap();
        GridFunction::from_fn(spec, |x| Complex64::new(x[0].sin() + x[1], x[0] * x[1] - 0.1)).unwrap()
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        for dim in [1, 2] {
            let f = sample(dim);
            let path = dir.path().join(format!("f{dim}.bin"));
            write_grid(&f, &path).unwrap();
            let g = read_grid(&path).unwrap();
            assert_eq!(g.spec(), f.spec());
            assert_eq!(g.values(), f.values());
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        for dim in [1, 2] {
            let f = sample(dim);
            let path = dir.path().join(format!("f{dim}.csv"));
            write_grid_csv(&f, &path).unwrap();
            assert_eq!(read_grid_csv(&path).unwrap().values(), f.values());
        }
    }

    #[test]
    fn truncated_container_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.bin");
        write_grid(&sample(2), &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 16]).unwrap();
        assert!(matches!(read_grid(&path), Err(Error::Format { .. })));
        assert!(matches!(read_grid(&dir.path().join("missing.bin")), Err(Error::Io { .. })));
    }
}
