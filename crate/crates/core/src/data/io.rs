//! Dataset text format.
//!
//! ```text
//! # comment
//! g 12 1 4
//! e 0 1
//! e 0 4
//! ```
//!
//! A `g <node_count> <aux_count> <aux...>` line opens a graph and each
//! following `e <u> <v>` line (with `u < v`) adds one edge to it. The split
//! lives next to the dataset in `<path>.split` as two lines, `train <idx...>`
//! and `test <idx...>`.

use std::collections::HashSet;
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use super::{DataError, Dataset, DatasetRecord, Split};
use crate::graph::SparseGraph;

pub fn format_dataset(records: &[DatasetRecord]) -> String {
    let mut out = String::new();
    for rec in records {
        let _ = write!(out, "g {} {}", rec.graph.node_count(), rec.aux.len());
        for a in &rec.aux {
            let _ = write!(out, " {a}");
        }
        out.push('\n');
        for (u, v) in rec.graph.edges() {
            let _ = writeln!(out, "e {u} {v}");
        }
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> DataError {
    DataError::Parse {
        line,
        message: message.into(),
    }
}

fn numbers<T: std::str::FromStr>(words: &[&str], line: usize) -> Result<Vec<T>, DataError> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| parse_err(line, format!("bad number `{w}`"))))
        .collect()
}

pub fn parse_dataset(text: &str) -> Result<Vec<DatasetRecord>, DataError> {
    let mut records: Vec<DatasetRecord> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "g" => {
                let nums: Vec<i64> = numbers(&words[1..], line_no)?;
                if nums.len() < 2 {
                    return Err(parse_err(line_no, "`g` needs a node count and an aux count"));
                }
                let (n, k) = (nums[0], nums[1]);
                if n < 0 || k < 0 || nums.len() != 2 + k as usize {
                    return Err(parse_err(line_no, format!("`g` line declares {k} aux values")));
                }
                let aux = nums[2..].to_vec();
                if aux.iter().any(|&a| a < 0) {
                    return Err(parse_err(line_no, "aux values must be non-negative"));
                }
                records.push(DatasetRecord::new(SparseGraph::new(n as usize), aux));
                seen.clear();
            }
            "e" => {
                let rec = records
                    .last_mut()
                    .ok_or_else(|| parse_err(line_no, "edge before any `g` line"))?;
                let nums: Vec<usize> = numbers(&words[1..], line_no)?;
                let &[u, v] = nums.as_slice() else {
                    return Err(parse_err(line_no, "`e` needs two node indices"));
                };
                let n = rec.graph.node_count();
                if u >= v {
                    return Err(parse_err(line_no, format!("edge ({u}, {v}) must satisfy u < v")));
                }
                if v >= n {
                    return Err(parse_err(line_no, format!("node {v} out of range for {n} nodes")));
                }
                if !seen.insert((u, v)) {
                    return Err(parse_err(line_no, format!("duplicate edge ({u}, {v})")));
                }
                rec.graph.add_edge(u as i64, v as i64);
            }
            other => return Err(parse_err(line_no, format!("unknown record type `{other}`"))),
        }
    }
    Ok(records)
}

pub fn split_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".split");
    PathBuf::from(s)
}

fn format_split(split: &Split) -> String {
    let join = |v: &[usize]| v.iter().map(|i| format!(" {i}")).collect::<String>();
    format!("train{}\ntest{}\n", join(&split.train), join(&split.test))
}

pub fn parse_split(text: &str, len: usize) -> Result<Split, DataError> {
    let mut split = Split::default();
    let (mut got_train, mut got_test) = (false, false);
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or_default();
        let idx: Vec<usize> = words
            .map(|w| w.parse().map_err(|_| DataError::Split(format!("bad index `{w}`"))))
            .collect::<Result<_, _>>()?;
        match head {
            "train" if !got_train => (split.train, got_train) = (idx, true),
            "test" if !got_test => (split.test, got_test) = (idx, true),
            _ => return Err(DataError::Split(format!("unexpected line `{line}`"))),
        }
    }
    split.validate(len)?;
    Ok(split)
}

/// Writes the dataset and its split sidecar.
pub fn write_dataset(ds: &Dataset, path: &Path) -> Result<(), DataError> {
    fs::write(path, format_dataset(&ds.records))?;
    fs::write(split_path(path), format_split(&ds.split))?;
    Ok(())
}

/// Reads a dataset. Without a sidecar the default split is used.
pub fn read_dataset(path: &Path) -> Result<Dataset, DataError> {
    let records = parse_dataset(&fs::read_to_string(path)?)?;
    let sidecar = split_path(path);
    if sidecar.exists() {
        let split = parse_split(&fs::read_to_string(sidecar)?, records.len())?;
        Ok(Dataset { records, split })
    } else {
        Ok(Dataset::new(records))
    }
}
