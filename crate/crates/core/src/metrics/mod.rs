//! Distribution-level comparison of two graph sets.
//!
//! Each statistic turns every graph into a normalized histogram (degree,
//! local clustering, normalized-Laplacian spectrum) and compares the two sets
//! of histograms with the biased Gaussian-kernel MMD, `sigma = 1`. Degree
//! histograms run to the largest degree in either set.

use std::fmt;

use rayon::prelude::*;

use crate::fitness::{clustering_histogram, degree_histogram, gaussian_mmd2, spectrum_histogram};
use crate::graph::SparseGraph;

pub const METRIC_SIGMA: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub degree_mmd: f64,
    pub clustering_mmd: f64,
    pub spectral_mmd: f64,
    /// Reference set size.
    pub m: usize,
    /// Generated set size.
    pub n: usize,
}

fn histograms(graphs: &[SparseGraph], f: fn(&SparseGraph) -> Vec<f64>) -> Vec<Vec<f64>> {
    graphs.par_iter().map(f).collect()
}

fn statistic(reference: &[SparseGraph], generated: &[SparseGraph], f: fn(&SparseGraph) -> Vec<f64>) -> f64 {
    gaussian_mmd2(&histograms(reference, f), &histograms(generated, f), METRIC_SIGMA)
}

/// Compares `generated` against `reference`.
///
/// # Panics
/// If either set is empty.
pub fn eval_sets(reference: &[SparseGraph], generated: &[SparseGraph]) -> MetricReport {
    assert!(
        !reference.is_empty() && !generated.is_empty(),
        "both graph sets must be non-empty"
    );
    MetricReport {
        degree_mmd: statistic(reference, generated, degree_histogram),
        clustering_mmd: statistic(reference, generated, clustering_histogram),
        spectral_mmd: statistic(reference, generated, spectrum_histogram),
        m: reference.len(),
        n: generated.len(),
    }
}

impl MetricReport {
    pub fn values(&self) -> [(&'static str, f64); 3] {
        [
            ("degree_mmd", self.degree_mmd),
            ("clustering_mmd", self.clustering_mmd),
            ("spectral_mmd", self.spectral_mmd),
        ]
    }

    /// `key=value` lines, one per field.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.values() {
            out.push_str(&format!("{k}={v:e}\n"));
        }
        out.push_str(&format!("m={}\nn={}\n", self.m, self.n));
        out
    }

    /// Parses [`MetricReport::to_kv`] output.
    pub fn from_kv(text: &str) -> Option<MetricReport> {
        let mut r = MetricReport {
            degree_mmd: f64::NAN,
            clustering_mmd: f64::NAN,
            spectral_mmd: f64::NAN,
            m: 0,
            n: 0,
        };
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line.split_once('=')?;
            match k.trim() {
                "degree_mmd" => r.degree_mmd = v.trim().parse().ok()?,
                "clustering_mmd" => r.clustering_mmd = v.trim().parse().ok()?,
                "spectral_mmd" => r.spectral_mmd = v.trim().parse().ok()?,
                "m" => r.m = v.trim().parse().ok()?,
                "n" => r.n = v.trim().parse().ok()?,
                _ => return None,
            }
        }
        r.values().iter().all(|(_, v)| !v.is_nan()).then_some(r)
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "reference graphs: {}   generated graphs: {}", self.m, self.n)?;
        writeln!(f, "{:<12} {:>14}", "statistic", "MMD^2")?;
        for (name, v) in [
            ("degree", self.degree_mmd),
            ("clustering", self.clustering_mmd),
            ("spectral", self.spectral_mmd),
        ] {
            writeln!(f, "{name:<12} {v:>14.6e}")?;
        }
        Ok(())
    }
}
