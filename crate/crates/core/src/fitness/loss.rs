use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gin::{embed_graph, init_gin, GinParams, Readout};
use super::hist::{clustering_histogram, degree_histogram, spectrum_histogram};
use super::mmd::{gaussian_kernel, kernel_mean, mmd2_from_means};
use crate::code::{CodeLimits, Individual};
use crate::data::DatasetRecord;
use crate::exec::Memory;
use crate::graph::SparseGraph;
use crate::rng::Prng;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractorKind {
    #[default]
    Gin,
    DegreeHist,
    ClusteringHist,
    SpectrumHist,
}

impl ExtractorKind {
    pub const ALL: [ExtractorKind; 4] = [
        ExtractorKind::Gin,
        ExtractorKind::DegreeHist,
        ExtractorKind::ClusteringHist,
        ExtractorKind::SpectrumHist,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtractorKind::Gin => "gin",
            ExtractorKind::DegreeHist => "degree_hist",
            ExtractorKind::ClusteringHist => "clustering_hist",
            ExtractorKind::SpectrumHist => "spectrum_hist",
        }
    }
}

impl fmt::Display for ExtractorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtractorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown extractor `{s}` (expected gin, degree_hist, clustering_hist or spectrum_hist)"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossConfig {
    pub sigma: f64,
    /// Added to the loss once per code node.
    pub reg_weight: f64,
    pub extractor: ExtractorKind,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig {
            sigma: 1.0,
            reg_weight: 1e-8,
            extractor: ExtractorKind::Gin,
        }
    }
}

impl LossConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(format!("sigma must be positive, got {}", self.sigma));
        }
        if !(self.reg_weight >= 0.0 && self.reg_weight.is_finite()) {
            return Err(format!("reg_weight must be non-negative, got {}", self.reg_weight));
        }
        Ok(())
    }
}

/// Maps a graph to a feature vector.
#[derive(Clone, Debug)]
pub enum Extractor {
    Gin(GinParams),
    DegreeHist,
    ClusteringHist,
    SpectrumHist,
}

impl Extractor {
    pub fn new(kind: ExtractorKind, gin_seed: u64, readout: Readout) -> Self {
        match kind {
            ExtractorKind::Gin => Extractor::Gin(init_gin(gin_seed).with_readout(readout)),
            ExtractorKind::DegreeHist => Extractor::DegreeHist,
            ExtractorKind::ClusteringHist => Extractor::ClusteringHist,
            ExtractorKind::SpectrumHist => Extractor::SpectrumHist,
        }
    }

    pub fn kind(&self) -> ExtractorKind {
        match self {
            Extractor::Gin(_) => ExtractorKind::Gin,
            Extractor::DegreeHist => ExtractorKind::DegreeHist,
            Extractor::ClusteringHist => ExtractorKind::ClusteringHist,
            Extractor::SpectrumHist => ExtractorKind::SpectrumHist,
        }
    }

    /// Short text that identifies the feature map, e.g. `gin:0:sum`.
    pub fn fingerprint(&self) -> String {
        match self {
            Extractor::Gin(p) => format!("gin:{}:{}", p.seed, p.readout.name()),
            other => other.kind().name().to_string(),
        }
    }

    pub fn features(&self, g: &SparseGraph) -> Vec<f64> {
        match self {
            Extractor::Gin(gin) => embed_graph(gin, g),
            Extractor::DegreeHist => degree_histogram(g),
            Extractor::ClusteringHist => clustering_histogram(g),
            Extractor::SpectrumHist => spectrum_histogram(g),
        }
    }
}

/// Generates one graph per reference record, feeding each record's node
/// count and aux values. The generator state carries over between runs.
pub fn generate_for(
    ind: &Individual,
    records: &[DatasetRecord],
    rng: &mut Prng,
    mem: &mut Memory,
) -> Vec<SparseGraph> {
    records
        .iter()
        .map(|r| {
            mem.run(ind, r.graph.node_count(), &r.aux, rng);
            mem.graph.clone()
        })
        .collect()
}

/// A minibatch of references with features and the reference-only kernel
/// term computed once, shared by every individual scored on it.
#[derive(Clone, Debug)]
pub struct ReferenceBatch {
    pub records: Vec<DatasetRecord>,
    features: Vec<Vec<f64>>,
    self_term: f64,
    sigma: f64,
}

impl ReferenceBatch {
    pub fn new(records: Vec<DatasetRecord>, extractor: &Extractor, cfg: &LossConfig) -> Self {
        assert!(!records.is_empty(), "reference batch must not be empty");
        let features: Vec<Vec<f64>> = records.iter().map(|r| extractor.features(&r.graph)).collect();
        let sigma = cfg.sigma;
        let self_term = kernel_mean(&features, &features, &|x: &[f64], y: &[f64]| gaussian_kernel(x, y, sigma));
        ReferenceBatch {
            records,
            features,
            self_term,
            sigma,
        }
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    /// MMD between the given graphs and the references.
    pub fn mmd2(&self, generated: &[SparseGraph], extractor: &Extractor) -> f64 {
        let sigma = self.sigma;
        let k = |x: &[f64], y: &[f64]| gaussian_kernel(x, y, sigma);
        let gen: Vec<Vec<f64>> = generated.iter().map(|g| extractor.features(g)).collect();
        mmd2_from_means(kernel_mean(&gen, &gen, &k), kernel_mean(&gen, &self.features, &k), self.self_term)
    }

    pub fn loss(&self, ind: &Individual, extractor: &Extractor, cfg: &LossConfig, rng: &mut Prng, mem: &mut Memory) -> f64 {
        debug_assert_eq!(cfg.sigma, self.sigma);
        let generated = generate_for(ind, &self.records, rng, mem);
        self.mmd2(&generated, extractor) + cfg.reg_weight * ind.node_count() as f64
    }
}

/// Loss of `ind` on a reference batch: MMD between generated and reference
/// features plus `reg_weight` per code node. Registers are sized by the
/// default [`CodeLimits`].
pub fn individual_loss(
    ind: &Individual,
    batch: &[DatasetRecord],
    extractor: &Extractor,
    cfg: &LossConfig,
    rng: &mut Prng,
) -> f64 {
    let mut mem = Memory::new(&CodeLimits::default());
    ReferenceBatch::new(batch.to_vec(), extractor, cfg).loss(ind, extractor, cfg, rng, &mut mem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{fixtures, CodeTree, Instruction, Opcode};
    use crate::data::{gen_grids, gen_paths};
    use crate::fitness::gaussian_mmd2;
    use crate::rng;

    fn gin() -> Extractor {
        Extractor::new(ExtractorKind::Gin, 0, Readout::Sum)
    }

    fn path_program() -> Individual {
        Individual::new(
            CodeTree::from_statements([
                Instruction::compact(Opcode::MinusImmI, &[5, 0, 1]),
                Instruction::compact(Opcode::AddEdge, &[0, 5]),
            ]),
            CodeTree::new(),
        )
    }

    #[test]
    fn replaying_references_costs_only_regularization() {
        let ds = gen_paths(16, 5, 20, &mut rng::seeded(0)).unwrap();
        let cfg = LossConfig::default();
        let loss = individual_loss(&path_program(), &ds.records, &gin(), &cfg, &mut rng::seeded(0));
        assert!((loss - 2e-8).abs() < 1e-12, "{loss}");
    }

    #[test]
    fn empty_individual_on_grids() {
        let ds = gen_grids(3, 6, false).unwrap();
        let ex = gin();
        let cfg = LossConfig::default();
        let loss = individual_loss(&Individual::empty(), &ds.records, &ex, &cfg, &mut rng::seeded(0));
        let empty: Vec<Vec<f64>> = ds
            .records
            .iter()
            .map(|r| ex.features(&SparseGraph::new(r.graph.node_count())))
            .collect();
        let grids: Vec<Vec<f64>> = ds.records.iter().map(|r| ex.features(&r.graph)).collect();
        let expected = gaussian_mmd2(&empty, &grids, 1.0);
        assert!(expected > 0.0);
        assert_eq!(loss, expected);
    }

    #[test]
    fn loss_is_deterministic_and_cache_is_exact() {
        let ds = gen_grids(3, 9, true).unwrap();
        let batch = ds.records[..16].to_vec();
        let ex = gin();
        let cfg = LossConfig::default();
        let ind = fixtures::lobster();
        let a = individual_loss(&ind, &batch, &ex, &cfg, &mut rng::seeded(4));
        let b = individual_loss(&ind.clone(), &batch, &ex, &cfg, &mut rng::seeded(4));
        assert_eq!(a.to_bits(), b.to_bits());

        let cached = ReferenceBatch::new(batch.clone(), &ex, &cfg);
        let mut mem = Memory::new(&CodeLimits::default());
        for _ in 0..3 {
            let c = cached.loss(&ind, &ex, &cfg, &mut rng::seeded(4), &mut mem);
            assert_eq!(a.to_bits(), c.to_bits());
        }
    }

    #[test]
    fn regularization_difference_is_exact() {
        let ds = gen_paths(16, 5, 20, &mut rng::seeded(0)).unwrap();
        let cfg = LossConfig {
            reg_weight: 0.25,
            ..LossConfig::default()
        };
        let mut padded = path_program();
        // Dead code after the edge write leaves the graphs unchanged.
        assert!(padded.tree_mut(crate::code::TreeId::Main).insert(
            2,
            crate::code::CodeNode::statement(Instruction::compact(Opcode::ConstI, &[9, 1])),
        ));
        let ex = Extractor::new(ExtractorKind::DegreeHist, 0, Readout::Sum);
        let a = individual_loss(&path_program(), &ds.records, &ex, &cfg, &mut rng::seeded(0));
        let b = individual_loss(&padded, &ds.records, &ex, &cfg, &mut rng::seeded(0));
        assert_eq!(b - a, 0.25);
    }

    #[test]
    fn extractor_names_parse() {
        for k in ExtractorKind::ALL {
            assert_eq!(k.name().parse::<ExtractorKind>().unwrap(), k);
        }
        assert!("orbit".parse::<ExtractorKind>().is_err());
        assert!(LossConfig { sigma: 0.0, ..LossConfig::default() }.validate().is_err());
    }
}
