//! Scoring of candidate programs against reference graphs.

mod gin;
mod hist;
mod loss;
mod mmd;

pub use gin::{embed_graph, init_gin, Embedding, GinLayer, GinParams, Readout, GIN_DIM, GIN_INPUT_DIM, GIN_ROUNDS};
pub use hist::{
    clustering_coefficients, clustering_histogram, degree_histogram, normalized_laplacian_spectrum,
    spectrum_histogram, CLUSTERING_BINS, SPECTRUM_BINS,
};
pub use loss::{generate_for, individual_loss, Extractor, ExtractorKind, LossConfig, ReferenceBatch};
pub use mmd::{gaussian_kernel, gaussian_mmd2, kernel_mean, mmd2, mmd2_from_means, sq_distance};
