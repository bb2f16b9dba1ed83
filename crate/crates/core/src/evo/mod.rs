mod ga;
mod lhs;
mod rvea;
mod variation;

pub use ga::{soea_optimize, GaConfig, GeneticAlgorithm, Sample};
pub use lhs::lhs_sample;
pub(crate) use rvea::apd_survivors;
pub use rvea::{
    apd_partition, apd_select, reference_vectors, surrogate_rvea, translate_by_ideal, Population,
    ReferenceVectorSet, RveaConfig, Surrogate,
};
pub use variation::{polynomial_mutation, variation, VariationConfig};
