//! End-goal classification of nature-inspired algorithms and the
//! problem-to-algorithm recommender built on it.

mod dataset;
mod schema;
mod triz;

use thiserror::Error;

pub use dataset::{load_taxonomy, name_key, Taxonomy, TaxonomyEntry, BUNDLED_TAXONOMY};
pub use schema::{Behavior, Level1, PathPrefix, PrimaryGoal, SubGoal, TaxonomyPath};
pub use triz::{
    normalize_tag, triz_map, Cooperation, DataRegime, GoalTag, Modality, ProblemDescriptor,
    RankedEntry, Recommendation, RuleTable, RuleTarget, TrizRule, BUNDLED_RULES,
    IMPLEMENTED_BOOST,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaxonomyError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("illegal path: {0}")]
    IllegalPath(String),
    #[error("no algorithm named '{0}'")]
    NotFound(String),
    #[error("no rule matches [{tags}]; nearest rules: {}", nearest.join(", "))]
    UnmappedDescriptor { tags: String, nearest: Vec<String> },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
}
