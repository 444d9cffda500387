use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Every perturbation attempt changed the crossing combinatorics.
    #[error("combinatorial collapse after {attempts} attempts: {reason}")]
    CombinatorialCollapse { attempts: u32, reason: String },

    #[error("degenerate angle at vertex: {0}")]
    DegenerateAngle(String),

    #[error("mirror half-planes do not bound a polygon: {0}")]
    UnboundedTable(String),

    #[error("height search exhausted up to frequency {f_max}: {diagnostics}")]
    SearchExhausted { f_max: u64, diagnostics: String },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("state-sum budget exceeded: {crossings} crossings (limit {limit})")]
    Budget { crossings: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
