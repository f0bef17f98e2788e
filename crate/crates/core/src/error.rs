use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dataset must have at least one sample and one attribute")]
    EmptyDataset,
    #[error("expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("non-finite value at sample {sample}, attribute {attr}")]
    NonFinite { sample: usize, attr: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid number of clusters {k} for {n} samples")]
    InvalidK { k: usize, n: usize },
    #[error("at most {max} clusters are supported, got {k}")]
    TooManyClusters { k: usize, max: usize },
    #[error("sample index {index} out of range for {n} samples")]
    InvalidIndex { index: usize, n: usize },
    #[error("active sample set is empty")]
    EmptyActiveSet,
    #[error("no sample lies in the box of cluster {cluster}")]
    EmptyIntersection { cluster: usize },
    #[error("node is terminal: every cluster box holds a single point")]
    TerminalNode,
    #[error("node queue is empty")]
    EmptyQueue,
    #[error("enumeration needs {needed} evaluations, budget is {limit}")]
    BudgetExceeded { needed: u128, limit: u128 },
    #[error("open node limit of {0} exceeded")]
    NodeLimit(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
