use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient {name} has no entry at index {index} (table length {len})")]
    SchemeIndex {
        name: &'static str,
        index: usize,
        len: usize,
    },
    #[error("lambda_{index} must be positive")]
    NonPositiveLambda { index: usize },
    #[error("nodes a_{index}, b_{index} do not give a real quadratic factor")]
    NonRealNodes { index: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("pole at truncation index {index}")]
    Pole { index: usize },
    #[error("complex zeros detected: {}", format_pairs(.pairs))]
    ComplexZeros { pairs: Vec<(f64, f64)> },
    #[error("expected degree {expected}, polynomial has degree {actual}")]
    DegreeDrop { expected: usize, actual: usize },
    #[error("degenerate {what} at index {index}")]
    Degenerate { what: &'static str, index: usize },
    #[error("singular reduction: alpha - gamma*c_{index} = 0")]
    SingularReduction { index: usize },
    #[error("non-finite integrand value at x = {x}")]
    NonFinite { x: f64 },
    #[error("fixture error: {0}")]
    Fixture(String),
}

fn format_pairs(pairs: &[(f64, f64)]) -> String {
    pairs
        .iter()
        .map(|(re, im)| format!("{re:.6e}±{:.6e}i", im.abs()))
        .collect::<Vec<_>>()
        .join(", ")
}
