#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MineError {
    #[error("no paths to mine")]
    NoPaths,
    #[error("insufficient documents: functional dependencies need at least 2, found {found}")]
    InsufficientDocuments { found: usize },
    #[error("{units} rows/documents exceed the pair bitmap capacity of {max}")]
    TooManyUnits { units: usize, max: usize },
    #[error("max_lhs must be at least 1")]
    ZeroMaxLhs,
}
