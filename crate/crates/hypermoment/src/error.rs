//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::multiindex::MultiIndex;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    /// Two values of different rank (multi-index length) were combined.
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    /// Two jets of different truncation order were combined, or a multi-index
    /// exceeds the truncation order it is used against.
    #[error("order mismatch: expected at most {expected}, found {found}")]
    OrderMismatch { expected: u32, found: u32 },

    /// `binom(alpha, beta)` was requested with `beta` not componentwise below
    /// `alpha`.
    #[error("dominance violation: {lower} is not componentwise <= {upper}")]
    DominanceViolation {
        upper: MultiIndex,
        lower: MultiIndex,
    },

    /// A recurrence coefficient beyond the declared table range was requested.
    #[error("recurrence coefficient unavailable at index {index} (table ends at {available})")]
    CoefficientUnavailable { index: u32, available: u32 },

    /// A linearization weight came out negative, so the recurrence does not
    /// define a hypergroup.
    #[error("negative linearization coefficient c({n},{m},{k}) = {weight}")]
    NegativeLinearization {
        n: u32,
        m: u32,
        k: u32,
        weight: String,
    },

    /// `exp` of a jet whose constant term is nonzero.
    #[error("jet exponential requires zero constant term, found {found}")]
    ExpNonzeroConstant { found: String },

    /// A moment seed is missing prescribed values.
    #[error("incomplete seed: missing values at {}", format_indices(.missing))]
    IncompleteSeed { missing: Vec<MultiIndex> },

    /// A verification run asked for indices beyond the table.
    #[error("table range exceeded: need entries up to n = {needed}, table ends at {available}")]
    TableRangeExceeded { needed: u32, available: u32 },

    /// Unknown catalog name.
    #[error("unknown catalog entry {name:?} (expected one of: chebyshev1, chebyshev2, legendre)")]
    UnknownCatalogEntry { name: String },

    /// A text form failed to parse.
    #[error("cannot parse {kind} from {input:?}: {detail}")]
    Parse {
        kind: &'static str,
        input: String,
        detail: String,
    },
}

fn format_indices(indices: &[MultiIndex]) -> String {
    let parts: Vec<String> = indices.iter().map(|mi| mi.to_string()).collect();
    parts.join(", ")
}
