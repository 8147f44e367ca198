//! Verification reports: the outcome of checking a binomial-type identity
//! over a grid of indices, listing every violation found.

use serde::{Deserialize, Serialize};

use crate::multiindex::MultiIndex;
use crate::scalar::Scalar;

/// One failed identity instance: at `(alpha, n, m)` the two sides disagreed.
///
/// For group-case checks `n` and `m` are the two group elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub alpha: MultiIndex,
    pub n: u32,
    pub m: u32,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Result of an exhaustive identity check. Violations are collected, never
/// fail-fast, so a report shows every offending triple at once.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Number of identity instances compared.
    pub checked: u64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn record(&mut self, alpha: &MultiIndex, n: u32, m: u32, lhs: Scalar, rhs: Scalar) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(Violation {
                alpha: alpha.clone(),
                n,
                m,
                lhs,
                rhs,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds another report into this one.
    pub fn merge(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}
