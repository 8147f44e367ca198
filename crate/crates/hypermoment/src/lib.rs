//! Polynomial hypergroups and generalized moment function sequences, in exact
//! rational arithmetic.
//!
//! A three-term recurrence with coefficients `(a_n, b_n, c_n)` generates a
//! sequence of polynomials `P_n` with `P_0 = 1`, `P_1(x) = x` and
//! `x P_n = a_n P_{n-1} + b_n P_n + c_n P_{n+1}`. Expanding the product
//! `P_n P_m` back in the `P_k` basis gives the linearization coefficients
//! `c(n,m,k)`; when these are nonnegative they define a convolution
//! `delta_n * delta_m` on the naturals, a polynomial hypergroup.
//!
//! On such a hypergroup, a family of functions `phi_alpha : N -> C` indexed by
//! multi-indices `alpha` with `|alpha| <= N` is a moment function sequence of
//! rank `r` when it satisfies the binomial identity
//! `phi_alpha(n*m) = sum_{beta <= alpha} C(alpha,beta) phi_beta(n) phi_{alpha-beta}(m)`.
//! Every such family arises as `phi_alpha(n) = d^alpha (P_n o f)(0)` for the
//! polynomial `f` built from the prescribed values `phi_alpha(1)`; this crate
//! generates those families by truncated multivariate power-series (jet)
//! composition and checks the binomial identity exactly.
//!
//! Modules:
//! - [`scalar`]: Gaussian rationals (exact complex numbers with rational parts)
//! - [`multiindex`]: multi-indices with graded-lex enumeration and binomials
//! - [`measure`]: finitely supported measures on the naturals
//! - [`hypergroup`]: recurrence specs, basis polynomials, linearization, convolution
//! - [`jet`]: truncated multivariate power series and basis composition
//! - [`moments`]: moment seeds, table generation, and identity verification
//! - [`bellgroup`]: group-case oracles (Bell generating functions, partition
//!   sums, Faa di Bruno decomposition)
//!
//! All arithmetic in the main pipeline is exact; there is no floating point
//! anywhere except optional display helpers.

pub mod bellgroup;
pub mod error;
pub mod hypergroup;
pub mod jet;
pub mod measure;
pub mod moments;
pub mod multiindex;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use hypergroup::{CatalogEntry, Hypergroup, RecurrenceSpec};
pub use jet::Jet;
pub use measure::Measure;
pub use moments::{MomentSeed, MomentTable};
pub use multiindex::MultiIndex;
pub use report::{VerificationReport, Violation};
pub use scalar::Scalar;
