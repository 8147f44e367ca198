//! Group-case oracles on the additive monoid of naturals.
//!
//! On `(N, +)` an additive function is exactly a linear one, so a family of
//! slopes gives a concrete, exhaustively testable model of the group-side
//! theory: `f_alpha(x) = B_alpha(a(x)) m(x)`, with the Bell polynomial
//! realized as a coefficient of `exp` of the nilpotent series collecting the
//! `a_beta(x)/beta!`. The classical partition sum provides an independent
//! rank-1 route to the same numbers, and the Faa di Bruno decomposition of
//! `d^alpha (P_n o f)(0)` is checked here against direct jet composition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergroup::Hypergroup;
use crate::jet::{compose_basis, Jet};
use crate::multiindex::{enumerate, mi_key_map, MultiIndex};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

/// How family values grow in the group variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum GrowthLaw {
    Linear,
    Quadratic,
}

impl GrowthLaw {
    fn is_linear(&self) -> bool {
        matches!(self, GrowthLaw::Linear)
    }
}

fn linear_law() -> GrowthLaw {
    GrowthLaw::Linear
}

/// A family `a_alpha(x) = slope_alpha * x` of additive functions on the
/// naturals, one slope per multi-index with `0 < |alpha| <= order`; a missing
/// slope means the zero function.
///
/// [`AdditiveFamily::non_additive_quadratic`] builds a deliberately broken
/// family with `a_alpha(x) = slope_alpha * x^2`, used to confirm that the
/// binomial checker actually rejects non-additive data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct AdditiveFamily {
    rank: usize,
    order: u32,
    slopes: BTreeMap<MultiIndex, Scalar>,
    law: GrowthLaw,
}

impl AdditiveFamily {
    pub fn linear(rank: usize, order: u32, slopes: BTreeMap<MultiIndex, Scalar>) -> Result<Self> {
        Self::with_law(rank, order, slopes, GrowthLaw::Linear)
    }

    /// Test device: `a_alpha(x) = slope_alpha * x^2` is not additive, so the
    /// resulting values must fail [`verify_group_binomial`].
    pub fn non_additive_quadratic(
        rank: usize,
        order: u32,
        slopes: BTreeMap<MultiIndex, Scalar>,
    ) -> Result<Self> {
        Self::with_law(rank, order, slopes, GrowthLaw::Quadratic)
    }

    fn with_law(
        rank: usize,
        order: u32,
        slopes: BTreeMap<MultiIndex, Scalar>,
        law: GrowthLaw,
    ) -> Result<Self> {
        assert!(rank >= 1, "AdditiveFamily: rank must be >= 1");
        let mut kept = BTreeMap::new();
        for (index, slope) in slopes {
            if index.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: index.rank(),
                });
            }
            if index.is_zero() || index.degree() > order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: index.degree(),
                });
            }
            if !slope.is_zero() {
                kept.insert(index, slope);
            }
        }
        Ok(AdditiveFamily {
            rank,
            order,
            slopes: kept,
            law,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `a_alpha(x)`.
    pub fn value(&self, index: &MultiIndex, x: u32) -> Scalar {
        let slope = match self.slopes.get(index) {
            Some(s) => s,
            None => return Scalar::zero(),
        };
        let factor = match self.law {
            GrowthLaw::Linear => Scalar::from_int(i64::from(x)),
            GrowthLaw::Quadratic => Scalar::from_int(i64::from(x) * i64::from(x)),
        };
        slope * &factor
    }

    /// The nilpotent jet `g_x` with coefficient `a_beta(x)/beta!` at each
    /// `0 < |beta| <= order`; `exp(g_x)` generates the Bell values.
    fn seed_jet(&self, x: u32) -> Jet {
        let mut jet = Jet::zero(self.rank, self.order);
        for index in self.slopes.keys() {
            let coeff = &self.value(index, x) / &Scalar::from_integer(index.factorial());
            jet.set_coeff(index.clone(), coeff)
                .expect("slope keys are validated at construction");
        }
        jet
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    rank: usize,
    order: u32,
    #[serde(with = "mi_key_map")]
    slopes: BTreeMap<MultiIndex, Scalar>,
    #[serde(default = "linear_law", skip_serializing_if = "GrowthLaw::is_linear")]
    law: GrowthLaw,
}

impl TryFrom<FamilyRepr> for AdditiveFamily {
    type Error = Error;
    fn try_from(repr: FamilyRepr) -> Result<Self> {
        if repr.rank == 0 {
            return Err(Error::Parse {
                kind: "additive family",
                input: "rank 0".to_string(),
                detail: "rank must be >= 1".to_string(),
            });
        }
        AdditiveFamily::with_law(repr.rank, repr.order, repr.slopes, repr.law)
    }
}

impl From<AdditiveFamily> for FamilyRepr {
    fn from(family: AdditiveFamily) -> Self {
        FamilyRepr {
            rank: family.rank,
            order: family.order,
            slopes: family.slopes,
            law: family.law,
        }
    }
}

/// The exponential `m(x) = q^x` on the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupExponential {
    pub base: Scalar,
}

impl GroupExponential {
    pub fn new(base: Scalar) -> Self {
        GroupExponential { base }
    }

    /// `m == 1` identically.
    pub fn trivial() -> Self {
        GroupExponential::new(Scalar::one())
    }

    pub fn value(&self, x: u32) -> Scalar {
        self.base.pow(x)
    }
}

/// `f_alpha(x) = B_alpha(a(x)) m(x)`: the Bell value is the mixed partial
/// `d^alpha exp(g_x)(0)` of the generating exponential of the family.
pub fn group_moment(
    alpha: &MultiIndex,
    x: u32,
    family: &AdditiveFamily,
    exponential: &GroupExponential,
) -> Result<Scalar> {
    if alpha.rank() != family.rank() {
        return Err(Error::RankMismatch {
            expected: family.rank(),
            found: alpha.rank(),
        });
    }
    if alpha.degree() > family.order() {
        return Err(Error::OrderMismatch {
            expected: family.order(),
            found: alpha.degree(),
        });
    }
    let bell = family.seed_jet(x).exp()?.partial_at_zero(alpha)?;
    Ok(&bell * &exponential.value(x))
}

/// The rank-1 partition sum
/// `phi_n(x) = n! sum_{j_1 + 2 j_2 + ... + n j_n = n} prod_k (1/j_k!) (a_k(x)/k!)^{j_k}`,
/// evaluated by direct enumeration of the exponent tuples. An independent
/// route to `group_moment((n), x, family, m == 1)`.
pub fn aczel_rank1(n: u32, x: u32, family: &AdditiveFamily) -> Result<Scalar> {
    if family.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: family.rank(),
        });
    }
    if n > family.order() {
        return Err(Error::OrderMismatch {
            expected: family.order(),
            found: n,
        });
    }
    if n == 0 {
        return Ok(Scalar::one());
    }
    // a_k(x)/k! for k = 1..=n
    let mut weights = Vec::with_capacity(n as usize);
    let mut factorial = Scalar::one();
    for k in 1..=n {
        factorial = &factorial * &Scalar::from_int(i64::from(k));
        let a_k = family.value(&MultiIndex::new(vec![k]), x);
        weights.push(&a_k / &factorial);
    }

    let mut sum = Scalar::zero();
    let mut term_stack = Vec::new();
    partition_sum(n, 1, &weights, &Scalar::one(), &mut term_stack, &mut sum);

    let mut n_factorial = Scalar::one();
    for k in 2..=n {
        n_factorial = &n_factorial * &Scalar::from_int(i64::from(k));
    }
    Ok(&n_factorial * &sum)
}

/// Accumulates `prod_k (1/j_k!) w_k^{j_k}` over all `(j_1, ..., j_n)` with
/// `sum k j_k = remaining`, recursing over part size `k`.
fn partition_sum(
    remaining: u32,
    k: u32,
    weights: &[Scalar],
    product: &Scalar,
    _stack: &mut Vec<u32>,
    sum: &mut Scalar,
) {
    if remaining == 0 {
        *sum += product;
        return;
    }
    if k > remaining {
        return;
    }
    let weight = &weights[k as usize - 1];
    let mut power = Scalar::one();
    let mut j_factorial = Scalar::one();
    let mut j = 0u32;
    while j * k <= remaining {
        if j > 0 {
            power = &power * weight;
            j_factorial = &j_factorial * &Scalar::from_int(i64::from(j));
        }
        let contribution = &(product * &power) / &j_factorial;
        partition_sum(remaining - j * k, k + 1, weights, &contribution, _stack, sum);
        j += 1;
    }
}

/// Checks `f_alpha(x + y) = sum_{beta <= alpha} C(alpha,beta) f_beta(x) f_{alpha-beta}(y)`
/// exactly for all `x, y <= x_max` and `|alpha| <= order_cap`, using
/// [`group_moment`] values.
pub fn verify_group_binomial(
    family: &AdditiveFamily,
    exponential: &GroupExponential,
    order_cap: u32,
    x_max: u32,
) -> Result<VerificationReport> {
    if order_cap > family.order() {
        return Err(Error::OrderMismatch {
            expected: family.order(),
            found: order_cap,
        });
    }
    let indices = enumerate(family.rank(), order_cap);
    // One exp per group element, shared across indices.
    let mut values: Vec<BTreeMap<MultiIndex, Scalar>> = Vec::new();
    for x in 0..=2 * x_max {
        let expanded = family.seed_jet(x).exp()?;
        let m_x = exponential.value(x);
        let mut row = BTreeMap::new();
        for index in &indices {
            row.insert(index.clone(), &expanded.partial_at_zero(index)? * &m_x);
        }
        values.push(row);
    }

    let mut report = VerificationReport::default();
    for alpha in &indices {
        for x in 0..=x_max {
            for y in 0..=x_max {
                let lhs = values[(x + y) as usize][alpha].clone();
                let mut rhs = Scalar::zero();
                for beta in alpha.sub_indices() {
                    let rest = alpha.sub(&beta)?;
                    let term = alpha.binom(&beta)?
                        * values[x as usize][&beta].clone()
                        * values[y as usize][&rest].clone();
                    rhs += &term;
                }
                report.record(alpha, x, y, lhs, rhs);
            }
        }
    }
    Ok(report)
}

/// Evaluates `d^alpha (P_n o f)(0)` twice: decomposed as
/// `sum_{k=0}^{|alpha|} P_n^{(k)}(f(0)) B_{alpha,k}(f)` with the partial Bell
/// coefficient `B_{alpha,k}(f) = alpha! [t^alpha] (f - f(0))^k / k!`, and
/// directly by jet composition. Returns `(decomposed, direct)`; the pair is
/// equal when the decomposition holds.
pub fn faa_di_bruno_check(
    hypergroup: &Hypergroup,
    n: u32,
    f: &Jet,
    alpha: &MultiIndex,
) -> Result<(Scalar, Scalar)> {
    if alpha.rank() != f.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: alpha.rank(),
        });
    }
    if alpha.degree() > f.order() {
        return Err(Error::OrderMismatch {
            expected: f.order(),
            found: alpha.degree(),
        });
    }
    let direct = compose_basis(hypergroup, n, f)?.partial_at_zero(alpha)?;

    let constant = f.constant_term();
    let nilpotent = f.sub(&Jet::constant(f.rank(), f.order(), constant.clone()))?;
    let mut derivative = hypergroup.basis_polynomial(n)?;
    let mut power = Jet::one(f.rank(), f.order());
    let mut k_factorial = Scalar::one();
    let mut decomposed = Scalar::zero();
    for k in 0..=alpha.degree() {
        if k > 0 {
            power = power.mul(&nilpotent)?;
            k_factorial = &k_factorial * &Scalar::from_int(i64::from(k));
            derivative = differentiate(&derivative);
        }
        // B_{alpha,k}(f)
        let bell = &(&Scalar::from_integer(alpha.factorial()) * &power.coeff(alpha)) / &k_factorial;
        if bell.is_zero() {
            continue;
        }
        decomposed += &(&eval_poly(&derivative, &constant) * &bell);
    }
    Ok((decomposed, direct))
}

fn differentiate(coeffs: &[Scalar]) -> Vec<Scalar> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| &Scalar::from_int(i as i64) * c)
        .collect()
}

fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}
