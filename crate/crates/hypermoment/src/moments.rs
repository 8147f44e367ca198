//! Moment function sequences on a polynomial hypergroup: generation from
//! seed values and exact verification of the defining binomial identity.
//!
//! A seed prescribes `phi_alpha(1)` for every `|alpha| <= N`. The generated
//! family is `phi_alpha(n) = d^alpha (P_n o f)(0)` where
//! `f(t) = sum_{|alpha| <= N} phi_alpha(1)/alpha! t^alpha`; it satisfies
//! `phi_alpha(n*m) = sum_{beta <= alpha} C(alpha,beta) phi_beta(n) phi_{alpha-beta}(m)`
//! where the left side is the integral against `delta_n * delta_m`, i.e.
//! `sum_k c(n,m,k) phi_alpha(k)`. The checker evaluates both sides exactly
//! over full index grids.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergroup::Hypergroup;
use crate::jet::{compose_basis_prefix, Jet};
use crate::multiindex::{enumerate, mi_key_map, MultiIndex};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

/// Prescribed values `phi_alpha(1)` for every `|alpha| <= order`.
///
/// Seeds must be explicitly complete: a missing value is an error, never a
/// silent zero, so a generated family is always the one that was asked for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SeedRepr", into = "SeedRepr")]
pub struct MomentSeed {
    rank: usize,
    order: u32,
    values: BTreeMap<MultiIndex, Scalar>,
}

impl MomentSeed {
    /// Validates that `values` covers every multi-index of the given rank
    /// with total degree at most `order`, exactly.
    pub fn new(rank: usize, order: u32, values: BTreeMap<MultiIndex, Scalar>) -> Result<Self> {
        assert!(rank >= 1, "MomentSeed::new: rank must be >= 1");
        for index in values.keys() {
            if index.rank() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: index.rank(),
                });
            }
            if index.degree() > order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: index.degree(),
                });
            }
        }
        let missing: Vec<MultiIndex> = enumerate(rank, order)
            .into_iter()
            .filter(|index| !values.contains_key(index))
            .collect();
        if !missing.is_empty() {
            return Err(Error::IncompleteSeed { missing });
        }
        Ok(MomentSeed {
            rank,
            order,
            values,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn value(&self, index: &MultiIndex) -> Option<&Scalar> {
        self.values.get(index)
    }

    /// `phi_0(1)`, the exponential parameter.
    pub fn lambda(&self) -> &Scalar {
        &self.values[&MultiIndex::zero(self.rank)]
    }

    /// The generating jet `f` with coefficient `phi_alpha(1)/alpha!` at each
    /// `alpha`, so that `d^alpha f(0) = phi_alpha(1)`.
    pub fn to_jet(&self) -> Jet {
        let mut jet = Jet::zero(self.rank, self.order);
        for (index, value) in &self.values {
            let coeff = value / &Scalar::from_integer(index.factorial());
            jet.set_coeff(index.clone(), coeff)
                .expect("seed keys are validated at construction");
        }
        jet
    }
}

#[derive(Serialize, Deserialize)]
struct SeedRepr {
    rank: usize,
    order: u32,
    #[serde(with = "mi_key_map")]
    values: BTreeMap<MultiIndex, Scalar>,
}

impl TryFrom<SeedRepr> for MomentSeed {
    type Error = Error;
    fn try_from(repr: SeedRepr) -> Result<Self> {
        if repr.rank == 0 {
            return Err(Error::Parse {
                kind: "moment seed",
                input: "rank 0".to_string(),
                detail: "rank must be >= 1".to_string(),
            });
        }
        MomentSeed::new(repr.rank, repr.order, repr.values)
    }
}

impl From<MomentSeed> for SeedRepr {
    fn from(seed: MomentSeed) -> Self {
        SeedRepr {
            rank: seed.rank,
            order: seed.order,
            values: seed.values,
        }
    }
}

/// Computed values `phi_alpha(n)` for all `|alpha| <= order`, `n <= n_max`,
/// stored row per multi-index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct MomentTable {
    rank: usize,
    order: u32,
    n_max: u32,
    rows: BTreeMap<MultiIndex, Vec<Scalar>>,
}

impl MomentTable {
    fn from_columns(
        rank: usize,
        order: u32,
        n_max: u32,
        rows: BTreeMap<MultiIndex, Vec<Scalar>>,
    ) -> Self {
        debug_assert!(rows.len() == enumerate(rank, order).len());
        debug_assert!(rows.values().all(|row| row.len() == n_max as usize + 1));
        MomentTable {
            rank,
            order,
            n_max,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn value(&self, index: &MultiIndex, n: u32) -> Option<&Scalar> {
        self.rows.get(index).and_then(|row| row.get(n as usize))
    }

    /// Rows in graded-lexicographic index order.
    pub fn rows(&self) -> impl Iterator<Item = (&MultiIndex, &[Scalar])> {
        self.rows.iter().map(|(index, row)| (index, row.as_slice()))
    }

    /// Overwrites one entry; meant for perturbation experiments against the
    /// verifier, not for normal use.
    pub fn set_value(&mut self, index: &MultiIndex, n: u32, value: Scalar) -> Result<()> {
        if n > self.n_max {
            return Err(Error::TableRangeExceeded {
                needed: n,
                available: self.n_max,
            });
        }
        match self.rows.get_mut(index) {
            Some(row) => {
                row[n as usize] = value;
                Ok(())
            }
            None => Err(Error::OrderMismatch {
                expected: self.order,
                found: index.degree(),
            }),
        }
    }

    /// The first column read back as a seed: `phi_alpha(1)` for all alpha.
    /// Needs `n_max >= 1`.
    pub fn seed_column(&self) -> Result<MomentSeed> {
        if self.n_max < 1 {
            return Err(Error::TableRangeExceeded {
                needed: 1,
                available: self.n_max,
            });
        }
        let values = self
            .rows
            .iter()
            .map(|(index, row)| (index.clone(), row[1].clone()))
            .collect();
        MomentSeed::new(self.rank, self.order, values)
    }
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    alpha: MultiIndex,
    n: u32,
    value: Scalar,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    rank: usize,
    order: u32,
    n_max: u32,
    rows: Vec<TableRow>,
}

impl TryFrom<TableRepr> for MomentTable {
    type Error = Error;

    fn try_from(repr: TableRepr) -> Result<Self> {
        let parse_error = |detail: String| Error::Parse {
            kind: "moment table",
            input: format!("rank={}, order={}, n_max={}", repr.rank, repr.order, repr.n_max),
            detail,
        };
        if repr.rank == 0 {
            return Err(parse_error("rank must be >= 1".to_string()));
        }
        let mut rows: BTreeMap<MultiIndex, Vec<Option<Scalar>>> = enumerate(repr.rank, repr.order)
            .into_iter()
            .map(|index| (index, vec![None; repr.n_max as usize + 1]))
            .collect();
        for row in repr.rows {
            let slot = rows
                .get_mut(&row.alpha)
                .ok_or_else(|| parse_error(format!("unexpected index {}", row.alpha)))?
                .get_mut(row.n as usize)
                .ok_or_else(|| parse_error(format!("n = {} out of range", row.n)))?;
            if slot.is_some() {
                return Err(parse_error(format!(
                    "duplicate entry at alpha = {}, n = {}",
                    row.alpha, row.n
                )));
            }
            *slot = Some(row.value);
        }
        let mut complete = BTreeMap::new();
        for (index, row) in rows {
            let filled: Option<Vec<Scalar>> = row.into_iter().collect();
            let filled = filled.ok_or_else(|| {
                parse_error(format!("missing entries for alpha = {index}"))
            })?;
            complete.insert(index, filled);
        }
        Ok(MomentTable::from_columns(
            repr.rank, repr.order, repr.n_max, complete,
        ))
    }
}

impl From<MomentTable> for TableRepr {
    fn from(table: MomentTable) -> Self {
        let mut rows = Vec::new();
        for (alpha, row) in &table.rows {
            for (n, value) in row.iter().enumerate() {
                rows.push(TableRow {
                    alpha: alpha.clone(),
                    n: n as u32,
                    value: value.clone(),
                });
            }
        }
        TableRepr {
            rank: table.rank,
            order: table.order,
            n_max: table.n_max,
            rows,
        }
    }
}

/// Generates the moment table: one composed jet per `n`, shared by every
/// index row, with `phi_alpha(n) = d^alpha (P_n o f)(0)`.
pub fn moment_table(
    hypergroup: &Hypergroup,
    seed: &MomentSeed,
    n_max: u32,
) -> Result<MomentTable> {
    let jets = compose_basis_prefix(hypergroup, n_max, &seed.to_jet())?;
    let mut rows = BTreeMap::new();
    for alpha in enumerate(seed.rank(), seed.order()) {
        let row = jets
            .iter()
            .map(|jet| jet.partial_at_zero(&alpha))
            .collect::<Result<Vec<Scalar>>>()?;
        rows.insert(alpha, row);
    }
    Ok(MomentTable::from_columns(
        seed.rank(),
        seed.order(),
        n_max,
        rows,
    ))
}

/// The exponential `phi_0(n) = P_n(lambda)` for `n <= n_max`; equal to the
/// zero row of any table generated from a seed with `phi_0(1) = lambda`.
pub fn exponential_values(
    hypergroup: &Hypergroup,
    lambda: &Scalar,
    n_max: u32,
) -> Result<Vec<Scalar>> {
    let mut values = Vec::with_capacity(n_max as usize + 1);
    values.push(Scalar::one());
    if n_max >= 1 {
        values.push(lambda.clone());
    }
    for k in 1..n_max {
        let (a, b, c) = hypergroup.spec().coefficients(k)?;
        let cur = &values[k as usize];
        let prev = &values[k as usize - 1];
        let next = &(&(lambda * cur) - &(&a * prev)) - &(&b * cur);
        values.push(&next / &c);
    }
    Ok(values)
}

/// Checks the binomial identity exactly for every `|alpha| <= order`,
/// `n <= n_max`, `m <= m_max`:
/// `sum_k c(n,m,k) phi_alpha(k) = sum_{beta <= alpha} C(alpha,beta) phi_beta(n) phi_{alpha-beta}(m)`.
///
/// The convolution reaches index `n + m`, so the table must extend to
/// `n_max + m_max`.
pub fn verify_binomial(
    hypergroup: &Hypergroup,
    table: &MomentTable,
    n_max: u32,
    m_max: u32,
) -> Result<VerificationReport> {
    check_table_range(table, n_max + m_max)?;
    // Expand each index into its (beta, alpha - beta, binomial) terms once;
    // the same split is reused across the whole (n, m) grid.
    let mut expansions = Vec::new();
    for alpha in enumerate(table.rank(), table.order()) {
        let mut terms = Vec::new();
        for beta in alpha.sub_indices() {
            let rest = alpha.sub(&beta)?;
            let binom = alpha.binom(&beta)?;
            terms.push((beta, rest, binom));
        }
        expansions.push((alpha, terms));
    }
    let mut report = VerificationReport::default();
    for n in 0..=n_max {
        for m in 0..=m_max {
            let lin = hypergroup.linearize(n, m)?;
            for (alpha, terms) in &expansions {
                let mut lhs = Scalar::zero();
                for (k, weight) in lin.iter() {
                    lhs += &(weight * table_ref(table, alpha, k));
                }
                let mut rhs = Scalar::zero();
                for (beta, rest, binom) in terms {
                    let product = table_ref(table, beta, n) * table_ref(table, rest, m);
                    rhs += &(binom * &product);
                }
                report.record(alpha, n, m, lhs, rhs);
            }
        }
    }
    Ok(report)
}

/// The degree-one slice of the binomial identity: for `|alpha| = 1` checks
/// `phi_alpha(n*m) = phi_alpha(n) phi_0(m) + phi_0(n) phi_alpha(m)` exactly,
/// i.e. that each first-order row is a sine function for the exponential row.
pub fn sine_check(
    hypergroup: &Hypergroup,
    table: &MomentTable,
    n_max: u32,
    m_max: u32,
) -> Result<VerificationReport> {
    check_table_range(table, n_max + m_max)?;
    let zero = MultiIndex::zero(table.rank());
    let units: Vec<MultiIndex> = enumerate(table.rank(), table.order())
        .into_iter()
        .filter(|alpha| alpha.degree() == 1)
        .collect();
    let mut report = VerificationReport::default();
    for n in 0..=n_max {
        for m in 0..=m_max {
            let lin = hypergroup.linearize(n, m)?;
            for alpha in &units {
                let mut lhs = Scalar::zero();
                for (k, weight) in lin.iter() {
                    lhs += &(weight * table_ref(table, alpha, k));
                }
                let rhs = table_ref(table, alpha, n) * table_ref(table, &zero, m)
                    + table_ref(table, &zero, n) * table_ref(table, alpha, m);
                report.record(alpha, n, m, lhs, rhs);
            }
        }
    }
    Ok(report)
}

fn check_table_range(table: &MomentTable, needed: u32) -> Result<()> {
    if needed > table.n_max() {
        return Err(Error::TableRangeExceeded {
            needed,
            available: table.n_max(),
        });
    }
    Ok(())
}

fn table_ref<'t>(table: &'t MomentTable, index: &MultiIndex, n: u32) -> &'t Scalar {
    table
        .value(index, n)
        .expect("index range checked before iteration")
}

/// Rank-1 table by an independent univariate route: dense truncated series
/// in one variable instead of jets, with `phi_k(n) = k! [t^k](P_n o f)`.
/// Produces exactly the same values as [`moment_table`] on a rank-1 seed.
pub fn rank1_table(
    hypergroup: &Hypergroup,
    seed: &MomentSeed,
    n_max: u32,
) -> Result<MomentTable> {
    if seed.rank() != 1 {
        return Err(Error::RankMismatch {
            expected: 1,
            found: seed.rank(),
        });
    }
    let order = seed.order();
    let len = order as usize + 1;

    let mut f = Vec::with_capacity(len);
    let mut factorial = BigInt::from(1);
    for k in 0..=order {
        if k > 0 {
            factorial *= BigInt::from(k);
        }
        let value = seed
            .value(&MultiIndex::new(vec![k]))
            .expect("seed is complete");
        f.push(value / &Scalar::from_integer(factorial.clone()));
    }

    let mut composed: Vec<Vec<Scalar>> = Vec::with_capacity(n_max as usize + 1);
    let mut one = vec![Scalar::zero(); len];
    one[0] = Scalar::one();
    composed.push(one);
    if n_max >= 1 {
        composed.push(f.clone());
    }
    for k in 1..n_max {
        let (a, b, c) = hypergroup.spec().coefficients(k)?;
        let cur = &composed[k as usize];
        let prev = &composed[k as usize - 1];
        let mut next = uni_mul_trunc(&f, cur);
        let c_inv = c.inv();
        for (i, slot) in next.iter_mut().enumerate() {
            *slot = &(&*slot - &(&a * &prev[i])) - &(&b * &cur[i]);
            *slot = &*slot * &c_inv;
        }
        composed.push(next);
    }

    let mut rows = BTreeMap::new();
    let mut factorial = BigInt::from(1);
    for k in 0..=order {
        if k > 0 {
            factorial *= BigInt::from(k);
        }
        let scale = Scalar::from_integer(factorial.clone());
        let row = composed
            .iter()
            .map(|series| &scale * &series[k as usize])
            .collect();
        rows.insert(MultiIndex::new(vec![k]), row);
    }
    Ok(MomentTable::from_columns(1, order, n_max, rows))
}

/// Truncated product of two dense univariate series of equal length.
fn uni_mul_trunc(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let len = a.len();
    let mut out = vec![Scalar::zero(); len];
    for (i, left) in a.iter().enumerate() {
        if left.is_zero() {
            continue;
        }
        for (j, right) in b.iter().enumerate().take(len - i) {
            out[i + j] += &(left * right);
        }
    }
    out
}
