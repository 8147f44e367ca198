//! Truncated multivariate power series (jets) in `r` variables up to total
//! degree `N`, with exact coefficients.
//!
//! A jet stands for a polynomial germ at 0; multiplication is the Cauchy
//! product with every term of total degree above `N` discarded. Because the
//! discarded terms never influence the kept ones, jet arithmetic computes
//! mixed partial derivatives at 0 exactly: `d^alpha u(0) = alpha! u_alpha`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergroup::Hypergroup;
use crate::multiindex::{mi_key_map, MultiIndex};
use crate::scalar::Scalar;

/// A truncated power series: sparse zero-free coefficient map over all
/// multi-indices of the given rank with total degree at most `order`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "JetRepr", into = "JetRepr")]
pub struct Jet {
    rank: usize,
    order: u32,
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl Jet {
    /// Builds a jet from explicit coefficients, validating every key and
    /// dropping zero values. Keys must have the stated rank and degree at
    /// most `order`.
    pub fn new(rank: usize, order: u32, coeffs: BTreeMap<MultiIndex, Scalar>) -> Result<Self> {
        assert!(rank >= 1, "Jet::new: rank must be >= 1");
        let mut jet = Jet {
            rank,
            order,
            coeffs: BTreeMap::new(),
        };
        for (index, value) in coeffs {
            jet.check_index(&index)?;
            if !value.is_zero() {
                jet.coeffs.insert(index, value);
            }
        }
        Ok(jet)
    }

    pub fn zero(rank: usize, order: u32) -> Self {
        assert!(rank >= 1, "Jet::zero: rank must be >= 1");
        Jet {
            rank,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, order: u32, value: Scalar) -> Self {
        let mut jet = Jet::zero(rank, order);
        if !value.is_zero() {
            jet.coeffs.insert(MultiIndex::zero(rank), value);
        }
        jet
    }

    pub fn one(rank: usize, order: u32) -> Self {
        Jet::constant(rank, order, Scalar::one())
    }

    /// The coordinate jet `t_pos`. Requires `order >= 1`.
    pub fn variable(rank: usize, order: u32, pos: usize) -> Self {
        assert!(order >= 1, "Jet::variable: order must be >= 1");
        let mut jet = Jet::zero(rank, order);
        jet.coeffs.insert(MultiIndex::unit(rank, pos), Scalar::one());
        jet
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, index: &MultiIndex) -> Scalar {
        self.coeffs
            .get(index)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&MultiIndex::zero(self.rank))
    }

    /// Coefficients in graded-lexicographic key order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sets one coefficient, keeping the zero-free canonical form.
    pub fn set_coeff(&mut self, index: MultiIndex, value: Scalar) -> Result<()> {
        self.check_index(&index)?;
        if value.is_zero() {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, value);
        }
        Ok(())
    }

    fn check_index(&self, index: &MultiIndex) -> Result<()> {
        if index.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: index.rank(),
            });
        }
        if index.degree() > self.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: index.degree(),
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (index, value) in &other.coeffs {
            let sum = &out.coeff(index) + value;
            if sum.is_zero() {
                out.coeffs.remove(index);
            } else {
                out.coeffs.insert(index.clone(), sum);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Jet::zero(self.rank, self.order);
        }
        Jet {
            rank: self.rank,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(index, value)| (index.clone(), value * factor))
                .collect(),
        }
    }

    /// Truncated Cauchy product: `w_alpha = sum_{beta <= alpha} u_beta v_{alpha-beta}`,
    /// with every product of total degree above the order discarded.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Jet::zero(self.rank, self.order);
        for (left_index, left_value) in &self.coeffs {
            for (right_index, right_value) in &other.coeffs {
                if left_index.degree() + right_index.degree() > self.order {
                    continue;
                }
                let target = left_index.add(right_index)?;
                let term = left_value * right_value;
                let sum = &out.coeff(&target) + &term;
                if sum.is_zero() {
                    out.coeffs.remove(&target);
                } else {
                    out.coeffs.insert(target, sum);
                }
            }
        }
        Ok(out)
    }

    /// `self^exp` under truncation.
    pub fn pow(&self, exp: u32) -> Self {
        let mut out = Jet::one(self.rank, self.order);
        for _ in 0..exp {
            out = out.mul(self).expect("pow: shapes match by construction");
        }
        out
    }

    /// `exp(self) = sum_{k<=N} self^k / k!`, exact because the argument must
    /// be nilpotent: its constant term has to vanish, so `self^{N+1}`
    /// truncates to zero.
    pub fn exp(&self) -> Result<Self> {
        let constant = self.constant_term();
        if !constant.is_zero() {
            return Err(Error::ExpNonzeroConstant {
                found: constant.to_string(),
            });
        }
        let mut out = Jet::one(self.rank, self.order);
        let mut term = Jet::one(self.rank, self.order);
        for k in 1..=self.order {
            term = term.mul(self)?.scale(&Scalar::from_int(i64::from(k)).inv());
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The mixed partial derivative `d^alpha self(0) = alpha! * coeff_alpha`.
    pub fn partial_at_zero(&self, index: &MultiIndex) -> Result<Scalar> {
        self.check_index(index)?;
        Ok(&Scalar::from_integer(index.factorial()) * &self.coeff(index))
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet(r={}, N={};", self.rank, self.order)?;
        for (index, value) in &self.coeffs {
            write!(f, " {index}:{value}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct JetRepr {
    rank: usize,
    order: u32,
    #[serde(with = "mi_key_map")]
    coeffs: BTreeMap<MultiIndex, Scalar>,
}

impl TryFrom<JetRepr> for Jet {
    type Error = Error;
    fn try_from(repr: JetRepr) -> Result<Self> {
        if repr.rank == 0 {
            return Err(Error::Parse {
                kind: "jet",
                input: "rank 0".to_string(),
                detail: "rank must be >= 1".to_string(),
            });
        }
        Jet::new(repr.rank, repr.order, repr.coeffs)
    }
}

impl From<Jet> for JetRepr {
    fn from(jet: Jet) -> Self {
        JetRepr {
            rank: jet.rank,
            order: jet.order,
            coeffs: jet.coeffs,
        }
    }
}

/// `P_n` composed with the jet `f`, by running the recurrence in the jet
/// ring: `J_0 = 1`, `J_1 = f`, `J_{k+1} = (f J_k - a_k J_{k-1} - b_k J_k) / c_k`.
/// Identical to substituting `f` into the monomial form of `P_n`.
pub fn compose_basis(hypergroup: &Hypergroup, n: u32, f: &Jet) -> Result<Jet> {
    Ok(compose_basis_prefix(hypergroup, n, f)?
        .pop()
        .expect("prefix is never empty"))
}

/// All of `P_0 o f, ..., P_n o f` in one pass over the recurrence.
pub fn compose_basis_prefix(hypergroup: &Hypergroup, n: u32, f: &Jet) -> Result<Vec<Jet>> {
    let mut jets = Vec::with_capacity(n as usize + 1);
    jets.push(Jet::one(f.rank(), f.order()));
    if n >= 1 {
        jets.push(f.clone());
    }
    for k in 1..n {
        let (a, b, c) = hypergroup.spec().coefficients(k)?;
        let cur = &jets[k as usize];
        let prev = &jets[k as usize - 1];
        let next = f
            .mul(cur)?
            .sub(&prev.scale(&a))?
            .sub(&cur.scale(&b))?
            .scale(&c.inv());
        jets.push(next);
    }
    Ok(jets)
}
