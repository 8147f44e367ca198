//! Multi-indices: elements of N^r with the componentwise partial order,
//! factorials, binomials, and graded-lexicographic enumeration.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A multi-index `alpha = (alpha_1, ..., alpha_r)`, `r >= 1`.
///
/// Two distinct orders live on multi-indices and must not be mixed up:
/// the componentwise partial order (`component_le`, used for binomials and
/// dominance sums) and the graded-lexicographic total order (`Ord`, used for
/// enumeration, map keys and serialization).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    components: Vec<u32>,
}

impl MultiIndex {
    /// Panics on an empty component list; rank must be at least 1.
    pub fn new(components: Vec<u32>) -> Self {
        assert!(!components.is_empty(), "MultiIndex::new: rank must be >= 1");
        MultiIndex { components }
    }

    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1, "MultiIndex::zero: rank must be >= 1");
        MultiIndex {
            components: vec![0; rank],
        }
    }

    /// The standard basis index with a single 1 in position `pos`.
    pub fn unit(rank: usize, pos: usize) -> Self {
        assert!(pos < rank, "MultiIndex::unit: position out of range");
        let mut components = vec![0; rank];
        components[pos] = 1;
        MultiIndex { components }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.components.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other` (the dominance partial order).
    /// Panics on rank mismatch; use [`MultiIndex::binom`] for a checked entry point.
    pub fn component_le(&self, other: &Self) -> bool {
        assert_eq!(self.rank(), other.rank(), "component_le: rank mismatch");
        self.components
            .iter()
            .zip(&other.components)
            .all(|(a, b)| a <= b)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(MultiIndex::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// Componentwise difference `self - other`; errors unless `other <= self`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        if !other.component_le(self) {
            return Err(Error::DominanceViolation {
                upper: self.clone(),
                lower: other.clone(),
            });
        }
        Ok(MultiIndex::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    /// `alpha! = prod_i alpha_i!`.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::from(1);
        for &c in &self.components {
            for k in 2..=c {
                acc *= BigInt::from(k);
            }
        }
        acc
    }

    /// `binom(alpha, beta) = alpha! / (beta! (alpha-beta)!)`, the product of
    /// componentwise binomial coefficients. Defined only for `beta <= alpha`.
    pub fn binom(&self, lower: &Self) -> Result<Scalar> {
        self.check_rank(lower)?;
        if !lower.component_le(self) {
            return Err(Error::DominanceViolation {
                upper: self.clone(),
                lower: lower.clone(),
            });
        }
        let mut acc = BigInt::from(1);
        for (&a, &b) in self.components.iter().zip(&lower.components) {
            acc *= binomial(BigInt::from(a), BigInt::from(b));
        }
        Ok(Scalar::from_integer(acc))
    }

    /// All `beta` with `beta <= self` componentwise, in odometer order
    /// (last component fastest). Includes `0` and `self`.
    pub fn sub_indices(&self) -> SubIndices {
        SubIndices {
            bounds: self.components.clone(),
            current: Some(vec![0; self.components.len()]),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        Ok(())
    }
}

/// Iterator over the componentwise-dominated sub-indices of a multi-index.
pub struct SubIndices {
    bounds: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl Iterator for SubIndices {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let current = self.current.as_mut()?;
        let item = MultiIndex::new(current.clone());
        // Odometer increment, last position fastest.
        let mut pos = current.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            if current[pos] < self.bounds[pos] {
                current[pos] += 1;
                break;
            }
            current[pos] = 0;
        }
        Some(item)
    }
}

/// Graded-lexicographic comparison: lower total degree first; within a degree
/// the index whose first differing component is larger comes first, so for
/// `r = 2` the order is `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.components.cmp(&self.components))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every multi-index of rank `r` with total degree at most `order`, exactly
/// once, in graded-lexicographic order. Panics if `rank == 0`.
pub fn enumerate(rank: usize, order: u32) -> Vec<MultiIndex> {
    assert!(rank >= 1, "enumerate: rank must be >= 1");
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(rank);
    for degree in 0..=order {
        push_compositions(degree, rank, &mut prefix, &mut out);
    }
    out
}

fn push_compositions(degree: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if slots == 1 {
        prefix.push(degree);
        out.push(MultiIndex::new(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in (0..=degree).rev() {
        prefix.push(first);
        push_compositions(degree - first, slots - 1, prefix, out);
        prefix.pop();
    }
}

// ---- Text form: JSON array of naturals, e.g. [1,0] ----

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex({self})")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_error = |detail: &str| Error::Parse {
            kind: "multi-index",
            input: s.to_string(),
            detail: detail.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| parse_error("expected [..] brackets"))?;
        if body.is_empty() {
            return Err(parse_error("rank must be >= 1"));
        }
        let components = body
            .split(',')
            .map(|part| {
                part.parse::<u32>()
                    .map_err(|e| parse_error(&format!("bad component {part:?}: {e}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(MultiIndex::new(components))
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.components.iter())
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let components = Vec::<u32>::deserialize(deserializer)?;
        if components.is_empty() {
            return Err(serde::de::Error::custom("multi-index rank must be >= 1"));
        }
        Ok(MultiIndex::new(components))
    }
}

/// Serde adapter for maps keyed by multi-indices: JSON objects only take
/// string keys, so keys are written in the `[1,0]` text form.
pub(crate) mod mi_key_map {
    use std::collections::BTreeMap;

    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::MultiIndex;

    pub fn serialize<S, V>(map: &BTreeMap<MultiIndex, V>, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        V: Serialize,
    {
        let mut out = serializer.serialize_map(Some(map.len()))?;
        for (key, value) in map {
            out.serialize_entry(&key.to_string(), value)?;
        }
        out.end()
    }

    pub fn deserialize<'de, D, V>(deserializer: D) -> Result<BTreeMap<MultiIndex, V>, D::Error>
    where
        D: Deserializer<'de>,
        V: Deserialize<'de>,
    {
        struct KeyMapVisitor<V>(std::marker::PhantomData<V>);

        impl<'de, V: Deserialize<'de>> Visitor<'de> for KeyMapVisitor<V> {
            type Value = BTreeMap<MultiIndex, V>;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a map keyed by multi-index strings like \"[1,0]\"")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut map = BTreeMap::new();
                while let Some((key, value)) = access.next_entry::<String, V>()? {
                    let index: MultiIndex =
                        key.parse().map_err(serde::de::Error::custom)?;
                    map.insert(index, value);
                }
                Ok(map)
            }
        }

        deserializer.deserialize_map(KeyMapVisitor(std::marker::PhantomData))
    }
}
