//! Finitely supported measures on the naturals with exact scalar weights.
//!
//! The canonical form stores no zero weights, so measure equality is plain
//! map equality. Linearizations `delta_n * delta_m` and their bilinear
//! extensions live in this type.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A finite weighted sum of point masses `sum_k w_k delta_k`.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "MeasureRepr")]
pub struct Measure {
    atoms: BTreeMap<u32, Scalar>,
}

/// Deserialization goes through [`Measure::from_atoms`] so that explicit
/// zero weights in the input collapse to the canonical zero-free form.
#[derive(Deserialize)]
struct MeasureRepr {
    atoms: BTreeMap<u32, Scalar>,
}

impl From<MeasureRepr> for Measure {
    fn from(repr: MeasureRepr) -> Self {
        Measure::from_atoms(repr.atoms)
    }
}

impl Measure {
    pub fn zero() -> Self {
        Measure::default()
    }

    /// The point mass `delta_n`.
    pub fn point(n: u32) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(n, Scalar::one());
        Measure { atoms }
    }

    /// Builds a measure from weighted atoms, dropping zero weights and
    /// summing duplicates.
    pub fn from_atoms<I: IntoIterator<Item = (u32, Scalar)>>(entries: I) -> Self {
        let mut measure = Measure::zero();
        for (n, w) in entries {
            measure.add_atom(n, &w);
        }
        measure
    }

    /// Adds `weight` at point `n`, keeping the zero-free canonical form.
    pub fn add_atom(&mut self, n: u32, weight: &Scalar) {
        if weight.is_zero() {
            return;
        }
        match self.atoms.get_mut(&n) {
            Some(w) => {
                *w += weight;
                if w.is_zero() {
                    self.atoms.remove(&n);
                }
            }
            None => {
                self.atoms.insert(n, weight.clone());
            }
        }
    }

    pub fn weight(&self, n: u32) -> Scalar {
        self.atoms.get(&n).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Number of atoms with nonzero weight.
    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    /// Atoms in ascending point order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> {
        self.atoms.iter().map(|(&n, w)| (n, w))
    }

    pub fn support_min(&self) -> Option<u32> {
        self.atoms.keys().next().copied()
    }

    pub fn support_max(&self) -> Option<u32> {
        self.atoms.keys().next_back().copied()
    }

    /// Total mass `sum_k w_k`.
    pub fn total(&self) -> Scalar {
        let mut sum = Scalar::zero();
        for w in self.atoms.values() {
            sum += w;
        }
        sum
    }

    pub fn scale(&self, factor: &Scalar) -> Self {
        if factor.is_zero() {
            return Measure::zero();
        }
        Measure {
            atoms: self
                .atoms
                .iter()
                .map(|(&n, w)| (n, w * factor))
                .collect(),
        }
    }

    /// True when every weight is real and nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        use num_traits::Signed;
        self.atoms
            .values()
            .all(|w| w.is_real() && !w.re().is_negative())
    }
}

impl Add<&Measure> for &Measure {
    type Output = Measure;
    fn add(self, rhs: &Measure) -> Measure {
        let mut out = self.clone();
        for (n, w) in rhs.iter() {
            out.add_atom(n, w);
        }
        out
    }
}

impl Sub<&Measure> for &Measure {
    type Output = Measure;
    fn sub(self, rhs: &Measure) -> Measure {
        let mut out = self.clone();
        for (n, w) in rhs.iter() {
            out.add_atom(n, &-w);
        }
        out
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, w) in &self.atoms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{w}·δ{n}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_has_total_one() {
        assert_eq!(Measure::point(0).total(), Scalar::one());
    }

    #[test]
    fn totals_add_linearly() {
        let half = Scalar::from_ratio(1, 2);
        let mu = Measure::from_atoms([(0, half.clone()), (2, half)]);
        assert_eq!(mu.total(), Scalar::one());
    }

    #[test]
    fn scaling_by_zero_empties_the_measure() {
        let mu = Measure::point(3).scale(&Scalar::zero());
        assert!(mu.is_zero());
        assert_eq!(mu.support_len(), 0);
    }

    #[test]
    fn cancellation_drops_atoms() {
        let mu = Measure::point(1);
        let diff = &mu - &mu;
        assert!(diff.is_zero());
        assert_eq!(diff, Measure::zero());
    }

    #[test]
    fn from_atoms_merges_duplicates() {
        let third = Scalar::from_ratio(1, 3);
        let mu = Measure::from_atoms([
            (5, third.clone()),
            (5, third.clone()),
            (5, third.clone()),
            (7, Scalar::zero()),
        ]);
        assert_eq!(mu.weight(5), Scalar::one());
        assert_eq!(mu.support_len(), 1);
    }

    #[test]
    fn serde_matches_documented_shape() {
        let half = Scalar::from_ratio(1, 2);
        let mu = Measure::from_atoms([(0, half.clone()), (2, half)]);
        let json = serde_json::to_string(&mu).unwrap();
        assert_eq!(json, r#"{"atoms":{"0":"1/2","2":"1/2"}}"#);
        let back: Measure = serde_json::from_str(&json).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn deserialization_drops_explicit_zeros() {
        let mu: Measure = serde_json::from_str(r#"{"atoms":{"3":"0","5":"1"}}"#).unwrap();
        assert_eq!(mu, Measure::point(5));
        assert_eq!(mu.support_len(), 1);
    }
}
