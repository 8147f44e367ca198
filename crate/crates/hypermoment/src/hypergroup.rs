//! Polynomial hypergroups from three-term recurrences.
//!
//! A recurrence spec supplies real sequences `(a_n, b_n, c_n)` with
//! `a_0 = b_0 = 0`, `a_n + b_n + c_n = 1`, `c_n > 0`, `b_n >= 0`,
//! `a_{n+1} > 0`. These define polynomials `P_0 = 1`, `P_1(x) = x`,
//! `x P_n = a_n P_{n-1} + b_n P_n + c_n P_{n+1}`, and the linearization
//! coefficients `c(n,m,k)` of `P_n P_m = sum_k c(n,m,k) P_k`. When all
//! `c(n,m,k)` are nonnegative they are the convolution weights
//! `delta_n * delta_m = sum_k c(n,m,k) delta_k` of a hypergroup on the
//! naturals with identity `delta_0`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::scalar::Scalar;

/// Built-in recurrence families, all normalized so that `P_n(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogEntry {
    /// Chebyshev polynomials of the first kind.
    Chebyshev1,
    /// Chebyshev polynomials of the second kind, normalized by `U_n(1) = n+1`.
    Chebyshev2,
    /// Legendre polynomials.
    Legendre,
}

impl CatalogEntry {
    pub const ALL: [CatalogEntry; 3] = [
        CatalogEntry::Chebyshev1,
        CatalogEntry::Chebyshev2,
        CatalogEntry::Legendre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogEntry::Chebyshev1 => "chebyshev1",
            CatalogEntry::Chebyshev2 => "chebyshev2",
            CatalogEntry::Legendre => "legendre",
        }
    }

    /// Human-readable coefficient formulas, for listings.
    pub fn describe(self) -> &'static str {
        match self {
            CatalogEntry::Chebyshev1 => "a_n = 1/2, b_n = 0, c_n = 1/2 for n >= 1; c_0 = 1",
            CatalogEntry::Chebyshev2 => {
                "a_n = n/(2(n+1)), b_n = 0, c_n = (n+2)/(2(n+1)) for n >= 1; c_0 = 1"
            }
            CatalogEntry::Legendre => {
                "a_n = n/(2n+1), b_n = 0, c_n = (n+1)/(2n+1) for n >= 1; c_0 = 1"
            }
        }
    }

    fn coefficients(self, n: u32) -> (Scalar, Scalar, Scalar) {
        if n == 0 {
            return (Scalar::zero(), Scalar::zero(), Scalar::one());
        }
        let n = i64::from(n);
        match self {
            CatalogEntry::Chebyshev1 => (
                Scalar::from_ratio(1, 2),
                Scalar::zero(),
                Scalar::from_ratio(1, 2),
            ),
            CatalogEntry::Chebyshev2 => (
                Scalar::from_ratio(n, 2 * (n + 1)),
                Scalar::zero(),
                Scalar::from_ratio(n + 2, 2 * (n + 1)),
            ),
            CatalogEntry::Legendre => (
                Scalar::from_ratio(n, 2 * n + 1),
                Scalar::zero(),
                Scalar::from_ratio(n + 1, 2 * n + 1),
            ),
        }
    }
}

impl FromStr for CatalogEntry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogEntry::ALL
            .iter()
            .copied()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownCatalogEntry {
                name: s.to_string(),
            })
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Rule {
    Catalog(CatalogEntry),
    /// Explicit coefficient tables indexed by `n`, all of length `n_max + 1`.
    Table {
        a: Vec<Scalar>,
        b: Vec<Scalar>,
        c: Vec<Scalar>,
    },
}

/// The recurrence coefficients defining a polynomial family, either one of
/// the catalog families (closed form in `n`) or explicit tables up to a
/// declared `n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub struct RecurrenceSpec {
    rule: Rule,
}

impl RecurrenceSpec {
    pub fn catalog(entry: CatalogEntry) -> Self {
        RecurrenceSpec {
            rule: Rule::Catalog(entry),
        }
    }

    /// Looks up a catalog family by name.
    pub fn from_name(name: &str) -> Result<Self> {
        Ok(RecurrenceSpec::catalog(name.parse()?))
    }

    /// A custom spec from explicit coefficient tables. All three tables must
    /// have the same length, which is `n_max + 1`.
    pub fn from_tables(a: Vec<Scalar>, b: Vec<Scalar>, c: Vec<Scalar>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() || a.len() != c.len() {
            return Err(Error::Parse {
                kind: "recurrence spec",
                input: format!("lengths a={}, b={}, c={}", a.len(), b.len(), c.len()),
                detail: "coefficient tables must be nonempty and of equal length".to_string(),
            });
        }
        Ok(RecurrenceSpec {
            rule: Rule::Table { a, b, c },
        })
    }

    pub fn catalog_entry(&self) -> Option<CatalogEntry> {
        match self.rule {
            Rule::Catalog(entry) => Some(entry),
            Rule::Table { .. } => None,
        }
    }

    /// Largest index with coefficients available; `None` for catalog rules.
    pub fn n_max(&self) -> Option<u32> {
        match &self.rule {
            Rule::Catalog(_) => None,
            Rule::Table { a, .. } => Some((a.len() - 1) as u32),
        }
    }

    /// `(a_n, b_n, c_n)`.
    pub fn coefficients(&self, n: u32) -> Result<(Scalar, Scalar, Scalar)> {
        match &self.rule {
            Rule::Catalog(entry) => Ok(entry.coefficients(n)),
            Rule::Table { a, b, c } => {
                let idx = n as usize;
                if idx >= a.len() {
                    return Err(Error::CoefficientUnavailable {
                        index: n,
                        available: (a.len() - 1) as u32,
                    });
                }
                Ok((a[idx].clone(), b[idx].clone(), c[idx].clone()))
            }
        }
    }

    /// Checks every spec invariant for `n <= n_max` and reports each failure
    /// with its index. Errors only when a custom table is too short.
    pub fn validate(&self, n_max: u32) -> Result<ValidationReport> {
        let mut violations = Vec::new();
        for n in 0..=n_max {
            let (a, b, c) = self.coefficients(n)?;
            for (which, value) in [('a', &a), ('b', &b), ('c', &c)] {
                if !value.is_real() {
                    violations.push(SpecViolation {
                        index: n,
                        kind: SpecViolationKind::NonReal { which },
                    });
                }
            }
            if n == 0 {
                if !a.is_zero() {
                    violations.push(SpecViolation {
                        index: 0,
                        kind: SpecViolationKind::LeadingANonzero,
                    });
                }
                if !b.is_zero() {
                    violations.push(SpecViolation {
                        index: 0,
                        kind: SpecViolationKind::LeadingBNonzero,
                    });
                }
            } else if !(a.is_real() && a.re().is_positive()) {
                violations.push(SpecViolation {
                    index: n,
                    kind: SpecViolationKind::ANotPositive,
                });
            }
            if !(c.is_real() && c.re().is_positive()) {
                violations.push(SpecViolation {
                    index: n,
                    kind: SpecViolationKind::CNotPositive,
                });
            }
            if b.is_real() && b.re().is_negative() {
                violations.push(SpecViolation {
                    index: n,
                    kind: SpecViolationKind::BNegative,
                });
            }
            if !(&(&a + &b) + &c).is_one() {
                violations.push(SpecViolation {
                    index: n,
                    kind: SpecViolationKind::SumNotOne,
                });
            }
        }
        Ok(ValidationReport {
            checked_up_to: n_max,
            violations,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SpecRepr {
    Catalog {
        catalog: String,
    },
    Table {
        n_max: u32,
        a: Vec<Scalar>,
        b: Vec<Scalar>,
        c: Vec<Scalar>,
    },
}

impl TryFrom<SpecRepr> for RecurrenceSpec {
    type Error = Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        match repr {
            SpecRepr::Catalog { catalog } => RecurrenceSpec::from_name(&catalog),
            SpecRepr::Table { n_max, a, b, c } => {
                let expected = n_max as usize + 1;
                if a.len() != expected || b.len() != expected || c.len() != expected {
                    return Err(Error::Parse {
                        kind: "recurrence spec",
                        input: format!(
                            "n_max={n_max}, lengths a={}, b={}, c={}",
                            a.len(),
                            b.len(),
                            c.len()
                        ),
                        detail: "each table must have exactly n_max + 1 entries".to_string(),
                    });
                }
                RecurrenceSpec::from_tables(a, b, c)
            }
        }
    }
}

impl From<RecurrenceSpec> for SpecRepr {
    fn from(spec: RecurrenceSpec) -> Self {
        match spec.rule {
            Rule::Catalog(entry) => SpecRepr::Catalog {
                catalog: entry.name().to_string(),
            },
            Rule::Table { a, b, c } => SpecRepr::Table {
                n_max: (a.len() - 1) as u32,
                a,
                b,
                c,
            },
        }
    }
}

/// A single failed spec invariant, located by coefficient index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecViolation {
    pub index: u32,
    pub kind: SpecViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecViolationKind {
    /// `a_0 = 0` fails.
    LeadingANonzero,
    /// `b_0 = 0` fails.
    LeadingBNonzero,
    /// `a_n > 0` fails for some `n >= 1`.
    ANotPositive,
    /// `b_n >= 0` fails.
    BNegative,
    /// `c_n > 0` fails.
    CNotPositive,
    /// `a_n + b_n + c_n = 1` fails.
    SumNotOne,
    /// A coefficient has a nonzero imaginary part.
    NonReal { which: char },
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.index;
        match &self.kind {
            SpecViolationKind::LeadingANonzero => write!(f, "a_0 = 0 fails"),
            SpecViolationKind::LeadingBNonzero => write!(f, "b_0 = 0 fails"),
            SpecViolationKind::ANotPositive => write!(f, "a_{n} > 0 fails"),
            SpecViolationKind::BNegative => write!(f, "b_{n} >= 0 fails"),
            SpecViolationKind::CNotPositive => write!(f, "c_{n} > 0 fails"),
            SpecViolationKind::SumNotOne => write!(f, "sum != 1 at n={n}"),
            SpecViolationKind::NonReal { which } => write!(f, "{which}_{n} is not real"),
        }
    }
}

/// Outcome of [`RecurrenceSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checked_up_to: u32,
    pub violations: Vec<SpecViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A polynomial hypergroup: a recurrence spec plus caches for basis
/// polynomials and linearization measures.
///
/// The caches are internally synchronized; concurrent calls behave as if
/// serialized, and a cache entry is only ever filled with the one exact
/// value it can take.
pub struct Hypergroup {
    spec: RecurrenceSpec,
    linearizations: Mutex<HashMap<(u32, u32), Measure>>,
    basis: Mutex<Vec<Vec<Scalar>>>,
}

impl Hypergroup {
    pub fn new(spec: RecurrenceSpec) -> Self {
        Hypergroup {
            spec,
            linearizations: Mutex::new(HashMap::new()),
            basis: Mutex::new(vec![vec![Scalar::one()]]),
        }
    }

    /// Convenience constructor for a catalog family.
    pub fn from_catalog(entry: CatalogEntry) -> Self {
        Hypergroup::new(RecurrenceSpec::catalog(entry))
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    /// Monomial coefficients of `P_n`, constant term first. The leading
    /// coefficient is nonzero and the vector has length `n + 1`.
    pub fn basis_polynomial(&self, n: u32) -> Result<Vec<Scalar>> {
        let mut cache = self.basis.lock().unwrap();
        while cache.len() <= n as usize {
            let k = cache.len() - 1; // highest index already present
            let next = if k == 0 {
                vec![Scalar::zero(), Scalar::one()] // P_1 = x
            } else {
                let (a, b, c) = self.spec.coefficients(k as u32)?;
                let p_k = &cache[k];
                let p_km1 = &cache[k - 1];
                // P_{k+1} = (x P_k - a_k P_{k-1} - b_k P_k) / c_k
                let mut coeffs = vec![Scalar::zero(); k + 2];
                for (i, v) in p_k.iter().enumerate() {
                    coeffs[i + 1] = v.clone();
                }
                for (i, v) in p_km1.iter().enumerate() {
                    coeffs[i] = &coeffs[i] - &(v * &a);
                }
                for (i, v) in p_k.iter().enumerate() {
                    coeffs[i] = &coeffs[i] - &(v * &b);
                }
                let c_inv = c.inv();
                for v in &mut coeffs {
                    *v = &*v * &c_inv;
                }
                coeffs
            };
            cache.push(next);
        }
        Ok(cache[n as usize].clone())
    }

    /// `P_n(lambda)` by running the recurrence on values. Agrees exactly with
    /// evaluating [`Hypergroup::basis_polynomial`] at `lambda`.
    pub fn eval_basis(&self, n: u32, lambda: &Scalar) -> Result<Scalar> {
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut prev = Scalar::one();
        let mut cur = lambda.clone();
        for k in 1..n {
            let (a, b, c) = self.spec.coefficients(k)?;
            let next = &(&(lambda * &cur) - &(&a * &prev)) - &(&b * &cur);
            let next = &next / &c;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// The linearization measure `delta_n * delta_m = sum_k c(n,m,k) delta_k`.
    ///
    /// Errors with [`Error::NegativeLinearization`] as soon as any weight
    /// along the way is negative (the recurrence then fails the hypergroup
    /// property), and with [`Error::CoefficientUnavailable`] when a custom
    /// table is too short; computing `delta_n * delta_m` needs coefficients
    /// through index `n + m - 1`.
    pub fn linearize(&self, n: u32, m: u32) -> Result<Measure> {
        let (hi, lo) = if n >= m { (n, m) } else { (m, n) };
        if let Some(hit) = self.linearizations.lock().unwrap().get(&(hi, lo)) {
            return Ok(hit.clone());
        }
        let result = match lo {
            0 => Measure::point(hi),
            1 => self.times_generator(&Measure::point(hi))?,
            _ => {
                let two_back = self.linearize(hi, lo - 2)?;
                let one_back = self.linearize(hi, lo - 1)?;
                let (a, b, c) = self.spec.coefficients(lo - 1)?;
                // delta_hi * delta_lo
                //   = (delta_1 * (delta_hi * delta_{lo-1})
                //      - a_{lo-1} delta_hi * delta_{lo-2}
                //      - b_{lo-1} delta_hi * delta_{lo-1}) / c_{lo-1}
                let raised = self.times_generator(&one_back)?;
                let numerator = &(&raised - &two_back.scale(&a)) - &one_back.scale(&b);
                numerator.scale(&c.inv())
            }
        };
        for (k, w) in result.iter() {
            if !w.is_real() || w.re().is_negative() {
                return Err(Error::NegativeLinearization {
                    n: hi,
                    m: lo,
                    k,
                    weight: w.to_string(),
                });
            }
        }
        self.linearizations
            .lock()
            .unwrap()
            .entry((hi, lo))
            .or_insert_with(|| result.clone());
        Ok(result)
    }

    /// `delta_1 * mu`, expanded atom by atom through the recurrence read as
    /// `delta_k * delta_1 = a_k delta_{k-1} + b_k delta_k + c_k delta_{k+1}`.
    fn times_generator(&self, mu: &Measure) -> Result<Measure> {
        let mut out = Measure::zero();
        for (k, w) in mu.iter() {
            let (a, b, c) = self.spec.coefficients(k)?;
            if k > 0 {
                out.add_atom(k - 1, &(w * &a));
            }
            out.add_atom(k, &(w * &b));
            out.add_atom(k + 1, &(w * &c));
        }
        Ok(out)
    }

    /// Bilinear convolution `mu * nu = sum_{n,m} mu(n) nu(m) (delta_n * delta_m)`.
    pub fn convolve(&self, mu: &Measure, nu: &Measure) -> Result<Measure> {
        let mut out = Measure::zero();
        for (n, wn) in mu.iter() {
            for (m, wm) in nu.iter() {
                let product = wn * wm;
                for (k, w) in self.linearize(n, m)?.iter() {
                    out.add_atom(k, &(w * &product));
                }
            }
        }
        Ok(out)
    }

    /// Installs a previously computed linearization, e.g. from a persisted
    /// cache. The entry is accepted only if it satisfies the structural
    /// invariants (mass one, nonnegative weights, support within
    /// `[|n-m|, n+m]`); returns whether it was accepted.
    pub fn preload_linearization(&self, n: u32, m: u32, measure: Measure) -> bool {
        let (hi, lo) = if n >= m { (n, m) } else { (m, n) };
        let in_bounds = measure
            .support_min()
            .zip(measure.support_max())
            .map(|(lo_k, hi_k)| lo_k >= hi - lo && hi_k <= hi + lo)
            .unwrap_or(false);
        if !in_bounds || !measure.is_nonnegative() || !measure.total().is_one() {
            return false;
        }
        self.linearizations
            .lock()
            .unwrap()
            .entry((hi, lo))
            .or_insert(measure);
        true
    }

    /// All cached linearizations, sorted by `(n, m)`.
    pub fn cached_linearizations(&self) -> Vec<(u32, u32, Measure)> {
        let cache = self.linearizations.lock().unwrap();
        let mut out: Vec<(u32, u32, Measure)> = cache
            .iter()
            .map(|(&(n, m), measure)| (n, m, measure.clone()))
            .collect();
        out.sort_by_key(|&(n, m, _)| (n, m));
        out
    }
}

impl fmt::Debug for Hypergroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergroup").field("spec", &self.spec).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chebyshev() -> Hypergroup {
        Hypergroup::from_catalog(CatalogEntry::Chebyshev1)
    }

    fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn catalog_coefficients() {
        let (a, b, c) = CatalogEntry::Chebyshev1.coefficients(5);
        assert_eq!((a, b, c), (ratio(1, 2), Scalar::zero(), ratio(1, 2)));
        let (a, b, c) = CatalogEntry::Chebyshev2.coefficients(1);
        assert_eq!((a, b, c), (ratio(1, 4), Scalar::zero(), ratio(3, 4)));
        let (a, b, c) = CatalogEntry::Legendre.coefficients(2);
        assert_eq!((a, b, c), (ratio(2, 5), Scalar::zero(), ratio(3, 5)));
        // c_0 = 1 is forced by a_0 = b_0 = 0 and the sum rule.
        for entry in CatalogEntry::ALL {
            assert_eq!(
                entry.coefficients(0),
                (Scalar::zero(), Scalar::zero(), Scalar::one())
            );
        }
    }

    #[test]
    fn unknown_catalog_name_errors() {
        let err = RecurrenceSpec::from_name("hermite").unwrap_err();
        assert!(matches!(err, Error::UnknownCatalogEntry { .. }));
    }

    #[test]
    fn catalog_specs_validate_deeply() {
        for entry in CatalogEntry::ALL {
            let report = RecurrenceSpec::catalog(entry).validate(100).unwrap();
            assert!(report.is_valid(), "{entry}: {:?}", report.violations);
        }
    }

    #[test]
    fn validation_flags_negative_b() {
        let spec = RecurrenceSpec::from_tables(
            vec![Scalar::zero(), ratio(1, 2)],
            vec![Scalar::zero(), ratio(-1, 2)],
            vec![Scalar::one(), Scalar::one()],
        )
        .unwrap();
        let report = spec.validate(1).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| v.index == 1 && v.kind == SpecViolationKind::BNegative));
        assert_eq!(
            report.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["b_1 >= 0 fails".to_string()]
        );
    }

    #[test]
    fn validation_flags_bad_sum() {
        let spec = RecurrenceSpec::from_tables(
            vec![Scalar::zero(), ratio(2, 10)],
            vec![Scalar::zero(), ratio(3, 10)],
            vec![Scalar::one(), ratio(4, 10)],
        )
        .unwrap();
        let report = spec.validate(1).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].index, 1);
        assert_eq!(report.violations[0].kind, SpecViolationKind::SumNotOne);
    }

    #[test]
    fn validation_needs_the_whole_table() {
        let spec = RecurrenceSpec::from_tables(
            vec![Scalar::zero()],
            vec![Scalar::zero()],
            vec![Scalar::one()],
        )
        .unwrap();
        let err = spec.validate(3).unwrap_err();
        assert_eq!(
            err,
            Error::CoefficientUnavailable {
                index: 1,
                available: 0
            }
        );
    }

    #[test]
    fn chebyshev_basis_polynomials() {
        let h = chebyshev();
        assert_eq!(h.basis_polynomial(0).unwrap(), vec![Scalar::one()]);
        assert_eq!(
            h.basis_polynomial(1).unwrap(),
            vec![Scalar::zero(), Scalar::one()]
        );
        // T_2 = 2x^2 - 1
        assert_eq!(
            h.basis_polynomial(2).unwrap(),
            vec![Scalar::from_int(-1), Scalar::zero(), Scalar::from_int(2)]
        );
        // T_3 = 4x^3 - 3x
        assert_eq!(
            h.basis_polynomial(3).unwrap(),
            vec![
                Scalar::zero(),
                Scalar::from_int(-3),
                Scalar::zero(),
                Scalar::from_int(4)
            ]
        );
    }

    #[test]
    fn legendre_basis_polynomial_two() {
        // P_2 = (3x^2 - 1)/2
        let h = Hypergroup::from_catalog(CatalogEntry::Legendre);
        assert_eq!(
            h.basis_polynomial(2).unwrap(),
            vec![ratio(-1, 2), Scalar::zero(), ratio(3, 2)]
        );
    }

    #[test]
    fn eval_basis_examples() {
        let h = chebyshev();
        // P_n(1) = 1 follows from the sum rule by induction.
        for entry in CatalogEntry::ALL {
            let g = Hypergroup::from_catalog(entry);
            for n in 0..=30 {
                assert_eq!(g.eval_basis(n, &Scalar::one()).unwrap(), Scalar::one());
            }
        }
        // T_3(1/2) = 4/8 - 3/2 = -1
        assert_eq!(h.eval_basis(3, &ratio(1, 2)).unwrap(), Scalar::from_int(-1));
        assert_eq!(h.eval_basis(0, &ratio(7, 3)).unwrap(), Scalar::one());
    }

    #[test]
    fn eval_matches_monomial_evaluation() {
        let lambdas = [ratio(1, 2), ratio(-3, 7), Scalar::from_int(2), Scalar::i()];
        for entry in CatalogEntry::ALL {
            let h = Hypergroup::from_catalog(entry);
            for n in 0..=12u32 {
                let coeffs = h.basis_polynomial(n).unwrap();
                for lambda in &lambdas {
                    let mut horner = Scalar::zero();
                    for c in coeffs.iter().rev() {
                        horner = &(&horner * lambda) + c;
                    }
                    assert_eq!(h.eval_basis(n, lambda).unwrap(), horner);
                }
            }
        }
    }

    #[test]
    fn chebyshev_linearizations() {
        let h = chebyshev();
        let half = ratio(1, 2);
        assert_eq!(
            h.linearize(1, 1).unwrap(),
            Measure::from_atoms([(0, half.clone()), (2, half.clone())])
        );
        // T_2 T_3 = (T_5 + T_1)/2
        assert_eq!(
            h.linearize(2, 3).unwrap(),
            Measure::from_atoms([(1, half.clone()), (5, half)])
        );
        assert_eq!(h.linearize(4, 0).unwrap(), Measure::point(4));
    }

    #[test]
    fn legendre_linearization_one_one() {
        let h = Hypergroup::from_catalog(CatalogEntry::Legendre);
        assert_eq!(
            h.linearize(1, 1).unwrap(),
            Measure::from_atoms([(0, ratio(1, 3)), (2, ratio(2, 3))])
        );
    }

    #[test]
    fn linearization_structure_smoke() {
        for entry in CatalogEntry::ALL {
            let h = Hypergroup::from_catalog(entry);
            for n in 0..=12 {
                for m in 0..=12 {
                    let mu = h.linearize(n, m).unwrap();
                    assert_eq!(mu.total(), Scalar::one(), "{entry} ({n},{m})");
                    assert!(mu.is_nonnegative(), "{entry} ({n},{m})");
                    assert!(mu.support_min().unwrap() >= n.abs_diff(m));
                    assert!(mu.support_max().unwrap() <= n + m);
                }
            }
        }
    }

    #[test]
    fn linearization_is_symmetric() {
        let h = Hypergroup::from_catalog(CatalogEntry::Chebyshev2);
        for n in 0..=10 {
            for m in 0..=10 {
                assert_eq!(h.linearize(n, m).unwrap(), h.linearize(m, n).unwrap());
            }
        }
    }

    #[test]
    fn convolution_identity_and_mass() {
        let h = Hypergroup::from_catalog(CatalogEntry::Legendre);
        let mu = Measure::from_atoms([(0, ratio(1, 2)), (2, ratio(1, 2))]);
        assert_eq!(h.convolve(&Measure::point(0), &mu).unwrap(), mu);
        assert_eq!(h.convolve(&mu, &Measure::point(0)).unwrap(), mu);
        let nu = Measure::from_atoms([(1, ratio(2, 3)), (3, ratio(2, 3))]);
        let conv = h.convolve(&mu, &nu).unwrap();
        assert_eq!(conv.total(), &mu.total() * &nu.total());
    }

    #[test]
    fn convolution_is_associative_on_point_masses() {
        let h = Hypergroup::from_catalog(CatalogEntry::Legendre);
        for n in 0..=4 {
            for m in 0..=4 {
                for k in 0..=4 {
                    let left = h
                        .convolve(&h.linearize(n, m).unwrap(), &Measure::point(k))
                        .unwrap();
                    let right = h
                        .convolve(&Measure::point(n), &h.linearize(m, k).unwrap())
                        .unwrap();
                    assert_eq!(left, right, "({n},{m},{k})");
                }
            }
        }
    }

    #[test]
    fn valid_spec_without_hypergroup_property_is_detected() {
        // Satisfies every sign and sum constraint, yet delta_2 * delta_2
        // picks up the weight (a_2 c_1 + c_2 a_3 - a_1)/c_1 = -4 at k = 2.
        let spec = RecurrenceSpec::from_tables(
            vec![Scalar::zero(), ratio(9, 10), ratio(1, 2), ratio(9, 10), ratio(1, 2)],
            vec![Scalar::zero(); 5],
            vec![Scalar::one(), ratio(1, 10), ratio(1, 2), ratio(1, 10), ratio(1, 2)],
        )
        .unwrap();
        assert!(spec.validate(4).unwrap().is_valid());
        let h = Hypergroup::new(spec);
        let err = h.linearize(2, 2).unwrap_err();
        match err {
            Error::NegativeLinearization { n: 2, m: 2, k: 2, weight } => {
                assert_eq!(weight, "-4");
            }
            other => panic!("expected negative linearization at k=2, got {other:?}"),
        }
    }

    #[test]
    fn custom_table_runs_out_of_coefficients() {
        let spec = RecurrenceSpec::from_tables(
            vec![Scalar::zero(), ratio(1, 2)],
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::one(), ratio(1, 2)],
        )
        .unwrap();
        let h = Hypergroup::new(spec);
        assert!(h.linearize(1, 1).is_ok());
        let err = h.linearize(2, 1).unwrap_err();
        assert!(matches!(err, Error::CoefficientUnavailable { index: 2, .. }));
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"n_max": 2, "a": ["0", "1/2", "1/2"], "b": ["0", "0", "0"], "c": ["1", "1/2", "1/2"]}"#;
        let spec: RecurrenceSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.n_max(), Some(2));
        assert_eq!(
            spec.coefficients(1).unwrap(),
            (ratio(1, 2), Scalar::zero(), ratio(1, 2))
        );
        let back = serde_json::to_string(&spec).unwrap();
        let again: RecurrenceSpec = serde_json::from_str(&back).unwrap();
        assert_eq!(again, spec);

        let catalog: RecurrenceSpec = serde_json::from_str(r#"{"catalog": "legendre"}"#).unwrap();
        assert_eq!(catalog.catalog_entry(), Some(CatalogEntry::Legendre));
    }

    #[test]
    fn spec_json_rejects_ragged_tables() {
        let json = r#"{"n_max": 2, "a": ["0", "1/2"], "b": ["0", "0", "0"], "c": ["1", "1/2", "1/2"]}"#;
        assert!(serde_json::from_str::<RecurrenceSpec>(json).is_err());
    }

    #[test]
    fn preload_rejects_corrupt_measures() {
        let h = chebyshev();
        // wrong mass
        let light = Measure::from_atoms([(0, ratio(1, 3))]);
        assert!(!h.preload_linearization(1, 1, light));
        let half = ratio(1, 2);
        let good = Measure::from_atoms([(0, half.clone()), (2, half.clone())]);
        assert!(h.preload_linearization(1, 1, good.clone()));
        assert_eq!(h.linearize(1, 1).unwrap(), good);
        // out-of-support mass
        let bad = Measure::from_atoms([(7, Scalar::one())]);
        assert!(!h.preload_linearization(1, 1, bad));
    }

    #[test]
    fn concurrent_linearization_behaves_as_if_serialized() {
        fn assert_shareable<T: Send + Sync>() {}
        assert_shareable::<Hypergroup>();

        let h = Hypergroup::from_catalog(CatalogEntry::Legendre);
        let results: Vec<Measure> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..4)
                .map(|_| scope.spawn(|| h.linearize(7, 6).unwrap()))
                .collect();
            handles.into_iter().map(|j| j.join().unwrap()).collect()
        });
        for pair in results.windows(2) {
            assert_eq!(pair[0], pair[1]);
        }
    }

    #[test]
    fn export_import_cache_round_trip() {
        let h = chebyshev();
        h.linearize(3, 2).unwrap();
        let exported = h.cached_linearizations();
        assert!(!exported.is_empty());
        let fresh = chebyshev();
        for (n, m, measure) in exported {
            assert!(fresh.preload_linearization(n, m, measure));
        }
        assert_eq!(fresh.linearize(3, 2).unwrap(), h.linearize(3, 2).unwrap());
    }
}
