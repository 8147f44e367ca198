//! The `bell-check` command: a fixed, deterministic battery of group-case
//! oracle cross-checks. Each oracle reports how many instances it compared
//! and how many disagreed; the "non-additive family" oracle passes exactly
//! when the checker rejects the broken family it is fed.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypermoment::bellgroup::{
    aczel_rank1, faa_di_bruno_check, group_moment, verify_group_binomial, AdditiveFamily,
    GroupExponential,
};
use hypermoment::hypergroup::CatalogEntry;
use hypermoment::multiindex::{enumerate, MultiIndex};
use hypermoment::{Hypergroup, Jet, Scalar};

pub struct OracleResult {
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    pub violations: u64,
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))
}

fn random_slopes(rng: &mut ChaCha8Rng, rank: usize, order: u32) -> BTreeMap<MultiIndex, Scalar> {
    enumerate(rank, order)
        .into_iter()
        .filter(|index| !index.is_zero())
        .map(|index| (index, random_scalar(rng)))
        .collect()
}

/// Runs the oracle battery. `shape` overrides the family shapes used by the
/// two binomial-identity oracles; the partition-sum and Faa di Bruno oracles
/// always run at their fixed sizes.
pub fn run_suite(shape: Option<(usize, u32)>) -> Vec<OracleResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe11_c4ec);
    let binomial_shapes: Vec<(usize, u32)> = match shape {
        Some(custom) => vec![custom],
        None => vec![(1, 4), (2, 3)],
    };
    let mut results = Vec::new();

    // Partition sum vs the Bell generating-function route, trivial exponential.
    {
        let trivial = GroupExponential::trivial();
        let mut checked = 0u64;
        let mut violations = 0u64;
        for _ in 0..5 {
            let family = AdditiveFamily::linear(1, 8, random_slopes(&mut rng, 1, 8))
                .expect("generated slopes are in range");
            for n in 0..=8u32 {
                for x in 0..=10u32 {
                    checked += 1;
                    let partition = aczel_rank1(n, x, &family).expect("n <= order");
                    let bell = group_moment(&MultiIndex::new(vec![n]), x, &family, &trivial)
                        .expect("n <= order");
                    if partition != bell {
                        violations += 1;
                    }
                }
            }
        }
        results.push(OracleResult {
            name: "partition sum = Bell generating function",
            passed: violations == 0,
            checked,
            violations,
        });
    }

    // Binomial identity for linear families under q = 1 and q = 2/3.
    for (name, base) in [
        ("group binomial identity, q = 1", Scalar::one()),
        ("group binomial identity, q = 2/3", Scalar::from_ratio(2, 3)),
    ] {
        let exponential = GroupExponential::new(base);
        let mut checked = 0u64;
        let mut violations = 0u64;
        for _ in 0..3 {
            for &(rank, order) in &binomial_shapes {
                let family =
                    AdditiveFamily::linear(rank, order, random_slopes(&mut rng, rank, order))
                        .expect("generated slopes are in range");
                let report = verify_group_binomial(&family, &exponential, order, 8)
                    .expect("order cap within family order");
                checked += report.checked;
                violations += report.violations.len() as u64;
            }
        }
        results.push(OracleResult {
            name,
            passed: violations == 0,
            checked,
            violations,
        });
    }

    // A non-additive family must be rejected.
    {
        let slopes = [(MultiIndex::new(vec![1]), Scalar::from_ratio(1, 2))]
            .into_iter()
            .collect();
        let broken = AdditiveFamily::non_additive_quadratic(1, 3, slopes)
            .expect("slopes are in range");
        let report = verify_group_binomial(&broken, &GroupExponential::trivial(), 3, 8)
            .expect("order cap within family order");
        results.push(OracleResult {
            name: "non-additive family detected",
            passed: !report.violations.is_empty(),
            checked: report.checked,
            violations: report.violations.len() as u64,
        });
    }

    // Faa di Bruno decomposition vs direct composition.
    {
        let mut checked = 0u64;
        let mut violations = 0u64;
        for rank in [1usize, 2] {
            let h = Hypergroup::from_catalog(if rank == 1 {
                CatalogEntry::Chebyshev2
            } else {
                CatalogEntry::Legendre
            });
            for _ in 0..3 {
                let coeffs = enumerate(rank, 3)
                    .into_iter()
                    .map(|index| (index, random_scalar(&mut rng)))
                    .collect();
                let f = Jet::new(rank, 3, coeffs).expect("coefficients are in range");
                for n in 0..=8u32 {
                    for alpha in enumerate(rank, 3) {
                        checked += 1;
                        let (decomposed, direct) =
                            faa_di_bruno_check(&h, n, &f, &alpha).expect("alpha within order");
                        if decomposed != direct {
                            violations += 1;
                        }
                    }
                }
            }
        }
        results.push(OracleResult {
            name: "Faa di Bruno decomposition = direct composition",
            passed: violations == 0,
            checked,
            violations,
        });
    }

    results
}
