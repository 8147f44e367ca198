//! Shared helpers for the integration suites: deterministic random data and
//! independent oracles kept apart from the library implementation paths.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypermoment::multiindex::enumerate;
use hypermoment::{Hypergroup, Jet, Measure, MomentSeed, MultiIndex, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

pub fn mi(components: &[u32]) -> MultiIndex {
    MultiIndex::new(components.to_vec())
}

/// A small random rational, numerator in `-9..=9`, denominator in `1..=9`.
pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9))
}

pub fn random_seed(rng: &mut ChaCha8Rng, rank: usize, order: u32) -> MomentSeed {
    let values = enumerate(rank, order)
        .into_iter()
        .map(|index| (index, random_scalar(rng)))
        .collect();
    MomentSeed::new(rank, order, values).expect("enumerated seed is complete")
}

pub fn random_jet(rng: &mut ChaCha8Rng, rank: usize, order: u32) -> Jet {
    let coeffs = enumerate(rank, order)
        .into_iter()
        .map(|index| (index, random_scalar(rng)))
        .collect();
    Jet::new(rank, order, coeffs).expect("enumerated coefficients are in range")
}

/// Exact derivative of a monomial coefficient vector (constant term first).
pub fn differentiate(coeffs: &[Scalar]) -> Vec<Scalar> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| &Scalar::from_int(i as i64) * c)
        .collect()
}

pub fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Independent linearization oracle: expand `P_n * P_m` in the monomial
/// basis, then convert back to the `P_k` basis by the upper-triangular
/// top-down elimination. Never touches the recursive convolution path.
pub fn linearize_by_basis_conversion(h: &Hypergroup, n: u32, m: u32) -> Measure {
    let p_n = h.basis_polynomial(n).expect("basis available");
    let p_m = h.basis_polynomial(m).expect("basis available");
    let mut product = vec![Scalar::zero(); (n + m) as usize + 1];
    for (i, a) in p_n.iter().enumerate() {
        for (j, b) in p_m.iter().enumerate() {
            product[i + j] += &(a * b);
        }
    }
    let mut atoms = Vec::new();
    for k in (0..=n + m).rev() {
        let basis = h.basis_polynomial(k).expect("basis available");
        let lead = basis.last().expect("basis polynomials are nonempty");
        let coeff = &product[k as usize] / lead;
        if coeff.is_zero() {
            continue;
        }
        for (i, b) in basis.iter().enumerate() {
            product[i] -= &(b * &coeff);
        }
        atoms.push((k, coeff));
    }
    assert!(
        product.iter().all(Scalar::is_zero),
        "basis conversion must terminate exactly"
    );
    Measure::from_atoms(atoms)
}
