//! Seeded random forms and substitutions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{num_monomials, HomogeneousPoly, LinearSubstitution};
use crate::linalg::{ExactMatrix, Field, Scalar};

/// Rational coefficients are drawn uniformly from `[-50, 50]`.
pub const RATIONAL_COEFF_BOUND: i64 = 50;
/// Rational substitution entries are drawn uniformly from `[-20, 20]`.
pub const SUBSTITUTION_ENTRY_BOUND: i64 = 20;

/// Uniform integer in `[-bound, bound]` over ℚ, uniform residue over `F_p`.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field, bound: i64) -> Scalar {
    match field {
        Field::Rational => Scalar::from_i64(field, rng.gen_range(-bound..=bound)),
        Field::Prime(p) => Scalar::residue(rng.gen_range(0..p), p),
    }
}

pub fn random_form_with<R: Rng + ?Sized>(rng: &mut R, num_vars: usize, degree: u32, field: Field) -> HomogeneousPoly {
    let coeffs =
        (0..num_monomials(num_vars, degree)).map(|_| random_scalar(rng, field, RATIONAL_COEFF_BOUND)).collect();
    HomogeneousPoly::from_coeffs(num_vars, degree, field, coeffs).expect("coefficient count matches")
}

/// A form with every coefficient drawn independently; same seed, same form.
pub fn random_form(num_vars: usize, degree: u32, field: Field, seed: u64) -> HomogeneousPoly {
    random_form_with(&mut ChaCha8Rng::seed_from_u64(seed), num_vars, degree, field)
}

/// A random `target_vars × source_vars` substitution of full column rank,
/// restricting forms in `target_vars` variables to `source_vars` variables.
/// Rank-deficient draws are discarded and redrawn.
pub fn random_substitution<R: Rng + ?Sized>(
    rng: &mut R,
    target_vars: usize,
    source_vars: usize,
    field: Field,
) -> LinearSubstitution {
    assert!(source_vars >= 1 && source_vars <= target_vars, "need 1 <= source_vars <= target_vars");
    loop {
        let entries =
            (0..source_vars * target_vars).map(|_| random_scalar(rng, field, SUBSTITUTION_ENTRY_BOUND)).collect();
        let m = ExactMatrix::new(target_vars, source_vars, field, entries).expect("shape matches");
        if let Ok(s) = LinearSubstitution::new(m) {
            return s;
        }
    }
}
