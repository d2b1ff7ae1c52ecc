//! Named forms and random families used by tests, reports and the CLI.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ExactMatrix, Field, Scalar};
use crate::poly::{parse_poly, random_form_with, restrict, HomogeneousPoly, LinearSubstitution};
use crate::syzygy::StrengthDecomposition;

const Q: Field = Field::Rational;

/// `x0^3 + ... + x_(nv-1)^3`.
pub fn fermat_cubic(num_vars: usize) -> HomogeneousPoly {
    let text: Vec<String> = (0..num_vars).map(|i| format!("x{i}^3")).collect();
    parse_poly(&text.join(" + "), num_vars, Q).expect("valid fixture")
}

/// The determinant of `[[x0,x1,x2],[x1,x2,x3],[x2,x3,x4]]`.
pub fn hankel_cubic() -> HomogeneousPoly {
    parse_poly("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3", 5, Q).expect("valid fixture")
}

pub const F0_TEXT: &str = "x0^2*x2 + x0*x1*x3 + x1^2*x4 + x5*x6*x7";

/// `x0^2 x2 + x0 x1 x3 + x1^2 x4 + x5 x6 x7` in 8 variables.
pub fn f0() -> HomogeneousPoly {
    parse_poly(F0_TEXT, 8, Q).expect("valid fixture")
}

/// `x5 -> x0 + x2`, `x6 -> x3`, `x7 -> x1 + x4`, the first five variables fixed.
pub fn f0_restriction() -> LinearSubstitution {
    let mut rows: Vec<Vec<i64>> = (0..5).map(|i| (0..5).map(|j| i64::from(i == j)).collect()).collect();
    rows.push(vec![1, 0, 1, 0, 0]);
    rows.push(vec![0, 0, 0, 1, 0]);
    rows.push(vec![0, 1, 0, 0, 1]);
    LinearSubstitution::new(ExactMatrix::from_i64_rows(Q, &rows).expect("rectangular")).expect("full column rank")
}

/// The restriction of [`f0`] along [`f0_restriction`], a cubic in 5 variables.
pub fn f0_prime() -> HomogeneousPoly {
    restrict(&f0(), &f0_restriction()).expect("shapes match")
}

/// `x0 (x2^2 + x3^2 + x4^2) + x1 (x2 x3 + x1 x4)` as a strength-2 decomposition.
pub fn epsilon_zero_decomposition() -> StrengthDecomposition {
    let p = |s: &str| parse_poly(s, 5, Q).expect("valid fixture");
    StrengthDecomposition::new(vec![p("x0"), p("x1")], vec![p("x2^2 + x3^2 + x4^2"), p("x2*x3 + x1*x4")])
        .expect("valid decomposition")
}

/// The ε-deformation `ℓ_i + ε ℓ_i'`, `q_i + ε q_i'` with random `ℓ_i', q_i'` drawn from `seed`.
pub fn epsilon_decomposition(eps: &BigRational, seed: u64) -> StrengthDecomposition {
    let base = epsilon_zero_decomposition();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = Scalar::Rational(eps.clone());
    let mut perturb = |p: &HomogeneousPoly| {
        let delta = random_form_with(&mut rng, 5, p.degree(), Q);
        p.add(&delta.scale(&e)).expect("same shape")
    };
    let gs = base.gs().iter().map(&mut perturb).collect();
    let hs = base.hs().iter().map(&mut perturb).collect();
    StrengthDecomposition::new(gs, hs).expect("degrees preserved")
}

/// Random `g_1 h_1 + ... + g_r h_r` with `deg g_i = k_i` drawn in `1..d`.
pub fn random_decomposition(num_vars: usize, r: usize, d: u32, field: Field, seed: u64) -> StrengthDecomposition {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs = Vec::with_capacity(r);
    let mut hs = Vec::with_capacity(r);
    for _ in 0..r {
        let k = rng.gen_range(1..d);
        gs.push(random_form_with(&mut rng, num_vars, k, field));
        hs.push(random_form_with(&mut rng, num_vars, d - k, field));
    }
    StrengthDecomposition::new(gs, hs).expect("degrees add up")
}

/// Random `ℓ_1 q_1 + ... + ℓ_r q_r`, a cubic of slice rank at most `r`.
pub fn random_slice_rank(num_vars: usize, r: usize, seed: u64) -> StrengthDecomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gs = Vec::with_capacity(r);
    let mut hs = Vec::with_capacity(r);
    for _ in 0..r {
        gs.push(random_form_with(&mut rng, num_vars, 1, Q));
        hs.push(random_form_with(&mut rng, num_vars, 2, Q));
    }
    StrengthDecomposition::new(gs, hs).expect("degrees add up")
}

/// Random product `g h` with `deg g = k`, `deg h = d - k`.
pub fn random_product(
    num_vars: usize,
    k: u32,
    d: u32,
    seed: u64,
) -> (HomogeneousPoly, HomogeneousPoly, HomogeneousPoly) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_form_with(&mut rng, num_vars, k, Q);
    let h = random_form_with(&mut rng, num_vars, d - k, Q);
    (g.multiply(&h).expect("same shape"), g, h)
}
