//! Ruppert maps `ρ_f^(e): sl^(e-1)(V) -> S^(e+d-1) V` and the rank tests built on them.
//!
//! All verdicts are about forms with rational coefficients. A full-rank answer
//! modulo a prime is a certificate over ℚ; any claimed deficiency is backed by
//! an exact rational kernel.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::linalg::{
    kernel_basis, primes, random_prime, rank_exact, rank_modular, ExactMatrix, Field, LinalgError, Scalar,
};
use crate::poly::{monomial_at, monomial_position, num_monomials, HomogeneousPoly};
use crate::prolongation::{prolongation_basis, ProlongationBasis};
use crate::Error;

/// Retries allowed when a prime divides a denominator.
const PRIME_RETRY_BUDGET: usize = 16;

/// The matrix of `ρ_f^(e)` with its labels.
#[derive(Clone, Debug)]
pub struct FlatteningMatrix {
    f_digest: String,
    e: u32,
    degree: u32,
    matrix: ExactMatrix,
    basis: Arc<ProlongationBasis>,
}

impl FlatteningMatrix {
    pub fn f_digest(&self) -> &str {
        &self.f_digest
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn basis(&self) -> &Arc<ProlongationBasis> {
        &self.basis
    }

    /// Exponents of the monomial of `S^(e+d-1) V` labelling row `r`.
    pub fn row_label(&self, r: usize) -> Vec<u32> {
        monomial_at(self.basis.num_vars(), self.e + self.degree - 1, r)
    }
}

/// Builds `ρ_f^(e)`. Column `j` is `Σ g_i ∂_i f` for basis element `j`.
///
/// `e = 0` is accepted and uses all of `V*`; for a quadric this is the matrix
/// of first partials.
pub fn ruppert_matrix(f: &HomogeneousPoly, e: u32) -> Result<FlatteningMatrix, Error> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::Shape(format!("Ruppert map needs degree >= 2, got {d}")));
    }
    let nv = f.num_vars();
    let basis = prolongation_basis(nv, e, f.field());
    let grad: Vec<Vec<(Vec<u32>, Scalar)>> =
        f.gradient().iter().map(|g| g.terms().map(|(ex, c)| (ex, c.clone())).collect()).collect();
    let rows = num_monomials(nv, e + d - 1);
    let mut m = ExactMatrix::zeros(rows, basis.len(), f.field());
    let mut exps = vec![0u32; nv];
    for j in 0..basis.len() {
        let mut col = vec![Scalar::zero(f.field()); rows];
        for (slot, pos, c) in basis.entries(j) {
            let mono = monomial_at(nv, e, *pos);
            for (ex, coef) in &grad[*slot] {
                for k in 0..nv {
                    exps[k] = mono[k] + ex[k];
                }
                col[monomial_position(&exps)] += &(c * coef);
            }
        }
        for (r, x) in col.into_iter().enumerate() {
            if !x.is_zero() {
                m.set(r, j, x);
            }
        }
    }
    Ok(FlatteningMatrix { f_digest: f.digest(), e, degree: d, matrix: m, basis })
}

/// How ranks are computed: `q`, `fp:<prime>` or `fp:random`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Random,
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "q" | "Q" => Ok(FieldSpec::Rational),
            "fp:random" => Ok(FieldSpec::Random),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Usage(format!("unknown field `{s}`, expected q, fp:<prime> or fp:random")))?;
                Field::prime(p)?;
                Ok(FieldSpec::Prime(p))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
            FieldSpec::Random => write!(f, "fp:random"),
        }
    }
}

impl FieldSpec {
    /// Fixes the working prime. `fp:random` draws it from `seed`, on a stream
    /// no trial uses.
    pub fn resolve(self, seed: u64) -> RankMode {
        match self {
            FieldSpec::Rational => RankMode::Exact,
            FieldSpec::Prime(p) => RankMode::Modular(p),
            FieldSpec::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(u64::MAX);
                RankMode::Modular(random_prime(&mut rng))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Fraction-free elimination over ℚ.
    Exact,
    /// Elimination modulo the given prime, plus a confirmation prime on deficiency.
    Modular(u64),
}

impl RankMode {
    pub fn label(self) -> String {
        match self {
            RankMode::Exact => "q".to_string(),
            RankMode::Modular(p) => format!("fp:{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOptions {
    pub mode: RankMode,
    /// Compute an exact kernel whenever the rank is deficient.
    pub exact_verify: bool,
}

impl RankOptions {
    pub fn exact() -> Self {
        Self { mode: RankMode::Exact, exact_verify: true }
    }

    pub fn modular(prime: u64) -> Self {
        Self { mode: RankMode::Modular(prime), exact_verify: false }
    }
}

/// Rank data backing a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankEvidence {
    /// Exact rank when `exact` is set, otherwise a modular lower bound.
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub exact: bool,
    /// Primes the rank was computed modulo, in order.
    pub primes: Vec<u64>,
    /// Exact kernel basis over ℚ, each vector re-verified by multiplication.
    pub witness: Option<Vec<Vec<Scalar>>>,
}

impl RankEvidence {
    pub fn is_full(&self) -> bool {
        self.rank == self.cols
    }
}

/// A second prime derived from the first, also in `[2^50, 2^62]`.
pub fn confirmation_prime(prime: u64) -> u64 {
    let mut x = prime ^ 0x9e37_79b9_7f4a_7c15;
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    let span = primes::PRIME_RANGE_HIGH - primes::PRIME_RANGE_LOW;
    let start = primes::PRIME_RANGE_LOW + x % span;
    let q = primes::next_prime(start).expect("prime below 2^63");
    if q == prime {
        primes::next_prime(q).expect("prime below 2^63")
    } else {
        q
    }
}

/// Rank of a rational matrix with the soundness rules applied: full rank modulo
/// any prime is final; a deficient rank is either reported as a modular lower
/// bound or, when `want_witness` or `exact_verify` is set, settled by an exact kernel.
pub fn certify_rank(m: &ExactMatrix, opts: &RankOptions, want_witness: bool) -> Result<RankEvidence, Error> {
    if !m.field().is_rational() {
        return Err(LinalgError::NotRational.into());
    }
    let (rows, cols) = (m.rows(), m.cols());
    let exact_kernel = |primes: Vec<u64>| {
        let kernel = kernel_basis(m);
        let rank = cols - kernel.len();
        let witness = (!kernel.is_empty()).then_some(kernel);
        RankEvidence { rank, rows, cols, exact: true, primes, witness }
    };
    match opts.mode {
        RankMode::Exact => {
            let rank = rank_exact(m);
            if rank == cols {
                return Ok(RankEvidence { rank, rows, cols, exact: true, primes: vec![], witness: None });
            }
            Ok(exact_kernel(vec![]))
        }
        RankMode::Modular(p) => {
            let first = rank_modular(m, p, PRIME_RETRY_BUDGET)?;
            let mut primes = vec![first.prime];
            let mut rank = first.rank;
            if rank < cols {
                let second = rank_modular(m, confirmation_prime(first.prime), PRIME_RETRY_BUDGET)?;
                primes.push(second.prime);
                rank = rank.max(second.rank);
            }
            if rank == cols {
                return Ok(RankEvidence { rank, rows, cols, exact: true, primes, witness: None });
            }
            if want_witness || opts.exact_verify {
                let ev = exact_kernel(primes);
                debug_assert!(ev.rank >= rank, "modular rank exceeded exact rank");
                return Ok(ev);
            }
            Ok(RankEvidence { rank, rows, cols, exact: false, primes, witness: None })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    IrreducibleCertified,
    ReducibleConsistent,
    SliceRankAtLeast(u32),
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictKind::IrreducibleCertified => write!(f, "IrreducibleCertified"),
            VerdictKind::ReducibleConsistent => write!(f, "ReducibleConsistent"),
            VerdictKind::SliceRankAtLeast(r) => write!(f, "SliceRankAtLeast({r})"),
            VerdictKind::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

impl Serialize for VerdictKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl VerdictKind {
    /// Whether this verdict is a sound certificate of a lower bound.
    pub fn is_certificate(self) -> bool {
        matches!(self, VerdictKind::IrreducibleCertified | VerdictKind::SliceRankAtLeast(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Prolongation degree of the map that was tested.
    pub e: u32,
    /// Rank needed for the certificate.
    pub threshold: usize,
    pub evidence: RankEvidence,
}

fn require_rational(f: &HomogeneousPoly) -> Result<(), Error> {
    if f.field().is_rational() {
        Ok(())
    } else {
        Err(LinalgError::NotRational.into())
    }
}

/// Reducibility of a ternary form: `f` is irreducible over ℂ exactly when
/// `rank ρ_f^(d-2) = d² - 1`.
///
/// Full rank gives `IrreducibleCertified`. A deficient rank comes with its
/// exact kernel and gives `ReducibleConsistent`. Quadrics use `e = 0`, where
/// the test reads: the 3×3 matrix of first partials is singular.
pub fn ternary_reducibility_test(f: &HomogeneousPoly, opts: &RankOptions) -> Result<Verdict, Error> {
    if f.num_vars() != 3 {
        return Err(Error::Shape(format!("ternary test needs 3 variables, got {}", f.num_vars())));
    }
    require_rational(f)?;
    let d = f.degree();
    if d < 2 {
        return Err(Error::Shape(format!("ternary test needs degree >= 2, got {d}")));
    }
    let fm = ruppert_matrix(f, d - 2)?;
    let threshold = (d * d - 1) as usize;
    debug_assert_eq!(fm.matrix.cols(), threshold);
    let evidence = certify_rank(&fm.matrix, opts, true)?;
    let kind = if evidence.is_full() { VerdictKind::IrreducibleCertified } else { VerdictKind::ReducibleConsistent };
    Ok(Verdict { kind, e: d - 2, threshold, evidence })
}

/// `n(n+5)/2`, the largest possible rank of `ρ_f^(1)` for a reducible cubic
/// in `n + 1` variables.
pub fn cubic_lie_rank_bound(n: usize) -> usize {
    n * (n + 5) / 2
}

/// Exact rank of `ρ_f^(1)`, the tangent map of the `sl(V)` action at a cubic.
/// A value above [`cubic_lie_rank_bound`] proves irreducibility.
pub fn cubic_lie_rank(f: &HomogeneousPoly) -> Result<usize, Error> {
    if f.degree() != 3 {
        return Err(Error::Shape(format!("Lie rank needs a cubic, got degree {}", f.degree())));
    }
    Ok(rank_exact(ruppert_matrix(f, 1)?.matrix()))
}

/// Rank of a form `ρ^(2)` needs for a slice-rank-3 certificate in 5 variables.
pub const SLICE_RANK_THRESHOLD: usize = 60;

/// Cubics in 5 variables: `rank ρ_f^(2) = 60` proves slice rank at least 3.
/// Any lower rank is `Inconclusive`, with the exact kernel attached.
pub fn slicerank2_rank_test(f: &HomogeneousPoly, opts: &RankOptions) -> Result<Verdict, Error> {
    slicerank2_rank_test_with(f, opts, true)
}

pub(crate) fn slicerank2_rank_test_with(
    f: &HomogeneousPoly,
    opts: &RankOptions,
    witness: bool,
) -> Result<Verdict, Error> {
    if f.num_vars() != 5 || f.degree() != 3 {
        return Err(Error::Shape(format!(
            "slice-rank test needs a cubic in 5 variables, got degree {} in {} variables",
            f.degree(),
            f.num_vars()
        )));
    }
    require_rational(f)?;
    let fm = ruppert_matrix(f, 2)?;
    let evidence = certify_rank(&fm.matrix, opts, witness)?;
    let kind = if evidence.rank >= SLICE_RANK_THRESHOLD {
        VerdictKind::SliceRankAtLeast(3)
    } else {
        VerdictKind::Inconclusive
    };
    Ok(Verdict { kind, e: 2, threshold: SLICE_RANK_THRESHOLD, evidence })
}

/// Rank of `ρ_f^(e)` under the given options, without interpretation.
pub fn flattening_rank(f: &HomogeneousPoly, e: u32, opts: &RankOptions) -> Result<RankEvidence, Error> {
    require_rational(f)?;
    let fm = ruppert_matrix(f, e)?;
    certify_rank(&fm.matrix, opts, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_exact;
    use crate::poly::{parse_poly, random_form, random_substitution, restrict};

    const Q: Field = Field::Rational;
    const P: u64 = 1_125_899_906_842_597;

    fn p3(s: &str) -> HomogeneousPoly {
        parse_poly(s, 3, Q).unwrap()
    }

    #[test]
    fn shapes() {
        let z = HomogeneousPoly::zero(3, 3, Q);
        let m = ruppert_matrix(&z, 1).unwrap();
        assert!(m.matrix().is_zero());
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (10, 8));
        let m = ruppert_matrix(&random_form(5, 3, Q, 0), 2).unwrap();
        assert_eq!((m.matrix().rows(), m.matrix().cols()), (70, 70));
        assert_eq!(m.row_label(0), vec![4, 0, 0, 0, 0]);
        assert!(ruppert_matrix(&random_form(3, 1, Q, 0), 1).is_err());
    }

    #[test]
    fn fermat_cubic_is_certified() {
        let f = p3("x0^3 + x1^3 + x2^3");
        for opts in [RankOptions::exact(), RankOptions::modular(P)] {
            let v = ternary_reducibility_test(&f, &opts).unwrap();
            assert_eq!(v.kind, VerdictKind::IrreducibleCertified);
            assert_eq!((v.evidence.rank, v.threshold), (8, 8));
            assert!(v.evidence.exact && v.evidence.witness.is_none());
        }
    }

    #[test]
    fn products_are_deficient_with_witness() {
        for (s, d) in [("x0^3 + x0*x1*x2", 3u32), ("x0^4 + x0^2*x2^2 + x0^2*x1*x2 + x1*x2^3", 4)] {
            let f = p3(s);
            let v = ternary_reducibility_test(&f, &RankOptions::modular(P)).unwrap();
            assert_eq!(v.kind, VerdictKind::ReducibleConsistent);
            assert!(v.evidence.rank < (d * d - 1) as usize);
            let m = ruppert_matrix(&f, d - 2).unwrap();
            assert_eq!(v.evidence.rank, rank_exact(m.matrix()));
            for w in v.evidence.witness.as_ref().unwrap() {
                assert!(m.matrix().mul_vec(w).unwrap().iter().all(Scalar::is_zero));
            }
        }
    }

    #[test]
    fn quadrics() {
        let smooth = ternary_reducibility_test(&p3("x0^2 + x1^2 + x2^2"), &RankOptions::exact()).unwrap();
        assert_eq!((smooth.kind, smooth.evidence.rank), (VerdictKind::IrreducibleCertified, 3));
        let lines = ternary_reducibility_test(&p3("x0^2 - x1^2"), &RankOptions::exact()).unwrap();
        assert_eq!((lines.kind, lines.evidence.rank), (VerdictKind::ReducibleConsistent, 2));
    }

    #[test]
    fn shape_and_field_errors() {
        assert!(ternary_reducibility_test(&random_form(4, 3, Q, 0), &RankOptions::exact()).is_err());
        let fp = random_form(3, 3, Field::Prime(101), 0);
        assert!(matches!(
            ternary_reducibility_test(&fp, &RankOptions::exact()),
            Err(Error::Linalg(LinalgError::NotRational))
        ));
        assert!(slicerank2_rank_test(&random_form(5, 4, Q, 0), &RankOptions::exact()).is_err());
        assert!(cubic_lie_rank(&random_form(3, 4, Q, 0)).is_err());
    }

    #[test]
    fn lie_ranks() {
        assert_eq!(cubic_lie_rank_bound(2), 7);
        assert_eq!(cubic_lie_rank_bound(4), 18);
        assert_eq!(cubic_lie_rank(&p3("x0^3 + x0*x1^2 + x0*x2^2")).unwrap(), 7);
        assert_eq!(cubic_lie_rank(&p3("x0^3 + x1^3 + x2^3")).unwrap(), 8);
    }

    #[test]
    fn modular_matrix_is_reduction_of_rational_matrix() {
        for seed in 0..5 {
            let f = random_form(5, 3, Q, seed);
            let q = ruppert_matrix(&f, 2).unwrap();
            let fp = ruppert_matrix(&f.reduce_mod(P).unwrap(), 2).unwrap();
            assert_eq!(q.matrix().reduce_mod(P).unwrap(), *fp.matrix());
        }
    }

    #[test]
    fn rank_invariant_under_substitution_and_scaling() {
        let field = Field::Prime(1_000_000_007);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for seed in 0..10u64 {
            let g = random_form(3, 1 + (seed % 2) as u32, field, seed);
            let h = random_form(3, 2, field, seed + 100);
            let f = g.multiply(&h).unwrap();
            let e = f.degree() - 2;
            let base = rank_exact(ruppert_matrix(&f, e).unwrap().matrix());
            let a = random_substitution(&mut rng, 3, 3, field);
            let moved = restrict(&f, &a).unwrap();
            assert_eq!(rank_exact(ruppert_matrix(&moved, e).unwrap().matrix()), base);
            let lambda = Scalar::residue(seed + 2, 1_000_000_007);
            assert_eq!(rank_exact(ruppert_matrix(&f.scale(&lambda), e).unwrap().matrix()), base);
        }
    }

    #[test]
    fn field_specs() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("fp:101".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(101));
        assert_eq!("fp:random".parse::<FieldSpec>().unwrap(), FieldSpec::Random);
        assert!("fp:100".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
        let a = FieldSpec::Random.resolve(3);
        assert_eq!(a, FieldSpec::Random.resolve(3));
        let RankMode::Modular(p) = a else { panic!() };
        assert!((primes::PRIME_RANGE_LOW..=primes::PRIME_RANGE_HIGH).contains(&p));
        let q = confirmation_prime(p);
        assert!(q != p && crate::linalg::is_prime_u64(q));
    }

    #[test]
    fn small_prime_deficiency_is_confirmed_exactly() {
        // mod 3 the Fermat cubic's matrix collapses; the rank must still come out as 8
        let f = p3("x0^3 + x1^3 + x2^3");
        let v = ternary_reducibility_test(&f, &RankOptions::modular(3)).unwrap();
        assert_eq!(v.kind, VerdictKind::IrreducibleCertified);
        assert_eq!(v.evidence.rank, 8);
    }
}
