//! Randomized restriction protocols and closed-form dimension counts.
//!
//! A protocol restricts `f` to random low-dimensional subspaces and runs a rank
//! test on each restriction. A single full-rank restriction is a sound
//! certificate for `f`; restrictions that are all deficient are evidence only.
//! Trial `t` draws its restriction from ChaCha8 stream `t` of the configured
//! seed, so reports are reproducible bit for bit.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fixtures;
use crate::flattening::{
    slicerank2_rank_test_with, ternary_reducibility_test, FieldSpec, RankMode, RankOptions, Verdict, VerdictKind,
};
use crate::linalg::{ExactMatrix, Field, Scalar};
use crate::poly::monomial::binomial;
use crate::poly::{random_substitution, restrict, HomogeneousPoly, LinearSubstitution};
use crate::Error;

pub use crate::prolongation::prolongation_dim;

/// `codim σ_r(R¹_{n,d}) = max{0, C(d+n-r, n-r) - r(n-r+1)}` in `P S^d C^(n+1)`.
pub fn codim_sigma_r(n: u64, d: u64, r: u64) -> Result<u64, Error> {
    if d < 3 || r < 1 || r > n {
        return Err(Error::Usage(format!("codim needs d >= 3 and 1 <= r <= n, got n={n} d={d} r={r}")));
    }
    let b = binomial(d + n - r, n - r).ok_or_else(|| Error::Usage("binomial overflow".into()))?;
    Ok(b.saturating_sub(r * (n - r + 1)))
}

/// Variables in the restrictions used by the reduction to slice rank in few variables.
pub const REDUCTION_VARS: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProtocolConfig {
    pub trials: usize,
    pub seed: u64,
    pub field: FieldSpec,
    /// Settle every deficient trial with an exact kernel.
    pub exact_verify: bool,
    /// Emit a random restriction to [`REDUCTION_VARS`] variables when `f` has more.
    pub emit_reduction: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self { trials: 8, seed: 0, field: FieldSpec::Random, exact_verify: false, emit_reduction: false }
    }
}

impl ProtocolConfig {
    fn rank_options(&self) -> RankOptions {
        let mode = self.field.resolve(self.seed);
        RankOptions { mode, exact_verify: self.exact_verify || mode == RankMode::Exact }
    }

    fn trial_rng(&self, t: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(t as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    /// Stream index of a random trial; `null` for direct tests and fixtures.
    pub seed_offset: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    /// Rows are the variables of `f`, columns the variables of the restriction.
    pub restriction_matrix: Vec<Vec<String>>,
    pub restricted_form: String,
    pub rank: usize,
    pub rank_exact: bool,
    pub threshold: usize,
    pub verdict: VerdictKind,
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub num_vars: usize,
    pub restriction_matrix: Vec<Vec<String>>,
    pub restricted_form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtocolReport {
    pub input_digest: String,
    pub protocol: String,
    pub field: String,
    pub trials: Vec<TrialRecord>,
    pub final_verdict: VerdictKind,
    pub exact_verified: bool,
    /// Variables occurring in `f`.
    pub support: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prerequisite: Option<Box<ProtocolReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Reduction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experimental: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict_counts: Option<BTreeMap<String, usize>>,
    pub notes: Vec<String>,
}

impl ProtocolReport {
    /// True when every trial came from a direct test rather than sampling.
    pub fn is_direct(&self) -> bool {
        !self.trials.is_empty() && self.trials.iter().all(|t| t.seed_offset.is_none() && t.fixture.is_none())
    }
}

fn record(
    seed_offset: Option<u64>,
    fixture: Option<&str>,
    s: &LinearSubstitution,
    g: &HomogeneousPoly,
    v: &Verdict,
) -> TrialRecord {
    let witness =
        v.evidence.witness.as_ref().map(|w| w.iter().map(|col| col.iter().map(Scalar::to_string).collect()).collect());
    TrialRecord {
        seed_offset,
        fixture: fixture.map(str::to_string),
        restriction_matrix: s.to_rows(),
        restricted_form: g.to_string(),
        rank: v.evidence.rank,
        rank_exact: v.evidence.exact,
        threshold: v.threshold,
        verdict: v.kind,
        primes: v.evidence.primes.clone(),
        kernel_dim: v.evidence.witness.as_ref().map(Vec::len).or_else(|| v.evidence.exact.then_some(0)),
        witness,
    }
}

/// Coordinate inclusion `x_(support[k]) <- y_k`, padded with unused variables up to `width`.
fn coordinate_substitution(num_vars: usize, support: &[usize], width: usize) -> LinearSubstitution {
    let mut cols: Vec<usize> = support.to_vec();
    for v in 0..num_vars {
        if cols.len() == width {
            break;
        }
        if !cols.contains(&v) {
            cols.push(v);
        }
    }
    let mut m = ExactMatrix::zeros(num_vars, width, Field::Rational);
    for (k, &v) in cols.iter().enumerate() {
        m.set(v, k, Scalar::one(Field::Rational));
    }
    LinearSubstitution::new(m).expect("distinct coordinates")
}

fn check_input(f: &HomogeneousPoly) -> Result<(), Error> {
    if !f.field().is_rational() {
        return Err(crate::linalg::LinalgError::NotRational.into());
    }
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    Ok(())
}

fn counts(trials: &[TrialRecord]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for t in trials {
        *out.entry(t.verdict.to_string()).or_insert(0) += 1;
    }
    out
}

/// Irreducibility through random restrictions to 3 variables.
///
/// Forms involving at most 3 variables get one direct ternary test. Otherwise
/// `f` is first restricted to the variables it involves, then each trial
/// restricts further to a random 3-dimensional subspace. The first
/// `IrreducibleCertified` trial ends the run; if none occurs the verdict is
/// `ReducibleConsistent` with every trial's kernel recorded.
pub fn reducibility_protocol(f: &HomogeneousPoly, cfg: &ProtocolConfig) -> Result<ProtocolReport, Error> {
    run_reducibility(f, cfg, true)
}

fn run_reducibility(f: &HomogeneousPoly, cfg: &ProtocolConfig, early_stop: bool) -> Result<ProtocolReport, Error> {
    check_input(f)?;
    if f.num_vars() < 3 {
        return Err(Error::Shape(format!("reducibility needs at least 3 variables, got {}", f.num_vars())));
    }
    if cfg.trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    let opts = cfg.rank_options();
    let support = f.support();
    let mut trials = Vec::new();
    let mut notes = Vec::new();
    if support.len() <= 3 {
        let s = coordinate_substitution(f.num_vars(), &support, 3);
        let g = restrict(f, &s)?;
        let v = ternary_reducibility_test(&g, &opts)?;
        trials.push(record(None, None, &s, &g, &v));
        notes.push("at most 3 variables occur: direct ternary test".into());
    } else {
        let inclusion = coordinate_substitution(f.num_vars(), &support, support.len());
        let f_s = restrict(f, &inclusion)?;
        for t in 0..cfg.trials {
            let a = random_substitution(&mut cfg.trial_rng(t), support.len(), 3, Field::Rational);
            let g = restrict(&f_s, &a)?;
            let v = ternary_reducibility_test(&g, &opts)?;
            let full = inclusion.compose(&a)?;
            trials.push(record(Some(t as u64), None, &full, &g, &v));
            if early_stop && v.kind == VerdictKind::IrreducibleCertified {
                break;
            }
        }
    }
    let final_verdict = if trials.iter().any(|t| t.verdict == VerdictKind::IrreducibleCertified) {
        VerdictKind::IrreducibleCertified
    } else {
        VerdictKind::ReducibleConsistent
    };
    Ok(ProtocolReport {
        input_digest: f.digest(),
        protocol: "reducibility".into(),
        field: opts.mode.label(),
        exact_verified: trials.iter().all(|t| t.rank_exact),
        trials,
        final_verdict,
        support,
        prerequisite: None,
        reduction: None,
        experimental: None,
        verdict_counts: None,
        notes,
    })
}

/// Slice rank at least 3 for a cubic, through restrictions to 5 variables.
///
/// Slice rank cannot grow under restriction and every cubic of slice rank at
/// most 2 in 5 variables has `rank ρ^(2) <= 59`, so one restriction of rank 60
/// certifies `slrk(f) >= 3`. The reducibility protocol runs first and is
/// attached as a prerequisite.
pub fn slicerank3_certificate(f: &HomogeneousPoly, cfg: &ProtocolConfig) -> Result<ProtocolReport, Error> {
    let mut report = run_slicerank(f, cfg, true)?;
    report.prerequisite = Some(Box::new(reducibility_protocol(f, cfg)?));
    Ok(report)
}

fn run_slicerank(f: &HomogeneousPoly, cfg: &ProtocolConfig, early_stop: bool) -> Result<ProtocolReport, Error> {
    check_input(f)?;
    if f.degree() != 3 {
        return Err(Error::Shape(format!("slice-rank protocol needs a cubic, got degree {}", f.degree())));
    }
    if f.num_vars() < 5 {
        return Err(Error::Shape(format!("slice-rank protocol needs at least 5 variables, got {}", f.num_vars())));
    }
    if cfg.trials == 0 {
        return Err(Error::Usage("trials must be at least 1".into()));
    }
    let opts = cfg.rank_options();
    let support = f.support();
    let mut trials = Vec::new();
    let mut notes = Vec::new();
    let mut reduction = None;
    let done = |trials: &[TrialRecord]| early_stop && trials.iter().any(|t| t.verdict.is_certificate());
    if support.len() < 5 {
        notes.push(format!("only {} variables occur: no restriction to 5 variables is concise", support.len()));
    } else if support.len() == 5 {
        let s = coordinate_substitution(f.num_vars(), &support, 5);
        let g = restrict(f, &s)?;
        let v = slicerank2_rank_test_with(&g, &opts, opts.exact_verify)?;
        trials.push(record(None, None, &s, &g, &v));
        notes.push("exactly 5 variables occur: direct rank test".into());
    } else {
        if f.num_vars() == 8 && *f == fixtures::f0() {
            let s = fixtures::f0_restriction();
            let g = restrict(f, &s)?;
            let v = slicerank2_rank_test_with(&g, &opts, opts.exact_verify)?;
            trials.push(record(None, Some("f0-pinned"), &s, &g, &v));
        }
        let inclusion = coordinate_substitution(f.num_vars(), &support, support.len());
        let f_s = restrict(f, &inclusion)?;
        for t in 0..cfg.trials {
            if done(&trials) {
                break;
            }
            let a = random_substitution(&mut cfg.trial_rng(t), support.len(), 5, Field::Rational);
            let g = restrict(&f_s, &a)?;
            let v = slicerank2_rank_test_with(&g, &opts, opts.exact_verify)?;
            trials.push(record(Some(t as u64), None, &inclusion.compose(&a)?, &g, &v));
        }
        if cfg.emit_reduction && support.len() > REDUCTION_VARS {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(u64::MAX - 1);
            let a = random_substitution(&mut rng, support.len(), REDUCTION_VARS, Field::Rational);
            let full = inclusion.compose(&a)?;
            reduction = Some(Reduction {
                num_vars: REDUCTION_VARS,
                restriction_matrix: full.to_rows(),
                restricted_form: restrict(&f_s, &a)?.to_string(),
            });
            notes.push("for irreducible f, slice rank <= 2 is decided by restrictions to 14 variables".into());
        }
    }
    let final_verdict = if trials.iter().any(|t| t.verdict.is_certificate()) {
        VerdictKind::SliceRankAtLeast(3)
    } else {
        VerdictKind::Inconclusive
    };
    Ok(ProtocolReport {
        input_digest: f.digest(),
        protocol: "slicerank3".into(),
        field: opts.mode.label(),
        exact_verified: trials.iter().all(|t| t.rank_exact),
        trials,
        final_verdict,
        support,
        prerequisite: None,
        reduction,
        experimental: None,
        verdict_counts: None,
        notes,
    })
}

/// Experimental scan of restrictions to `2r + 1` variables for a cubic.
///
/// `r = 1` runs every reducibility trial, `r = 2` every 5-variable rank trial.
/// The report lists all trials with verdict counts; its only sound content is
/// that of the individual certificates.
pub fn conjecture_experiment(f: &HomogeneousPoly, r: usize, cfg: &ProtocolConfig) -> Result<ProtocolReport, Error> {
    if f.degree() != 3 {
        return Err(Error::Shape(format!("the experiment takes cubics, got degree {}", f.degree())));
    }
    let mut report = match r {
        1 => run_reducibility(f, cfg, false)?,
        2 => run_slicerank(f, cfg, false)?,
        _ => {
            return Err(Error::Unsupported(format!(
                "r = {r}: no rank test on {} variables is known, only r = 1 and r = 2 are available",
                2 * r + 1
            )))
        }
    };
    report.protocol = format!("conjecture-r{r}");
    report.experimental = Some(true);
    report.verdict_counts = Some(counts(&report.trials));
    report.notes.push("experimental: no claim beyond the individual r <= 2 certificates".into());
    Ok(report)
}
