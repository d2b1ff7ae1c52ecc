//! Dense homogeneous polynomials over an exact field.
//!
//! A form of degree `d` in `n+1` variables stores `C(n+d, n)` coefficients in
//! graded-lex order (see [`monomial`]).

pub mod monomial;
mod parse;
mod random;
mod substitution;

use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::linalg::{Field, LinalgError, Scalar};
pub use monomial::{monomial_at, monomial_position, monomials, num_monomials, MonomialIndex};
pub use parse::{infer_num_vars, parse_poly, ParseError, ParseErrorKind};
pub use random::{
    random_form, random_form_with, random_scalar, random_substitution, RATIONAL_COEFF_BOUND, SUBSTITUTION_ENTRY_BOUND,
};
pub use substitution::{restrict, LinearSubstitution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },
    #[error("a form needs at least one variable")]
    NoVariables,
    #[error("coefficient vector has length {found}, expected {expected}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("substitution matrix does not have full column rank")]
    RankDeficientSubstitution,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: u32,
    field: Field,
    coeffs: Vec<Scalar>,
}

impl HomogeneousPoly {
    pub fn zero(num_vars: usize, degree: u32, field: Field) -> Self {
        assert!(num_vars > 0, "a form needs at least one variable");
        Self { num_vars, degree, field, coeffs: vec![Scalar::zero(field); num_monomials(num_vars, degree)] }
    }

    pub fn constant(num_vars: usize, c: Scalar) -> Self {
        assert!(num_vars > 0, "a form needs at least one variable");
        Self { num_vars, degree: 0, field: c.field(), coeffs: vec![c] }
    }

    /// The linear form `x_i`.
    pub fn variable(num_vars: usize, i: usize, field: Field) -> Result<Self, PolyError> {
        if i >= num_vars {
            return Err(PolyError::VariableOutOfRange { index: i, num_vars });
        }
        let mut p = Self::zero(num_vars, 1, field);
        p.coeffs[i] = Scalar::one(field);
        Ok(p)
    }

    pub fn from_coeffs(num_vars: usize, degree: u32, field: Field, coeffs: Vec<Scalar>) -> Result<Self, PolyError> {
        if num_vars == 0 {
            return Err(PolyError::NoVariables);
        }
        let expected = num_monomials(num_vars, degree);
        if coeffs.len() != expected {
            return Err(PolyError::CoefficientCount { expected, found: coeffs.len() });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(PolyError::FieldMismatch { left: field, right: bad.field() });
        }
        Ok(Self { num_vars, degree, field, coeffs })
    }

    /// Builds a form from `(coefficient, exponents)` pairs; repeated monomials add up.
    pub fn from_terms<I>(num_vars: usize, degree: u32, field: Field, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Scalar, Vec<u32>)>,
    {
        if num_vars == 0 {
            return Err(PolyError::NoVariables);
        }
        let mut p = Self::zero(num_vars, degree, field);
        for (c, exps) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::VarCountMismatch { left: num_vars, right: exps.len() });
            }
            let d: u32 = exps.iter().sum();
            if d != degree {
                return Err(PolyError::DegreeMismatch { left: degree, right: d });
            }
            if c.field() != field {
                return Err(PolyError::FieldMismatch { left: field, right: c.field() });
            }
            p.coeffs[monomial_position(&exps)] += &c;
        }
        Ok(p)
    }

    /// Small-integer convenience constructor used heavily by fixtures and tests.
    pub fn from_int_terms(num_vars: usize, field: Field, terms: &[(i64, &[u32])]) -> Result<Self, PolyError> {
        let degree = terms.first().map_or(0, |(_, e)| e.iter().sum());
        Self::from_terms(num_vars, degree, field, terms.iter().map(|(c, e)| (Scalar::from_i64(field, *c), e.to_vec())))
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, exponents: &[u32]) -> &Scalar {
        &self.coeffs[monomial_position(exponents)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (monomial_at(self.num_vars, self.degree, i), c))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch { left: self.field, right: other.field });
        }
        if self.num_vars != other.num_vars {
            return Err(PolyError::VarCountMismatch { left: self.num_vars, right: other.num_vars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(PolyError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// Product of two forms; degrees add.
    pub fn multiply(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.num_vars, degree, self.field);
        let rhs: Vec<(Vec<u32>, &Scalar)> = other.terms().collect();
        let mut exps = vec![0u32; self.num_vars];
        for (ea, ca) in self.terms() {
            for (eb, cb) in &rhs {
                for k in 0..self.num_vars {
                    exps[k] = ea[k] + eb[k];
                }
                out.coeffs[monomial_position(&exps)] += &(ca * *cb);
            }
        }
        Ok(out)
    }

    /// `∂f/∂x_i`. The derivative of a constant is the zero form of degree 0.
    pub fn partial_derivative(&self, i: usize) -> Result<Self, PolyError> {
        if i >= self.num_vars {
            return Err(PolyError::VariableOutOfRange { index: i, num_vars: self.num_vars });
        }
        if self.degree == 0 {
            return Ok(Self::zero(self.num_vars, 0, self.field));
        }
        let mut out = Self::zero(self.num_vars, self.degree - 1, self.field);
        for (mut e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let mult = Scalar::from_i64(self.field, e[i] as i64);
            e[i] -= 1;
            out.coeffs[monomial_position(&e)] += &(c * &mult);
        }
        Ok(out)
    }

    /// All first partials `∂_0 f, ..., ∂_n f`.
    pub fn gradient(&self) -> Vec<Self> {
        (0..self.num_vars).map(|i| self.partial_derivative(i).expect("index in range")).collect()
    }

    /// The same form viewed in `num_vars >= self.num_vars` variables.
    pub fn embed(&self, num_vars: usize) -> Result<Self, PolyError> {
        if num_vars < self.num_vars {
            return Err(PolyError::VarCountMismatch { left: self.num_vars, right: num_vars });
        }
        let mut out = Self::zero(num_vars, self.degree, self.field);
        for (mut e, c) in self.terms() {
            e.resize(num_vars, 0);
            out.coeffs[monomial_position(&e)] = c.clone();
        }
        Ok(out)
    }

    /// Coefficientwise reduction of a rational form into `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self, PolyError> {
        let coeffs = self.coeffs.iter().map(|c| c.reduce_mod(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { coeffs, field: Field::Prime(p), ..self.clone() })
    }

    /// Variables that occur in some nonzero term, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_vars];
        for (e, _) in self.terms() {
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    used[k] = true;
                }
            }
        }
        (0..self.num_vars).filter(|&k| used[k]).collect()
    }

    /// SHA-256 of the variable count, field and canonical text.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{};{};{};{}", self.num_vars, self.degree, self.field, self).as_bytes());
        hex::encode(h.finalize())
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_canonical(self, f)
    }
}
