//! Dense row-major matrices over an exact field, with rank and kernel routines.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::elimination::{bareiss_rank, fraction_free_rref, modp_rank, modp_rref};
use super::primes::next_prime;
use super::scalar::{Field, Scalar};
use super::LinalgError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, field: Field, entries: Vec<Scalar>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                context: "matrix entry count",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|s| s.field() != field) {
            return Err(LinalgError::FieldMismatch { left: field, right: bad.field() });
        }
        Ok(Self { rows, cols, field, entries })
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Self { rows, cols, field, entries: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    /// Builds a matrix from small integer rows.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch { context: "row length", expected: cols, found: row.len() });
            }
            entries.extend(row.iter().map(|&x| Scalar::from_i64(field, x)));
        }
        Self::new(rows.len(), cols, field, entries)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, field: Field, columns: &[Vec<Scalar>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len(), field);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    context: "column length",
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                if x.field() != field {
                    return Err(LinalgError::FieldMismatch { left: field, right: x.field() });
                }
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field must match matrix field");
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                context: "vector length",
                expected: self.cols,
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|s| s.field() != self.field) {
            return Err(LinalgError::FieldMismatch { left: self.field, right: bad.field() });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero(self.field);
                for (a, x) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch { left: self.field, right: other.field });
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                context: "matrix product inner dimension",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise reduction of a rational matrix into `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<ExactMatrix, LinalgError> {
        let entries = self.entries.iter().map(|x| x.reduce_mod(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, field: Field::Prime(p), entries })
    }

    /// Rows of a rational matrix scaled by the lcm of their denominators.
    pub(crate) fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| match x {
                    Scalar::Rational(q) => acc.lcm(q.denom()),
                    Scalar::Residue { .. } => unreachable!("integer_rows on a prime-field matrix"),
                });
                row.iter()
                    .map(|x| {
                        let q = x.as_rational().expect("rational entry");
                        q.numer() * (&lcm / q.denom())
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn residue_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| match x {
                        Scalar::Residue { value, .. } => *value,
                        Scalar::Rational(_) => unreachable!("residue_rows on a rational matrix"),
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Outcome of a modular rank computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularRank {
    pub rank: usize,
    pub prime: u64,
}

/// Rank of a rational matrix reduced modulo `prime`.
///
/// Reduction can only lose rank: the result is a lower bound for the rank over
/// the rationals, so a full-rank answer certifies full rank over ℚ. When the
/// prime divides a denominator, fresh primes (the next primes above it) are
/// tried, at most `budget` times.
pub fn rank_modular(m: &ExactMatrix, prime: u64, budget: usize) -> Result<ModularRank, LinalgError> {
    if !m.field.is_rational() {
        return Err(LinalgError::NotRational);
    }
    Field::prime(prime)?;
    let mut tried = Vec::new();
    let mut p = prime;
    loop {
        match m.reduce_mod(p) {
            Ok(reduced) => {
                let rank = modp_rank(reduced.residue_rows(), m.cols, p);
                return Ok(ModularRank { rank, prime: p });
            }
            Err(LinalgError::DenominatorDivisible { .. }) => {
                tried.push(p);
                if tried.len() > budget {
                    return Err(LinalgError::PrimeBudgetExhausted { tried });
                }
                p = next_prime(p).ok_or(LinalgError::PrimeBudgetExhausted { tried: tried.clone() })?;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Exact rank: Bareiss elimination over ℚ, plain elimination over `F_p`.
pub fn rank_exact(m: &ExactMatrix) -> usize {
    match m.field {
        Field::Rational => bareiss_rank(m.integer_rows(), m.cols),
        Field::Prime(p) => modp_rank(m.residue_rows(), m.cols, p),
    }
}

/// Basis of the right kernel, one vector per non-pivot column.
///
/// Over ℚ the vectors are primitive integer vectors whose free coordinate is
/// positive. Every vector is checked to be annihilated by `m` before returning.
pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    let basis = match m.field {
        Field::Rational => rational_kernel(m),
        Field::Prime(p) => modp_kernel(m, p),
    };
    for v in &basis {
        let image = m.mul_vec(v).expect("kernel vector shape");
        assert!(image.iter().all(Scalar::is_zero), "kernel vector failed verification");
    }
    #[cfg(debug_assertions)]
    assert_eq!(basis.len() + rank_exact(m), m.cols, "rank-nullity violated");
    basis
}

fn free_columns(pivots: &[usize], cols: usize) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

fn rational_kernel(m: &ExactMatrix) -> Vec<Vec<Scalar>> {
    let ech = fraction_free_rref(m.integer_rows(), m.cols);
    free_columns(&ech.pivots, m.cols)
        .into_iter()
        .map(|j| {
            let mut v = vec![BigInt::zero(); m.cols];
            v[j] = ech.det.clone();
            for (i, &c) in ech.pivots.iter().enumerate() {
                v[c] = -&ech.rows[i][j];
            }
            let content = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let sign = if v[j].is_negative() { -BigInt::one() } else { BigInt::one() };
            let scale = content * sign;
            v.into_iter().map(|x| Scalar::Rational(BigRational::from_integer(x / &scale))).collect()
        })
        .collect()
}

fn modp_kernel(m: &ExactMatrix, p: u64) -> Vec<Vec<Scalar>> {
    let mut rows = m.residue_rows();
    let pivots = modp_rref(&mut rows, m.cols, p);
    free_columns(&pivots, m.cols)
        .into_iter()
        .map(|j| {
            let mut v = vec![0u64; m.cols];
            v[j] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = (p - rows[i][j]) % p;
            }
            v.into_iter().map(|x| Scalar::residue(x, p)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_rows(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(Field::Rational, rows).unwrap()
    }

    #[test]
    fn modular_rank_small_examples() {
        let id = q_rows(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(rank_modular(&id, 101, 0).unwrap(), ModularRank { rank: 2, prime: 101 });
        let prop = q_rows(&[vec![2, 4], vec![1, 2]]);
        assert_eq!(rank_modular(&prop, 101, 0).unwrap().rank, 1);
    }

    #[test]
    fn modular_rank_retries_on_bad_denominator() {
        let third = BigRational::new(1.into(), 101.into());
        let m = ExactMatrix::new(1, 2, Field::Rational, vec![Scalar::Rational(third), Scalar::one(Field::Rational)])
            .unwrap();
        match rank_modular(&m, 101, 0) {
            Err(LinalgError::PrimeBudgetExhausted { tried }) => assert_eq!(tried, vec![101]),
            other => panic!("expected exhaustion, got {other:?}"),
        }
        assert_eq!(rank_modular(&m, 101, 1).unwrap(), ModularRank { rank: 1, prime: 103 });
    }

    #[test]
    fn modular_rank_rejects_prime_field_input() {
        let m = ExactMatrix::identity(2, Field::Prime(101));
        assert!(matches!(rank_modular(&m, 101, 3), Err(LinalgError::NotRational)));
    }

    #[test]
    fn exact_rank_examples() {
        assert_eq!(rank_exact(&ExactMatrix::zeros(3, 5, Field::Rational)), 0);
        // Hilbert matrix H_ij = 1/(i+j+1)
        let entries = (0..4)
            .flat_map(|i| (0..4).map(move |j| Scalar::Rational(BigRational::new(1.into(), (i + j + 1).into()))))
            .collect();
        let hilbert = ExactMatrix::new(4, 4, Field::Rational, entries).unwrap();
        assert_eq!(rank_exact(&hilbert), 4);
        assert_eq!(rank_exact(&hilbert.reduce_mod(101).unwrap()), 4);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&ExactMatrix::identity(3, Field::Rational)).is_empty());
        let k = kernel_basis(&q_rows(&[vec![1, 1]]));
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![Scalar::from_i64(Field::Rational, -1), Scalar::from_i64(Field::Rational, 1)]);
        let kp = kernel_basis(&ExactMatrix::from_i64_rows(Field::Prime(101), &[vec![1, 1]]).unwrap());
        assert_eq!(kp[0], vec![Scalar::from_i64(Field::Prime(101), -1), Scalar::one(Field::Prime(101))]);
    }

    #[test]
    fn matmul_and_transpose() {
        let a = q_rows(&[vec![1, 2], vec![3, 4]]);
        let b = q_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.matmul(&b).unwrap(), q_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.transpose(), q_rows(&[vec![1, 3], vec![2, 4]]));
    }
}
