//! Linear changes of variables `x_i -> Σ_j A_ij y_j`.

use super::{HomogeneousPoly, PolyError};
use crate::linalg::{rank_exact, ExactMatrix, Field, Scalar};

/// A full-column-rank `target_vars × source_vars` matrix `A`: the form's
/// variable `x_i` becomes `Σ_j A_ij y_j` in the `source_vars` new variables.
///
/// Restricting a form in `target_vars` variables along `A` gives a form in
/// `source_vars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubstitution {
    matrix: ExactMatrix,
}

impl LinearSubstitution {
    pub fn new(matrix: ExactMatrix) -> Result<Self, PolyError> {
        if matrix.cols() == 0 || matrix.cols() > matrix.rows() || rank_exact(&matrix) != matrix.cols() {
            return Err(PolyError::RankDeficientSubstitution);
        }
        Ok(Self { matrix })
    }

    pub fn identity(num_vars: usize, field: Field) -> Self {
        Self { matrix: ExactMatrix::identity(num_vars, field) }
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    /// Variables of the restricted form.
    pub fn source_vars(&self) -> usize {
        self.matrix.cols()
    }

    /// Variables of the form being restricted.
    pub fn target_vars(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    /// `self` followed by `then`: restricting along the result equals
    /// restricting along `self` and then along `then`.
    pub fn compose(&self, then: &LinearSubstitution) -> Result<Self, PolyError> {
        let m = self.matrix.matmul(&then.matrix)?;
        Ok(Self { matrix: m })
    }

    /// Entries as small text, row by row.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.matrix.rows()).map(|r| self.matrix.row(r).iter().map(ToString::to_string).collect()).collect()
    }
}

/// `f(A y)`, a form of the same degree in `s.source_vars()` variables.
pub fn restrict(f: &HomogeneousPoly, s: &LinearSubstitution) -> Result<HomogeneousPoly, PolyError> {
    if f.num_vars() != s.target_vars() {
        return Err(PolyError::VarCountMismatch { left: f.num_vars(), right: s.target_vars() });
    }
    if f.field() != s.field() {
        return Err(PolyError::FieldMismatch { left: f.field(), right: s.field() });
    }
    let m = s.source_vars();
    let field = f.field();
    let d = f.degree() as usize;
    // powers[i][k] = (Σ_j A_ij y_j)^k
    let mut powers: Vec<Vec<HomogeneousPoly>> = Vec::with_capacity(f.num_vars());
    for i in 0..f.num_vars() {
        let lin = HomogeneousPoly::from_coeffs(m, 1, field, s.matrix.row(i).to_vec())?;
        let mut row = vec![HomogeneousPoly::constant(m, Scalar::one(field))];
        for k in 1..=d {
            let next = row[k - 1].multiply(&lin)?;
            row.push(next);
        }
        powers.push(row);
    }
    let mut out = HomogeneousPoly::zero(m, f.degree(), field);
    for (exps, c) in f.terms() {
        let mut term = HomogeneousPoly::constant(m, c.clone());
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = term.multiply(&powers[i][e as usize])?;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, random_form, random_substitution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    #[test]
    fn identity_is_neutral() {
        let f = random_form(4, 3, Q, 2);
        assert_eq!(restrict(&f, &LinearSubstitution::identity(4, Q)).unwrap(), f);
    }

    #[test]
    fn rank_is_checked() {
        let m = ExactMatrix::from_i64_rows(Q, &[vec![1, 2], vec![2, 4], vec![3, 6]]).unwrap();
        assert_eq!(LinearSubstitution::new(m), Err(PolyError::RankDeficientSubstitution));
        let wide = ExactMatrix::from_i64_rows(Q, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(LinearSubstitution::new(wide).is_err());
    }

    #[test]
    fn restriction_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_substitution(&mut rng, 5, 3, Q);
        let f = random_form(5, 2, Q, 1);
        let g = random_form(5, 3, Q, 2);
        let lhs = restrict(&f.multiply(&g).unwrap(), &s).unwrap();
        let rhs = restrict(&f, &s).unwrap().multiply(&restrict(&g, &s).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn explicit_substitution() {
        // x0 -> y0 + y1, x1 -> y1 applied to x0^2 - x1^2 gives y0^2 + 2 y0 y1
        let s = LinearSubstitution::new(ExactMatrix::from_i64_rows(Q, &[vec![1, 1], vec![0, 1]]).unwrap()).unwrap();
        let f = parse_poly("x0^2 - x1^2", 2, Q).unwrap();
        assert_eq!(restrict(&f, &s).unwrap(), parse_poly("x0^2 + 2*x0*x1", 2, Q).unwrap());
    }

    #[test]
    fn composition_matches_sequential_restriction() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for field in [Q, Field::Prime(1_000_000_007)] {
            let s = random_substitution(&mut rng, 6, 4, field);
            let t = random_substitution(&mut rng, 4, 3, field);
            let f = random_form(6, 3, field, 8);
            let st = s.compose(&t).unwrap();
            assert_eq!(st.source_vars(), 3);
            assert_eq!(restrict(&f, &st).unwrap(), restrict(&restrict(&f, &s).unwrap(), &t).unwrap());
        }
    }
}
