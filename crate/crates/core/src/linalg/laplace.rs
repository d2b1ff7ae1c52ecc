//! Determinants of matrices of forms with one formal row.

use crate::poly::{HomogeneousPoly, PolyError};

/// Given `k` rows of `k + 1` forms, returns the cofactors of a formal last row:
/// entry `i` is `(-1)^(k+i)` times the determinant of the rows with column `i`
/// deleted. Entries in a row must share one degree.
pub fn laplace_det_row_symbolic(top_rows: &[Vec<HomogeneousPoly>]) -> Result<Vec<HomogeneousPoly>, PolyError> {
    let k = top_rows.len();
    assert!(k >= 1, "need at least one row");
    let first = &top_rows[0][0];
    for row in top_rows {
        assert_eq!(row.len(), k + 1, "each row needs k + 1 entries");
        for p in row {
            if p.num_vars() != first.num_vars() {
                return Err(PolyError::VarCountMismatch { left: first.num_vars(), right: p.num_vars() });
            }
            if p.field() != first.field() {
                return Err(PolyError::FieldMismatch { left: first.field(), right: p.field() });
            }
            if p.degree() != row[0].degree() {
                return Err(PolyError::DegreeMismatch { left: row[0].degree(), right: p.degree() });
            }
        }
    }
    (0..=k)
        .map(|i| {
            let cols: Vec<usize> = (0..=k).filter(|&c| c != i).collect();
            let minor = det(top_rows, &cols)?;
            Ok(if (k + i) % 2 == 1 { minor.neg() } else { minor })
        })
        .collect()
}

/// Determinant of the square submatrix on all rows and the given columns,
/// by expansion along the first remaining row.
fn det(rows: &[Vec<HomogeneousPoly>], cols: &[usize]) -> Result<HomogeneousPoly, PolyError> {
    let top = &rows[0];
    if rows.len() == 1 {
        return Ok(top[cols[0]].clone());
    }
    let degree: u32 = rows.iter().map(|r| r[0].degree()).sum();
    let mut acc = HomogeneousPoly::zero(top[0].num_vars(), degree, top[0].field());
    for (pos, &c) in cols.iter().enumerate() {
        if top[c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = top[c].multiply(&det(&rows[1..], &rest)?)?;
        acc = if pos % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}
