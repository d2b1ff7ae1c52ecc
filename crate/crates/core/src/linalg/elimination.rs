//! Row-reduction kernels on raw integer and residue arrays.
//!
//! All routines pick the first nonzero entry of a column (scanning rows top to
//! bottom) as pivot, so results are fully deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::scalar::{inv_mod, mul_mod, sub_mod};

#[inline]
fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    debug_assert!(r.is_zero(), "fraction-free step was not exact");
    q
}

/// Rank of an integer matrix by Bareiss forward elimination.
pub(crate) fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                // (pivot * a_ij - 0) / prev
                for j in c + 1..cols {
                    if !row[j].is_zero() {
                        let v = std::mem::take(&mut row[j]) * pivot;
                        row[j] = exact_div(v, &prev);
                    }
                }
                continue;
            }
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &row[j] * pivot - &factor * &pivot_row[j];
                row[j] = exact_div(v, &prev);
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Fraction-free Gauss-Jordan elimination.
///
/// On return every pivot row `i` has the common value `det` at column
/// `pivots[i]` and zeros in all other pivot columns.
pub(crate) struct FractionFreeEchelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub det: BigInt,
}

pub(crate) fn fraction_free_rref(mut a: Vec<Vec<BigInt>>, cols: usize) -> FractionFreeEchelon {
    let rows = a.len();
    let mut prev = BigInt::from(1);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot_row = a[r].clone();
        let pivot = &pivot_row[c];
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = std::mem::take(&mut row[c]);
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let v = if factor.is_zero() {
                    if row[j].is_zero() {
                        continue;
                    }
                    std::mem::take(&mut row[j]) * pivot
                } else {
                    &row[j] * pivot - &factor * &pivot_row[j]
                };
                row[j] = exact_div(v, &prev);
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    FractionFreeEchelon { rows: a, pivots, det: prev }
}

/// Reduced row echelon form over `F_p` with unit pivots. Returns pivot columns;
/// `a` is truncated to the pivot rows.
pub(crate) fn modp_rref(a: &mut Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for j in c..cols {
                if pivot_row[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(factor, pivot_row[j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    pivots
}

/// Rank over `F_p` by forward elimination only.
pub(crate) fn modp_rank(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    let rows = a.len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c], p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let factor = mul_mod(row[c], inv, p);
            for j in c..cols {
                if pivot_row[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(factor, pivot_row[j], p), p);
                }
            }
        }
        r += 1;
    }
    r
}
