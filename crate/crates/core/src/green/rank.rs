//! Factor rank: the least `k` with `A = B·C`, `B` of width `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankMethod {
    ZeroMatrix,
    RankOneWitness,
    TwoByTwoCriterion,
    ExhaustiveBoolean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub value: usize,
    pub method: RankMethod,
}

/// Splits a rank-one matrix as `a = u·vᵀ`.
///
/// The support must be a full rectangle `R × C` and, for the reference cell
/// `(r₀, c₀)`, every `a_{ij}·a_{r₀c₀} = a_{ic₀}·a_{r₀j}` on it. Then
/// `u_i = a_{ic₀}·a_{r₀c₀}⁻¹` and `v_j = a_{r₀j}`. `None` for the zero matrix
/// and for anything of rank two or more.
pub fn rank_one_factors(a: &Matrix) -> Option<(Vec<Value>, Vec<Value>)> {
    let sf = a.semifield();
    let rows: Vec<usize> = (0..a.rows()).filter(|&i| a.row(i).iter().any(|v| !v.is_zero())).collect();
    let cols: Vec<usize> = (0..a.cols())
        .filter(|&j| (0..a.rows()).any(|i| !a.get(i, j).is_zero()))
        .collect();
    let (&r0, &c0) = (rows.first()?, cols.first()?);
    if rows.len() * cols.len() != a.nonzero_count() {
        return None;
    }
    let pivot = a.get(r0, c0);
    for &i in &rows {
        for &j in &cols {
            if a.get(i, j).product(pivot) != a.get(i, c0).product(a.get(r0, j)) {
                return None;
            }
        }
    }
    let pivot_inv = pivot.inv().expect("support entry");
    let u = (0..a.rows())
        .map(|i| if rows.contains(&i) { a.get(i, c0).product(&pivot_inv) } else { sf.zero() })
        .collect();
    let v = a.row(r0).to_vec();
    Some((u, v))
}

/// The single `2 × 2` block of a matrix with exactly four non-zero entries
/// arranged in two rows and two columns.
fn two_by_two_block(a: &Matrix) -> Option<[&Value; 4]> {
    if a.nonzero_count() != 4 {
        return None;
    }
    let rows: Vec<usize> = (0..a.rows()).filter(|&i| a.row(i).iter().any(|v| !v.is_zero())).collect();
    let cols: Vec<usize> = (0..a.cols())
        .filter(|&j| (0..a.rows()).any(|i| !a.get(i, j).is_zero()))
        .collect();
    match (rows.as_slice(), cols.as_slice()) {
        (&[i, k], &[j, l]) => Some([a.get(i, j), a.get(i, l), a.get(k, j), a.get(k, l)]),
        _ => None,
    }
}

pub fn factor_rank(a: &Matrix) -> Result<RankResult> {
    if a.is_zero() {
        return Ok(RankResult {
            value: 0,
            method: RankMethod::ZeroMatrix,
        });
    }
    if rank_one_factors(a).is_some() {
        return Ok(RankResult {
            value: 1,
            method: RankMethod::RankOneWitness,
        });
    }
    if let Some([p, q, r, s]) = two_by_two_block(a) {
        // rank one was excluded above, so ad ≠ bc here
        debug_assert!(p.product(s) != q.product(r));
        return Ok(RankResult {
            value: 2,
            method: RankMethod::TwoByTwoCriterion,
        });
    }
    if a.semifield().is_boolean() {
        if let Some(k) = boolean_rank(a) {
            return Ok(RankResult {
                value: k,
                method: RankMethod::ExhaustiveBoolean,
            });
        }
    }
    Err(Error::RankUndetermined(a.semifield()))
}

/// Least number of all-ones rectangles covering the ones of `a`; `None` when
/// the matrix is too large for the bitmask search.
fn boolean_rank(a: &Matrix) -> Option<usize> {
    if a.rows() > a.cols() {
        return boolean_rank(&a.transpose());
    }
    let (rows, cols) = (a.rows(), a.cols());
    if rows * cols > 64 || rows > 12 {
        return None;
    }
    let cell = |i: usize, j: usize| 1u64 << (i * cols + j);
    let ones: u64 = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .fold(0, |m, (i, j)| m | cell(i, j));
    if ones == 0 {
        return Some(0);
    }
    // Every rectangle in a cover can be grown to a maximal one, and a maximal
    // rectangle is determined by its row set (columns = common support).
    let row_support: Vec<u64> = (0..rows)
        .map(|i| (0..cols).filter(|&j| !a.get(i, j).is_zero()).fold(0, |m, j| m | 1 << j))
        .collect();
    let mut rects: Vec<u64> = Vec::new();
    for rset in 1u32..1 << rows {
        let common = (0..rows)
            .filter(|i| rset >> i & 1 == 1)
            .fold(u64::MAX, |c, i| c & row_support[i]);
        if common == 0 {
            continue;
        }
        // close the row set: all rows containing the common columns
        let full_rows = (0..rows).filter(|&i| row_support[i] & common == common);
        let mask = full_rows
            .flat_map(|i| (0..cols).filter(move |j| common >> j & 1 == 1).map(move |j| (i, j)))
            .fold(0, |m, (i, j)| m | cell(i, j));
        rects.push(mask);
    }
    rects.sort_unstable();
    rects.dedup();

    fn cover(uncovered: u64, rects: &[u64], depth: usize) -> bool {
        if uncovered == 0 {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let first = uncovered & uncovered.wrapping_neg();
        rects
            .iter()
            .filter(|&&r| r & first != 0)
            .any(|&r| cover(uncovered & !r, rects, depth - 1))
    }

    (1..=rows.min(cols)).find(|&k| cover(ones, &rects, k))
}
