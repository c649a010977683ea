//! Principal solutions of `X·B ≤ A` in an idempotent semifield.
//!
//! The computation runs in the completion of the semifield by a top element
//! `⊤`, with `x ⊘ 0_S = ⊤`. A `⊤` coefficient only ever multiplies a zero row
//! of `B`, so it is projected to `1_S` before leaving this module.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::Value;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Completed {
    Top,
    Val(Value),
}

impl Completed {
    fn meet(self, other: Completed) -> Completed {
        match (self, other) {
            (Completed::Top, x) | (x, Completed::Top) => x,
            (Completed::Val(a), Completed::Val(b)) => {
                if a.natural_le(&b) {
                    Completed::Val(a)
                } else {
                    Completed::Val(b)
                }
            }
        }
    }
}

/// Greatest `s` with `s·y ≤ x`.
fn divide(x: &Value, y: &Value) -> Completed {
    if y.is_zero() {
        Completed::Top
    } else {
        Completed::Val(x.product(&y.inv().expect("non-zero")))
    }
}

/// The greatest `S` (entrywise) with `S·b ≤ a`, where `⊤` entries have been
/// replaced by `1_S`.
///
/// `S` is `a.rows() × b.rows()`; `S_{ik} = ⋀_j a_{ij} ⊘ b_{kj}`.
pub fn left_residual(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.semifield() != b.semifield() {
        return Err(Error::MixedSemifields(a.semifield(), b.semifield()));
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "left residual needs equal column counts, got {} and {}",
            a.cols(),
            b.cols()
        )));
    }
    let sf = a.semifield();
    let mut data = Vec::with_capacity(a.rows() * b.rows());
    for i in 0..a.rows() {
        let arow = a.row(i);
        for k in 0..b.rows() {
            let s = arow
                .iter()
                .zip(b.row(k))
                .fold(Completed::Top, |acc, (x, y)| acc.meet(divide(x, y)));
            data.push(match s {
                Completed::Top => sf.one(),
                Completed::Val(v) => v,
            });
        }
    }
    Matrix::new(sf, a.rows(), b.rows(), data)
}

/// The greatest `T` with `b·T ≤ a` (dual of [`left_residual`]).
pub fn right_residual(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right residual needs equal row counts, got {} and {}",
            a.rows(),
            b.rows()
        )));
    }
    Ok(left_residual(&a.transpose(), &b.transpose())?.transpose())
}

/// `Some(S)` with `a = S·b` when one exists.
pub fn solve_left(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    let s = left_residual(a, b)?;
    Ok((s.mul_unchecked(b) == *a).then_some(s))
}

/// `Some(T)` with `a = b·T` when one exists.
pub fn solve_right(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    let t = right_residual(a, b)?;
    Ok((b.mul_unchecked(&t) == *a).then_some(t))
}
