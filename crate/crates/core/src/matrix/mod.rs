//! Dense matrices over a fixed semifield.

mod monomial;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use monomial::{MonomialJson, MonomialMatrix};

use crate::error::{Error, Result};
use crate::semiring::{SemifieldId, Value};

/// A dense `rows × cols` matrix, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    semifield: SemifieldId,
    rows: usize,
    cols: usize,
    data: Vec<Value>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, checking shape and semifield.
    pub fn new(semifield: SemifieldId, rows: usize, cols: usize, data: Vec<Value>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| v.semifield() != semifield) {
            return Err(Error::MixedSemifields(semifield, v.semifield()));
        }
        Ok(Matrix {
            semifield,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(semifield: SemifieldId, rows: Vec<Vec<Value>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(semifield, r, c, rows.into_iter().flatten().collect())
    }

    /// Parses rows of canonical text forms, e.g. `[["0", "-inf"], ["1/2", "3"]]`.
    pub fn parse(semifield: SemifieldId, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|s| semifield.parse_value(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(semifield, rows)
    }

    pub fn zero(semifield: SemifieldId, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Matrix {
            semifield,
            rows,
            cols,
            data: vec![semifield.zero(); rows * cols],
        }
    }

    pub fn identity(semifield: SemifieldId, n: usize) -> Self {
        let mut m = Matrix::zero(semifield, n, n);
        for i in 0..n {
            m.data[i * n + i] = semifield.one();
        }
        m
    }

    /// The matrix unit with `c` at `(i, j)` (zero-based) and `0_S` elsewhere.
    pub fn unit(n: usize, i: usize, j: usize, c: Value) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { n, row: i, col: j });
        }
        if c.is_zero() {
            return Err(Error::ZeroCoefficient);
        }
        let mut m = Matrix::zero(c.semifield(), n, n);
        m.data[i * n + j] = c;
        Ok(m)
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(semifield: SemifieldId, diag: Vec<Value>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty diagonal".into()));
        }
        let mut m = Matrix::zero(semifield, n, n);
        for (i, v) in diag.into_iter().enumerate() {
            if v.semifield() != semifield {
                return Err(Error::MixedSemifields(semifield, v.semifield()));
            }
            m.data[i * n + i] = v;
        }
        Ok(m)
    }

    pub fn semifield(&self) -> SemifieldId {
        self.semifield
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Value {
        assert!(i < self.rows && j < self.cols, "({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Value) {
        debug_assert_eq!(v.semifield(), self.semifield);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Value] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Value] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Value::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    fn same_semifield(&self, other: &Matrix) -> Result<()> {
        if self.semifield == other.semifield {
            Ok(())
        } else {
            Err(Error::MixedSemifields(self.semifield, other.semifield))
        }
    }

    /// `(ab)_{ik} = Σ_j a_{ij}·b_{jk}` in semifield arithmetic.
    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_semifield(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let zero = self.semifield.zero();
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for k in 0..other.cols {
                let mut acc = zero.clone();
                for (j, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other.data[j * other.cols + k];
                    if !b.is_zero() {
                        acc = acc.sum(&a.product(b));
                    }
                }
                data.push(acc);
            }
        }
        Matrix {
            semifield: self.semifield,
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix {
            semifield: self.semifield,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Entrywise semifield sum.
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_semifield(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("entrywise sum of different shapes".into()));
        }
        Ok(Matrix {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sum(b)).collect(),
            ..self.clone()
        })
    }

    /// `c·A`.
    pub fn scale(&self, c: &Value) -> Result<Matrix> {
        if c.semifield() != self.semifield {
            return Err(Error::MixedSemifields(self.semifield, c.semifield()));
        }
        Ok(Matrix {
            data: self.data.iter().map(|a| c.product(a)).collect(),
            ..self.clone()
        })
    }

    /// Entrywise natural order `self ≤ other`.
    pub fn natural_le(&self, other: &Matrix) -> bool {
        self.semifield == other.semifield
            && self.data.len() == other.data.len()
            && self.data.iter().zip(&other.data).all(|(a, b)| a.natural_le(b))
    }

    /// Decodes a boolean `n × n` matrix from a bitmask (bit `i·n + j` is entry `(i, j)`).
    pub fn boolean_from_index(n: usize, index: u32) -> Matrix {
        assert!(n * n <= 32);
        let data = (0..n * n).map(|c| Value::Boolean(index >> c & 1 == 1)).collect();
        Matrix {
            semifield: SemifieldId::Boolean,
            rows: n,
            cols: n,
            data,
        }
    }

    /// Inverse of [`Matrix::boolean_from_index`]; `None` off the boolean semifield.
    pub fn boolean_index(&self) -> Option<u32> {
        if !self.semifield.is_boolean() || self.data.len() > 32 {
            return None;
        }
        Some(
            self.data
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .fold(0, |acc, (c, _)| acc | 1 << c),
        )
    }

    /// All `2^(n²)` boolean `n × n` matrices in index order.
    pub fn all_boolean(n: usize) -> impl Iterator<Item = Matrix> {
        (0..1u32 << (n * n)).map(move |i| Matrix::boolean_from_index(n, i))
    }

    /// Row-major canonical text forms.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_text_rows();
        f.write_str("[")?;
        for (i, row) in rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.semifield, self)
    }
}

/// Wire form: `{"semifield", "rows", "cols", "entries": [[text, ...], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    semifield: SemifieldId,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(Error::Parse(format!(
                "entries do not form a {}x{} array",
                j.rows, j.cols
            )));
        }
        let data = j
            .entries
            .iter()
            .flatten()
            .map(|s| j.semifield.parse_value(s))
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(j.semifield, j.rows, j.cols, data)
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            semifield: m.semifield,
            rows: m.rows,
            cols: m.cols,
            entries: m.to_text_rows(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const B: SemifieldId = SemifieldId::Boolean;
    const TQ: SemifieldId = SemifieldId::TropicalRational;

    fn bm(rows: &[&[u8]]) -> Matrix {
        Matrix::from_rows(
            B,
            rows.iter().map(|r| r.iter().map(|&x| Value::Boolean(x == 1)).collect()).collect(),
        )
        .unwrap()
    }

    /// Textbook triple loop, independent of `mul_unchecked`'s zero skipping.
    fn naive_mul(a: &Matrix, b: &Matrix) -> Matrix {
        let mut rows = Vec::new();
        for i in 0..a.rows() {
            let mut row = Vec::new();
            for k in 0..b.cols() {
                let mut acc = a.semifield().zero();
                for j in 0..a.cols() {
                    acc = acc.add(&a.get(i, j).mul(b.get(j, k)).unwrap()).unwrap();
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Matrix::from_rows(a.semifield(), rows).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let a = Matrix::parse(TQ, &[&["1/2", "-inf"], &["3", "-2"]]).unwrap();
        assert_eq!(Matrix::identity(TQ, 2).mat_mul(&a).unwrap(), a);
        assert_eq!(
            bm(&[&[1, 1], &[0, 1]]).mat_mul(&bm(&[&[1, 0], &[1, 1]])).unwrap(),
            bm(&[&[1, 1], &[1, 1]])
        );
        assert_eq!(naive_mul(&bm(&[&[1, 1], &[0, 1]]), &bm(&[&[1, 0], &[1, 1]])), bm(&[&[1, 1], &[1, 1]]));
        assert!(Matrix::zero(TQ, 2, 2).mat_mul(&a).unwrap().is_zero());
        let b3 = Matrix::zero(TQ, 3, 3);
        assert!(matches!(a.mat_mul(&b3), Err(Error::DimensionMismatch(_))));
        assert!(matches!(bm(&[&[1]]).mat_mul(&Matrix::zero(TQ, 1, 1)), Err(Error::MixedSemifields(..))));
    }

    #[test]
    fn units() {
        assert_eq!(Matrix::unit(2, 0, 0, B.one()).unwrap(), bm(&[&[1, 0], &[0, 0]]));
        assert_eq!(
            Matrix::unit(2, 0, 1, Value::tropical(3, 1)).unwrap(),
            Matrix::parse(TQ, &[&["-inf", "3"], &["-inf", "-inf"]]).unwrap()
        );
        assert_eq!(
            Matrix::unit(2, 2, 0, B.one()),
            Err(Error::IndexOutOfRange { n: 2, row: 2, col: 0 })
        );
        assert_eq!(Matrix::unit(2, 0, 0, TQ.zero()), Err(Error::ZeroCoefficient));
    }

    #[test]
    fn transposes() {
        let d = Matrix::diagonal(TQ, vec![Value::tropical(3, 1), Value::tropical(-1, 1)]).unwrap();
        assert_eq!(d.transpose(), d);
        let e12 = Matrix::unit(3, 0, 1, B.one()).unwrap();
        assert_eq!(e12.transpose(), Matrix::unit(3, 1, 0, B.one()).unwrap());
        let r = Matrix::parse(TQ, &[&["1", "2", "3"]]).unwrap();
        assert_eq!((r.transpose().rows(), r.transpose().cols()), (3, 1));
        assert_eq!(r.transpose().transpose(), r);
    }

    #[test]
    fn boolean_indexing() {
        for m in Matrix::all_boolean(2) {
            assert_eq!(Matrix::boolean_from_index(2, m.boolean_index().unwrap()), m);
        }
        assert_eq!(Matrix::boolean_from_index(2, 0b0010), Matrix::unit(2, 0, 1, B.one()).unwrap());
    }

    #[test]
    fn json_format() {
        let m = Matrix::parse(TQ, &[&["1/2", "-inf"], &["3", "-2"]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"semifield":"tropical","rows":2,"cols":2,"entries":[["1/2","-inf"],["3","-2"]]}"#
        );
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), m);
        for bad in [
            r#"{"semifield":"tropical","rows":2,"cols":2,"entries":[["1/2","-inf"],["3"]]}"#,
            r#"{"semifield":"tropical","rows":1,"cols":1,"entries":[["2/4"]]}"#,
            r#"{"semifield":"tropical","rows":1,"cols":1,"entries":[[3]]}"#,
            r#"{"semifield":"boolean","rows":1,"cols":1,"entries":[["2"]]}"#,
            r#"{"semifield":"tropical_int","rows":1,"cols":1,"entries":[["1/2"]]}"#,
            r#"{"semifield":"max","rows":1,"cols":1,"entries":[["1"]]}"#,
            r#"{"semifield":"boolean","rows":0,"cols":0,"entries":[]}"#,
            r#"{"semifield":"boolean","rows":1,"cols":1,"entries":[["1"]],"extra":1}"#,
        ] {
            assert!(serde_json::from_str::<Matrix>(bad).is_err(), "{bad}");
        }
    }

    fn arb_tropical(n: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(
            prop_oneof![1 => Just(TQ.zero()), 4 => (-50i64..50, 1i64..5).prop_map(|(p, q)| Value::tropical(p, q))],
            n * n,
        )
        .prop_map(move |d| Matrix::new(TQ, n, n, d).unwrap())
    }

    proptest! {
        #[test]
        fn product_laws((a, b, c) in (1usize..4).prop_flat_map(|n| (arb_tropical(n), arb_tropical(n), arb_tropical(n)))) {
            let ab = a.mat_mul(&b)?;
            prop_assert_eq!(&ab, &naive_mul(&a, &b));
            prop_assert_eq!(ab.mat_mul(&c)?, a.mat_mul(&b.mat_mul(&c)?)?);
            let id = Matrix::identity(TQ, a.rows());
            prop_assert_eq!(&id.mat_mul(&a)?, &a);
            prop_assert_eq!(&a.mat_mul(&id)?, &a);
            prop_assert_eq!(ab.transpose(), b.transpose().mat_mul(&a.transpose())?);
            let text = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<Matrix>(&text).unwrap(), a);
        }
    }
}
