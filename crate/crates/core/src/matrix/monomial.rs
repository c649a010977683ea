use serde::{Deserialize, Serialize, Serializer};

use super::Matrix;
use crate::error::{Error, Result};
use crate::semiring::{SemifieldId, Value};

/// A permutation together with invertible scales: the invertible elements of
/// `M_n(S)` over an anti-negative semifield.
///
/// Column `i` holds its single non-zero entry `scale[i]` in row `perm[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialMatrix {
    semifield: SemifieldId,
    perm: Vec<usize>,
    scale: Vec<Value>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl MonomialMatrix {
    pub fn new(semifield: SemifieldId, perm: Vec<usize>, scale: Vec<Value>) -> Result<Self> {
        if perm.is_empty() || perm.len() != scale.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} with {} scales",
                perm.len(),
                scale.len()
            )));
        }
        if !is_permutation(&perm) {
            return Err(Error::Parse(format!("{perm:?} is not a permutation")));
        }
        if let Some(v) = scale.iter().find(|v| v.semifield() != semifield) {
            return Err(Error::MixedSemifields(semifield, v.semifield()));
        }
        if scale.iter().any(Value::is_zero) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(MonomialMatrix {
            semifield,
            perm,
            scale,
        })
    }

    pub fn identity(semifield: SemifieldId, n: usize) -> Self {
        MonomialMatrix::permutation(semifield, (0..n).collect()).unwrap()
    }

    /// The permutation matrix with `1_S` at `(perm[i], i)`.
    pub fn permutation(semifield: SemifieldId, perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        MonomialMatrix::new(semifield, perm, vec![semifield.one(); n])
    }

    pub fn diagonal(semifield: SemifieldId, scale: Vec<Value>) -> Result<Self> {
        MonomialMatrix::new(semifield, (0..scale.len()).collect(), scale)
    }

    pub fn semifield(&self) -> SemifieldId {
        self.semifield
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scale(&self) -> &[Value] {
        &self.scale
    }

    pub fn expand(&self) -> Matrix {
        let n = self.n();
        let mut m = Matrix::zero(self.semifield, n, n);
        for (i, (&r, s)) in self.perm.iter().zip(&self.scale).enumerate() {
            m.set(r, i, s.clone());
        }
        m
    }

    /// Recognises a monomial matrix: square, exactly one non-zero entry in
    /// every row and every column.
    pub fn try_from_matrix(a: &Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotMonomial);
        }
        let n = a.rows();
        let mut perm = Vec::with_capacity(n);
        let mut scale = Vec::with_capacity(n);
        for j in 0..n {
            let mut nonzero = (0..n).filter(|&i| !a.get(i, j).is_zero());
            match (nonzero.next(), nonzero.next()) {
                (Some(i), None) => {
                    perm.push(i);
                    scale.push(a.get(i, j).clone());
                }
                _ => return Err(Error::NotMonomial),
            }
        }
        // one per column plus n columns: rows are distinct iff perm is a bijection
        if !is_permutation(&perm) {
            return Err(Error::NotMonomial);
        }
        Ok(MonomialMatrix {
            semifield: a.semifield(),
            perm,
            scale,
        })
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut scale = vec![self.semifield.one(); n];
        for (i, (&r, s)) in self.perm.iter().zip(&self.scale).enumerate() {
            perm[r] = i;
            scale[r] = s.inv().expect("monomial scales are invertible");
        }
        MonomialMatrix {
            semifield: self.semifield,
            perm,
            scale,
        }
    }

    /// Row index of the non-zero entry in column `col`, and that entry.
    pub(crate) fn column_entry(&self, col: usize) -> (usize, &Value) {
        (self.perm[col], &self.scale[col])
    }

    pub(crate) fn row_entry(&self, row: usize) -> (usize, &Value) {
        let col = self.perm.iter().position(|&r| r == row).unwrap();
        (col, &self.scale[col])
    }

    pub fn to_json(&self) -> MonomialJson {
        MonomialJson {
            perm: self.perm.clone(),
            scale: self.scale.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_json(j: &MonomialJson, semifield: SemifieldId) -> Result<Self> {
        let scale = j
            .scale
            .iter()
            .map(|s| semifield.parse_value(s))
            .collect::<Result<Vec<_>>>()?;
        MonomialMatrix::new(semifield, j.perm.clone(), scale)
    }
}

/// Wire form `{"perm": [...], "scale": [...]}`; zero-based permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub perm: Vec<usize>,
    pub scale: Vec<String>,
}

impl Serialize for MonomialMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
