//! Linear transformations of `M_n(S)`.
//!
//! A linear map is determined by the images of the matrix units `E_{i,j}`.
//! Over an anti-negative semifield a linear map is bijective exactly when it
//! sends every unit to a non-zero multiple of a unit, through a permutation of
//! the cells: that shape is [`UnitPermutationMap`], the representation every
//! search and classification here works with. Dense [`LinearMap`]s are only
//! an ingestion format.
//!
//! Cells `(i, j)` are numbered `i·n + j`, zero-based.

mod classify;
mod preserve;
mod sticky;

use serde::{Deserialize, Serialize};

pub use classify::{classify, classify_linear, synthesize, CanonicalForm, CanonicalFormJson, ClassifyOutcome, NonCanonicalReason};
pub use preserve::{
    check_exchange, check_preservation, check_strong_exchange, check_strong_preservation, check_strong_transfer,
    check_transfer,
    relation_table, Counterexample, Mode, RelationTable, Rule, Verdict,
};
pub use sticky::{find_sticky, square_root_witness, sticky_pair, Refutation, StickyMode, StickyOutcome, StickyReport};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semiring::{SemifieldId, Value};

/// A linear map given by the image of every matrix unit, row-major over `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LinearMapJson", into = "LinearMapJson")]
pub struct LinearMap {
    n: usize,
    semifield: SemifieldId,
    images: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearMapJson {
    n: usize,
    semifield: SemifieldId,
    images: Vec<Matrix>,
}

impl TryFrom<LinearMapJson> for LinearMap {
    type Error = Error;

    fn try_from(j: LinearMapJson) -> Result<Self> {
        LinearMap::new(j.n, j.semifield, j.images)
    }
}

impl From<LinearMap> for LinearMapJson {
    fn from(t: LinearMap) -> Self {
        LinearMapJson {
            n: t.n,
            semifield: t.semifield,
            images: t.images,
        }
    }
}

impl LinearMap {
    pub fn new(n: usize, semifield: SemifieldId, images: Vec<Matrix>) -> Result<Self> {
        if n == 0 || images.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} images for n = {n}",
                images.len()
            )));
        }
        for m in &images {
            if m.semifield() != semifield {
                return Err(Error::MixedSemifields(semifield, m.semifield()));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "image of size {}x{} for n = {n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(LinearMap { n, semifield, images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn semifield(&self) -> SemifieldId {
        self.semifield
    }

    /// `T(E_{i,j})`.
    pub fn image(&self, i: usize, j: usize) -> &Matrix {
        &self.images[i * self.n + j]
    }

    /// `T(X) = Σ x_{ij}·T(E_{i,j})`.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        check_argument(self.n, self.semifield, x)?;
        let mut out = Matrix::zero(self.semifield, self.n, self.n);
        for (c, v) in x.entries().iter().enumerate() {
            if !v.is_zero() {
                out = out.add(&self.images[c].scale(v)?)?;
            }
        }
        Ok(out)
    }

    /// Recovers the unit-permutation form, which exists iff the map is
    /// bijective.
    pub fn extract_unit_form(&self) -> Result<UnitPermutationMap> {
        let n = self.n;
        let mut sigma = Vec::with_capacity(n * n);
        let mut alpha = Vec::with_capacity(n * n);
        for (c, img) in self.images.iter().enumerate() {
            let mut nz = img.entries().iter().enumerate().filter(|(_, v)| !v.is_zero());
            match (nz.next(), nz.next()) {
                (Some((target, v)), None) => {
                    sigma.push(target);
                    alpha.push(v.clone());
                }
                (None, _) => {
                    return Err(Error::NotBijective(format!("cell {c} is sent to zero")));
                }
                _ => {
                    return Err(Error::NotBijective(format!(
                        "image of cell {c} is not a multiple of a single unit"
                    )))
                }
            }
        }
        UnitPermutationMap::new(n, self.semifield, sigma, alpha)
            .map_err(|_| Error::NotBijective("two cells share an image cell".into()))
    }
}

fn check_argument(n: usize, semifield: SemifieldId, x: &Matrix) -> Result<()> {
    if x.semifield() != semifield {
        return Err(Error::MixedSemifields(semifield, x.semifield()));
    }
    if x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "argument is {}x{}, map acts on {n}x{n}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// `T(E_c) = alpha[c]·E_{sigma[c]}` for a permutation `sigma` of the `n²`
/// cells and non-zero coefficients `alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitPermutationMap {
    n: usize,
    semifield: SemifieldId,
    sigma: Vec<usize>,
    alpha: Vec<Value>,
}

impl UnitPermutationMap {
    pub fn new(n: usize, semifield: SemifieldId, sigma: Vec<usize>, alpha: Vec<Value>) -> Result<Self> {
        let cells = n * n;
        if n == 0 || sigma.len() != cells || alpha.len() != cells {
            return Err(Error::DimensionMismatch(format!(
                "need {cells} cells, got sigma of length {} and alpha of length {}",
                sigma.len(),
                alpha.len()
            )));
        }
        let mut seen = vec![false; cells];
        for &s in &sigma {
            if s >= cells || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Parse(format!("{sigma:?} is not a permutation of the cells")));
            }
        }
        if let Some(v) = alpha.iter().find(|v| v.semifield() != semifield) {
            return Err(Error::MixedSemifields(semifield, v.semifield()));
        }
        if alpha.iter().any(Value::is_zero) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(UnitPermutationMap {
            n,
            semifield,
            sigma,
            alpha,
        })
    }

    /// Cell permutation with all coefficients `1_S`.
    pub fn from_cell_permutation(n: usize, semifield: SemifieldId, sigma: Vec<usize>) -> Result<Self> {
        let alpha = vec![semifield.one(); sigma.len()];
        UnitPermutationMap::new(n, semifield, sigma, alpha)
    }

    pub fn identity(semifield: SemifieldId, n: usize) -> Self {
        UnitPermutationMap::from_cell_permutation(n, semifield, (0..n * n).collect()).unwrap()
    }

    /// `X ↦ Xᵀ`.
    pub fn transposition(semifield: SemifieldId, n: usize) -> Self {
        let sigma = (0..n * n).map(|c| (c % n) * n + c / n).collect();
        UnitPermutationMap::from_cell_permutation(n, semifield, sigma).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn semifield(&self) -> SemifieldId {
        self.semifield
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[Value] {
        &self.alpha
    }

    /// `σ(i, j)` as a `(row, col)` pair.
    pub fn target(&self, i: usize, j: usize) -> (usize, usize) {
        let t = self.sigma[i * self.n + j];
        (t / self.n, t % self.n)
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &Value {
        &self.alpha[i * self.n + j]
    }

    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        check_argument(self.n, self.semifield, x)?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &Matrix) -> Matrix {
        let mut data = vec![self.semifield.zero(); self.n * self.n];
        for (c, v) in x.entries().iter().enumerate() {
            data[self.sigma[c]] = self.alpha[c].product(v);
        }
        Matrix::new(self.semifield, self.n, self.n, data).expect("shape preserved")
    }

    /// Image of the boolean matrix with index `idx` (see
    /// [`Matrix::boolean_from_index`]); only meaningful over `𝔹`.
    pub(crate) fn apply_index(&self, idx: u32) -> u32 {
        debug_assert!(self.semifield.is_boolean());
        self.sigma
            .iter()
            .enumerate()
            .filter(|(c, _)| idx >> c & 1 == 1)
            .fold(0, |acc, (_, &t)| acc | 1 << t)
    }

    pub fn inverse(&self) -> UnitPermutationMap {
        let cells = self.sigma.len();
        let mut sigma = vec![0; cells];
        let mut alpha = vec![self.semifield.one(); cells];
        for (c, (&t, a)) in self.sigma.iter().zip(&self.alpha).enumerate() {
            sigma[t] = c;
            alpha[t] = a.inv().expect("coefficients are non-zero");
        }
        UnitPermutationMap {
            n: self.n,
            semifield: self.semifield,
            sigma,
            alpha,
        }
    }

    pub fn to_linear_map(&self) -> LinearMap {
        let n = self.n;
        let images = (0..n * n)
            .map(|c| {
                let t = self.sigma[c];
                Matrix::unit(n, t / n, t % n, self.alpha[c].clone()).expect("non-zero coefficient")
            })
            .collect();
        LinearMap {
            n,
            semifield: self.semifield,
            images,
        }
    }

    /// All `(n²)!` cell permutations over `𝔹`, in lexicographic order of `σ`.
    pub fn all_boolean(n: usize) -> impl Iterator<Item = UnitPermutationMap> {
        Permutations::new(n * n).map(move |sigma| {
            UnitPermutationMap {
                n,
                semifield: SemifieldId::Boolean,
                alpha: vec![Value::Boolean(true); sigma.len()],
                sigma,
            }
        })
    }
}

impl Serialize for UnitPermutationMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let alpha: Vec<String> = self.alpha.iter().map(ToString::to_string).collect();
        let mut st = s.serialize_struct("UnitPermutationMap", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("semifield", &self.semifield)?;
        st.serialize_field("sigma", &self.sigma)?;
        st.serialize_field("alpha", &alpha)?;
        st.end()
    }
}

/// Lexicographic permutations of `0..len`.
pub(crate) struct Permutations {
    next: Option<Vec<usize>>,
}

impl Permutations {
    pub(crate) fn new(len: usize) -> Self {
        Permutations {
            next: Some((0..len).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut p = current.clone();
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            self.next = Some(p);
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: SemifieldId = SemifieldId::Boolean;
    const TQ: SemifieldId = SemifieldId::TropicalRational;

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i, j, B.one()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = Matrix::parse(TQ, &[&["1", "-inf"], &["2/3", "5"]]).unwrap();
        let id = UnitPermutationMap::identity(TQ, 2);
        assert_eq!(id.apply(&x).unwrap(), x);
        assert_eq!(id.to_linear_map().apply(&x).unwrap(), x);

        // swap E11 <-> E12
        let swap = UnitPermutationMap::from_cell_permutation(2, B, vec![1, 0, 2, 3]).unwrap();
        assert_eq!(swap.apply(&e(2, 0, 0)).unwrap(), e(2, 0, 1));
        assert_eq!(swap.to_linear_map().apply(&e(2, 0, 0)).unwrap(), e(2, 0, 1));

        let two = Matrix::unit(1, 0, 0, Value::tropical(2, 1)).unwrap();
        let t = LinearMap::new(1, TQ, vec![two]).unwrap();
        let five = Matrix::parse(TQ, &[&["5"]]).unwrap();
        assert_eq!(t.apply(&five).unwrap(), Matrix::parse(TQ, &[&["7"]]).unwrap());

        assert!(matches!(id.apply(&Matrix::zero(TQ, 3, 3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn transposition_map() {
        let t = UnitPermutationMap::transposition(TQ, 3);
        let x = Matrix::parse(TQ, &[&["1", "2", "3"], &["4", "5", "6"], &["7", "8", "-inf"]]).unwrap();
        assert_eq!(t.apply(&x).unwrap(), x.transpose());
    }

    #[test]
    fn extraction() {
        let id = UnitPermutationMap::identity(B, 2);
        assert_eq!(id.to_linear_map().extract_unit_form().unwrap(), id);

        let mut images: Vec<Matrix> = (0..4).map(|c| e(2, c / 2, c % 2)).collect();
        images[0] = e(2, 0, 0).add(&e(2, 0, 1)).unwrap();
        let t = LinearMap::new(2, B, images).unwrap();
        assert!(matches!(t.extract_unit_form(), Err(Error::NotBijective(_))));

        let mut images: Vec<Matrix> = (0..4).map(|c| e(2, c / 2, c % 2)).collect();
        images[0] = e(2, 1, 1);
        images[1] = e(2, 1, 1);
        let t = LinearMap::new(2, B, images).unwrap();
        assert!(matches!(t.extract_unit_form(), Err(Error::NotBijective(_))));
        // and indeed not surjective: E11 is never hit
        let hit: std::collections::HashSet<Matrix> =
            Matrix::all_boolean(2).map(|x| t.apply(&x).unwrap()).collect();
        assert!(hit.len() < 16);
        assert!(!hit.contains(&e(2, 0, 0)));
    }

    #[test]
    fn inverse_undoes_map() {
        let u = UnitPermutationMap::new(
            2,
            TQ,
            vec![3, 1, 0, 2],
            vec![Value::tropical(1, 2), Value::tropical(-3, 1), TQ.one(), Value::tropical(7, 5)],
        )
        .unwrap();
        let x = Matrix::parse(TQ, &[&["1", "-inf"], &["2/3", "5"]]).unwrap();
        assert_eq!(u.inverse().apply(&u.apply(&x).unwrap()).unwrap(), x);
        assert_eq!(u.inverse().inverse(), u);
    }

    #[test]
    fn enumerates_all_cell_permutations() {
        let maps: Vec<_> = UnitPermutationMap::all_boolean(2).collect();
        assert_eq!(maps.len(), 24);
        assert_eq!(maps[0], UnitPermutationMap::identity(B, 2));
        let distinct: std::collections::HashSet<_> = maps.iter().map(|m| m.sigma().to_vec()).collect();
        assert_eq!(distinct.len(), 24);
        assert_eq!(Permutations::new(1).count(), 1);
        for m in &maps {
            for idx in 0..16 {
                let x = Matrix::boolean_from_index(2, idx);
                assert_eq!(m.apply(&x).unwrap().boolean_index().unwrap(), m.apply_index(idx));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = UnitPermutationMap::transposition(TQ, 2).to_linear_map();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with(r#"{"n":2,"semifield":"tropical","images":[{"semifield":"tropical""#));
        assert_eq!(serde_json::from_str::<LinearMap>(&s).unwrap(), t);
        let bad = r#"{"n":2,"semifield":"tropical","images":[]}"#;
        assert!(serde_json::from_str::<LinearMap>(bad).is_err());
    }
}
