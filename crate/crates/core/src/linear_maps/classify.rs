//! Recognising the maps `X ↦ PXQ` and `X ↦ PXᵀQ` with `P`, `Q` monomial.

use serde::{Deserialize, Serialize};

use super::{check_argument, LinearMap, UnitPermutationMap};
use crate::error::{Error, Result};
use crate::green::rank_one_factors;
use crate::matrix::{Matrix, MonomialJson, MonomialMatrix};
use crate::semiring::SemifieldId;

/// `X ↦ PXQ`, or `X ↦ PXᵀQ` when `transposed`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalForm {
    pub p: MonomialMatrix,
    pub q: MonomialMatrix,
    pub transposed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalFormJson {
    pub p: MonomialJson,
    pub q: MonomialJson,
    pub transposed: bool,
}

impl CanonicalForm {
    pub fn new(p: MonomialMatrix, q: MonomialMatrix, transposed: bool) -> Result<Self> {
        if p.n() != q.n() {
            return Err(Error::DimensionMismatch(format!("P is {0}x{0}, Q is {1}x{1}", p.n(), q.n())));
        }
        if p.semifield() != q.semifield() {
            return Err(Error::MixedSemifields(p.semifield(), q.semifield()));
        }
        Ok(CanonicalForm { p, q, transposed })
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn semifield(&self) -> SemifieldId {
        self.p.semifield()
    }

    /// Dense evaluation, independent of the unit-permutation form.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        check_argument(self.n(), self.semifield(), x)?;
        let x = if self.transposed { x.transpose() } else { x.clone() };
        self.p.expand().mat_mul(&x)?.mat_mul(&self.q.expand())
    }

    pub fn from_json(j: &CanonicalFormJson, semifield: SemifieldId) -> Result<Self> {
        CanonicalForm::new(
            MonomialMatrix::from_json(&j.p, semifield)?,
            MonomialMatrix::from_json(&j.q, semifield)?,
            j.transposed,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NonCanonicalReason {
    NotUnitPermutation,
    RowColumnStructureViolated,
    CoefficientsNotRankOne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyOutcome {
    Canonical(CanonicalForm),
    NonCanonical(NonCanonicalReason),
}

impl ClassifyOutcome {
    pub fn canonical(&self) -> Option<&CanonicalForm> {
        match self {
            ClassifyOutcome::Canonical(c) => Some(c),
            ClassifyOutcome::NonCanonical(_) => None,
        }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self, ClassifyOutcome::Canonical(c) if !c.transposed)
    }

    pub fn is_transposed(&self) -> bool {
        matches!(self, ClassifyOutcome::Canonical(c) if c.transposed)
    }
}

/// `Some((f, g))` when `σ(i, j) = (f(a), g(b))` where `(a, b) = (i, j)`, or
/// `(j, i)` when `swapped`.
fn split_cells(u: &UnitPermutationMap, swapped: bool) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = u.n();
    let mut rows = vec![None; n];
    let mut cols = vec![None; n];
    for i in 0..n {
        for j in 0..n {
            let (r, c) = u.target(i, j);
            let (ri, ci) = if swapped { (j, i) } else { (i, j) };
            if *rows[ri].get_or_insert(r) != r || *cols[ci].get_or_insert(c) != c {
                return None;
            }
        }
    }
    // σ is a bijection of the cells, so both induced maps are permutations
    Some((rows.into_iter().map(Option::unwrap).collect(), cols.into_iter().map(Option::unwrap).collect()))
}

/// Decides whether `u` has one of the two canonical shapes and, if so,
/// recovers `P` and `Q`.
///
/// The coefficients are split as `α_{ij} = x_i·y_j` with `x_0 = 1_S`,
/// `y_j = α_{0j}` and `x_i = α_{i0}·α_{00}⁻¹`, so that
/// `synthesize(classify(u)) == u` exactly.
pub fn classify(u: &UnitPermutationMap) -> ClassifyOutcome {
    let n = u.n();
    let sf = u.semifield();
    let (transposed, (row_perm, col_perm)) = match split_cells(u, false) {
        Some(s) => (false, s),
        None => match split_cells(u, true) {
            // rows of the image are indexed by j, columns by i
            Some((by_j, by_i)) => (true, (by_i, by_j)),
            None => return ClassifyOutcome::NonCanonical(NonCanonicalReason::RowColumnStructureViolated),
        },
    };
    // row_perm = σ̌ (acts on i), col_perm = σ̂ (acts on j)
    let coefficients = Matrix::new(sf, n, n, u.alpha().to_vec()).expect("n×n coefficients");
    let Some((x, y)) = rank_one_factors(&coefficients) else {
        return ClassifyOutcome::NonCanonical(NonCanonicalReason::CoefficientsNotRankOne);
    };
    let mut q_perm = vec![0; n];
    let mut q_scale = vec![sf.one(); n];
    let (p, q) = if !transposed {
        // P_{σ̌(i), i} = x_i,  Q_{j, σ̂(j)} = y_j
        for j in 0..n {
            q_perm[col_perm[j]] = j;
            q_scale[col_perm[j]] = y[j].clone();
        }
        (MonomialMatrix::new(sf, row_perm, x), MonomialMatrix::new(sf, q_perm, q_scale))
    } else {
        // P_{σ̂(j), j} = y_j,  Q_{i, σ̌(i)} = x_i
        for i in 0..n {
            q_perm[row_perm[i]] = i;
            q_scale[row_perm[i]] = x[i].clone();
        }
        (MonomialMatrix::new(sf, col_perm, y), MonomialMatrix::new(sf, q_perm, q_scale))
    };
    ClassifyOutcome::Canonical(CanonicalForm {
        p: p.expect("valid monomial"),
        q: q.expect("valid monomial"),
        transposed,
    })
}

/// Classifies a dense map, reporting `NotUnitPermutation` when it is not
/// bijective.
pub fn classify_linear(t: &LinearMap) -> ClassifyOutcome {
    match t.extract_unit_form() {
        Ok(u) => classify(&u),
        Err(_) => ClassifyOutcome::NonCanonical(NonCanonicalReason::NotUnitPermutation),
    }
}

/// The unit-permutation form of a canonical map.
pub fn synthesize(c: &CanonicalForm, n: usize, semifield: SemifieldId) -> Result<UnitPermutationMap> {
    if c.n() != n {
        return Err(Error::DimensionMismatch(format!("canonical form of size {} for n = {n}", c.n())));
    }
    if c.semifield() != semifield {
        return Err(Error::MixedSemifields(semifield, c.semifield()));
    }
    let mut sigma = Vec::with_capacity(n * n);
    let mut alpha = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // P·E_{a,b}·Q = p_a·q_c·E_{π_P(a), c} where Q's row b lives in column c
            let (a, b) = if c.transposed { (j, i) } else { (i, j) };
            let (row, ps) = c.p.column_entry(a);
            let (col, qs) = c.q.row_entry(b);
            sigma.push(row * n + col);
            alpha.push(ps.product(qs));
        }
    }
    UnitPermutationMap::new(n, semifield, sigma, alpha)
}
