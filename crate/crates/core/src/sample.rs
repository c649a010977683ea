//! Seeded sampling of values, matrices, maps and related pairs.
//!
//! Every randomized check draws trial `t` from its own ChaCha8 stream
//! `(seed, t)`, so verdicts do not depend on how trials are split across
//! workers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::green::{relate, GreenRelation};
use crate::linear_maps::{synthesize, CanonicalForm, UnitPermutationMap};
use crate::matrix::{Matrix, MonomialMatrix};
use crate::semiring::{Rational, SemifieldId, Value};

/// Recorded in every randomized report.
pub const GENERATOR: &str = "ChaCha8Rng(seed_from_u64, stream = trial index)";

/// Numerators are drawn from `[-NUM_BOUND, NUM_BOUND]`.
pub const NUM_BOUND: i64 = 1_000_000;
/// Denominators are drawn from `[1, DEN_BOUND]`.
pub const DEN_BOUND: i64 = 1_000;

/// Probability that a matrix entry is `0_S` in random tropical matrices.
const ZERO_RATE: f64 = 0.2;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn nonzero_value(sf: SemifieldId, rng: &mut impl Rng) -> Value {
    match sf {
        SemifieldId::Boolean => Value::Boolean(true),
        SemifieldId::TropicalRational => {
            let p = rng.gen_range(-NUM_BOUND..=NUM_BOUND);
            let q = rng.gen_range(1..=DEN_BOUND);
            Value::from_rational(sf, Rational::new(p, q)).unwrap()
        }
        SemifieldId::TropicalInteger => Value::tropical_int(rng.gen_range(-NUM_BOUND..=NUM_BOUND)),
    }
}

pub fn value(sf: SemifieldId, rng: &mut impl Rng) -> Value {
    let zero_rate = if sf.is_boolean() { 0.5 } else { ZERO_RATE };
    if rng.gen_bool(zero_rate) {
        sf.zero()
    } else {
        nonzero_value(sf, rng)
    }
}

pub fn matrix(sf: SemifieldId, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let data = (0..rows * cols).map(|_| value(sf, rng)).collect();
    Matrix::new(sf, rows, cols, data).unwrap()
}

/// A matrix with every entry non-zero.
pub fn full_support_matrix(sf: SemifieldId, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let data = (0..rows * cols).map(|_| nonzero_value(sf, rng)).collect();
    Matrix::new(sf, rows, cols, data).unwrap()
}

pub fn permutation(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn monomial(sf: SemifieldId, n: usize, rng: &mut impl Rng) -> MonomialMatrix {
    let scale = (0..n).map(|_| nonzero_value(sf, rng)).collect();
    MonomialMatrix::new(sf, permutation(n, rng), scale).unwrap()
}

pub fn canonical_form(sf: SemifieldId, n: usize, transposed: bool, rng: &mut impl Rng) -> CanonicalForm {
    CanonicalForm::new(monomial(sf, n, rng), monomial(sf, n, rng), transposed).unwrap()
}

pub fn canonical_map(sf: SemifieldId, n: usize, transposed: bool, rng: &mut impl Rng) -> UnitPermutationMap {
    synthesize(&canonical_form(sf, n, transposed, rng), n, sf).unwrap()
}

/// Uniform cell permutation with random non-zero coefficients.
pub fn unit_map(sf: SemifieldId, n: usize, rng: &mut impl Rng) -> UnitPermutationMap {
    let alpha = (0..n * n).map(|_| nonzero_value(sf, rng)).collect();
    UnitPermutationMap::new(n, sf, permutation(n * n, rng), alpha).unwrap()
}

/// `S·G` where `S` contains, in distinct rows, a non-zero multiple of every
/// unit row `e_g`: its row space is exactly that of `G`.
fn same_row_space(g: &Matrix, n: usize, rng: &mut impl Rng) -> Matrix {
    let sf = g.semifield();
    let k = g.rows();
    let hosts = &permutation(n, rng)[..k];
    let mut s = matrix(sf, n, k, rng);
    for (gen, &row) in hosts.iter().enumerate() {
        for c in 0..k {
            let v = if c == gen { nonzero_value(sf, rng) } else { sf.zero() };
            s.set(row, c, v);
        }
    }
    s.mul_unchecked(g)
}

/// A pair of `L`-related matrices sharing a random row space.
fn l_pair(sf: SemifieldId, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    if rng.gen_bool(0.25) {
        let b = matrix(sf, n, n, rng);
        let m = monomial(sf, n, rng).expand();
        return (m.mul_unchecked(&b), b);
    }
    let k = rng.gen_range(1..=n);
    let g = matrix(sf, k, n, rng);
    (same_row_space(&g, n, rng), same_row_space(&g, n, rng))
}

const ATTEMPTS: usize = 32;

/// Two monomial blocks on the same `k` rows and `k` columns: both have the
/// same row space and the same column space.
fn block_monomial_pair(sf: SemifieldId, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let k = rng.gen_range(1..=n);
    let rows = permutation(n, rng)[..k].to_vec();
    let cols = permutation(n, rng)[..k].to_vec();
    let place = |rng: &mut _| {
        let m = monomial(sf, k, rng);
        let mut out = Matrix::zero(sf, n, n);
        for (c, &col) in cols.iter().enumerate() {
            let (r, v) = m.column_entry(c);
            out.set(rows[r], col, v.clone());
        }
        out
    };
    (place(rng), place(rng))
}

/// `k·E_lp + E_lq + E_mp + k·E_mq` and `E_lp + k·E_lq + k·E_mp + E_mq` on
/// two random rows and columns: the same rows and the same columns up to
/// order.
fn cross_pair(sf: SemifieldId, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let rows = permutation(n, rng);
    let cols = permutation(n, rng);
    let k = nonzero_value(sf, rng);
    let one = sf.one();
    let place = |diag: &Value, off: &Value| {
        let mut out = Matrix::zero(sf, n, n);
        for (i, &r) in rows[..2].iter().enumerate() {
            for (j, &c) in cols[..2].iter().enumerate() {
                out.set(r, c, if i == j { diag.clone() } else { off.clone() });
            }
        }
        out
    };
    (place(&k, &one), place(&one, &k))
}

/// `(M·U·N, M·V·N)` where `U` is constant on the orbits of a random pair of
/// permutations `(p, q)` acting on cells and `V` is `U` with its rows moved
/// by `p`, which is also `U` with its columns moved by `q⁻¹`.
fn orbit_pair(sf: SemifieldId, n: usize, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let p = permutation(n, rng);
    let q = permutation(n, rng);
    let mut u = Matrix::zero(sf, n, n);
    let mut seen = vec![false; n * n];
    for start in 0..n * n {
        if seen[start] {
            continue;
        }
        let v = value(sf, rng);
        let (mut i, mut j) = (start / n, start % n);
        while !seen[i * n + j] {
            seen[i * n + j] = true;
            u.set(i, j, v.clone());
            (i, j) = (p[i], q[j]);
        }
    }
    let mut v = Matrix::zero(sf, n, n);
    for (i, &pi) in p.iter().enumerate() {
        for j in 0..n {
            v.set(i, j, u.get(pi, j).clone());
        }
    }
    let m = monomial(sf, n, rng).expand();
    let k = monomial(sf, n, rng).expand();
    (m.mul_unchecked(&u).mul_unchecked(&k), m.mul_unchecked(&v).mul_unchecked(&k))
}

/// Draws `(a, b)` with `a rel b`, constructively where possible.
///
/// `D`, `J` and `≤_J` are only sampled over the boolean semifield.
pub fn related_pair(rel: GreenRelation, sf: SemifieldId, n: usize, rng: &mut impl Rng) -> Result<(Matrix, Matrix)> {
    use GreenRelation as G;
    if rel.needs_search() && !sf.is_boolean() {
        return Err(Error::UndecidableOverSemifield(rel));
    }
    Ok(match rel {
        G::LeqL => {
            let b = matrix(sf, n, n, rng);
            (matrix(sf, n, n, rng).mul_unchecked(&b), b)
        }
        G::LeqR => {
            let b = matrix(sf, n, n, rng);
            (b.mul_unchecked(&matrix(sf, n, n, rng)), b)
        }
        G::LeqJ => {
            let b = matrix(sf, n, n, rng);
            let s = matrix(sf, n, n, rng);
            let t = matrix(sf, n, n, rng);
            (s.mul_unchecked(&b).mul_unchecked(&t), b)
        }
        G::L => l_pair(sf, n, rng),
        G::R => {
            let (a, b) = l_pair(sf, n, rng);
            (a.transpose(), b.transpose())
        }
        G::H => match rng.gen_range(0..4) {
            0 => block_monomial_pair(sf, n, rng),
            3 if n >= 2 => cross_pair(sf, n, rng),
            1 => orbit_pair(sf, n, rng),
            _ => {
                let b = matrix(sf, n, n, rng);
                (b.scale(&nonzero_value(sf, rng)).unwrap(), b)
            }
        },
        G::D | G::J => {
            let c = matrix(sf, n, n, rng);
            let a = retry(rng, |rng| c.mul_unchecked(&matrix(sf, n, n, rng)), |a| relate(&c, a, G::LeqR).unwrap())
                .unwrap_or_else(|| c.mul_unchecked(&monomial(sf, n, rng).expand()));
            let b = retry(rng, |rng| matrix(sf, n, n, rng).mul_unchecked(&c), |b| relate(&c, b, G::LeqL).unwrap())
                .unwrap_or_else(|| monomial(sf, n, rng).expand().mul_unchecked(&c));
            (a, b)
        }
    })
}

fn retry<R: Rng, T>(rng: &mut R, mut draw: impl FnMut(&mut R) -> T, accept: impl Fn(&T) -> bool) -> Option<T> {
    (0..ATTEMPTS).map(|_| draw(rng)).find(|x| accept(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| trial_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        let x: u64 = trial_rng(7, 3).gen();
        let y: u64 = trial_rng(7, 4).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn value_ranges() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..1000 {
            let v = nonzero_value(SemifieldId::TropicalRational, &mut rng);
            let r = v.as_rational().unwrap();
            assert!(r.denom() <= DEN_BOUND.into());
            assert!(r.numer().magnitude() <= &num_bigint::BigUint::from(NUM_BOUND as u64));
            let z = nonzero_value(SemifieldId::TropicalInteger, &mut rng);
            assert!(z.as_rational().unwrap().is_integer());
        }
    }

    #[test]
    fn pairs_are_related() {
        use GreenRelation as G;
        for sf in SemifieldId::ALL {
            for n in 1..=3 {
                for rel in [G::LeqL, G::LeqR, G::L, G::R, G::H] {
                    for t in 0..40 {
                        let mut rng = trial_rng(11, t);
                        let (a, b) = related_pair(rel, sf, n, &mut rng).unwrap();
                        assert!(relate(&a, &b, rel).unwrap(), "{sf} n={n} {rel}: {a:?} {b:?}");
                    }
                }
            }
        }
        for n in 1..=2 {
            for rel in [G::D, G::J, G::LeqJ] {
                for t in 0..40 {
                    let mut rng = trial_rng(5, t);
                    let (a, b) = related_pair(rel, SemifieldId::Boolean, n, &mut rng).unwrap();
                    assert!(relate(&a, &b, rel).unwrap());
                }
            }
        }
        let mut rng = trial_rng(0, 0);
        assert!(related_pair(G::D, SemifieldId::TropicalRational, 2, &mut rng).is_err());
    }

    #[test]
    fn l_pairs_are_not_all_trivial() {
        let mut distinct = 0;
        for t in 0..100 {
            let mut rng = trial_rng(3, t);
            let (a, b) = related_pair(GreenRelation::L, SemifieldId::TropicalRational, 3, &mut rng).unwrap();
            if a != b {
                distinct += 1;
            }
        }
        assert!(distinct > 90);
    }
}
