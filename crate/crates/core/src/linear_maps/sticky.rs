//! Search for "sticky" `2 × 2` matrices: invertible entries, factor rank two,
//! and `A_k H B_k` for every invertible `k`, where
//! `A_k = [[a·k, b], [c, d·k]]` and `B_k = [[a, b·k], [c·k, d]]`.
//!
//! When `k² = b·c·a⁻¹·d⁻¹` has a solution, `A_k` has rank one while `B_k`
//! does not, so such a matrix cannot survive.

use rayon::prelude::*;
use serde::Serialize;

use crate::green::{factor_rank, relate, GreenRelation};
use crate::matrix::Matrix;
use crate::sample;
use crate::semiring::{SemifieldId, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StickyMode {
    /// Every full-support boolean `2 × 2` matrix.
    ExhaustiveBoolean,
    /// `trials` seeded full-support rank-two candidates; each is tested at
    /// the square-root witness and at `extra_k` further random `k`.
    RandomizedTropical { seed: u64, trials: u64, extra_k: u32 },
}

/// A `k` at which `A_k H B_k` fails for the candidate `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub m: Matrix,
    pub k: Value,
    pub via_square_root: bool,
    pub rank_a: Option<usize>,
    pub rank_b: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StickyOutcome {
    NoCandidateFound,
    CandidatesFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StickyReport {
    pub semifield: SemifieldId,
    pub mode: StickyMode,
    /// Full-support matrices looked at.
    pub candidates_examined: u64,
    /// Of those, how many had factor rank one.
    pub rank_one_rejections: u64,
    /// One per rank-two candidate, in candidate order.
    pub refutations: Vec<Refutation>,
    /// Rank-two candidates for which no tested `k` broke `A_k H B_k`.
    pub survivors: Vec<Matrix>,
    pub outcome: StickyOutcome,
}

/// `(A_k, B_k)` for a `2 × 2` matrix `m`.
pub fn sticky_pair(m: &Matrix, k: &Value) -> (Matrix, Matrix) {
    assert!(m.rows() == 2 && m.cols() == 2, "sticky pairs are 2x2");
    let [a, b, c, d] = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
    let sf = m.semifield();
    let ak = Matrix::from_rows(sf, vec![vec![a.product(k), b.clone()], vec![c.clone(), d.product(k)]]).unwrap();
    let bk = Matrix::from_rows(sf, vec![vec![a.clone(), b.product(k)], vec![c.product(k), d.clone()]]).unwrap();
    (ak, bk)
}

/// `k` with `k² = b·c·a⁻¹·d⁻¹`, if the semifield has it.
pub fn square_root_witness(m: &Matrix) -> Option<Value> {
    let [a, b, c, d] = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
    let target = b.product(c).product(&a.inv().ok()?).product(&d.inv().ok()?);
    target.try_sqrt().ok().flatten()
}

fn refute(m: &Matrix, k: &Value, via_square_root: bool) -> Option<Refutation> {
    let (ak, bk) = sticky_pair(m, k);
    if relate(&ak, &bk, GreenRelation::H).expect("2x2 over one semifield") {
        return None;
    }
    Some(Refutation {
        m: m.clone(),
        k: k.clone(),
        via_square_root,
        rank_a: factor_rank(&ak).ok().map(|r| r.value),
        rank_b: factor_rank(&bk).ok().map(|r| r.value),
    })
}

enum Checked {
    RankOne,
    Refuted(Refutation),
    Survived(Matrix),
}

fn examine(m: Matrix, extra: &[Value]) -> Checked {
    let rank = factor_rank(&m).expect("full-support 2x2 rank is always decided").value;
    if rank < 2 {
        return Checked::RankOne;
    }
    let root = square_root_witness(&m);
    let found = root
        .iter()
        .find_map(|k| refute(&m, k, true))
        .or_else(|| extra.iter().find_map(|k| refute(&m, k, false)));
    match found {
        Some(r) => Checked::Refuted(r),
        None => Checked::Survived(m),
    }
}

fn collect(semifield: SemifieldId, mode: StickyMode, checked: Vec<Checked>) -> StickyReport {
    let mut report = StickyReport {
        semifield,
        mode,
        candidates_examined: checked.len() as u64,
        rank_one_rejections: 0,
        refutations: Vec::new(),
        survivors: Vec::new(),
        outcome: StickyOutcome::NoCandidateFound,
    };
    for c in checked {
        match c {
            Checked::RankOne => report.rank_one_rejections += 1,
            Checked::Refuted(r) => report.refutations.push(r),
            Checked::Survived(m) => report.survivors.push(m),
        }
    }
    if !report.survivors.is_empty() {
        report.outcome = StickyOutcome::CandidatesFound;
    }
    report
}

/// Rank-two candidates drawn per trial before giving up on a trial.
const REDRAWS: usize = 64;

pub fn find_sticky(semifield: SemifieldId, mode: StickyMode) -> StickyReport {
    match mode {
        StickyMode::ExhaustiveBoolean => {
            let sf = SemifieldId::Boolean;
            let units = [Value::Boolean(true)];
            let checked = Matrix::all_boolean(2)
                .filter(|m| m.nonzero_count() == 4)
                .map(|m| examine(m, &units))
                .collect();
            collect(sf, mode, checked)
        }
        StickyMode::RandomizedTropical { seed, trials, extra_k } => {
            let checked: Vec<Vec<Checked>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = sample::trial_rng(seed, t);
                    let mut out = Vec::new();
                    for _ in 0..REDRAWS {
                        let m = sample::full_support_matrix(semifield, 2, 2, &mut rng);
                        let extra: Vec<Value> = (0..extra_k).map(|_| sample::nonzero_value(semifield, &mut rng)).collect();
                        let c = examine(m, &extra);
                        let done = !matches!(c, Checked::RankOne);
                        out.push(c);
                        if done {
                            break;
                        }
                    }
                    out
                })
                .collect();
            collect(semifield, mode, checked.into_iter().flatten().collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    const TQ: SemifieldId = SemifieldId::TropicalRational;

    /// Random invertible `k` biased towards small magnitudes.
    fn small_k(sf: SemifieldId, rng: &mut impl Rng) -> Value {
        match sf {
            SemifieldId::Boolean => Value::Boolean(true),
            _ => Value::from_rational(sf, crate::semiring::Rational::integer(rng.gen_range(-5..=5))).unwrap(),
        }
    }

    #[test]
    fn boolean_has_one_rank_one_candidate() {
        let r = find_sticky(SemifieldId::Boolean, StickyMode::ExhaustiveBoolean);
        assert_eq!(r.candidates_examined, 1);
        assert_eq!(r.rank_one_rejections, 1);
        assert!(r.refutations.is_empty() && r.survivors.is_empty());
        assert_eq!(r.outcome, StickyOutcome::NoCandidateFound);
    }

    #[test]
    fn square_root_witness_example() {
        let m = Matrix::parse(TQ, &[&["0", "0"], &["0", "1"]]).unwrap();
        let k = square_root_witness(&m).unwrap();
        assert_eq!(k, Value::tropical(-1, 2));
        let (ak, bk) = sticky_pair(&m, &k);
        assert_eq!(ak, Matrix::parse(TQ, &[&["-1/2", "0"], &["0", "1/2"]]).unwrap());
        assert_eq!(bk, Matrix::parse(TQ, &[&["0", "-1/2"], &["-1/2", "1"]]).unwrap());
        let r = refute(&m, &k, true).unwrap();
        assert_eq!((r.rank_a, r.rank_b), (Some(1), Some(2)));
    }

    #[test]
    fn randomized_tropical_finds_nothing() {
        let mode = StickyMode::RandomizedTropical { seed: 42, trials: 1000, extra_k: 2 };
        let r = find_sticky(TQ, mode);
        assert_eq!(r.outcome, StickyOutcome::NoCandidateFound);
        assert_eq!(r.refutations.len(), 1000);
        assert!(r.refutations.iter().all(|x| x.via_square_root && x.rank_a == Some(1)));
        assert_eq!(r, find_sticky(TQ, mode));
    }

    #[test]
    fn rank_one_blocks_h() {
        // whenever A_k or B_k drops to rank one, A_k and B_k are not H-related
        let mut seen = 0;
        for t in 0..400 {
            let mut rng = sample::trial_rng(17, t);
            let m = sample::full_support_matrix(TQ, 2, 2, &mut rng);
            let mut ks = vec![small_k(TQ, &mut rng), sample::nonzero_value(TQ, &mut rng)];
            ks.extend(square_root_witness(&m));
            for k in ks {
                let (ak, bk) = sticky_pair(&m, &k);
                let ra = factor_rank(&ak).unwrap().value;
                let rb = factor_rank(&bk).unwrap().value;
                if ra == 1 || rb == 1 {
                    seen += 1;
                    assert!(!relate(&ak, &bk, GreenRelation::H).unwrap(), "{m:?} k={k}");
                }
            }
        }
        assert!(seen >= 400);
    }

    #[test]
    fn integer_semifield_uses_extra_k_without_a_root() {
        let zi = SemifieldId::TropicalInteger;
        let m = Matrix::parse(zi, &[&["0", "0"], &["0", "1"]]).unwrap();
        assert_eq!(square_root_witness(&m), None);
        let r = find_sticky(zi, StickyMode::RandomizedTropical { seed: 1, trials: 50, extra_k: 4 });
        assert!(r.refutations.iter().any(|x| !x.via_square_root) || r.refutations.len() == 50);
    }
}
