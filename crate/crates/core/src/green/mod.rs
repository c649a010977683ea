//! Green's pre-orders and relations on `M_n(S)`, and factor rank.
//!
//! `≤_L`, `≤_R` (and so `L`, `R`, `H`) are decided over every supported
//! semifield through row/column-space containment: `A ≤_L B` iff `A = S·B`
//! for some `S`, iff the principal solution of `X·B ≤ A` attains equality.
//! `D`, `J` and `≤_J` are decided only over the boolean semifield, by exact
//! bounded search.

mod rank;
mod residual;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use rank::{factor_rank, rank_one_factors, RankMethod, RankResult};
pub use residual::{left_residual, right_residual, solve_left, solve_right};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest `n` for the bounded boolean searches behind `D`, `J`, `≤_J`.
pub const MAX_SEARCH_N: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GreenRelation {
    #[serde(rename = "leqL")]
    LeqL,
    #[serde(rename = "leqR")]
    LeqR,
    #[serde(rename = "leqJ")]
    LeqJ,
    L,
    R,
    H,
    D,
    J,
}

impl GreenRelation {
    pub const ALL: [GreenRelation; 8] = [
        GreenRelation::LeqL,
        GreenRelation::LeqR,
        GreenRelation::LeqJ,
        GreenRelation::L,
        GreenRelation::R,
        GreenRelation::H,
        GreenRelation::D,
        GreenRelation::J,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GreenRelation::LeqL => "leqL",
            GreenRelation::LeqR => "leqR",
            GreenRelation::LeqJ => "leqJ",
            GreenRelation::L => "L",
            GreenRelation::R => "R",
            GreenRelation::H => "H",
            GreenRelation::D => "D",
            GreenRelation::J => "J",
        }
    }

    /// `D`, `J` and `≤_J` need the bounded boolean search.
    pub fn needs_search(self) -> bool {
        matches!(self, GreenRelation::D | GreenRelation::J | GreenRelation::LeqJ)
    }

    /// The relation obtained by transposing both arguments.
    pub fn transposed(self) -> GreenRelation {
        match self {
            GreenRelation::LeqL => GreenRelation::LeqR,
            GreenRelation::LeqR => GreenRelation::LeqL,
            GreenRelation::L => GreenRelation::R,
            GreenRelation::R => GreenRelation::L,
            other => other,
        }
    }
}

impl fmt::Display for GreenRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GreenRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GreenRelation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown relation {s:?}")))
    }
}

/// Multipliers realising a relation between `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `a = s·b`.
    Left { s: Matrix },
    /// `a = b·t`.
    Right { t: Matrix },
    /// `a = s·b·t`.
    TwoSided { s: Matrix, t: Matrix },
    /// `a ≤ b` and `b ≤ a` for the same pre-order.
    Mutual { forward: Box<Witness>, backward: Box<Witness> },
    /// `a L b` and `a R b`.
    Both { l: Box<Witness>, r: Box<Witness> },
    /// `a R c` and `c L b`.
    Through { c: Matrix, r: Box<Witness>, l: Box<Witness> },
}

impl Witness {
    /// Independently checks the witness by multiplying out.
    pub fn verify(&self, a: &Matrix, b: &Matrix, rel: GreenRelation) -> bool {
        use GreenRelation as G;
        let mul = |x: &Matrix, y: &Matrix| x.mat_mul(y).ok();
        match (rel, self) {
            (G::LeqL, Witness::Left { s }) => mul(s, b).as_ref() == Some(a),
            (G::LeqR, Witness::Right { t }) => mul(b, t).as_ref() == Some(a),
            (G::LeqJ, Witness::TwoSided { s, t }) => {
                mul(s, b).and_then(|sb| mul(&sb, t)).as_ref() == Some(a)
            }
            (G::L | G::R | G::J, Witness::Mutual { forward, backward }) => {
                let pre = match rel {
                    G::L => G::LeqL,
                    G::R => G::LeqR,
                    _ => G::LeqJ,
                };
                forward.verify(a, b, pre) && backward.verify(b, a, pre)
            }
            (G::H, Witness::Both { l, r }) => l.verify(a, b, G::L) && r.verify(a, b, G::R),
            (G::D, Witness::Through { c, r, l }) => r.verify(a, c, G::R) && l.verify(c, b, G::L),
            _ => false,
        }
    }
}

fn check_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.semifield() != b.semifield() {
        return Err(Error::MixedSemifields(a.semifield(), b.semifield()));
    }
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "relations need square matrices of equal size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Decides `a rel b`.
pub fn relate(a: &Matrix, b: &Matrix, rel: GreenRelation) -> Result<bool> {
    Ok(relate_with_witness(a, b, rel)?.is_some())
}

/// Decides `a rel b`, returning the multipliers when it holds.
pub fn relate_with_witness(a: &Matrix, b: &Matrix, rel: GreenRelation) -> Result<Option<Witness>> {
    check_pair(a, b)?;
    if rel.needs_search() {
        if !a.semifield().is_boolean() {
            return Err(Error::UndecidableOverSemifield(rel));
        }
        if a.rows() > MAX_SEARCH_N {
            return Err(Error::UnsupportedParams(format!(
                "{rel} search is limited to n <= {MAX_SEARCH_N}"
            )));
        }
    }
    Ok(decide(a, b, rel))
}

fn mutual(
    a: &Matrix,
    b: &Matrix,
    leq: impl Fn(&Matrix, &Matrix) -> Option<Witness>,
) -> Option<Witness> {
    let forward = leq(a, b)?;
    let backward = leq(b, a)?;
    Some(Witness::Mutual {
        forward: Box::new(forward),
        backward: Box::new(backward),
    })
}

fn leq_left(a: &Matrix, b: &Matrix) -> Option<Witness> {
    solve_left(a, b).expect("shapes checked").map(|s| Witness::Left { s })
}

fn leq_right(a: &Matrix, b: &Matrix) -> Option<Witness> {
    solve_right(a, b).expect("shapes checked").map(|t| Witness::Right { t })
}

fn leq_two_sided(a: &Matrix, b: &Matrix) -> Option<Witness> {
    // a = s·b·t for some t  iff  a ≤_R s·b
    Matrix::all_boolean(b.rows()).find_map(|s| {
        let sb = s.mul_unchecked(b);
        solve_right(a, &sb)
            .expect("shapes checked")
            .map(|t| Witness::TwoSided { s, t })
    })
}

fn decide(a: &Matrix, b: &Matrix, rel: GreenRelation) -> Option<Witness> {
    use GreenRelation as G;
    match rel {
        G::LeqL => leq_left(a, b),
        G::LeqR => leq_right(a, b),
        G::LeqJ => leq_two_sided(a, b),
        G::L => mutual(a, b, leq_left),
        G::R => mutual(a, b, leq_right),
        G::J => mutual(a, b, leq_two_sided),
        G::H => {
            let l = decide(a, b, G::L)?;
            let r = decide(a, b, G::R)?;
            Some(Witness::Both {
                l: Box::new(l),
                r: Box::new(r),
            })
        }
        G::D => Matrix::all_boolean(a.rows()).find_map(|c| {
            let r = decide(a, &c, G::R)?;
            let l = decide(&c, b, G::L)?;
            Some(Witness::Through {
                c,
                r: Box::new(r),
                l: Box::new(l),
            })
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::SemifieldId;

    const B: SemifieldId = SemifieldId::Boolean;
    const TQ: SemifieldId = SemifieldId::TropicalRational;

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, i, j, B.one()).unwrap()
    }

    #[test]
    fn zero_is_below_everything() {
        let z = Matrix::zero(TQ, 2, 2);
        let a = Matrix::parse(TQ, &[&["1", "2"], &["-inf", "5/3"]]).unwrap();
        assert!(relate(&z, &a, GreenRelation::LeqL).unwrap());
        assert!(relate(&z, &a, GreenRelation::LeqR).unwrap());
        assert!(!relate(&a, &z, GreenRelation::LeqL).unwrap());
    }

    #[test]
    fn boolean_examples() {
        let top_row = e(2, 0, 0).add(&e(2, 0, 1)).unwrap();
        let ones = Matrix::parse(B, &[&["1", "1"], &["1", "1"]]).unwrap();
        let w = relate_with_witness(&top_row, &ones, GreenRelation::L).unwrap().unwrap();
        assert!(w.verify(&top_row, &ones, GreenRelation::L));

        let w = relate_with_witness(&e(2, 0, 0), &e(2, 1, 1), GreenRelation::D).unwrap().unwrap();
        assert!(w.verify(&e(2, 0, 0), &e(2, 1, 1), GreenRelation::D));
        let Witness::Through { c, .. } = &w else { panic!() };
        // the first intermediate in index order is E_{1,2} (one-based)
        assert_eq!(*c, e(2, 0, 1));
        assert!(!relate(&e(2, 0, 0), &e(2, 1, 1), GreenRelation::L).unwrap());
        assert!(!relate(&e(2, 0, 0), &e(2, 1, 1), GreenRelation::R).unwrap());
    }

    #[test]
    fn tropical_h_example() {
        let a = Matrix::parse(TQ, &[&["0", "-inf"], &["-inf", "0"]]).unwrap();
        let b = Matrix::parse(TQ, &[&["0", "0"], &["0", "1"]]).unwrap();
        assert!(!relate(&a, &b, GreenRelation::H).unwrap());
        // scalar multiples are H-related
        let b2 = b.scale(&Value::tropical(-7, 2)).unwrap();
        let w = relate_with_witness(&b, &b2, GreenRelation::H).unwrap().unwrap();
        assert!(w.verify(&b, &b2, GreenRelation::H));
    }

    use crate::semiring::Value;

    #[test]
    fn errors() {
        let a = Matrix::zero(TQ, 2, 2);
        assert_eq!(
            relate(&a, &a, GreenRelation::D),
            Err(Error::UndecidableOverSemifield(GreenRelation::D))
        );
        assert!(matches!(
            relate(&a, &Matrix::zero(TQ, 3, 3), GreenRelation::L),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            relate(&a, &Matrix::zero(B, 2, 2), GreenRelation::L),
            Err(Error::MixedSemifields(..))
        ));
        let big = Matrix::zero(B, 4, 4);
        assert!(matches!(relate(&big, &big, GreenRelation::J), Err(Error::UnsupportedParams(_))));
        assert!(relate(&big, &big, GreenRelation::H).unwrap());
    }

    #[test]
    fn relation_names_round_trip() {
        for r in GreenRelation::ALL {
            assert_eq!(r.name().parse::<GreenRelation>().unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), format!("\"{}\"", r.name()));
        }
        assert!("leql".parse::<GreenRelation>().is_err());
    }

    /// Brute-force multiplier search over all 16 candidates.
    fn brute(a: &Matrix, b: &Matrix, rel: GreenRelation) -> bool {
        let all: Vec<Matrix> = Matrix::all_boolean(2).collect();
        let left = |x: &Matrix, y: &Matrix| all.iter().any(|s| s.mat_mul(y).unwrap() == *x);
        let right = |x: &Matrix, y: &Matrix| all.iter().any(|t| y.mat_mul(t).unwrap() == *x);
        match rel {
            GreenRelation::LeqL => left(a, b),
            GreenRelation::LeqR => right(a, b),
            GreenRelation::L => left(a, b) && left(b, a),
            GreenRelation::R => right(a, b) && right(b, a),
            GreenRelation::H => left(a, b) && left(b, a) && right(a, b) && right(b, a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn residuation_deciders_match_brute_force() {
        let all: Vec<Matrix> = Matrix::all_boolean(2).collect();
        use GreenRelation as G;
        for rel in [G::LeqL, G::LeqR, G::L, G::R, G::H] {
            for a in &all {
                for b in &all {
                    let w = relate_with_witness(a, b, rel).unwrap();
                    assert_eq!(w.is_some(), brute(a, b, rel), "{rel} {a:?} {b:?}");
                    if let Some(w) = w {
                        assert!(w.verify(a, b, rel));
                    }
                }
            }
        }
    }

    #[test]
    fn containments_exhaustive() {
        use GreenRelation as G;
        let all: Vec<Matrix> = Matrix::all_boolean(2).collect();
        for a in &all {
            assert!(relate(a, a, G::D).unwrap());
            for b in &all {
                let l = relate(a, b, G::L).unwrap();
                let r = relate(a, b, G::R).unwrap();
                let d = relate(a, b, G::D).unwrap();
                let j = relate(a, b, G::J).unwrap();
                if l || r {
                    assert!(d);
                }
                if d {
                    assert!(j);
                    // D is symmetric
                    assert!(relate(b, a, G::D).unwrap());
                }
                if relate(a, b, G::LeqL).unwrap() || relate(a, b, G::LeqR).unwrap() {
                    assert!(relate(a, b, G::LeqJ).unwrap());
                }
            }
        }
    }

    #[test]
    fn l_is_an_equivalence_and_leq_l_a_preorder() {
        use GreenRelation as G;
        let all: Vec<Matrix> = Matrix::all_boolean(2).collect();
        let l = |a: &Matrix, b: &Matrix| relate(a, b, G::L).unwrap();
        let le = |a: &Matrix, b: &Matrix| relate(a, b, G::LeqL).unwrap();
        for a in &all {
            assert!(l(a, a) && le(a, a));
            for b in &all {
                assert_eq!(l(a, b), l(b, a));
                for c in &all {
                    if l(a, b) && l(b, c) {
                        assert!(l(a, c));
                    }
                    if le(a, b) && le(b, c) {
                        assert!(le(a, c));
                    }
                }
            }
        }
    }
}
