//! Preservation and exchange checks for unit-permutation maps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::UnitPermutationMap;
use crate::error::{Error, Result};
use crate::green::{relate, relate_with_witness, GreenRelation, Witness};
use crate::matrix::Matrix;
use crate::sample;

/// Largest `n` for exhaustive pair enumeration.
pub const MAX_EXHAUSTIVE_N: usize = 3;
/// Largest `n` for exhaustive enumeration of relations decided by search.
pub const MAX_EXHAUSTIVE_SEARCH_N: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Randomized { seed: u64, trials: u64 },
}

/// `a from b ⇒ T(a) to T(b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub from: GreenRelation,
    pub to: GreenRelation,
}

impl Rule {
    pub fn keep(rel: GreenRelation) -> Rule {
        Rule { from: rel, to: rel }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub a: Matrix,
    pub b: Matrix,
    pub from: GreenRelation,
    pub to: GreenRelation,
    pub image_a: Matrix,
    pub image_b: Matrix,
    /// Multipliers for the pair that is `from`-related.
    pub evidence: Option<Witness>,
    /// Set when the images are `from`-related but `a`, `b` are not
    /// `to`-related, a failure of the converse direction.
    pub inverse: bool,
}

impl Counterexample {
    /// Re-checks the counterexample from scratch against `u`.
    pub fn confirm(&self, u: &UnitPermutationMap) -> bool {
        if u.apply(&self.a).ok().as_ref() != Some(&self.image_a) || u.apply(&self.b).ok().as_ref() != Some(&self.image_b) {
            return false;
        }
        let holds = |p: &Matrix, q: &Matrix, r| relate(p, q, r).unwrap_or(false);
        if self.inverse {
            holds(&self.image_a, &self.image_b, self.from) && !holds(&self.a, &self.b, self.to)
        } else {
            holds(&self.a, &self.b, self.from) && !holds(&self.image_a, &self.image_b, self.to)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds { pairs_checked: u64 },
    NoCounterexampleFound { trials: u64, seed: u64 },
    Counterexample(Box<Counterexample>),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Verdict::Counterexample(_))
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Counterexample(c) => Some(c),
            _ => None,
        }
    }

    pub fn pairs_checked(&self) -> u64 {
        match self {
            Verdict::Holds { pairs_checked } => *pairs_checked,
            Verdict::NoCounterexampleFound { trials, .. } => *trials,
            Verdict::Counterexample(_) => 0,
        }
    }
}

/// A relation on all of `M_n(𝔹)`, indexed by [`Matrix::boolean_index`].
#[derive(Debug)]
pub struct RelationTable {
    n: usize,
    rel: GreenRelation,
    words: usize,
    bits: Vec<u64>,
    pairs: Vec<(u32, u32)>,
}

impl RelationTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relation(&self) -> GreenRelation {
        self.rel
    }

    pub fn size(&self) -> usize {
        1 << (self.n * self.n)
    }

    pub fn holds(&self, a: u32, b: u32) -> bool {
        let (a, b) = (a as usize, b as usize);
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    /// Related ordered pairs in lexicographic order.
    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    fn from_fn(n: usize, rel: GreenRelation, f: impl Fn(u32, u32) -> bool + Sync) -> RelationTable {
        let size = 1usize << (n * n);
        let words = size.div_ceil(64);
        let rows: Vec<Vec<u64>> = (0..size as u32)
            .into_par_iter()
            .map(|a| {
                let mut row = vec![0u64; words];
                for b in 0..size as u32 {
                    if f(a, b) {
                        row[b as usize / 64] |= 1 << (b % 64);
                    }
                }
                row
            })
            .collect();
        let bits: Vec<u64> = rows.into_iter().flatten().collect();
        let mut table = RelationTable {
            n,
            rel,
            words,
            bits,
            pairs: Vec::new(),
        };
        table.pairs = (0..size as u32)
            .flat_map(|a| (0..size as u32).map(move |b| (a, b)))
            .filter(|&(a, b)| table.holds(a, b))
            .collect();
        table
    }
}

type TableCache = HashMap<(usize, GreenRelation), Arc<RelationTable>>;

static TABLES: Lazy<Mutex<TableCache>> = Lazy::new(Default::default);

/// The relation `rel` on `M_n(𝔹)`, computed once per process.
pub fn relation_table(n: usize, rel: GreenRelation) -> Result<Arc<RelationTable>> {
    let limit = if rel.needs_search() { MAX_EXHAUSTIVE_SEARCH_N } else { MAX_EXHAUSTIVE_N };
    if n == 0 || n > limit {
        return Err(Error::UnsupportedMode(format!(
            "{rel} tables over boolean matrices need 1 <= n <= {limit}, got {n}"
        )));
    }
    if let Some(t) = TABLES.lock().unwrap().get(&(n, rel)) {
        return Ok(Arc::clone(t));
    }
    use GreenRelation as G;
    let table = match rel {
        G::LeqL | G::LeqR | G::LeqJ | G::D => {
            let mats: Vec<Matrix> = Matrix::all_boolean(n).collect();
            RelationTable::from_fn(n, rel, |a, b| relate(&mats[a as usize], &mats[b as usize], rel).unwrap())
        }
        G::L | G::R | G::J => {
            let pre = match rel {
                G::L => relation_table(n, G::LeqL)?,
                G::R => relation_table(n, G::LeqR)?,
                _ => relation_table(n, G::LeqJ)?,
            };
            RelationTable::from_fn(n, rel, |a, b| pre.holds(a, b) && pre.holds(b, a))
        }
        G::H => {
            let l = relation_table(n, G::L)?;
            let r = relation_table(n, G::R)?;
            RelationTable::from_fn(n, rel, |a, b| l.holds(a, b) && r.holds(a, b))
        }
    };
    let table = Arc::new(table);
    TABLES.lock().unwrap().insert((n, rel), Arc::clone(&table));
    Ok(table)
}

fn check_mode(u: &UnitPermutationMap, rules: &[Rule], mode: Mode) -> Result<()> {
    let sf = u.semifield();
    let n = u.n();
    for rel in rules.iter().flat_map(|r| [r.from, r.to]) {
        match mode {
            Mode::Exhaustive => {
                if !sf.is_boolean() {
                    return Err(Error::UnsupportedMode(format!("exhaustive checks need the boolean semifield, got {sf}")));
                }
                let limit = if rel.needs_search() { MAX_EXHAUSTIVE_SEARCH_N } else { MAX_EXHAUSTIVE_N };
                if n > limit {
                    return Err(Error::UnsupportedMode(format!("exhaustive {rel} checks need n <= {limit}, got {n}")));
                }
            }
            Mode::Randomized { .. } => {
                if rel.needs_search() && !sf.is_boolean() {
                    return Err(Error::UnsupportedMode(format!("{rel} is not decidable over {sf}")));
                }
                if rel.needs_search() && n > crate::green::MAX_SEARCH_N {
                    return Err(Error::UnsupportedMode(format!("{rel} search needs n <= {}", crate::green::MAX_SEARCH_N)));
                }
            }
        }
    }
    Ok(())
}

fn counterexample(u: &UnitPermutationMap, a: Matrix, b: Matrix, rule: Rule, inverse: bool) -> Verdict {
    let evidence = relate_with_witness(&a, &b, rule.from).ok().flatten();
    let (image_a, image_b) = (u.apply_unchecked(&a), u.apply_unchecked(&b));
    Verdict::Counterexample(Box::new(Counterexample {
        a,
        b,
        from: rule.from,
        to: rule.to,
        image_a,
        image_b,
        evidence,
        inverse,
    }))
}

/// Reports the pair as seen from `outer`: when `inverse` is set, `u` is the
/// inverse of `outer` and the offending pair `(a, b)` is `outer`'s image side.
fn report(outer: &UnitPermutationMap, u: &UnitPermutationMap, a: Matrix, b: Matrix, rule: Rule, inverse: bool) -> Verdict {
    if !inverse {
        return counterexample(outer, a, b, rule, false);
    }
    // a from b, but u(a) to u(b) fails; for outer this reads: the preimages
    // u(a), u(b) are not `to`-related while their images a, b are `from`-related
    let (pa, pb) = (u.apply_unchecked(&a), u.apply_unchecked(&b));
    let evidence = relate_with_witness(&a, &b, rule.from).ok().flatten();
    Verdict::Counterexample(Box::new(Counterexample {
        a: pa,
        b: pb,
        from: rule.from,
        to: rule.to,
        image_a: a,
        image_b: b,
        evidence,
        inverse: true,
    }))
}

fn run(outer: &UnitPermutationMap, u: &UnitPermutationMap, rules: &[Rule], mode: Mode, inverse: bool) -> Result<Verdict> {
    check_mode(u, rules, mode)?;
    let n = u.n();
    match mode {
        Mode::Exhaustive => {
            let tables: Vec<(Arc<RelationTable>, Arc<RelationTable>)> = rules
                .iter()
                .map(|r| Ok((relation_table(n, r.from)?, relation_table(n, r.to)?)))
                .collect::<Result<_>>()?;
            let size = 1u32 << (n * n);
            let image: Vec<u32> = (0..size).map(|x| u.apply_index(x)).collect();
            let found = (0..size).into_par_iter().find_map_first(|a| {
                (0..size).find_map(|b| {
                    tables.iter().zip(rules).find_map(|((from, to), rule)| {
                        (from.holds(a, b) && !to.holds(image[a as usize], image[b as usize])).then_some((a, b, *rule))
                    })
                })
            });
            Ok(match found {
                Some((a, b, rule)) => report(
                    outer,
                    u,
                    Matrix::boolean_from_index(n, a),
                    Matrix::boolean_from_index(n, b),
                    rule,
                    inverse,
                ),
                None => {
                    let pairs = tables.iter().map(|(from, _)| from.pairs().len() as u64).sum();
                    Verdict::Holds { pairs_checked: pairs }
                }
            })
        }
        Mode::Randomized { seed, trials } if boolean_tables(u, rules).is_some() => {
            let tables = boolean_tables(u, rules).unwrap();
            let found = (0..trials).into_par_iter().find_map_first(|t| {
                let mut rng = sample::trial_rng(seed, t);
                let i = rng.gen_range(0..rules.len());
                let (from, to) = &tables[i];
                let (a, b) = from.pairs()[rng.gen_range(0..from.pairs().len())];
                (!to.holds(u.apply_index(a), u.apply_index(b))).then_some((a, b, rules[i]))
            });
            Ok(match found {
                Some((a, b, rule)) => report(
                    outer,
                    u,
                    Matrix::boolean_from_index(n, a),
                    Matrix::boolean_from_index(n, b),
                    rule,
                    inverse,
                ),
                None => Verdict::NoCounterexampleFound { trials, seed },
            })
        }
        Mode::Randomized { seed, trials } => {
            let sf = u.semifield();
            let found = (0..trials).into_par_iter().find_map_first(|t| {
                let mut rng = sample::trial_rng(seed, t);
                let rule = rules[rng.gen_range(0..rules.len())];
                let (a, b) = sample::related_pair(rule.from, sf, n, &mut rng).expect("validated");
                let ok = relate(&u.apply_unchecked(&a), &u.apply_unchecked(&b), rule.to).expect("validated");
                (!ok).then_some((a, b, rule))
            });
            Ok(match found {
                Some((a, b, rule)) => report(outer, u, a, b, rule, inverse),
                None => Verdict::NoCounterexampleFound { trials, seed },
            })
        }
    }
}

/// Cached tables for every relation in `rules`, when all are available.
fn boolean_tables(u: &UnitPermutationMap, rules: &[Rule]) -> Option<Vec<(Arc<RelationTable>, Arc<RelationTable>)>> {
    if !u.semifield().is_boolean() {
        return None;
    }
    let n = u.n();
    let available = |rel: GreenRelation| n <= if rel.needs_search() { MAX_EXHAUSTIVE_SEARCH_N } else { MAX_EXHAUSTIVE_N };
    if !rules.iter().all(|r| available(r.from) && available(r.to)) {
        return None;
    }
    rules
        .iter()
        .map(|r| Some((relation_table(n, r.from).ok()?, relation_table(n, r.to).ok()?)))
        .collect()
}

/// Checks every rule `a from b ⇒ T(a) to T(b)`; pairs are visited in a fixed
/// order and all rules are tried on a pair before moving on.
pub fn check_transfer(u: &UnitPermutationMap, rules: &[Rule], mode: Mode) -> Result<Verdict> {
    run(u, u, rules, mode, false)
}

pub fn check_preservation(u: &UnitPermutationMap, rel: GreenRelation, mode: Mode) -> Result<Verdict> {
    check_transfer(u, &[Rule::keep(rel)], mode)
}

/// Every rule as a biconditional: `a from b ⇔ T(a) to T(b)`.
pub fn check_strong_transfer(u: &UnitPermutationMap, rules: &[Rule], mode: Mode) -> Result<Verdict> {
    let forward = check_transfer(u, rules, mode)?;
    if !forward.is_ok() {
        return Ok(forward);
    }
    // a from b ⇔ T(a) to T(b) needs T⁻¹ to carry `to` back to `from`
    let back: Vec<Rule> = rules.iter().map(|r| Rule { from: r.to, to: r.from }).collect();
    let inv = u.inverse();
    let backward = run(u, &inv, &back, mode, true)?;
    if !backward.is_ok() {
        return Ok(backward);
    }
    Ok(match (forward, backward) {
        (Verdict::Holds { pairs_checked: x }, Verdict::Holds { pairs_checked: y }) => Verdict::Holds { pairs_checked: x + y },
        (Verdict::NoCounterexampleFound { trials: x, seed }, Verdict::NoCounterexampleFound { trials: y, .. }) => {
            Verdict::NoCounterexampleFound { trials: x + y, seed }
        }
        (v, _) => v,
    })
}

/// `a rel b ⇔ T(a) rel T(b)`.
pub fn check_strong_preservation(u: &UnitPermutationMap, rel: GreenRelation, mode: Mode) -> Result<Verdict> {
    check_strong_transfer(u, &[Rule::keep(rel)], mode)
}

const EXCHANGE: [Rule; 2] = [
    Rule {
        from: GreenRelation::L,
        to: GreenRelation::R,
    },
    Rule {
        from: GreenRelation::R,
        to: GreenRelation::L,
    },
];

/// `a L b ⇒ T(a) R T(b)` and `a R b ⇒ T(a) L T(b)`.
pub fn check_exchange(u: &UnitPermutationMap, mode: Mode) -> Result<Verdict> {
    check_transfer(u, &EXCHANGE, mode)
}

/// Both exchange rules as biconditionals.
pub fn check_strong_exchange(u: &UnitPermutationMap, mode: Mode) -> Result<Verdict> {
    check_strong_transfer(u, &EXCHANGE, mode)
}
