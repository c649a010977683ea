use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{SuiteParams, SuiteReport};
use crate::error::{Error, Result};
use crate::green::{factor_rank, solve_left, solve_right, GreenRelation};
use crate::linear_maps::{
    check_preservation, check_strong_exchange, check_strong_preservation, check_strong_transfer, classify, find_sticky,
    relation_table, synthesize, CanonicalForm, ClassifyOutcome, LinearMap, Mode, Rule, StickyMode, StickyOutcome,
    UnitPermutationMap, Verdict,
};
use crate::matrix::{Matrix, MonomialMatrix};
use crate::sample;
use crate::semiring::SemifieldId;

use GreenRelation as G;

/// Largest `n` at which every bijective map is checked pair by pair.
const MAX_MAP_ENUMERATION_N: usize = 2;
/// Largest `n` for suites that enumerate all of `M_n(𝔹)`.
const MAX_BOOLEAN_N: usize = 3;
/// Maps sampled by randomized suites over the boolean semifield.
pub const BOOLEAN_MAP_SAMPLE: usize = 1000;
/// Maps (or canonical forms of each kind) sampled over tropical semifields.
pub const TROPICAL_MAP_SAMPLE: usize = 100;
/// Extra random `k` tried per sticky candidate besides the square-root one.
const STICKY_EXTRA_K: u32 = 2;
/// Stream reserved for drawing the sampled maps themselves.
const MAP_STREAM: u64 = u64::MAX;

fn unsupported(msg: impl Into<String>) -> Error {
    Error::UnsupportedParams(msg.into())
}

fn require_boolean(p: &SuiteParams, what: &str) -> Result<()> {
    if !p.semifield.is_boolean() {
        return Err(unsupported(format!("{what} needs the boolean semifield, got {}", p.semifield)));
    }
    Ok(())
}

fn require_n(p: &SuiteParams, max: usize, what: &str) -> Result<()> {
    if p.n > max {
        return Err(unsupported(format!("{what} supports n <= {max}, got {}", p.n)));
    }
    Ok(())
}

/// Independent seed for the `i`-th sampled map.
fn sub_seed(seed: u64, i: u64) -> u64 {
    sample::trial_rng(seed, MAP_STREAM - 1 - i).gen()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    crate::linear_maps::Permutations::new(n).collect()
}

/// Every canonical-form map over `𝔹` with the given flag, without repeats.
fn boolean_forms(n: usize, transposed: bool) -> Vec<UnitPermutationMap> {
    let sf = SemifieldId::Boolean;
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in &perms {
        for q in &perms {
            let form = CanonicalForm::new(
                MonomialMatrix::permutation(sf, p.clone()).unwrap(),
                MonomialMatrix::permutation(sf, q.clone()).unwrap(),
                transposed,
            )
            .unwrap();
            let u = synthesize(&form, n, sf).unwrap();
            if seen.insert(u.sigma().to_vec()) {
                out.push(u);
            }
        }
    }
    out
}

fn sigmas(maps: &[UnitPermutationMap]) -> BTreeSet<Vec<usize>> {
    maps.iter().map(|u| u.sigma().to_vec()).collect()
}

/// Pair-by-pair preservation verdicts for every bijective map on `M_n(𝔹)`.
struct Enumeration {
    maps: Vec<UnitPermutationMap>,
    outcomes: Vec<ClassifyOutcome>,
    pairs_checked: u64,
}

impl Enumeration {
    fn new(n: usize) -> Self {
        let maps: Vec<UnitPermutationMap> = UnitPermutationMap::all_boolean(n).collect();
        let outcomes = maps.iter().map(classify).collect();
        Enumeration {
            maps,
            outcomes,
            pairs_checked: 0,
        }
    }

    fn preservers(&mut self, rel: GreenRelation) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for (i, u) in self.maps.iter().enumerate() {
            let v = check_preservation(u, rel, Mode::Exhaustive)?;
            self.pairs_checked += v.pairs_checked();
            if v.is_ok() {
                out.insert(i);
            }
        }
        Ok(out)
    }

    fn classified(&self, keep: impl Fn(&ClassifyOutcome) -> bool) -> BTreeSet<usize> {
        (0..self.maps.len()).filter(|&i| keep(&self.outcomes[i])).collect()
    }

    /// Records a check that `actual` equals `expected`, with a witness for
    /// every map on which they differ.
    fn compare(&self, r: &mut SuiteReport, name: &str, rel: GreenRelation, actual: &BTreeSet<usize>, expected: &BTreeSet<usize>) {
        let diff: Vec<usize> = actual.symmetric_difference(expected).copied().collect();
        r.check(
            name,
            diff.is_empty(),
            format!("{} {rel}-preservers, {} expected, {} discrepancies", actual.len(), expected.len(), diff.len()),
        );
        for i in diff {
            let u = &self.maps[i];
            let verdict = check_preservation(u, rel, Mode::Exhaustive).ok();
            r.witness(json!({
                "map": u,
                "relation": rel,
                "preserves": actual.contains(&i),
                "canonical": self.outcomes[i].canonical(),
                "verdict": verdict,
            }));
        }
    }
}

/// Maps for spot checks: every canonical map first when the sample is large
/// enough (boolean), otherwise canonical forms and uniform random maps in
/// equal numbers.
fn sample_maps(sf: SemifieldId, n: usize, count: usize, seed: u64) -> Vec<UnitPermutationMap> {
    let mut rng = sample::trial_rng(seed, MAP_STREAM);
    let mut out = Vec::with_capacity(count);
    if sf.is_boolean() {
        let mut canonical = boolean_forms(n, false);
        let standard = sigmas(&canonical);
        canonical.extend(boolean_forms(n, true).into_iter().filter(|u| !standard.contains(u.sigma())));
        if canonical.len() <= count / 2 {
            out.extend(canonical);
        }
    } else {
        for i in 0..count / 2 {
            out.push(sample::canonical_map(sf, n, i % 2 == 1, &mut rng));
        }
    }
    while out.len() < count {
        out.push(sample::unit_map(sf, n, &mut rng));
    }
    out
}

/// What `classify` predicts for a map, per relation.
type Expectation = fn(&ClassifyOutcome) -> bool;

/// Randomized verdicts on sampled maps against what `classify` predicts.
fn spot_check(
    r: &mut SuiteReport,
    maps: &[UnitPermutationMap],
    checks: &[(&str, GreenRelation, Expectation)],
    seed: u64,
    trials: u64,
) -> Result<()> {
    let outcomes: Vec<ClassifyOutcome> = maps.par_iter().map(classify).collect();
    for &(name, rel, expect) in checks {
        let verdicts: Vec<Verdict> = maps
            .iter()
            .enumerate()
            .map(|(i, u)| check_preservation(u, rel, Mode::Randomized { seed: sub_seed(seed, i as u64), trials }))
            .collect::<Result<_>>()?;
        r.counts.pairs_checked += verdicts.iter().map(|v| match v {
            Verdict::Counterexample(_) => 1,
            v => v.pairs_checked(),
        }).sum::<u64>();
        let mut bad = 0;
        for ((u, v), o) in maps.iter().zip(&verdicts).zip(&outcomes) {
            if v.is_ok() != expect(o) {
                bad += 1;
                r.witness(json!({ "map": u, "relation": rel, "expected_preserver": expect(o), "verdict": v }));
            }
        }
        let found = verdicts.iter().filter(|v| v.is_ok()).count();
        r.check(
            name,
            bad == 0,
            format!("{} sampled maps, {found} without counterexample, {bad} discrepancies", maps.len()),
        );
    }
    Ok(())
}

fn standard(o: &ClassifyOutcome) -> bool {
    o.is_standard()
}

fn canonical(o: &ClassifyOutcome) -> bool {
    o.canonical().is_some()
}

fn randomized(p: &SuiteParams) -> Option<(u64, u64)> {
    match p.mode {
        Mode::Randomized { seed, trials } => Some((seed, trials)),
        Mode::Exhaustive => None,
    }
}

fn map_sample_size(sf: SemifieldId) -> usize {
    if sf.is_boolean() {
        BOOLEAN_MAP_SAMPLE
    } else {
        TROPICAL_MAP_SAMPLE
    }
}

/// All bijective maps preserving `L`, `R`, `≤_L` or `≤_R` are exactly the
/// maps `X ↦ PXQ`.
pub(super) fn t1(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    let n = p.n;
    match randomized(p) {
        None => {
            require_boolean(p, "exhaustive t1")?;
            require_n(p, MAX_MAP_ENUMERATION_N, "exhaustive t1")?;
            let mut e = Enumeration::new(n);
            let expected = e.classified(ClassifyOutcome::is_standard);
            let names = [(G::L, "l_preservers"), (G::R, "r_preservers"), (G::LeqL, "leq_l_preservers"), (G::LeqR, "leq_r_preservers")];
            for (rel, name) in names {
                let got = e.preservers(rel)?;
                e.compare(r, &format!("{name}_are_standard_forms"), rel, &got, &expected);
                if rel == G::L {
                    r.counts.preservers_found = got.len() as u64;
                }
            }
            let forms = sigmas(&boolean_forms(n, false));
            let classified: BTreeSet<Vec<usize>> = expected.iter().map(|&i| e.maps[i].sigma().to_vec()).collect();
            r.check(
                "standard_forms_are_permutation_pairs",
                forms == classified,
                format!("{} maps X -> PXQ with P, Q permutations", forms.len()),
            );
            r.counts.maps_enumerated = e.maps.len() as u64;
            r.counts.pairs_checked = e.pairs_checked;
        }
        Some((seed, trials)) => {
            require_n(p, MAX_BOOLEAN_N, "randomized t1")?;
            if p.semifield.is_boolean() {
                classify_all(p, r);
            }
            let maps = sample_maps(p.semifield, n, map_sample_size(p.semifield), seed);
            if !p.semifield.is_boolean() {
                r.counts.maps_enumerated = maps.len() as u64;
            }
            spot_check(
                r,
                &maps,
                &[
                    ("l_verdicts_match_classify", G::L, standard),
                    ("r_verdicts_match_classify", G::R, standard),
                    ("leq_l_verdicts_match_classify", G::LeqL, standard),
                    ("leq_r_verdicts_match_classify", G::LeqR, standard),
                    ("h_verdicts_match_classify", G::H, canonical),
                ],
                seed,
                trials,
            )?;
            r.counts.preservers_found = maps.iter().filter(|u| classify(u).is_standard()).count() as u64;
        }
    }
    Ok(())
}

/// Classifies every cell permutation of `M_n(𝔹)`.
fn classify_all(p: &SuiteParams, r: &mut SuiteReport) {
    let n = p.n;
    let total = factorial(n * n);
    let (standard, transposed) = UnitPermutationMap::all_boolean(n)
        .par_bridge()
        .map(|u| match classify(&u) {
            ClassifyOutcome::Canonical(c) if c.transposed => (0u64, 1u64),
            ClassifyOutcome::Canonical(_) => (1, 0),
            ClassifyOutcome::NonCanonical(_) => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let perms = factorial(n) * factorial(n);
    // at n = 1 the transpose is the identity and is reported as standard
    let want_transposed = if n == 1 { 0 } else { perms };
    r.counts.maps_enumerated = total;
    r.check(
        "classify_counts",
        standard == perms && transposed == want_transposed,
        format!("{total} maps: {standard} standard, {transposed} transposed, expected {perms} and {want_transposed}"),
    );
}

/// `D`, `J`, `≤_J` and `H` preservers are exactly the canonical forms.
pub(super) fn t2(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    if randomized(p).is_some() || !p.semifield.is_boolean() || p.n > MAX_MAP_ENUMERATION_N {
        return Err(unsupported(format!(
            "t2 is exhaustive only, over boolean matrices with n <= {MAX_MAP_ENUMERATION_N}"
        )));
    }
    let n = p.n;
    let mut e = Enumeration::new(n);
    let expected = e.classified(|o| o.canonical().is_some());
    let names = [(G::D, "d_preservers"), (G::J, "j_preservers"), (G::LeqJ, "leq_j_preservers"), (G::H, "h_preservers")];
    for (rel, name) in names {
        let got = e.preservers(rel)?;
        e.compare(r, &format!("{name}_are_canonical_forms"), rel, &got, &expected);
        if rel == G::D {
            r.counts.preservers_found = got.len() as u64;
        }
    }
    let std_forms = sigmas(&boolean_forms(n, false));
    let tr_forms = sigmas(&boolean_forms(n, true));
    if n > 1 {
        r.check(
            "transposed_forms_are_not_standard",
            std_forms.is_disjoint(&tr_forms),
            format!("{} standard and {} transposed forms", std_forms.len(), tr_forms.len()),
        );
    }
    r.counts.maps_enumerated = e.maps.len() as u64;
    r.counts.pairs_checked = e.pairs_checked;
    Ok(())
}

fn strong_checks(u: &UnitPermutationMap, transposed: bool, search: bool, mode: Mode) -> Result<Vec<(String, Verdict)>> {
    let mut out = Vec::new();
    let mut keep: Vec<GreenRelation> = vec![G::H];
    if search {
        keep.extend([G::D, G::J, G::LeqJ]);
    }
    if transposed {
        out.push(("exchange L/R".to_string(), check_strong_exchange(u, mode)?));
        let leq = [Rule { from: G::LeqL, to: G::LeqR }, Rule { from: G::LeqR, to: G::LeqL }];
        let v = check_strong_transfer(u, &leq, mode)?;
        out.push(("exchange leqL/leqR".to_string(), v));
    } else {
        keep.extend([G::L, G::R, G::LeqL, G::LeqR]);
    }
    for rel in keep {
        out.push((format!("preserve {rel}"), check_strong_preservation(u, rel, mode)?));
    }
    Ok(out)
}

/// Strong preservation and exchange properties of the canonical forms.
pub(super) fn corollaries(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    let n = p.n;
    require_n(p, MAX_BOOLEAN_N, "corollaries")?;
    let (forms, search): (Vec<(UnitPermutationMap, bool)>, bool) = match randomized(p) {
        None => {
            require_boolean(p, "exhaustive corollaries")?;
            let standard = boolean_forms(n, false);
            let seen = sigmas(&standard);
            let mut forms: Vec<_> = standard.into_iter().map(|u| (u, false)).collect();
            forms.extend(boolean_forms(n, true).into_iter().filter(|u| !seen.contains(u.sigma())).map(|u| (u, true)));
            (forms, n <= MAX_MAP_ENUMERATION_N)
        }
        Some((seed, _)) => {
            let mut rng = sample::trial_rng(seed, MAP_STREAM);
            let count = map_sample_size(p.semifield).min(TROPICAL_MAP_SAMPLE);
            let forms = (0..2 * count)
                .map(|i| {
                    let transposed = i % 2 == 1;
                    (sample::canonical_map(p.semifield, n, transposed, &mut rng), transposed)
                })
                .collect();
            (forms, p.semifield.is_boolean() && n <= MAX_MAP_ENUMERATION_N)
        }
    };
    let mut failures = [0usize; 2];
    for (i, (u, transposed)) in forms.iter().enumerate() {
        let mode = match p.mode {
            Mode::Exhaustive => Mode::Exhaustive,
            Mode::Randomized { seed, trials } => Mode::Randomized { seed: sub_seed(seed, i as u64), trials },
        };
        for (what, v) in strong_checks(u, *transposed, search, mode)? {
            r.counts.pairs_checked += v.pairs_checked();
            if !v.is_ok() {
                failures[*transposed as usize] += 1;
                r.witness(json!({ "map": u, "transposed": transposed, "property": what, "verdict": v }));
            }
        }
    }
    let count = |t: bool| forms.iter().filter(|f| f.1 == t).count();
    let relations = if search { "L, R, H, D, J, leqL, leqR, leqJ" } else { "L, R, H, leqL, leqR" };
    r.check(
        "standard_forms_strongly_preserve",
        failures[0] == 0,
        format!("{} forms, strong preservation of {relations}: {} failures", count(false), failures[0]),
    );
    let kept = if search { "H, D, J, leqJ" } else { "H" };
    r.check(
        "transposed_forms_exchange_and_preserve",
        failures[1] == 0,
        format!(
            "{} forms, strong exchange of L/R and leqL/leqR, strong preservation of {kept}: {} failures",
            count(true),
            failures[1]
        ),
    );
    r.counts.maps_enumerated = forms.len() as u64;
    r.counts.preservers_found = forms.len() as u64 - (failures[0] + failures[1]).min(forms.len()) as u64;
    Ok(())
}

/// `H` preservers coincide with `D` preservers, and no sticky matrix turns up.
pub(super) fn h_theorem(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    let n = p.n;
    match randomized(p) {
        None => {
            require_boolean(p, "exhaustive h_theorem")?;
            require_n(p, MAX_MAP_ENUMERATION_N, "exhaustive h_theorem")?;
            let mut e = Enumeration::new(n);
            let h = e.preservers(G::H)?;
            let d = e.preservers(G::D)?;
            e.compare(r, "h_preservers_are_d_preservers", G::H, &h, &d);
            r.counts.maps_enumerated = e.maps.len() as u64;
            r.counts.preservers_found = h.len() as u64;
            r.counts.pairs_checked = e.pairs_checked;
            sticky(r, SemifieldId::Boolean, StickyMode::ExhaustiveBoolean);
        }
        Some((seed, trials)) => {
            require_n(p, MAX_BOOLEAN_N, "randomized h_theorem")?;
            let maps = sample_maps(p.semifield, n, map_sample_size(p.semifield), seed);
            r.counts.maps_enumerated = maps.len() as u64;
            spot_check(r, &maps, &[("h_verdicts_match_classify", G::H, canonical)], seed, trials)?;
            r.counts.preservers_found = maps.iter().filter(|u| classify(u).canonical().is_some()).count() as u64;
            if p.semifield.is_boolean() {
                sticky(r, SemifieldId::Boolean, StickyMode::ExhaustiveBoolean);
            } else {
                let mode = StickyMode::RandomizedTropical { seed, trials, extra_k: STICKY_EXTRA_K };
                sticky(r, p.semifield, mode);
            }
        }
    }
    Ok(())
}

fn sticky(r: &mut SuiteReport, sf: SemifieldId, mode: StickyMode) {
    let s = find_sticky(sf, mode);
    let at_root = s.refutations.iter().filter(|x| x.via_square_root).count();
    r.check(
        "no_sticky_matrix",
        s.outcome == StickyOutcome::NoCandidateFound,
        format!(
            "{} full-support candidates, {} of rank one, {} refuted ({at_root} at the square-root k), {} survivors",
            s.candidates_examined,
            s.rank_one_rejections,
            s.refutations.len(),
            s.survivors.len()
        ),
    );
    for m in &s.survivors {
        r.witness(json!({ "sticky_candidate": m }));
    }
}

/// A linear map on `M_n(𝔹)` is bijective exactly when every unit goes to a
/// unit through a cell permutation; checked over all image tables.
pub(super) fn lemma_bg(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    require_boolean(p, "lemma_bg")?;
    require_n(p, MAX_MAP_ENUMERATION_N, "lemma_bg")?;
    if randomized(p).is_some() {
        return Err(unsupported("lemma_bg is exhaustive only"));
    }
    let n = p.n;
    let cells = n * n;
    let size = 1u64 << cells;
    let tables = size.pow(cells as u32);
    let (bijective, agree, bad) = (0..tables)
        .into_par_iter()
        .map(|t| {
            let images: Vec<u32> = (0..cells).map(|c| ((t / size.pow(c as u32)) % size) as u32).collect();
            let mut seen = vec![false; size as usize];
            let injective = (0..size as u32).all(|x| {
                let y = (0..cells).filter(|c| x >> c & 1 == 1).fold(0, |acc, c| acc | images[c]);
                !std::mem::replace(&mut seen[y as usize], true)
            });
            let map = LinearMap::new(
                n,
                SemifieldId::Boolean,
                images.iter().map(|&i| Matrix::boolean_from_index(n, i)).collect(),
            )
            .expect("boolean images");
            let unit_form = map.extract_unit_form().is_ok();
            let ok = injective == unit_form;
            (injective as u64, ok as u64, if ok { None } else { Some(images) })
        })
        .fold(
            || (0u64, 0u64, None::<Vec<u32>>),
            |acc, (b, ok, bad)| (acc.0 + b, acc.1 + ok, acc.2.or(bad)),
        )
        .reduce(|| (0, 0, None), |a, b| (a.0 + b.0, a.1 + b.1, a.2.or(b.2)));
    r.counts.maps_enumerated = tables;
    r.counts.preservers_found = bijective;
    r.counts.pairs_checked = tables * size;
    r.check(
        "bijective_iff_unit_permutation",
        agree == tables,
        format!("{tables} image tables, {bijective} bijective, {} disagreements", tables - agree),
    );
    r.check(
        "bijections_are_cell_permutations",
        bijective == factorial(cells),
        format!("{bijective} bijections, {} cell permutations", factorial(cells)),
    );
    if let Some(images) = bad {
        r.witness(json!({ "images": images.iter().map(|&i| Matrix::boolean_from_index(n, i)).collect::<Vec<_>>() }));
    }
    Ok(())
}

fn is_invertible(a: &Matrix) -> bool {
    let id = Matrix::identity(a.semifield(), a.rows());
    solve_left(&id, a).expect("square").is_some() && solve_right(&id, a).expect("square").is_some()
}

/// The invertible matrices are exactly the monomial ones.
pub(super) fn invertibles(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    let n = p.n;
    match randomized(p) {
        None => {
            require_boolean(p, "exhaustive invertibles")?;
            require_n(p, MAX_BOOLEAN_N, "exhaustive invertibles")?;
            let all: Vec<Matrix> = Matrix::all_boolean(n).collect();
            let id = Matrix::identity(SemifieldId::Boolean, n);
            // brute force: a·b = I = b·a for some b
            let invertible: BTreeSet<usize> = (0..all.len())
                .into_par_iter()
                .filter(|&i| all.iter().any(|b| all[i].mat_mul(b).unwrap() == id && b.mat_mul(&all[i]).unwrap() == id))
                .collect::<Vec<_>>()
                .into_iter()
                .collect();
            let monomial: BTreeSet<usize> =
                (0..all.len()).filter(|&i| MonomialMatrix::try_from_matrix(&all[i]).is_ok()).collect();
            let residuated: BTreeSet<usize> = (0..all.len()).filter(|&i| is_invertible(&all[i])).collect();
            r.counts.maps_enumerated = all.len() as u64;
            r.counts.preservers_found = invertible.len() as u64;
            r.counts.pairs_checked = (all.len() * all.len()) as u64;
            r.check(
                "invertible_iff_monomial",
                invertible == monomial,
                format!("{} invertible, {} monomial", invertible.len(), monomial.len()),
            );
            r.check(
                "residuation_agrees",
                invertible == residuated,
                format!("{} invertible by residuation", residuated.len()),
            );
            r.check(
                "monomials_are_permutations",
                monomial.len() as u64 == factorial(n),
                format!("{} monomial matrices, {}! = {}", monomial.len(), n, factorial(n)),
            );
            for i in invertible.symmetric_difference(&monomial) {
                r.witness(json!({ "matrix": all[*i], "invertible": invertible.contains(i) }));
            }
        }
        Some((seed, trials)) => {
            require_n(p, MAX_BOOLEAN_N, "randomized invertibles")?;
            let sf = p.semifield;
            let bad: Vec<(Matrix, bool, bool)> = (0..trials)
                .into_par_iter()
                .filter_map(|t| {
                    let mut rng = sample::trial_rng(seed, t);
                    let a = if t % 2 == 0 {
                        let m = sample::monomial(sf, n, &mut rng);
                        // the explicit inverse must work too
                        let inv = m.inverse().expand();
                        let e = m.expand();
                        if e.mat_mul(&inv).unwrap() != Matrix::identity(sf, n) {
                            return Some((e, true, false));
                        }
                        e
                    } else {
                        sample::matrix(sf, n, n, &mut rng)
                    };
                    let mono = MonomialMatrix::try_from_matrix(&a).is_ok();
                    let inv = is_invertible(&a);
                    (mono != inv).then_some((a, mono, inv))
                })
                .collect();
            r.counts.maps_enumerated = trials;
            r.counts.pairs_checked = trials;
            r.check(
                "invertible_iff_monomial",
                bad.is_empty(),
                format!("{trials} sampled matrices (half monomial), {} disagreements", bad.len()),
            );
            for (a, mono, inv) in bad {
                r.witness(json!({ "matrix": a, "monomial": mono, "invertible": inv }));
            }
        }
    }
    Ok(())
}

/// Factor rank is monotone along `≤_J` and constant on every class.
pub(super) fn rank_j_monotone(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    require_boolean(p, "rank_j_monotone")?;
    require_n(p, MAX_MAP_ENUMERATION_N, "rank_j_monotone")?;
    if randomized(p).is_some() {
        return Err(unsupported("rank_j_monotone is exhaustive only"));
    }
    let n = p.n;
    let ranks: Vec<usize> = Matrix::all_boolean(n).map(|a| factor_rank(&a).map(|x| x.value)).collect::<Result<_>>()?;
    let leq = relation_table(n, G::LeqJ)?;
    let violations: Vec<(u32, u32)> = leq
        .pairs()
        .iter()
        .copied()
        .filter(|&(a, b)| ranks[a as usize] > ranks[b as usize])
        .collect();
    r.counts.maps_enumerated = ranks.len() as u64;
    r.counts.pairs_checked = leq.pairs().len() as u64;
    r.check(
        "rank_monotone_along_leq_j",
        violations.is_empty(),
        format!("{} pairs with a leqJ b, {} violations", leq.pairs().len(), violations.len()),
    );
    for rel in [G::H, G::L, G::R, G::D, G::J] {
        let t = relation_table(n, rel)?;
        let bad = t.pairs().iter().filter(|&&(a, b)| ranks[a as usize] != ranks[b as usize]).count();
        r.check(
            &format!("rank_constant_on_{}_classes", rel.name().to_lowercase()),
            bad == 0,
            format!("{} related pairs, {bad} with different ranks", t.pairs().len()),
        );
    }
    for (a, b) in violations {
        r.witness(json!({
            "a": Matrix::boolean_from_index(n, a),
            "b": Matrix::boolean_from_index(n, b),
            "rank_a": ranks[a as usize],
            "rank_b": ranks[b as usize],
        }));
    }
    Ok(())
}

type Nat = Vec<Vec<u64>>;

fn nat_mul(a: &Nat, b: &Nat) -> Nat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn nat_unit(n: usize, v: u64) -> Nat {
    let mut m = vec![vec![0; n]; n];
    m[0][0] = v;
    m
}

/// Over the non-negative integers, `2E₁₁ ≤_R E₁₁` with equal factor rank
/// but the two are not `R`-related.
pub(super) fn remark_2_6_regression(p: &SuiteParams, r: &mut SuiteReport) -> Result<()> {
    require_n(p, MAX_BOOLEAN_N, "remark_2_6_regression")?;
    let n = p.n;
    let a = nat_unit(n, 2);
    let b = nat_unit(n, 1);
    let s = nat_unit(n, 2);
    r.check("a_leq_r_b", nat_mul(&b, &s) == a, "b·(2E11) = a");
    // b = a·t forces 2·t₁₁ = 1; search all t with entries 0..=3
    const BOUND: u64 = 4;
    let cells = n * n;
    let total = BOUND.pow(cells as u32);
    let solutions = (0..total)
        .filter(|&code| {
            let t: Nat = (0..n)
                .map(|i| (0..n).map(|j| code / BOUND.pow((i * n + j) as u32) % BOUND).collect())
                .collect();
            nat_mul(&a, &t) == b
        })
        .count();
    let parity = (0..=1u64).all(|t| 2 * t != 1);
    r.check(
        "b_not_leq_r_a",
        solutions == 0 && parity,
        format!("{total} candidate multipliers, {solutions} solve a·t = b; 2·t = 1 has no solution"),
    );
    // both are a column times a row
    let outer = |u: &[u64], v: &[u64]| -> Nat { u.iter().map(|&x| v.iter().map(|&y| x * y).collect()).collect() };
    let e1: Vec<u64> = (0..n).map(|i| u64::from(i == 0)).collect();
    let two_e1: Vec<u64> = e1.iter().map(|x| 2 * x).collect();
    let rank_one = outer(&e1, &two_e1) == a && outer(&e1, &e1) == b;
    r.check("equal_factor_rank", rank_one, "a = e1·(2e1)^T and b = e1·e1^T are non-zero of rank 1");
    r.counts.pairs_checked = total;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: SemifieldId = SemifieldId::Boolean;

    #[test]
    fn canonical_counts() {
        assert_eq!(boolean_forms(2, false).len(), 4);
        assert_eq!(boolean_forms(2, true).len(), 4);
        assert_eq!(boolean_forms(3, false).len(), 36);
        assert_eq!(boolean_forms(1, true).len(), 1);
    }

    #[test]
    fn map_sample_contains_all_canonical_maps() {
        let maps = sample_maps(B, 3, 1000, 1);
        assert_eq!(maps.len(), 1000);
        let canon = maps.iter().filter(|u| classify(u).canonical().is_some()).count();
        assert!(canon >= 72);
        assert_eq!(sample_maps(B, 3, 1000, 1), maps);
    }

    #[test]
    fn natural_number_regression_passes() {
        let mut r = SuiteReport::new(super::super::Suite::Remark26Regression, &SuiteParams::exhaustive(B, 2));
        remark_2_6_regression(&SuiteParams::exhaustive(B, 2), &mut r).unwrap();
        assert!(r.checks.iter().all(|c| c.pass), "{:?}", r.checks);
    }

    #[test]
    fn rejects_out_of_range() {
        use super::super::{run_suite, Suite};
        let tq = SuiteParams::exhaustive(SemifieldId::TropicalRational, 2);
        assert!(matches!(run_suite(Suite::T1, &tq), Err(Error::UnsupportedParams(_))));
        assert!(matches!(run_suite(Suite::T2, &SuiteParams::exhaustive(B, 3)), Err(Error::UnsupportedParams(_))));
        let r = SuiteParams::randomized(SemifieldId::TropicalRational, 2, 1, 10);
        assert!(matches!(run_suite(Suite::T2, &r), Err(Error::UnsupportedParams(_))));
        assert!(matches!(run_suite(Suite::RankJMonotone, &r), Err(Error::UnsupportedParams(_))));
    }
}
