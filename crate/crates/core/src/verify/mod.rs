//! Named verification suites and the egg-box emitter.
//!
//! Every suite returns a [`SuiteReport`] whose JSON form is deterministic for
//! fixed parameters: the same seed gives byte-identical output.

mod eggbox;
mod suites;

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use eggbox::{eggbox, EggBox, EggBoxFormat, DClass, HCell};

use crate::error::{Error, Result};
use crate::linear_maps::Mode;
use crate::sample::GENERATOR;
use crate::semiring::SemifieldId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    T1,
    T2,
    Corollaries,
    HTheorem,
    LemmaBg,
    Invertibles,
    RankJMonotone,
    #[serde(rename = "remark_2_6_regression")]
    Remark26Regression,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::T1,
        Suite::T2,
        Suite::Corollaries,
        Suite::HTheorem,
        Suite::LemmaBg,
        Suite::Invertibles,
        Suite::RankJMonotone,
        Suite::Remark26Regression,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::T1 => "t1",
            Suite::T2 => "t2",
            Suite::Corollaries => "corollaries",
            Suite::HTheorem => "h_theorem",
            Suite::LemmaBg => "lemma_bg",
            Suite::Invertibles => "invertibles",
            Suite::RankJMonotone => "rank_j_monotone",
            Suite::Remark26Regression => "remark_2_6_regression",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteParams {
    pub semifield: SemifieldId,
    pub n: usize,
    pub mode: Mode,
}

impl SuiteParams {
    pub fn exhaustive(semifield: SemifieldId, n: usize) -> Self {
        SuiteParams {
            semifield,
            n,
            mode: Mode::Exhaustive,
        }
    }

    pub fn randomized(semifield: SemifieldId, n: usize, seed: u64, trials: u64) -> Self {
        SuiteParams {
            semifield,
            n,
            mode: Mode::Randomized { seed, trials },
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            Mode::Exhaustive => None,
            Mode::Randomized { seed, .. } => Some(seed),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub maps_enumerated: u64,
    pub preservers_found: u64,
    pub pairs_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub semifield: SemifieldId,
    pub n: usize,
    pub mode: Mode,
    pub pass: bool,
    pub counts: Counts,
    pub checks: Vec<Check>,
    pub witnesses: Vec<serde_json::Value>,
    pub seed: Option<u64>,
    pub rng: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite, p: &SuiteParams) -> Self {
        SuiteReport {
            suite,
            semifield: p.semifield,
            n: p.n,
            mode: p.mode,
            pass: false,
            counts: Counts::default(),
            checks: Vec::new(),
            witnesses: Vec::new(),
            seed: p.seed(),
            rng: p.seed().map(|_| GENERATOR.to_string()),
        }
    }

    pub(crate) fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    pub(crate) fn witness(&mut self, w: impl Serialize) {
        self.witnesses.push(serde_json::to_value(w).expect("witnesses serialize"));
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn finish(mut self) -> Self {
        self.pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        if !self.pass && self.witnesses.is_empty() {
            let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            self.witness(serde_json::json!({ "failed_checks": failed }));
        }
        self
    }
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteReport> {
    if params.n == 0 {
        return Err(Error::UnsupportedParams("n must be at least 1".into()));
    }
    let mut report = SuiteReport::new(suite, params);
    match suite {
        Suite::T1 => suites::t1(params, &mut report)?,
        Suite::T2 => suites::t2(params, &mut report)?,
        Suite::Corollaries => suites::corollaries(params, &mut report)?,
        Suite::HTheorem => suites::h_theorem(params, &mut report)?,
        Suite::LemmaBg => suites::lemma_bg(params, &mut report)?,
        Suite::Invertibles => suites::invertibles(params, &mut report)?,
        Suite::RankJMonotone => suites::rank_j_monotone(params, &mut report)?,
        Suite::Remark26Regression => suites::remark_2_6_regression(params, &mut report)?,
    }
    Ok(report.finish())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "text" => Ok(ReportFormat::Text),
            _ => Err(Error::Parse(format!("unknown report format {s:?}"))),
        }
    }
}

pub fn format_report(r: &SuiteReport, style: ReportFormat) -> String {
    match style {
        ReportFormat::Json => serde_json::to_string_pretty(r).expect("reports serialize") + "\n",
        ReportFormat::Text => {
            let mut out = String::new();
            let mode = match r.mode {
                Mode::Exhaustive => "exhaustive".to_string(),
                Mode::Randomized { seed, trials } => format!("randomized (seed {seed}, {trials} trials)"),
            };
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{} over {} n={} {}: {}", r.suite, r.semifield, r.n, mode, verdict);
            let _ = writeln!(
                out,
                "  maps enumerated {}, preservers found {}, pairs checked {}",
                r.counts.maps_enumerated, r.counts.preservers_found, r.counts.pairs_checked
            );
            for c in &r.checks {
                let mark = if c.pass { "ok  " } else { "FAIL" };
                let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.detail);
            }
            for w in &r.witnesses {
                let _ = writeln!(out, "  witness: {}", render_witness(w));
            }
            if let Some(rng) = &r.rng {
                let _ = writeln!(out, "  generator: {rng}");
            }
            out
        }
    }
}

/// Matrices inside witnesses are rendered as `[[a, b], [c, d]]`.
fn render_witness(w: &serde_json::Value) -> String {
    use serde_json::Value as J;
    fn go(v: &J, out: &mut String) {
        match v {
            J::Object(m) if m.contains_key("entries") && m.contains_key("rows") => {
                let rows = m["entries"].as_array().map(Vec::as_slice).unwrap_or_default();
                let rendered: Vec<String> = rows
                    .iter()
                    .map(|row| {
                        let cells: Vec<&str> = row.as_array().into_iter().flatten().filter_map(J::as_str).collect();
                        format!("[{}]", cells.join(", "))
                    })
                    .collect();
                out.push_str(&format!("[{}]", rendered.join(", ")));
            }
            J::Object(m) => {
                out.push('{');
                for (i, (k, x)) in m.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(k);
                    out.push_str(": ");
                    go(x, out);
                }
                out.push('}');
            }
            J::Array(xs) => {
                out.push('[');
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    go(x, out);
                }
                out.push(']');
            }
            J::String(s) => out.push_str(s),
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    go(w, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: SemifieldId = SemifieldId::Boolean;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_value(s).unwrap(), serde_json::json!(s.name()));
        }
        assert_eq!("t3".parse::<Suite>(), Err(Error::UnknownSuite("t3".into())));
    }

    #[test]
    fn json_has_fixed_field_order_and_round_trips() {
        let r = run_suite(Suite::Invertibles, &SuiteParams::exhaustive(B, 2)).unwrap();
        let text = format_report(&r, ReportFormat::Json);
        let keys = ["suite", "semifield", "n", "mode", "pass", "counts", "checks", "witnesses", "seed", "rng"];
        let mut last = 0;
        for k in keys {
            let at = text.find(&format!("\"{k}\"")).unwrap();
            assert!(at >= last, "{k} out of order");
            last = at;
        }
        let back: SuiteReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(format_report(&back, ReportFormat::Json), text);
    }

    #[test]
    fn empty_counts_render_as_zeros() {
        let r = SuiteReport::new(Suite::T1, &SuiteParams::exhaustive(B, 1)).finish();
        let text = format_report(&r, ReportFormat::Json);
        assert!(text.contains("\"maps_enumerated\": 0"));
        assert!(!r.pass);
        assert!(!r.witnesses.is_empty());
        assert!(format_report(&r, ReportFormat::Text).contains("maps enumerated 0"));
    }

    #[test]
    fn text_renders_witness_matrices() {
        let mut r = SuiteReport::new(Suite::T1, &SuiteParams::exhaustive(B, 2));
        r.check("broken", false, "forced");
        r.witness(serde_json::json!({ "a": crate::matrix::Matrix::identity(B, 2) }));
        let r = r.finish();
        let text = format_report(&r, ReportFormat::Text);
        assert!(text.contains("[[1, 0], [0, 1]]"), "{text}");
        assert!(text.contains("FAIL"));
    }

    #[test]
    fn zero_n_is_rejected() {
        assert!(matches!(run_suite(Suite::T1, &SuiteParams::exhaustive(B, 0)), Err(Error::UnsupportedParams(_))));
    }
}
