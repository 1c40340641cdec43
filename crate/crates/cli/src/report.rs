//! JSON form of engine reports.

use fmkernel::kernelcalc::{CohomologyReport, Expectation, Layout, PageEntry, SupportClass, Survivor, Verdict};
use fmkernel::linalg::{fmt_q, to_i64};
use fmkernel::Q;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Params {
    pub ell: usize,
    pub n: usize,
    pub dim_mode: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SideJson {
    pub ell: usize,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SupportJson {
    #[serde(rename = "K1")]
    pub k1: Vec<usize>,
    #[serde(rename = "K2")]
    pub k2: Vec<usize>,
    pub mu: Vec<(usize, usize)>,
    pub split: bool,
    /// the diagonal as blocks of glued coordinates, e.g. `[["x","z1"],["x1","z"]]`
    pub blocks: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EntryJson {
    pub degree: i64,
    pub support: SupportJson,
    /// integer, or `"p/q"` when a fiber of dimension three or more leaves a fractional tag
    pub omega: Value,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PageJson {
    pub page: usize,
    pub entries: Vec<PageEntryJson>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PageEntryJson {
    pub support: SupportJson,
    pub column: i64,
    pub h: i64,
    pub omega: Value,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ReportJson {
    pub params: Params,
    /// right-hand kernel when it differs from the left one
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<SideJson>,
    pub mode: String,
    pub verdict: String,
    pub expected: String,
    pub cohomology: Vec<EntryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<EntryJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub euler_check: bool,
    pub ambiguous_pairs: Vec<(usize, usize)>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pages: Option<Vec<PageJson>>,
    pub exit_code: i32,
}

fn omega_value(tag: &Q) -> Value {
    match to_i64(tag) {
        Some(e) => Value::from(e),
        None => Value::from(fmt_q(tag)),
    }
}

fn support_json(layout: &Layout, s: &SupportClass) -> SupportJson {
    let blocks = s.partition.blocks().iter().map(|b| b.iter().map(|&c| layout.coordinate_name(c)).collect()).collect();
    SupportJson { k1: s.k1.clone(), k2: s.k2.clone(), mu: s.mu.clone(), split: s.split, blocks }
}

fn entry_json(layout: &Layout, s: &Survivor) -> EntryJson {
    EntryJson { degree: s.degree, support: support_json(layout, &s.support), omega: omega_value(&s.tag), multiplicity: s.multiplicity }
}

fn page_entry_json(layout: &Layout, e: &PageEntry) -> PageEntryJson {
    PageEntryJson { support: support_json(layout, &e.support), column: e.p, h: e.h, omega: omega_value(&e.tag), dim: e.dim }
}

pub fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::PFunctor(n) => format!("P_FUNCTOR({n})"),
        Verdict::IdentityTensorLambda { n, d } => format!("IDENTITY_TENSOR_LAMBDA({n},{d})"),
        v => v.name().to_string(),
    }
}

pub fn expectation_label(e: &Expectation) -> String {
    match e {
        Expectation::Identity => "IDENTITY".into(),
        Expectation::PFunctor(n) => format!("P_FUNCTOR({n})"),
        Expectation::IdentityTensorLambda { n, d } => format!("IDENTITY_TENSOR_LAMBDA({n},{d})"),
        Expectation::Zero => "ZERO".into(),
        Expectation::Nonzero { degree, omega } => format!("NONZERO(degree {degree}, omega {omega})"),
        Expectation::Failure => "FAILURE".into(),
        Expectation::Unknown => "UNKNOWN".into(),
    }
}

impl ReportJson {
    pub fn from_report(r: &CohomologyReport) -> Self {
        let l = &r.layout;
        let (witness, reason) = match &r.verdict {
            Verdict::Failure { witness } => (Some(witness.iter().map(|w| entry_json(l, w)).collect()), None),
            Verdict::Inconsistent { reason } => (None, Some(reason.clone())),
            _ => (None, None),
        };
        let pages = (!r.pages.is_empty()).then(|| {
            r.pages
                .iter()
                .map(|p| PageJson { page: p.index, entries: p.entries.iter().map(|e| page_entry_json(l, e)).collect() })
                .collect()
        });
        ReportJson {
            params: Params { ell: r.a.ell, n: r.a.n, dim_mode: r.mode.to_string() },
            target: (r.a != r.b).then_some(SideJson { ell: r.b.ell, n: r.b.n }),
            mode: r.engine.to_string(),
            verdict: verdict_label(&r.verdict),
            expected: expectation_label(&r.expectation()),
            cohomology: r.entries.iter().map(|e| entry_json(l, e)).collect(),
            witness,
            reason,
            euler_check: r.euler_check(),
            ambiguous_pairs: r.ambiguous.clone(),
            notes: r.provenance.clone(),
            pages,
            exit_code: r.exit_code(),
        }
    }

    /// One line for the terminal.
    pub fn summary(&self) -> String {
        let target = match &self.target {
            Some(t) => format!(" -> ({},{})", t.ell, t.n),
            None => String::new(),
        };
        let mut line = format!(
            "({},{}){target} {} [{}]: {} (expected {}), euler {}, exit {}",
            self.params.ell,
            self.params.n,
            self.params.dim_mode,
            self.mode,
            self.verdict,
            self.expected,
            if self.euler_check { "ok" } else { "BROKEN" },
            self.exit_code
        );
        if let Some(w) = &self.witness {
            let parts: Vec<String> = w
                .iter()
                .map(|e| {
                    let blocks: Vec<String> = e.support.blocks.iter().map(|b| format!("{{{}}}", b.join(","))).collect();
                    format!("degree {} on {}", e.degree, blocks.join("|"))
                })
                .collect();
            line.push_str(&format!("; witness: {}", parts.join(", ")));
        }
        if let Some(r) = &self.reason {
            line.push_str(&format!("; {r}"));
        }
        line
    }
}
