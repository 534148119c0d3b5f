//! Consolidated claim audit.
//!
//! Each entry re-runs one check against the library and records its status
//! with the data behind it. Entries are grouped into tasks that run on
//! separate threads; the report is assembled afterwards in a fixed order, so
//! two runs give byte-identical output.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{generator, Tolerances};

mod numeric;
mod reference;
mod symbolic;

/// Topic of the theory an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Anchor {
    pub key: &'static str,
    pub topic: &'static str,
}

pub const ANCHORS: [Anchor; 8] = [
    Anchor { key: "bracket", topic: "bracket on 1-forms, commuting flows, Burgers hierarchy example" },
    Anchor { key: "normal-form", topic: "Miura action, existence of normal forms, ranking and the delta operator" },
    Anchor {
        key: "classification",
        topic: "capitals A to D5, constraints b1, c1, d1, d2, parametrization by a(u)",
    },
    Anchor {
        key: "hierarchies",
        topic: "viscous Camassa-Holm normal form, negative hierarchy, recursion operators, Cole-Hopf linearization",
    },
    Anchor {
        key: "simulations",
        topic: "auxiliary-field system, initial data v1, v2, v3 and their P, damping and steepening, nonlocal flux",
    },
    Anchor {
        key: "quasi-miura",
        topic: "transport equations, Burgers alpha recursion, quasi-Miura series, deformed hodograph formula",
    },
    Anchor {
        key: "critical",
        topic: "catastrophe conditions, scaling exponents, universality equations, 0F2 solution, Pearcey integral",
    },
    Anchor { key: "not-displayed", topic: "order-five capitals E1 to E7, computed but not displayed" },
];

pub fn anchor(key: &str) -> Option<&'static Anchor> {
    ANCHORS.iter().find(|a| a.key == key)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Symbolic,
    Numeric,
    /// Nothing to compare against.
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
    Measured,
    Unverifiable,
    /// The check itself failed to run; `data.error` says why.
    Error,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Measured => "measured",
            Status::Unverifiable => "unverifiable",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditEntry {
    pub id: String,
    pub anchor: &'static str,
    pub claim: String,
    pub method: Method,
    pub status: Status,
    pub summary: String,
    pub data: Value,
}

/// Outcome of one check before it is attached to its claim.
pub(crate) struct Finding {
    pub status: Status,
    pub summary: String,
    pub data: Value,
}

impl Finding {
    pub fn new(status: Status, summary: impl Into<String>, data: Value) -> Self {
        Finding { status, summary: summary.into(), data }
    }

    /// Verified when `ok`, refuted otherwise.
    pub fn check(ok: bool, summary: impl Into<String>, data: Value) -> Self {
        Finding::new(if ok { Status::Verified } else { Status::Refuted }, summary, data)
    }
}

/// Runs `check`, turning both error results and panics into an `error` entry.
pub(crate) fn entry(
    id: &str,
    anchor_key: &'static str,
    method: Method,
    claim: &str,
    check: impl FnOnce() -> Result<Finding, String>,
) -> AuditEntry {
    debug_assert!(anchor(anchor_key).is_some(), "unknown anchor {anchor_key}");
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
        .unwrap_or_else(|p| Err(panic_message(p.as_ref())));
    let f = outcome.unwrap_or_else(|e| Finding::new(Status::Error, "check did not complete", json!({ "error": e })));
    AuditEntry {
        id: id.to_string(),
        anchor: anchor_key,
        claim: claim.to_string(),
        method,
        status: f.status,
        summary: f.summary,
        data: f.data,
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".to_string())
}

pub(crate) fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub generator: String,
    pub tolerances: Tolerances,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn entry(&self, id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "schema": vislaw_core::json::SCHEMA,
            "version": vislaw_core::json::VERSION,
            "kind": "audit_report",
            "generator": self.generator,
            "body": {
                "anchors": ANCHORS,
                "tolerances": self.tolerances,
                "entries": self.entries,
            },
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self) -> String {
        let mut s = format!("{} audit: {} entries", self.generator, self.entries.len());
        let counts: Vec<String> =
            [Status::Verified, Status::Refuted, Status::Measured, Status::Unverifiable, Status::Error]
                .iter()
                .filter(|&&st| self.count(st) > 0)
                .map(|&st| format!("{} {}", self.count(st), st.label()))
                .collect();
        writeln!(s, " ({})", counts.join(", ")).unwrap();
        for a in &ANCHORS {
            writeln!(s, "\n## {} ({})", a.key, a.topic).unwrap();
            for e in self.entries.iter().filter(|e| e.anchor == a.key) {
                writeln!(s, "[{:<12}] {}: {}", e.status.label(), e.id, e.claim).unwrap();
                writeln!(s, "               {}", e.summary).unwrap();
            }
        }
        s
    }
}

type Task = fn(&Tolerances) -> Vec<AuditEntry>;

const TASKS: [(&str, &str, Task); 9] = [
    ("bracket", "bracket", symbolic::bracket),
    ("normal form", "normal-form", symbolic::normal_form),
    ("classification", "classification", symbolic::classification),
    ("hierarchies", "hierarchies", symbolic::hierarchies),
    ("quasi-Miura", "quasi-miura", symbolic::quasi_miura),
    ("Cole-Hopf", "hierarchies", numeric::cole_hopf),
    ("simulations", "simulations", numeric::simulations),
    ("Pearcey", "critical", numeric::pearcey),
    ("universality", "critical", numeric::universality),
];

/// Runs every audit task and assembles the report.
pub fn audit_all(tol: &Tolerances) -> AuditReport {
    let groups: Vec<Vec<AuditEntry>> = std::thread::scope(|scope| {
        let handles: Vec<_> = TASKS
            .iter()
            .map(|&(name, key, task)| {
                let handle = std::thread::Builder::new()
                    .name(format!("audit {name}"))
                    .stack_size(64 << 20)
                    .spawn_scoped(scope, move || task(tol));
                (name, key, handle)
            })
            .collect();
        handles
            .into_iter()
            .map(|(name, key, handle)| {
                let joined = handle.map_err(err).and_then(|h| h.join().map_err(|p| panic_message(p.as_ref())));
                joined.unwrap_or_else(|e| {
                    vec![entry(&format!("{key}.task"), key, Method::None, &format!("{name} checks"), || Err(e))]
                })
            })
            .collect()
    });
    AuditReport { generator: generator(), tolerances: tol.clone(), entries: groups.into_iter().flatten().collect() }
}
