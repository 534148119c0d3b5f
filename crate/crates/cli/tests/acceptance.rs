//! One line per acceptance criterion.
//!
//! Criteria whose only failing checks are recorded discrepancies print FAIL
//! with a note and do not fail the run; any other failure exits nonzero.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use vislaw::audit::{audit_all, AuditReport, Status, ANCHORS};
use vislaw::Tolerances;

/// Checks known to disagree with the stated claims.
const KNOWN_DISCREPANCIES: [(&str, &str); 4] = [
    ("classification.order-four-capitals", "d2 terms of D2-D5 differ from the computed capitals"),
    ("classification.d2-constraint", "computed d2 is -3/4 times the displayed formula"),
    ("quasi-miura.burgers-series", "displayed eps^3 term does not solve the transport equation"),
    ("simulations.steepening-comparison", "absolute peak slope of v1 is below v2; relative steepening agrees"),
];

struct Criterion {
    number: u32,
    title: &'static str,
    entries: &'static [&'static str],
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        number: 1,
        title: "classification goldens through eps^5",
        entries: &[
            "classification.orders-one-to-three",
            "classification.derivative-constraints",
            "classification.order-four-capitals",
            "classification.d2-constraint",
        ],
    },
    Criterion {
        number: 2,
        title: "involutivity suites",
        entries: &["bracket.burgers-hierarchy", "hierarchies.negative-involution", "hierarchies.mixed-involution"],
    },
    Criterion { number: 3, title: "normal-form property suite", entries: &["normal-form.random-currents", "normal-form.delta-ranking"] },
    Criterion { number: 4, title: "Miura direction audit", entries: &["hierarchies.miura-direction"] },
    Criterion {
        number: 5,
        title: "quasi-Miura goldens and deformed hodograph residuals",
        entries: &["quasi-miura.burgers-series", "quasi-miura.linear-invariant", "quasi-miura.deformed-hodograph"],
    },
    Criterion { number: 6, title: "Burgers against Cole-Hopf", entries: &["hierarchies.cole-hopf-burgers"] },
    Criterion {
        number: 7,
        title: "damping, steepening and blow-up of the auxiliary-field system",
        entries: &["simulations.damping", "simulations.steepening-comparison", "simulations.blow-up"],
    },
    Criterion { number: 8, title: "cross-scheme agreement", entries: &["simulations.scheme-agreement", "simulations.nonlocal-flux"] },
    Criterion {
        number: 9,
        title: "Pearcey suite",
        entries: &["critical.pearcey-origin", "critical.linear-equation", "critical.nonlinear-equation", "critical.negative-controls"],
    },
    Criterion { number: 10, title: "universality experiment", entries: &["critical.catastrophe-point", "critical.universality"] },
];

enum Verdict {
    Pass(String),
    Known(String),
    Fail(String),
}

fn judge(report: &AuditReport, c: &Criterion) -> Verdict {
    let mut known = Vec::new();
    let mut failed = Vec::new();
    for id in c.entries {
        match report.entry(id) {
            None => failed.push(format!("{id}: missing")),
            Some(e) if e.status == Status::Verified => {}
            Some(e) => match KNOWN_DISCREPANCIES.iter().find(|(k, _)| k == id) {
                Some((_, note)) if e.status == Status::Refuted => known.push(format!("{id}: {note}")),
                _ => failed.push(format!("{id}: {} ({})", e.status.label(), e.summary)),
            },
        }
    }
    if !failed.is_empty() {
        Verdict::Fail(failed.join("; "))
    } else if !known.is_empty() {
        Verdict::Known(known.join("; "))
    } else {
        Verdict::Pass(format!("verified: {}", c.entries.join(", ")))
    }
}

fn classify_runtime() -> Result<Duration, String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_vislaw"))
        .args(["classify", "--order", "5", "--json"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let entries: Vec<&str> =
        doc["constraint_table"].as_array().into_iter().flatten().filter_map(|r| r["entry"].as_str()).collect();
    for want in ["b1 = (a^2/2)'", "c1 = (a^3/6)''", "d1 = (a^4/24)'''"] {
        if !entries.contains(&want) {
            return Err(format!("classify --order 5 lacks {want}"));
        }
    }
    Ok(elapsed)
}

fn completeness(report: &AuditReport) -> Verdict {
    let mut problems = Vec::new();
    for a in &ANCHORS {
        if !report.entries.iter().any(|e| e.anchor == a.key) {
            problems.push(format!("no entry for {}", a.key));
        }
    }
    if report.count(Status::Error) > 0 {
        problems.push(format!("{} entries did not run", report.count(Status::Error)));
    }
    match report.entry("classification.e-block") {
        Some(e) if e.status == Status::Unverifiable && e.summary.starts_with("E1-E7: unverifiable") => {}
        _ => problems.push("E1-E7 entry missing or not unverifiable".into()),
    }
    match report.entry("critical.general-solution-0f2") {
        Some(e) if e.status == Status::Measured => {
            let rows = e.data["rows"].as_array().cloned().unwrap_or_default();
            let has = |p: &str| rows.iter().any(|r| r["reading"].as_str().is_some_and(|s| s.starts_with(p)));
            if !(has("stated") && has("combined")) {
                problems.push("0F2 entry lacks one of the readings".into());
            }
        }
        _ => problems.push("0F2 entry missing or not measured".into()),
    }
    if problems.is_empty() {
        Verdict::Pass(format!("{} entries over {} anchors", report.entries.len(), ANCHORS.len()))
    } else {
        Verdict::Fail(problems.join("; "))
    }
}

fn main() -> ExitCode {
    let report = audit_all(&Tolerances::default());
    let mut unexpected = 0;
    let mut print = |number: u32, title: &str, verdict: Verdict| {
        let line = match verdict {
            Verdict::Pass(d) => format!("PASS  criterion {number:>2}: {title} ({d})"),
            Verdict::Known(d) => format!("FAIL  criterion {number:>2}: {title} (known discrepancy: {d})"),
            Verdict::Fail(d) => {
                unexpected += 1;
                format!("FAIL  criterion {number:>2}: {title} ({d})")
            }
        };
        println!("{line}");
    };
    for c in &CRITERIA {
        let mut verdict = judge(&report, c);
        if c.number == 1 {
            verdict = match (classify_runtime(), verdict) {
                (Err(e), _) => Verdict::Fail(e),
                (Ok(t), _) if t > Duration::from_secs(600) => Verdict::Fail(format!("classify --order 5 took {t:?}")),
                (Ok(t), Verdict::Known(d)) => Verdict::Known(format!("{d}; classify --order 5 in {:.2} s", t.as_secs_f64())),
                (Ok(_), v) => v,
            };
        }
        print(c.number, c.title, verdict);
    }
    print(11, "audit completeness", completeness(&report));
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
