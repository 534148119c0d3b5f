use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use vislaw::audit::{anchor, audit_all, Status, ANCHORS};
use vislaw::{exit, Tolerances};
use vislaw_numerics::pdesim::{Datum, SimConfig};

fn vislaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vislaw")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vislaw-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_json_lists_derivative_constraints() {
    let out = vislaw(&["classify", "--order", "3", "--json"]);
    assert_eq!(out.status.code(), Some(exit::OK));
    let doc = stdout_json(&out);
    assert_eq!(doc["schema"], "vislaw");
    assert_eq!(doc["generator"], vislaw::generator());
    let entries: Vec<&str> = doc["constraint_table"].as_array().unwrap().iter().map(|r| r["entry"].as_str().unwrap()).collect();
    assert_eq!(entries, ["b1 = (a^2/2)'"]);
}

#[test]
fn classify_order_five_text_has_all_derivative_constraints() {
    let out = vislaw(&["classify", "--order", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for needle in ["b1 = (a^2/2)'", "c1 = (a^3/6)''", "d1 = (a^4/24)'''", "D5 = "] {
        assert!(text.contains(needle), "missing {needle}");
    }
}

#[test]
fn bracket_of_hierarchy_members_passes_and_mismatch_fails() {
    let dir = scratch("bracket");
    let write = |name: &str, args: &[&str]| {
        let out = vislaw(args);
        assert_eq!(out.status.code(), Some(exit::OK));
        let p = dir.join(name);
        std::fs::write(&p, &out.stdout).unwrap();
        p
    };
    let b1 = write("b1.json", &["hierarchy", "--family", "burgers", "--index", "1", "--order", "4", "--json"]);
    let b2 = write("b2.json", &["hierarchy", "--family", "burgers", "--index", "2", "--order", "4", "--json"]);
    let ch = write("ch.json", &["hierarchy", "--family", "viscousCH", "--order", "4", "--json"]);

    let out = vislaw(&["bracket", path(&b1), path(&b2), "--json"]);
    assert_eq!(out.status.code(), Some(exit::OK));
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "involution_report");
    assert_eq!(doc["status"], "pass");

    let out = vislaw(&["bracket", path(&b2), path(&ch), "--json"]);
    assert_eq!(out.status.code(), Some(exit::CHECK_FAILED));
    assert_eq!(stdout_json(&out)["status"], "fail");
}

#[test]
fn normal_form_round_trips_a_normal_current() {
    let dir = scratch("normal");
    let out = vislaw(&["hierarchy", "--family", "viscousCH", "--order", "3", "--json"]);
    let input = dir.join("ch.json");
    std::fs::write(&input, &out.stdout).unwrap();
    let out = vislaw(&["normal-form", path(&input), "--json"]);
    assert_eq!(out.status.code(), Some(exit::OK));
    let doc = stdout_json(&out);
    assert!(doc["normal_form"].is_object());
    assert!(doc["miura"].is_object() || doc["miura"].is_array());
}

#[test]
fn error_classes_map_to_exit_codes() {
    let dir = scratch("errors");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = vislaw(&["normal-form", path(&bad)]);
    assert_eq!(out.status.code(), Some(exit::SCHEMA));
    assert!(!out.stderr.is_empty());

    let wrong = dir.join("wrong.json");
    std::fs::write(&wrong, r#"{"schema":"other","version":1,"kind":"eps_current","body":{}}"#).unwrap();
    assert_eq!(vislaw(&["normal-form", path(&wrong)]).status.code(), Some(exit::SCHEMA));

    let missing = dir.join("missing.json");
    assert_eq!(vislaw(&["normal-form", path(&missing)]).status.code(), Some(exit::FILE));
    assert_eq!(vislaw(&["classify", "--order", "many"]).status.code(), Some(exit::USAGE));
}

#[test]
fn quasimiura_reports_burgers_terms() {
    let out = vislaw(&["quasimiura", "--order", "2", "--a", "constant", "--json"]);
    assert_eq!(out.status.code(), Some(exit::OK));
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "quasi_miura");
    assert_eq!(doc["generator"], vislaw::generator());
}

#[test]
fn simulate_blow_up_and_outputs() {
    let dir = scratch("simulate");
    let cfg = SimConfig::<f64> { n: 256, ..SimConfig::standard(Datum::V3) };
    let cfg_path = dir.join("v3.json");
    std::fs::write(&cfg_path, serde_json::to_string(&cfg).unwrap()).unwrap();
    let csv = dir.join("v3.csv");
    let out = vislaw(&["simulate", "--config", path(&cfg_path), "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(exit::BLOW_UP));
    let summary = stdout_json(&out);
    assert_eq!(summary["status"], "blow-up");
    assert_eq!(summary["generator"], vislaw::generator());
    let back: SimConfig<f64> = serde_json::from_value(summary["config"].clone()).unwrap();
    assert_eq!(back, cfg);

    let diag = std::fs::read_to_string(dir.join("v3.diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,mass,max_slope,osc_amp"));
    let fields = std::fs::read_to_string(&csv).unwrap();
    assert!(fields.starts_with("t,x,v,P"));
}

#[test]
fn simulate_rejects_invalid_config() {
    let dir = scratch("simulate-bad");
    let cfg_path = dir.join("bad.json");
    std::fs::write(&cfg_path, r#"{"n": "many"}"#).unwrap();
    let out = vislaw(&["simulate", "--config", path(&cfg_path), "--out", path(&dir.join("x.csv"))]);
    assert_eq!(out.status.code(), Some(exit::SCHEMA));
}

#[test]
fn pearcey_table_has_small_residuals() {
    let dir = scratch("pearcey");
    let csv = dir.join("p.csv");
    let out = vislaw(&["pearcey", "--grid", "-2:2:5", "--t-grid", "-1:1:3", "--out", path(&csv)]);
    assert_eq!(out.status.code(), Some(exit::OK));
    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (lin, non) = (col("linear_residual"), col("nonlinear_residual"));
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert!(rec[lin].parse::<f64>().unwrap() <= 1e-6);
        assert!(rec[non].parse::<f64>().unwrap() <= 1e-5);
        rows += 1;
    }
    assert_eq!(rows, 15);
}

#[test]
fn tolerance_file_must_be_well_formed() {
    let dir = scratch("tol");
    let p = dir.join("tol.json");
    std::fs::write(&p, r#"{"mass": 1e-6}"#).unwrap();
    let t = Tolerances::from_file(&p).unwrap();
    assert_eq!(t.mass, 1e-6);
    assert_eq!(t.linear_ode, Tolerances::default().linear_ode);
    std::fs::write(&p, r#"{"masss": 1e-6}"#).unwrap();
    assert!(Tolerances::from_file(&p).is_err());
}

#[test]
fn audit_covers_every_anchor_and_is_deterministic() {
    let tol = Tolerances::default();
    let report = audit_all(&tol);
    assert!(report.entries.len() >= 12);
    assert_eq!(report.count(Status::Error), 0);
    for e in &report.entries {
        assert!(anchor(e.anchor).is_some(), "{} has unknown anchor", e.id);
    }
    for a in &ANCHORS {
        assert!(report.entries.iter().any(|e| e.anchor == a.key), "no entry for {}", a.key);
    }
    let e = report.entry("classification.e-block").unwrap();
    assert_eq!(e.status, Status::Unverifiable);
    assert!(e.summary.starts_with("E1-E7: unverifiable"));
    let f = report.entry("critical.general-solution-0f2").unwrap();
    assert_eq!(f.status, Status::Measured);
    let readings: Vec<&str> = f.data["rows"].as_array().unwrap().iter().map(|r| r["reading"].as_str().unwrap()).collect();
    assert!(readings.iter().any(|r| r.starts_with("stated")) && readings.iter().any(|r| r.starts_with("combined")));

    assert_eq!(report.to_json(), audit_all(&tol).to_json());
}

#[test]
fn audit_command_writes_report_files() {
    let dir = scratch("audit");
    let out = vislaw(&["audit", "--json", "--out-dir", path(&dir)]);
    assert_eq!(out.status.code(), Some(exit::OK));
    let doc = stdout_json(&out);
    assert_eq!(doc["kind"], "audit_report");
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("audit.json")).unwrap()).unwrap();
    assert_eq!(saved, doc);
    assert!(std::fs::read_to_string(dir.join("audit.txt")).unwrap().contains("## not-displayed"));
}

#[test]
fn shipped_configs_are_the_standard() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for (name, datum) in [("v1", Datum::V1), ("v2", Datum::V2), ("v3", Datum::V3)] {
        let text = std::fs::read_to_string(root.join(format!("{name}.json"))).unwrap();
        let cfg: SimConfig<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, SimConfig::standard(datum), "{name}");
    }
}
