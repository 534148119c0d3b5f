//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Value};
use vislaw_core::asymptotics::quasi_miura;
use vislaw_core::classify::{classify as run_classify, ClassificationResult};
use vislaw_core::hierarchy::{burgers_current, flow, viscous_ch_current, Family};
use vislaw_core::json::{from_json, to_value, JsonArtifact};
use vislaw_core::miura::normal_form as run_normal_form;
use vislaw_core::{involution_check, CoeffExpr, EpsCurrent, Involution};
use vislaw_numerics::critical::{linear_ode_residual, nonlinear_ode_residual, Pearcey};
use vislaw_numerics::pdesim::{BlowUpReason, Outcome, SimConfig, Simulator};

use crate::audit::audit_all;
use crate::{exit, generator, CliError, Tolerances};

/// What a subcommand prints and the exit code it requests.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: exit::OK }
    }
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let name = path.file_name().ok_or_else(|| CliError::file(path, "not a file path"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents).map_err(|e| CliError::file(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::file(path, e)
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::file(path, e))
}

fn read_artifact<T: JsonArtifact>(path: &Path) -> Result<T, CliError> {
    from_json(&read(path)?).map_err(|e| match CliError::from(e) {
        CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// A canonical artifact document with the generator stamp and extra
/// top-level fields merged in.
fn stamped<T: JsonArtifact>(value: &T, extra: Value) -> Value {
    let mut doc = to_value(value);
    let map = doc.as_object_mut().expect("artifact documents are objects");
    map.insert("generator".into(), Value::String(generator()));
    if let Value::Object(extra) = extra {
        map.extend(extra);
    }
    doc
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// `(a^(n+1)/(n+1)!)^(n)` written with primes up to third order.
fn closed_form_label(n: u32) -> String {
    let fact: u64 = (1..=u64::from(n) + 1).product();
    let marks = if n <= 3 { "'".repeat(n as usize) } else { format!("^({n})") };
    format!("(a^{}/{})", n + 1, fact) + &marks
}

/// Recognizes constraints of the form `(a^(n+1)/(n+1)!)^(n)`.
pub fn closed_form(value: &CoeffExpr) -> Option<String> {
    let a = CoeffExpr::free("a");
    (1..=6u32).find_map(|n| {
        let fact: i64 = (1..=i64::from(n) + 1).product();
        let candidate = a.pow(n + 1).scale(&vislaw_core::rat(1, fact)).du_n(n);
        (&candidate == value).then(|| closed_form_label(n))
    })
}

fn constraint_table(r: &ClassificationResult) -> Vec<Value> {
    r.constraints
        .iter()
        .map(|c| {
            let closed = closed_form(&c.value);
            let shown = closed.clone().unwrap_or_else(|| c.value.to_string());
            json!({
                "symbol": c.symbol,
                "found_at": c.found_at,
                "value": c.value.to_string(),
                "closed_form": closed,
                "entry": format!("{} = {shown}", c.symbol),
            })
        })
        .collect()
}

pub fn classify(order: usize, as_json: bool) -> Result<Output, CliError> {
    let r = run_classify(order)?;
    let table = constraint_table(&r);
    if as_json {
        return Ok(Output::ok(pretty(&stamped(&r, json!({ "constraint_table": table })))));
    }
    let mut s = format!("{}: classification through eps^{order}\n\ncapitals\n", generator());
    for c in &r.capitals {
        writeln!(s, "  {} = {}", c.name, c.value).unwrap();
    }
    s.push_str("\nconstraints\n");
    for row in &table {
        let entry = row["entry"].as_str().unwrap();
        if row["closed_form"].is_null() {
            writeln!(s, "  [eps^{}] {entry}", row["found_at"]).unwrap();
        } else {
            writeln!(s, "  [eps^{}] {entry}    ({})", row["found_at"], row["value"].as_str().unwrap()).unwrap();
        }
    }
    writeln!(s, "\nnormal form: {}", r.main).unwrap();
    Ok(Output::ok(s))
}

pub fn normal_form(input: &Path, order: Option<usize>, as_json: bool) -> Result<Output, CliError> {
    let omega: EpsCurrent = read_artifact(input)?;
    let order = order.unwrap_or(omega.order());
    let (nf, seq) = run_normal_form(&omega, order)?;
    if as_json {
        let doc = json!({ "generator": generator(), "normal_form": to_value(&nf), "miura": to_value(&seq) });
        return Ok(Output::ok(pretty(&doc)));
    }
    Ok(Output::ok(format!("{}\nnormal form: {nf}\nMiura sequence: {seq}\n", generator())))
}

/// Involution check of two serialized currents. Both are read as exact
/// polynomials in eps and padded with zeros to the check order, which
/// defaults to the larger of their truncation orders.
pub fn bracket(first: &Path, second: &Path, order: Option<usize>, as_json: bool) -> Result<Output, CliError> {
    let a: EpsCurrent = read_artifact(first)?;
    let b: EpsCurrent = read_artifact(second)?;
    let order = order.unwrap_or(a.order().max(b.order()));
    let result = involution_check(&a.truncate(order), &b.truncate(order), order)?;
    let (status, code, detail) = match &result {
        Involution::Pass => ("pass", exit::OK, json!(null)),
        Involution::Fail { order, residual } => {
            ("fail", exit::CHECK_FAILED, json!({ "order": order, "residual": residual.to_string() }))
        }
    };
    let stdout = if as_json {
        pretty(&json!({
            "generator": generator(),
            "kind": "involution_report",
            "order": order,
            "status": status,
            "first_nonzero": detail,
        }))
    } else {
        match &result {
            Involution::Pass => format!("{}\npass: bracket vanishes through eps^{order}\n", generator()),
            Involution::Fail { order: k, residual } => {
                format!("{}\nfail: bracket component at eps^{k} is {residual}\n", generator())
            }
        }
    };
    Ok(Output { stdout, code })
}

pub fn hierarchy(family: Family, index: usize, order: Option<usize>, as_json: bool) -> Result<Output, CliError> {
    let order = order.unwrap_or(index);
    let f = flow(family, index, order);
    let current = f.current.truncate(order);
    if as_json {
        let extra = json!({ "family": family, "index": index, "exact": f.exact });
        return Ok(Output::ok(pretty(&stamped(&current, extra))));
    }
    Ok(Output::ok(format!("{}\n{current}\n", generator())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    Constant,
    Linear,
}

impl Invariant {
    fn label(self) -> &'static str {
        match self {
            Invariant::Constant => "constant",
            Invariant::Linear => "linear",
        }
    }
}

pub fn quasimiura(order: usize, a: Invariant, as_json: bool) -> Result<Output, CliError> {
    let current = match a {
        Invariant::Constant => burgers_current(1),
        Invariant::Linear => viscous_ch_current(order),
    };
    let terms = quasi_miura(&current, order)?;
    if as_json {
        let rows: Vec<Value> = terms
            .iter()
            .map(|t| {
                json!({
                    "order": t.order,
                    "jet_form": t.jet_form.to_string(),
                    "hodograph_form": t.hodograph_form.to_string(),
                    "homogeneous_part": t.g.to_string(),
                })
            })
            .collect();
        let doc = json!({
            "generator": generator(),
            "kind": "quasi_miura",
            "invariant": a.label(),
            "current": current.to_string(),
            "terms": rows,
        });
        return Ok(Output::ok(pretty(&doc)));
    }
    let mut s = format!("{}\nquasi-Miura series for {current}\nv = u", generator());
    for t in &terms {
        write!(s, "\n  + eps^{} ({})", t.order, t.jet_form).unwrap();
    }
    s.push('\n');
    Ok(Output::ok(s))
}

/// Default sidecar path: `run.csv` becomes `run.diagnostics.csv`.
pub fn diagnostics_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.diagnostics.csv"))
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

pub fn simulate(config: &Path, out: &Path, diagnostics: Option<&Path>) -> Result<Output, CliError> {
    let text = read(config)?;
    let cfg: SimConfig<f64> =
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", config.display())))?;
    let sim = Simulator::new(cfg.clone())?;
    let run = sim.integrate();
    let fields = run.snapshots.iter().flat_map(|s| {
        run.grid
            .iter()
            .zip(s.v.iter().zip(&s.p))
            .map(move |(x, (v, p))| vec![s.t.to_string(), x.to_string(), v.to_string(), p.to_string()])
    });
    write_atomic(out, &csv_bytes(&["t", "x", "v", "P"], fields))?;
    let diag_path = diagnostics.map(Path::to_path_buf).unwrap_or_else(|| diagnostics_path(out));
    let diag = run.diagnostics.iter().map(|d| {
        vec![d.t.to_string(), d.mass.to_string(), d.max_slope.to_string(), d.osc_amp.to_string()]
    });
    write_atomic(&diag_path, &csv_bytes(&["t", "mass", "max_slope", "osc_amp"], diag))?;

    let (status, code, detail) = match run.outcome {
        Outcome::Finished => ("finished", exit::OK, json!(null)),
        Outcome::BlowUp { t_last, reason } => {
            let reason = match reason {
                BlowUpReason::Slope { max_slope, threshold } => {
                    json!({ "kind": "slope", "max_slope": max_slope, "threshold": threshold })
                }
                BlowUpReason::StepUnderflow { step } => json!({ "kind": "step-underflow", "step": step }),
                BlowUpReason::NonFinite => json!({ "kind": "non-finite" }),
            };
            ("blow-up", exit::BLOW_UP, json!({ "t_last": t_last, "reason": reason }))
        }
    };
    let summary = json!({
        "generator": generator(),
        "kind": "simulation_summary",
        "config": cfg,
        "status": status,
        "blow_up": detail,
        "steps": run.steps,
        "snapshots": run.snapshots.len(),
        "peak_max_slope": run.peak_slope(),
        "fields": out.display().to_string(),
        "diagnostics": diag_path.display().to_string(),
    });
    Ok(Output { stdout: pretty(&summary), code })
}

/// `lo:hi:n`, `n >= 2` equally spaced samples including both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64).collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:n, got `{s}`"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
        let n: usize = n.trim().parse().map_err(|e| format!("bad sample count `{n}`: {e}"))?;
        if n < 2 || !(hi > lo) {
            return Err(format!("need lo < hi and at least two samples, got `{s}`"));
        }
        Ok(GridSpec { lo, hi, n })
    }
}

pub fn pearcey(x_grid: GridSpec, t_grid: GridSpec, out: &Path) -> Result<Output, CliError> {
    let pc = Pearcey::<f64>::default();
    let mut rows = Vec::with_capacity(x_grid.n * t_grid.n);
    let (mut worst_lin, mut worst_non, mut outside) = (0.0f64, 0.0f64, 0usize);
    for &t in &t_grid.points() {
        for &x in &x_grid.points() {
            let v = pc.eval(x, t);
            let [u, ux, uxx] = pc.profile(x, t);
            let lin = linear_ode_residual(|x, t| pc.jet(x, t), x, t).relative();
            let non = nonlinear_ode_residual(|x, t| pc.profile(x, t), x, t).relative();
            let inside = pc.in_validated_box(x, t);
            if inside {
                worst_lin = worst_lin.max(lin);
                worst_non = worst_non.max(non);
            } else {
                outside += 1;
            }
            rows.push(
                [x, t, v.p, v.px, v.pxx, v.pt, u, ux, uxx, lin, non]
                    .iter()
                    .map(f64::to_string)
                    .chain([inside.to_string()])
                    .collect(),
            );
        }
    }
    let header = ["X", "T", "P", "P_X", "P_XX", "P_T", "U", "U_X", "U_XX", "linear_residual", "nonlinear_residual", "in_box"];
    write_atomic(out, &csv_bytes(&header, rows.into_iter()))?;
    let summary = json!({
        "generator": generator(),
        "kind": "pearcey_summary",
        "points": x_grid.n * t_grid.n,
        "outside_validated_box": outside,
        "max_linear_residual": worst_lin,
        "max_nonlinear_residual": worst_non,
        "out": out.display().to_string(),
    });
    Ok(Output::ok(pretty(&summary)))
}

pub fn audit(as_json: bool, out_dir: Option<&Path>) -> Result<Output, CliError> {
    let report = audit_all(&Tolerances::from_env()?);
    let json_text = report.to_json();
    let text = report.render();
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::file(dir, e))?;
        write_atomic(&dir.join("audit.json"), json_text.as_bytes())?;
        write_atomic(&dir.join("audit.txt"), text.as_bytes())?;
    }
    Ok(Output::ok(if as_json { json_text } else { text }))
}
