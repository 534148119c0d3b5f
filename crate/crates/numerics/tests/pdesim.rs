use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vislaw_numerics::pdesim::{green_function, Datum, Outcome, Scheme, SimConfig, Simulator, StepControl};

fn config(datum: Datum<f64>, scheme: Scheme, n: usize, eps: f64) -> SimConfig<f64> {
    SimConfig { n, scheme, eps, ..SimConfig::standard(datum) }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `P` for `v = mean + amp sin(b x)` with `(1 - eps d) P = v^2/2`, solved by
/// hand mode by mode.
fn p_single_mode(x: f64, mean: f64, amp: f64, b: f64, eps: f64) -> f64 {
    let (a1, a2) = (mean * amp, -amp * amp / 4.0);
    let d1 = 1.0 + eps * eps * b * b;
    let (s1, c1) = (a1 / d1, eps * b * a1 / d1);
    let b2 = 2.0 * b;
    let d2 = 1.0 + eps * eps * b2 * b2;
    let (s2, c2) = (-eps * b2 * a2 / d2, a2 / d2);
    (mean * mean + amp * amp / 2.0) / 2.0 + s1 * (b * x).sin() + c1 * (b * x).cos() + s2 * (b2 * x).sin() + c2 * (b2 * x).cos()
}

#[test]
fn constant_datum_is_stationary() {
    let cfg = config(Datum::Series { mean: 1.5, cos: vec![], sin: vec![] }, Scheme::Spectral, 64, 1.0);
    let sim = Simulator::new(cfg).unwrap();
    let v = sim.initial();
    let p = sim.solve_p(&v);
    assert!(p.iter().all(|&x| (x - 1.125).abs() < 1e-14));
    let state = sim.state(0.0, v.clone());
    assert!(max_abs(&sim.rhs(&state)) < 1e-14);
    assert!(max_abs(&sim.nonlocal_flux_rhs(&v)) < 1e-14);
}

#[test]
fn single_mode_p_matches_symbol() {
    for eps in [1.0, 0.3] {
        let cfg = config(Datum::Series { mean: 0.0, cos: vec![], sin: vec![(3, 1.0)] }, Scheme::Spectral, 128, eps);
        let sim = Simulator::new(cfg).unwrap();
        let v = sim.initial();
        let p = sim.solve_p(&v);
        let b = 2.0 * PI * 3.0 / 24.0;
        let exact = sim.grid().sample(|x| p_single_mode(x, 0.0, 1.0, b, eps));
        assert!(max_diff(&p, &exact) < 1e-13, "eps {eps}");
        assert!(sim.constraint_residual(&v, &p) < 1e-13);
    }
}

#[test]
fn auxiliary_fields_of_the_three_data() {
    let sim = Simulator::new(config(Datum::V1, Scheme::Spectral, 256, 1.0)).unwrap();
    let pi2 = PI * PI;
    let p1 = |x: f64| {
        9.0 / 4.0 - 9.0 * (PI * x / 6.0).cos() / (36.0 + pi2)
            + 3.0 * PI * (PI * x / 6.0).sin() / (2.0 * (36.0 + pi2))
            + 24.0 * PI * (PI * x / 12.0).cos() / (144.0 + pi2)
            + 288.0 * (PI * x / 12.0).sin() / (144.0 + pi2)
    };
    let p = sim.solve_p(&sim.initial());
    assert!(max_diff(&p, &sim.grid().sample(p1)) < 1e-13);

    let sim = Simulator::new(config(Datum::V3, Scheme::Spectral, 256, 1.0)).unwrap();
    let p3 = |x: f64| 3.0 * PI * (PI * x / 6.0).sin() / (2.0 * (pi2 + 36.0)) - 9.0 * (PI * x / 6.0).cos() / (pi2 + 36.0) + 0.25;
    let p = sim.solve_p(&sim.initial());
    assert!(max_diff(&p, &sim.grid().sample(p3)) < 1e-13);
}

#[test]
fn auxiliary_field_of_v2_and_its_sin_coefficient() {
    let sim = Simulator::new(config(Datum::V2, Scheme::Spectral, 256, 1.0)).unwrap();
    let p = sim.solve_p(&sim.initial());
    let oracle = sim.grid().sample(|x| p_single_mode(x, 2.0, 1.0, PI / 6.0, 1.0));
    assert!(max_diff(&p, &oracle) < 1e-13);

    let pi2 = PI * PI;
    let displayed = |x: f64, sin3: f64| {
        12.0 * PI * (PI * x / 6.0).cos() / (pi2 + 36.0) - 9.0 * (PI * x / 3.0).cos() / (4.0 * (pi2 + 9.0))
            + 72.0 * (PI * x / 6.0).sin() / (pi2 + 36.0)
            + sin3 * (PI * x / 3.0).sin()
            + 9.0 / 4.0
    };
    let corrected = sim.grid().sample(|x| displayed(x, 3.0 * PI / (4.0 * (pi2 + 9.0))));
    assert!(max_diff(&p, &corrected) < 1e-13);
    let literal = sim.grid().sample(|x| displayed(x, 3.0 * PI / (9.0 * (pi2 + 9.0))));
    assert!(max_diff(&p, &literal) > 0.05);
}

#[test]
fn single_mode_rhs_matches_hand_product() {
    let eps = 0.7;
    let cfg = config(Datum::Series { mean: 0.0, cos: vec![], sin: vec![(2, 1.0)] }, Scheme::Spectral, 128, eps);
    let sim = Simulator::new(cfg).unwrap();
    let state = sim.state(0.0, sim.initial());
    let k = 2.0 * PI * 2.0 / 24.0;
    let b = 2.0 * k;
    let d = -1.0 / (4.0 * (1.0 + eps * eps * b * b));
    let c = -eps * b * d;
    let exact = sim
        .grid()
        .sample(|x| k / 2.0 * (b * x).sin() + b * c * (b * x).cos() - b * d * (b * x).sin());
    assert!(max_diff(&sim.rhs(&state), &exact) < 1e-13);
}

#[test]
fn nonlocal_flux_form_agrees_with_auxiliary_form() {
    let sim = Simulator::new(config(Datum::V1, Scheme::Spectral, 512, 1.0)).unwrap();
    let v = sim.initial();
    let a = sim.rhs(&sim.state(0.0, v.clone()));
    let b = sim.nonlocal_flux_rhs(&v);
    assert!(max_diff(&a, &b) <= 1e-9 * max_abs(&a));

    let mut rng = StdRng::seed_from_u64(7);
    let n = 256;
    for _ in 0..20 {
        let cos: Vec<(u32, f64)> = (1..=n as u32 / 3).map(|m| (m, rng.gen_range(-1.0..1.0) / (m * m) as f64)).collect();
        let sin: Vec<(u32, f64)> = (1..=n as u32 / 3).map(|m| (m, rng.gen_range(-1.0..1.0) / (m * m) as f64)).collect();
        let eps = rng.gen_range(0.1..2.0);
        let datum = Datum::Series { mean: rng.gen_range(-1.0..1.0), cos, sin };
        let sim = Simulator::new(SimConfig { length: 10.0, ..config(datum, Scheme::Spectral, n, eps) }).unwrap();
        let v = sim.initial();
        let a = sim.rhs(&sim.state(0.0, v.clone()));
        let b = sim.nonlocal_flux_rhs(&v);
        assert!(max_diff(&a, &b) <= 1e-9 * max_abs(&a));
    }
}

#[test]
fn green_function_solves_the_auxiliary_equation() {
    let (eps, l) = (0.8f64, 24.0);
    let h = 1e-5;
    for x in [0.3, 5.0, 12.0, 23.5] {
        let g = green_function(x, eps, l);
        let gx = (green_function(x + h, eps, l) - green_function(x - h, eps, l)) / (2.0 * h);
        assert!((g - eps * gx).abs() < 1e-8);
    }
    let jump = green_function(1e-12, eps, l) - green_function(-1e-12, eps, l);
    assert!((jump + 1.0 / eps).abs() < 1e-9);
    let m = 200_000;
    let mass: f64 = (0..m).map(|j| green_function((j as f64 + 0.5) * l / m as f64, eps, l)).sum::<f64>() * l / m as f64;
    assert!((mass - 1.0).abs() < 1e-8);
}

#[test]
fn fd4_auxiliary_solve_is_exact_for_its_stencil() {
    let sim = Simulator::new(config(Datum::V1, Scheme::Fd4, 200, 1.0)).unwrap();
    let v = sim.initial();
    let p = sim.solve_p(&v);
    assert!(sim.constraint_residual(&v, &p) < 1e-13);
    let x = sim.grid().points();
    let pi2 = PI * PI;
    let exact: Vec<f64> = x
        .iter()
        .map(|&x| {
            9.0 / 4.0 - 9.0 * (PI * x / 6.0).cos() / (36.0 + pi2)
                + 3.0 * PI * (PI * x / 6.0).sin() / (2.0 * (36.0 + pi2))
                + 24.0 * PI * (PI * x / 12.0).cos() / (144.0 + pi2)
                + 288.0 * (PI * x / 12.0).sin() / (144.0 + pi2)
        })
        .collect();
    assert!(max_diff(&p, &exact) < 1e-6);
}

#[test]
fn fd4_error_is_fourth_order() {
    let err = |n: usize| {
        let sim = Simulator::new(config(Datum::V2, Scheme::Fd4, n, 1.0)).unwrap();
        let p = sim.solve_p(&sim.initial());
        let exact = sim.grid().sample(|x| p_single_mode(x, 2.0, 1.0, PI / 6.0, 1.0));
        max_diff(&p, &exact)
    };
    let ratio = err(64) / err(128);
    assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
}

#[test]
fn smooth_positive_data_damp_and_conserve_mass() {
    for datum in [Datum::V1, Datum::V2] {
        let sim = Simulator::new(SimConfig::<f64>::standard(datum.clone())).unwrap();
        let run = sim.integrate();
        assert_eq!(run.outcome, Outcome::Finished, "{datum:?}");
        let first = run.diagnostics[0];
        let last = run.diagnostics.last().unwrap();
        assert!((last.t - 12.0).abs() < 1e-9);
        let running_max = run.diagnostics.iter().fold(0.0f64, |m, d| m.max(d.osc_amp));
        assert!(last.osc_amp < 0.5 * running_max);
        for d in &run.diagnostics {
            assert!((d.mass - first.mass).abs() <= 1e-8 * first.mass.abs());
            assert!((d.m_mass - d.mass).abs() <= 1e-10 * first.mass.abs());
            assert!(d.constraint <= 1e-9);
        }
        assert!(run.peak_slope() > first.max_slope);
    }
}

#[test]
fn steepening_comparison_of_the_two_periods() {
    let peak = |d: Datum<f64>| {
        let run = Simulator::new(SimConfig::standard(d)).unwrap().integrate();
        (run.peak_slope(), run.diagnostics[0].max_slope)
    };
    let (p1, s1) = peak(Datum::V1);
    let (p2, s2) = peak(Datum::V2);
    assert!(p1 / s1 > p2 / s2);
    assert!((p1 - 0.4397).abs() < 1e-3 && (p2 - 0.6157).abs() < 1e-3, "{p1} {p2}");
}

#[test]
fn odd_datum_breaks_near_the_inflection_point() {
    let sim = Simulator::new(SimConfig::<f64>::standard(Datum::V3)).unwrap();
    let run = sim.integrate();
    let initial = run.diagnostics[0].max_slope;
    let Outcome::BlowUp { t_last, .. } = run.outcome else { panic!("no blow-up: {:?}", run.outcome) };
    assert!(t_last < 12.0);
    let early = run.diagnostics.iter().find(|d| d.max_slope > 10.0 * initial).unwrap();
    assert!(early.t < 12.0);
    let last = run.diagnostics.last().unwrap();
    assert!(last.slope_at.abs() < 1.0, "breaking at {}", last.slope_at);
    for d in &run.diagnostics {
        assert!(d.mass.abs() < 1e-10 && d.constraint <= 1e-9);
    }
}

#[test]
fn spectral_and_fd4_agree_before_steepening() {
    let run = |scheme| {
        let cfg = SimConfig {
            t_end: 2.0,
            step: StepControl::Fixed { dt: 0.005 },
            ..config(Datum::V1, scheme, 512, 1.0)
        };
        Simulator::new(cfg).unwrap().integrate()
    };
    let a = run(Scheme::Spectral);
    let b = run(Scheme::Fd4);
    for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
        assert!((sa.t - sb.t).abs() < 1e-12);
        assert!(max_diff(&sa.v, &sb.v) <= 1e-4, "t = {}", sa.t);
    }
    assert_eq!(a.snapshots.len(), 5);
}

#[test]
fn resolution_convergence() {
    let end = |n: usize, scheme| {
        let cfg = SimConfig { t_end: 2.0, step: StepControl::Fixed { dt: 0.005 }, ..config(Datum::V1, scheme, n, 1.0) };
        let run = Simulator::new(cfg).unwrap().integrate();
        let s = run.snapshots.last().unwrap();
        (run.grid.clone(), s.v.clone())
    };
    let (_, fine) = end(1024, Scheme::Spectral);
    let err = |n: usize, scheme| {
        let (_, v) = end(n, scheme);
        let stride = 1024 / n;
        v.iter().enumerate().fold(0.0f64, |m, (j, x)| m.max((x - fine[j * stride]).abs()))
    };
    let (e64, e128, e256) = (err(64, Scheme::Fd4), err(128, Scheme::Fd4), err(256, Scheme::Fd4));
    assert!(e64 / e128 > 10.0 && e128 / e256 > 10.0);
    let spectral: Vec<f64> = [32, 64, 128].iter().map(|&n| err(n, Scheme::Spectral)).collect();
    assert!(spectral[0] > 100.0 * spectral[1] && spectral[1] > 100.0 * spectral[2]);
    assert!(spectral[2] < 1e-9);
}

#[test]
fn adaptive_and_fixed_steps_agree() {
    let base = config(Datum::V2, Scheme::Spectral, 128, 1.0);
    let a = Simulator::new(SimConfig { t_end: 3.0, ..base.clone() }).unwrap().integrate();
    let b = Simulator::new(SimConfig { t_end: 3.0, step: StepControl::Fixed { dt: 0.002 }, ..base }).unwrap().integrate();
    let (sa, sb) = (a.snapshots.last().unwrap(), b.snapshots.last().unwrap());
    assert!(max_diff(&sa.v, &sb.v) < 1e-7);
}

#[test]
fn runs_are_deterministic() {
    let cfg = SimConfig { t_end: 1.0, ..config(Datum::V3, Scheme::Spectral, 128, 1.0) };
    let a = Simulator::new(cfg.clone()).unwrap().integrate();
    let b = Simulator::new(cfg).unwrap().integrate();
    assert_eq!(a.diagnostics, b.diagnostics);
    assert_eq!(a.snapshots, b.snapshots);
}

#[test]
fn config_validation_and_json_form() {
    let ok = SimConfig::standard(Datum::V1);
    assert!(ok.validate().is_ok());
    assert!(SimConfig { n: 8, ..ok.clone() }.validate().is_err());
    assert!(SimConfig { n: 300, ..ok.clone() }.validate().is_err());
    assert!(SimConfig { n: 300, scheme: Scheme::Fd4, ..ok.clone() }.validate().is_ok());
    assert!(SimConfig { eps: 0.0, ..ok.clone() }.validate().is_err());
    assert!(SimConfig { length: 30.0, ..ok.clone() }.validate().is_err());
    assert!(SimConfig { length: 48.0, ..ok.clone() }.validate().is_ok());

    let text = serde_json::to_string(&ok).unwrap();
    let back: SimConfig<f64> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, ok);
    let hand = r#"{"length": 24, "n": 64, "eps": 1, "t_end": 1, "output_every": 0.5,
        "step": {"mode": "fixed", "dt": 0.01}, "scheme": "fd4",
        "datum": {"kind": "series", "mean": 2, "sin": [[1, 1.0]]}}"#;
    let cfg: SimConfig<f64> = serde_json::from_str(hand).unwrap();
    assert_eq!(cfg.blowup_factor, 50.0);
    assert_eq!(cfg.min_step, 1e-10);
    assert!((cfg.datum.eval(6.0, 24.0) - 3.0).abs() < 1e-14);
}

#[test]
fn single_precision_runs() {
    let strict = SimConfig::<f32> { n: 64, t_end: 1.0, ..SimConfig::standard(Datum::V1) };
    assert!(strict.validate().is_err());
    let cfg = SimConfig { step: StepControl::Adaptive { dt: 0.01, tol: 1e-4 }, ..strict };
    let run = Simulator::new(cfg).unwrap().integrate();
    assert_eq!(run.outcome, Outcome::Finished);
    let d = run.diagnostics.last().unwrap();
    assert!((d.mass - 48.0).abs() < 1e-3);
}
