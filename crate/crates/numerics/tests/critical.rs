use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::gamma;
use vislaw_numerics::critical::*;

fn grid(half: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn gauss_legendre_is_exact_on_polynomials() {
    let rule = GaussLegendre::new(16);
    for k in 0..32u32 {
        let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
        let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k + 1) as f64 };
        assert!((q - exact).abs() < 1e-14, "degree {k}");
    }
}

#[test]
fn pearcey_at_the_origin() {
    let p = Pearcey::<f64>::default().eval(0.0, 0.0);
    let closed = 2f64.powf(-1.5) * gamma(0.25);
    assert!(((p.p - closed) / closed).abs() < 1e-10);
    assert!(p.px.abs() < 1e-15);
}

#[test]
fn pearcey_is_even_in_x() {
    let pc = Pearcey::<f64>::default();
    for &x in &grid(3.0, 7) {
        for &t in &grid(3.0, 7) {
            let (a, b) = (pc.eval(x, t), pc.eval(-x, t));
            assert!(((a.p - b.p) / a.p).abs() < 1e-12);
            assert!((a.px + b.px).abs() < 1e-12 * a.p);
        }
    }
}

#[test]
fn pearcey_moments_are_derivatives() {
    let pc = Pearcey::<f64>::default();
    let h = 1e-4;
    for &(x, t) in &[(0.7, -1.2), (-2.0, 2.5), (1.5, 0.3)] {
        let v = pc.eval(x, t);
        let dx = (pc.eval(x + h, t).p - pc.eval(x - h, t).p) / (2.0 * h);
        let dt = (pc.eval(x, t + h).p - pc.eval(x, t - h).p) / (2.0 * h);
        let dxx = (pc.eval(x + h, t).px - pc.eval(x - h, t).px) / (2.0 * h);
        assert!((v.px - dx).abs() < 1e-7 * v.p);
        assert!((v.pt - dt).abs() < 1e-7 * v.p);
        assert!((v.pxx - dxx).abs() < 1e-7 * v.p);
    }
}

#[test]
fn integration_by_parts_identity() {
    let pc = Pearcey::<f64>::default();
    let scale = pc.eval(1.0, 1.0).p;
    assert!(pc.identity_integral(1.0, 1.0).abs() < 1e-12 * scale);
    for &x in &grid(3.0, 5) {
        for &t in &grid(3.0, 5) {
            assert!(pc.identity_integral(x, t).abs() < 1e-11 * pc.eval(x, t).p);
        }
    }
}

#[test]
fn pearcey_solves_the_linear_equation() {
    let pc = Pearcey::<f64>::default();
    let mut worst: f64 = 0.0;
    for &x in &grid(3.0, 25) {
        for &t in &grid(3.0, 25) {
            assert!(pc.in_validated_box(x, t));
            worst = worst.max(linear_ode_residual(|x, t| pc.jet(x, t), x, t).relative());
        }
    }
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn logarithmic_derivative_solves_the_nonlinear_equation() {
    let pc = Pearcey::<f64>::default();
    let mut worst: f64 = 0.0;
    for &x in &grid(3.0, 25) {
        for &t in &grid(3.0, 25) {
            worst = worst.max(nonlinear_ode_residual(|x, t| pc.profile(x, t), x, t).relative());
        }
    }
    assert!(worst <= 1e-5, "{worst:e}");
    assert!(pc.profile(0.0, 0.0)[0].abs() < 1e-15);
    for &(x, t) in &[(1.0, 0.5), (2.5, -2.0), (0.3, 3.0)] {
        assert!((pc.profile(x, t)[0] + pc.profile(-x, t)[0]).abs() < 1e-12);
    }
}

#[test]
fn cole_hopf_consistency_constant() {
    let pc = Pearcey::<f64>::default();
    let mut ratio: f64 = 0.0;
    for &x in &grid(3.0, 13) {
        for &t in &grid(3.0, 13) {
            let lin = linear_ode_residual(|x, t| pc.jet(x, t), x, t).relative().max(1e-16);
            let non = nonlinear_ode_residual(|x, t| pc.profile(x, t), x, t).relative();
            ratio = ratio.max(non / lin);
        }
    }
    assert!(ratio.is_finite() && ratio < 1e4, "C = {ratio}");
}

#[test]
fn negative_controls() {
    let zero = |_: f64, _: f64| [0.0; 4];
    assert_eq!(linear_ode_residual(zero, 1.3, 0.4).relative(), 0.0);
    for x in [-2.0f64, 0.5, 2.0] {
        let r = linear_ode_residual(|x: f64, _| [x.exp(); 4], x, 0.0);
        assert!((r.absolute - ((1.0 - x) * x.exp()).abs()).abs() < 1e-12);
        assert!(r.relative() > 0.1);
    }
    for x in [-2.0f64, 1.0, 2.5] {
        let r = nonlinear_ode_residual(|_, _| [0.0; 3], x, 0.7);
        assert_eq!(r.absolute, x.abs());
        assert_eq!(r.relative(), 1.0);
    }
}

#[test]
fn out_of_box_points_are_flagged() {
    let pc = Pearcey::<f64>::default();
    assert!(pc.in_validated_box(3.0, -3.0));
    assert!(!pc.in_validated_box(3.5, 0.0));
    let wide = Pearcey::new(4.0, 64, 16, 10.0);
    assert!(wide.tail_bound(10.0, 10.0) < 1e-14);
    assert!(Pearcey::new(2.0, 32, 16, 10.0).tail_bound(10.0, 10.0) > 1e-14);
}

#[test]
fn pochhammer_symbol() {
    assert_eq!(pochhammer(0.5, 0), 1.0);
    assert_eq!(pochhammer(0.5, 3), 0.5 * 1.5 * 2.5);
    assert_eq!(pochhammer(1.0, 5), 120.0);
}

fn exact_0f2(alpha: (i64, i64), beta: (i64, i64), z: i64, terms: usize) -> f64 {
    let a = BigRational::new(BigInt::from(alpha.0), BigInt::from(alpha.1));
    let b = BigRational::new(BigInt::from(beta.0), BigInt::from(beta.1));
    let z = BigRational::from_integer(BigInt::from(z));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for n in 0..terms {
        sum += &term;
        let nn = BigRational::from_integer(BigInt::from(n));
        term = term * &z / ((&a + &nn) * (&b + &nn) * (&nn + BigRational::one()));
    }
    sum.to_f64().unwrap()
}

#[test]
fn hypergeometric_series() {
    assert_eq!(hyper0f2(0.5, 0.75, 0.0).unwrap(), 1.0);
    let v = hyper0f2(0.5, 0.75, 1.0).unwrap();
    let oracle = exact_0f2((1, 2), (3, 4), 1, 200);
    assert!(((v - oracle) / oracle).abs() < 1e-13);
    for (a, b, z) in [((3, 4), (5, 4), 7), ((5, 4), (3, 2), -20), ((1, 2), (3, 4), 50)] {
        let v = hyper0f2(a.0 as f64 / a.1 as f64, b.0 as f64 / b.1 as f64, z as f64).unwrap();
        let oracle = exact_0f2(a, b, z, 200);
        assert!(((v - oracle) / oracle).abs() < 1e-13, "{a:?} {b:?} {z}");
    }
    assert!(matches!(hyper0f2(0.0, 1.0, 1.0), Err(HyperError::NonPositive { .. })));
    assert!(hyper0f2(1.0, -0.5, 1.0).is_err());
}

#[test]
fn basis_series_matches_the_hypergeometric_function() {
    for term in general_solution_basis() {
        for s in [-2.5f64, -0.4, 0.0, 1.0, 3.0] {
            let direct = s.powi(term.power as i32) * hyper0f2(term.alpha, term.beta, s.powi(4) / 64.0).unwrap();
            let j = term.jet(s);
            assert!((j[0] - direct).abs() < 1e-14 * direct.abs().max(1.0));
            let h = 1e-4;
            let d = (term.jet(s + h)[2] - term.jet(s - h)[2]) / (2.0 * h);
            assert!((j[3] - d).abs() < 1e-6 * j[3].abs().max(1.0));
        }
    }
}

#[test]
fn general_solution_audit_measures_both_readings() {
    let audit = audit_general_solution(3.0, 13);
    assert_eq!(audit.rows.len(), 8);
    for i in 0..3 {
        let combined = audit.row(i, Reading::Combined).unwrap();
        assert!(combined.max_relative < 1e-12, "{combined:?}");
        let stated = audit.row(i, Reading::Stated).unwrap();
        assert!(stated.max_relative > 0.1, "{stated:?}");
    }
    for reading in [Reading::Stated, Reading::Combined] {
        let zero = audit.row(3, reading).unwrap();
        assert_eq!((zero.max_relative, zero.max_absolute), (0.0, 0.0));
    }
}

#[test]
fn catastrophe_of_cubic_fluxes() {
    let cp = find_catastrophe(|u: f64| [u * u * u, 3.0 * u * u, 6.0 * u, 6.0], (-1.0, 1.0)).unwrap();
    assert!(cp.x0.abs() < 1e-12 && cp.t0.abs() < 1e-12 && cp.u0.abs() < 1e-12 && cp.f3 == 6.0);

    let c = 0.8;
    let f = |u: f64| [u * u * u + c * u, 3.0 * u * u + c, 6.0 * u, 6.0];
    let cp = find_catastrophe(f, (-0.7, 1.3)).unwrap();
    assert!(cp.u0.abs() < 1e-14 && (cp.t0 - c / 2.0).abs() < 1e-14 && cp.x0.abs() < 1e-14);
    assert!(cp.residuals(f).iter().all(|r| r.abs() <= 1e-12));

    let p = Polynomial::<f64>::shifted_cubic(0.5, 2.0, 1.0, 0.2);
    let cp = find_catastrophe(|u| p.jet(u), (-2.0, 2.0)).unwrap();
    assert!((cp.u0 - 0.5).abs() < 1e-12 && (cp.f3 - 12.0).abs() < 1e-12);
    assert!(cp.residuals(|u| p.jet(u)).iter().all(|r| r.abs() <= 1e-12));
}

#[test]
fn non_generic_fluxes_are_rejected() {
    let square = |u: f64| [u * u, 2.0 * u, 2.0, 0.0];
    assert!(matches!(find_catastrophe(square, (-3.0, 3.0)), Err(CatastropheError::NoSignChange { .. })));
    let falling = |u: f64| [-u * u * u, -3.0 * u * u, -6.0 * u, -6.0];
    assert!(matches!(find_catastrophe(falling, (-1.0, 1.0)), Err(CatastropheError::Degenerate { .. })));
}

#[test]
fn scale_identities() {
    for (a0, f3) in [(1.0f64, 6.0f64), (0.3, 2.0), (2.5, 11.0)] {
        let s = CriticalScales::new(a0, f3);
        assert!((s.s2 - s.s1 * s.s1 / (2.0 * a0)).abs() < 1e-14);
        assert!((s.s3 - a0 / s.s1).abs() < 1e-14);
        assert_eq!((s.sigma, s.beta, s.q), (3.0, 2.0, 0.25));
        let cp = CatastrophePoint { x0: 0.4, t0: 1.0, u0: -0.2, f3 };
        let (x, t) = s.physical(&cp, 0.01, 1.3, -0.7);
        let (bx, bt) = s.rescale(&cp, 0.01, x, t);
        assert!((bx - 1.3).abs() < 1e-12 && (bt + 0.7).abs() < 1e-12);
        // The displayed inverse scalings of X and T.
        let xt = x - cp.x0 + 2.0 * cp.u0 * (t - cp.t0);
        let displayed_x = (6.0 / (a0.powi(3) * f3)).powf(0.25) * xt / 0.01f64.powf(0.75);
        let displayed_t = (24.0 / (a0 * f3)).sqrt() * (t - cp.t0) / 0.1;
        assert!((displayed_x - bx).abs() < 1e-12 && (displayed_t - bt).abs() < 1e-12);
    }
}

#[test]
fn profile_at_the_catastrophe() {
    let pc = Pearcey::<f64>::default();
    let cp = CatastrophePoint { x0: -0.3, t0: 0.5, u0: 0.5, f3: 6.0 };
    let p = critical_profile(&cp, 1.0, 0.01, cp.x0, cp.t0, &pc);
    assert!((p.u - cp.u0).abs() < 1e-15 && p.in_box);
    let far = critical_profile(&cp, 1.0, 0.01, cp.x0 + 1.0, cp.t0, &pc);
    assert!(!far.in_box);
}

#[test]
fn burgers_universality() {
    let report = universality_experiment::<f64>(&UniversalityConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert!(report.deviation_decreases(), "{:?}", report.rows);
    assert!((report.amplitude_exponent - 0.25).abs() <= 0.05, "{}", report.amplitude_exponent);
    let ratio = report.rows[0].max_deviation / report.rows[2].max_deviation;
    assert!(ratio > 1.5, "{ratio}");
}
