use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use vislaw_core::jet::reverse_lex;
use vislaw_core::miura::{
    apply_miura, change_variable, delta_operator, invert_general, is_normal, normal_form, step_linear_part,
    tilde_beta, GeneralMiura, MiuraSeq, MiuraStep,
};
use vislaw_core::{rank_compare, rat, CoeffExpr, DiffPoly, EpsCurrent, JetMonomial, Rational};

fn sym(name: &str) -> DiffPoly {
    DiffPoly::constant(CoeffExpr::free(name))
}

fn u2() -> DiffPoly {
    DiffPoly::u().pow(2)
}

fn mono(e: &[u32]) -> DiffPoly {
    DiffPoly::term(JetMonomial::new(e.to_vec()), CoeffExpr::one())
}

fn current(comps: Vec<DiffPoly>) -> EpsCurrent {
    EpsCurrent::new(comps).unwrap()
}

fn head() -> Vec<DiffPoly> {
    vec![u2(), &sym("a") * &DiffPoly::var(1)]
}

#[test]
fn order_two_step_shifts_ux_squared() {
    let mut comps = head();
    comps.push(&(&sym("b1") * &DiffPoly::var(2)) + &(&sym("b2") * &mono(&[2])));
    let omega = current(comps);
    let step = MiuraStep::new(2, &sym("beta1") * &DiffPoly::var(1)).unwrap();
    let out = apply_miura(&omega, &step, 2).unwrap();
    let expect = &(&sym("b1") * &DiffPoly::var(2)) + &(&(&sym("b2") + &sym("beta1").scale(&rat(2, 1))) * &mono(&[2]));
    assert_eq!(out.comp(2), &expect);
    assert_eq!(out.comp(0), omega.comp(0));
    assert_eq!(out.comp(1), omega.comp(1));
}

#[test]
fn order_three_step_reference_form() {
    let mut comps = head();
    comps.push(&sym("b1") * &DiffPoly::var(2));
    comps.push(
        &(&(&sym("c1") * &DiffPoly::var(3)) + &(&sym("c2") * &mono(&[1, 1]))) + &(&sym("c3") * &mono(&[3])),
    );
    let omega = current(comps);
    let beta = &(&sym("beta21") * &DiffPoly::var(2)) + &(&sym("beta22") * &mono(&[2]));
    let out = apply_miura(&omega, &MiuraStep::new(3, beta).unwrap(), 3).unwrap();
    let expect = &(&(&sym("c1") * &DiffPoly::var(3))
        + &(&(&sym("c2") + &sym("beta21").scale(&rat(6, 1))) * &mono(&[1, 1])))
        + &(&(&sym("c3") + &sym("beta22").scale(&rat(4, 1))) * &mono(&[3]));
    assert_eq!(out.comp(3), &expect);
    assert_eq!(&out.comps()[..3], &omega.comps()[..3]);
}

#[test]
fn zero_generator_is_identity() {
    let omega = vislaw_core::hierarchy::viscous_ch_current(4);
    let out = apply_miura(&omega, &MiuraStep::new(3, DiffPoly::zero()).unwrap(), 4).unwrap();
    assert_eq!(out, omega);
}

#[test]
fn step_validation() {
    assert!(MiuraStep::new(1, DiffPoly::u()).is_err());
    assert!(MiuraStep::new(3, DiffPoly::var(1)).is_err());
    let omega = vislaw_core::hierarchy::viscous_ch_current(2);
    let step = MiuraStep::new(3, DiffPoly::var(2)).unwrap();
    assert!(apply_miura(&omega, &step, 2).is_err());
    let mut seq = MiuraSeq::new(4);
    seq.push(MiuraStep::new(3, DiffPoly::var(2)).unwrap()).unwrap();
    assert!(seq.push(MiuraStep::new(2, DiffPoly::var(1)).unwrap()).is_err());
}

#[test]
fn higher_orders_agree_with_direct_substitution() {
    // For beta = u_x at k = 2 and the viscous CH current, compare with an
    // independent route: change_variable using the single step's inverse.
    let k = 5;
    let omega = vislaw_core::hierarchy::viscous_ch_current(k);
    let step = MiuraStep::new(2, &sym("g") * &DiffPoly::var(1)).unwrap();
    let a = apply_miura(&omega, &step, k).unwrap();
    let gm = invert_general(&step.forward(k), k).unwrap();
    let b = change_variable(&omega, &gm, k).unwrap();
    assert_eq!(a, b);
}

fn series(comps: Vec<DiffPoly>) -> GeneralMiura {
    GeneralMiura::new(current(comps)).unwrap()
}

#[test]
fn inverse_of_one_minus_eps_dx() {
    let k = 6;
    let mut comps = vec![DiffPoly::u(), DiffPoly::var(1).scale(&rat(-1, 1))];
    comps.resize(k + 1, DiffPoly::zero());
    let inv = invert_general(&series(comps.clone()), k).unwrap();
    let expect: Vec<DiffPoly> = (0..=k).map(DiffPoly::var).collect();
    assert_eq!(inv.series(), &current(expect));
    let gm = series(comps);
    assert_eq!(gm.compose(&inv).unwrap(), GeneralMiura::identity(k));
    assert_eq!(inv.compose(&gm).unwrap(), GeneralMiura::identity(k));
}

#[test]
fn inverse_of_second_order_shift() {
    let k = 6;
    let mut comps = vec![DiffPoly::u(), DiffPoly::zero(), DiffPoly::var(2)];
    comps.resize(k + 1, DiffPoly::zero());
    let gm = series(comps);
    let inv = invert_general(&gm, k).unwrap();
    let expect = current(vec![
        DiffPoly::u(),
        DiffPoly::zero(),
        DiffPoly::var(2).scale(&rat(-1, 1)),
        DiffPoly::zero(),
        DiffPoly::var(4),
        DiffPoly::zero(),
        DiffPoly::var(6).scale(&rat(-1, 1)),
    ]);
    assert_eq!(inv.series(), &expect);
    assert_eq!(gm.compose(&inv).unwrap(), GeneralMiura::identity(k));
    assert_eq!(invert_general(&GeneralMiura::identity(k), k).unwrap(), GeneralMiura::identity(k));
}

#[test]
fn non_invertible_leading_term_is_rejected() {
    let bad = EpsCurrent::new(vec![DiffPoly::constant(CoeffExpr::free("h")), DiffPoly::zero()]).unwrap();
    assert!(GeneralMiura::new(bad).is_err());
    let zero = EpsCurrent::new(vec![DiffPoly::zero(), DiffPoly::var(1)]).unwrap();
    assert!(GeneralMiura::new(zero).is_err());
}

#[test]
fn change_variable_identity_and_scaling() {
    let k = 2;
    let omega = vislaw_core::hierarchy::burgers_current(2);
    assert_eq!(change_variable(&omega, &GeneralMiura::identity(k), k).unwrap(), omega);
    // u = 2v turns u_t = d_x(u^3 + 3 eps u u_x + eps^2 u_xx) into
    // v_t = d_x(4 v^3 + 6 eps v v_x + eps^2 v_xx).
    let gm = series(vec![DiffPoly::u().scale(&rat(2, 1)), DiffPoly::zero(), DiffPoly::zero()]);
    let out = change_variable(&omega, &gm, k).unwrap();
    let expect = current(vec![
        DiffPoly::u().pow(3).scale(&rat(4, 1)),
        (&DiffPoly::u() * &DiffPoly::var(1)).scale(&rat(6, 1)),
        DiffPoly::var(2),
    ]);
    assert_eq!(out, expect);
}

#[test]
fn change_variable_round_trip() {
    let k = 4;
    let omega = vislaw_core::hierarchy::viscous_ch_current(k);
    let mut comps = vec![DiffPoly::u(), DiffPoly::var(1).scale(&rat(-1, 1)), (&DiffPoly::u() * &DiffPoly::var(1)).dx()];
    comps.resize(k + 1, DiffPoly::zero());
    let gm = series(comps);
    let there = change_variable(&omega, &gm, k).unwrap();
    let back = change_variable(&there, &invert_general(&gm, k).unwrap(), k).unwrap();
    assert_eq!(back, omega);
}

#[test]
fn normal_form_eliminates_ux_squared() {
    let mut comps = head();
    comps.push(&(&sym("b1") * &DiffPoly::var(2)) + &(&sym("b2") * &mono(&[2])));
    let omega = current(comps);
    let (nf, seq) = normal_form(&omega, 2).unwrap();
    assert_eq!(nf.comp(2), &(&sym("b1") * &DiffPoly::var(2)));
    assert_eq!(seq.steps().len(), 1);
    let expect_beta = &sym("b2").scale(&rat(-1, 2)) * &DiffPoly::var(1);
    assert_eq!(seq.steps()[0].beta(), &expect_beta);
}

#[test]
fn normal_input_is_a_fixed_point() {
    let omega = vislaw_core::hierarchy::viscous_ch_current(5);
    let mut comps = omega.comps().to_vec();
    comps[1] = DiffPoly::zero();
    // u u_(k) for k >= 2 is free of u_x.
    let omega = current(comps);
    let (nf, seq) = normal_form(&omega, 5).unwrap();
    assert_eq!(nf, omega);
    assert!(seq.is_empty());
}

#[test]
fn normal_form_rejects_wrong_leading_term() {
    let omega = vislaw_core::hierarchy::burgers_current(2);
    assert!(normal_form(&omega, 2).is_err());
}

fn random_rat(rng: &mut StdRng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-6..=6);
        if n != 0 {
            return rat(n, rng.gen_range(1..=4));
        }
    }
}

fn random_coeff(rng: &mut StdRng) -> CoeffExpr {
    let mut c = CoeffExpr::from_rational(random_rat(rng));
    if rng.gen_bool(0.3) {
        c = &c + &CoeffExpr::id().scale(&random_rat(rng));
    }
    c
}

pub fn random_current(rng: &mut StdRng, order: usize) -> EpsCurrent {
    let mut comps = vec![u2(), &DiffPoly::constant(random_coeff(rng)) * &DiffPoly::var(1)];
    for k in 2..=order {
        let mut p = DiffPoly::zero();
        for m in JetMonomial::all_of_degree(k as u32) {
            if rng.gen_bool(0.7) {
                p.add_term(m, random_coeff(rng));
            }
        }
        comps.push(p);
    }
    current(comps)
}

#[test]
fn random_currents_reach_normal_form() {
    let mut rng = StdRng::seed_from_u64(7);
    let k = 5;
    for i in 0..100 {
        let omega = random_current(&mut rng, k);
        let (nf, seq) = normal_form(&omega, k).unwrap();
        assert!(is_normal(&nf), "case {i}");
        for j in 2..=k {
            assert!(nf.comp(j).partial(1).is_zero());
        }
        assert_eq!(&nf.comps()[..2], &omega.comps()[..2]);
        assert_eq!(seq.apply(&omega).unwrap(), nf, "case {i}");
        if i < 10 {
            let gm = seq.to_general().unwrap();
            assert_eq!(change_variable(&omega, &gm, k).unwrap(), nf, "case {i}");
        }
    }
}

#[test]
fn step_splits_into_tilde_and_delta() {
    for m in JetMonomial::all_of_degree(5) {
        let b = DiffPoly::term(m, CoeffExpr::free("g"));
        let lhs = step_linear_part(&b);
        let rhs = &(&DiffPoly::var(1) * &tilde_beta(&b)) + &delta_operator(&b);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn delta_lowers_rank_on_random_monomials() {
    use std::cmp::Ordering::Less;
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let d = rng.gen_range(2..=9);
        let all = JetMonomial::all_of_degree(d);
        let gamma = all[rng.gen_range(0..all.len())].clone();
        let img = delta_operator(&DiffPoly::term(gamma.clone(), CoeffExpr::one()));
        let ux_gamma = gamma.times_var(1, 1);
        for (mu, _) in img.terms() {
            assert_eq!(rank_compare(mu, &ux_gamma), Less, "{mu} vs {ux_gamma}");
            assert_eq!(reverse_lex(mu, &gamma), Less, "{mu} vs {gamma}");
            if let Some(rest) = mu.div_var(1) {
                assert_eq!(rank_compare(&rest, &gamma), Less);
            }
        }
        checked += 1;
    }
}
