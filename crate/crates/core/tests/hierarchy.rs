use vislaw_core::hierarchy::{
    apply_pseudo, burgers_current, negative_current, negative_current_signed, viscous_ch_current, NegativeSign,
    PseudoOp,
};
use vislaw_core::{involution_check, CoeffExpr, DiffPoly, EpsCurrent, FuncSymbol};

fn padded(c: &EpsCurrent, k: usize) -> EpsCurrent {
    c.truncate(k)
}

#[test]
fn burgers_family_commutes() {
    for n in 0..=4 {
        for m in 0..=4 {
            let k = n + m;
            let res = involution_check(&padded(&burgers_current(n), k), &padded(&burgers_current(m), k), k).unwrap();
            assert!(res.passed(), "burgers {n},{m}: {res:?}");
        }
    }
}

#[test]
fn negative_family_commutes() {
    for n in 1..=3 {
        for m in 1..=3 {
            let k = n + m;
            let res =
                involution_check(&padded(&negative_current(n), k), &padded(&negative_current(m), k), k).unwrap();
            assert!(res.passed(), "negative {n},{m}: {res:?}");
        }
    }
}

#[test]
fn viscous_ch_commutes_with_negative_flows() {
    let big = 5;
    for n in 1..=2 {
        let neg = padded(&negative_current(n), big);
        let res = involution_check(&viscous_ch_current(big), &neg, big - n).unwrap();
        assert!(res.passed(), "viscousCH x negative {n}: {res:?}");
    }
}

#[test]
fn plus_sign_negative_flow_does_not_commute_with_viscous_ch() {
    let neg = padded(&negative_current_signed(1, NegativeSign::Plus), 4);
    let res = involution_check(&viscous_ch_current(4), &neg, 4).unwrap();
    assert!(!res.passed());
}

#[test]
fn recursion_operator_on_ux_gives_viscous_ch_flow() {
    let ux = EpsCurrent::with_weight(vec![DiffPoly::var(1), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero()], 1)
        .unwrap();
    let got = apply_pseudo(&PseudoOp::recursion("c"), &ux, 3).unwrap();
    let c = CoeffExpr::symbol(FuncSymbol::constant("c"));
    // R u_x = d_x[u (1 - eps d_x)^{-1}(u + c)] = d_x(sum eps^k u u_(k)) + c u_x.
    let expect = viscous_ch_current(3).dx().add(&EpsCurrent::with_weight(
        vec![&DiffPoly::constant(c) * &DiffPoly::var(1), DiffPoly::zero(), DiffPoly::zero(), DiffPoly::zero()],
        1,
    )
    .unwrap());
    assert_eq!(got, expect);
}

#[test]
fn inverse_recursion_on_ux_gives_scaled_first_negative_flow() {
    let k = 3;
    let mut comps = vec![DiffPoly::var(1)];
    comps.resize(k + 1, DiffPoly::zero());
    let ux = EpsCurrent::with_weight(comps, 1).unwrap();
    let got = apply_pseudo(&PseudoOp::inverse_recursion("c"), &ux, k).unwrap();
    let c = CoeffExpr::symbol(FuncSymbol::constant("c"));
    let expect = padded(&negative_current(1), k).dx().scale_by(&c);
    assert_eq!(got, expect);
    let zero_branch = got.substitute_constant("c", &CoeffExpr::zero());
    assert!(zero_branch.is_zero());
}

#[test]
fn recursion_maps_negative_flows_down() {
    let k = 4;
    for n in 2..=3 {
        let flow = padded(&negative_current(n), k).dx();
        let got = apply_pseudo(&PseudoOp::recursion("c"), &flow, k).unwrap();
        let expect = padded(&negative_current(n - 1), k).dx();
        let diff = got.sub(&expect);
        // Only the integration-constant multiple c * u_x remains.
        let c = CoeffExpr::symbol(FuncSymbol::constant("c"));
        let mut comps = vec![&DiffPoly::constant(c) * &DiffPoly::var(1)];
        comps.resize(k + 1, DiffPoly::zero());
        assert_eq!(diff, EpsCurrent::with_weight(comps, 1).unwrap(), "n = {n}");
    }
}

#[test]
fn recursion_composed_with_inverse_is_identity_on_polynomial_flows() {
    let k = 4;
    let r = PseudoOp::recursion("c1");
    let rinv = PseudoOp::inverse_recursion("c2");
    let op = r.compose(&rinv);
    let flow = padded(&burgers_current(2), k).dx();
    let got = apply_pseudo(&op, &flow, k).unwrap().substitute_constant("c1", &CoeffExpr::zero()).substitute_constant("c2", &CoeffExpr::zero());
    assert_eq!(got, flow);
}

#[test]
fn evolutionary_form_of_viscous_ch() {
    use vislaw_core::hierarchy::viscous_ch_evolutionary_current;
    use vislaw_core::rat;
    let w = viscous_ch_evolutionary_current(2);
    let u2 = &DiffPoly::u() * &DiffPoly::u();
    assert_eq!(w.comp(0), &u2);
    assert_eq!(w.comp(1), &(&DiffPoly::u() * &DiffPoly::var(1)));
    let c2 = &(&DiffPoly::u() * &DiffPoly::var(2)) + &(&DiffPoly::var(1) * &DiffPoly::var(1));
    assert_eq!(w.comp(2), &c2);
    // (1 - eps d_x) applied to the flow gives d_x(w^2 - eps w w_x).
    let k = 4;
    let flow = viscous_ch_evolutionary_current(k).dx();
    let lhs = flow.sub(&flow.eps_dx());
    let mut rhs = vec![u2.dx(), (&DiffPoly::u() * &DiffPoly::var(1)).dx().scale(&rat(-1, 1))];
    rhs.resize(k + 1, DiffPoly::zero());
    assert_eq!(lhs, EpsCurrent::with_weight(rhs, 1).unwrap());
}

#[test]
fn miura_direction_audit() {
    use vislaw_core::hierarchy::audit_viscous_ch_miura;
    let audit = audit_viscous_ch_miura(5).unwrap();
    assert!(audit.stated_holds(), "{}", audit.stated);
    assert!(!audit.reversed_holds());
    let ux = DiffPoly::var(1);
    assert!(audit.reversed.comp(0).is_zero() && audit.reversed.comp(1).is_zero());
    assert_eq!(audit.reversed.comp(2), &(&ux * &ux).scale(&vislaw_core::rat(2, 1)));
    assert_eq!(audit.reversed.comp(3), &(&ux * &DiffPoly::var(2)).scale(&vislaw_core::rat(6, 1)));
}
