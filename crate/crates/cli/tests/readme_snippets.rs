use vislaw_core::classify::classify;
use vislaw_core::hierarchy::burgers_current;
use vislaw_core::involution_check;
use vislaw_numerics::Pearcey64;

#[test]
fn library_examples_run() {
    let result = classify(4).unwrap();
    assert!(!result.capitals.is_empty());
    let w1 = burgers_current(1).truncate(3);
    let w2 = burgers_current(2).truncate(3);
    assert!(involution_check(&w1, &w2, 3).unwrap().passed());
    let p = Pearcey64::default();
    let v = p.eval(0.5, -1.0);
    assert!(v.p.is_finite() && v.px.is_finite());
}
