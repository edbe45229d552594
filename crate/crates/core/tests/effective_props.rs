use std::sync::OnceLock;

use burniat::effective::{Engine, FiberKind, Verdict};
use burniat::picard::{Combo, Generator, XClass};
use burniat::CurveLabel;
use proptest::prelude::*;

fn table_engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::with_depth(FiberKind::Smooth, 8).unwrap())
}

fn search_engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::with_depth(FiberKind::Smooth, 0).unwrap())
}

fn degenerate() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::with_depth(FiberKind::Degenerate, 8).unwrap())
}

fn class(lo: i64, hi: i64) -> impl Strategy<Value = XClass> {
    prop::array::uniform12(lo..=hi).prop_map(|curves| {
        table_engine().table().phi(&Combo {
            curves,
            exceptional: vec![],
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn table_agrees_with_search(x in class(-1, 1)) {
        prop_assume!(x.d <= 6);
        let a = table_engine().s_membership(&x);
        let b = search_engine().s_membership(&x);
        prop_assert_eq!(a.is_some(), b.is_some(), "{}", x);
        for c in [a, b].into_iter().flatten() {
            c.validate(table_engine().table(), &x).unwrap();
        }
    }

    #[test]
    fn traces_revalidate(x in class(-2, 2)) {
        let e = table_engine();
        let (r, trace) = e.minimal_form(&x).unwrap();
        trace.validate(e.table()).unwrap();
        prop_assert_eq!(trace.steps.len() as i64, x.d - r.d);
        prop_assert!(r.d < 0 || e.is_minimal(&r).unwrap());
        let v = e.classify(&x).unwrap();
        e.validate_verdict(&x, &v).unwrap();
    }

    #[test]
    fn monotone(x in class(0, 1), g in 0usize..12) {
        let e = table_engine();
        prop_assume!(x.d < 8);
        if e.s_membership(&x).is_some() {
            let y = &x + &e.table().phi_generator(Generator::Curve(CurveLabel::all()[g]));
            prop_assert!(e.s_membership(&y).is_some());
        }
    }

    #[test]
    fn nonnegative_combos_are_in_s(curves in prop::array::uniform12(0i64..=1)) {
        let e = table_engine();
        let x = e.table().phi(&Combo { curves, exceptional: vec![] });
        prop_assume!(x.d <= 8);
        let v = e.classify(&x).unwrap();
        prop_assert!(v.is_in_s(), "{} -> {}", x, v);
    }

    #[test]
    fn contexts_agree(x in class(-1, 1)) {
        let (s, d) = (table_engine(), degenerate());
        prop_assert_eq!(s.chi(&x).unwrap(), d.chi(&x).unwrap());
        let (vs, vd) = (s.classify(&x).unwrap(), d.classify(&x).unwrap());
        prop_assert_eq!(vs.tag(), vd.tag());
    }
}

#[test]
fn trusted_never_certified() {
    for e in [table_engine(), degenerate()] {
        for t in e.trusted() {
            assert!(e.s_membership(&t.class).is_none(), "{}", t.id);
            let v = e.classify(&t.class).unwrap();
            assert!(v.is_non_effective(), "{} -> {v}", t.id);
        }
    }
}

#[test]
fn scan_is_deterministic() {
    let e = table_engine();
    let a = e.scan(5).unwrap().to_structured();
    let b = e.scan(5).unwrap().to_structured();
    assert_eq!(a, b);
    assert!(a.starts_with("# burniat-scan 1 fiber=smooth max_degree=5\n"));
}

#[test]
fn degenerate_tags() {
    let e = degenerate();
    let x: XClass = "(2; -2 00; 0 00; 0 00)".parse().unwrap();
    let (_, trace) = e.minimal_form(&x).unwrap();
    assert_eq!(trace.to_string(), "A0:neg0,A0:neg0");
    let corner: XClass = "(3; 1 10; 1 10; 1 10)".parse().unwrap();
    match e.classify(&corner).unwrap() {
        Verdict::NonEffective { .. } => {}
        v => panic!("{v}"),
    }
    let below: XClass = "(-1; 1 00; 0 00; 0 00)".parse().unwrap();
    assert!(e.prove_non_effective(&below).unwrap().is_non_effective());
}

#[test]
fn step3_examples() {
    let e = table_engine();
    let k = e.canonical();
    assert!(!e.classify(&k).unwrap().is_in_s());
    let c1 = e.table().phi(&Combo::parse("C1-C2", 0).unwrap());
    assert!(e.classify(&(&k + &c1)).unwrap().is_in_s());
    let a0 = e.table().phi_generator(Generator::Curve("A0".parse().unwrap()));
    assert!(e.classify(&(&k + &a0)).unwrap().is_in_s());
}
