use burniat::config::{BurniatConfig, Variant};
use burniat::delpezzo6::{self, ExceptionalType};
use burniat::lattice::{SurfaceLattice, YClass};
use burniat::picard::{Combo, GeneratorTable, XClass};
use burniat::{CurveLabel, Letter};
use proptest::prelude::*;

fn dp6(n: i64) -> impl Strategy<Value = YClass> {
    (-n..=n, -n..=n, -n..=n, -n..=n).prop_map(|(a, b, c, d)| SurfaceLattice::new(3).class(&[a, b, c, d]).unwrap())
}

fn nef() -> impl Strategy<Value = YClass> {
    prop::array::uniform5(0i64..4).prop_map(|n| {
        let l = SurfaceLattice::new(3);
        delpezzo6::NefGenerator::ALL
            .iter()
            .zip(n)
            .fold(l.zero(), |acc, (g, k)| &acc + &(k * &g.class()))
    })
}

// hexagon of (-1)-curves, written out by hand
fn minus_one_curves() -> Vec<YClass> {
    let l = SurfaceLattice::new(3);
    [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, -1, -1], [1, -1, 0, -1], [1, -1, -1, 0]]
        .iter()
        .map(|c| l.class(c).unwrap())
        .collect()
}

fn oracle_effective(y: &YClass) -> bool {
    let cs = minus_one_curves();
    let l = SurfaceLattice::new(3);
    let d = y.dot(&(-&l.canonical_class()));
    if d < 0 {
        return false;
    }
    fn go(i: usize, left: i64, acc: &YClass, cs: &[YClass], y: &YClass) -> bool {
        if i == cs.len() - 1 {
            return &(acc + &(left * &cs[i])) == y;
        }
        (0..=left).any(|k| go(i + 1, left - k, &(acc + &(k * &cs[i])), cs, y))
    }
    go(0, d, &l.zero(), &cs, y)
}

#[test]
fn hexagon_is_the_curve_list() {
    let mut ours: Vec<Vec<i64>> = delpezzo6::boundary_classes().iter().map(|c| c.coeffs().to_vec()).collect();
    let mut hand: Vec<Vec<i64>> = minus_one_curves().iter().map(|c| c.coeffs().to_vec()).collect();
    ours.sort();
    hand.sort();
    assert_eq!(ours, hand);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn eff_matches_search(y in dp6(4)) {
        let got = delpezzo6::eff_decompose(&y).unwrap();
        prop_assert_eq!(got.is_some(), oracle_effective(&y));
        if let Some(dec) = got {
            prop_assert_eq!(dec.total(), y);
        }
    }

    #[test]
    fn nef_sums_back(y in dp6(6)) {
        if let Some(dec) = delpezzo6::nef_decompose(&y).unwrap() {
            prop_assert!(delpezzo6::is_nef(&y));
            prop_assert_eq!(dec.total(), y);
        } else {
            prop_assert!(!delpezzo6::is_nef(&y));
        }
    }

    #[test]
    fn symmetric_round_trip(y in dp6(8)) {
        let s = delpezzo6::to_symmetric(&y).unwrap();
        prop_assert_eq!(delpezzo6::from_symmetric(&s).unwrap(), y);
        prop_assert_eq!(s.d, s.pairings().iter().sum::<i64>());
    }

    #[test]
    fn classification_is_symmetric(y in nef(), g in 0usize..12) {
        let s = delpezzo6::Symmetry::all()[g];
        let a = delpezzo6::classify_exceptional(&y).unwrap();
        let b = delpezzo6::classify_exceptional(&s.apply_class(&y).unwrap()).unwrap();
        let fam = |t: ExceptionalType| match t {
            ExceptionalType::Exceptional { family, n, .. } => Some((family, n)),
            ExceptionalType::NonExceptional => None,
        };
        prop_assert_eq!(fam(a), fam(b));
        prop_assert_eq!(a.is_exceptional(), y.arithmetic_genus() <= 0);
    }
}

fn table(ksq: i64, v: Variant) -> GeneratorTable {
    GeneratorTable::build(&BurniatConfig::standard(ksq, v).unwrap()).unwrap()
}

fn combo(n_points: usize) -> impl Strategy<Value = Combo> {
    (prop::array::uniform12(-3i64..=3), prop::collection::vec(-2i64..=2, n_points))
        .prop_map(|(curves, exceptional)| Combo { curves, exceptional })
}

/// `sum u_G G' + sum 2 u_s E_s` on `Y'`, straight from the configuration.
fn pushed(cfg: &BurniatConfig, c: &Combo) -> YClass {
    let mut acc = cfg.lattice().zero();
    for l in CurveLabel::all() {
        acc = &acc + &(c.curves[l.position()] * &cfg.strict_transform(l));
    }
    for (s, e) in c.exceptional.iter().enumerate() {
        acc = &acc + &((2 * e) * &cfg.exceptional(s + 1));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn isometry_all_configs(idx in 0usize..6, seeds in (combo(4), combo(4))) {
        let cfg = BurniatConfig::all_standard()[idx].clone();
        let n = cfg.n_points();
        let t = GeneratorTable::build(&cfg).unwrap();
        let trim = |c: &Combo| Combo { curves: c.curves, exceptional: c.exceptional[..n].to_vec() };
        let (u, v) = (trim(&seeds.0), trim(&seeds.1));
        let (x, y) = (t.phi(&u), t.phi(&v));
        prop_assert!(x.congruence_holds());
        prop_assert_eq!(x.y_class().unwrap(), pushed(&cfg, &u));
        prop_assert_eq!(t.intersect_x(&x, &y).unwrap(), pushed(&cfg, &u).dot(&pushed(&cfg, &v)));
        prop_assert_eq!(&t.phi(&(&u + &v)), &(&x + &y));
        prop_assert!(t.contains(&x));
        let back = t.preimage(&x).unwrap();
        prop_assert_eq!(t.phi(&back), x);
    }

    #[test]
    fn literal_round_trip(u in combo(0)) {
        let t = table(6, Variant::Plain);
        let x = t.phi(&u);
        let again: XClass = x.to_string().parse().unwrap();
        prop_assert_eq!(&again, &x);
        let c2 = Combo::parse(&u.to_string(), 0).unwrap();
        prop_assert_eq!(c2, u);
    }

    #[test]
    fn symmetries_commute_with_phi(u in combo(0)) {
        let t = table(6, Variant::Plain);
        let x = t.phi(&u);
        prop_assert_eq!(t.swap_03(&x).unwrap(), t.phi(&u.swap_03()));
        prop_assert_eq!(t.rotate(&x).unwrap(), t.phi(&u.rotate()));
    }
}

#[test]
fn internal_torsion_vectors() {
    let t = table(6, Variant::Plain);
    for (letter, want) in [(Letter::A, "00 10 00"), (Letter::B, "00 00 10"), (Letter::C, "10 00 00")] {
        let c = Combo::parse(&format!("{letter}1-{letter}2"), 0).unwrap();
        let x = t.phi(&c);
        assert!(x.is_torsion());
        assert_eq!(x.torsion_vec().to_string(), want);
    }
}
