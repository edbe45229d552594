//! The semistable central fibre `X0`: reducible boundary curves and their
//! norm maps, the restriction map `phi0`, and the exceptional-collection
//! check for `L1, ..., L6` on smooth and degenerate fibres.
//!
//! Downstairs `X0` has components `X' = Bl_3 P^2`, `X'' = Bl_2 P^2` and
//! `X''' = P^1 x P^1`. The three boundary curves `B0`, `B3`, `C3` break into
//! an elliptic and a rational component meeting at a node; `A0`, `A3`, `C0`
//! stay irreducible. The cover's restriction table is the same as on a
//! smooth fibre, so `phi0` is `phi`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::effective::{Engine, FiberKind, ReductionTrace, Verdict};
use crate::error::Result;
use crate::labels::{CurveLabel, Letter};
use crate::picard::{BoundaryBlock, Combo, XClass};
use crate::torsion::Torsion2;

/// A boundary curve split into `elliptic + rational`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducibleBoundary {
    pub label: CurveLabel,
    /// Self-intersections of the elliptic and rational components on
    /// their own surface components.
    pub self_intersections: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberContext {
    pub kind: FiberKind,
    pub components: Vec<&'static str>,
    pub reducible: Vec<ReducibleBoundary>,
    pub irreducible: Vec<CurveLabel>,
    /// `K` is nef but not ample on the degenerate fibre.
    pub canonical_nef_not_ample: bool,
}

impl FiberContext {
    pub fn new(kind: FiberKind) -> Self {
        let l = |letter, i| CurveLabel::new(letter, i);
        match kind {
            FiberKind::Smooth => FiberContext {
                kind,
                components: vec!["X"],
                reducible: Vec::new(),
                irreducible: crate::labels::BOUNDARY.to_vec(),
                canonical_nef_not_ample: false,
            },
            FiberKind::Degenerate => FiberContext {
                kind,
                components: vec!["X'", "X''", "X'''"],
                reducible: [l(Letter::B, 0), l(Letter::B, 3), l(Letter::C, 3)]
                    .into_iter()
                    .map(|label| ReducibleBoundary {
                        label,
                        self_intersections: (0, -1),
                    })
                    .collect(),
                irreducible: vec![l(Letter::A, 0), l(Letter::A, 3), l(Letter::C, 0)],
                canonical_nef_not_ample: true,
            },
        }
    }
}

/// A marked point of the elliptic component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EllipticPoint {
    /// One of `P00, P10, P01, P11`.
    Torsion(Torsion2),
    Node,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Elliptic(EllipticPoint),
    /// A point of the rational component, by index.
    Rational(u32),
}

/// A line bundle on `E + R` given as a formal point sum; its class in
/// `Pic^0(E) + Z^2` is read off from the two parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReducibleCurveBundle {
    pub points: BTreeMap<CurvePoint, i64>,
}

impl ReducibleCurveBundle {
    pub fn from_points(points: &[(CurvePoint, i64)]) -> Self {
        let mut b = ReducibleCurveBundle::default();
        for &(p, n) in points {
            *b.points.entry(p).or_insert(0) += n;
        }
        b.points.retain(|_, n| *n != 0);
        b
    }

    /// Degrees on the elliptic and rational components.
    pub fn multidegree(&self) -> (i64, i64) {
        let mut out = (0, 0);
        for (p, n) in &self.points {
            match p {
                CurvePoint::Elliptic(_) => out.0 += n,
                CurvePoint::Rational(_) => out.1 += n,
            }
        }
        out
    }

    pub fn add(&self, o: &ReducibleCurveBundle) -> ReducibleCurveBundle {
        let all: Vec<(CurvePoint, i64)> = self.points.iter().chain(&o.points).map(|(p, n)| (*p, *n)).collect();
        ReducibleCurveBundle::from_points(&all)
    }
}

/// A formal point sum on the elliptic component.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EllipticDivisor {
    pub points: BTreeMap<EllipticPoint, i64>,
}

impl EllipticDivisor {
    pub fn degree(&self) -> i64 {
        self.points.values().sum()
    }

    /// `r P00 + t`, given where the node sits as a 2-torsion point.
    pub fn block(&self, node: Torsion2) -> BoundaryBlock {
        let mut t = Torsion2::ZERO;
        for (p, n) in &self.points {
            let at = match p {
                EllipticPoint::Torsion(x) => *x,
                EllipticPoint::Node => node,
            };
            if n % 2 != 0 {
                t = t + at;
            }
        }
        BoundaryBlock::new(self.degree(), t)
    }

    pub fn add(&self, o: &EllipticDivisor) -> EllipticDivisor {
        let mut out = self.clone();
        for (p, n) in &o.points {
            *out.points.entry(*p).or_insert(0) += n;
        }
        out.points.retain(|_, n| *n != 0);
        out
    }
}

/// The norm map collapsing the rational component to the node.
pub fn norm_pushforward(b: &ReducibleCurveBundle) -> EllipticDivisor {
    let mut out = EllipticDivisor::default();
    for (p, n) in &b.points {
        let q = match p {
            CurvePoint::Elliptic(e) => *e,
            CurvePoint::Rational(_) => EllipticPoint::Node,
        };
        *out.points.entry(q).or_insert(0) += n;
    }
    out.points.retain(|_, n| *n != 0);
    out
}

/// Which form of `L2` to use. `Original` is `A0+B3+C3+C2-A1`, which has
/// `chi(L2) = -1`; `Corrected` swaps the torsion term for `A2-A1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CollectionVariant {
    #[default]
    Original,
    Corrected,
}

impl fmt::Display for CollectionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollectionVariant::Original => "original",
            CollectionVariant::Corrected => "corrected",
        })
    }
}

impl std::str::FromStr for CollectionVariant {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(CollectionVariant::Original),
            "corrected" => Ok(CollectionVariant::Corrected),
            _ => Err(crate::error::Error::Parse(format!("collection variant {s:?}"))),
        }
    }
}

/// The six bundles `L1, ..., L6` as curve combinations.
pub fn collection_combos() -> [Combo; 6] {
    collection_combos_for(CollectionVariant::Original)
}

pub fn collection_combos_for(variant: CollectionVariant) -> [Combo; 6] {
    let l2 = match variant {
        CollectionVariant::Original => "A0+B3+C3+C2-A1",
        CollectionVariant::Corrected => "A0+B3+C3+A2-A1",
    };
    [
        "A3+B0+C0+A1-A2",
        l2,
        "C2+A2-C0-A3",
        "B2+C2-B0-C3",
        "A2+B2-A0-B3",
        "0",
    ]
    .map(|s| Combo::parse(s, 0).expect("fixed combination"))
}

/// Restriction data on `X0`: identical to the smooth table.
pub fn phi0(engine: &Engine, combo: &Combo) -> XClass {
    engine.table().phi(combo)
}

pub fn reduce_degenerate(engine: &Engine, x: &XClass) -> Result<(XClass, ReductionTrace)> {
    engine.minimal_form(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRow {
    pub i: usize,
    pub j: usize,
    pub class: XClass,
    pub chi: i64,
    pub forward: Verdict,
    pub serre: Verdict,
}

impl PairRow {
    pub fn passed(&self) -> bool {
        if self.i == self.j {
            // Hom(L, L) = C: chi = 1 and no H^2
            self.chi == 1 && self.serre.is_non_effective()
        } else {
            self.chi == 0 && self.forward.is_non_effective() && self.serre.is_non_effective()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub kind: FiberKind,
    pub variant: CollectionVariant,
    pub pairs: Vec<PairRow>,
    pub selfs: Vec<PairRow>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().chain(&self.selfs).all(|r| r.passed())
    }

    pub fn failures(&self) -> Vec<&PairRow> {
        self.pairs.iter().chain(&self.selfs).filter(|r| !r.passed()).collect()
    }
}

impl fmt::Display for PairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# burniat-exc 1 fiber={} collection={}", self.kind, self.variant)?;
        writeln!(f, "i\tj\tchi\th0\th0-serre\tverdict")?;
        for r in self.pairs.iter().chain(&self.selfs) {
            let fwd = if r.i == r.j { "-".to_string() } else { r.forward.evidence() };
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.i,
                r.j,
                r.chi,
                fwd,
                r.serre.evidence(),
                if r.passed() { "pass" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// `chi(Li - Lj) = 0`, `h0(Li - Lj) = 0`, `h0(K - Li + Lj) = 0` for
/// `i < j`, and `chi(0) = 1`, `h0(K) = 0` for each `i`.
pub fn exceptional_collection_check(engine: &Engine) -> Result<PairReport> {
    exceptional_collection_check_with(engine, CollectionVariant::Original)
}

pub fn exceptional_collection_check_with(engine: &Engine, variant: CollectionVariant) -> Result<PairReport> {
    let ls = collection_combos_for(variant).map(|c| phi0(engine, &c));
    let k = engine.canonical();
    let mut jobs: Vec<(usize, usize)> = Vec::new();
    for i in 0..6 {
        for j in i + 1..6 {
            jobs.push((i, j));
        }
    }
    jobs.extend((0..6).map(|i| (i, i)));
    let rows = jobs
        .par_iter()
        .map(|&(i, j)| {
            let d = &ls[i] - &ls[j];
            Ok(PairRow {
                i: i + 1,
                j: j + 1,
                chi: engine.chi(&d)?,
                forward: engine.prove_non_effective(&d)?,
                serre: engine.prove_non_effective(&(&k - &d))?,
                class: d,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (pairs, selfs) = rows.into_iter().partition(|r| r.i != r.j);
    Ok(PairReport {
        kind: engine.kind(),
        variant,
        pairs,
        selfs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: EllipticPoint, n: i64) -> (CurvePoint, i64) {
        (CurvePoint::Elliptic(p), n)
    }

    #[test]
    fn norm_examples() {
        let on_e = ReducibleCurveBundle::from_points(&[e(EllipticPoint::Torsion(Torsion2::T10), 1)]);
        assert_eq!(norm_pushforward(&on_e).points, BTreeMap::from([(EllipticPoint::Torsion(Torsion2::T10), 1)]));
        let q = ReducibleCurveBundle::from_points(&[(CurvePoint::Rational(0), 1)]);
        assert_eq!(norm_pushforward(&q).points, BTreeMap::from([(EllipticPoint::Node, 1)]));
        let b = ReducibleCurveBundle::from_points(&[
            e(EllipticPoint::Torsion(Torsion2::ZERO), 2),
            (CurvePoint::Rational(0), 1),
            (CurvePoint::Rational(1), 2),
        ]);
        assert_eq!(b.multidegree(), (2, 3));
        assert_eq!(norm_pushforward(&b).degree(), 5);
        let blk = norm_pushforward(&b).block(Torsion2::T01);
        assert_eq!(blk, BoundaryBlock::new(5, Torsion2::T01));
    }

    #[test]
    fn contexts() {
        let c = FiberContext::new(FiberKind::Degenerate);
        assert_eq!(c.reducible.len(), 3);
        assert_eq!(c.irreducible.len(), 3);
        assert!(c.canonical_nef_not_ample);
        assert_eq!(c.reducible[2].self_intersections, (0, -1));
    }

    #[test]
    fn l3_example() {
        let engine = Engine::with_depth(FiberKind::Smooth, 0).unwrap();
        let l3 = phi0(&engine, &collection_combos()[2]);
        assert_eq!(l3.to_string(), "(2; 1 11; 0 01; 0 00)");
        assert_eq!(engine.chi(&l3).unwrap(), 0);
        assert!(phi0(&engine, &collection_combos()[5]).is_zero());
    }

    #[test]
    fn original_l2_has_chi_minus_one() {
        let engine = Engine::with_depth(FiberKind::Smooth, 0).unwrap();
        let original = phi0(&engine, &collection_combos()[1]);
        assert_eq!(engine.chi(&original).unwrap(), -1);
        let fixed = phi0(&engine, &collection_combos_for(CollectionVariant::Corrected)[1]);
        assert_eq!(engine.chi(&fixed).unwrap(), 0);
    }
}
