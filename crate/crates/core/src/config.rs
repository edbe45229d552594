//! The Burniat branch configurations on `Y = Bl_3 P^2` and its blowups
//! `Y' -> Y` at triple points of internal curves.
//!
//! Curve classes on `Y` (basis `h, e1, e2, e3`):
//!
//! | curve | class | | curve | class |
//! |-------|-------|-|-------|-------|
//! | A0 | e1 | | A3 | h - e2 - e3 |
//! | B0 | e2 | | B3 | h - e1 - e3 |
//! | C0 | e3 | | C3 | h - e1 - e2 |
//! | A1, A2 | h - e2 | | B1, B2 | h - e3 |
//! | C1, C2 | h - e1 | | | |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::labels::{CurveLabel, Letter, BOUNDARY};
use crate::lattice::{GroupIndex, MixedElement, MixedGroup, SurfaceLattice, YClass};
use crate::torsion::{Torsion2, TorsionVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveRole {
    /// A (-1)-curve on `Y`, elliptic upstairs.
    Boundary,
    /// A 0-curve on `Y`, a fibre of one of the rulings.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: CurveLabel,
    pub class: YClass,
    pub role: CurveRole,
}

/// Class of a curve on `Y`.
pub fn y_class(label: CurveLabel) -> YClass {
    let l = SurfaceLattice::new(3);
    let (h, e1, e2, e3) = (l.h(), l.e(1), l.e(2), l.e(3));
    match (label.letter, label.index) {
        (Letter::A, 0) => e1,
        (Letter::B, 0) => e2,
        (Letter::C, 0) => e3,
        (Letter::A, 3) => &(&h - &e2) - &e3,
        (Letter::B, 3) => &(&h - &e1) - &e3,
        (Letter::C, 3) => &(&h - &e1) - &e2,
        (Letter::A, _) => &h - &e2,
        (Letter::B, _) => &h - &e3,
        (Letter::C, _) => &h - &e1,
    }
}

pub fn curve_record(label: CurveLabel) -> CurveRecord {
    CurveRecord {
        label,
        class: y_class(label),
        role: if label.is_boundary() {
            CurveRole::Boundary
        } else {
            CurveRole::Internal
        },
    }
}

/// Label of the point where `other` meets the boundary curve `boundary`,
/// as an element of `boundary[2]` with origin `P00`. `None` if the pair is
/// not one of the four marked intersections.
///
/// On `A0`: `P00 = B3`, `P10 = C3`, `P01 = C1`, `P11 = C2`; on `A3` the roles
/// of `0` and `3` are exchanged. `B` and `C` follow cyclically.
pub fn meeting_label(boundary: CurveLabel, other: CurveLabel) -> Option<Torsion2> {
    assert!(boundary.is_boundary());
    let opposite = 3 - boundary.index;
    let next = boundary.letter.next();
    let prev = boundary.letter.prev();
    let table = [
        (CurveLabel::new(next, opposite), Torsion2::ZERO),
        (CurveLabel::new(prev, opposite), Torsion2::T10),
        (CurveLabel::new(prev, 1), Torsion2::T01),
        (CurveLabel::new(prev, 2), Torsion2::T11),
    ];
    table.iter().find(|(l, _)| *l == other).map(|(_, t)| *t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Nodal,
    NonNodal,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Nodal => "nodal",
            Variant::NonNodal => "non-nodal",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plain" => Ok(Variant::Plain),
            "nodal" => Ok(Variant::Nodal),
            "non-nodal" | "nonnodal" => Ok(Variant::NonNodal),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

/// A common point of `A_i, B_j, C_k` with `i, j, k` in `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointTriple {
    pub a: u8,
    pub b: u8,
    pub c: u8,
}

impl PointTriple {
    pub fn new(a: u8, b: u8, c: u8) -> Result<Self> {
        if [a, b, c].iter().any(|&i| i != 1 && i != 2) {
            return Err(Error::InvalidBuildingData(format!(
                "point triple indices must be 1 or 2, got ({a},{b},{c})"
            )));
        }
        Ok(PointTriple { a, b, c })
    }

    pub fn index_of(&self, letter: Letter) -> u8 {
        match letter {
            Letter::A => self.a,
            Letter::B => self.b,
            Letter::C => self.c,
        }
    }

    pub fn lies_on(&self, label: CurveLabel) -> bool {
        label.is_internal() && self.index_of(label.letter) == label.index
    }

    /// `vec P = vec A_i + vec B_j + vec C_k`.
    pub fn torsion_vector(&self) -> TorsionVec {
        TorsionVec::internal(Letter::A, self.a)
            + TorsionVec::internal(Letter::B, self.b)
            + TorsionVec::internal(Letter::C, self.c)
    }
}

impl fmt::Display for PointTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{}B{}C{}", self.a, self.b, self.c)
    }
}

impl FromStr for PointTriple {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let b = s.trim().as_bytes();
        let bad = || Error::Parse(format!("bad point triple {s:?}"));
        if b.len() != 6 || b[0] != b'A' || b[2] != b'B' || b[4] != b'C' {
            return Err(bad());
        }
        let digit = |c: u8| c.checked_sub(b'0').ok_or_else(bad);
        PointTriple::new(digit(b[1])?, digit(b[3])?, digit(b[5])?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurniatConfig {
    pub ksq: i64,
    pub variant: Variant,
    pub points: Vec<PointTriple>,
    /// Curves present in the branch locus, in coefficient order. Standard
    /// configurations carry all twelve.
    pub curves: Vec<CurveLabel>,
}

impl BurniatConfig {
    pub fn standard(ksq: i64, variant: Variant) -> Result<Self> {
        let p = |a, b, c| PointTriple { a, b, c };
        let points = match (ksq, variant) {
            (6, Variant::Plain) => vec![],
            (5, Variant::Plain) => vec![p(1, 1, 1)],
            (4, Variant::Nodal) => vec![p(1, 1, 1), p(1, 2, 2)],
            (4, Variant::NonNodal) => vec![p(1, 1, 1), p(2, 2, 2)],
            (3, Variant::Plain) => vec![p(1, 1, 2), p(1, 2, 1), p(2, 1, 1)],
            (2, Variant::Plain) => vec![p(1, 1, 1), p(1, 2, 2), p(2, 1, 2), p(2, 2, 1)],
            _ => {
                return Err(Error::UnknownConfig(format!(
                    "no standard configuration for K^2={ksq}, {variant}"
                )))
            }
        };
        Ok(BurniatConfig {
            ksq,
            variant,
            points,
            curves: CurveLabel::all().to_vec(),
        })
    }

    /// The six standard cases, in the order `6, 5, 4-nodal, 4-non-nodal, 3, 2`.
    pub fn all_standard() -> Vec<BurniatConfig> {
        [
            (6, Variant::Plain),
            (5, Variant::Plain),
            (4, Variant::Nodal),
            (4, Variant::NonNodal),
            (3, Variant::Plain),
            (2, Variant::Plain),
        ]
        .iter()
        .map(|&(k, v)| BurniatConfig::standard(k, v).expect("standard case"))
        .collect()
    }

    pub fn name(&self) -> String {
        match self.variant {
            Variant::Plain => format!("K2={}", self.ksq),
            v => format!("K2={}-{v}", self.ksq),
        }
    }

    /// Number of blown-up points.
    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Lattice of `Y'`: basis `h, e1, e2, e3, E_1, ..., E_n`.
    pub fn lattice(&self) -> SurfaceLattice {
        SurfaceLattice::new(3 + self.n_points())
    }

    /// `E_s`, 1-based.
    pub fn exceptional(&self, s: usize) -> YClass {
        self.lattice().e(3 + s)
    }

    pub fn has_curve(&self, label: CurveLabel) -> bool {
        self.curves.contains(&label)
    }

    /// Indices (1-based) of the points lying on `label`.
    pub fn points_on(&self, label: CurveLabel) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.lies_on(label))
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Strict transform on `Y'`.
    pub fn strict_transform(&self, label: CurveLabel) -> YClass {
        let mut c = y_class(label).pullback(self.n_points());
        for s in self.points_on(label) {
            c = &c - &self.exceptional(s);
        }
        c
    }

    pub fn branch_divisor(&self, letter: Letter) -> YClass {
        self.curves
            .iter()
            .filter(|l| l.letter == letter)
            .fold(self.lattice().zero(), |acc, &l| &acc + &self.strict_transform(l))
    }

    pub fn canonical_class(&self) -> YClass {
        self.lattice().canonical_class()
    }

    /// `L_1 = (B + C)/2`, `L_2 = (C + A)/2`, `L_3 = (A + B)/2` in `Pic Y'`,
    /// checked against the fundamental relations.
    pub fn validate_building_data(&self) -> Result<[YClass; 3]> {
        let branch: Vec<YClass> = Letter::ALL.iter().map(|&l| self.branch_divisor(l)).collect();
        let mut ls = Vec::with_capacity(3);
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let sum = &branch[j] + &branch[k];
            if sum.coeffs().iter().any(|c| c % 2 != 0) {
                return Err(Error::InvalidBuildingData(format!(
                    "{} + {} = {sum} is not divisible by 2",
                    Letter::from_index(j),
                    Letter::from_index(k)
                )));
            }
            let half: Vec<i64> = sum.coeffs().iter().map(|c| c / 2).collect();
            ls.push(self.lattice().class(&half)?);
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            if &ls[j] + &ls[k] != &ls[i] + &branch[i] {
                return Err(Error::InvalidBuildingData(format!(
                    "fundamental relation L{} + L{} = L{} + {} fails",
                    j + 1,
                    k + 1,
                    i + 1,
                    Letter::from_index(i)
                )));
            }
        }
        let [a, b, c]: [YClass; 3] = ls.try_into().expect("three classes");
        Ok([a, b, c])
    }

    /// `A' + B' + C' = -3 K_{Y'}`.
    pub fn ramification_is_anticanonical(&self) -> bool {
        let r = Letter::ALL
            .iter()
            .fold(self.lattice().zero(), |acc, &l| &acc + &self.branch_divisor(l));
        r == -3 * &self.canonical_class()
    }

    /// Strict transforms of internal curves through exactly two of the
    /// points, paired with their labels.
    pub fn minus_two_curves(&self) -> Vec<(CurveLabel, YClass)> {
        self.curves
            .iter()
            .filter(|l| l.is_internal() && self.points_on(**l).len() == 2)
            .map(|&l| (l, self.strict_transform(l)))
            .collect()
    }

    pub fn is_canonical_ample(&self) -> bool {
        self.minus_two_curves().is_empty()
    }

    /// Index in `Pic Y'` of the span of the strict transforms of the
    /// branch curves.
    pub fn ramification_span_index(&self) -> Result<GroupIndex> {
        let rank = self.lattice().rank();
        let gens: Vec<MixedElement> = self
            .curves
            .iter()
            .map(|&l| MixedElement::new(self.strict_transform(l).coeffs().to_vec(), vec![]))
            .collect();
        MixedGroup::new(rank, 0).subgroup_index(&gens)
    }

    /// Pairwise intersection numbers of the twelve curves on `Y`.
    pub fn incidence_matrix() -> [[i64; 12]; 12] {
        let mut m = [[0; 12]; 12];
        let labels = CurveLabel::all();
        for (i, a) in labels.iter().enumerate() {
            for (j, b) in labels.iter().enumerate() {
                m[i][j] = y_class(*a).dot(&y_class(*b));
            }
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("ksq = {}\n", self.ksq));
        out.push_str(&format!("variant = {}\n", self.variant));
        let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("points = {}\n", pts.join(", ")));
        let omitted: Vec<String> = CurveLabel::all()
            .iter()
            .filter(|l| !self.has_curve(**l))
            .map(|l| l.to_string())
            .collect();
        if !omitted.is_empty() {
            out.push_str(&format!("omit = {}\n", omitted.join(", ")));
        }
        out
    }

    /// Parse the `key = value` format written by [`BurniatConfig::to_text`].
    /// Keys: `ksq`, `variant`, `points`, `omit`; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut ksq = None;
        let mut variant = Variant::Plain;
        let mut points = Vec::new();
        let mut omitted = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key = value", lineno + 1))
            })?;
            let value = value.trim();
            match key.trim() {
                "ksq" => {
                    ksq = Some(value.parse::<i64>().map_err(|e| {
                        Error::Parse(format!("line {}: ksq: {e}", lineno + 1))
                    })?)
                }
                "variant" => variant = value.parse()?,
                "points" => {
                    points = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::parse)
                        .collect::<Result<Vec<PointTriple>>>()?
                }
                "omit" => {
                    for l in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        omitted.insert(l.parse::<CurveLabel>()?);
                    }
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        let ksq = ksq.ok_or_else(|| Error::Parse("missing key ksq".into()))?;
        if ksq != 6 - points.len() as i64 {
            return Err(Error::InvalidBuildingData(format!(
                "K^2 = {ksq} needs {} points, got {}",
                6 - ksq,
                points.len()
            )));
        }
        let curves = CurveLabel::all()
            .into_iter()
            .filter(|l| !omitted.contains(l))
            .collect();
        Ok(BurniatConfig {
            ksq,
            variant,
            points,
            curves,
        })
    }
}

/// The boundary curves meeting `label` on `Y`, with their labels on that
/// boundary curve.
pub fn boundary_incidences(label: CurveLabel) -> Vec<(CurveLabel, Torsion2)> {
    BOUNDARY
        .iter()
        .filter(|&&f| f != label)
        .filter_map(|&f| meeting_label(f, label).map(|t| (f, t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lbl(s: &str) -> CurveLabel {
        s.parse().unwrap()
    }

    #[test]
    fn standard_point_lists() {
        let c = BurniatConfig::standard(5, Variant::Plain).unwrap();
        assert_eq!(c.points, vec![PointTriple::new(1, 1, 1).unwrap()]);
        assert_eq!(BurniatConfig::standard(2, Variant::Plain).unwrap().n_points(), 4);
        assert_eq!(BurniatConfig::standard(6, Variant::Plain).unwrap().n_points(), 0);
        let c3 = BurniatConfig::standard(3, Variant::Plain).unwrap();
        let names: Vec<String> = c3.points.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["A1B1C2", "A1B2C1", "A2B1C1"]);
        assert!(BurniatConfig::standard(4, Variant::Plain).is_err());
        assert!(BurniatConfig::standard(7, Variant::Plain).is_err());
        for c in BurniatConfig::all_standard() {
            assert_eq!(c.n_points() as i64, 6 - c.ksq);
        }
    }

    #[test]
    fn boundary_and_internal_self_intersections() {
        for l in CurveLabel::all() {
            let c = y_class(l);
            let expected = if l.is_boundary() { -1 } else { 0 };
            assert_eq!(c.dot(&c), expected, "{l}");
        }
    }

    #[test]
    fn incidence_oracle() {
        // A0 meets exactly B3, C3, C1, C2 among the twelve, each once.
        let m = BurniatConfig::incidence_matrix();
        for letter in Letter::ALL {
            for idx in [0u8, 3] {
                let f = CurveLabel::new(letter, idx);
                for g in CurveLabel::all() {
                    let v = m[f.position()][g.position()];
                    if g == f {
                        assert_eq!(v, -1);
                    } else if meeting_label(f, g).is_some() {
                        assert_eq!(v, 1, "{f}.{g}");
                    } else {
                        assert_eq!(v, 0, "{f}.{g}");
                    }
                }
            }
        }
        assert_eq!(m[lbl("A0").position()][lbl("C1").position()], 1);
        assert_eq!(m[lbl("A0").position()][lbl("B1").position()], 0);
        for l in CurveLabel::all().iter().filter(|l| l.is_internal()) {
            for i in [0, 3] {
                let f = CurveLabel::new(l.letter, i);
                assert_eq!(m[l.position()][f.position()], 0);
            }
        }
    }

    #[test]
    fn ramification_is_minus_three_k() {
        for c in BurniatConfig::all_standard() {
            assert!(c.ramification_is_anticanonical(), "{}", c.name());
        }
    }

    #[test]
    fn building_data() {
        let c = BurniatConfig::standard(6, Variant::Plain).unwrap();
        let [l1, _, _] = c.validate_building_data().unwrap();
        let l = SurfaceLattice::new(3);
        assert_eq!(l1, &(&(3 * &l.h()) - &(2 * &l.e(1))) - &l.e(3));
        for c in BurniatConfig::all_standard() {
            c.validate_building_data().unwrap();
        }
        let mut broken = c.clone();
        broken.curves.retain(|&l| l != lbl("C3"));
        assert!(matches!(
            broken.validate_building_data(),
            Err(Error::InvalidBuildingData(_))
        ));
    }

    #[test]
    fn minus_two_curves_per_case() {
        let counts: Vec<usize> = BurniatConfig::all_standard()
            .iter()
            .map(|c| c.minus_two_curves().len())
            .collect();
        assert_eq!(counts, [0, 0, 1, 0, 3, 6]);
        let nodal = BurniatConfig::standard(4, Variant::Nodal).unwrap();
        let (label, class) = &nodal.minus_two_curves()[0];
        assert_eq!(*label, lbl("A1"));
        let expected = &(&y_class(lbl("A1")).pullback(2) - &nodal.exceptional(1))
            - &nodal.exceptional(2);
        assert_eq!(*class, expected);
        for c in BurniatConfig::all_standard() {
            for (_, m) in c.minus_two_curves() {
                assert_eq!(m.dot(&m), -2);
                assert_eq!(m.dot(&c.canonical_class()), 0);
            }
        }
        let three = BurniatConfig::standard(3, Variant::Plain).unwrap();
        let labels: Vec<CurveLabel> = three.minus_two_curves().iter().map(|x| x.0).collect();
        assert_eq!(labels, [lbl("A1"), lbl("B1"), lbl("C1")]);
    }

    #[test]
    fn ampleness() {
        let amp: Vec<bool> = BurniatConfig::all_standard()
            .iter()
            .map(|c| c.is_canonical_ample())
            .collect();
        assert_eq!(amp, [true, true, false, true, false, false]);
    }

    #[test]
    fn ramification_span() {
        let idx: Vec<GroupIndex> = BurniatConfig::all_standard()
            .iter()
            .map(|c| c.ramification_span_index().unwrap())
            .collect();
        use GroupIndex::Finite;
        assert_eq!(idx, [Finite(1), Finite(1), Finite(1), Finite(1), Finite(1), Finite(2)]);
    }

    #[test]
    fn exceptional_classes_in_span_of_one_strict_transform() {
        // E_s = pullback(curve) - strict transform(curve) for any curve through P_s
        let cases: [(i64, Variant, &[&str]); 4] = [
            (5, Variant::Plain, &["A1"]),
            (4, Variant::Nodal, &["B1", "B2"]),
            (4, Variant::NonNodal, &["B1", "B2"]),
            (3, Variant::Plain, &["C2", "B2", "A2"]),
        ];
        for (k, v, names) in cases {
            let c = BurniatConfig::standard(k, v).unwrap();
            for (s, name) in names.iter().enumerate() {
                let l = lbl(name);
                let diff = &y_class(l).pullback(c.n_points()) - &c.strict_transform(l);
                assert_eq!(diff, c.exceptional(s + 1), "{} {name}", c.name());
            }
        }
    }

    #[test]
    fn text_format_round_trip() {
        for c in BurniatConfig::all_standard() {
            assert_eq!(BurniatConfig::from_text(&c.to_text()).unwrap(), c);
        }
        let custom = "ksq = 6\nvariant = plain\npoints =\nomit = C3\n";
        let c = BurniatConfig::from_text(custom).unwrap();
        assert!(!c.has_curve(lbl("C3")));
        assert!(c.validate_building_data().is_err());
        assert!(BurniatConfig::from_text("ksq = 5\npoints =\n").is_err());
        assert!(BurniatConfig::from_text("ksq = 6\ncolour = red\n").is_err());
    }
}
