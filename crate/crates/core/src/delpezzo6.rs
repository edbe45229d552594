//! The del Pezzo surface of degree 6: effective and nef semigroups,
//! symmetric coordinates, and nef classes of non-positive arithmetic genus.

use std::fmt;

use crate::config::y_class;
use crate::error::{Error, Result};
use crate::labels::BOUNDARY;
use crate::lattice::{SurfaceLattice, YClass};

fn require_dp6(d: &YClass) -> Result<()> {
    if d.lattice().k() != 3 {
        return Err(Error::Precondition(format!(
            "expected a class on Bl_3 P^2, got rank {}",
            d.coeffs().len()
        )));
    }
    Ok(())
}

/// `(d; a0, b0, c0; a3, b3, c3)`: the degree `D.(-K)` and the pairings with
/// the six (-1)-curves `A0, B0, C0, A3, B3, C3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetricCoords {
    pub d: i64,
    pub zero: [i64; 3],
    pub three: [i64; 3],
}

impl SymmetricCoords {
    pub fn new(d: i64, zero: [i64; 3], three: [i64; 3]) -> Self {
        SymmetricCoords { d, zero, three }
    }

    pub fn pairings(&self) -> [i64; 6] {
        let [a0, b0, c0] = self.zero;
        let [a3, b3, c3] = self.three;
        [a0, b0, c0, a3, b3, c3]
    }
}

impl fmt::Display for SymmetricCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a0, b0, c0] = self.zero;
        let [a3, b3, c3] = self.three;
        write!(f, "({}; {a0},{b0},{c0}; {a3},{b3},{c3})", self.d)
    }
}

pub fn boundary_classes() -> [YClass; 6] {
    BOUNDARY.map(y_class)
}

pub fn to_symmetric(d: &YClass) -> Result<SymmetricCoords> {
    require_dp6(d)?;
    let k = d.lattice().canonical_class();
    let p = boundary_classes().map(|f| d.dot(&f));
    Ok(SymmetricCoords {
        d: -d.dot(&k),
        zero: [p[0], p[1], p[2]],
        three: [p[3], p[4], p[5]],
    })
}

pub fn from_symmetric(s: &SymmetricCoords) -> Result<YClass> {
    let [a0, b0, c0] = s.zero;
    let total = s.d + a0 + b0 + c0;
    if total.rem_euclid(3) != 0 {
        return Err(Error::NotInLattice(format!("{s}: 3 does not divide d + a0 + b0 + c0")));
    }
    let [a3, b3, c3] = s.three;
    if (s.d + a3 + b3 + c3).rem_euclid(3) != 0 {
        return Err(Error::NotInLattice(format!("{s}: 3 does not divide d + a3 + b3 + c3")));
    }
    let y = SurfaceLattice::new(3).class(&[total / 3, -a0, -b0, -c0])?;
    if to_symmetric(&y)? != *s {
        return Err(Error::NotInLattice(format!("{s}: pairings are not consistent")));
    }
    Ok(y)
}

/// Generators of the nef semigroup, in greedy order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NefGenerator {
    F1,
    F2,
    F3,
    H1,
    H2,
}

impl NefGenerator {
    pub const ALL: [NefGenerator; 5] = [
        NefGenerator::F1,
        NefGenerator::F2,
        NefGenerator::F3,
        NefGenerator::H1,
        NefGenerator::H2,
    ];

    /// `f_i = h - e_i`, `h_1 = h`, `h_2 = 2h - e1 - e2 - e3`.
    pub fn class(self) -> YClass {
        let l = SurfaceLattice::new(3);
        match self {
            NefGenerator::F1 => &l.h() - &l.e(1),
            NefGenerator::F2 => &l.h() - &l.e(2),
            NefGenerator::F3 => &l.h() - &l.e(3),
            NefGenerator::H1 => l.h(),
            NefGenerator::H2 => l.class(&[2, -1, -1, -1]).expect("rank 4"),
        }
    }
}

impl fmt::Display for NefGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NefGenerator::F1 => "f1",
            NefGenerator::F2 => "f2",
            NefGenerator::F3 => "f3",
            NefGenerator::H1 => "h1",
            NefGenerator::H2 => "h2",
        })
    }
}

pub fn is_nef(d: &YClass) -> bool {
    boundary_classes().iter().all(|f| d.dot(f) >= 0)
}

pub fn is_effective(d: &YClass) -> bool {
    NefGenerator::ALL.iter().all(|g| d.dot(&g.class()) >= 0)
}

/// Multiplicities over `A0, B0, C0, A3, B3, C3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EffDecomposition(pub [i64; 6]);

/// Multiplicities over `f1, f2, f3, h1, h2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NefDecomposition(pub [i64; 5]);

impl EffDecomposition {
    pub fn total(&self) -> YClass {
        boundary_classes()
            .iter()
            .zip(self.0)
            .fold(SurfaceLattice::new(3).zero(), |acc, (f, n)| &acc + &(n * f))
    }
}

impl NefDecomposition {
    pub fn total(&self) -> YClass {
        NefGenerator::ALL
            .iter()
            .zip(self.0)
            .fold(SurfaceLattice::new(3).zero(), |acc, (g, n)| &acc + &(n * &g.class()))
    }
}

impl fmt::Display for EffDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = BOUNDARY
            .iter()
            .zip(self.0)
            .filter(|(_, n)| *n != 0)
            .map(|(l, n)| format!("{l}:{n}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for NefDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = NefGenerator::ALL
            .iter()
            .zip(self.0)
            .filter(|(_, n)| *n != 0)
            .map(|(g, n)| format!("{g}:{n}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Write `d` as a nonnegative combination of the six (-1)-curves, or `None`
/// if it is not effective.
///
/// The effective cone is saturated, so whenever `d != 0` is effective some
/// (-1)-curve can be removed keeping the remainder effective; the first such
/// curve in `A0, B0, C0, A3, B3, C3` order is taken at every step.
pub fn eff_decompose(d: &YClass) -> Result<Option<EffDecomposition>> {
    require_dp6(d)?;
    if !is_effective(d) {
        return Ok(None);
    }
    let curves = boundary_classes();
    let mut rest = d.clone();
    let mut out = EffDecomposition::default();
    while !rest.is_zero() {
        let Some(i) = curves.iter().position(|c| is_effective(&(&rest - c))) else {
            unreachable!("effective class {rest} with no removable (-1)-curve");
        };
        rest = &rest - &curves[i];
        out.0[i] += 1;
    }
    Ok(Some(out))
}

/// Greedy decomposition over `f1, f2, f3, h1, h2`, or `None` if not nef.
pub fn nef_decompose(d: &YClass) -> Result<Option<NefDecomposition>> {
    require_dp6(d)?;
    if !is_nef(d) {
        return Ok(None);
    }
    let gens = NefGenerator::ALL.map(|g| g.class());
    let mut rest = d.clone();
    let mut out = NefDecomposition::default();
    while !rest.is_zero() {
        let Some(i) = gens.iter().position(|g| is_nef(&(&rest - g))) else {
            unreachable!("nef class {rest} with no removable generator");
        };
        rest = &rest - &gens[i];
        out.0[i] += 1;
    }
    Ok(Some(out))
}

/// An element of `S_3 x Z/2` acting on symmetric coordinates: `perm` sends
/// letter `i` to letter `perm[i]` in both groups, `swap` exchanges the
/// `0`-group with the `3`-group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symmetry {
    pub perm: [usize; 3],
    pub swap: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry {
        perm: [0, 1, 2],
        swap: false,
    };

    pub fn all() -> Vec<Symmetry> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 2, 0],
            [2, 0, 1],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(12);
        for swap in [false, true] {
            for perm in PERMS {
                out.push(Symmetry { perm, swap });
            }
        }
        out
    }

    pub fn apply(&self, s: &SymmetricCoords) -> SymmetricCoords {
        let permute = |v: [i64; 3]| {
            let mut out = [0; 3];
            for i in 0..3 {
                out[self.perm[i]] = v[i];
            }
            out
        };
        let (z, t) = (permute(s.zero), permute(s.three));
        if self.swap {
            SymmetricCoords::new(s.d, t, z)
        } else {
            SymmetricCoords::new(s.d, z, t)
        }
    }

    pub fn inverse(&self) -> Symmetry {
        let mut perm = [0; 3];
        for i in 0..3 {
            perm[self.perm[i]] = i;
        }
        Symmetry {
            perm,
            swap: self.swap,
        }
    }

    pub fn apply_class(&self, d: &YClass) -> Result<YClass> {
        from_symmetric(&self.apply(&to_symmetric(d)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(2n; n,0,0; n,0,0)`, the multiples of a fibre.
    Type1,
    /// `(2n; n-1,1,0; n-1,1,0)`, `n >= 2`.
    Type2,
    /// `(2n+1; n,1,1; n-1,0,0)` and its swap.
    Type3,
    /// `(6; 2,2,2; 0,0,0)` and its swap.
    Type4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Family::Type1 => 1,
            Family::Type2 => 2,
            Family::Type3 => 3,
            Family::Type4 => 4,
        };
        write!(f, "type {n}")
    }
}

impl Family {
    /// Normal form with parameter `n`.
    pub fn normal_form(self, n: i64) -> SymmetricCoords {
        match self {
            Family::Type1 => SymmetricCoords::new(2 * n, [n, 0, 0], [n, 0, 0]),
            Family::Type2 => SymmetricCoords::new(2 * n, [n - 1, 1, 0], [n - 1, 1, 0]),
            Family::Type3 => SymmetricCoords::new(2 * n + 1, [n, 1, 1], [n - 1, 0, 0]),
            Family::Type4 => SymmetricCoords::new(6, [2, 2, 2], [0, 0, 0]),
        }
    }

    pub fn genus(self, n: i64) -> i64 {
        match self {
            Family::Type1 => -(n - 1),
            _ => 0,
        }
    }

    fn match_normal(self, s: &SymmetricCoords) -> Option<i64> {
        let n = match self {
            Family::Type1 | Family::Type2 => s.d / 2,
            Family::Type3 => (s.d - 1) / 2,
            Family::Type4 => 1,
        };
        let min = if self == Family::Type2 { 2 } else { 1 };
        (n >= min && self.normal_form(n) == *s).then_some(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExceptionalType {
    Exceptional {
        family: Family,
        n: i64,
        /// Maps the input onto the normal form.
        symmetry: Symmetry,
    },
    NonExceptional,
}

impl ExceptionalType {
    pub fn is_exceptional(&self) -> bool {
        matches!(self, ExceptionalType::Exceptional { .. })
    }
}

/// Match a nef class against the families of nef classes with `p_a <= 0`.
/// `(2; 0,1,0; 0,1,0)` and its images are reported as `Type1, n = 1`.
pub fn classify_exceptional(d: &YClass) -> Result<ExceptionalType> {
    require_dp6(d)?;
    if !is_nef(d) {
        return Err(Error::Precondition(format!("{d} is not nef")));
    }
    let s = to_symmetric(d)?;
    for family in [Family::Type1, Family::Type2, Family::Type3, Family::Type4] {
        for g in Symmetry::all() {
            if let Some(n) = family.match_normal(&g.apply(&s)) {
                return Ok(ExceptionalType::Exceptional {
                    family,
                    n,
                    symmetry: g,
                });
            }
        }
    }
    debug_assert!(d.arithmetic_genus() > 0, "{d} not classified but p_a <= 0");
    Ok(ExceptionalType::NonExceptional)
}

/// The ruling fibre `f` for which `d - f` stays in the same family with
/// parameter `n - 1` (families 1-3).
pub fn family_fibre(kind: &ExceptionalType) -> Option<YClass> {
    match kind {
        ExceptionalType::Exceptional {
            family: Family::Type1 | Family::Type2 | Family::Type3,
            symmetry,
            ..
        } => {
            let f1 = SymmetricCoords::new(2, [1, 0, 0], [1, 0, 0]);
            from_symmetric(&symmetry.inverse().apply(&f1)).ok()
        }
        _ => None,
    }
}

/// For nef `d != 0` with `p_a(d) > 0`, a decomposition of the effective
/// class `d + K`.
pub fn dk_effective(d: &YClass) -> Result<EffDecomposition> {
    require_dp6(d)?;
    if d.is_zero() || !is_nef(d) || d.arithmetic_genus() <= 0 {
        return Err(Error::Precondition(format!(
            "{d} must be a nonzero nef class with p_a > 0"
        )));
    }
    let shifted = d + &d.lattice().canonical_class();
    eff_decompose(&shifted)?
        .ok_or_else(|| panic!("{shifted} = D + K is not effective for nef D = {d} with p_a > 0"))
}

/// Nef classes with `0 <= d <= max_degree`, sorted by degree then
/// symmetric coordinates.
pub fn nef_classes(max_degree: i64) -> Vec<YClass> {
    let l = SurfaceLattice::new(3);
    let mut out = Vec::new();
    for nh in 0..=max_degree {
        for n1 in -max_degree..=0 {
            for n2 in -max_degree..=0 {
                for n3 in -max_degree..=0 {
                    let c = l.class(&[nh, n1, n2, n3]).expect("rank 4");
                    if !is_nef(&c) {
                        continue;
                    }
                    let s = to_symmetric(&c).expect("dp6");
                    if s.d <= max_degree {
                        out.push((s, c));
                    }
                }
            }
        }
    }
    out.sort();
    out.into_iter().map(|(_, c)| c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> SurfaceLattice {
        SurfaceLattice::new(3)
    }

    fn sym(d: i64, z: [i64; 3], t: [i64; 3]) -> YClass {
        from_symmetric(&SymmetricCoords::new(d, z, t)).unwrap()
    }

    #[test]
    fn symmetric_coordinate_examples() {
        let l = l();
        assert_eq!(
            to_symmetric(&(&l.h() - &l.e(1))).unwrap(),
            SymmetricCoords::new(2, [1, 0, 0], [1, 0, 0])
        );
        assert_eq!(to_symmetric(&l.h()).unwrap(), SymmetricCoords::new(3, [0, 0, 0], [1, 1, 1]));
        assert_eq!(sym(6, [2, 2, 2], [0, 0, 0]), 2 * &NefGenerator::H2.class());
        assert!(from_symmetric(&SymmetricCoords::new(1, [0, 0, 0], [0, 0, 0])).is_err());
        assert!(from_symmetric(&SymmetricCoords::new(3, [0, 0, 0], [0, 0, 0])).is_err());
    }

    #[test]
    fn eff_examples() {
        let l = l();
        assert_eq!(eff_decompose(&l.e(1)).unwrap(), Some(EffDecomposition([1, 0, 0, 0, 0, 0])));
        let minus_k = -&l.canonical_class();
        let dec = eff_decompose(&minus_k).unwrap().unwrap();
        assert_eq!(dec, EffDecomposition([2, 1, 0, 0, 1, 2]));
        assert_eq!(dec.total(), minus_k);
        let bad = &(&(&l.h() - &l.e(1)) - &l.e(2)) - &l.e(3);
        assert_eq!(eff_decompose(&bad).unwrap(), None);
        assert_eq!(bad.dot(&NefGenerator::H2.class()), -1);
    }

    #[test]
    fn nef_examples() {
        let l = l();
        let f1 = NefGenerator::F1.class();
        assert_eq!(nef_decompose(&f1).unwrap(), Some(NefDecomposition([1, 0, 0, 0, 0])));
        let minus_k = -&l.canonical_class();
        assert_eq!(nef_decompose(&minus_k).unwrap(), Some(NefDecomposition([1, 1, 1, 0, 0])));
        assert_eq!(&NefGenerator::H1.class() + &NefGenerator::H2.class(), minus_k);
        assert_eq!(nef_decompose(&l.e(1)).unwrap(), None);
    }

    #[test]
    fn classify_examples() {
        match classify_exceptional(&sym(2, [1, 0, 0], [1, 0, 0])).unwrap() {
            ExceptionalType::Exceptional { family, n, .. } => {
                assert_eq!((family, n), (Family::Type1, 1))
            }
            other => panic!("{other:?}"),
        }
        let d = sym(4, [2, 0, 0], [2, 0, 0]);
        assert_eq!(d.arithmetic_genus(), -1);
        match classify_exceptional(&d).unwrap() {
            ExceptionalType::Exceptional { family, n, .. } => {
                assert_eq!((family, n), (Family::Type1, 2))
            }
            other => panic!("{other:?}"),
        }
        let minus_k = sym(6, [1, 1, 1], [1, 1, 1]);
        assert_eq!(classify_exceptional(&minus_k).unwrap(), ExceptionalType::NonExceptional);
        assert_eq!(minus_k.arithmetic_genus(), 1);
        assert!(classify_exceptional(&l().e(1)).is_err());
    }

    #[test]
    fn fibre_of_family() {
        let d = sym(7, [0, 0, 2], [1, 1, 3]);
        let kind = classify_exceptional(&d).unwrap();
        let f = family_fibre(&kind).unwrap();
        let rest = &d - &f;
        match (kind, classify_exceptional(&rest).unwrap()) {
            (
                ExceptionalType::Exceptional { family: a, n: na, .. },
                ExceptionalType::Exceptional { family: b, n: nb, .. },
            ) => {
                assert_eq!(a, b);
                assert_eq!(nb, na - 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dk_examples() {
        let l = l();
        let minus_k = -&l.canonical_class();
        assert_eq!(dk_effective(&minus_k).unwrap(), EffDecomposition::default());
        assert_eq!(dk_effective(&(2 * &minus_k)).unwrap().total(), minus_k);
        let d = &(&(&(4 * &l.h()) - &l.e(1)) - &l.e(2)) - &l.e(3);
        assert_eq!(to_symmetric(&d).unwrap(), SymmetricCoords::new(9, [1, 1, 1], [2, 2, 2]));
        let dec = dk_effective(&d).unwrap();
        assert_eq!(dec.total(), l.h());
        assert!(dk_effective(&l.zero()).is_err());
    }

    #[test]
    fn symmetry_group_acts_on_the_lattice() {
        let gens = Symmetry::all();
        assert_eq!(gens.len(), 12);
        for c in nef_classes(6) {
            for g in &gens {
                let image = g.apply_class(&c).unwrap();
                assert_eq!(image.dot(&image), c.dot(&c));
                assert_eq!(g.inverse().apply_class(&image).unwrap(), c);
            }
        }
    }
}
