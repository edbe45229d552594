//! Picard lattices of blowups of the projective plane, and finite-index
//! computations in groups of the form `Z^r x F_2^m`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::intmat::Hermite;

/// `Pic(Bl_k P^2)` with basis `h, e_1, ..., e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceLattice {
    k: usize,
}

/// A class `n_h h + sum n_i e_i`. The lattice is determined by the length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YClass {
    coeffs: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfIntersection {
    MinusOne,
    MinusTwo,
}

impl SurfaceLattice {
    pub fn new(k: usize) -> Self {
        SurfaceLattice { k }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.k + 1
    }

    pub fn zero(&self) -> YClass {
        YClass {
            coeffs: vec![0; self.rank()],
        }
    }

    pub fn h(&self) -> YClass {
        let mut c = self.zero();
        c.coeffs[0] = 1;
        c
    }

    /// Exceptional class `e_i`, 1-based.
    pub fn e(&self, i: usize) -> YClass {
        assert!(i >= 1 && i <= self.k, "e_{i} out of range for k={}", self.k);
        let mut c = self.zero();
        c.coeffs[i] = 1;
        c
    }

    pub fn class(&self, coeffs: &[i64]) -> Result<YClass> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: self.rank(),
            });
        }
        Ok(YClass {
            coeffs: coeffs.to_vec(),
        })
    }

    /// `K = -3h + e_1 + ... + e_k`.
    pub fn canonical_class(&self) -> YClass {
        let mut c = vec![1; self.rank()];
        c[0] = -3;
        YClass { coeffs: c }
    }

    /// Classes `C` with `C^2 = -1, C.K = -1` (resp. `C^2 = -2, C.K = 0`)
    /// that can be irreducible curves on the blowup at general points,
    /// i.e. that pair nonnegatively with every (-1)-class other than
    /// themselves. Sorted lexicographically by coefficients.
    pub fn negative_curves(&self, selfint: SelfIntersection) -> Result<Vec<YClass>> {
        if self.k > 6 {
            return Err(Error::Unsupported(format!(
                "negative curve search is only validated for k <= 6 (got {})",
                self.k
            )));
        }
        let minus_one = self.search_classes(-1, -1);
        match selfint {
            SelfIntersection::MinusOne => Ok(minus_one),
            SelfIntersection::MinusTwo => Ok(self
                .search_classes(-2, 0)
                .into_iter()
                .filter(|c| minus_one.iter().all(|e| c.dot(e) >= 0))
                .collect()),
        }
    }

    fn search_classes(&self, square: i64, canonical: i64) -> Vec<YClass> {
        let k = self.k;
        let canon = self.canonical_class();
        let mut out = Vec::new();
        let mut coeffs = vec![0i64; k + 1];
        let total = 5usize.pow(k as u32);
        for nh in -3..=3 {
            for code in 0..total {
                let mut c = code;
                coeffs[0] = nh;
                for slot in coeffs.iter_mut().skip(1) {
                    *slot = (c % 5) as i64 - 2;
                    c /= 5;
                }
                let cls = YClass {
                    coeffs: coeffs.clone(),
                };
                if cls.dot(&cls) == square && cls.dot(&canon) == canonical {
                    out.push(cls);
                }
            }
        }
        out.sort();
        out
    }
}

impl YClass {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn lattice(&self) -> SurfaceLattice {
        SurfaceLattice::new(self.coeffs.len() - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn intersect(&self, other: &YClass) -> Result<i64> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::DimensionMismatch {
                left: self.coeffs.len(),
                right: other.coeffs.len(),
            });
        }
        Ok(self.dot(other))
    }

    /// Intersection number; panics on mismatched lattices.
    pub fn dot(&self, other: &YClass) -> i64 {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "lattice mismatch");
        let mut s = self.coeffs[0] * other.coeffs[0];
        for (a, b) in self.coeffs[1..].iter().zip(&other.coeffs[1..]) {
            s -= a * b;
        }
        s
    }

    /// `p_a(D) = D(D+K)/2 + 1`.
    pub fn arithmetic_genus(&self) -> i64 {
        let k = self.lattice().canonical_class();
        let twice = self.dot(&(self + &k));
        debug_assert!(twice % 2 == 0);
        twice / 2 + 1
    }

    /// Pullback along the blowup of `extra` further points.
    pub fn pullback(&self, extra: usize) -> YClass {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(std::iter::repeat(0).take(extra));
        YClass { coeffs }
    }

    /// Forget the last `extra` exceptional coefficients (pushforward).
    pub fn pushforward(&self, extra: usize) -> YClass {
        YClass {
            coeffs: self.coeffs[..self.coeffs.len() - extra].to_vec(),
        }
    }

    fn zip_with(&self, other: &YClass, f: impl Fn(i64, i64) -> i64) -> YClass {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "lattice mismatch");
        YClass {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &YClass {
    type Output = YClass;
    fn add(self, rhs: &YClass) -> YClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Add for YClass {
    type Output = YClass;
    fn add(self, rhs: YClass) -> YClass {
        &self + &rhs
    }
}

impl Sub for &YClass {
    type Output = YClass;
    fn sub(self, rhs: &YClass) -> YClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Sub for YClass {
    type Output = YClass;
    fn sub(self, rhs: YClass) -> YClass {
        &self - &rhs
    }
}

impl Neg for &YClass {
    type Output = YClass;
    fn neg(self) -> YClass {
        YClass {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&YClass> for i64 {
    type Output = YClass;
    fn mul(self, rhs: &YClass) -> YClass {
        YClass {
            coeffs: rhs.coeffs.iter().map(|c| self * c).collect(),
        }
    }
}

impl fmt::Display for YClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i == 0 { "h".to_string() } else { format!("e{i}") };
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The group `Z^free x F_2^torsion`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedGroup {
    pub free_rank: usize,
    pub torsion_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedElement {
    pub free: Vec<i64>,
    pub bits: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupIndex {
    Finite(u128),
    Infinite,
}

impl MixedElement {
    pub fn new(free: Vec<i64>, bits: Vec<bool>) -> Self {
        MixedElement { free, bits }
    }

    pub fn add(&self, other: &MixedElement) -> MixedElement {
        MixedElement {
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn double(&self) -> MixedElement {
        MixedElement {
            free: self.free.iter().map(|a| 2 * a).collect(),
            bits: vec![false; self.bits.len()],
        }
    }
}

impl MixedGroup {
    pub fn new(free_rank: usize, torsion_rank: usize) -> Self {
        MixedGroup {
            free_rank,
            torsion_rank,
        }
    }

    pub fn contains(&self, x: &MixedElement) -> bool {
        x.free.len() == self.free_rank && x.bits.len() == self.torsion_rank
    }

    pub fn basis(&self) -> Vec<MixedElement> {
        let n = self.free_rank + self.torsion_rank;
        (0..n)
            .map(|i| {
                let mut free = vec![0; self.free_rank];
                let mut bits = vec![false; self.torsion_rank];
                if i < self.free_rank {
                    free[i] = 1;
                } else {
                    bits[i - self.free_rank] = true;
                }
                MixedElement { free, bits }
            })
            .collect()
    }

    /// Integer rows for the generators followed by the relation rows
    /// `2 * unit` for every torsion coordinate.
    pub(crate) fn presentation_rows(&self, generators: &[MixedElement]) -> Vec<Vec<i128>> {
        let mut rows: Vec<Vec<i128>> = generators.iter().map(encode).collect();
        let n = self.free_rank + self.torsion_rank;
        for j in 0..self.torsion_rank {
            let mut r = vec![0i128; n];
            r[self.free_rank + j] = 2;
            rows.push(r);
        }
        rows
    }

    /// Index of the subgroup generated by `generators`.
    pub fn subgroup_index(&self, generators: &[MixedElement]) -> Result<GroupIndex> {
        for g in generators {
            if !self.contains(g) {
                return Err(Error::DimensionMismatch {
                    left: g.free.len() + g.bits.len(),
                    right: self.free_rank + self.torsion_rank,
                });
            }
        }
        let n = self.free_rank + self.torsion_rank;
        let hnf = Hermite::new(&self.presentation_rows(generators), n);
        Ok(match hnf.index() {
            Some(i) => GroupIndex::Finite(i),
            None => GroupIndex::Infinite,
        })
    }
}

fn encode(x: &MixedElement) -> Vec<i128> {
    x.free
        .iter()
        .map(|&v| v as i128)
        .chain(x.bits.iter().map(|&b| i128::from(b)))
        .collect()
}
