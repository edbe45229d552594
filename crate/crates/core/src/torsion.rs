//! Two-torsion labels on the marked elliptic curves and the space
//! `V = A0[2] x B0[2] x C0[2] = F_2^6`.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use crate::error::Error;
use crate::f2;
use crate::labels::Letter;

/// An element of `F[2]` named by the point labels `P00, P10, P01, P11`.
/// The string `"xy"` is stored as `2x + y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Torsion2(u8);

impl Torsion2 {
    pub const ZERO: Torsion2 = Torsion2(0);
    pub const T10: Torsion2 = Torsion2(2);
    pub const T01: Torsion2 = Torsion2(1);
    pub const T11: Torsion2 = Torsion2(3);

    pub fn new(bits: u8) -> Self {
        Torsion2(bits & 3)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> [Torsion2; 4] {
        [Torsion2(0), Torsion2(1), Torsion2(2), Torsion2(3)]
    }
}

impl Add for Torsion2 {
    type Output = Torsion2;
    fn add(self, rhs: Torsion2) -> Torsion2 {
        Torsion2(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Torsion2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0 >> 1, self.0 & 1)
    }
}

impl FromStr for Torsion2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let b = s.as_bytes();
        if b.len() != 2 || !b.iter().all(|c| *c == b'0' || *c == b'1') {
            return Err(Error::Parse(format!("bad torsion label {s:?}")));
        }
        Ok(Torsion2(((b[0] - b'0') << 1) | (b[1] - b'0')))
    }
}

/// Six bits blocked as `(A0 | B0 | C0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TorsionVec(u8);

pub const V_WIDTH: usize = 6;

impl TorsionVec {
    pub const ZERO: TorsionVec = TorsionVec(0);

    pub fn from_bits(bits: u8) -> Self {
        TorsionVec(bits & 0x3f)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn from_blocks(blocks: [Torsion2; 3]) -> Self {
        TorsionVec((blocks[0].0 << 4) | (blocks[1].0 << 2) | blocks[2].0)
    }

    pub fn blocks(self) -> [Torsion2; 3] {
        [
            Torsion2((self.0 >> 4) & 3),
            Torsion2((self.0 >> 2) & 3),
            Torsion2(self.0 & 3),
        ]
    }

    pub fn block(self, letter: Letter) -> Torsion2 {
        self.blocks()[letter.index()]
    }

    pub fn dot(self, other: TorsionVec) -> bool {
        f2::dot(self.0 as u64, other.0 as u64)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn all() -> impl Iterator<Item = TorsionVec> {
        (0u8..64).map(TorsionVec)
    }

    /// `vec X_i`: `10` (i = 1) or `11` (i = 2) placed in the block of the
    /// letter following `X`.
    pub fn internal(letter: Letter, i: u8) -> TorsionVec {
        assert!(i == 1 || i == 2);
        let t = if i == 1 { Torsion2::T10 } else { Torsion2::T11 };
        let mut blocks = [Torsion2::ZERO; 3];
        blocks[letter.next().index()] = t;
        TorsionVec::from_blocks(blocks)
    }
}

impl Add for TorsionVec {
    type Output = TorsionVec;
    fn add(self, rhs: TorsionVec) -> TorsionVec {
        TorsionVec(self.0 ^ rhs.0)
    }
}

impl fmt::Display for TorsionVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.blocks();
        write!(f, "{a} {b} {c}")
    }
}

impl FromStr for TorsionVec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.len() != 6 {
            return Err(Error::Parse(format!("torsion vector needs six bits: {s:?}")));
        }
        let a: Torsion2 = compact[0..2].parse()?;
        let b: Torsion2 = compact[2..4].parse()?;
        let c: Torsion2 = compact[4..6].parse()?;
        Ok(TorsionVec::from_blocks([a, b, c]))
    }
}

/// Reduced echelon basis of the orthogonal complement of `vectors` in `V`.
pub fn orthogonal_complement(vectors: &[TorsionVec]) -> Vec<TorsionVec> {
    let rows: Vec<u64> = vectors.iter().map(|v| v.0 as u64).collect();
    f2::orthogonal_complement(&rows, V_WIDTH)
        .into_iter()
        .map(|r| TorsionVec(r as u8))
        .collect()
}

pub fn span_rank(vectors: &[TorsionVec]) -> usize {
    let rows: Vec<u64> = vectors.iter().map(|v| v.0 as u64).collect();
    f2::rank(&rows, V_WIDTH)
}

pub fn echelon(vectors: &[TorsionVec]) -> Vec<TorsionVec> {
    let rows: Vec<u64> = vectors.iter().map(|v| v.0 as u64).collect();
    f2::rref(&rows, V_WIDTH)
        .into_iter()
        .map(|r| TorsionVec(r as u8))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn internal_vectors_match_bit_form() {
        let cases = [
            (Letter::A, 1, "00 10 00"),
            (Letter::A, 2, "00 11 00"),
            (Letter::B, 1, "00 00 10"),
            (Letter::B, 2, "00 00 11"),
            (Letter::C, 1, "10 00 00"),
            (Letter::C, 2, "11 00 00"),
        ];
        for (l, i, s) in cases {
            assert_eq!(TorsionVec::internal(l, i).to_string(), s);
            assert_eq!(s.parse::<TorsionVec>().unwrap(), TorsionVec::internal(l, i));
        }
    }

    #[test]
    fn the_six_internal_vectors_span_v() {
        let all: Vec<_> = Letter::ALL
            .iter()
            .flat_map(|&l| [TorsionVec::internal(l, 1), TorsionVec::internal(l, 2)])
            .collect();
        assert_eq!(span_rank(&all), 6);
    }

    #[test]
    fn dot_is_symmetric_and_bilinear() {
        for x in TorsionVec::all() {
            for y in TorsionVec::all() {
                assert_eq!(x.dot(y), y.dot(x));
                for z in [TorsionVec::from_bits(0b101101), TorsionVec::from_bits(0b010011)] {
                    assert_eq!((x + y).dot(z), x.dot(z) ^ y.dot(z));
                }
            }
        }
    }
}
