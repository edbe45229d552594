//! Small dense linear algebra over F_2 on bit-packed rows.
//!
//! A row of width `w` is a `u64` whose bit `w - 1 - i` holds coordinate `i`,
//! so numeric order agrees with the left-to-right reading of the bit string.

pub fn coord(row: u64, width: usize, i: usize) -> bool {
    (row >> (width - 1 - i)) & 1 == 1
}

pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// Reduced row echelon form; zero rows dropped, rows sorted by pivot.
pub fn rref(rows: &[u64], width: usize) -> Vec<u64> {
    let mut rows: Vec<u64> = rows.to_vec();
    let mut out: Vec<u64> = Vec::new();
    for i in 0..width {
        let bit = 1u64 << (width - 1 - i);
        let Some(pos) = rows.iter().position(|r| r & bit != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        for r in out.iter_mut() {
            if *r & bit != 0 {
                *r ^= pivot;
            }
        }
        out.push(pivot);
    }
    out
}

pub fn rank(rows: &[u64], width: usize) -> usize {
    rref(rows, width).len()
}

/// Basis of `{x : x . r = 0 for every r in rows}`, in reduced echelon form.
pub fn orthogonal_complement(rows: &[u64], width: usize) -> Vec<u64> {
    let reduced = rref(rows, width);
    let pivot_of = |r: u64| r.leading_zeros() as usize - (64 - width);
    let pivots: Vec<usize> = reduced.iter().map(|&r| pivot_of(r)).collect();
    let mut basis = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut v = 1u64 << (width - 1 - free);
        for (r, &p) in reduced.iter().zip(&pivots) {
            if coord(*r, width, free) {
                v |= 1u64 << (width - 1 - p);
            }
        }
        basis.push(v);
    }
    rref(&basis, width)
}

pub fn in_span(basis: &[u64], v: u64, width: usize) -> bool {
    let mut with = basis.to_vec();
    with.push(v);
    rank(&with, width) == rank(basis, width)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_single_vector() {
        let comp = orthogonal_complement(&[0b101010], 6);
        assert_eq!(comp.len(), 5);
        for c in &comp {
            assert!(!dot(*c, 0b101010));
        }
    }

    #[test]
    fn complement_of_nothing_is_everything() {
        assert_eq!(orthogonal_complement(&[], 4), vec![0b1000, 0b0100, 0b0010, 0b0001]);
    }

    #[test]
    fn dependent_rows() {
        assert_eq!(rank(&[0b110, 0b011, 0b101], 3), 2);
        assert!(in_span(&[0b110, 0b011], 0b101, 3));
        assert!(!in_span(&[0b110], 0b001, 3));
    }
}
