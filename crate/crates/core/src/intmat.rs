//! Row-style Hermite normal form over the integers, with the unimodular
//! transform kept alongside so that kernels and preimages can be read off.

/// Result of reducing a list of integer row vectors.
///
/// `rows[i] = sum_j transform[i][j] * input[j]`; the first `rank` rows are in
/// echelon form with positive pivots, the rest are zero.
#[derive(Debug, Clone)]
pub struct Hermite {
    pub rows: Vec<Vec<i128>>,
    pub transform: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
    width: usize,
}

fn axpy(target: &mut [i128], q: i128, source: &[i128]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

impl Hermite {
    pub fn new(input: &[Vec<i128>], width: usize) -> Self {
        let m = input.len();
        let mut rows: Vec<Vec<i128>> = input.to_vec();
        for r in &rows {
            assert_eq!(r.len(), width, "row width mismatch");
        }
        let mut transform: Vec<Vec<i128>> = (0..m)
            .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut top = 0;

        for col in 0..width {
            if top == m {
                break;
            }
            loop {
                // smallest nonzero entry at or below `top` becomes the pivot candidate
                let best = (top..m)
                    .filter(|&r| rows[r][col] != 0)
                    .min_by_key(|&r| rows[r][col].abs());
                let Some(best) = best else { break };
                rows.swap(top, best);
                transform.swap(top, best);
                let mut done = true;
                for r in top + 1..m {
                    if rows[r][col] != 0 {
                        let q = rows[r][col].div_euclid(rows[top][col]);
                        let (pivot_row, other) = split_pair(&mut rows, top, r);
                        axpy(other, q, pivot_row);
                        let (pivot_t, other_t) = split_pair(&mut transform, top, r);
                        axpy(other_t, q, pivot_t);
                        if rows[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if rows[top][col] == 0 {
                continue;
            }
            if rows[top][col] < 0 {
                rows[top].iter_mut().for_each(|v| *v = -*v);
                transform[top].iter_mut().for_each(|v| *v = -*v);
            }
            for r in 0..top {
                let q = rows[r][col].div_euclid(rows[top][col]);
                if q != 0 {
                    let (pivot_row, other) = split_pair(&mut rows, top, r);
                    axpy(other, q, pivot_row);
                    let (pivot_t, other_t) = split_pair(&mut transform, top, r);
                    axpy(other_t, q, pivot_t);
                }
            }
            pivots.push(col);
            top += 1;
        }

        Hermite {
            rows,
            transform,
            pivots,
            width,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Index of the row span inside `Z^width`, or `None` when the span has
    /// smaller rank.
    pub fn index(&self) -> Option<u128> {
        if self.rank() < self.width {
            return None;
        }
        Some(
            (0..self.rank())
                .map(|i| self.rows[i][self.pivots[i]] as u128)
                .product(),
        )
    }

    /// A basis of `{c : sum_j c_j * input_j = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<i128>> {
        self.transform[self.rank()..].to_vec()
    }

    /// Coefficients on the echelon rows `rows[..rank]` summing to `target`.
    pub fn solve_echelon(&self, target: &[i128]) -> Option<Vec<i128>> {
        assert_eq!(target.len(), self.width);
        let mut rem = target.to_vec();
        let mut coeffs = vec![0i128; self.rank()];
        for (i, &col) in self.pivots.iter().enumerate() {
            let p = self.rows[i][col];
            if rem[col] % p != 0 {
                return None;
            }
            let q = rem[col] / p;
            coeffs[i] = q;
            axpy(&mut rem, q, &self.rows[i]);
        }
        if rem.iter().any(|&v| v != 0) {
            return None;
        }
        Some(coeffs)
    }

    /// Coefficients `c` with `sum_j c_j * input_j = target`, if any exist.
    pub fn solve(&self, target: &[i128]) -> Option<Vec<i128>> {
        let coeffs = self.solve_echelon(target)?;
        let m = self.transform.len();
        let mut out = vec![0i128; m];
        for (i, &q) in coeffs.iter().enumerate() {
            for j in 0..m {
                out[j] += q * self.transform[i][j];
            }
        }
        Some(out)
    }
}

fn split_pair<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn combine(c: &[i128], rows: &[Vec<i128>]) -> Vec<i128> {
        let mut out = vec![0; rows[0].len()];
        for (ci, r) in c.iter().zip(rows) {
            for (o, v) in out.iter_mut().zip(r) {
                *o += ci * v;
            }
        }
        out
    }

    #[test]
    fn index_of_doubled_basis() {
        let h = Hermite::new(&[vec![2, 0], vec![0, 2]], 2);
        assert_eq!(h.index(), Some(4));
    }

    #[test]
    fn deficient_rank_has_no_index() {
        let h = Hermite::new(&[vec![1, 2], vec![2, 4]], 2);
        assert_eq!(h.rank(), 1);
        assert_eq!(h.index(), None);
        let ker = h.left_kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(combine(&ker[0], &[vec![1, 2], vec![2, 4]]), vec![0, 0]);
    }

    #[test]
    fn solve_recovers_combination() {
        let rows = vec![vec![3, 1, 0], vec![1, 4, 2], vec![0, 5, 7]];
        let h = Hermite::new(&rows, 3);
        let target = combine(&[2, -3, 5], &rows);
        let c = h.solve(&target).unwrap();
        assert_eq!(combine(&c, &rows), target);
        assert!(h.solve(&[1, 0, 0]).is_none() || h.index() == Some(1));
    }

    #[test]
    fn transform_invariant_holds() {
        let rows = vec![vec![6, 4, 2], vec![4, 6, 8], vec![1, 1, 1], vec![0, 3, 9]];
        let h = Hermite::new(&rows, 3);
        for (i, r) in h.rows.iter().enumerate() {
            assert_eq!(&combine(&h.transform[i], &rows), r);
        }
    }
}
