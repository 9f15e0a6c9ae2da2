//! Exact matrix rank by fraction-free (Bareiss) elimination.

use crate::exact_arith::Scalar;
use crate::Int;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `self * rhs`, or `None` on overflow.
    pub fn mul(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j).checked_add(a.checked_mul(rhs.get(l, j))?)?;
                    out.set(i, j, v);
                }
            }
        }
        Some(out)
    }

    /// Exact rank: a checked `i64` pass, falling back to `BigInt` on overflow.
    pub fn rank(&self) -> usize {
        let small: Vec<Vec<i64>> = self.row_vecs();
        if let Some(r) = bareiss_rank(small) {
            return r;
        }
        let big: Vec<Vec<Int>> = self
            .row_vecs()
            .into_iter()
            .map(|row| row.into_iter().map(Int::from).collect())
            .collect();
        bareiss_rank(big).expect("BigInt arithmetic does not overflow")
    }

    fn row_vecs(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }
}

/// Rank over the rationals of an integer matrix, using only exact integer
/// divisions. Returns `None` if the scalar type overflows.
pub fn bareiss_rank<T: Scalar>(mut m: Vec<Vec<T>>) -> Option<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..cols {
                let a = pivot.checked_mul(&row[j])?;
                let b = lead.checked_mul(&pivot_row[j])?;
                row[j] = a.checked_sub(&b)? / prev.clone();
            }
            row[col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Largest k with a nonzero k x k minor, by cofactor expansion.
    fn minor_rank(m: &Matrix) -> usize {
        fn det(m: &Matrix, rows: &[usize], cols: &[usize]) -> Int {
            if rows.is_empty() {
                return Int::from(1);
            }
            let mut acc = Int::from(0);
            for (idx, &c) in cols.iter().enumerate() {
                let v = m.get(rows[0], c);
                if v == 0 {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = Int::from(v) * det(m, &rows[1..], &rest);
                if idx % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            (0u32..1 << n)
                .filter(|b| b.count_ones() as usize == k)
                .map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect())
                .collect()
        }
        for k in (1..=m.rows.min(m.cols)).rev() {
            for r in subsets(m.rows, k) {
                for c in subsets(m.cols, k) {
                    if det(m, &r, &c) != Int::from(0) {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn matches_minor_rank_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let mut m = Matrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    // sparse, mostly ±1, to look like coboundary matrices
                    let v = match rng.gen_range(0..6) {
                        0 => 1,
                        1 => -1,
                        2 => rng.gen_range(-3..=3),
                        _ => 0,
                    };
                    m.set(i, j, v);
                }
            }
            assert_eq!(m.rank(), minor_rank(&m), "{m:?}");
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let mut m = Matrix::zeros(3, 3);
        for (i, v) in [big, 3, 1, 5, big, 2, 7, 11, big].into_iter().enumerate() {
            m.data[i] = v;
        }
        assert_eq!(bareiss_rank(m.row_vecs()), None);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn degenerate_shapes() {
        assert_eq!(Matrix::zeros(0, 4).rank(), 0);
        assert_eq!(Matrix::zeros(4, 0).rank(), 0);
        assert_eq!(Matrix::zeros(3, 3).rank(), 0);
    }
}
