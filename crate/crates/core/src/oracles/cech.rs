//! Brute-force `h^q(P^n, Ω^p(k))` from Čech cochains, independent of Bott's formula.
//!
//! `Ω^p(k)` is resolved by the truncated Koszul complex
//!
//! ```text
//! 0 → Ω^p(k) → ∧^p V ⊗ O(k-p) → ∧^{p-1} V ⊗ O(k-p+1) → … → O(k) → 0
//! ```
//!
//! whose differential contracts `e_I` against `(x_0, …, x_n)`. Each term is
//! replaced by its Čech complex on the cover `U_i = {x_i ≠ 0}`; on `U_J`
//! sections of `O(d)` are spanned by Laurent monomials `x^a` with `|a| = d`
//! and `a_i >= 0` for `i ∉ J`. Assigning `x^a e_I` the weight `a + 1_I`
//! makes both differentials weight-preserving, so the double complex is a
//! direct sum of finite blocks, one per weight `w ∈ Z^{n+1}` with `|w| = k`.
//!
//! Weights are enumerated in the box `[-B, B]^{n+1}`. Blocks with weights of
//! mixed sign are acyclic, so `B = |k|` already captures everything; the
//! default adds one layer and the tests check that doubling `B` changes
//! nothing.
//!
//! Ordering: weights lexicographically; inside a block and degree, basis
//! elements `(I, J)` lexicographically by the sorted index lists of `I`
//! then `J`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::oracles::linalg::Matrix;

/// Default limit on the number of weight blocks.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

/// A subset of `{0..=n}` as a bitmask.
type Subset = u32;

fn members(s: Subset) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).collect()
}

/// Subsets of `{0..size}` with `len` elements, lexicographic on member lists.
fn subsets_of_len(size: usize, len: usize) -> Vec<Subset> {
    let mut out: Vec<Subset> = (0..1u32 << size)
        .filter(|s| s.count_ones() as usize == len)
        .collect();
    out.sort_by_key(|&s| members(s));
    out
}

/// `(-1)^{number of members of s below i}`.
fn position_sign(s: Subset, i: usize) -> i64 {
    if (s & ((1u32 << i) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Basis element `x^{w - 1_I} e_I` on the chart intersection `U_J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub koszul: Subset,
    pub charts: Subset,
}

/// One weight block of the total complex.
#[derive(Debug, Clone)]
pub struct WeightBlock {
    pub weight: Vec<i64>,
    /// Basis per total degree `0..=p+n`.
    pub basis: Vec<Vec<Cell>>,
    /// `differentials[q]` maps degree `q` to degree `q + 1` (rows index the target).
    pub differentials: Vec<Matrix>,
}

/// Truncated total complex computing the hypercohomology of the resolution.
#[derive(Debug, Clone)]
pub struct MonomialComplex {
    pub n: usize,
    pub p: usize,
    pub k: i64,
    pub bound: i64,
    pub blocks: Vec<WeightBlock>,
}

/// `B` such that every weight with nonzero contribution lies in `[-B, B]^{n+1}`, plus one.
pub fn support_bound(k: i64) -> i64 {
    k.abs() + 1
}

/// Weights in `[-bound, bound]^{len}` with entries summing to `total`, lexicographic.
fn weights(len: usize, bound: i64, total: i64) -> Vec<Vec<i64>> {
    fn go(prefix: &mut Vec<i64>, left: usize, bound: i64, rest: i64, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            if rest == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let slack = (left as i64 - 1) * bound;
        for v in (-bound).max(rest - slack)..=bound.min(rest + slack) {
            prefix.push(v);
            go(prefix, left - 1, bound, rest - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, bound, total, &mut out);
    out
}

fn block_count(n: usize, bound: i64) -> u128 {
    // crude upper bound: free choice of n coordinates
    (2 * bound as u128 + 1).saturating_pow(n as u32)
}

impl MonomialComplex {
    pub fn build(n: usize, p: usize, k: i64, bound: i64, budget: u128) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::BadDimension);
        }
        if p > n {
            return Err(Error::ZeroSummand { n, power: p as i64 });
        }
        let needed = block_count(n, bound);
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let vars = n + 1;
        let koszul_by_j: Vec<Vec<Subset>> = (0..=p).map(|j| subsets_of_len(vars, p - j)).collect();
        let charts_by_c: Vec<Vec<Subset>> = (0..vars).map(|c| subsets_of_len(vars, c + 1)).collect();

        let blocks = weights(vars, bound, k)
            .into_iter()
            .map(|w| {
                let negative = |koszul: Subset| -> Subset {
                    (0..vars)
                        .filter(|&i| w[i] - i64::from(koszul >> i & 1 == 1) < 0)
                        .fold(0, |acc, i| acc | 1 << i)
                };
                let mut basis = vec![Vec::new(); p + n + 1];
                for (j, ks) in koszul_by_j.iter().enumerate() {
                    for &koszul in ks {
                        let need = negative(koszul);
                        for (c, cs) in charts_by_c.iter().enumerate() {
                            for &charts in cs {
                                if charts & need == need {
                                    basis[j + c].push(Cell { koszul, charts });
                                }
                            }
                        }
                    }
                }
                for cells in &mut basis {
                    cells.sort_by_key(|cell| (members(cell.koszul), members(cell.charts)));
                }
                let differentials = (0..p + n)
                    .map(|q| total_differential(p, &basis[q], &basis[q + 1], vars))
                    .collect();
                WeightBlock {
                    weight: w,
                    basis,
                    differentials,
                }
            })
            .collect();
        Ok(Self {
            n,
            p,
            k,
            bound,
            blocks,
        })
    }

    /// Dimension of the truncated complex in each total degree.
    pub fn dims(&self) -> Vec<usize> {
        let mut d = vec![0; self.p + self.n + 1];
        for b in &self.blocks {
            for (q, cells) in b.basis.iter().enumerate() {
                d[q] += cells.len();
            }
        }
        d
    }

    /// `d ∘ d = 0` in every block and degree.
    pub fn check_d_squared(&self) -> Result<()> {
        for b in &self.blocks {
            for q in 0..b.differentials.len().saturating_sub(1) {
                let dd = b.differentials[q + 1]
                    .mul(&b.differentials[q])
                    .ok_or(Error::NotAComplex { degree: q })?;
                if !dd.is_zero() {
                    return Err(Error::NotAComplex { degree: q });
                }
            }
        }
        Ok(())
    }

    /// `dim H^q` for `q = 0..=p+n`.
    pub fn cohomology(&self) -> Vec<u64> {
        let top = self.p + self.n;
        let mut h = vec![0i64; top + 1];
        for b in &self.blocks {
            let ranks: Vec<usize> = b.differentials.iter().map(Matrix::rank).collect();
            for q in 0..=top {
                let out = if q < top { ranks[q] } else { 0 };
                let inc = if q > 0 { ranks[q - 1] } else { 0 };
                h[q] += b.basis[q].len() as i64 - out as i64 - inc as i64;
            }
        }
        h.into_iter().map(|v| v as u64).collect()
    }
}

/// `D = δ_Koszul + (-1)^j δ_Čech` from degree `q` cells to degree `q + 1` cells.
fn total_differential(p: usize, source: &[Cell], target: &[Cell], vars: usize) -> Matrix {
    let lookup: HashMap<Cell, usize> = target.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let index = |cell: Cell| *lookup.get(&cell).expect("differential lands in the basis");
    let mut m = Matrix::zeros(target.len(), source.len());
    for (col, cell) in source.iter().enumerate() {
        let j = p - cell.koszul.count_ones() as usize;
        for i in members(cell.koszul) {
            let to = Cell {
                koszul: cell.koszul & !(1 << i),
                charts: cell.charts,
            };
            let row = index(to);
            m.set(row, col, m.get(row, col) + position_sign(cell.koszul, i));
        }
        let cech_sign = if j.is_multiple_of(2) { 1 } else { -1 };
        for i in (0..vars).filter(|&i| cell.charts >> i & 1 == 0) {
            let grown = cell.charts | 1 << i;
            let to = Cell {
                koszul: cell.koszul,
                charts: grown,
            };
            let row = index(to);
            m.set(row, col, m.get(row, col) + cech_sign * position_sign(grown, i));
        }
    }
    m
}

/// `h^q(P^n, Ω^p(k))` for `q = 0..=n` with an explicit weight bound.
pub fn koszul_cech_with_bound(n: usize, p: usize, k: i64, bound: i64, budget: u128) -> Result<Vec<u64>> {
    let complex = MonomialComplex::build(n, p, k, bound, budget)?;
    complex.check_d_squared()?;
    let h = complex.cohomology();
    // the resolution has length p, so nothing lives above degree n
    if h[n + 1..].iter().any(|&v| v != 0) {
        return Err(Error::NotAComplex { degree: n + 1 });
    }
    Ok(h[..=n].to_vec())
}

/// `h^q(P^n, Ω^p(k))` for `q = 0..=n`. Desk-scale: intended for `n <= 4`, `|k| <= 8`.
pub fn koszul_cech(n: usize, p: usize, k: i64, budget: u128) -> Result<Vec<u64>> {
    koszul_cech_with_bound(n, p, k, support_bound(k), budget)
}
