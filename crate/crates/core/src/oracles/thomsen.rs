//! Line-bundle splitting of `F_m* O(d)` by counting residues.
//!
//! Every monomial of degree `d + ms` in `x_0..x_n` is uniquely `x^a · (x^q)^m`
//! with `a ∈ {0..m-1}^{n+1}`, so `F_m* O(d) = ⊕ O(t)^{c_t}` where `c_t`
//! counts the residue tuples `a` with `Σ a_i = d - tm`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact_arith::{binom, chi_line, pow, sign, Scalar};

/// Default limit on the number of residue tuples visited by enumeration.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCount<T> {
    pub n: usize,
    pub m: u64,
    pub d: i64,
    /// `t -> c_t`, only nonzero counts.
    pub counts: BTreeMap<i64, T>,
}

impl<T: Scalar> ResidueCount<T> {
    pub fn total(&self) -> T {
        self.counts.values().fold(T::zero(), |a, c| a + c.clone())
    }

    /// `Σ_t c_t χ(O(t + s)) == χ(O(d + ms))`.
    pub fn chi_identity_holds(&self, s: i64) -> bool {
        let lhs = self
            .counts
            .iter()
            .fold(T::zero(), |a, (&t, c)| a + c.clone() * chi_line::<T>(self.n, t + s));
        lhs == chi_line::<T>(self.n, self.d + self.m as i64 * s)
    }

    /// `{0:1,-1:3}`, twists descending.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .counts
            .iter()
            .rev()
            .map(|(t, c)| format!("{t}:{c}"))
            .collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Closed form `c_t = Σ_j (-1)^j C(n+1, j) C(d - tm - jm + n, n)` (inclusion-exclusion
/// over coordinates exceeding `m - 1`).
pub fn thomsen_counts<T: Scalar>(n: usize, m: u64, d: i64) -> Result<ResidueCount<T>> {
    if m == 0 {
        return Err(Error::BadDegree);
    }
    let (ni, mi) = (n as i64, m as i64);
    // 0 <= d - tm <= (n+1)(m-1)
    let t_hi = d.div_euclid(mi);
    let t_lo = -(((n as i64 + 1) * (mi - 1) - d).div_euclid(mi));
    let mut counts = BTreeMap::new();
    for t in t_lo..=t_hi {
        let c = (0..=ni + 1).fold(T::zero(), |acc, j| {
            acc + sign::<T>(j) * binom::<T>(ni + 1, j) * binom::<T>(d - t * mi - j * mi + ni, ni)
        });
        if !c.is_zero() {
            counts.insert(t, c);
        }
    }
    Ok(ResidueCount { n, m, d, counts })
}

/// Brute-force count over all `m^(n+1)` residue tuples.
pub fn thomsen_enumerate<T: Scalar>(
    n: usize,
    m: u64,
    d: i64,
    budget: u128,
) -> Result<ResidueCount<T>> {
    if m == 0 {
        return Err(Error::BadDegree);
    }
    let needed = (m as u128).checked_pow(n as u32 + 1).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mi = m as i64;
    let mut raw: BTreeMap<i64, u64> = BTreeMap::new();
    let mut a = vec![0i64; n + 1];
    let mut sum = 0i64;
    loop {
        if (d - sum).rem_euclid(mi) == 0 {
            *raw.entry((d - sum) / mi).or_insert(0) += 1;
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == a.len() {
                let counts = raw
                    .into_iter()
                    .map(|(t, c)| (t, T::from_u64(c).expect("count fits")))
                    .collect();
                return Ok(ResidueCount { n, m, d, counts });
            }
            if a[i] + 1 < mi {
                a[i] += 1;
                sum += 1;
                break;
            }
            sum -= a[i];
            a[i] = 0;
            i += 1;
        }
    }
}

/// `m^n`, the rank of `F_m* O(d)`.
pub fn expected_total<T: Scalar>(n: usize, m: u64) -> T {
    pow(m, n)
}
