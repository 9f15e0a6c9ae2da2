//! The Frobenius morphism `F_m` at the level of cohomology tables.
//!
//! `F_m` is affine and `F_m^* O(j) = O(mj)`, so by the projection formula
//! `h^j((F_m* E)(k)) = h^j(E(mk))`.

use crate::bundle::{FormalBundle, Summand};
use crate::cohomology::{summand_h, CohomologyTable, Window};
use crate::error::{Error, Result};
use crate::exact_arith::Scalar;

/// `F_m^* O(k) = O(mk)`.
pub fn pullback_line(k: i64, m: u64) -> i64 {
    k * m as i64
}

/// Table of `F_m* E` over `window`.
pub fn pushforward_table<T: Scalar>(
    e: &FormalBundle,
    m: u64,
    window: Window,
) -> Result<CohomologyTable<T>> {
    if m == 0 {
        return Err(Error::BadDegree);
    }
    let n = e.n();
    let rows = window
        .twists()
        .map(|k| {
            let mut row = vec![T::zero(); n + 1];
            for (s, mult) in e.summands() {
                let mult = T::of(mult as i64);
                for (acc, h) in row.iter_mut().zip(summand_h::<T>(n, s, pullback_line(k, m))) {
                    *acc = acc.clone() + h * mult.clone();
                }
            }
            row
        })
        .collect();
    CohomologyTable::from_rows(n, window, rows)
}

/// Lowest twist with sections and highest twist with top cohomology.
fn outer_support(e: &FormalBundle) -> Option<(i64, i64)> {
    let n = e.n() as i64;
    e.summands()
        .map(|(s, _)| match *s {
            Summand::Line(k) => (-k, -k - n - 1),
            Summand::Omega { p, twist } => (p as i64 + 1 - twist, p as i64 - n - 1 - twist),
        })
        .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
}

/// A window adequate for decomposing `F_m* E`: it contains every possible
/// line twist of the decomposition with `h^0`/`h^n` margin `n + 1`, and the
/// middle support with zero boundary columns.
pub fn pushforward_window(e: &FormalBundle, m: u64) -> Window {
    let n = e.n() as i64;
    let m = m.max(1) as i64;
    let Some((first_h0, last_hn)) = outer_support(e) else {
        return Window { lo: -n - 1, hi: n + 1 };
    };
    let mut lo = first_h0.div_euclid(m) + i64::from(first_h0.rem_euclid(m) != 0);
    let mut hi = last_hn.div_euclid(m) + n + 1;
    for (s, _) in e.summands() {
        if let Summand::Omega { twist, .. } = *s {
            if twist % m == 0 {
                lo = lo.min(-twist / m);
                hi = hi.max(-twist / m);
            }
        }
    }
    let (lo, hi) = (lo.min(hi), hi.max(lo));
    Window {
        lo: lo - n - 1,
        hi: hi + n + 1,
    }
}

fn only_in_degree<T: Scalar>(row: &[T], q: usize) -> bool {
    row.iter().enumerate().all(|(i, h)| i == q || h.is_zero())
}

/// Whether `E(m)` has cohomology only in degree 0 and `E(-m)` only in degree `n`.
fn regular_at<T: Scalar>(e: &FormalBundle, m: i64) -> bool {
    let n = e.n();
    let sum = |t: i64| {
        let mut row = vec![T::zero(); n + 1];
        for (s, mult) in e.summands() {
            for (acc, h) in row.iter_mut().zip(summand_h::<T>(n, s, t)) {
                *acc = acc.clone() + h * T::of(mult as i64);
            }
        }
        row
    };
    only_in_degree(&sum(m), 0) && only_in_degree(&sum(-m), n)
}

fn closed_form_threshold(e: &FormalBundle) -> i64 {
    let n = e.n() as i64;
    e.summands()
        .map(|(s, _)| match *s {
            Summand::Line(c) => 1.max(c + 1).max(-n - c),
            Summand::Omega { p, twist: c } => 1.max(c.abs() + 1).max(p as i64 - n - c),
        })
        .max()
        .unwrap_or(1)
}

/// The least `m0 >= 1` such that for every `m >= m0`, `E(m)` has cohomology
/// only in degree 0 and `E(-m)` only in degree `n` (vacuous when everything
/// vanishes).
///
/// The per-summand closed form is re-certified by scanning twists in
/// `[-m0-n-1, m0+n+1]`; a disagreement is an error.
pub fn m_threshold(e: &FormalBundle) -> Result<u64> {
    if e.is_zero() {
        return Err(Error::ZeroBundle);
    }
    let closed = closed_form_threshold(e);
    let top = closed + e.n() as i64 + 1;
    // smallest m such that every m' in [m, top] is regular
    let mut scan = top + 1;
    for m in (1..=top).rev() {
        if regular_at::<crate::Int>(e, m) {
            scan = m;
        } else {
            break;
        }
    }
    if scan != closed {
        return Err(Error::ThresholdDisagreement {
            closed_form: closed as u64,
            scan: if scan > top {
                format!("no regular twist up to {top}")
            } else {
                scan.to_string()
            },
        });
    }
    Ok(closed as u64)
}
