//! Beilinson spectral sequence bookkeeping at the level of ranks.
//!
//! `E_1^{r,s} = H^s(E(r)) ⊗ Ω^{-r}(-r)` on the square `-n <= r <= 0`,
//! `0 <= s <= n`. Under (†) the only possible differentials touching a
//! middle row go to the bottom row or come from the top row, the diagonal
//! survives unchanged, and the bottom row is filled by the exact sequences
//! `0 → E_1^{-k-t,t-1} → E_t^{-k,0} → E_{t+1}^{-k,0} → 0`. Nothing here
//! models the maps themselves; cells whose rank depends on unknown map
//! ranks are not reported.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bundle::Summand;
use crate::cohomology::{hset, CohomologyTable, HSet};
use crate::error::{Error, Point, Result};
use crate::exact_arith::{binom, sign, Scalar};
use crate::splitting::check_dagger;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Cell<T> {
    pub r: i64,
    pub s: usize,
    /// `h^s(E(r))`.
    pub mult: T,
    /// `Ω^{-r}(-r)` in canonical form.
    pub label: Summand,
}

impl<T: Scalar> E1Cell<T> {
    /// Rank of `E_1^{r,s}` as a bundle.
    pub fn rank(&self, n: usize) -> T {
        self.mult.clone() * binom::<T>(n as i64, -self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E1Page<T> {
    pub n: usize,
    /// Row-major by `s`, then `r = -n..=0`.
    cells: Vec<E1Cell<T>>,
}

impl<T: Scalar> E1Page<T> {
    pub fn cell(&self, r: i64, s: usize) -> &E1Cell<T> {
        let n = self.n as i64;
        assert!((-n..=0).contains(&r) && s <= self.n, "({r}, {s}) outside the E1 square");
        &self.cells[s * (self.n + 1) + (r + n) as usize]
    }

    pub fn cells(&self) -> impl Iterator<Item = &E1Cell<T>> + '_ {
        self.cells.iter()
    }

    /// Grid with rows `s = n..0` top to bottom and columns `r = -n..0`.
    pub fn render(&self) -> String {
        let n = self.n;
        let text = |c: &E1Cell<T>| {
            if c.mult.is_zero() {
                "·".to_string()
            } else {
                format!("{}·{}", c.mult, c.label)
            }
        };
        let width = self.cells.iter().map(|c| text(c).chars().count()).max().unwrap_or(1);
        let mut out = String::new();
        for s in (0..=n).rev() {
            write!(out, "s={s:<2}|").unwrap();
            for r in -(n as i64)..=0 {
                let t = text(self.cell(r, s));
                write!(out, " {t:>width$}").unwrap();
            }
            out.push('\n');
        }
        write!(out, "    +").unwrap();
        for r in -(n as i64)..=0 {
            let t = format!("r={r}");
            write!(out, " {t:>width$}").unwrap();
        }
        out.push('\n');
        out
    }

    /// CSV with columns `r,s,mult,label`, ordered by `s` then `r`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,s,mult,label\n");
        for c in &self.cells {
            writeln!(out, "{},{},{},{}", c.r, c.s, c.mult, c.label).unwrap();
        }
        out
    }
}

/// `E_1` of the Beilinson spectral sequence read from a table.
pub fn e1_page<T: Scalar>(table: &CohomologyTable<T>) -> Result<E1Page<T>> {
    let n = table.n();
    let ni = n as i64;
    let w = table.window();
    if w.lo > -ni || w.hi < 0 {
        return Err(Error::WindowInsufficient(format!(
            "E1 page needs twists [-{n}, 0], window is [{}, {}]",
            w.lo, w.hi
        )));
    }
    let mut cells = Vec::with_capacity((n + 1) * (n + 1));
    for s in 0..=n {
        for r in -ni..=0 {
            cells.push(E1Cell {
                r,
                s,
                mult: table.entry(r)[s].clone(),
                label: Summand::normalize(n, -r, -r)?,
            });
        }
    }
    Ok(E1Page { n, cells })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrowStatus {
    PossiblyNonzero,
    ForcedZero,
}

/// The differential `d_page: E^{source} → E^{target}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub source: Point,
    pub target: Point,
    pub page: usize,
    pub status: ArrowStatus,
}

/// Every differential `d_t: E_t^{r,s} → E_t^{r+t,s-t+1}` inside the square,
/// classified under (†).
pub fn classify_arrows<T: Scalar>(page: &E1Page<T>, h: &HSet) -> Result<Vec<Arrow>> {
    check_dagger(h)?;
    let n = page.n;
    let ni = n as i64;
    let middle = |s: usize| (1..n).contains(&s);
    let mut arrows = Vec::new();
    for s in 0..=n {
        for r in -ni..=0 {
            for t in 1..=s + 1 {
                let (tr, ts) = (r + t as i64, s + 1 - t);
                if tr > 0 {
                    break;
                }
                let allowed_from = !middle(s) || (ts == 0 && r + s as i64 + 1 == tr && r + (s as i64) < 0);
                let allowed_to = !middle(ts) || (s == n && t == n - ts + 1 && tr + ts as i64 > 0);
                let nonzero = !page.cell(r, s).mult.is_zero() && !page.cell(tr, ts).mult.is_zero();
                let status = if nonzero && allowed_from && allowed_to {
                    ArrowStatus::PossiblyNonzero
                } else {
                    ArrowStatus::ForcedZero
                };
                arrows.push(Arrow {
                    source: (r, s),
                    target: (tr, ts),
                    page: t,
                    status,
                });
            }
        }
    }
    Ok(arrows)
}

fn dagger_hset<T: Scalar>(table: &CohomologyTable<T>) -> Result<HSet> {
    let h = hset(table)?;
    check_dagger(&h)?;
    Ok(h)
}

/// `rank E_t^{-k,0}` for `1 <= k <= n` and `2 <= t <= n + 1`, from the exact
/// sequences above and `E_∞^{-k,0} = 0`.
pub fn bottom_row_dims<T: Scalar>(table: &CohomologyTable<T>) -> Result<BTreeMap<(usize, usize), T>> {
    dagger_hset(table)?;
    let page = e1_page(table)?;
    let n = page.n;
    let mut out = BTreeMap::new();
    for k in 1..=n {
        for t in 2..=n + 1 {
            out.insert((k, t), tail_sum(&page, k, t));
        }
    }
    Ok(out)
}

/// `Σ_{t' >= t} rank E_1^{-k-t', t'-1}`.
fn tail_sum<T: Scalar>(page: &E1Page<T>, k: usize, t: usize) -> T {
    let n = page.n;
    (t..)
        .take_while(|&tp| k + tp <= n)
        .fold(T::zero(), |acc, tp| {
            acc + page.cell(-((k + tp) as i64), tp - 1).rank(n)
        })
}

/// `(rank E_∞^{0,0}, rank E_∞^{-n,n})`, valid when (†) holds and
/// `ℋ ⊂ {r + s <= 0}`.
pub fn corner_ranks<T: Scalar>(table: &CohomologyTable<T>, rank: &T) -> Result<(T, T)> {
    let h = dagger_hset(table)?;
    if let Some(&(r, s)) = h.iter().find(|&&(r, s)| r + s as i64 > 0) {
        return Err(Error::Hypothesis(format!(
            "({r}, {s}) lies in ℋ but r + s > 0"
        )));
    }
    let page = e1_page(table)?;
    let n = page.n;
    let ni = n as i64;
    // alternating ranks along the top row resolution
    let top = (0..=ni).fold(T::zero(), |acc, j| {
        acc + sign::<T>(j) * page.cell(-ni + j, n).mult.clone() * binom::<T>(ni, ni - j)
    });
    let diagonal = diagonal(&page)
        .iter()
        .fold(T::zero(), |acc, (&s, m)| acc + m.clone() * binom::<T>(ni, s as i64));
    let origin = rank.clone() - diagonal - top.clone();
    if top.is_negative() || origin.is_negative() {
        return Err(Error::Inconsistent(format!(
            "negative corner rank: E∞^(0,0) = {origin}, E∞^(-n,n) = {top}"
        )));
    }
    Ok((origin, top))
}

/// `s -> h^s(E(-s))`, the multiplicity of `Ω^s(s)` in `E_∞^{-s,s}` for `1 <= s <= n-1`.
fn diagonal<T: Scalar>(page: &E1Page<T>) -> BTreeMap<usize, T> {
    (1..page.n)
        .map(|s| (s, page.cell(-(s as i64), s).mult.clone()))
        .collect()
}

/// Everything the table determines about the spectral sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageReport<T> {
    pub page: E1Page<T>,
    pub arrows: Vec<Arrow>,
    /// Multiplicities of `Ω^s(s)` on the diagonal.
    pub diagonal: BTreeMap<usize, T>,
    /// `(rank E_∞^{0,0}, rank E_∞^{-n,n})`, when `ℋ ⊂ {r + s <= 0}`.
    pub corners: Option<(T, T)>,
    /// `(k, t) -> rank E_t^{-k,0}` for `k >= 1`.
    pub bottom_row: BTreeMap<(usize, usize), T>,
    /// `t -> rank E_t^{0,0}`, when the corner ranks are known.
    pub bottom_corner: Option<BTreeMap<usize, T>>,
}

pub fn page_report<T: Scalar>(table: &CohomologyTable<T>, rank: &T) -> Result<PageReport<T>> {
    let h = dagger_hset(table)?;
    let page = e1_page(table)?;
    let arrows = classify_arrows(&page, &h)?;
    let bottom_row = bottom_row_dims(table)?;
    let corners = match corner_ranks(table, rank) {
        Ok(c) => Some(c),
        Err(Error::Hypothesis(_)) => None,
        Err(e) => return Err(e),
    };
    let bottom_corner = corners.as_ref().map(|(origin, _)| {
        (2..=page.n + 1)
            .map(|t| (t, origin.clone() + tail_sum(&page, 0, t)))
            .collect()
    });
    Ok(PageReport {
        diagonal: diagonal(&page),
        page,
        arrows,
        corners,
        bottom_row,
        bottom_corner,
    })
}
