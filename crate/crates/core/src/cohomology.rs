//! Bott's formula, cohomology tables over explicit twist windows, the
//! middle-cohomology support `ℋ(E)` and the Serre-duality reflection.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bundle::{FormalBundle, Summand};
use crate::error::{Error, Point, Result};
use crate::exact_arith::{binom, sign, Scalar};

/// Inclusive range of twists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::BadWindow { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, t: i64) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn twists(&self) -> impl DoubleEndedIterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Parses `a:b`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("window must look like a:b, got {s:?}")))?;
        let lo = a.trim().parse().map_err(|_| Error::Parse(format!("bad window start {a:?}")))?;
        let hi = b.trim().parse().map_err(|_| Error::Parse(format!("bad window end {b:?}")))?;
        Self::new(lo, hi)
    }
}

/// `h^q(P^n, O(k))` for `q = 0..=n`.
pub fn line_h<T: Scalar>(n: usize, k: i64) -> Vec<T> {
    let mut h = vec![T::zero(); n + 1];
    let ni = n as i64;
    if k >= 0 {
        h[0] = binom(ni + k, ni);
    } else if k < -ni {
        h[n] = binom(-k - 1, ni);
    }
    h
}

/// `h^q(P^n, Ω^p(k))` for `q = 0..=n` (Bott's formula).
pub fn bott_h<T: Scalar>(n: usize, p: usize, k: i64) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::BadDimension);
    }
    if p > n {
        return Err(Error::ZeroSummand { n, power: p as i64 });
    }
    if p == 0 {
        return Ok(line_h(n, k));
    }
    if p == n {
        return Ok(line_h(n, k - n as i64 - 1));
    }
    let (ni, pi) = (n as i64, p as i64);
    let mut h = vec![T::zero(); n + 1];
    if k > pi {
        h[0] = binom::<T>(k - 1, pi) * binom::<T>(ni + k - pi, k);
    } else if k == 0 {
        h[p] = T::one();
    } else if k < pi - ni {
        h[n] = binom::<T>(-k - 1, ni - pi) * binom::<T>(pi - k, -k);
    }
    Ok(h)
}

/// `h^q(P^n, S(t))` for a canonical summand.
pub fn summand_h<T: Scalar>(n: usize, s: &Summand, t: i64) -> Vec<T> {
    match *s {
        Summand::Line(k) => line_h(n, k + t),
        Summand::Omega { p, twist } => bott_h(n, p, twist + t).expect("canonical summand"),
    }
}

/// `h^q(E(t))` over a window of twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable<T> {
    n: usize,
    window: Window,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> CohomologyTable<T> {
    /// Builds a table from explicit rows, one per twist of the window.
    pub fn from_rows(n: usize, window: Window, rows: Vec<Vec<T>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDimension);
        }
        if rows.len() != window.width() {
            return Err(Error::Parse(format!(
                "expected {} rows for window [{}, {}], got {}",
                window.width(),
                window.lo,
                window.hi,
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n + 1 {
                return Err(Error::Parse(format!(
                    "row for twist {} has {} entries, expected {}",
                    window.lo + i as i64,
                    row.len(),
                    n + 1
                )));
            }
            if row.iter().any(|v| v.is_negative()) {
                return Err(Error::Parse(format!(
                    "row for twist {} has a negative entry",
                    window.lo + i as i64
                )));
            }
        }
        Ok(Self { n, window, rows })
    }

    /// Table of a formal sum given as `(summand, multiplicity)` terms.
    pub fn of_terms<'a, I>(n: usize, terms: I, window: Window) -> Self
    where
        I: IntoIterator<Item = (&'a Summand, T)> + Clone,
    {
        let rows = window
            .twists()
            .map(|t| {
                let mut row = vec![T::zero(); n + 1];
                for (s, m) in terms.clone() {
                    for (acc, h) in row.iter_mut().zip(summand_h::<T>(n, s, t)) {
                        *acc = acc.clone() + h * m.clone();
                    }
                }
                row
            })
            .collect();
        Self { n, window, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// `(h^0, .., h^n)` at twist `t`. Panics outside the window.
    pub fn entry(&self, t: i64) -> &[T] {
        assert!(self.window.contains(t), "twist {t} outside the table window");
        &self.rows[(t - self.window.lo) as usize]
    }

    pub fn get(&self, t: i64, q: usize) -> Option<&T> {
        if self.window.contains(t) {
            self.rows[(t - self.window.lo) as usize].get(q)
        } else {
            None
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = (i64, &[T])> + '_ {
        self.window.twists().zip(self.rows.iter().map(Vec::as_slice))
    }

    pub fn euler_char(&self, t: i64) -> T {
        self.entry(t)
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (q, h)| acc + sign::<T>(q as i64) * h.clone())
    }

    /// Sub-table on a smaller window.
    pub fn restrict(&self, window: Window) -> Result<Self> {
        if !self.window.contains_window(&window) {
            return Err(Error::WindowInsufficient(format!(
                "[{}, {}] is not inside the table window [{}, {}]",
                window.lo, window.hi, self.window.lo, self.window.hi
            )));
        }
        let rows = window.twists().map(|t| self.entry(t).to_vec()).collect();
        Ok(Self {
            n: self.n,
            window,
            rows,
        })
    }

    /// CSV with header `twist,h0,...,hn`, rows ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("twist");
        for q in 0..=self.n {
            write!(out, ",h{q}").unwrap();
        }
        out.push('\n');
        for (t, row) in self.rows() {
            write!(out, "{t}").unwrap();
            for h in row {
                write!(out, ",{h}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

impl CohomologyTable<crate::Int> {
    /// Parses the CSV produced by [`CohomologyTable::to_csv`]; twists must be
    /// consecutive and ascending.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols.len() < 3 || cols[0] != "twist" {
            return Err(Error::Parse(format!("bad table header {header:?}")));
        }
        let n = cols.len() - 2;
        for (q, c) in cols[1..].iter().enumerate() {
            if *c != format!("h{q}") {
                return Err(Error::Parse(format!("bad column name {c:?}")));
            }
        }
        let mut twists = Vec::new();
        let mut rows = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != n + 2 {
                return Err(Error::Parse(format!("bad row {line:?}")));
            }
            let t: i64 = fields[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad twist in row {line:?}")))?;
            let row = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<crate::Int>()
                        .map_err(|_| Error::Parse(format!("bad entry {f:?} in row {line:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            twists.push(t);
            rows.push(row);
        }
        let (&lo, &hi) = match (twists.first(), twists.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parse("table has no rows".into())),
        };
        if twists.iter().zip(lo..).any(|(&t, expect)| t != expect) {
            return Err(Error::Parse("twists must be consecutive and ascending".into()));
        }
        Self::from_rows(n, Window::new(lo, hi)?, rows)
    }
}

/// Exact table of a formal bundle.
pub fn table<T: Scalar>(e: &FormalBundle, window: Window) -> CohomologyTable<T> {
    let terms: Vec<(Summand, T)> = e.summands().map(|(s, m)| (*s, T::of(m as i64))).collect();
    CohomologyTable::of_terms(e.n(), terms.iter().map(|(s, m)| (s, m.clone())), window)
}

/// The set `ℋ(E)` of `(twist, degree)` pairs with nonzero middle cohomology.
pub type HSet = BTreeSet<Point>;

/// `ℋ` read off a table. The middle rows must vanish at both window ends,
/// otherwise the support may leak outside the window.
pub fn hset<T: Scalar>(table: &CohomologyTable<T>) -> Result<HSet> {
    let n = table.n();
    let w = table.window();
    for t in [w.lo, w.hi] {
        if let Some(s) = (1..n).find(|&s| !table.entry(t)[s].is_zero()) {
            return Err(Error::WindowInsufficient(format!(
                "h^{s} is nonzero at window boundary twist {t}"
            )));
        }
    }
    Ok(table
        .rows()
        .flat_map(|(t, row)| {
            (1..n)
                .filter(move |&s| !row[s].is_zero())
                .map(move |s| (t, s))
        })
        .collect())
}

/// Exact `ℋ(E)` from Bott's formula: `Ω^p(c)` contributes the single point `(-c, p)`.
pub fn hset_exact(e: &FormalBundle) -> HSet {
    e.summands()
        .filter_map(|(s, _)| match *s {
            Summand::Omega { p, twist } => Some((-twist, p)),
            Summand::Line(_) => None,
        })
        .collect()
}

/// Window around the exact support of a formal bundle with margin `n + 1`.
///
/// Every line summand `O(k)` is visible through `h^0` and `h^n` on
/// `[-k-n-1, -k]`, and every `Ω^p(c)` has its middle point at `-c`.
pub fn default_window(e: &FormalBundle) -> Window {
    let margin = e.n() as i64 + 1;
    let pts = e.summands().map(|(s, _)| -s.twist());
    let (lo, hi) = pts.fold((i64::MAX, i64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if lo > hi {
        Window { lo: -margin, hi: margin }
    } else {
        Window {
            lo: lo - margin,
            hi: hi + margin,
        }
    }
}

/// Reflects a table through Serre duality: the result at twist `t`, degree
/// `q` is the input at twist `-t`, degree `n - q`. For `T = table(E)` this is
/// the table of `E^∨(-n-1)`.
pub fn serre_dual_table<T: Scalar>(table: &CohomologyTable<T>) -> CohomologyTable<T> {
    let n = table.n();
    let w = table.window();
    let window = Window { lo: -w.hi, hi: -w.lo };
    let rows = window
        .twists()
        .map(|t| {
            let src = table.entry(-t);
            (0..=n).map(|q| src[n - q].clone()).collect()
        })
        .collect();
    CohomologyTable { n, window, rows }
}

/// Rank from the `n`-th finite difference of the `χ` row at the window start.
pub fn rank_from_table<T: Scalar>(table: &CohomologyTable<T>) -> Result<T> {
    let n = table.n();
    let w = table.window();
    if w.width() < n + 1 {
        return Err(Error::WindowInsufficient(format!(
            "rank recovery needs at least {} twists, window has {}",
            n + 1,
            w.width()
        )));
    }
    let ni = n as i64;
    Ok((0..=ni).fold(T::zero(), |acc, j| {
        acc + sign::<T>(ni - j) * binom::<T>(ni, j) * table.euler_char(w.lo + j)
    }))
}
