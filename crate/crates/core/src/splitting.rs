//! Splitting types read off cohomology tables.
//!
//! A bundle whose middle support `ℋ(E)` satisfies condition (†) is a sum of
//! `Ω^s(-r)^{a_{r,s}}` with `a_{r,s} = h^s(E(r))` plus line bundles. The
//! middle multiplicities are read directly from the table; the line
//! multiplicities come from inverting the residual `h^0` row, and the result
//! is always checked by rebuilding the whole table.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde_json::Value;

use crate::bundle::{FormalBundle, Summand};
use crate::cohomology::{hset, rank_from_table, summand_h, CohomologyTable, HSet, Window};
use crate::error::{Error, Point, Result};
use crate::exact_arith::{binom, sign, Scalar};
use crate::frobenius::{pushforward_table, pushforward_window};

/// Every ordered pair `((r, s), (r + t, s - t + 1))` of `H` with `t >= 1`.
pub fn dagger_violations(h: &HSet) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for &(r, s) in h {
        for t in 1..=s as i64 {
            let target = (r + t, s - t as usize + 1);
            if h.contains(&target) {
                out.push(((r, s), target));
            }
        }
    }
    out
}

/// Condition (†): for `(r, s)` in `H` and `t > 0`, `(r + t, s - t + 1)` is not in `H`.
pub fn check_dagger(h: &HSet) -> Result<()> {
    let pairs = dagger_violations(h);
    if pairs.is_empty() {
        Ok(())
    } else {
        Err(Error::DaggerViolated { pairs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Checks {
    pub rank: bool,
    pub chi: bool,
    pub reconstruction: bool,
}

/// `⊕ Ω^s(-r)^{a_{r,s}} ⊕ ⊕ O(k)^{b_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<T> {
    pub n: usize,
    /// `(r, s) -> a_{r,s}`, the multiplicity of `Ω^s(-r)`.
    pub middle: BTreeMap<Point, T>,
    /// `k -> b_k`, the multiplicity of `O(k)`.
    pub lines: BTreeMap<i64, T>,
    pub checks: Checks,
    /// `#ℋ`.
    pub rho: usize,
}

impl<T: Scalar> Decomposition<T> {
    fn terms(&self) -> Vec<(Summand, T)> {
        let middle = self.middle.iter().map(|(&(r, s), m)| {
            (Summand::Omega { p: s, twist: -r }, m.clone())
        });
        let lines = self.lines.iter().map(|(&k, m)| (Summand::Line(k), m.clone()));
        middle.chain(lines).collect()
    }

    pub fn rank(&self) -> T {
        let n = self.n as i64;
        let middle = self
            .middle
            .iter()
            .fold(T::zero(), |acc, (&(_, s), m)| acc + binom::<T>(n, s as i64) * m.clone());
        self.lines.values().fold(middle, |acc, m| acc + m.clone())
    }

    /// Cohomology table of the decomposition itself.
    pub fn reconstruct(&self, window: Window) -> CohomologyTable<T> {
        let terms = self.terms();
        CohomologyTable::of_terms(self.n, terms.iter().map(|(s, m)| (s, m.clone())), window)
    }

    /// As a formal bundle, when every multiplicity fits in `u64`.
    pub fn to_bundle(&self) -> Option<FormalBundle> {
        let mut e = FormalBundle::zero(self.n).ok()?;
        for (s, m) in self.terms() {
            e.add(s, m.to_u64()?).ok()?;
        }
        Some(e)
    }

    /// Middle summands sorted by `(s, r)`, as `(s, twist, mult)` with `twist = -r`.
    pub fn middle_sorted(&self) -> Vec<(usize, i64, T)> {
        let mut v: Vec<_> = self
            .middle
            .iter()
            .map(|(&(r, s), m)| (s, -r, m.clone()))
            .collect();
        v.sort_by_key(|&(s, twist, _)| (s, -twist));
        v
    }

    /// Line summands, twist descending.
    pub fn lines_sorted(&self) -> Vec<(i64, T)> {
        self.lines.iter().rev().map(|(&k, m)| (k, m.clone())).collect()
    }

    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"n\":{},\"middle\":[", self.n);
        for (i, (s, twist, m)) in self.middle_sorted().into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{{\"s\":{s},\"twist\":{twist},\"mult\":{m}}}").unwrap();
        }
        out.push_str("],\"lines\":[");
        for (i, (k, m)) in self.lines_sorted().into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{{\"twist\":{k},\"mult\":{m}}}").unwrap();
        }
        write!(
            out,
            "],\"checks\":{{\"rank\":{},\"chi\":{},\"reconstruction\":{}}}}}",
            self.checks.rank, self.checks.chi, self.checks.reconstruction
        )
        .unwrap();
        out
    }
}

impl Decomposition<crate::Int> {
    /// Parses the JSON written by [`Decomposition::to_json`]. `rho` is not
    /// part of the schema and is recomputed from the middle summands.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = |obj: &Value, key: &str| -> Result<Value> {
            obj.get(key)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
        };
        let int = |x: Value| -> Result<crate::Int> {
            match x {
                Value::Number(num) => num
                    .to_string()
                    .parse()
                    .map_err(|_| Error::Parse(format!("not an integer: {num}"))),
                other => Err(Error::Parse(format!("not an integer: {other}"))),
            }
        };
        let small = |x: Value| -> Result<i64> {
            x.as_i64()
                .ok_or_else(|| Error::Parse(format!("not a small integer: {x}")))
        };
        let n = small(field(&v, "n")?)? as usize;
        let mut middle = BTreeMap::new();
        let list = field(&v, "middle")?;
        for item in list.as_array().ok_or_else(|| Error::Parse("middle must be a list".into()))? {
            let s = small(field(item, "s")?)? as usize;
            let twist = small(field(item, "twist")?)?;
            middle.insert((-twist, s), int(field(item, "mult")?)?);
        }
        let mut lines = BTreeMap::new();
        let list = field(&v, "lines")?;
        for item in list.as_array().ok_or_else(|| Error::Parse("lines must be a list".into()))? {
            lines.insert(small(field(item, "twist")?)?, int(field(item, "mult")?)?);
        }
        let checks = field(&v, "checks")?;
        let flag = |key: &str| -> Result<bool> {
            field(&checks, key)?
                .as_bool()
                .ok_or_else(|| Error::Parse(format!("{key} must be a bool")))
        };
        Ok(Self {
            n,
            rho: middle.len(),
            middle,
            lines,
            checks: Checks {
                rank: flag("rank")?,
                chi: flag("chi")?,
                reconstruction: flag("reconstruction")?,
            },
        })
    }
}

impl<T: Scalar> fmt::Display for Decomposition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (s, twist, m) in self.middle_sorted() {
            parts.push(format!("Ω^{s}({twist})^{m}"));
        }
        for (k, m) in self.lines_sorted() {
            parts.push(format!("O({k})^{m}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Decomposes a table satisfying (†).
///
/// The window must contain the middle support with `n + 1` extra twists on
/// each side, and every line summand `O(k)` must be visible on
/// `[-k-n-1, -k]`; otherwise reconstruction fails.
pub fn decompose<T: Scalar>(table: &CohomologyTable<T>) -> Result<Decomposition<T>> {
    let n = table.n();
    let ni = n as i64;
    let w = table.window();
    let h = hset(table)?;
    check_dagger(&h)?;
    if w.width() < n + 2 {
        return Err(Error::WindowInsufficient(format!(
            "window [{}, {}] is narrower than n + 2 = {}",
            w.lo,
            w.hi,
            n + 2
        )));
    }
    if let (Some(rmin), Some(rmax)) = (h.iter().map(|p| p.0).min(), h.iter().map(|p| p.0).max()) {
        if w.lo > rmin - ni - 1 || w.hi < rmax + ni + 1 {
            return Err(Error::WindowInsufficient(format!(
                "middle support spans [{rmin}, {rmax}]; window [{}, {}] lacks the margin {}",
                w.lo,
                w.hi,
                ni + 1
            )));
        }
    }

    let middle: BTreeMap<Point, T> = h
        .iter()
        .map(|&(r, s)| ((r, s), table.entry(r)[s].clone()))
        .collect();

    // h^0 and h^n rows with the Ω contributions removed
    let mut residual0 = Vec::with_capacity(w.width());
    for (t, row) in table.rows() {
        let mut f0 = row[0].clone();
        let mut fn_ = row[n].clone();
        for (&(r, s), a) in &middle {
            let contrib = summand_h::<T>(n, &Summand::Omega { p: s, twist: -r }, t);
            f0 = f0 - contrib[0].clone() * a.clone();
            fn_ = fn_ - contrib[n].clone() * a.clone();
        }
        if f0.is_negative() || fn_.is_negative() {
            return Err(Error::NotDecomposable(format!(
                "negative residual at twist {t} after removing the Ω summands"
            )));
        }
        residual0.push(f0);
    }
    let f = |t: i64| residual0[(t - w.lo) as usize].clone();

    let mut lines = BTreeMap::new();
    for a in -w.hi..=-w.lo - ni - 1 {
        let b = (0..=ni + 1).fold(T::zero(), |acc, j| {
            acc + sign::<T>(j) * binom::<T>(ni + 1, j) * f(-a - j)
        });
        if b.is_negative() {
            return Err(Error::NotDecomposable(format!(
                "binomial inversion gives multiplicity {b} for O({a})"
            )));
        }
        if !b.is_zero() {
            lines.insert(a, b);
        }
    }

    let mut dec = Decomposition {
        n,
        middle,
        lines,
        checks: Checks::default(),
        rho: h.len(),
    };
    let rebuilt = dec.reconstruct(w);
    for ((t, want), (_, got)) in table.rows().zip(rebuilt.rows()) {
        if let Some(q) = (0..=n).find(|&q| want[q] != got[q]) {
            return Err(Error::Inconsistent(format!(
                "h^{q} at twist {t}: table has {}, decomposition gives {}",
                want[q], got[q]
            )));
        }
    }
    dec.checks.reconstruction = true;
    dec.checks.rank = rank_from_table(table)? == dec.rank();
    dec.checks.chi = w
        .twists()
        .all(|t| table.euler_char(t) == rebuilt.euler_char(t));
    if !(dec.checks.rank && dec.checks.chi) {
        return Err(Error::Inconsistent("rank or χ does not match".into()));
    }
    Ok(dec)
}

/// `F_m* E = ⊕_{i=0}^n (Ω^i)^{a_i} ⊕ ⊕_{j=1}^n O(-j)^{b_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardReport<T> {
    pub m: u64,
    /// `a_0..=a_n`; `a_0` counts `O`, `a_n` counts `Ω^n = O(-n-1)`.
    pub a: Vec<T>,
    /// `b_1..=b_n`, stored at index `j - 1`.
    pub b: Vec<T>,
    pub decomposition: Decomposition<T>,
}

/// Decomposes `F_m* E` and relabels the result as `(a_i)`, `(b_j)`, asserting
/// `a_i = h^i(E)` and that no line twist falls outside `[-n-1, 0]`.
pub fn decompose_pushforward<T: Scalar>(e: &FormalBundle, m: u64) -> Result<PushforwardReport<T>> {
    if m == 0 {
        return Err(Error::BadDegree);
    }
    let n = e.n();
    let ni = n as i64;
    let table = pushforward_table::<T>(e, m, pushforward_window(e, m))?;
    let dec = decompose(&table)?;

    let mut a = vec![T::zero(); n + 1];
    let mut b = vec![T::zero(); n];
    for (&(r, s), mult) in &dec.middle {
        if r != 0 {
            return Err(Error::UnexpectedTwist { twist: -r });
        }
        a[s] = mult.clone();
    }
    for (&k, mult) in &dec.lines {
        match k {
            0 => a[0] = mult.clone(),
            k if k == -ni - 1 => a[n] = mult.clone(),
            k if (-ni..=-1).contains(&k) => b[(-k - 1) as usize] = mult.clone(),
            k => return Err(Error::UnexpectedTwist { twist: k }),
        }
    }
    let h = crate::cohomology::table::<T>(e, Window { lo: 0, hi: 0 });
    for (i, (found, expected)) in a.iter().zip(h.entry(0)).enumerate() {
        if found != expected {
            return Err(Error::CohomologyMismatch {
                degree: i,
                found: found.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(PushforwardReport {
        m,
        a,
        b,
        decomposition: dec,
    })
}

/// Degrees `r` with `rank < C(n, r)`, where `H^r` of a toric bundle vanishes.
pub fn klyachko_bound<T: Scalar>(n: usize, rank: &T) -> BTreeSet<usize> {
    (0..=n)
        .filter(|&r| *rank < binom::<T>(n as i64, r as i64))
        .collect()
}
