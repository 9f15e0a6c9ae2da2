//! Formal direct sums of line bundles `O(k)` and twisted exterior powers
//! `Ω^p(t)` of the cotangent bundle on `P^n`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact_arith::{binom, chi_line, sign, Scalar};

/// An indecomposable summand in canonical form.
///
/// `Ω^0(t)` is always stored as `Line(t)` and `Ω^n(t)` as `Line(t - n - 1)`,
/// so a stored `Omega` always has `1 <= p <= n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    Line(i64),
    Omega { p: usize, twist: i64 },
}

impl Summand {
    pub fn line(k: i64) -> Self {
        Summand::Line(k)
    }

    /// Canonical form of `Ω^power(twist)` on `P^n`.
    pub fn normalize(n: usize, power: i64, twist: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDimension);
        }
        if power < 0 || power > n as i64 {
            return Err(Error::ZeroSummand { n, power });
        }
        let p = power as usize;
        Ok(if p == 0 {
            Summand::Line(twist)
        } else if p == n {
            Summand::Line(twist - n as i64 - 1)
        } else {
            Summand::Omega { p, twist }
        })
    }

    pub fn twist(&self) -> i64 {
        match *self {
            Summand::Line(k) => k,
            Summand::Omega { twist, .. } => twist,
        }
    }

    /// Exterior power; 0 for line bundles.
    pub fn power(&self) -> usize {
        match *self {
            Summand::Line(_) => 0,
            Summand::Omega { p, .. } => p,
        }
    }

    pub fn twisted(&self, t: i64) -> Self {
        match *self {
            Summand::Line(k) => Summand::Line(k + t),
            Summand::Omega { p, twist } => Summand::Omega { p, twist: twist + t },
        }
    }

    pub fn dual(&self, n: usize) -> Self {
        match *self {
            Summand::Line(k) => Summand::Line(-k),
            Summand::Omega { p, twist } => Summand::Omega {
                p: n - p,
                twist: n as i64 + 1 - twist,
            },
        }
    }

    pub fn rank<T: Scalar>(&self, n: usize) -> T {
        match *self {
            Summand::Line(_) => T::one(),
            Summand::Omega { p, .. } => binom(n as i64, p as i64),
        }
    }

    /// `χ(S(t))`, using the Koszul resolution of `Ω^p` by sums of line bundles.
    pub fn euler_char<T: Scalar>(&self, n: usize, t: i64) -> T {
        match *self {
            Summand::Line(k) => chi_line(n, k + t),
            Summand::Omega { p, twist } => {
                let k = twist + t;
                let (n1, p) = (n as i64 + 1, p as i64);
                (0..=p).fold(T::zero(), |acc, i| {
                    acc + sign::<T>(i) * binom::<T>(n1, p - i) * chi_line::<T>(n, k - p + i)
                })
            }
        }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Summand::Line(k) => write!(f, "O({k})"),
            Summand::Omega { p, twist } => write!(f, "Ω^{p}({twist})"),
        }
    }
}

/// A formal direct sum on `P^n`. The empty sum is the zero bundle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalBundle {
    n: usize,
    summands: BTreeMap<Summand, u64>,
}

impl FormalBundle {
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadDimension);
        }
        Ok(Self {
            n,
            summands: BTreeMap::new(),
        })
    }

    /// Builds a bundle from raw `(power, twist, mult)` triples.
    pub fn from_raw(n: usize, raw: &[(i64, i64, u64)]) -> Result<Self> {
        let mut e = Self::zero(n)?;
        for &(power, twist, mult) in raw {
            e.add(Summand::normalize(n, power, twist)?, mult)?;
        }
        Ok(e)
    }

    pub fn line(n: usize, k: i64) -> Result<Self> {
        Self::from_raw(n, &[(0, k, 1)])
    }

    pub fn omega(n: usize, p: i64, t: i64) -> Result<Self> {
        Self::from_raw(n, &[(p, t, 1)])
    }

    /// Adds `mult` copies of a canonical summand.
    pub fn add(&mut self, s: Summand, mult: u64) -> Result<()> {
        if let Summand::Omega { p, .. } = s {
            if p == 0 || p >= self.n {
                return Err(Error::ZeroSummand {
                    n: self.n,
                    power: p as i64,
                });
            }
        }
        if mult > 0 {
            *self.summands.entry(s).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> impl Iterator<Item = (&Summand, u64)> + '_ {
        self.summands.iter().map(|(s, &m)| (s, m))
    }

    pub fn multiplicity(&self, s: &Summand) -> u64 {
        self.summands.get(s).copied().unwrap_or(0)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut out = self.clone();
        for (s, m) in other.summands() {
            out.add(*s, m)?;
        }
        Ok(out)
    }

    /// `E(t)`.
    pub fn twist(&self, t: i64) -> Self {
        Self {
            n: self.n,
            summands: self
                .summands
                .iter()
                .map(|(s, &m)| (s.twisted(t), m))
                .collect(),
        }
    }

    /// `E^∨`, using `(Ω^p)^∨ = Ω^{n-p}(n+1)`.
    pub fn dual(&self) -> Self {
        Self {
            n: self.n,
            summands: self
                .summands
                .iter()
                .map(|(s, &m)| (s.dual(self.n), m))
                .collect(),
        }
    }

    pub fn rank<T: Scalar>(&self) -> T {
        self.summands
            .iter()
            .fold(T::zero(), |acc, (s, &m)| acc + s.rank::<T>(self.n) * T::of(m as i64))
    }

    /// `χ(E(t))`.
    pub fn euler_char<T: Scalar>(&self, t: i64) -> T {
        self.summands.iter().fold(T::zero(), |acc, (s, &m)| {
            acc + s.euler_char::<T>(self.n, t) * T::of(m as i64)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&BundleJson::from(self)).expect("bundle serializes")
    }

    /// Parses `{"n": .., "summands": [{"omega": p, "twist": t, "mult": m}, ..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("bundle must be a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing or invalid field \"n\"".into()))?;
        let list = obj
            .get("summands")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing or invalid field \"summands\"".into()))?;
        let n = n as usize;
        let mut e = Self::zero(n)?;
        for (index, item) in list.iter().enumerate() {
            let bad = |message: String| Error::SummandParse { index, message };
            let raw: SummandJson =
                serde_json::from_value(item.clone()).map_err(|e| bad(e.to_string()))?;
            if raw.mult == 0 {
                return Err(bad("mult must be at least 1".into()));
            }
            let s = Summand::normalize(n, raw.omega, raw.twist).map_err(|e| bad(e.to_string()))?;
            e.add(s, raw.mult).map_err(|e| bad(e.to_string()))?;
        }
        Ok(e)
    }
}

impl fmt::Display for FormalBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(s, &m)| if m == 1 { s.to_string() } else { format!("{s}^{m}") })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummandJson {
    omega: i64,
    twist: i64,
    mult: u64,
}

#[derive(Debug, Serialize)]
struct BundleJson {
    n: usize,
    summands: Vec<SummandJson>,
}

impl From<&FormalBundle> for BundleJson {
    fn from(e: &FormalBundle) -> Self {
        BundleJson {
            n: e.n,
            summands: e
                .summands
                .iter()
                .map(|(s, &mult)| SummandJson {
                    omega: s.power() as i64,
                    twist: s.twist(),
                    mult,
                })
                .collect(),
        }
    }
}
