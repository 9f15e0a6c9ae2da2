//! Command-line surface. `run` is pure: it returns the exit code and both
//! output streams instead of touching the process.

use std::fmt::Display;
use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::beilinson::{page_report, ArrowStatus};
use crate::bundle::FormalBundle;
use crate::cohomology::{
    bott_h, default_window, hset, rank_from_table, table, CohomologyTable, HSet, Window,
};
use crate::error::{Error, Result};
use crate::frobenius::{m_threshold, pushforward_table, pushforward_window};
use crate::oracles::{cech, koszul_cech, thomsen, thomsen_counts, thomsen_enumerate};
use crate::splitting::{check_dagger, decompose, decompose_pushforward, klyachko_bound};
use crate::Int;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "pnsplit", version, about = "Exact cohomology tables and splitting types of bundles on P^n")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Dimension of the ambient projective space.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Frobenius degree.
    #[arg(long, global = true)]
    m: Option<u64>,
    /// Form degree for `bott` and `cech`.
    #[arg(long, global = true)]
    p: Option<usize>,
    /// Twist for `bott` and `cech`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<i64>,
    /// Line degree for `thomsen`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    d: Option<i64>,
    /// Formal bundle as inline JSON or a path to a JSON file.
    #[arg(long, global = true)]
    bundle: Option<String>,
    /// Cohomology table as inline CSV or a path to a CSV file; needs --window.
    #[arg(long, global = true)]
    table: Option<String>,
    /// Twist window `lo:hi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Work limit for the brute-force oracles.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Bundle rank, for `klyachko` and table input to `beilinson`.
    #[arg(long, global = true)]
    rank: Option<u64>,
    /// Count residues by enumeration instead of the closed form (`thomsen`).
    #[arg(long, global = true)]
    enumerate: bool,
}

#[derive(Debug, Subcommand, Clone, Copy)]
enum Command {
    /// h^q(Ω^p(k)) from Bott's formula.
    Bott,
    /// Cohomology table of a bundle.
    Table,
    /// Middle cohomology support ℋ.
    Hset,
    /// Cohomology table of F_m* E.
    Frobenius,
    /// Least m making every twist of E regular.
    Mthreshold,
    /// Splitting type from a cohomology table.
    Decompose,
    /// Splitting type of F_m* E.
    Pushforward,
    /// Check condition (†).
    Dagger,
    /// Line splitting of F_m* O(d) by residue counts.
    Thomsen,
    /// h^q(Ω^p(k)) from Čech cochains.
    Cech,
    /// Beilinson E_1 page and rank bookkeeping.
    Beilinson,
    /// Degrees forced to vanish by rank.
    Klyachko,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome {
            code: if e.is_refusal() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("{}\n", error_json(&e)),
        },
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.kind(), "message": e.to_string() });
    match e {
        Error::DaggerViolated { pairs } => {
            v["pairs"] = json!(pairs
                .iter()
                .map(|(a, b)| json!([[a.0, a.1], [b.0, b.1]]))
                .collect::<Vec<_>>());
        }
        Error::BudgetExceeded { needed, budget } => {
            v["needed"] = num(needed);
            v["budget"] = num(budget);
        }
        Error::SummandParse { index, .. } => v["index"] = json!(index),
        _ => {}
    }
    v
}

fn num<T: Display>(v: T) -> Value {
    serde_json::from_str(&v.to_string()).expect("integers are valid JSON numbers")
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parse(format!("--{flag} is required")))
}

fn inline_or_file(arg: &str, inline: impl Fn(&str) -> bool) -> Result<String> {
    if inline(arg) {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Parse(format!("cannot read {arg}: {e}")))
    }
}

fn window_flag(cli: &Cli) -> Result<Option<Window>> {
    cli.window.as_deref().map(Window::parse).transpose()
}

fn load_bundle(cli: &Cli) -> Result<FormalBundle> {
    let arg = cli
        .bundle
        .as_deref()
        .ok_or_else(|| Error::Parse("--bundle is required".into()))?;
    let e = FormalBundle::from_json(&inline_or_file(arg, |s| s.trim_start().starts_with('{'))?)?;
    if let Some(n) = cli.n {
        if n != e.n() {
            return Err(Error::DimensionMismatch { expected: n, got: e.n() });
        }
    }
    Ok(e)
}

enum Input {
    Bundle(FormalBundle),
    Table(CohomologyTable<Int>),
}

fn load_input(cli: &Cli) -> Result<Input> {
    match (&cli.bundle, &cli.table) {
        (Some(_), Some(_)) => Err(Error::Parse("give either --bundle or --table".into())),
        (Some(_), None) => load_bundle(cli).map(Input::Bundle),
        (None, Some(arg)) => {
            let window = window_flag(cli)?
                .ok_or_else(|| Error::Parse("--table needs an explicit --window".into()))?;
            let t = CohomologyTable::from_csv(&inline_or_file(arg, |s| s.contains(','))?)?;
            if let Some(n) = cli.n {
                if n != t.n() {
                    return Err(Error::DimensionMismatch { expected: n, got: t.n() });
                }
            }
            Ok(Input::Table(t.restrict(window)?))
        }
        (None, None) => Err(Error::Parse("--bundle or --table is required".into())),
    }
}

fn input_table(cli: &Cli) -> Result<CohomologyTable<Int>> {
    Ok(match load_input(cli)? {
        Input::Table(t) => t,
        Input::Bundle(e) => table(&e, window_flag(cli)?.unwrap_or_else(|| default_window(&e))),
    })
}

fn execute(cli: &Cli) -> Result<String> {
    let f = cli.format;
    match cli.command {
        Command::Bott => {
            let (n, p, k) = (need(cli.n, "n")?, need(cli.p, "p")?, need(cli.k, "k")?);
            render_h(f, n, p, k, &bott_h::<Int>(n, p, k)?)
        }
        Command::Cech => {
            let (n, p, k) = (need(cli.n, "n")?, need(cli.p, "p")?, need(cli.k, "k")?);
            let h = koszul_cech(n, p, k, cli.budget.unwrap_or(cech::DEFAULT_BUDGET))?;
            render_h(f, n, p, k, &h)
        }
        Command::Table => Ok(render_table(f, &input_table(cli)?)),
        Command::Frobenius => {
            let e = load_bundle(cli)?;
            let m = need(cli.m, "m")?;
            let w = window_flag(cli)?.unwrap_or_else(|| pushforward_window(&e, m));
            Ok(render_table(f, &pushforward_table::<Int>(&e, m, w)?))
        }
        Command::Hset => Ok(render_hset(f, &hset(&input_table(cli)?)?)),
        Command::Dagger => {
            let h = hset(&input_table(cli)?)?;
            check_dagger(&h)?;
            Ok(match f {
                Format::Json => format!("{}\n", json!({ "dagger": true, "hset": hset_json(&h) })),
                _ => "(†) holds\n".to_string(),
            })
        }
        Command::Mthreshold => {
            let m = m_threshold(&load_bundle(cli)?)?;
            Ok(match f {
                Format::Json => format!("{}\n", json!({ "m_threshold": m })),
                _ => format!("{m}\n"),
            })
        }
        Command::Decompose => {
            let dec = decompose(&input_table(cli)?)?;
            Ok(match f {
                Format::Json => format!("{}\n", dec.to_json()),
                _ => format!("{dec}\n"),
            })
        }
        Command::Pushforward => {
            let e = load_bundle(cli)?;
            let m = need(cli.m, "m")?;
            let report = decompose_pushforward::<Int>(&e, m)?;
            Ok(match f {
                Format::Json => format!("{}\n", report.decomposition.to_json()),
                _ => {
                    let list = |v: &[Int]| v.iter().map(Int::to_string).collect::<Vec<_>>().join(",");
                    format!(
                        "{}\na = ({})\nb = ({})\n",
                        report.decomposition,
                        list(&report.a),
                        list(&report.b)
                    )
                }
            })
        }
        Command::Thomsen => {
            let (n, m, d) = (need(cli.n, "n")?, need(cli.m, "m")?, need(cli.d, "d")?);
            let c = if cli.enumerate {
                thomsen_enumerate::<Int>(n, m, d, cli.budget.unwrap_or(thomsen::DEFAULT_BUDGET))?
            } else {
                thomsen_counts::<Int>(n, m, d)?
            };
            Ok(match f {
                Format::Json => {
                    let counts: serde_json::Map<String, Value> =
                        c.counts.iter().rev().map(|(t, v)| (t.to_string(), num(v))).collect();
                    format!("{}\n", json!({ "n": n, "m": m, "d": d, "counts": counts }))
                }
                Format::Csv => {
                    let mut out = String::from("twist,mult\n");
                    for (t, v) in c.counts.iter().rev() {
                        out.push_str(&format!("{t},{v}\n"));
                    }
                    out
                }
                Format::Text => format!("{}\n", c.to_text()),
            })
        }
        Command::Beilinson => beilinson(cli),
        Command::Klyachko => {
            let (n, rank) = match (&cli.bundle, cli.rank) {
                (Some(_), _) => {
                    let e = load_bundle(cli)?;
                    (e.n(), e.rank::<Int>())
                }
                (None, Some(r)) => (need(cli.n, "n")?, Int::from(r)),
                (None, None) => return Err(Error::Parse("--bundle or --rank is required".into())),
            };
            let degrees: Vec<usize> = klyachko_bound(n, &rank).into_iter().collect();
            Ok(match f {
                Format::Json => format!("{}\n", json!({ "n": n, "rank": num(&rank), "vanishing": degrees })),
                _ => {
                    let parts: Vec<String> = degrees.iter().map(usize::to_string).collect();
                    format!("{{{}}}\n", parts.join(","))
                }
            })
        }
    }
}

fn beilinson(cli: &Cli) -> Result<String> {
    let (t, rank) = match load_input(cli)? {
        Input::Bundle(e) => {
            let n = e.n() as i64;
            let w = window_flag(cli)?.unwrap_or_else(|| {
                let w = default_window(&e);
                Window { lo: w.lo.min(-n - 1), hi: w.hi.max(1) }
            });
            (table::<Int>(&e, w), e.rank::<Int>())
        }
        Input::Table(t) => {
            let rank = match cli.rank {
                Some(r) => Int::from(r),
                None => rank_from_table(&t)?,
            };
            (t, rank)
        }
    };
    let r = page_report(&t, &rank)?;
    Ok(match cli.format {
        Format::Csv => r.page.to_csv(),
        Format::Json => {
            let cells: Vec<Value> = r
                .page
                .cells()
                .map(|c| json!({ "r": c.r, "s": c.s, "mult": num(&c.mult), "label": c.label.to_string() }))
                .collect();
            let arrows: Vec<Value> = r
                .arrows
                .iter()
                .filter(|a| a.status == ArrowStatus::PossiblyNonzero)
                .map(|a| json!({ "source": [a.source.0, a.source.1], "target": [a.target.0, a.target.1], "page": a.page }))
                .collect();
            let bottom: Vec<Value> = r
                .bottom_row
                .iter()
                .map(|(&(k, t), v)| json!({ "k": k, "t": t, "rank": num(v) }))
                .collect();
            let diagonal: Vec<Value> = r
                .diagonal
                .iter()
                .map(|(&s, v)| json!({ "s": s, "mult": num(v) }))
                .collect();
            let mut v = json!({
                "n": r.page.n,
                "cells": cells,
                "arrows": arrows,
                "diagonal": diagonal,
                "bottom_row": bottom,
            });
            if let Some((origin, top)) = &r.corners {
                v["corners"] = json!({ "e_inf_00": num(origin), "e_inf_top": num(top) });
            }
            format!("{v}\n")
        }
        Format::Text => {
            let mut out = r.page.render();
            let live: Vec<String> = r
                .arrows
                .iter()
                .filter(|a| a.status == ArrowStatus::PossiblyNonzero)
                .map(|a| format!("d{}: {:?} -> {:?}", a.page, a.source, a.target))
                .collect();
            out.push_str(&format!("possibly nonzero: {}\n", if live.is_empty() { "none".into() } else { live.join(", ") }));
            match &r.corners {
                Some((origin, top)) => out.push_str(&format!("rank E∞(0,0) = {origin}, rank E∞(-n,n) = {top}\n")),
                None => out.push_str("corner ranks: undetermined (ℋ meets r+s > 0)\n"),
            }
            out
        }
    })
}

fn render_h<T: Display>(f: Format, n: usize, p: usize, k: i64, h: &[T]) -> Result<String> {
    let parts: Vec<String> = h.iter().map(T::to_string).collect();
    Ok(match f {
        Format::Text => format!("({})\n", parts.join(",")),
        Format::Json => format!(
            "{}\n",
            json!({ "n": n, "p": p, "k": k, "h": h.iter().map(num).collect::<Vec<_>>() })
        ),
        Format::Csv => {
            let header: Vec<String> = (0..h.len()).map(|q| format!("h{q}")).collect();
            format!("{}\n{}\n", header.join(","), parts.join(","))
        }
    })
}

fn render_table(f: Format, t: &CohomologyTable<Int>) -> String {
    match f {
        Format::Csv => t.to_csv(),
        Format::Json => {
            let rows: Vec<Value> = t
                .rows()
                .map(|(k, row)| json!({ "twist": k, "h": row.iter().map(num).collect::<Vec<_>>() }))
                .collect();
            let w = t.window();
            format!("{}\n", json!({ "n": t.n(), "window": [w.lo, w.hi], "rows": rows }))
        }
        Format::Text => {
            let cells: Vec<Vec<String>> = t
                .rows()
                .map(|(k, row)| std::iter::once(k.to_string()).chain(row.iter().map(Int::to_string)).collect())
                .collect();
            let width = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(2);
            let mut out = format!("{:>width$}", "t");
            for q in 0..=t.n() {
                out.push_str(&format!(" {:>width$}", format!("h{q}")));
            }
            out.push('\n');
            for row in cells {
                let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out
        }
    }
}

fn hset_json(h: &HSet) -> Value {
    json!(h.iter().map(|&(r, s)| json!([r, s])).collect::<Vec<_>>())
}

fn render_hset(f: Format, h: &HSet) -> String {
    match f {
        Format::Json => format!("{}\n", hset_json(h)),
        Format::Csv => {
            let mut out = String::from("r,s\n");
            for (r, s) in h {
                out.push_str(&format!("{r},{s}\n"));
            }
            out
        }
        Format::Text => {
            let parts: Vec<String> = h.iter().map(|(r, s)| format!("({r},{s})")).collect();
            format!("{{{}}}\n", parts.join(","))
        }
    }
}
