//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; all
//! comparisons are exact.

use std::io::Write;
use std::time::{Duration, Instant};

use pn_split::beilinson::corner_ranks;
use pn_split::cohomology::{bott_h, default_window, hset_exact, table, CohomologyTable, Window};
use pn_split::exact_arith::binom;
use pn_split::frobenius::{m_threshold, pushforward_table, pushforward_window};
use pn_split::oracles::{cech, koszul_cech, thomsen_counts, thomsen_enumerate};
use pn_split::splitting::{check_dagger, decompose, decompose_pushforward, klyachko_bound};
use pn_split::{Error, FormalBundle, Int, Summand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

/// Bypasses libtest output capture so the lines land in plain `cargo test` logs.
fn log(line: String) {
    let mut err = std::io::stderr().lock();
    writeln!(err, "{line}").ok();
}

fn report(id: u32, name: &str, start: Instant, limit: Option<Duration>, result: Check) {
    let elapsed = start.elapsed();
    let result = result.and_then(|()| match limit {
        Some(l) if elapsed >= l => Err(format!("took {elapsed:?}, limit {l:?}")),
        _ => Ok(()),
    });
    match result {
        Ok(()) => log(format!("PASS criterion {id:>2}: {name} ({elapsed:.2?})")),
        Err(msg) => {
            log(format!("FAIL criterion {id:>2}: {name}: {msg}"));
            panic!("criterion {id} failed: {msg}");
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: i64) -> Int {
    Int::from(v)
}

fn seeded(seed: u64) -> ChaCha8Rng {
    log(format!("seed = {seed:#x}"));
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n <= n_max`, at most `max_terms` summands, `|twist| <= 5`.
fn random_bundle(rng: &mut ChaCha8Rng, n_range: std::ops::RangeInclusive<usize>, max_terms: usize) -> FormalBundle {
    let n = rng.gen_range(n_range);
    let terms = rng.gen_range(1..=max_terms);
    let raw: Vec<(i64, i64, u64)> = (0..terms)
        .map(|_| (rng.gen_range(0..=n as i64), rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        .collect();
    FormalBundle::from_raw(n, &raw).expect("valid summands")
}

fn dagger_bundles(seed: u64, count: usize) -> Vec<FormalBundle> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let e = random_bundle(&mut rng, 1..=4, 5);
        if check_dagger(&hset_exact(&e)).is_ok() {
            out.push(e);
        }
    }
    out
}

#[test]
fn criterion_01_omega3_pushforward() {
    let start = Instant::now();
    let result = (|| {
        let e = FormalBundle::omega(5, 3, 3).unwrap();
        let r = decompose_pushforward::<Int>(&e, 2).map_err(|e| e.to_string())?;
        let lines = r.decomposition.lines_sorted();
        let expected = vec![(-1, int(84)), (-2, int(216)), (-3, int(20))];
        ensure(lines == expected && r.decomposition.middle.is_empty(), || {
            format!("got {}", r.decomposition)
        })
    })();
    report(1, "F_2*(Ω^3(3)) on P^5 = O(-1)^84 ⊕ O(-2)^216 ⊕ O(-3)^20", start, Some(Duration::from_secs(1)), result);
}

#[test]
fn criterion_02_omega3_threshold() {
    let start = Instant::now();
    let result = (|| {
        let e = FormalBundle::omega(5, 3, 3).unwrap();
        let m = m_threshold(&e).map_err(|e| e.to_string())?;
        ensure(m == 4, || format!("m_threshold = {m}"))?;
        let t = table::<Int>(&e, Window::new(-3, -3).unwrap());
        ensure(t.entry(-3)[3] == int(1), || format!("h^3(E(-3)) = {}", t.entry(-3)[3]))
    })();
    report(2, "m_threshold(Ω^3(3) on P^5) = 4, witnessed by h^3(E(-3)) = 1", start, Some(Duration::from_secs(1)), result);
}

#[test]
fn criterion_03_bott_oracle() {
    let start = Instant::now();
    let result = (|| {
        let mut cases = 0;
        for n in 1..=3usize {
            for p in 0..=n {
                for k in -6..=6i64 {
                    let bott: Vec<Int> = bott_h(n, p, k).map_err(|e| e.to_string())?;
                    let cech: Vec<Int> = koszul_cech(n, p, k, cech::DEFAULT_BUDGET)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .map(Int::from)
                        .collect();
                    ensure(bott == cech, || format!("n={n} p={p} k={k}: bott {bott:?} cech {cech:?}"))?;
                    cases += 1;
                }
            }
        }
        log(format!("bott = koszul_cech on {cases} cases"));
        Ok(())
    })();
    report(3, "Bott's formula equals the Koszul-Čech oracle", start, Some(Duration::from_secs(120)), result);
}

#[test]
fn criterion_04_thomsen_triple() {
    let start = Instant::now();
    let result = (|| {
        for n in 1..=3usize {
            for m in 1..=4u64 {
                for d in -12..=12i64 {
                    let closed = thomsen_counts::<Int>(n, m, d).map_err(|e| e.to_string())?;
                    let brute = thomsen_enumerate::<Int>(n, m, d, u128::MAX).map_err(|e| e.to_string())?;
                    let e = FormalBundle::line(n, d).unwrap();
                    let t = pushforward_table::<Int>(&e, m, pushforward_window(&e, m)).map_err(|e| e.to_string())?;
                    let dec = decompose(&t).map_err(|err| format!("n={n} m={m} d={d}: {err}"))?;
                    let ctx = || format!("n={n} m={m} d={d}");
                    ensure(closed == brute, || format!("{}: closed form vs enumeration", ctx()))?;
                    ensure(dec.middle.is_empty() && dec.lines == closed.counts, || {
                        format!("{}: decompose gives {dec}, counts {}", ctx(), closed.to_text())
                    })?;
                    let mn = Int::from(m).pow(n as u32);
                    ensure(closed.total() == mn, || format!("{}: Σ c_t = {}", ctx(), closed.total()))?;
                }
            }
        }
        Ok(())
    })();
    report(4, "Thomsen closed form = enumeration = decompose, Σ c_t = m^n", start, Some(Duration::from_secs(60)), result);
}

#[test]
fn criterion_05_pushforward_identity() {
    let start = Instant::now();
    let mut rng = seeded(0x5eed_0005);
    let result = (|| {
        for i in 0..100 {
            let e = random_bundle(&mut rng, 1..=4, 5);
            let n = e.n();
            let m = m_threshold(&e).map_err(|err| format!("#{i} {}: {err}", e.to_json()))?;
            let r = decompose_pushforward::<Int>(&e, m).map_err(|err| format!("#{i} {} m={m}: {err}", e.to_json()))?;
            let h = table::<Int>(&e, Window::new(0, 0).unwrap());
            ensure(r.a.as_slice() == h.entry(0), || format!("#{i} {}: a = {:?}", e.to_json(), r.a))?;
            for (s, twist, _) in r.decomposition.middle_sorted() {
                ensure(twist == 0 && (1..n).contains(&s), || format!("#{i}: middle Ω^{s}({twist})"))?;
            }
            for (k, _) in r.decomposition.lines_sorted() {
                ensure((-(n as i64) - 1..=0).contains(&k), || format!("#{i}: line twist {k}"))?;
            }
        }
        Ok(())
    })();
    report(5, "F_m*E = ⊕ (Ω^i)^{h^i(E)} ⊕ lines in [-n-1, 0] at m = m_threshold", start, Some(Duration::from_secs(60)), result);
}

#[test]
fn criterion_06_round_trip() {
    let start = Instant::now();
    let result = (|| {
        for (i, e) in dagger_bundles(0x5eed_0006, 200).into_iter().enumerate() {
            let t = table::<Int>(&e, default_window(&e));
            let dec = decompose(&t).map_err(|err| format!("#{i} {}: {err}", e.to_json()))?;
            ensure(dec.to_bundle().as_ref() == Some(&e), || format!("#{i} {}: got {dec}", e.to_json()))?;
            for &(r, s) in &hset_exact(&e) {
                ensure(dec.middle.get(&(r, s)) == Some(&t.entry(r)[s]), || {
                    format!("#{i} {}: a_({r},{s}) ≠ h^{s}(E({r}))", e.to_json())
                })?;
            }
        }
        Ok(())
    })();
    report(6, "decompose(table(E)) = E for (†) bundles, a_{r,s} = h^s(E(r))", start, Some(Duration::from_secs(60)), result);
}

#[test]
fn criterion_07_conservation() {
    let start = Instant::now();
    let result = (|| {
        let w = Window::new(-6, 6).unwrap();
        for (i, e) in dagger_bundles(0x5eed_0007, 100).into_iter().enumerate() {
            let t = table::<Int>(&e, default_window(&e));
            let dec = decompose(&t).map_err(|err| err.to_string())?;
            let back = dec.reconstruct(t.window());
            ensure(dec.rank() == e.rank::<Int>(), || format!("#{i}: rank"))?;
            ensure(t.window().twists().all(|k| back.euler_char(k) == t.euler_char(k)), || format!("#{i}: χ"))?;
            ensure(dec.checks.rank && dec.checks.chi && dec.checks.reconstruction, || format!("#{i}: checks"))?;

            for m in 1..=4u64 {
                let pt = pushforward_table::<Int>(&e, m, w).map_err(|err| err.to_string())?;
                for k in w.twists() {
                    ensure(pt.euler_char(k) == e.euler_char::<Int>(m as i64 * k), || {
                        format!("#{i} m={m} k={k}: χ((F_m*E)(k)) ≠ χ(E(mk))")
                    })?;
                }
            }
        }
        let mut rng = seeded(0x5eed_0107);
        for i in 0..40 {
            let e = random_bundle(&mut rng, 1..=4, 5);
            let m = m_threshold(&e).map_err(|err| err.to_string())?;
            let r = decompose_pushforward::<Int>(&e, m).map_err(|err| err.to_string())?;
            let mn = Int::from(m).pow(e.n() as u32);
            ensure(r.decomposition.rank() == mn * e.rank::<Int>(), || format!("pushforward #{i}: rank"))?;
            let back = r.decomposition.reconstruct(w);
            ensure(w.twists().all(|k| back.euler_char(k) == e.euler_char::<Int>(m as i64 * k)), || {
                format!("pushforward #{i}: χ")
            })?;
        }
        Ok(())
    })();
    report(7, "rank and χ conservation, χ((F_m*E)(k)) = χ(E(mk))", start, None, result);
}

fn admissible(e: &FormalBundle) -> bool {
    let h = hset_exact(e);
    check_dagger(&h).is_ok() && h.iter().all(|&(r, s)| r + s as i64 <= 0)
}

fn beilinson_window(e: &FormalBundle) -> Window {
    let w = default_window(e);
    let n = e.n() as i64;
    Window::new(w.lo.min(-n - 1), w.hi.max(1)).unwrap()
}

#[test]
fn criterion_08_spectral_bookkeeping() {
    let start = Instant::now();
    let mut rng = seeded(0x5eed_0008);
    let result = (|| {
        let mut seen = 0;
        while seen < 50 {
            let e = random_bundle(&mut rng, 1..=4, 5);
            if !admissible(&e) {
                continue;
            }
            seen += 1;
            let n = e.n();
            let t = table::<Int>(&e, beilinson_window(&e));
            let rank = e.rank::<Int>();
            let (origin, top) = corner_ranks(&t, &rank).map_err(|err| format!("{}: {err}", e.to_json()))?;
            let diagonal = (1..n).fold(int(0), |acc, s| {
                acc + t.entry(-(s as i64))[s].clone() * binom::<Int>(n as i64, s as i64)
            });
            ensure(origin.clone() + top.clone() + diagonal == rank, || format!("{}: diagonal conservation", e.to_json()))?;

            // splitting side: E∞^{-n,n} collects negative lines, E∞^{0,0} the rest off the diagonal
            let (mut want_origin, mut want_top) = (int(0), int(0));
            for (s, mult) in e.summands() {
                let mult = Int::from(mult);
                match *s {
                    Summand::Line(k) if k < 0 => want_top += mult,
                    Summand::Line(_) => want_origin += mult,
                    Summand::Omega { p, twist } if twist > p as i64 => {
                        want_origin += mult * binom::<Int>(n as i64, p as i64)
                    }
                    Summand::Omega { .. } => {}
                }
            }
            ensure((origin.clone(), top.clone()) == (want_origin, want_top), || {
                format!("{}: corners ({origin}, {top})", e.to_json())
            })?;
        }

        let e = FormalBundle::line(2, -6).unwrap();
        let t = pushforward_table::<Int>(&e, 2, Window::new(-4, 8).unwrap()).map_err(|err| err.to_string())?;
        let corners = corner_ranks(&t, &int(4)).map_err(|err| err.to_string())?;
        ensure(corners == (int(0), int(4)), || format!("F_2*O(-6): {corners:?}"))?;
        let c = thomsen_counts::<Int>(2, 2, -6).map_err(|err| err.to_string())?;
        let negative = c.counts.iter().filter(|(&k, _)| k < 0).fold(int(0), |a, (_, v)| a + v.clone());
        ensure(negative == int(4) && c.total() == int(4), || format!("Thomsen gives {}", c.to_text()))
    })();
    report(8, "corner ranks conserve rank, F_2*O(-6) on P^2 gives (0,4)", start, Some(Duration::from_secs(10)), result);
}

#[test]
fn criterion_09_klyachko() {
    let start = Instant::now();
    let mut rng = seeded(0x5eed_0009);
    let result = (|| {
        let mut seen = 0;
        while seen < 100 {
            let e = random_bundle(&mut rng, 2..=4, 3);
            let rank = e.rank::<Int>();
            let degrees = klyachko_bound(e.n(), &rank);
            if degrees.is_empty() {
                continue;
            }
            seen += 1;
            let h = table::<Int>(&e, Window::new(0, 0).unwrap());
            for &r in &degrees {
                ensure(h.entry(0)[r] == int(0), || format!("{}: h^{r} ≠ 0 with rank {rank}", e.to_json()))?;
            }
        }
        Ok(())
    })();
    report(9, "rank E < C(n,r) forces h^r(E) = 0", start, Some(Duration::from_secs(10)), result);
}

#[test]
fn criterion_10_negative_controls() {
    let start = Instant::now();
    let result = (|| {
        let e = FormalBundle::from_raw(3, &[(2, 0, 1), (1, -2, 1)]).unwrap();
        match decompose(&table::<Int>(&e, default_window(&e))) {
            Err(Error::DaggerViolated { pairs }) => {
                ensure(pairs.contains(&((0, 2), (2, 1))), || format!("pairs {pairs:?}"))?
            }
            other => return Err(format!("Ω^2 ⊕ Ω^1(-2): {other:?}")),
        }

        // h^0 row of O(k+1) minus that of O(k), on top of a (†) bundle lacking O(k)
        let mut refused = 0;
        for (i, base) in dagger_bundles(0x5eed_0010, 60).into_iter().enumerate() {
            let n = base.n();
            let ni = n as i64;
            for k in -3..=3i64 {
                if base.multiplicity(&Summand::Line(k)) > 0 {
                    continue;
                }
                let bw = default_window(&base);
                let w = Window::new(bw.lo.min(-k - 2 * ni - 3), bw.hi.max(-k + ni + 2)).unwrap();
                let tb = table::<Int>(&base, w);
                let up = table::<Int>(&FormalBundle::line(n, k + 1).unwrap(), w);
                let down = table::<Int>(&FormalBundle::line(n, k).unwrap(), w);
                let rows = w
                    .twists()
                    .map(|t| {
                        let mut row = tb.entry(t).to_vec();
                        row[0] += up.entry(t)[0].clone() - down.entry(t)[0].clone();
                        row
                    })
                    .collect();
                let forged = CohomologyTable::from_rows(n, w, rows).map_err(|err| err.to_string())?;
                match decompose(&forged) {
                    Err(Error::NotDecomposable(_)) => refused += 1,
                    other => return Err(format!("#{i} k={k} {}: {other:?}", base.to_json())),
                }
            }
        }
        log(format!("{refused} forged tables refused"));
        Ok(())
    })();
    report(10, "(†) violation names ((0,2),(2,1)); negative inversion refused", start, None, result);
}
