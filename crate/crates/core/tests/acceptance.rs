//! Acceptance criteria, one line each. Runs without the libtest harness so
//! every criterion reports even when an earlier one fails; exits non-zero if
//! any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use kneser_core::chromatic::{chi_exact, standard_kneser_coloring, ChromaticNumber};
use kneser_core::defect::ecd;
use kneser_core::hypergraph::{build_kneser, induce_t_wide, Hypergraph, Variant};
use kneser_core::tucker::{
    check_labeling, check_tucker_conditions, evaluate_lambda, LambdaCase, TuckerContext, TuckerVariant,
    DEFAULT_MAX_FACES,
};
use kneser_core::verify::grid::{
    run_suite, GridConfig, KneserGrid, Limits, PartitionGen, SDisjointSuite, Suite, TheoremGrids,
};
use kneser_core::verify::hunt::{hunt_counterexample, HuntConfig};
use kneser_core::verify::{TheoremId, Verdict, VerifyOptions};
use kneser_core::{enumerate_family, is_good_pair, Family, FamilySpec, Partition};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

// ---- independent oracles -------------------------------------------------

/// Does some member of `f` lie in `x` up to `s` exceptions.
fn nearly_contains(f: &Family, x: u64, s: usize) -> bool {
    f.members().iter().any(|m| (m.bits() & !x).count_ones() as usize <= s)
}

/// `ecd^r(F, s)` by trying every assignment of `[n]` to `X0, X1, .., Xr`.
fn brute_ecd(f: &Family, r: usize, s: usize) -> usize {
    let n = f.n();
    let mut best = n;
    let mut label = vec![0usize; n];
    loop {
        let mut parts = vec![0u64; r + 1];
        for (e, &l) in label.iter().enumerate() {
            parts[l] |= 1 << e;
        }
        let x0 = parts[0].count_ones() as usize;
        if x0 < best {
            let sizes: Vec<u32> = parts[1..].iter().map(|p| p.count_ones()).collect();
            let equitable = sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1;
            if equitable && parts[1..].iter().all(|&p| !nearly_contains(f, p, s)) {
                best = x0;
            }
        }
        let mut i = 0;
        while i < n && label[i] == r {
            label[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        label[i] += 1;
    }
}

/// An edge is violated when all its distinct members share a color.
fn proper(h: &Hypergraph, coloring: &[u32]) -> bool {
    coloring.len() == h.vertex_count() && h.edges().iter().all(|e| e.iter().any(|&v| coloring[v as usize] != coloring[e[0] as usize]))
}

/// Plain backtracking: is there a proper coloring with `t` colors.
fn colorable(h: &Hypergraph, t: usize) -> bool {
    let nv = h.vertex_count();
    if nv == 0 {
        return true;
    }
    if t == 0 {
        return false;
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, e) in h.edges().iter().enumerate() {
        let top = *e.iter().max().unwrap() as usize;
        incident[top].push(i);
    }
    fn go(v: usize, h: &Hypergraph, inc: &[Vec<usize>], t: usize, c: &mut Vec<u32>, used: u32) -> bool {
        if v == c.len() {
            return true;
        }
        for color in 1..=(used + 1).min(t as u32) {
            c[v] = color;
            let ok = inc[v].iter().all(|&i| h.edges()[i].iter().any(|&u| c[u as usize] != color));
            if ok && go(v + 1, h, inc, t, c, used.max(color)) {
                return true;
            }
        }
        c[v] = 0;
        false
    }
    go(0, h, &incident, t, &mut vec![0; nv], 0)
}

fn ceil_div(v: i64, d: i64) -> i64 {
    if v <= 0 {
        -((-v) / d)
    } else {
        (v + d - 1) / d
    }
}

// ---- criteria -------------------------------------------------------------

fn c1_ksubsets() -> Outcome {
    let (mut points, mut bad) = (0, Vec::new());
    for n in 1..=10usize {
        for r in 2..=3usize {
            for k in 2..=4usize {
                if k > n || n < r * (k - 1) + 1 {
                    continue;
                }
                let f = enumerate_family(&FamilySpec::KSubsets { n, k }).map_err(|e| e.to_string())?;
                for s in 0..k {
                    points += 1;
                    let expected = n as i64 - (r * (k - s - 1)) as i64;
                    let got = ecd(&f, r, s).map_err(|e| e.to_string())?.value as i64;
                    if got != expected {
                        bad.push(format!("(n={n},k={k},r={r},s={s}): {got} != {expected}"));
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{points} points match n - r(k-s-1)"))
    } else {
        Err(format!("{} of {points} points differ, e.g. {}", bad.len(), bad[0]))
    }
}

fn h_formula(n: i64, k: i64, r: i64, s: i64, a: i64) -> i64 {
    if a < k - s {
        n - r * (k - s - 1)
    } else if a <= r * (k - s) - 2 {
        n - r * (k - s - 1) - a / (k - s)
    } else {
        n - a
    }
}

fn c2_hfamily() -> Outcome {
    let (mut points, mut boundary, mut bad) = (0, 0, Vec::new());
    for n in 1..=9usize {
        for r in 2..=3usize {
            for k in 1..=4usize {
                if n < r * k {
                    continue;
                }
                for s in 0..k {
                    for a in 0..n.saturating_sub(s) {
                        let f = enumerate_family(&FamilySpec::HFamily { n, k, a, s }).map_err(|e| e.to_string())?;
                        let (ni, ki, ri, si, ai) = (n as i64, k as i64, r as i64, s as i64, a as i64);
                        let expected = h_formula(ni, ki, ri, si, ai);
                        let got = ecd(&f, r, s).map_err(|e| e.to_string())?.value as i64;
                        points += 1;
                        if [ki - si - 1, ki - si, ri * (ki - si) - 2, ri * (ki - si) - 1].contains(&ai) {
                            boundary += 1;
                        }
                        if got != expected {
                            bad.push(format!("(n={n},k={k},r={r},s={s},a={a}): {got} != {expected}"));
                        }
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{points} points match the three cases ({boundary} on boundary rows)"))
    } else {
        Err(format!("{} of {points} points differ, e.g. {}", bad.len(), bad[0]))
    }
}

fn c3_twide() -> Outcome {
    let (mut points, mut bad, mut off_diagonal) = (0, Vec::new(), 0);
    for n in 1..=10usize {
        for r in 2..=3usize {
            for k in 1..=4usize.min(n) {
                for t in 1..=n {
                    if n <= (r * t).max(r * (k - 1)) {
                        continue;
                    }
                    points += 1;
                    let f = enumerate_family(&FamilySpec::TWide { n, k, t }).map_err(|e| e.to_string())?;
                    let expected = if t <= k { n - r * (k - 1) } else { n - r * t } as i64;
                    let got = ecd(&f, r, 0).map_err(|e| e.to_string())?.value as i64;
                    if got != expected {
                        off_diagonal += (t != k && k != 1) as usize;
                        bad.push(format!("(n={n},k={k},r={r},t={t}): {got} != {expected}"));
                    }
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{points} points match"))
    } else {
        Err(format!(
            "{} of {points} points differ ({} with t != k and k > 1), e.g. {}",
            bad.len(),
            off_diagonal,
            bad.iter().find(|b| b.contains("k=3")).unwrap_or(&bad[0])
        ))
    }
}

fn c4_theorems() -> Outcome {
    let cfg = GridConfig {
        theorems: TheoremGrids {
            kneser: Some(KneserGrid {
                n: [1, 8],
                k: [1, 3],
                r: [2, 3],
                s: [0, 2],
                partitions: vec![PartitionGen::Singletons, PartitionGen::BlocksOfR],
            }),
            ..TheoremGrids::default()
        },
        limits: Limits { node_limit: Some(20_000), ..Limits::default() },
        ..GridConfig::default()
    };
    let report = run_suite(&cfg, Suite::Theorems, VerifyOptions::default()).map_err(|e| e.to_string())?;
    let ok = |id: TheoremId| {
        report.theorems.iter().filter(|r| r.theorem == id && r.hypothesis_ok).count()
    };
    let failures: Vec<_> = report.theorems.iter().filter(|r| r.is_failure()).collect();
    let skipped = report.theorems.iter().filter(|r| r.verdict == Verdict::SkippedResource).count();
    let bounded = report.theorems.iter().filter(|r| r.verdict == Verdict::Holds && !r.lhs_exact).count();
    for r in report.theorems.iter().filter(|r| r.hypothesis_ok && r.lhs_exact) {
        let lhs = r.lhs.ok_or("missing lhs")?;
        if !lhs.at_least(r.rhs.ok_or("missing rhs")?) && r.verdict != Verdict::Violated {
            return Err(format!("verdict disagrees with its sides: {:?}", r.params));
        }
    }
    let detail = format!(
        "{} points under hypotheses (partition {}, intersection {}, tilde {}, goodness {}); {} rest on a certified lower bound",
        report.theorems.iter().filter(|r| r.hypothesis_ok).count(),
        ok(TheoremId::PartitionBound),
        ok(TheoremId::IntersectionBound),
        ok(TheoremId::TildeBound),
        ok(TheoremId::GoodnessBound),
        bounded
    );
    if failures.is_empty() && skipped == 0 {
        Ok(detail)
    } else {
        Err(format!("{} violated, {skipped} skipped; {detail}", failures.len()))
    }
}

fn c5_spot_values() -> Outcome {
    let mut notes = Vec::new();
    for (n, k, want) in [(5usize, 2usize, 3usize), (6, 2, 4)] {
        let f = enumerate_family(&FamilySpec::KSubsets { n, k }).map_err(|e| e.to_string())?;
        let h = build_kneser(&f, &Partition::singletons(n).unwrap(), 0, Variant::Plain, 2).map_err(|e| e.to_string())?;
        let chi = chi_exact(&h).map_err(|e| e.to_string())?.value;
        if chi != ChromaticNumber::Finite(want) || colorable(&h, want - 1) || !colorable(&h, want) {
            return Err(format!("chi(KG^2({n},{k})) = {chi}, expected {want}"));
        }
        let std = standard_kneser_coloring(n, k, 2, &h).map_err(|e| e.to_string())?;
        let colors = *std.iter().max().unwrap() as usize;
        if !proper(&h, &std) || colors != n - 2 * (k - 1) {
            return Err(format!("standard coloring of KG^2({n},{k}) uses {colors} colors"));
        }
        notes.push(format!("KG^2({n},{k}) = {want}"));
    }
    let h = induce_t_wide(7, 3, &Partition::singletons(7).unwrap(), 3, 2).map_err(|e| e.to_string())?;
    let chi = chi_exact(&h).map_err(|e| e.to_string())?.value;
    let std = standard_kneser_coloring(7, 3, 2, &h).map_err(|e| e.to_string())?;
    let bound = ceil_div(7 - 2 * 2, 1) as usize;
    if chi != ChromaticNumber::Finite(3) || colorable(&h, 2) || !proper(&h, &std) || *std.iter().max().unwrap() as usize != bound {
        return Err(format!("3-wide KG^2(7,3): solver {chi}, construction {} colors", std.iter().max().unwrap()));
    }
    notes.push("3-wide KG^2(7,3) = 3 by solver and construction".into());
    Ok(notes.join(", "))
}

fn c6_tucker() -> Outcome {
    let mut contexts = 0;
    for p in [2usize, 3] {
        for n in 1..=4usize {
            for k in 1..=n {
                let f = enumerate_family(&FamilySpec::KSubsets { n, k }).unwrap();
                for part in ["singletons", "consecutive:2"] {
                    let partition = Partition::parse_for(part, n).unwrap();
                    if partition.max_block_size() > p {
                        continue;
                    }
                    for s in 0..k {
                        for variant in [TuckerVariant::Plain, TuckerVariant::Tilde] {
                            if variant == TuckerVariant::Plain && !is_good_pair(&f, &partition, s / 2).unwrap().good {
                                continue;
                            }
                            let ctx = TuckerContext::new(&f, &partition, s, p, variant, None).map_err(|e| e.to_string())?;
                            let rep = check_tucker_conditions(&ctx, DEFAULT_MAX_FACES).map_err(|e| e.to_string())?;
                            let lhs = rep.alpha + (rep.m - rep.alpha) * (p - 1);
                            if !rep.all_hold || lhs < n || !rep.inequality.holds {
                                return Err(format!("p={p} n={n} k={k} P={part} s={s} {variant:?} fails"));
                            }
                            contexts += 1;
                        }
                    }
                }
            }
        }
    }
    // fault injection: flip the sign of every even-size face outside the member case
    let f = enumerate_family(&FamilySpec::KSubsets { n: 4, k: 3 }).unwrap();
    let ctx = TuckerContext::new(&f, &Partition::parse("1,2|3,4").unwrap(), 0, 2, TuckerVariant::Plain, None)
        .map_err(|e| e.to_string())?;
    let faulty = check_labeling(&ctx, DEFAULT_MAX_FACES, |a| {
        let mut ev = evaluate_lambda(a, &ctx)?;
        if ev.case != LambdaCase::MemberFound && a.len() % 2 == 0 {
            ev.label.sign = (ev.label.sign + 1) % 2;
        }
        Ok(ev)
    })
    .map_err(|e| e.to_string())?;
    if faulty.all_hold || faulty.pairs.holds {
        return Err("the faulty labeling was not caught".into());
    }
    if contexts < 10 {
        return Err(format!("only {contexts} contexts"));
    }
    Ok(format!("{contexts} contexts satisfy all conditions and the inequality; fault injection caught"))
}

fn c7_sdisjoint() -> Outcome {
    let cfg = GridConfig {
        theorems: TheoremGrids {
            sdisjoint: Some(SDisjointSuite { instances: 60, seed: 20240607, n: [1, 6], r: 2, weights: [1, 2], max_sets: 8 }),
            ..TheoremGrids::default()
        },
        ..GridConfig::default()
    };
    let report = run_suite(&cfg, Suite::Theorems, VerifyOptions::default()).map_err(|e| e.to_string())?;
    let recs = &report.sdisjoint;
    let defect = recs.iter().filter(|r| !r.defect_inequality || r.ecd_s > r.ecd_lifted).count();
    let homo = recs.iter().filter(|r| !r.homomorphism).count();
    let thm = recs.iter().filter(|r| r.theorem.is_failure()).count();
    let under = recs.iter().filter(|r| r.theorem.hypothesis_ok).count();
    if recs.len() < 50 || defect + homo + thm > 0 {
        return Err(format!("{} instances: {defect} defect, {homo} homomorphism, {thm} theorem failures", recs.len()));
    }
    Ok(format!("{} instances, {under} under the weight hypothesis; no failures", recs.len()))
}

fn c8_hunt() -> Outcome {
    let text = std::fs::read_to_string(repo_root().join("grids/hunt.json")).map_err(|e| e.to_string())?;
    let cfg = HuntConfig::from_json(&text).map_err(|e| e.to_string())?;
    if cfg.n[1] > 8 || cfg.k[1] > 3 || cfg.r != [2, 2] || cfg.s != [1, 2] {
        return Err("grids/hunt.json is not the default grid".into());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    let first = hunt_counterexample(&cfg, Some(&a), VerifyOptions::default()).map_err(|e| e.to_string())?;
    hunt_counterexample(&cfg, Some(&b), VerifyOptions::default()).map_err(|e| e.to_string())?;
    let log = std::fs::read_to_string(&a).unwrap();
    if !first.complete || log != std::fs::read_to_string(&b).unwrap() {
        return Err("hunt incomplete or its log differs between runs".into());
    }
    for v in &first.violations {
        recheck_violation(v)?;
    }
    Ok(format!(
        "{} points logged deterministically; {} violations of the strengthened bound, each re-verified",
        first.points,
        first.violations.len()
    ))
}

/// Rebuilds a reported violation and checks it with the oracles above.
fn recheck_violation(v: &Value) -> Result<(), String> {
    let get = |k: &str| v[k].as_u64().map(|x| x as usize).ok_or(format!("record lacks {k}"));
    let (n, k, r, s) = (get("n")?, get("k")?, get("r")?, get("s")?);
    let key = v["key"].as_str().unwrap_or("?").to_string();
    let f = enumerate_family(&FamilySpec::KSubsets { n, k }).unwrap();
    let p = Partition::parse_for(v["partition"].as_str().ok_or("no partition")?, n).map_err(|e| e.to_string())?;
    let variant = if v["variant"] == "tilde" { Variant::Tilde } else { Variant::Plain };
    let h = build_kneser(&f, &p, s, variant, r).map_err(|e| e.to_string())?;
    let coloring: Vec<u32> = serde_json::from_value(v["witnesses"]["coloring"].clone()).map_err(|e| e.to_string())?;
    let chi = coloring.iter().copied().max().unwrap_or(0) as usize;
    if !proper(&h, &coloring) || (chi > 0 && colorable(&h, chi - 1)) {
        return Err(format!("{key}: chromatic witness does not re-verify"));
    }
    let defect = brute_ecd(&f, r, s);
    let strengthened = ceil_div(defect as i64, r as i64 - 1);
    if chi as i64 >= strengthened || v["ecd"].as_u64() != Some(defect as u64) {
        return Err(format!("{key}: chi {chi} vs bound {strengthened} does not re-verify"));
    }
    Ok(())
}

fn c9_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let grids = repo_root().join("grids");
    let default = grids.join("default.json");
    let hunt = grids.join("hunt.json");
    let commands: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        ("ecd", vec!["ecd", "--family", "ksubsets:n=8,k=3", "--r", "2", "--s", "1", "--json"].into_iter().map(String::from).collect(), vec![]),
        ("chi", vec!["chi", "--family", "ksubsets:n=6,k=2", "--r", "2", "--json"].into_iter().map(String::from).collect(), vec![]),
        (
            "chi-twide",
            vec!["chi", "--family", "ksubsets:n=7,k=3", "--r", "2", "--variant", "twide", "--t", "3", "--json"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec![],
        ),
        (
            "lift",
            vec!["lift", "--family", "ksubsets:n=4,k=2", "--weights", "1,2,1,2", "--partition", "1,2|3,4", "--emit", "homomorphism-report"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec![],
        ),
        (
            "tucker-check",
            vec!["tucker-check", "--p", "3", "--n", "4", "--family", "ksubsets:n=4,k=2", "--s", "1", "--partition", "1,2|3,4", "--variant", "tilde", "--json"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec![],
        ),
        (
            "verify",
            vec!["verify", "--suite", "all", "--config", default.to_str().unwrap(), "--json", "--out", "{dir}/verdicts.jsonl", "--csv", "{dir}/table.csv"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec!["verdicts.jsonl", "table.csv"],
        ),
        (
            "hunt",
            vec!["hunt", "--config", hunt.to_str().unwrap(), "--checkpoint", "{dir}/hunt.jsonl", "--json"]
                .into_iter()
                .map(String::from)
                .collect(),
            vec!["hunt.jsonl"],
        ),
    ];
    for (name, args, files) in &commands {
        let mut reference: Option<Vec<Vec<u8>>> = None;
        for workers in ["1", "2", "4", "1"] {
            let run_dir = dir.path().join(format!("{name}-{workers}-{}", reference.is_some() as u8));
            std::fs::create_dir_all(&run_dir).unwrap();
            let args: Vec<String> = args.iter().map(|a| a.replace("{dir}", run_dir.to_str().unwrap())).collect();
            let out = Command::new(env!("CARGO_BIN_EXE_kneser"))
                .arg("--workers")
                .arg(workers)
                .args(&args)
                .output()
                .map_err(|e| e.to_string())?;
            if !out.status.success() {
                return Err(format!("{name} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
            }
            serde_json::from_slice::<Value>(&out.stdout).map_err(|e| format!("{name} stdout is not JSON: {e}"))?;
            let mut artifacts = vec![out.stdout];
            for f in files {
                artifacts.push(std::fs::read(run_dir.join(f)).map_err(|e| e.to_string())?);
            }
            match &reference {
                None => reference = Some(artifacts),
                Some(r) if *r != artifacts => return Err(format!("{name} output differs with --workers {workers}")),
                Some(_) => {}
            }
        }
    }
    Ok(format!("{} commands byte-identical across --workers 1, 2, 4", commands.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("formula oracle, k-subsets", c1_ksubsets),
        ("formula oracle, H(n,k,a,s)", c2_hfamily),
        ("formula oracle, t-wide", c3_twide),
        ("theorem inequality suite", c4_theorems),
        ("exact chromatic spot values", c5_spot_values),
        ("Tucker replay", c6_tucker),
        ("S-disjoint suite", c7_sdisjoint),
        ("conjecture hunter smoke run", c8_hunt),
        ("determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
