//! Acceptance gate. Prints one line per criterion and exits non-zero if any fails.
//!
//! Criteria that need the replication CSVs read them from the directory named by
//! `COINT_REPLICATION_DIR` (`encounters.csv`, `openings.csv`, and optionally
//! `encounters_quarterly.csv`, `openings_quarterly.csv`). Without it they are
//! reported as skipped.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use coint_cli::ingest_csv;
use coint_core::cointegration::lineage_warnings;
use coint_core::critical::MAX_VARIABLES;
use coint_core::ecm::ControlManifest;
use coint_core::montecarlo::{run_ecm_recovery_experiment, RecoveryConfig};
use coint_core::regression::{ols_fit, DesignMatrix};
use coint_core::series::seasonal_undifference;
use coint_core::{
    audit_controls, critical_value, engle_granger_test, estimate_ecm, generate, run_false_positive_experiment,
    CriticalValueTable, DeterministicSpec, DgpKind, DgpSpec, EcmSpec, EgSpec, FalsePositiveConfig, Level, Normalization,
    Period, TimeSeries, Transform, WarningCode,
};
use num::{BigRational, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

const REPLICATION_DIR_VAR: &str = "COINT_REPLICATION_DIR";

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn coint(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_coint"));
    cmd.args(args).env_remove("COINT_OUTPUT_DIR");
    if let Some(dir) = out_dir {
        cmd.env("COINT_OUTPUT_DIR", dir);
    }
    cmd.output().expect("coint binary runs")
}

fn coint_json(args: &[&str]) -> Value {
    let out = coint(args, None);
    assert!(out.status.success(), "coint {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn replication_dir() -> Option<PathBuf> {
    std::env::var_os(REPLICATION_DIR_VAR).map(PathBuf::from)
}

fn rate(report: &Value, level: &str) -> f64 {
    report["report"]["rejection_rate"][level].as_f64().expect("rate")
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn misuse_pathology() -> Verdict {
    let start = Instant::now();
    let r = coint_json(&["mc-falsepos", "--n", "300", "--reps", "1000", "--level", "1", "--seed", "42"]);
    let elapsed = start.elapsed();
    let rate = rate(&r, "1%");
    let guard = r["report"]["guard_hits"].as_u64().unwrap();
    let reps = r["report"]["replications"].as_u64().unwrap();
    check(
        rate >= 0.99 && guard == 1000 && reps == 1000 && within(elapsed, 30),
        format!("rejection rate {rate} (>= 0.99), DifferencedInput in {guard}/{reps}, {:.1}s (<= 30s)", elapsed.as_secs_f64()),
    )
}

fn correct_test_size() -> Verdict {
    let start = Instant::now();
    let r = coint_json(&[
        "mc-falsepos", "--n", "300", "--reps", "1000", "--level", "1", "--seed", "42", "--in-levels",
    ]);
    let elapsed = start.elapsed();
    let rate = rate(&r, "1%");
    let (lo, hi) = (
        r["report"]["wilson_interval_95"]["1%"][0].as_f64().unwrap(),
        r["report"]["wilson_interval_95"]["1%"][1].as_f64().unwrap(),
    );
    check(
        (0.0..=0.025).contains(&rate) && lo <= 0.01 && 0.01 <= hi && within(elapsed, 30),
        format!("levels rejection rate {rate} in [0, 0.025], Wilson [{lo}, {hi}], {:.1}s (<= 30s)", elapsed.as_secs_f64()),
    )
}

/// Row-major: {plain, 12 lags, 12 lags + trend} x {logs, levels} x {encounters, openings}.
const TABLE_ONE: [f64; 12] = [
    -3.153, -2.183, -4.061, -3.156, -2.614, -1.922, -2.182, -1.851, -2.968, -3.052, -2.860, -3.790,
];

fn table_one_replication() -> Verdict {
    let Some(dir) = replication_dir() else {
        return Verdict::Skip(format!("data-conditional; {REPLICATION_DIR_VAR} not set, property suites stand in"));
    };
    let (enc, open) = (dir.join("encounters.csv"), dir.join("openings.csv"));
    let start = Instant::now();
    let out = coint(
        &["grid", "--first", enc.to_str().unwrap(), "--second", open.to_str().unwrap(), "--format", "csv"],
        None,
    );
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Verdict::Fail(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let stats: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    let worst = stats
        .iter()
        .zip(TABLE_ONE)
        .map(|(got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let mut sorted = stats.clone();
    sorted.sort_by(f64::total_cmp);
    let median = 0.5 * (sorted[5] + sorted[6]);
    let strong = rows.iter().filter(|r| &r[5] == "**" || &r[5] == "***").count();
    check(
        rows.len() == 12 && worst <= 0.01 && (median + 2.914).abs() <= 0.005 && strong == 1 && within(elapsed, 5),
        format!("max |diff| {worst:.4} (<= 0.01), median {median:.4} (-2.914 +/- 0.005), {strong} cell(s) at 5% or lower"),
    )
}

const PUBLISHED_ASYMPTOTIC: [(&str, [[f64; 3]; 6]); 2] = [
    (
        "c",
        [
            [-3.43035, -2.86154, -2.56677],
            [-3.89644, -3.33613, -3.04445],
            [-4.29374, -3.74066, -3.45218],
            [-4.64332, -4.096, -3.8102],
            [-4.95756, -4.41519, -4.13157],
            [-5.24568, -4.70693, -4.42501],
        ],
    ),
    (
        "ct",
        [
            [-3.95877, -3.41049, -3.12705],
            [-4.32762, -3.78057, -3.49631],
            [-4.66305, -4.1189, -3.83511],
            [-4.9694, -4.42871, -4.14633],
            [-5.25276, -4.71537, -4.43422],
            [-5.51727, -4.98228, -4.70233],
        ],
    ),
];

const PUBLISHED_NO_CONSTANT: [f64; 3] = [-2.56574, -1.941, -1.61682];

fn anchor(first: &Path, second: &Path, want: f64) -> Result<(usize, f64), String> {
    let a = ingest_csv(first).map_err(|e| e.to_string())?;
    let b = ingest_csv(second).map_err(|e| e.to_string())?;
    let a = a.iterated_difference(1).map_err(|e| e.to_string())?;
    let b = b.iterated_difference(1).map_err(|e| e.to_string())?;
    let r = engle_granger_test(&a, &b, &EgSpec::plain(Transform::Untransformed, Normalization::First))
        .map_err(|e| e.to_string())?;
    let cv = critical_value(2, r.n_effective, Level::One, DeterministicSpec::CONSTANT).map_err(|e| e.to_string())?;
    if (cv - want).abs() <= 0.01 {
        Ok((r.n_effective, cv))
    } else {
        Err(format!("n {} gives {cv:.4}, want {want} +/- 0.01", r.n_effective))
    }
}

fn critical_value_anchors() -> Verdict {
    let table = CriticalValueTable::embedded();
    let mut mismatches = Vec::new();
    for (code, rows) in PUBLISHED_ASYMPTOTIC {
        let det = DeterministicSpec::from_code(code).unwrap();
        for (k, row) in rows.iter().enumerate() {
            for (level, want) in Level::ALL.iter().zip(row) {
                if table.asymptotic(k + 1, *level, det).ok() != Some(*want) {
                    mismatches.push(format!("{code} k={} {level}", k + 1));
                }
            }
        }
    }
    for (level, want) in Level::ALL.iter().zip(PUBLISHED_NO_CONSTANT) {
        if table.asymptotic(1, *level, DeterministicSpec::NONE).ok() != Some(want) {
            mismatches.push(format!("n k=1 {level}"));
        }
    }
    let mut detail = format!("{} asymptotic values exact", 3 * (2 * MAX_VARIABLES + 1) - mismatches.len());
    let mut ok = mismatches.is_empty();
    if !ok {
        detail.push_str(&format!("; mismatched: {}", mismatches.join(", ")));
    }
    match replication_dir() {
        None => detail.push_str("; data-conditional anchors skipped"),
        Some(dir) => {
            for (label, suffix, want) in [("monthly", "", -3.936), ("quarterly", "_quarterly", -4.020)] {
                let first = dir.join(format!("encounters{suffix}.csv"));
                let second = dir.join(format!("openings{suffix}.csv"));
                if !first.exists() || !second.exists() {
                    detail.push_str(&format!("; {label} data absent"));
                    continue;
                }
                match anchor(&first, &second, want) {
                    Ok((n, cv)) => detail.push_str(&format!("; {label} n {n} -> {cv:.4}")),
                    Err(e) => {
                        ok = false;
                        detail.push_str(&format!("; {label}: {e}"));
                    }
                }
            }
        }
    }
    check(ok, detail)
}

fn monthly(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new("x", Period::monthly(2000, 1).unwrap(), values).unwrap()
}

fn operator_distinction() -> Verdict {
    let ramp = monthly((1..=24).map(f64::from).collect());
    let s12 = ramp.seasonal_difference(12).unwrap();
    let d12 = ramp.iterated_difference(12).unwrap();
    let seasonal_ok = s12.len() == 12 && s12.values().iter().all(|v| *v == 12.0);
    let iterated_ok = d12.len() == 12 && d12.values().iter().all(|v| *v == 0.0);

    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut exact = 0;
    let trials = 200;
    for _ in 0..trials {
        let n = 13 + (rng.next_u32() % 100) as usize;
        let values: Vec<f64> = (0..n).map(|_| f64::from(rng.next_u32() % 2_000_001) - 1e6).collect();
        let s = monthly(values.clone());
        let back = seasonal_undifference(s.seasonal_difference(12).unwrap().values(), &values[..12]);
        if back.iter().zip(&values).all(|(a, b)| a.to_bits() == b.to_bits()) && back.len() == n {
            exact += 1;
        }
    }
    let ramp_back = seasonal_undifference(s12.values(), &ramp.values()[..12]);
    let ramp_exact = ramp_back.as_slice() == ramp.values();
    check(
        seasonal_ok && iterated_ok && ramp_exact && exact == trials,
        format!(
            "S12 of ramp constant 12: {seasonal_ok}; D12 identically 0: {iterated_ok}; exact inversion {}/{}",
            exact + usize::from(ramp_exact),
            trials + 1
        ),
    )
}

fn spurious_regression() -> Verdict {
    let start = Instant::now();
    let r = coint_json(&["mc-size", "--test", "spurious", "--dgp", "random-walks", "--n", "500", "--reps", "1000", "--seed", "42"]);
    let elapsed = start.elapsed();
    let rate = rate(&r, "5%");
    check(
        rate > 0.6 && within(elapsed, 60),
        format!("|slope t| > 1.96 in {rate} of replications (> 0.6), {:.1}s (<= 60s)", elapsed.as_secs_f64()),
    )
}

fn ect_pathology() -> Verdict {
    let r = coint_json(&["mc-size", "--test", "ect-unit-root", "--dgp", "random-walks", "--n", "500", "--reps", "500", "--seed", "42"]);
    let fail_to_reject = 1.0 - rate(&r, "5%");

    let recovery = run_ecm_recovery_experiment(&RecoveryConfig {
        dgp: DgpSpec::new(DgpKind::CointegratedPair { beta: 0.7, adjust: 0.3 }, 300, 1.0, 42).unwrap(),
        spec: EcmSpec::default(),
        reps: 500,
        base_seed: 42,
        coefficient_range: (-0.45, -0.15),
        max_t_stat: -3.0,
    })
    .unwrap();
    check(
        fail_to_reject >= 0.9 && recovery.hit_rate >= 0.9,
        format!(
            "ECT unit root not rejected in {fail_to_reject} (>= 0.9); ECT coefficient in (-0.45, -0.15) with t < -3 in {} (>= 0.9), median coefficient {:.4}",
            recovery.hit_rate,
            recovery.median_coefficient.unwrap_or(f64::NAN)
        ),
    )
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn exact_normal_equations(columns: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let q = |v: f64| BigRational::from_float(v).unwrap();
    let k = columns.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(BigRational::zero(), |acc, (p, r)| acc + q(*p) * q(*r));
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| dot(&columns[i], &columns[j])).collect();
            row.push(dot(&columns[i], y));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for j in c..=k {
            m[c][j] = &m[c][j] / &pivot;
        }
        for r in (0..k).filter(|&r| r != c) {
            let f = m[r][c].clone();
            for j in c..=k {
                let sub = &f * &m[c][j];
                m[r][j] -= sub;
            }
        }
    }
    Some(m.iter().map(|row| row[k].to_f64().unwrap()).collect())
}

/// Smallest singular-value proxy: reject near-singular draws the oracle cannot separate from rounding.
fn well_conditioned(columns: &[Vec<f64>]) -> bool {
    let n = columns[0].len();
    let mut d = DesignMatrix::new(n);
    for (i, c) in columns.iter().enumerate() {
        d.push(format!("c{i}"), c.clone()).unwrap();
    }
    columns.iter().enumerate().all(|(i, target)| {
        let others: Vec<&Vec<f64>> = columns.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, c)| c).collect();
        let norm: f64 = target.iter().map(|v| v * v).sum::<f64>();
        if others.is_empty() {
            return norm > 1e-6;
        }
        let mut aux = DesignMatrix::new(n);
        for (j, c) in others.iter().enumerate() {
            aux.push(format!("o{j}"), (*c).clone()).unwrap();
        }
        match ols_fit(target, &aux) {
            Ok(fit) => fit.rss > 1e-4 * norm,
            Err(_) => false,
        }
    })
}

fn ols_properties() -> Result<(), String> {
    let problem = (1usize..=4, 0usize..=4).prop_flat_map(|(k, extra)| {
        let n = k + 1 + extra;
        (
            prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), k),
            prop::collection::vec(-50.0f64..50.0, n),
        )
    });
    let checked = std::cell::Cell::new(0u32);
    runner(1000)
        .run(&problem, |(cols, y)| {
            if !well_conditioned(&cols) {
                return Ok(());
            }
            let mut d = DesignMatrix::new(y.len());
            for (i, c) in cols.iter().enumerate() {
                d.push(format!("c{i}"), c.clone()).unwrap();
            }
            let fit = ols_fit(&y, &d).unwrap();
            let want = exact_normal_equations(&cols, &y).unwrap();
            for (t, w) in fit.terms.iter().zip(&want) {
                prop_assert!((t.estimate - w).abs() <= 1e-9 * w.abs().max(1.0), "{} vs {w}", t.estimate);
            }
            let e_norm = fit.residuals.iter().map(|e| e * e).sum::<f64>().sqrt();
            for c in &cols {
                let c_norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
                let dot: f64 = c.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
                prop_assert!(dot.abs() <= 1e-8 * (c_norm * e_norm).max(1.0), "residual dot {dot}");
            }
            checked.set(checked.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    if checked.get() < 500 {
        return Err(format!("only {} well-conditioned instances", checked.get()));
    }
    Ok(())
}

fn eg_scale_invariance() -> Result<(), String> {
    let strategy = (any::<u64>(), 1e-3f64..1e3, 1e-3f64..1e3, 0usize..4, any::<bool>(), any::<bool>());
    runner(200)
        .run(&strategy, |(seed, ca, cb, lags, trend, second)| {
            let (x, y) = generate(&DgpSpec::new(DgpKind::IndependentRandomWalks, 150, 1.0, seed).unwrap());
            let scale = |s: &TimeSeries, c: f64| TimeSeries::new(s.name(), s.start(), s.values().iter().map(|v| v * c).collect()).unwrap();
            let spec = EgSpec {
                transform: Transform::Untransformed,
                normalize_on: if second { Normalization::Second } else { Normalization::First },
                lags,
                trend_in_stage_one: trend,
            };
            let a = engle_granger_test(&x, &y, &spec).unwrap().statistic;
            let b = engle_granger_test(&scale(&x, ca), &scale(&y, cb), &spec).unwrap().statistic;
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn guard_completeness() -> Result<(), String> {
    #[derive(Debug, Clone, Copy)]
    enum Op {
        Log,
        Seasonal(usize),
        Iterated(usize),
    }
    let op = prop_oneof![
        Just(Op::Log),
        (1usize..=12).prop_map(Op::Seasonal),
        (1usize..=3).prop_map(Op::Iterated),
    ];
    let chain = prop::collection::vec(op, 0..5);
    let strategy = (any::<u64>(), chain.clone(), chain);
    let apply = |mut s: TimeSeries, ops: &[Op]| {
        let mut differenced = false;
        for op in ops {
            s = match *op {
                Op::Log if s.values().iter().all(|v| *v > 0.0) => s.log_transform().unwrap(),
                Op::Log => s,
                Op::Seasonal(gap) => s.seasonal_difference(gap).unwrap(),
                Op::Iterated(order) => s.iterated_difference(order).unwrap(),
            };
            differenced |= !matches!(op, Op::Log);
        }
        (s, differenced)
    };
    runner(1000)
        .run(&strategy, |(seed, ops_a, ops_b)| {
            let (x, y) = generate(&DgpSpec::new(DgpKind::IndependentRandomWalks, 120, 1.0, seed).unwrap());
            let lift = |s: &TimeSeries| TimeSeries::new(s.name(), s.start(), s.values().iter().map(|v| v + 500.0).collect()).unwrap();
            let (a, da) = apply(lift(&x), &ops_a);
            let (b, db) = apply(lift(&y), &ops_b);
            let warnings = match engle_granger_test(&a, &b, &EgSpec::plain(Transform::Untransformed, Normalization::First)) {
                Ok(r) => r.warnings,
                Err(_) => lineage_warnings(&[&a, &b]),
            };
            let fired = warnings.iter().filter(|w| w.code == WarningCode::DifferencedInput).count();
            prop_assert_eq!(fired, usize::from(da) + usize::from(db));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn write_csv(path: &Path, s: &TimeSeries) {
    let mut text = String::from("date,value\n");
    for (i, v) in s.values().iter().enumerate() {
        text.push_str(&format!("{},{v}\n", s.period_at(i)));
    }
    std::fs::write(path, text).unwrap();
}

fn commands_reproducible() -> Result<(), String> {
    let data = tempfile::tempdir().unwrap();
    let dgp = DgpSpec::new(DgpKind::CointegratedPair { beta: 0.8, adjust: 0.3 }, 240, 1.0, 5).unwrap();
    let (x, y) = generate(&dgp);
    let lift = |s: &TimeSeries, name: &str| {
        TimeSeries::new(name, s.start(), s.values().iter().map(|v| v + 300.0).collect()).unwrap()
    };
    let (first, second) = (data.path().join("encounters.csv"), data.path().join("openings.csv"));
    write_csv(&first, &lift(&y, "encounters"));
    write_csv(&second, &lift(&x, "openings"));
    let (f, s) = (first.to_str().unwrap(), second.to_str().unwrap());
    let runs: Vec<Vec<&str>> = vec![
        vec!["ingest-check", "--first", f, "--second", s],
        vec!["adf", "--first", f, "--lags", "2"],
        vec!["eg", "--first", f, "--second", s, "--lags", "3", "--trend"],
        vec!["grid", "--first", f, "--second", s],
        vec!["ecm", "--first", f, "--second", s, "--log"],
        vec!["mc-falsepos", "--n", "100", "--reps", "200", "--seed", "9"],
        vec!["mc-size", "--test", "adf", "--dgp", "white-noise", "--n", "100", "--reps", "200", "--seed", "9"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let mut full = args.clone();
            full.extend(["--format", "both"]);
            let out = coint(&full, Some(dir.path()));
            if !out.status.success() {
                return Err(format!("{}: {}", args[0], String::from_utf8_lossy(&out.stderr)));
            }
            let json = std::fs::read(dir.path().join(format!("{}.json", args[0]))).unwrap();
            let csv = std::fs::read(dir.path().join(format!("{}.csv", args[0]))).unwrap();
            outputs.push((json, csv, out.stdout));
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{} differs between runs", args[0]));
        }
    }
    Ok(())
}

fn ecm_manifest_self_audit() -> Result<(), String> {
    let (x, y) = generate(&DgpSpec::new(DgpKind::CointegratedPair { beta: 0.7, adjust: 0.3 }, 300, 1.0, 1).unwrap());
    let fit = estimate_ecm(&y, &x, &EcmSpec::default()).map_err(|e| e.to_string())?;
    if audit_controls(&fit, &fit.manifest()).is_clean() {
        Ok(())
    } else {
        Err("ECM manifest does not audit clean against itself".into())
    }
}

fn property_suites() -> Verdict {
    let suites: [(&str, fn() -> Result<(), String>); 6] = [
        ("OLS oracle + orthogonality", ols_properties),
        ("EG scale invariance", eg_scale_invariance),
        ("guard completeness", guard_completeness),
        ("ECM self-audit", ecm_manifest_self_audit),
        ("command reproducibility", commands_reproducible),
        ("in-process reproducibility", || {
            let cfg = FalsePositiveConfig {
                n: 120,
                reps: 200,
                level: Level::One,
                base_seed: 3,
                in_levels: false,
            };
            let a = serde_json::to_string(&run_false_positive_experiment(&cfg).map_err(|e| e.to_string())?).unwrap();
            let b = serde_json::to_string(&run_false_positive_experiment(&cfg).map_err(|e| e.to_string())?).unwrap();
            if a == b {
                Ok(())
            } else {
                Err("false-positive experiment differs between runs".into())
            }
        }),
    ];
    let mut failed = Vec::new();
    for (name, suite) in suites {
        if let Err(e) = suite() {
            failed.push(format!("{name}: {e}"));
        }
    }
    if failed.is_empty() {
        Verdict::Pass(format!("{} suites passed", suites.len()))
    } else {
        Verdict::Fail(failed.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 misuse pathology (EG on differences)", misuse_pathology),
        ("2 correct-test size (EG on levels)", correct_test_size),
        ("3 specification grid replication", table_one_replication),
        ("4 critical-value anchors", critical_value_anchors),
        ("5 seasonal vs iterated differencing", operator_distinction),
        ("6 spurious levels regression", spurious_regression),
        ("7 ECT pathology and ECM recovery", ect_pathology),
        ("8 property suites and reproducibility", property_suites),
    ];
    let mut failures = 0;
    for (name, criterion) in criteria {
        let start = Instant::now();
        let verdict = criterion();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failures += 1;
                ("FAIL", d)
            }
            Verdict::Skip(d) => ("SKIP", d),
        };
        println!("{tag} criterion {name}: {detail} [{secs:.1}s]");
    }
    println!("acceptance: {} of {} criteria failed", failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
