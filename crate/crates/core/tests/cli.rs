use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fullsep::io::{read_state, LoadedState};
use fullsep::operators::Dims;
use fullsep::purecrit::grid_concurrence;
use fullsep::states::{named_state, random_state, StateKind, StateSpec};
use serde_json::Value;
use tempfile::TempDir;

fn fullsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fullsep")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = fullsep(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap_or(Value::Null)
}

fn code(args: &[&str]) -> i32 {
    fullsep(args).status.code().unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generated_ghz_prime_is_entangled() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "s.json");
    ok(&["gen", "--state", "ghz_prime", "--out", s(&f)]);
    let rep = ok(&["pure", s(&f)]);
    let want = grid_concurrence(&named_state(&StateSpec::named(StateKind::GhzPrime)).unwrap());
    assert_eq!(rep["method"], "pure");
    assert_eq!(rep["verdict"], "entangled");
    assert_eq!(rep["value"].as_f64().unwrap(), want);
}

#[test]
fn noisy_ghz_prime_quasipure_is_positive() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "r.json");
    ok(&["mix", "--state", "ghz_prime", "--x", "0.5", "--out", s(&f)]);
    let rep = ok(&["mixed", s(&f), "--method", "quasipure"]);
    assert_eq!(rep["method"], "quasipure");
    assert!(rep["value"].as_f64().unwrap() > 0.0);
    assert_eq!(rep["verdict"], "entangled");
}

#[test]
fn random_product_is_fully_separable() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "p.json");
    ok(&["gen", "--state", "random_product", "--dims", "2,3,2", "--seed", "11", "--out", s(&f)]);
    let rep = ok(&["pure", s(&f)]);
    assert_eq!(rep["verdict"], "fully separable");
    assert!(rep["value"].as_f64().unwrap() < 1e-10);
}

#[test]
fn generated_file_round_trips_bit_exactly() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "r.json");
    ok(&["gen", "--state", "random_pure", "--dims", "3,2,3", "--seed", "42", "--out", s(&f)]);
    let want = random_state(&StateSpec::random(StateKind::RandomPure, Dims::new(3, 2, 3).unwrap(), 42)).unwrap();
    assert_eq!(read_state(&f).unwrap(), LoadedState::Pure(want));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "r.json");
    ok(&["mix", "--state", "w_prime", "--x", "0.6", "--out", s(&f)]);
    let (a, b, c) = (path(&dir, "a.json"), path(&dir, "b.json"), path(&dir, "c.json"));
    let knobs = ["--method", "all", "--restarts", "6", "--opt-seed", "7"];
    for (out, threads) in [(&a, None), (&b, None), (&c, Some("2"))] {
        let mut args = vec!["mixed", s(&f)];
        args.extend(knobs);
        args.extend(["--out", s(out)]);
        if let Some(t) = threads {
            args.extend(["--threads", t]);
        }
        ok(&args);
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let x: Value = serde_json::from_slice(&first).unwrap();
    let y: Value = serde_json::from_slice(&std::fs::read(&c).unwrap()).unwrap();
    let methods = ["direct", "kronecker", "analytic", "quasipure"];
    for (i, m) in methods.iter().enumerate() {
        assert_eq!(x[i]["method"], *m);
        let (vx, vy) = (x[i]["value"].as_f64().unwrap(), y[i]["value"].as_f64().unwrap());
        assert!((vx - vy).abs() <= 1e-13, "{m}: {vx} vs {vy}");
    }
}

#[test]
fn pure_file_is_accepted_by_mixed() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "s.json");
    ok(&["gen", "--state", "w", "--out", s(&f)]);
    let rep = ok(&["mixed", s(&f), "--method", "analytic"]);
    assert!((rep["value"].as_f64().unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-10);
    assert_eq!(rep["diagnostics"]["rank"], 1);
}

#[test]
fn sweep_writes_one_row_per_grid_point() {
    let dir = TempDir::new().unwrap();
    let f = path(&dir, "sweep.csv");
    ok(&[
        "sweep", "--state", "ghz_prime", "--x-start", "0.3", "--x-end", "1.0", "--x-step", "0.1", "--method",
        "quasipure", "--out", s(&f),
    ]);
    let mut reader = csv::Reader::from_path(&f).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["x", "value", "raw_value", "dominance_ratio", "converged"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let xs: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(xs, [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]);
    for r in &rows {
        assert!(r[1].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn exit_codes_follow_the_error_class() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["pure", s(&path(&dir, "missing.json"))]), 1);

    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{\"type\":\"pure\",\"dims\":[2,2]}").unwrap();
    assert_eq!(code(&["pure", s(&bad)]), 1);

    let good = path(&dir, "g.json");
    ok(&["gen", "--state", "ghz", "--out", s(&good)]);
    assert_eq!(code(&["mixed", s(&good), "--method", "exact"]), 1);
    assert_eq!(code(&["mix", "--state", "ghz", "--x", "1.5", "--out", s(&path(&dir, "m.json"))]), 1);

    let mut rows = vec![vec![[0.0, 0.0]; 8]; 8];
    rows[0][0] = [1.5, 0.0];
    rows[1][1] = [-0.5, 0.0];
    let not_psd = path(&dir, "neg.json");
    std::fs::write(
        &not_psd,
        serde_json::json!({"type": "mixed", "dims": [2, 2, 2], "matrix": rows}).to_string(),
    )
    .unwrap();
    let out = fullsep(&["mixed", s(&not_psd), "--method", "analytic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positivity"));

    let big = path(&dir, "big.json");
    ok(&["mix", "--state", "ghz", "--dims", "4,4,4", "--x", "1", "--out", s(&big)]);
    assert_eq!(code(&["mixed", s(&big), "--method", "direct"]), 3);
}
