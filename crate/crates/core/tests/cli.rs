//! End-to-end tests of the `fraccalc` binary: exit codes, output formats and
//! reproducibility across thread counts.

use fraccalc::campaign::CheckName;
use fraccalc::probes::ProbeCase;
use std::path::Path;
use std::process::{Command, Output};

fn fraccalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraccalc")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn frac_int_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let out = fraccalc(&[
        "frac-int", "--a", "0", "--b", "1", "--n", "64", "--s", "0.5", "--fn", "constant:1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 65);
    for (x, v) in rows {
        let exact = 2.0 * (x / std::f64::consts::PI).sqrt();
        assert!((v - exact).abs() < 1e-13, "{x}: {v} vs {exact}");
    }
    assert!(!text.contains('\r'));
}

#[test]
fn frac_int_of_a_measure() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    std::fs::write(&m, r#"{"atoms": [{"t": 0.5, "w": 1.0}]}"#).unwrap();
    let out = fraccalc(&["frac-int", "--n", "8", "--s", "0.3", "--measure", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let row = text.lines().find(|l| l.starts_with("6.25")).unwrap();
    let v: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    let exact = 0.125f64.powf(-0.7) / fraccalc::gamma_fn(0.3).unwrap();
    assert!((v - exact).abs() < 1e-12 * exact);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&fraccalc(&["frac-int", "--s", "2", "--fn", "cosine"])), 2);
    assert_eq!(code(&fraccalc(&["frac-int", "--s", "0.5"])), 2);
    assert_eq!(code(&fraccalc(&["frac-int", "--s", "0.5", "--fn", "no-such-fn"])), 2);
    assert_eq!(code(&fraccalc(&["verify"])), 2);
    assert_eq!(code(&fraccalc(&["verify", "--check", "nope"])), 2);
    assert_eq!(code(&fraccalc(&["probe", "--case", "nope"])), 2);
    assert_eq!(code(&fraccalc(&["norm", "--kind", "hardy", "--s", "0.5", "--p", "2", "--fn", "cosine"])), 2);
    assert_eq!(code(&fraccalc(&["no-such-command"])), 2);
}

#[test]
fn empty_check_set_in_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"checks": []}"#).unwrap();
    assert_eq!(code(&fraccalc(&["verify", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn list_names_every_check_and_probe() {
    let out = fraccalc(&["verify", "--list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for c in CheckName::ALL {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(c.name())), "{c}");
    }
    for p in ProbeCase::ALL {
        assert!(text.lines().any(|l| l.trim() == p.name()), "{p}");
    }
}

#[test]
fn verify_passes_and_reports_json() {
    let out = fraccalc(&["verify", "--check", "semigroup,ftc", "--fn", "cosine", "--ladder", "64,256,1024"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    assert!(outcomes.iter().all(|o| o["report"]["verdict"] == "pass"));
}

#[test]
fn failing_probe_exits_4() {
    let out = fraccalc(&["probe", "--case", "emb-p1s-sharp", "--ladder", "64,256,1024"]);
    assert_eq!(code(&out), 4);
    let out = fraccalc(&["probe", "--case", "cos-linfty", "--ladder", "256,1024,4096"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn representability_is_reported() {
    // D^s cos ~ x^(-s) / Gamma(1 - s) near a: in L^1, not in L^2 for s = 1/2
    let flag = |p: &str| {
        let out = fraccalc(&[
            "verify", "--check", "representability", "--fn", "cosine", "--p", p, "--ladder", "64,256,1024",
        ]);
        assert_eq!(code(&out), 0);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v["outcomes"][0]["report"]["params"]["representable"].as_bool().unwrap()
    };
    assert!(flag("1"));
    assert!(!flag("2"));
}

#[test]
fn sweep_csv_headers() {
    let to0 = fraccalc(&["sweep", "--direction", "to0", "--fn", "cosine", "--n", "256"]);
    assert_eq!(code(&to0), 0);
    assert_eq!(stdout(&to0).lines().next(), Some("s,value,target,gap"));
    let to1 = fraccalc(&["sweep", "--direction", "to1", "--fn", "jump:0.5"]);
    assert_eq!(code(&to1), 0);
    let text = stdout(&to1);
    assert_eq!(text.lines().next(), Some("s,phi_index,pairing,target,gap"));
    assert_eq!(text.lines().count(), 1 + 6 * 3);
    // two orders are not enough to close the gap
    let short = fraccalc(&["sweep", "--direction", "to1", "--fn", "jump:0.5", "--s-list", "0.5,0.9"]);
    assert_eq!(code(&short), 4);
}

#[test]
fn norm_reports_json() {
    let out = fraccalc(&["norm", "--kind", "lp", "--p", "2", "--fn", "constant:3", "--n", "32"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value_or_flag"].as_f64().unwrap() - 3.0).abs() < 1e-12, "{v}");
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn campaign_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json5");
    std::fs::write(
        &cfg,
        "{checks: ['semigroup', 'lp-bound', 'atom-detection', 'bv-sup'], s_values: [0.3, 0.6], seed: 7}",
    )
    .unwrap();
    let run = |threads: &str, sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = Command::new(env!("CARGO_BIN_EXE_fraccalc"))
            .env("FRACCALC_THREADS", threads)
            .args(["verify", "--config", cfg.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        read_dir_sorted(&out_dir)
    };
    let one = run("1", "one");
    let four = run("4", "four");
    assert!(one.iter().any(|(n, _)| n == "campaign.json"));
    assert!(one.iter().any(|(n, _)| n.ends_with(".csv")));
    assert_eq!(one, four);
}
