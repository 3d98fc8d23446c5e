use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn fitscape(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fitscape"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn manifest_lists_required_keys_and_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sim");
    let o = fitscape(&[
        "simulate",
        "--steps",
        "2000",
        "--p",
        "3/4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(&out);
    for key in [
        "command",
        "params",
        "seed",
        "replicates",
        "version",
        "outputs",
        "elapsed_ms",
    ] {
        assert!(m.get(key).is_some(), "missing {key}");
    }
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["params"]["p"], 0.75);
    for f in m["outputs"].as_array().unwrap() {
        assert!(out.join(f.as_str().unwrap()).exists());
    }
}

#[test]
fn replay_reproduces_data_files() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let o = fitscape(&[
        "adjudicate",
        "--steps",
        "20000",
        "--replicates",
        "3",
        "--seed",
        "5",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = fitscape(&[
        "replay",
        a.join("manifest.json").to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["hist.csv", "adjudication.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |threads: &str, dir: &str| {
        let out = tmp.path().join(dir);
        let o = Command::new(env!("CARGO_BIN_EXE_fitscape"))
            .env("FITSCAPE_THREADS", threads)
            .args([
                "simulate",
                "--steps",
                "5000",
                "--replicates",
                "4",
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(o.status.success());
        out
    };
    let one = run("1", "one");
    let four = run("4", "four");
    for i in 0..4 {
        for stem in ["sites", "traj"] {
            let name = format!("{stem}_rep{i}.csv");
            assert_eq!(
                fs::read(one.join(&name)).unwrap(),
                fs::read(four.join(&name)).unwrap()
            );
        }
    }
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = |d: &str| tmp.path().join(d).to_str().unwrap().to_string();

    // Usage: bad flag value, bad parameters, regime without persistent sites.
    assert_eq!(fitscape(&["simulate", "--p", "abc"]).status.code(), Some(2));
    assert_eq!(
        fitscape(&["simulate", "--r", "1.5", "--out", &dir("x")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fitscape(&["adjudicate", "--p", "0.5", "--out", &dir("y")])
            .status
            .code(),
        Some(2)
    );

    // Property violation: the deliberately broken coupling layout.
    let o = fitscape(&[
        "coupling-check",
        "--broken-layout",
        "--steps",
        "1000",
        "--out",
        &dir("c"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let j: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("c/coupling.json")).unwrap())
            .unwrap();
    assert_eq!(j["ordered"], false);

    // I/O: output directory below a regular file.
    let file = tmp.path().join("plain");
    fs::write(&file, "x").unwrap();
    let o = fitscape(&["theory", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(fitscape(&["--help"]).status.code(), Some(0));
}

#[test]
fn meanfield_table_marks_the_extinct_phase() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("mf");
    let o = fitscape(&[
        "meanfield",
        "--r",
        "0.5",
        "--p-grid",
        "0.45,0.6,4/7,0.9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(out.join("phases.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows[0][1], "");
    assert_eq!(rows[0][2], "4");
    assert_eq!(rows[1][2], "2");
    assert!(rows[1][1].starts_with("0.5"));
    assert_eq!(rows[2][2], "3");
    assert_eq!(rows[3][2], "1");
}

#[test]
fn fig2_table_has_pooled_tail_row() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("f2");
    let o = fitscape(&[
        "fig2",
        "--steps",
        "20000",
        "--replicates",
        "2",
        "--k-max",
        "10",
        "--laws",
        "consistent,theorem",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("fig2.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,count,empirical_prob,consistent,theorem"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    let prob_sum: f64 = rows
        .iter()
        .map(|r| r.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((prob_sum - 1.0).abs() < 1e-12);
}

#[test]
fn pure_birth_runs_without_deaths() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("pb");
    let o = fitscape(&[
        "pure-birth",
        "--steps",
        "20000",
        "--replicates",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let j: Value =
        serde_json::from_str(&fs::read_to_string(out.join("adjudication.json")).unwrap()).unwrap();
    // 20000 steps from one individual, all births.
    assert_eq!(j["individuals"], 2 * 20001);
}
