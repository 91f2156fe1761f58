//! End-to-end runs of the command-line front end.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ion-mediated");

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn")
}

fn run_in(sub: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

fn csv_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = config("rb-ca-rb-30s-30s.json");
    let runs: [(&str, &[&str]); 6] = [
        ("scales", &[]),
        ("bo-curve", &["--points", "50"]),
        ("phonons", &["--points", "41"]),
        ("critical", &["--pairs", "30S-30S,30S-5S"]),
        ("density", &["--separations-um", "20", "--points", "21", "--n-max", "20"]),
        ("gauge", &["--max-quanta", "1"]),
    ];
    for (sub, extra) in runs {
        let dir = tempfile::tempdir().unwrap();
        let first = run_in(sub, &cfg, dir.path(), extra);
        assert!(first.status.success(), "{sub}: {}", text(&first));
        let a = csv_snapshot(dir.path());
        assert!(!a.is_empty(), "{sub} wrote no CSV");
        let mut with_flag = extra.to_vec();
        with_flag.push("--overwrite");
        let second = run_in(sub, &cfg, dir.path(), &with_flag);
        assert!(second.status.success(), "{sub}: {}", text(&second));
        assert_eq!(a, csv_snapshot(dir.path()), "{sub}");
        for (name, bytes) in &a {
            let s = String::from_utf8(bytes.clone()).unwrap();
            assert!(s.lines().any(|l| l.starts_with("# config_sha256: ")), "{name} lacks the digest");
        }
    }
}

#[test]
fn refuses_to_overwrite() {
    let cfg = config("rb-ca-rb-30s-30s.json");
    let dir = tempfile::tempdir().unwrap();
    assert!(run_in("scales", &cfg, dir.path(), &[]).status.success());
    let before = fs::read(dir.path().join("scales.csv")).unwrap();
    let again = run_in("scales", &cfg, dir.path(), &[]);
    assert_eq!(again.status.code(), Some(1), "{}", text(&again));
    assert!(text(&again).contains("--overwrite"));
    assert_eq!(before, fs::read(dir.path().join("scales.csv")).unwrap());
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let src = fs::read_to_string(config("rb-ca-rb-30s-30s.json")).unwrap();

    fs::write(&bad, src.replace("\"omega_z_kHz\": 9.0", "\"omega_z_kHz\": \"nine\"")).unwrap();
    let o = run_in("scales", &bad, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("atom.omega_z_kHz"), "{}", text(&o));

    fs::write(&bad, "{ \"ion\": ").unwrap();
    let o = run_in("scales", &bad, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("line"), "{}", text(&o));

    fs::write(&bad, src.replace("\"30S\", \"30S\"", "\"30P\", \"30S\"")).unwrap();
    let o = run_in("scales", &bad, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(2), "{}", text(&o));

    let o = run_in("scales", &dir.path().join("missing.json"), &dir.path().join("out"), &[]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn invalid_ranges_exit_2() {
    let cfg = config("rb-ca-rb-30s-30s.json");
    let dir = tempfile::tempdir().unwrap();
    let o = run_in("phonons", &cfg, dir.path(), &["--min-um", "20", "--max-um", "10"]);
    assert_eq!(o.status.code(), Some(2), "{}", text(&o));
    let o = run_in("bo-curve", &cfg, dir.path(), &["--points", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", text(&o));
    let o = run(&["phonons", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn critical_without_coupling_reports_no_instability() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("free.json");
    let src = fs::read_to_string(config("rb-ca-rb-30s-30s.json")).unwrap();
    fs::write(&cfg, src.replace("5.46e-57", "0.0").replace("-26.61", "0.0")).unwrap();
    let o = run_in("critical", &cfg, &dir.path().join("out"), &[]);
    assert!(o.status.success(), "{}", text(&o));
    assert!(text(&o).contains("no instability in bracket"));
    let csv = fs::read_to_string(dir.path().join("out/critical.csv")).unwrap();
    assert!(csv.lines().last().unwrap().contains("none"));
}

#[test]
fn critical_reproduces_quoted_separations() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        "critical",
        &config("rb-ca-rb-30s-30s.json"),
        dir.path(),
        &["--pairs", "30S-30S,30S-5S,25S-25S"],
    );
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("critical.csv")).unwrap();
    let rows: Vec<f64> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let expect = [9.1887, 9.1900, 7.4280];
    for (r, e) in rows.iter().zip(expect) {
        assert!((r - e).abs() < 1e-3, "{r} vs {e}");
    }
}
