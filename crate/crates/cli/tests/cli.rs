use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

fn isqrt(n: u128) -> u128 {
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[test]
fn digits_of_shifted_root_match_integer_sqrt() {
    let o = run(&["digits", "--minpoly", "[-2,0,1]", "--interval", "1/1", "3/2", "--shift", "-1", "--base", "2", "-N", "1024"]);
    let v = json(&o);
    let d = v["result"]["digits"].as_str().unwrap();
    assert_eq!(d.len(), 1024);
    // floor(sqrt(2) 2^60) is "1" followed by the first 60 bits of sqrt(2) - 1
    let r = isqrt(2u128 << 120);
    assert_eq!(&format!("{r:b}")[1..], &d[..60]);
}

#[test]
fn bound_example() {
    let v = json(&run(&["bounds", "t2", "r=3", "delta=1"]));
    let x: f64 = v["result"]["value"].as_str().unwrap().parse().unwrap();
    assert!((x / 3.506e7 - 1.0).abs() < 1e-3, "{x}");
    assert_eq!(v["result"]["params"]["r"], "3");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

fn cache_file(dir: &Path) -> String {
    let cache = dir.join("cache");
    let o = run(&["digits", "--minpoly", "[-1,2,1]", "--interval", "0", "1", "-N", "2000", "--cache-dir", cache.to_str().unwrap()]);
    stdout(&o);
    let f = fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    f.to_str().unwrap().to_string()
}

#[test]
fn complexity_from_cache_file() {
    let t = tempfile::tempdir().unwrap();
    let f = cache_file(t.path());
    let s = stdout(&run(&["complexity", "--input", &f, "--n-max", "200"]));
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[0].starts_with("# digitlab "));
    assert!(lines[0].contains(" config "));
    let table: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(table[0], "n,p(n)");
    assert_eq!(table.len(), 201);
    // the same profile from the naive counter
    let naive = stdout(&run(&["complexity", "--input", &f, "--n-max", "200", "--naive"]));
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&s), strip(&naive));
}

#[test]
fn identical_config_gives_identical_files() {
    let t = tempfile::tempdir().unwrap();
    let a = t.path().join("a.json");
    let b = t.path().join("b.json");
    for p in [&a, &b] {
        stdout(&run(&["twisted", "gap-suite", "--systems", "4", "--box", "100", "--seed", "7", "--out", p.to_str().unwrap()]));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = json(&run(&["twisted", "gap-suite", "--systems", "4", "--box", "100", "--seed", "8"]));
    let a: serde_json::Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_ne!(a["config_hash"], c["config_hash"]);
}

#[test]
fn config_file_supplies_defaults() {
    let t = tempfile::tempdir().unwrap();
    let cfg = t.path().join("run.cfg");
    fs::write(&cfg, "# defaults\nsource = champernowne\ndigits = 300\nn_max = 4\n").unwrap();
    let s = stdout(&run(&["complexity", "--config", cfg.to_str().unwrap(), "--n-max", "3"]));
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, vec!["n,p(n)", "1,2", "2,4", "3,8"]);
    assert!(s.contains("--source champernowne"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["digits", "--minpoly", "[-2,0,1]", "--interval", "0", "1", "-N", "8"]).status.code(), Some(3));
    // 1/3 has the periodic expansion 0101...
    let o = run(&["experiment", "digit-changes", "--minpoly", "[-1,3]", "--interval", "0", "1", "-N", "256"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rational"));
    let t = tempfile::tempdir().unwrap();
    let f = cache_file(t.path());
    let mut bytes = fs::read(&f).unwrap();
    let k = bytes.len() - 20;
    bytes[k] ^= 1;
    fs::write(&f, bytes).unwrap();
    assert_eq!(run(&["nbdc", "--input", &f]).status.code(), Some(6));
    assert_eq!(run(&["digits", "--input", "/nonexistent/x.dcl"]).status.code(), Some(7));
}

#[test]
fn gap_series_changes_report() {
    let v = json(&run(&["experiment", "gap-series-changes", "--eta", "4/5", "-N", "65536", "--c1", "0.5"]));
    let r = &v["result"];
    assert_eq!(r["kind"], "diagnostic");
    assert!(r["fit"]["slope"].as_f64().unwrap() > 0.0);
    assert_eq!(r["comparisons"].as_array().unwrap().len(), 5);
}

#[test]
fn csv_refused_for_records() {
    let o = run(&["bounds", "t2", "r=3", "delta=1", "--csv"]);
    assert_eq!(o.status.code(), Some(3));
}
