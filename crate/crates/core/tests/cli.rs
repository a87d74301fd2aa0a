use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use piecewise_fourier::sweep::Table;

fn pwfourier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pwfourier")).args(args).output().unwrap()
}

fn synth(dir: &Path, name: &str, cfg: &str) -> String {
    let c = dir.join(format!("{name}.cfg.json"));
    let out = dir.join(format!("{name}.json"));
    fs::write(&c, cfg).unwrap();
    let o = pwfourier(&["synth", "--config", c.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_str().unwrap().to_string()
}

fn column(t: &Table, name: &str) -> Vec<String> {
    let i = t.header.iter().position(|h| h == name).unwrap();
    t.rows.iter().map(|r| r[i].clone()).collect()
}

#[test]
fn synth_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"schema": 1, "k": 2, "d1": 5, "n_smooth": 40, "seed": 11}"#;
    let a = fs::read(synth(dir.path(), "a", cfg)).unwrap();
    let b = fs::read(synth(dir.path(), "b", cfg)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn oracle_mode_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let f = synth(dir.path(), "f", r#"{"schema": 1, "k": 3, "d1": 4, "n_smooth": 64, "seed": 5}"#);
    let o = pwfourier(&["reconstruct", "--input", &f, "--M", "128", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let t = Table::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 3 * 5);
    for name in ["xi_err", "A_err", "sup_err_Dr"] {
        for v in column(&t, name) {
            assert!(v.parse::<f64>().unwrap() <= 1e-12, "{name} = {v}");
        }
    }
}

#[test]
fn reconstruct_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = synth(dir.path(), "f", r#"{"schema": 1, "k": 1, "d1": 6, "n_smooth": 300, "seed": 2}"#);
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("r.json");
    let o = pwfourier(&[
        "reconstruct", "--input", &f, "--M", "128", "--output", csv.to_str().unwrap(), "--result",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let t = Table::from_csv(&text).unwrap();
    assert_eq!(t.to_csv().unwrap(), text);
    assert_eq!(column(&t, "status"), vec!["ok"; 3]);
    assert!(column(&t, "xi_err")[0].parse::<f64>().unwrap() < 1e-6);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["jumps"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = synth(dir.path(), "f", r#"{"schema": 1, "k": 1, "d1": 4, "n_smooth": 64, "seed": 3}"#);
    // numerical failure: two estimates collapse onto the single jump
    let o = pwfourier(&["reconstruct", "--input", &f, "--M", "64", "--K", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let t = Table::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert!(column(&t, "status")[0].contains("prony"));
    // configuration errors
    assert_eq!(pwfourier(&["reconstruct", "--input", &f, "--M", "2"]).status.code(), Some(2));
    assert_eq!(pwfourier(&["reconstruct", "--input", "/nonexistent.json", "--M", "64"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"schema": 7, "k": 1, "d1": 4, "n_smooth": 8, "seed": 0}"#).unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(
        pwfourier(&["synth", "--config", bad.to_str().unwrap(), "--output", out.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(pwfourier(&["identities"]).status.code(), Some(0));
}

#[test]
fn sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"schema": 1, "mode": "single-jump", "ms": [32, 64, 128, 256], "k": 1, "d": 2, "d1": 6, "trials": 3, "seed": 4}"#,
    )
    .unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = pwfourier(&["sweep", "--spec", spec.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for file in ["trials.csv", "medians.csv", "fits.csv"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }
    let fits = Table::from_csv(&fs::read_to_string(a.join("fits.csv")).unwrap()).unwrap();
    let xi = fits.rows.iter().find(|r| r[0] == "xi").unwrap();
    let slope: f64 = xi[column_index(&fits, "slope")].parse().unwrap();
    assert!(slope < -3.5, "xi slope {slope}");
    assert!(fs::read_to_string(a.join("plot.svg")).unwrap().starts_with("<svg"));
}

fn column_index(t: &Table, name: &str) -> usize {
    t.header.iter().position(|h| h == name).unwrap()
}

#[test]
fn localize_demo_runs() {
    let o = pwfourier(&["localize-demo", "--ms", "128,256"]);
    assert_eq!(o.status.code(), Some(0));
    let t = Table::from_csv(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(t.header[..2], ["M".to_string(), "xi_err".to_string()]);
    assert_eq!(t.rows.len(), 2);
    assert_eq!(pwfourier(&["localize-demo", "--d", "7", "--d1", "6"]).status.code(), Some(2));
}
