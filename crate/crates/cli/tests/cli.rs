use std::process::{Command, Output};

use serde_json::Value;

fn abcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abcone")).args(args).output().unwrap()
}

fn abcone_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abcone"))
        .args(args)
        .env("ABCONE_THREADS", threads)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

const WORKED: &[&str] = &[
    "--alpha", "1", "--phi", "-1.5", "--spin", "+1", "--m", "1", "--mass", "1", "--r0", "1",
];

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&abcone(&with(&["bound"], WORKED))), 0);
    for bad in [
        &["bound", "--alpha", "1.5"][..],
        &["bound", "--alpha", "0"],
        &["bound", "--spin", "2"],
        &["bound", "--r0", "0"],
        &["bound", "--r0", "-1"],
        &["scatter", "--sweep", "alpha:0.5:1.2:4:lin"],
    ] {
        assert_eq!(code(&abcone(bad)), 3, "{bad:?}");
    }
    for bad in [
        &["bound", "--alphx", "1"][..],
        &["bound", "--alpha", "one"],
        &["frobnicate"],
        &["scatter", "--sweep", "k:1:2:1:lin"],
        &["scatter", "--sweep", "k:0:2:4:log"],
        &["scatter", "--lambda-mode", "manual:abc"],
        &["amplitude", "--smoothing", "1.5"],
        &["scatter", "--format", "xml"],
    ] {
        assert_eq!(code(&abcone(bad)), 2, "{bad:?}");
    }
    // no bound state for φs > −1
    let o = abcone(&["bound", "--phi", "0.5"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_lines(&o)[0]["error"], "NoBoundState");
    assert_eq!(code(&abcone_env(&["channels"], "zero")), 2);
}

#[test]
fn worked_channel_bound() {
    let o = abcone(&with(&["bound"], WORKED));
    let r = &json_lines(&o)[0];
    let f = |k: &str| r[k].as_f64().unwrap();
    assert!((f("energy_ks") + 0.125).abs() < 1e-13);
    assert!((f("energy_bg") + 0.125).abs() < 1e-13);
    assert!((f("energy_oracle") + 0.125).abs() < 1e-9);
    assert_eq!(f("lambda"), -2.0);
    assert_eq!(f("nu"), 0.5);
    assert!(f("agreement") < 1e-9);
    assert!(r["error"].is_null());
}

#[test]
fn flat_fluxless_amplitude_vanishes() {
    let o = abcone(&["amplitude", "--alpha", "1", "--phi", "0"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 35);
    for r in rows {
        for k in ["f_re", "f_im", "dsigma"] {
            assert_eq!(r[k].as_f64().unwrap(), 0.0);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "scatter",
        "--alpha",
        "0.8",
        "--phi",
        "0.37",
        "--spin",
        "-1",
        "--r0",
        "0.1",
        "--sweep",
        "k:0.01:10:100:log",
    ];
    let a = abcone_env(&args, "1");
    let b = abcone_env(&args, "4");
    let c = abcone(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(json_lines(&a).len(), 100);
}

fn split_csv(line: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                chars.next();
                out.last_mut().unwrap().push('"');
            }
            '"' => quoted = !quoted,
            ',' if !quoted => out.push(String::new()),
            c => out.last_mut().unwrap().push(c),
        }
    }
    out
}

#[test]
fn csv_and_json_agree() {
    for cmd in [
        &[
            "ho",
            "--alpha",
            "1",
            "--phi",
            "-1.5",
            "--m",
            "1",
            "--r0",
            "0.3",
            "--sweep",
            "omega:0.5:2:3:lin",
        ][..],
        &[
            "amplitude",
            "--alpha",
            "0.8",
            "--phi",
            "0.37",
            "--spin",
            "-1",
            "--r0",
            "0.1",
            "--k",
            "2",
        ],
        &["bound", "--m", "1", "--sweep", "phi:-2.5:-0.5:5:lin"],
        &["channels", "--alpha", "0.6", "--phi", "0.25"],
    ] {
        let json = json_lines(&abcone(cmd));
        let csv_out = abcone(&with_format(cmd));
        let text = String::from_utf8(csv_out.stdout).unwrap();
        let mut lines = text.lines();
        let header: Vec<String> = split_csv(lines.next().unwrap());
        let rows: Vec<Vec<String>> = lines.map(split_csv).collect();
        assert_eq!(rows.len(), json.len(), "{cmd:?}");
        for (row, obj) in rows.iter().zip(&json) {
            let keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
            assert_eq!(keys.len(), header.len());
            for (col, cell) in header.iter().zip(row) {
                let v = &obj[col.as_str()];
                match v {
                    Value::Null => assert_eq!(cell, ""),
                    Value::Number(n) => assert_eq!(n.as_f64().unwrap(), cell.parse::<f64>().unwrap(), "{col}"),
                    Value::Bool(b) => assert_eq!(b.to_string(), *cell),
                    Value::String(s) => assert_eq!(s, cell),
                    Value::Array(w) => {
                        let joined: Vec<&str> = w.iter().map(|x| x.as_str().unwrap()).collect();
                        assert_eq!(joined.join("|"), *cell);
                    }
                    Value::Object(_) => unreachable!(),
                }
            }
        }
    }
}

fn with_format(cmd: &[&'static str]) -> Vec<&'static str> {
    with(cmd, &["--format", "csv"])
}

#[test]
fn sweep_survives_failed_points() {
    let o = abcone(&["bound", "--m", "1", "--sweep", "phi:-1.8:-0.5:4:lin"]);
    assert_eq!(code(&o), 0);
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 4);
    assert!(rows[0]["energy_ks"].is_number());
    assert_eq!(rows[3]["error"], "NoBoundState");
    assert!(rows[3]["energy_ks"].is_null());
    assert!(!rows[3]["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn csv_header_is_documented() {
    let help = String::from_utf8(abcone(&["scatter", "--help"]).stdout).unwrap();
    let o = abcone(&["scatter", "--format", "csv"]);
    let header = String::from_utf8(o.stdout).unwrap().lines().next().unwrap().to_string();
    assert!(help.contains(&header), "{help}");
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let mut args = vec!["bound", "--format", "csv", "--out", path.to_str().unwrap()];
    args.extend_from_slice(WORKED);
    let o = abcone(&args);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("alpha,phi,s,m,"));
}

#[test]
fn lambda_modes_reach_the_limits() {
    let base = ["scatter", "--alpha", "1", "--phi", "-1.5", "--m", "1", "--k", "0.7"];
    let dirichlet = &json_lines(&abcone(&with(&base, &["--lambda-mode", "dirichlet"])))[0];
    assert_eq!(dirichlet["mu"].as_f64().unwrap(), 0.0);
    // ν = 1/2 puts the infinite case on the pole of μ, but S stays finite
    let inf = &json_lines(&abcone(&with(&base, &["--lambda-mode", "infinite"])))[0];
    assert_eq!(inf["pole_at_k"], true);
    assert!(inf["mu"].is_null());
    let (re, im) = (inf["s_re"].as_f64().unwrap(), inf["s_im"].as_f64().unwrap());
    assert!((re * re + im * im - 1.0).abs() < 1e-14);
    let manual = &json_lines(&abcone(&with(&base, &["--lambda-mode", "manual:-2"])))[0];
    let physical = &json_lines(&abcone(&base))[0];
    assert_eq!(manual["s_re"], physical["s_re"]);
}

#[test]
fn oscillator_reports_lambda_ratio_and_regular_fallback() {
    let o = abcone(&[
        "ho", "--alpha", "1", "--phi", "-1.5", "--m", "1", "--r0", "0.3", "--levels", "3",
    ]);
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert_eq!(r["lambda_ratio"].as_f64().unwrap(), -2.0);
        assert_eq!(r["branch"], "mixed");
    }
    let o = abcone(&["ho", "--alpha", "1", "--phi", "0", "--m", "2", "--omega", "2"]);
    assert_eq!(code(&o), 0);
    for r in json_lines(&o) {
        assert_eq!(r["branch"], "regular");
        let n = r["n"].as_f64().unwrap();
        assert_eq!(r["energy"].as_f64().unwrap(), (2.0 * n + 3.0) * 2.0);
    }
}

#[test]
fn verify_passes() {
    let o = abcone(&["verify", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 11);
}
