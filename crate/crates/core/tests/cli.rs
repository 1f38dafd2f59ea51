mod common;

use std::process::Command as Process;

use common::{rng, sample};
use proptest::prelude::*;
use rand::Rng;
use serde_json::{json, Value as Json};
use toric_heights::arith::format_rational;
use toric_heights::cli::{execute, parse_instance, render, Command, Report, RunConfig, Value};
use toric_heights::LogValue;

fn toric(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_toric")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn corpus() -> Vec<std::path::PathBuf> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/instances");
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

fn random_file(seed: u64) -> Json {
    let mut r = rng(seed);
    let s = sample(&mut r, 3, 6, 50);
    let alpha: Vec<Json> = s
        .alpha
        .iter()
        .map(|x| {
            if r.gen_bool(0.2) {
                json!({"q": format_rational(x), "base": "2", "exponent": "1/2"})
            } else {
                json!(format_rational(x))
            }
        })
        .collect();
    let mut file = json!({"version": 1, "n": s.dim(), "A": s.points, "alpha": alpha});
    if r.gen_bool(0.5) {
        let b: Vec<i64> = (0..s.points.len()).map(|_| r.gen_range(0..3)).collect();
        file["b"] = json!(b);
    }
    if r.gen_bool(0.5) {
        file["c"] = json!([s.dim() + 1]);
    }
    if r.gen_bool(0.5) {
        let t: Vec<String> = (0..s.dim()).map(|_| format_rational(&common::rational(&mut r, 9))).collect();
        file["samples"] = json!([t]);
    }
    if r.gen_bool(0.3) {
        file["options"] = json!({"waive_product_formula": true, "precision_cap_bits": 8192});
    }
    file
}

fn log_values(v: &Value, out: &mut Vec<LogValue>) {
    match v {
        Value::Log(x) => out.push(x.clone()),
        Value::List(items) => items.iter().for_each(|i| log_values(i, out)),
        Value::Record(fields) => fields.iter().for_each(|(_, i)| log_values(i, out)),
        _ => {}
    }
}

fn decimal_agrees(j: &Json, digits: i32) {
    match j {
        Json::Object(m) if m.contains_key("coefficients") => {
            let coeffs = m["coefficients"].as_object().unwrap();
            let exact: f64 = coeffs
                .iter()
                .map(|(p, c)| {
                    let c: toric_heights::arith::Q = toric_heights::arith::parse_rational(c.as_str().unwrap()).unwrap();
                    num_traits::ToPrimitive::to_f64(&c).unwrap() * p.parse::<f64>().unwrap().ln()
                })
                .sum();
            let shown: f64 = m["decimal"].as_str().unwrap().parse().unwrap();
            let ulp = 10f64.powi(-digits);
            assert!((exact - shown).abs() <= ulp * (1.0 + 1e-6) + exact.abs() * 1e-14, "{exact} vs {shown}");
        }
        Json::Object(m) => m.values().for_each(|x| decimal_agrees(x, digits)),
        Json::Array(a) => a.iter().for_each(|x| decimal_agrees(x, digits)),
        _ => {}
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>()) {
        let text = random_file(seed).to_string();
        let inst = parse_instance(&text).unwrap();
        let again = parse_instance(&render(&inst)).unwrap();
        prop_assert_eq!(again, inst);
    }

    #[test]
    fn decimals_match_coefficient_maps(seed in any::<u64>(), digits in 1usize..=12) {
        let mut r = rng(seed);
        let mut report = Report::new("values");
        let values: Vec<LogValue> = (0..6).map(|_| common::log_value(&mut r)).collect();
        report.push("values", values);
        decimal_agrees(&report.to_json(digits), digits as i32);
    }
}

#[test]
fn decimals_of_command_output_match() {
    let inst = parse_instance(&std::fs::read_to_string(corpus().into_iter().find(|p| p.ends_with("hexagon.json")).unwrap()).unwrap()).unwrap();
    for c in [Command::Height, Command::ChowWeight, Command::Bezout, Command::Envelope] {
        let r = execute(c, &inst, &RunConfig::default()).unwrap();
        let mut logs = Vec::new();
        r.body.iter().for_each(|(_, v)| log_values(v, &mut logs));
        assert!(!logs.is_empty(), "{c}");
        for digits in [4, 10, 20] {
            decimal_agrees(&r.to_json(digits), digits as i32);
        }
    }
}

#[test]
fn check_passes_on_the_corpus() {
    let files = corpus();
    assert!(files.len() >= 8);
    for f in files {
        let (code, out, err) = toric(&["--input", f.to_str().unwrap(), "--command", "check"]);
        assert_eq!(code, 0, "{}: {out}{err}", f.display());
        assert!(out.starts_with("passed: true"), "{}: {out}", f.display());
    }
}

#[test]
fn conic_height_and_degree() {
    let conic = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/conic.json");
    let (code, out, _) = toric(&["--input", conic, "--command", "height"]);
    assert_eq!(code, 0);
    assert!(out.contains("height: 2*log(2) ≈ 1.3862943611"), "{out}");
    let (code, out, _) = toric(&["--input", conic, "--command", "degree", "--machine"]);
    assert_eq!(code, 0);
    let j: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(j["result"]["degree"], 2);
    let (_, out, _) = toric(&["--input", conic, "--command", "height", "--machine", "--precision", "3"]);
    let j: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(j["result"]["height"]["coefficients"], json!({"2": "2"}));
    assert_eq!(j["result"]["height"]["decimal"], "1.386");
}

#[test]
fn oracle_command_agrees_on_the_conic() {
    let conic = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/conic.json");
    let (code, out, err) = toric(&["--input", conic, "--command", "oracle", "--samples", "100000", "--seed", "3"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("agrees: true"));
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("toric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };

    let zero = write("zero.json", r#"{"n":1, "A":[[0],[1],[2]], "alpha":["1","0","1"]}"#);
    let (code, _, err) = toric(&["--input", &zero, "--command", "height"]);
    assert_eq!(code, 2);
    assert!(err.contains("zero coordinate"), "{err}");

    let even = write("even.json", r#"{"n":1, "A":[[0],[2]]}"#);
    let (code, _, err) = toric(&["--input", &even, "--command", "degree"]);
    assert_eq!(code, 2);
    assert!(err.contains("index 2"), "{err}");
    let (code, out, _) = toric(&["--input", &even, "--command", "degree", "--normalized-mode"]);
    assert_eq!(code, 0);
    assert!(out.contains("degree: 1"), "{out}");

    let broken = write("broken.json", "{\"n\": 1,\n \"A\": [[0], [1]\n");
    let (code, _, err) = toric(&["--input", &broken, "--command", "degree"]);
    assert_eq!(code, 2);
    assert!(err.contains("line"), "{err}");

    let bad_pf = write("pf.json", r#"{"n":1, "A":[[0],[1],[2]], "weights":[{"place":"inf","tau":["0","log(2)","0"]}]}"#);
    let (code, _, err) = toric(&["--input", &bad_pf, "--command", "height"]);
    assert_eq!(code, 2, "{err}");
    let (code, out, _) = toric(&["--input", &bad_pf, "--command", "height", "--waive-product-formula"]);
    assert_eq!(code, 0);
    assert!(out.contains("product_formula: false"), "{out}");

    let close = write(
        "close.json",
        r#"{"n":1, "A":[[0],[1]],
            "weights":[{"place":"inf","tau":["0","log(2) - 3473229337418774934657366/5504938256213345873657899*log(3)"]}],
            "options":{"precision_cap_bits":64}}"#,
    );
    let (code, _, err) = toric(&["--input", &close, "--command", "height", "--waive-product-formula"]);
    assert_eq!(code, 3, "{err}");

    let conic = concat!(env!("CARGO_MANIFEST_DIR"), "/instances/conic.json");
    let (code, out, _) = toric(&["--input", conic, "--command", "oracle", "--samples", "1"]);
    assert_eq!(code, 4, "{out}");

    let (code, _, err) = toric(&["--input", &even, "--command", "bezout", "--normalized-mode"]);
    assert_eq!(code, 2);
    assert!(err.contains(" b"), "{err}");

    let (code, _, _) = toric(&["--input", "/nonexistent/x.json", "--command", "degree"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).ok();
}
