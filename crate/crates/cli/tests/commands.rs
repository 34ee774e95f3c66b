use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE: &str = "z1^2*zb1^2 + z2^2*zb2^2";
const EQ5: &str = "(z1*zb1 - z2*zb2)^2";

fn f_c(c: &str) -> String {
    format!("z1^2*zb1^2 + ({c})*z1*z2*zb1*zb2 + z2^2*zb2^2")
}

fn holofactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holofactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    holofactor(args).status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = holofactor(&all);
    let v = serde_json::from_slice(&out.stdout).expect("report JSON on stdout");
    (out.status.code().unwrap(), v)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&["check", "--mode", "strict", "-e", EXAMPLE]), 1);
    assert_eq!(code(&["check", "--mode", "semi", "-e", EXAMPLE]), 0);
    assert_eq!(code(&["check", "--mode", "strict", "--d", "1", "-e", EXAMPLE]), 0);
    assert_eq!(code(&["check", "--mode", "semi", "-e", EQ5]), 1);

    let bad = holofactor(&["check", "-e", "z1*zb1 +* z2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("at "));
    assert_eq!(code(&["check", "-e", "z1*zb1 + z1^2*zb1^2"]), 2);
    assert_eq!(code(&["check", "--mode", "sometimes", "-e", EXAMPLE]), 2);
    assert_eq!(code(&["check", "/nonexistent/input.txt"]), 2);
}

#[test]
fn check_always_emits_certificate() {
    let (c, report) = json_report(&["check", "-e", EXAMPLE]);
    assert_eq!(c, 1);
    let result = &report["result"];
    assert_eq!(result["kind"], "check_report");
    assert_eq!(result["passed"], false);
    assert_eq!(result["certificate"]["n_zero"], 1);
    assert!(result["factor"].is_null());
    assert_eq!(report["exit_code"], 1);

    let (c, report) = json_report(&["check", "--mode", "semi", "-e", EQ5]);
    assert_eq!(c, 1);
    let value = report["result"]["certificate"]["witness_value"].as_str().unwrap();
    assert!(value.starts_with('-'));
}

#[test]
fn stabilize_examples() {
    let (c, report) = json_report(&["stabilize", "--mode", "strict", "--dmax", "5", "-e", &f_c("-1")]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["d_min"], 3);

    let (c, report) = json_report(&["stabilize", "--mode", "semi", "--dmax", "12", "-e", EQ5]);
    assert_eq!(c, 3);
    assert!(report["result"]["d_min"].is_null());
    assert_eq!(report["result"]["steps"].as_array().unwrap().len(), 13);

    let (c, report) = json_report(&["stabilize", "-e", &f_c("2")]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["d_min"], 0);
    assert_eq!(report["arguments"]["dmax"], 16);
}

#[test]
fn factor_examples() {
    let dir = TempDir::new().unwrap();
    let certs = dir.path().join("certs");
    let numeric = dir.path().join("numeric.json");
    let (c, report) = json_report(&[
        "factor",
        "-e",
        EXAMPLE,
        "--certs",
        path_str(&certs),
        "--numeric",
        path_str(&numeric),
    ]);
    assert_eq!(c, 0);
    let rows = &report["result"]["check"]["factor"]["rows"];
    assert_eq!(rows["s"], 2);
    assert_eq!(report["arguments"]["float_digits"], 12);
    assert!(certs.join("factor.json").exists());
    assert!(certs.join("certificate.json").exists());
    assert_eq!(read_json(&numeric)["digits"], 12);

    let (c, report) = json_report(&["factor", "-e", EQ5]);
    assert_eq!(c, 1);
    assert!(report["result"]["check"]["certificate"]["witness"].is_array());
    assert!(report["result"]["numeric_factor"].is_null());

    // ||z||²·f_{-1} = |z1|⁶ + |z2|⁶
    let (c, report) = json_report(&["factor", "--d", "1", "-e", &f_c("-1")]);
    assert_eq!(c, 0);
    let out = holofactor(&["factor", "--d", "1", "-e", &f_c("-1")]);
    let text = stdout(&out);
    assert!(text.contains("|z1^3|^2") && text.contains("|z2^3|^2"), "{text}");
    assert_eq!(report["result"]["check"]["factor"]["rows"]["s"], 2);

    assert_eq!(code(&["factor", "--mode", "strict", "-e", EXAMPLE]), 1);
    assert_eq!(code(&["factor", "--mode", "strict", "--d", "1", "-e", EXAMPLE]), 0);
}

#[test]
fn numeric_factor_digits() {
    let (_, report) = json_report(&["factor", "--float-digits", "3", "-e", "2*z1*zb1"]);
    let nf = &report["result"]["numeric_factor"];
    let re = nf["rows"][0][0][0]["re"].as_f64().unwrap();
    assert_eq!(re, 1.41);
}

#[test]
fn sweep_table() {
    let dir = TempDir::new().unwrap();
    let family = dir.path().join("family.txt");
    std::fs::write(
        &family,
        format!(
            "# f_c\nc=2: {}\nc=0: {}\nc=-1: {}\n",
            f_c("2"),
            f_c("0"),
            f_c("-1")
        ),
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let out = holofactor(&["sweep", path_str(&family), "--csv", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let table = std::fs::read_to_string(&csv).unwrap();
    let d: Vec<&str> = table.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(d, ["0", "1", "3"]);
    assert_eq!(stdout(&out), table);

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = holofactor(&["sweep", path_str(&empty)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "label,d_min,size,elapsed_ms\n");

    let mixed = dir.path().join("mixed.txt");
    std::fs::write(&mixed, format!("c=0: {}\neq5: {EQ5}\n", f_c("0"))).unwrap();
    let (c, report) = json_report(&["sweep", path_str(&mixed), "--mode", "semi", "--dmax", "4"]);
    assert_eq!(c, 3);
    let entries = report["result"]["entries"].as_array().unwrap();
    assert_eq!(entries[0]["status"], "found");
    assert_eq!(entries[1]["status"], "absent");
    let out = holofactor(&["sweep", path_str(&mixed), "--mode", "semi", "--dmax", "4"]);
    assert!(stdout(&out).lines().nth(2).unwrap().starts_with("eq5,absent,"));

    let broken = dir.path().join("broken.txt");
    std::fs::write(&broken, "no label here\n").unwrap();
    assert_eq!(code(&["sweep", path_str(&broken)]), 2);
}

#[test]
fn sweep_order_ignores_parallelism() {
    let dir = TempDir::new().unwrap();
    let family = dir.path().join("family.txt");
    let lines: Vec<String> = ["2", "-1", "0", "-3/2", "1"]
        .iter()
        .map(|c| format!("{c}: {}", f_c(c)))
        .collect();
    std::fs::write(&family, lines.join("\n")).unwrap();
    let (_, seq) = json_report(&["sweep", path_str(&family)]);
    let (_, par) = json_report(&["sweep", path_str(&family), "--parallel"]);
    assert_eq!(seq["digest"], par["digest"]);
    assert_eq!(seq["result"], par["result"]);
}

#[test]
fn symbol_examples() {
    let (c, report) = json_report(&["symbol", "-e", "x1^2 + x2^2 + x3^2 + x4^2"]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["verdict"]["status"], "certified");
    assert_eq!(report["result"]["verdict"]["d"], 0);

    let out = holofactor(&["symbol", "-e", "z1^2*zb1^2 + z2^2*zb2^2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("certified at d = 1"), "{text}");
    assert!(text.contains("∂z1^2*∂z2"), "{text}");

    let (c, report) = json_report(&["symbol", "--n", "2", "-e", "z1*zb1"]);
    assert_eq!(c, 1);
    assert!(report["result"]["stabilization"]["d_min"].is_null());
    assert_eq!(report["result"]["stabilization"]["d_max"], 16);

    assert_eq!(code(&["symbol", "-e", "x1^2 - x2^2"]), 2);
    assert_eq!(code(&["symbol", "-e", "x1^3 + x2^3"]), 2);
}

#[test]
fn decompose_eq5() {
    let (c, report) = json_report(&["decompose", "-e", EQ5]);
    assert_eq!(c, 0);
    assert_eq!(report["result"]["positive"]["rows"]["s"], 2);
    assert_eq!(report["result"]["negative"]["rows"]["s"], 1);
}

#[test]
fn verify_contract() {
    let dir = TempDir::new().unwrap();
    let certs = dir.path().join("certs");
    let report_path = dir.path().join("report.json");
    holofactor(&[
        "stabilize",
        "--dmax",
        "4",
        "-e",
        &f_c("0"),
        "-o",
        path_str(&report_path),
        "--certs",
        path_str(&certs),
    ]);
    assert_eq!(code(&["verify", path_str(&report_path)]), 0);
    let mut files: Vec<_> = std::fs::read_dir(&certs).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 3);
    for f in &files {
        assert_eq!(code(&["verify", path_str(f)]), 0, "{}", f.display());
    }

    let cert_path = certs.join("step-01.json");
    let mut cert = read_json(&cert_path);
    cert["d"][0] = Value::String("5".into());
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, cert.to_string()).unwrap();
    assert_eq!(code(&["verify", path_str(&tampered)]), 1);

    let other = dir.path().join("other.json");
    std::fs::write(&other, r#"{"kind": "bihermitian_form", "n": 1, "r": 1, "terms": []}"#).unwrap();
    assert_eq!(code(&["verify", path_str(&other)]), 2);
    let text = dir.path().join("text.txt");
    std::fs::write(&text, "z1*zb1").unwrap();
    assert_eq!(code(&["verify", path_str(&text)]), 2);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("f.txt");
    std::fs::write(&input, f_c("-1")).unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let certs = dir.path().join(format!("{name}.certs"));
        holofactor(&[
            "stabilize",
            path_str(&input),
            "--dmax",
            "5",
            "-o",
            path_str(&path),
            "--certs",
            path_str(&certs),
        ]);
        let mut v = read_json(&path);
        v.as_object_mut().unwrap().remove("timings");
        let cert = std::fs::read(certs.join("factor.json")).unwrap();
        (serde_json::to_string_pretty(&v).unwrap(), cert)
    };
    let (a, ca) = run("a.json");
    let (b, cb) = run("b.json");
    assert_eq!(a, b);
    assert_eq!(ca, cb);
}

#[test]
fn json_form_input() {
    let dir = TempDir::new().unwrap();
    let (_, report) = json_report(&["check", "--mode", "semi", "-e", EXAMPLE]);
    let form = report["result"]["form"].to_string();
    let path = dir.path().join("form.json");
    std::fs::write(&path, &form).unwrap();
    let (c, again) = json_report(&["check", "--mode", "semi", path_str(&path)]);
    assert_eq!(c, 0);
    assert_eq!(again["result"], report["result"]);
}
