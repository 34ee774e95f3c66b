use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Result};
use holofactor::serial::{
    CertificateJson, DifferenceJson, EllipticJson, FormJson, NumericFactorJson, StabilizationJson,
    WeightedFactorJson,
};
use holofactor::verify::{CheckJson, CHECK};
use holofactor::{
    certify_elliptic, difference_of_squares, find_minimal_d, holomorphic_factor_certified, multiplier_power,
    numeric_factor, stabilization_sweep, strict_holomorphic_factor_certified, verify_document, BihermitianForm,
    EllipticVerdict, GaussianRational, Mode, NumericFactor, SignatureCertificate, WeightedGramFactor,
};
use serde_json::{json, Value};

use crate::input::{parse_family, read_text, sha256_hex, Input};
use crate::report::{self, Outcome};
use crate::{Command, InputArgs, OutputArgs};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const INPUT_ERROR: u8 = 2;
const INCONCLUSIVE: u8 = 3;

pub fn run(cmd: Command) -> u8 {
    match cmd {
        Command::Check { input, mode, d, out } => {
            let args = json!({ "mode": mode, "d": d, "n": input.n });
            with_input("check", args, &input, &out, |inp| check(inp, mode, d))
        }
        Command::Stabilize { input, mode, d_max, out } => {
            let args = json!({ "mode": mode, "dmax": d_max, "n": input.n });
            with_input("stabilize", args, &input, &out, |inp| stabilize(inp, mode, d_max))
        }
        Command::Factor {
            input,
            mode,
            d,
            float_digits,
            numeric,
            out,
        } => {
            let args = json!({ "mode": mode, "d": d, "float_digits": float_digits, "n": input.n });
            with_input("factor", args, &input, &out, |inp| {
                factor(inp, mode, d, float_digits, numeric.as_deref())
            })
        }
        Command::Sweep {
            family,
            mode,
            d_max,
            csv,
            parallel,
            out,
        } => {
            let args = json!({ "mode": mode, "dmax": d_max });
            execute("sweep", args, &out, || {
                let text = read_text(&family)?;
                let outcome = sweep(&text, mode, d_max, parallel, csv.as_deref())?;
                Ok((sha256_hex(text.as_bytes()), outcome))
            })
        }
        Command::Symbol { input, d_max, out } => {
            let args = json!({ "dmax": d_max, "n": input.n });
            with_input("symbol", args, &input, &out, |inp| symbol(inp, d_max))
        }
        Command::Decompose { input, out } => {
            let args = json!({ "n": input.n });
            with_input("decompose", args, &input, &out, decompose)
        }
        Command::Verify { file, json } => verify(&file, json),
    }
}

fn with_input(
    command: &str,
    arguments: Value,
    input: &InputArgs,
    out: &OutputArgs,
    body: impl FnOnce(&Input) -> Result<Outcome>,
) -> u8 {
    execute(command, arguments, out, || {
        let inp = Input::load(input)?;
        let outcome = body(&inp)?;
        Ok((inp.digest(), outcome))
    })
}

fn execute(command: &str, arguments: Value, out: &OutputArgs, body: impl FnOnce() -> Result<(String, Outcome)>) -> u8 {
    let start = Instant::now();
    let (digest, outcome) = match body() {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return INPUT_ERROR;
        }
    };
    let report = report::build(command, arguments, &digest, &outcome, start.elapsed());
    if let Err(e) = emit(&report, &outcome, out) {
        eprintln!("error: {e:#}");
        return INPUT_ERROR;
    }
    outcome.code
}

fn emit(report: &Value, outcome: &Outcome, out: &OutputArgs) -> Result<()> {
    if let Some(path) = &out.output {
        report::write_json(path, report)?;
    }
    if let Some(dir) = &out.certs {
        report::write_certificates(dir, &outcome.certificates)?;
    }
    if out.json {
        print!("{}", report::to_pretty(report));
    } else {
        print!("{}", outcome.summary);
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("document serializes")
}

fn require_bihomogeneous(f: &BihermitianForm) -> Result<()> {
    if !f.is_hermitian_symmetric() {
        bail!("form is not hermitian-symmetric");
    }
    if f.bidegree().is_none() {
        bail!("form is not bihomogeneous");
    }
    Ok(())
}

fn inertia(cert: &SignatureCertificate) -> String {
    format!(
        "{n}x{n} coefficient matrix, inertia (+{}, -{}, 0:{})",
        cert.n_pos,
        cert.n_neg,
        cert.n_zero,
        n = cert.size()
    )
}

fn complex_text(c: &GaussianRational) -> String {
    if c.im_string() == "0" {
        c.re_string()
    } else {
        format!("{} + {}i", c.re_string(), c.im_string())
    }
}

fn witness_text(cert: &SignatureCertificate) -> String {
    match (&cert.witness, &cert.witness_value) {
        (Some(v), Some(value)) => {
            let entries: Vec<String> = v.iter().map(complex_text).collect();
            format!("witness v = [{}] with v*Mv = {}\n", entries.join(", "), value)
        }
        _ => String::new(),
    }
}

fn rows_text(w: &WeightedGramFactor, var: &str) -> String {
    let mut s = String::new();
    for k in 0..w.rows.s() {
        let cells: Vec<String> = w.rows.row(k).iter().map(|p| p.format_with(var)).collect();
        let body = if cells.len() == 1 {
            cells[0].clone()
        } else {
            format!("[{}]", cells.join(", "))
        };
        let _ = writeln!(s, "  {} * |{}|^2", w.rows.weight(k), body);
    }
    s
}

fn numeric_text(f: &NumericFactor) -> String {
    let mut s = String::new();
    for row in &f.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|poly| {
                let terms: Vec<String> = poly
                    .iter()
                    .map(|(alpha, c)| {
                        let mono: Vec<String> = alpha
                            .exponents()
                            .iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(k, &e)| if e == 1 { format!("z{}", k + 1) } else { format!("z{}^{e}", k + 1) })
                            .collect();
                        let coef = if c.im == 0.0 { format!("{}", c.re) } else { format!("({}{:+}i)", c.re, c.im) };
                        if mono.is_empty() {
                            coef
                        } else {
                            format!("{coef}*{}", mono.join("*"))
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                }
            })
            .collect();
        let _ = writeln!(s, "  [{}]", cells.join(", "));
    }
    s
}

/// Tests `||z||^{2d}·F` in `mode`, with the factor when the test passes.
fn test_at(f: &BihermitianForm, mode: Mode, d: u32) -> Result<(CheckJson, SignatureCertificate, Option<WeightedGramFactor>)> {
    require_bihomogeneous(f)?;
    let g = multiplier_power(f, d)?;
    let (factor, cert) = match mode {
        Mode::Semi => holomorphic_factor_certified(&g)?,
        Mode::Strict => strict_holomorphic_factor_certified(&g)?,
    };
    let doc = CheckJson {
        kind: CHECK.to_string(),
        mode,
        d,
        passed: factor.is_some(),
        form: FormJson::from(f),
        certificate: CertificateJson::from(&cert),
        factor: factor.as_ref().map(WeightedFactorJson::from),
    };
    Ok((doc, cert, factor))
}

fn check_summary(f: &BihermitianForm, doc: &CheckJson, cert: &SignatureCertificate) -> String {
    let mut s = format!("form: {f}\n");
    let _ = writeln!(
        s,
        "{} test at d = {}: {}",
        doc.mode.as_str(),
        doc.d,
        if doc.passed { "PASS" } else { "FAIL" }
    );
    let _ = writeln!(s, "{}", inertia(cert));
    s += &witness_text(cert);
    s
}

fn check(inp: &Input, mode: Mode, d: u32) -> Result<Outcome> {
    let f = inp.form()?;
    let (doc, cert, factor) = test_at(&f, mode, d)?;
    let mut summary = check_summary(&f, &doc, &cert);
    if let Some(w) = &factor {
        let _ = writeln!(summary, "factor rows ({}):", w.len());
        summary += &rows_text(w, "z");
    }
    let (code, verdict) = if doc.passed { (PASS, "pass") } else { (FAIL, "fail") };
    let mut outcome = Outcome::new(code, verdict, to_value(&doc), summary);
    outcome.certificates.push(("certificate.json".into(), to_value(&doc.certificate)));
    if let Some(w) = &doc.factor {
        outcome.certificates.push(("factor.json".into(), to_value(w)));
    }
    Ok(outcome)
}

fn factor(inp: &Input, mode: Mode, d: u32, digits: usize, numeric_path: Option<&Path>) -> Result<Outcome> {
    let f = inp.form()?;
    let (doc, cert, factor) = test_at(&f, mode, d)?;
    let numeric = factor.as_ref().map(|w| numeric_factor(w, digits));
    let numeric_doc = numeric.as_ref().map(|nf| NumericFactorJson::new(nf, digits));
    let mut summary = check_summary(&f, &doc, &cert);
    if let (Some(w), Some(nf)) = (&factor, &numeric) {
        let _ = writeln!(summary, "exact factor ({} rows):", w.len());
        summary += &rows_text(w, "z");
        let _ = writeln!(summary, "numeric factor ({digits} significant digits):");
        summary += &numeric_text(nf);
    } else {
        let _ = writeln!(summary, "not factorable at d = {d}");
    }
    let (code, verdict) = if doc.passed { (PASS, "pass") } else { (FAIL, "fail") };
    let result = json!({ "check": to_value(&doc), "numeric_factor": numeric_doc.as_ref().map(to_value) });
    let mut outcome = Outcome::new(code, verdict, result, summary);
    outcome.certificates.push(("certificate.json".into(), to_value(&doc.certificate)));
    if let Some(w) = &doc.factor {
        outcome.certificates.push(("factor.json".into(), to_value(w)));
    }
    if let (Some(path), Some(nf)) = (numeric_path, &numeric_doc) {
        report::write_json(path, &to_value(nf))?;
    }
    Ok(outcome)
}

fn stabilize(inp: &Input, mode: Mode, d_max: u32) -> Result<Outcome> {
    let f = inp.form()?;
    require_bihomogeneous(&f)?;
    let report = find_minimal_d(&f, mode, d_max)?;
    let doc = StabilizationJson::from(&report);
    let mut summary = format!("form: {f}\n");
    for step in &report.steps {
        let _ = writeln!(
            summary,
            "d = {:>2}: {}  {}",
            step.d,
            if step.passed { "PASS" } else { "fail" },
            inertia(&step.certificate)
        );
    }
    let (code, verdict) = match report.d_min {
        Some(d) => {
            let _ = writeln!(summary, "{} minimal d = {d}", mode.as_str());
            (PASS, "pass")
        }
        None => {
            let _ = writeln!(summary, "no {} certificate up to d = {d_max}", mode.as_str());
            (INCONCLUSIVE, "inconclusive")
        }
    };
    if let Some(w) = &report.factor {
        let _ = writeln!(summary, "factor rows ({}):", w.len());
        summary += &rows_text(w, "z");
    }
    let mut outcome = Outcome::new(code, verdict, to_value(&doc), summary);
    for step in &doc.steps {
        outcome
            .certificates
            .push((format!("step-{:02}.json", step.d), to_value(&step.certificate)));
    }
    if let Some(w) = &doc.factor {
        outcome.certificates.push(("factor.json".into(), to_value(w)));
    }
    Ok(outcome)
}

fn sweep(text: &str, mode: Mode, d_max: u32, parallel: bool, csv_path: Option<&Path>) -> Result<Outcome> {
    let family = parse_family(text)?;
    let entries = stabilization_sweep(&family, mode, d_max, parallel);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["label", "d_min", "size", "elapsed_ms"])?;
    let mut rows = Vec::new();
    let mut elapsed = Vec::new();
    let mut code = PASS;
    for e in &entries {
        let ms = e.elapsed.as_secs_f64() * 1e3;
        elapsed.push(json!(ms));
        let size = e.size().map(|s| s.to_string()).unwrap_or_default();
        let (status, d_min) = match &e.report {
            Ok(r) => match r.d_min {
                Some(d) => ("found", d.to_string()),
                None => {
                    code = code.max(INCONCLUSIVE);
                    ("absent", "absent".to_string())
                }
            },
            Err(_) => {
                code = INPUT_ERROR;
                ("error", "error".to_string())
            }
        };
        writer.write_record([e.label.as_str(), d_min.as_str(), size.as_str(), format!("{ms:.3}").as_str()])?;
        rows.push(json!({
            "label": e.label,
            "status": status,
            "d_min": e.report.as_ref().ok().and_then(|r| r.d_min),
            "size": e.size(),
            "error": e.report.as_ref().err().map(|err| err.to_string()),
            "report": e.report.as_ref().ok().map(|r| to_value(&StabilizationJson::from(r))),
        }));
    }
    let csv_text = String::from_utf8(writer.into_inner()?)?;
    if let Some(path) = csv_path {
        std::fs::write(path, &csv_text)?;
    }
    let verdict = match code {
        PASS => "pass",
        INCONCLUSIVE => "inconclusive",
        _ => "input_error",
    };
    let result = json!({ "kind": "sweep_report", "mode": mode, "d_max": d_max, "entries": rows });
    let mut outcome = Outcome::new(code, verdict, result, csv_text);
    outcome.timings.insert("entries_ms".into(), Value::Array(elapsed));
    Ok(outcome)
}

fn symbol(inp: &Input, d_max: u32) -> Result<Outcome> {
    let p = inp.symbol()?;
    let report = certify_elliptic(&p, d_max)?;
    let doc = EllipticJson::from(&report);
    let mut summary = format!("symbol: {}\ncomplex form: {}\n", report.symbol, report.form);
    if report.negated {
        summary += "symbol is negative on the sphere; analysing its negative\n";
    }
    let (code, verdict) = match &report.verdict {
        EllipticVerdict::Certified { d } => {
            let _ = writeln!(summary, "elliptic: certified at d = {d}");
            let _ = writeln!(summary, "||z||^{{2d}}·p = sum of weighted squares of:");
            for (w, op) in report.operator_rows() {
                let _ = writeln!(summary, "  {w} * |{op}|^2");
            }
            let _ = writeln!(summary, "common zero set of the rows: {}", report.zero_set_check);
            (PASS, "pass")
        }
        EllipticVerdict::NotElliptic { point, value } => {
            let z: Vec<String> = point.iter().map(complex_text).collect();
            let _ = writeln!(summary, "not elliptic: value {value} at z = [{}]", z.join(", "));
            (FAIL, "fail")
        }
        EllipticVerdict::NotCertified { d_max } => {
            let _ = writeln!(summary, "not certified up to d = {d_max}");
            (INCONCLUSIVE, "inconclusive")
        }
    };
    let mut outcome = Outcome::new(code, verdict, to_value(&doc), summary);
    if let Some(step) = doc.stabilization.steps.last() {
        outcome.certificates.push(("certificate.json".into(), to_value(&step.certificate)));
    }
    if let Some(w) = &doc.stabilization.factor {
        outcome.certificates.push(("factor.json".into(), to_value(w)));
    }
    Ok(outcome)
}

fn decompose(inp: &Input) -> Result<Outcome> {
    let f = inp.form()?;
    let ds = difference_of_squares(&f)?;
    let doc = DifferenceJson::new(&f, &ds);
    let mut summary = format!("form: {f}\n{}\n", inertia(&ds.certificate));
    let _ = writeln!(summary, "positive part ({} rows):", ds.positive.len());
    summary += &rows_text(&ds.positive, "z");
    let _ = writeln!(summary, "negative part ({} rows):", ds.negative.len());
    summary += &rows_text(&ds.negative, "z");
    let mut outcome = Outcome::new(PASS, "pass", to_value(&doc), summary);
    outcome.certificates.push(("certificate.json".into(), to_value(&doc.certificate)));
    outcome.certificates.push(("positive.json".into(), to_value(&doc.positive)));
    outcome.certificates.push(("negative.json".into(), to_value(&doc.negative)));
    Ok(outcome)
}

fn verify(path: &Path, json_out: bool) -> u8 {
    let doc: Value = match read_text(path).and_then(|t| Ok(serde_json::from_str(&t)?)) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return INPUT_ERROR;
        }
    };
    let report = verify_document(&doc);
    if !report.recognized() {
        eprintln!("error: no certificate, factor or report found in {}", path.display());
        return INPUT_ERROR;
    }
    if json_out {
        let v = json!({ "valid": report.is_valid(), "checked": report.checked, "failures": report.failures });
        print!("{}", report::to_pretty(&v));
    } else {
        for (p, kind) in &report.checked {
            let status = match report.failures.iter().find(|(fp, _)| fp == p) {
                Some((_, why)) => format!("INVALID: {why}"),
                None => "ok".to_string(),
            };
            let at = if p.is_empty() { "/" } else { p.as_str() };
            println!("{at} ({kind}): {status}");
        }
    }
    if report.is_valid() {
        PASS
    } else {
        FAIL
    }
}
