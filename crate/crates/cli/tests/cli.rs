use std::process::{Command, Output};

use ces_duality_cli::output::{emit_wavefunction_csv, parse_wavefunction_csv, WavefunctionRow};

fn ces_dual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ces-dual"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn field(text: &str, claim: &str, name: &str) -> f64 {
    csv_rows(text)
        .into_iter()
        .find(|r| r[0] == claim && r[1] == name)
        .unwrap_or_else(|| panic!("{claim}.{name} missing"))[3]
        .parse()
        .unwrap()
}

fn sign_changes(values: &[f64]) -> usize {
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let signs: Vec<f64> = values
        .iter()
        .filter(|v| v.abs() > 1e-6 * max)
        .map(|v| v.signum())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[test]
fn spectrum_es_ground_level() {
    let o = ces_dual(&["spectrum-es", "--alpha", "1.5", "--beta", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let want = -(4.0f64 / 1.5).powi(2) - 1.5 * 1.5;
    let analytic: f64 = rows[0][1].parse().unwrap();
    let numeric: f64 = rows[0][2].parse().unwrap();
    assert!((analytic - want).abs() < 1e-10);
    assert!((numeric - want).abs() < 1e-4);
    assert!((want + 9.36111).abs() < 1e-5);
}

#[test]
fn spectrum_es_json_matches_csv() {
    let csv = stdout(&ces_dual(&["spectrum-es", "--alpha", "1.0", "--beta", "9"]));
    let o = ces_dual(&["spectrum-es", "--alpha", "1.0", "--beta", "9", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    let csv_rows = csv_rows(&csv);
    assert_eq!(rows.len(), csv_rows.len());
    for (j, c) in rows.iter().zip(csv_rows) {
        assert_eq!(j["n"].as_u64().unwrap().to_string(), c[0]);
        assert_eq!(j["analytic"].as_f64().unwrap(), c[1].parse::<f64>().unwrap());
        assert_eq!(j["numeric"].as_f64().unwrap(), c[2].parse::<f64>().unwrap());
    }
    assert_eq!(doc["report"]["pass"], serde_json::Value::Bool(true));
}

#[test]
fn spectrum_es_outside_window_is_usage_error() {
    let o = ces_dual(&["spectrum-es", "--alpha", "2", "--beta", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = ces_dual(&["spectrum-es", "--alpha", "-1", "--beta", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_ces_worked_chain() {
    let o = ces_dual(&["spectrum-ces", "--A", "9.11111", "--B", "8", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 1);
    let minus_eps: f64 = rows[0][2].parse().unwrap();
    assert!((minus_eps + 1.0).abs() < 1e-5);
    let roots: Vec<f64> = rows[0][5].split(';').map(|s| s.parse().unwrap()).collect();
    let selected: usize = rows[0][6].parse().unwrap();
    assert_eq!(roots.len(), 3);
    assert!((roots[selected] - 1.0).abs() < 1e-5);
}

#[test]
fn spectrum_ces_empty_table() {
    let o = ces_dual(&["spectrum-ces", "--A", "0.75", "--B", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1, "{text}");
    assert!(text.starts_with("n,sqrt_eps,minus_eps"));
}

#[test]
fn malformed_flags_print_usage() {
    for args in [
        &["spectrum-ces", "--A", "abc", "--B", "1"][..],
        &["spectrum-ces", "--B", "1"],
        &["spectrum-es", "--alpha", "1", "--beta", "4", "--grid-points", "50"],
        &["no-such-command"],
    ] {
        let o = ces_dual(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("Usage") || err.contains("--help"), "{err}");
    }
    let o = ces_dual(&["spectrum-es", "--alpha", "1", "--beta", "4", "--grid-min", "5", "--grid-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn duality_check_worked_chain() {
    let o = ces_dual(&["duality-check"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!((field(&text, "duality-exchange", "rayleigh_quotient") + 0.75).abs() < 1e-3);
    let rows = csv_rows(&text);
    let generic = rows.iter().filter(|r| r[1] == "schwarzian_generic").count();
    let closed = rows.iter().filter(|r| r[1] == "schwarzian_closed_form").count();
    assert_eq!((generic, closed), (200, 200));
}

#[test]
fn duality_check_zero_coupling() {
    let o = ces_dual(&["duality-check", "--alpha", "1.0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rq = doc[0]["rayleigh_quotient"].as_f64().unwrap();
    assert!(rq.abs() < 1e-3);
    assert!(doc[1]["schwarzian_generic"].is_array());
}

fn export(args: &[&str]) -> (Option<i32>, Vec<WavefunctionRow>, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wf.csv");
    let mut full = vec!["export-wf"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = ces_dual(&full);
    let bytes = std::fs::read(&path).unwrap_or_default();
    let rows = if bytes.is_empty() {
        Vec::new()
    } else {
        parse_wavefunction_csv(bytes.as_slice()).unwrap()
    };
    (o.status.code(), rows, bytes)
}

#[test]
fn export_ground_state_is_nodeless() {
    let (code, rows, bytes) = export(&["--A", "9.111111111111111", "--B", "8", "--grid-points", "4000"]);
    assert_eq!(code, Some(0));
    assert_eq!(rows.len(), 4000);

    let numeric: Vec<f64> = rows.iter().map(|r| r.numeric).collect();
    let analytic: Vec<f64> = rows.iter().map(|r| r.analytic.unwrap()).collect();
    assert_eq!(sign_changes(&numeric), 0);
    assert_eq!(sign_changes(&analytic), 0);
    // Single maximum: increasing then decreasing.
    let peak = numeric
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    let h = rows[1].y - rows[0].y;
    assert!(numeric[..peak].windows(2).all(|w| w[1] >= w[0] - 1e-12));
    assert!(numeric[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-12));
    let norm: f64 = numeric.iter().map(|v| v * v).sum::<f64>() * h;
    assert!((norm - 1.0).abs() < 1e-6);
    let max_gap = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a - n).abs())
        .fold(0.0, f64::max);
    assert!(max_gap < 1e-3, "{max_gap}");

    let mut again = Vec::new();
    emit_wavefunction_csv(&mut again, &rows).unwrap();
    assert_eq!(again, bytes);
}

#[test]
fn export_excited_levels_have_n_nodes() {
    // A = ½ - μ, B = 2β for α = 1.2, β = 16.
    let alpha: f64 = 1.2;
    let beta = 16.0;
    for n in 0..3usize {
        let k = alpha + n as f64;
        let mu = -(beta / k).powi(2) - k * k + alpha * (alpha - 1.0);
        let a = format!("{}", 0.5 - mu);
        let b = format!("{}", 2.0 * beta);
        let n_str = n.to_string();
        let (code, rows, _) = export(&["--A", &a, "--B", &b, "--n", &n_str]);
        assert_eq!(code, Some(0));
        let numeric: Vec<f64> = rows.iter().map(|r| r.numeric).collect();
        let analytic: Vec<f64> = rows.iter().filter_map(|r| r.analytic).collect();
        assert_eq!(sign_changes(&numeric), n);
        assert_eq!(sign_changes(&analytic), n);
    }
}

#[test]
fn export_without_admissible_root_fails() {
    let (code, rows, _) = export(&["--A", "0.75", "--B", "0"]);
    assert_eq!(code, Some(1));
    assert!(rows.is_empty());
}

#[test]
fn verify_all_passes() {
    let o = ces_dual(&["verify-all"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let rows = csv_rows(&stdout(&o));
    assert!(rows.iter().filter(|r| r[1] == "pass").all(|r| r[3] == "true"));
    let claims: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    for c in [
        "es-spectrum",
        "ces-spectrum",
        "duality-exchange",
        "energy-sum",
        "schwarzian",
        "potential-consistency",
        "eigensolver-sanity",
        "eigenfunction-residual",
    ] {
        assert!(claims.contains(c), "{c}");
    }
}
