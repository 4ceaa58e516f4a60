use serde_json::Value;
use std::process::{Command, Output};

fn ektheta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ektheta"))
        .args(args)
        .env_remove("EKTHETA_PREC")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn catalog_has_thirteen_rows_and_a_header() {
    let out = ektheta(&["catalog", "--json", "--u", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["meta"]["tool"], "ektheta");
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config"]["command"]["catalog"]["u"], "1");
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let z11 = rows.iter().find(|r| r["label"] == "Z[(1+√−11)/2]").unwrap();
    assert_eq!(z11["at_u"]["e2_star"], "2");
    assert!(!z11["g3"]["symbolic"].as_str().unwrap().is_empty());
}

#[test]
fn kronecker_identity_passes() {
    let out = ektheta(&["verify", "kronecker", "--catalog", "Z[i]", "--points", "10", "--tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 10);
    assert!(v["result"]["max_residual"].as_f64().unwrap() <= 1e-18);
}

#[test]
fn same_config_gives_identical_bytes() {
    let args = ["verify", "kronecker", "--catalog", "Z[i]", "--points", "3", "--seed", "7"];
    let a = ektheta(&args);
    let b = ektheta(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = ektheta(&["verify", "kronecker", "--catalog", "Z[i]", "--points", "3", "--seed", "8"]);
    assert_ne!(json(&a)["result"]["samples"], json(&c)["result"]["samples"]);
    assert_eq!(json(&a)["meta"]["seeds"]["points"], 7);
}

#[test]
fn verification_failure_exits_one() {
    let out = ektheta(&["verify", "kronecker", "--catalog", "Z[i]", "--points", "1", "--tol", "1e-80"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
    let out = ektheta(&["verify", "integrality", "--catalog", "Z[i]", "--prime", "7", "--order", "16"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["frobnicate"],
        vec!["expand", "kronecker"],
        vec!["expand", "kronecker", "--catalog", "Z[sqrt(-5)]"],
        vec!["ek", "--catalog", "Z[i]", "--z0", "1/2"],
        vec!["measure", "--catalog", "Z[i]", "--prime", "3"],
        vec!["measure", "--catalog", "Z[i]", "--prime", "7"],
        vec!["expand", "kronecker", "--g2", "3", "--g3", "1"],
    ] {
        let out = ektheta(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn valuations_write_csv_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let out = ektheta(&[
        "valuations", "--catalog", "Z[i]", "--u", "1", "--prime", "7", "--order", "40",
        "--csv", csv.to_str().unwrap(), "--fit-diagonal",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("m,n,denom_exponent\n"));
    assert_eq!(text.lines().count(), 1 + 41 * 42 / 2);
    let v = json(&out);
    let slope = v["result"]["fit"]["slope"].as_f64().unwrap();
    assert!(slope > 0.08 && slope < 0.2, "{slope}");
    assert_eq!(v["result"]["fit"]["nondecreasing_from_5"], true);
}

#[test]
fn out_flag_and_precision_variable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ek.json");
    let out = Command::new(env!("CARGO_BIN_EXE_ektheta"))
        .args(["ek", "--catalog", "Z[i]", "--u", "4", "--a", "0", "--b", "4", "--err", "1e-25", "--out"])
        .arg(&path)
        .env("EKTHETA_PREC", "160")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["meta"]["config"]["command"]["ek"]["prec"]["bits"], 160);
    let val = &v["result"]["value"];
    assert_eq!(val["value"]["prec_bits"], 160);
    assert!(val["error_bound"].as_f64().unwrap() <= 1e-25);
    // e*_{0,4}(0,0) = 1/15 for g2 = 4, g3 = 0
    let re: f64 = val["value"]["re"].as_str().unwrap().parse().unwrap();
    assert!((re - 1.0 / 15.0).abs() < 1e-15);
}

#[test]
fn expansions_are_exact() {
    let out = ektheta(&["expand", "kronecker", "--catalog", "Z[i]", "--u", "4", "--order", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["exact"], true);
    let out = ektheta(&["formal-log", "--g2", "4", "--g3", "0", "--order", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let out = ektheta(&["compose", "--catalog", "Z[i]", "--u", "4", "--order", "8", "--starred"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn measure_reports_precision() {
    let out = ektheta(&[
        "measure", "--catalog", "Z[i]", "--u", "4", "--prime", "13", "--prec", "2", "--order", "30",
        "--restrict", "--moments", "2,3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["f"], 156);
    let m = v["result"]["moments"]["moments"].as_array().unwrap();
    assert_eq!(m.len(), 9);
    assert!(m.iter().all(|e| e["abs_prec"].as_i64().unwrap() >= 1));
}

#[test]
fn interpolation_and_kummer() {
    let out = ektheta(&["verify-interpolation", "--catalog", "Z[i]", "--u", "4", "--prime", "13", "--amax", "4", "--bmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["report"]["exact_pass"], true);
    let out = ektheta(&["verify", "kummer", "--catalog", "Z[i]", "--u", "4", "--prime", "13", "--max-exponent", "14"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn hecke_l_with_a_supplied_table() {
    let out = ektheta(&[
        "hecke-l", "--d", "1", "--conductor", "2,2", "--infinity", "0,1", "--value", "1,0=1", "--value", "0,1=0,1",
        "--value", "-1,0=-1", "--value", "0,-1=0,-1", "--s", "5.5", "--prec", "128",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = ektheta(&["hecke-l", "--d", "1", "--conductor", "2,2", "--value", "1,0=1", "--s", "5.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn torsion_suites() {
    for args in [
        vec!["verify", "generating-function", "--catalog", "Z[i]", "--u", "4", "--z0", "1/2,0", "--w0", "0,1/2", "--prec", "192"],
        vec!["verify", "distribution", "--catalog", "Z[i]", "--u", "4", "--a", "2", "--z0", "1/3,0", "--w0", "1/4,1/2", "--points", "2", "--prec", "160"],
        vec!["verify", "functional-equation", "--catalog", "Z[i]", "--a", "2", "--z0", "1/3,2/3", "--w0", "0,1/3", "--s", "3/2"],
    ] {
        let out = ektheta(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
