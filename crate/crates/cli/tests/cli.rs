use std::process::{Command, Output};

use cdsp_cli::report::Report;
use cdsp_cli::schema::validate_report;
use cdsp_cli::selftest::CHECK_IDS;
use serde_json::Value;

fn cdsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdsp"))
        .args(args)
        .env_remove("CDSP_QUAD_LEVEL")
        .output()
        .expect("spawn cdsp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn c(v: &Value) -> (f64, f64) {
    (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

#[test]
fn analyze_two_atoms_is_not_subnormal() {
    let o = cdsp(&["analyze", "--measure", "1;i"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema_version"], "1");
    assert_eq!(r["cdsp"]["verdict"], "NotSubnormal");
    assert!(r["meta"]["wall_time_s"].is_null());
    assert!(r["cdsp"]["a5_diagnostic"].is_null());
    assert!(validate_report(&r).is_ok());
}

#[test]
fn analyze_single_atom_is_known_subnormal() {
    let o = cdsp(&["analyze", "--measure", "1", "--skip-oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["cdsp"]["verdict"], "KnownSubnormal");
    assert!(r["oracle"].is_null());
}

#[test]
fn analyze_input_errors_exit_2() {
    for args in [
        &["analyze", "--measure", "bogus"][..],
        &["analyze", "--measure", "1;1"],
        &["analyze", "--measure", "deg:0:w=-1"],
        &["analyze", "--measure", "1;i", "--trunc", "4"],
        &["analyze", "--measure", "1;i", "--nmax", "11"],
        &["analyze"],
        &["frobnicate"],
    ] {
        let o = cdsp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn analyze_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = cdsp(&["analyze", "--measure", "1;i", "--skip-oracle", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n'));

    let missing = dir.path().join("no/such/dir/r.json");
    let o = cdsp(&["analyze", "--measure", "1", "--skip-oracle", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_round_trips() {
    let o = cdsp(&["analyze", "--measure", "deg:0:w=2;deg:120:w=0.5", "--diagnostics", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rep: Report = serde_json::from_str(&text).unwrap();
    let again = cdsp_cli::json::to_string(&rep).unwrap();
    assert_eq!(again, text);
    assert!(rep.cdsp.a5_diagnostic.is_some());
    assert!(rep.meta.wall_time_s.is_some());
}

#[test]
fn floats_carry_17_significant_digits() {
    let o = cdsp(&["analyze", "--measure", "1;i", "--skip-oracle"]);
    let text = stdout(&o);
    let d = &json(&o)["factorization"]["d"];
    assert!(d.is_f64());
    assert!(text.contains("\"d\":1.8305994859423586e-1"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["analyze", "--measure", "deg:10;deg:130:w=3;deg:250", "--trunc", "48"];
    let a = cdsp(&args);
    let b = cdsp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_changes_only_the_seeded_checks() {
    let a = json(&cdsp(&["analyze", "--measure", "1;i", "--skip-oracle", "--seed", "1"]));
    let b = json(&cdsp(&["analyze", "--measure", "1;i", "--skip-oracle", "--seed", "2"]));
    assert_eq!(a["meta"]["seed"], 1);
    assert_eq!(a["identification"], b["identification"]);
    assert_eq!(a["cdsp"], b["cdsp"]);
}

#[test]
fn kernel_at_origin_is_one() {
    let o = cdsp(&["kernel", "--measure", "1;i", "--z", "0", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let (re, im) = c(&json(&o)["k"]);
    assert!((re - 1.0).abs() < 1e-14 && im.abs() < 1e-14);
}

#[test]
fn kernel_hb_agrees_with_full_kernel() {
    let o = cdsp(&["kernel", "--measure", "1;i", "--z", "0.3+0.1i", "--lambda", "0.2-0.4i"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let (a, b) = (c(&r["k"]), c(&r["kernel_hb"]));
    assert!(((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt() < 1e-8);
    let (t, h) = (c(&r["k_tilde"]), c(&r["k_hat"]));
    assert!((t.0 + h.0 - a.0).abs() < 1e-14 && (t.1 + h.1 - a.1).abs() < 1e-14);
}

#[test]
fn kernel_outside_disk_exit_2() {
    for (z, l) in [("2+0i", "0"), ("0", "-1"), ("0.6+0.8i", "0"), ("0.1+i", "0"), ("x", "0")] {
        let o = cdsp(&["kernel", "--measure", "1;i", "--z", z, "--lambda", l]);
        assert_eq!(o.status.code(), Some(2), "{z} {l}");
    }
}

#[test]
fn sweep_single_angle() {
    let o = cdsp(&["sweep", "--angles", "90:90:1", "--skip-oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta_deg,verdict,s_offdiag_re,s_offdiag_im,rootprod_re,rootprod_im,min_agler_n2");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("90,NotSubnormal,"));
    assert!(lines[1].ends_with(','));
}

#[test]
fn sweep_antipodal() {
    let o = cdsp(&["sweep", "--angles", "180:180:1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "KnownSubnormal");
    assert!(row[6].parse::<f64>().unwrap() > -1e-6);
}

#[test]
fn sweep_shape_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = cdsp(&["sweep", "--angles", "30:170:10", "--csv", path.to_str().unwrap(), "--trunc", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let thetas: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[0].parse::<f64>().unwrap())
        .collect();
    assert_eq!(thetas.len(), 15);
    assert!(thetas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sweep_error_rows() {
    let o = cdsp(&["sweep", "--angles", "0:90:90", "--skip-oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let bad: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(bad[0], "0");
    assert!(bad[1..].iter().all(|c| *c == "ERROR:InvalidArgument"));

    let o = cdsp(&["sweep", "--angles", "190:200:10", "--skip-oracle"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 3);

    for angles in ["1:2", "5:1:1", "0:10:-1"] {
        assert_eq!(cdsp(&["sweep", "--angles", angles]).status.code(), Some(2), "{angles}");
    }
    assert_eq!(cdsp(&["sweep", "--angles", "90:90:1", "--weights", "1"]).status.code(), Some(2));
}

#[test]
fn selftest_list_is_inventory() {
    let o = cdsp(&["selftest", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    let ids: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(ids, CHECK_IDS);
}

#[test]
fn selftest_passes() {
    let o = cdsp(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.contains(&format!("{0}/{0} checks passed", CHECK_IDS.len())));
}

#[test]
fn selftest_perturbation_fails() {
    for id in ["costara.m", "cdsp.verdict_two_atoms", "roots.beta1"] {
        let o = cdsp(&["selftest", "--inject-perturbation", id]);
        assert_eq!(o.status.code(), Some(1), "{id}");
        let text = stdout(&o);
        let line = text.lines().find(|l| l.contains(id)).unwrap();
        assert!(line.starts_with("FAIL"), "{line}");
        assert_eq!(text.matches("FAIL").count(), 1);
    }
    assert_eq!(cdsp(&["selftest", "--inject-perturbation", "nope"]).status.code(), Some(2));
}

#[test]
fn selftest_quad_level_env() {
    let run = |level: &str| {
        Command::new(env!("CARGO_BIN_EXE_cdsp"))
            .arg("selftest")
            .env("CDSP_QUAD_LEVEL", level)
            .output()
            .unwrap()
    };
    let o = run("1");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("quadrature level 1"));
    assert_eq!(run("7").status.code(), Some(2));
}

#[test]
fn selftest_diagnostics_line() {
    let o = cdsp(&["selftest", "--diagnostics"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("diagnostic residue_sum"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(cdsp(&["--help"]).status.code(), Some(0));
    assert_eq!(cdsp(&["--version"]).status.code(), Some(0));
}
