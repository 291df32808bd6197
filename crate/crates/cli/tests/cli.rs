use std::collections::HashMap;
use std::process::{Command, Output};

fn torfill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torfill"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn kv(out: &Output) -> HashMap<String, String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn bounds_on_cat_map() {
    let out = torfill(&["bounds", "--matrix", "2,1;1,1"]);
    assert_eq!(code(&out), 0);
    let m = kv(&out);
    let lower: f64 = m["fv_lower_bound_ln"].parse().unwrap();
    let rho: f64 = m["rho"].parse().unwrap();
    // 2 / (6 ln 3) * ln((3 + sqrt 5) / 2)
    let oracle = 2.0 / (6.0 * 3f64.ln()) * ((3.0 + 5f64.sqrt()) / 2.0).ln();
    assert!((lower - oracle).abs() < 1e-9, "{lower}");
    assert!((lower - 0.2921).abs() < 5e-4, "{lower}");
    assert!((rho - 2.6180).abs() < 5e-5, "{rho}");
    assert_eq!(m["unit_root_flag"], "false");
}

#[test]
fn bounds_on_unit_root_matrix_is_zero() {
    let out = torfill(&["bounds", "--matrix", "0,-1;1,0"]);
    assert_eq!(code(&out), 0);
    let m = kv(&out);
    assert_eq!(m["unit_root_flag"], "true");
    assert_eq!(m["fv_lower_bound_ln"].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn reduce_identity_costs_nothing() {
    let out = torfill(&["reduce", "--matrix", "1,0;0,1"]);
    assert_eq!(code(&out), 0);
    let m = kv(&out);
    assert_eq!(m["cost"], "0");
    assert_eq!(m["verified"], "true");
}

#[test]
fn reduce_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();
    let out = torfill(&["reduce", "--matrix", "5,2;7,3", "--out", cert_s]);
    assert_eq!(code(&out), 0);
    let reduced = kv(&out);
    let before = std::fs::read(&cert).unwrap();

    let out = torfill(&["fill", "--verify", cert_s]);
    assert_eq!(code(&out), 0);
    let verified = kv(&out);
    assert_eq!(verified["verified"], "true");
    assert_eq!(verified["cost"], reduced["cost"]);
    assert_eq!(std::fs::read(&cert).unwrap(), before);

    // tampering with the cost is reported as a verification failure
    let text = String::from_utf8(before).unwrap();
    let bumped = text.replacen(
        &format!("\"cost\": \"{}\"", reduced["cost"]),
        &format!("\"cost\": \"{}\"", reduced["cost"].parse::<u64>().unwrap() + 1),
        1,
    );
    assert_ne!(bumped, text);
    std::fs::write(&cert, bumped).unwrap();
    let out = torfill(&["fill", "--verify", cert_s]);
    assert_eq!(code(&out), 2);
    assert_eq!(kv(&out)["cost_ok"], "false");
}

#[test]
fn reduce_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.txt");
    std::fs::write(&p, "# a 3x3 example\n2 0 1\n1 1 0\n0 3 1\n").unwrap();
    let out = torfill(&["reduce", "--matrix-file", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let m = kv(&out);
    assert_eq!(m["det"], "5");
    assert_eq!(m["verified"], "true");
}

#[test]
fn fill_solves_a_cycle_file() {
    let dir = tempfile::tempdir().unwrap();
    let cyc = dir.path().join("z.json");
    let cert = dir.path().join("c.json");
    // Q(1, 0) in the circle: [0,1,1] - [0,0,1]
    std::fs::write(
        &cyc,
        r#"{"ambient_dim":1,"degree":2,"cycle":[
            {"coeff":"1","vertices":[["0"],["1"],["1"]]},
            {"coeff":"-1","vertices":[["0"],["0"],["1"]]}]}"#,
    )
    .unwrap();
    let out = torfill(&["fill", "--cycle", cyc.to_str().unwrap(), "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(kv(&out)["verified"], "true");
    let out = torfill(&["fill", "--verify", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn psl2z_family_length() {
    let out = torfill(&["psl2z", "--family", "1", "--power", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(kv(&out)["cyclically_reduced_length"], "8");

    let out = torfill(&["psl2z", "--matrix", "2,1;1,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(kv(&out)["product"], "2,1;1,1");

    let out = torfill(&["psl2z", "--word", "U2·S·U·S"]);
    assert_eq!(code(&out), 0);
    assert_eq!(kv(&out)["length"], "4");
}

#[test]
fn torsion_and_gelfand_rows() {
    let out = torfill(&["torsion", "--matrix", "2,1;1,1", "--k-max", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("row k=1 torsion_order=1 "));
    assert!(text.contains("row k=2 torsion_order=5 "));

    let out = torfill(&["--table", "gelfand", "--matrix", "2,1;1,1", "--j-max", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.lines().next().unwrap().contains("norm_root"));
}

#[test]
fn fvupper_rejects_non_unimodular_input() {
    assert_eq!(code(&torfill(&["fvupper", "--matrix", "2,0;0,1"])), 3);
    let out = torfill(&["fvupper", "--matrix", "1,1;0,1", "--j-max", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).matches("verified=true").count(), 3);
}

#[test]
fn input_errors_exit_three() {
    assert_eq!(code(&torfill(&["bounds", "--matrix", "1,2;3"])), 3);
    assert_eq!(code(&torfill(&["bounds", "--matrix", "1,x;3,4"])), 3);
    assert_eq!(code(&torfill(&["bounds"])), 3);
    assert_eq!(code(&torfill(&["nonsense"])), 3);
    assert_eq!(code(&torfill(&["psl2z", "--matrix", "2,0;0,1"])), 3);
    assert_eq!(code(&torfill(&["psl2z", "--word", "U3"])), 3);
    assert_eq!(code(&torfill(&["fill", "--verify", "/nonexistent/cert.json"])), 3);
    assert_eq!(code(&torfill(&["--help"])), 0);
}
