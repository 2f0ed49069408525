use std::process::{Command, Output};

fn kappa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(args)
        .env_remove("KAPPA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = kappa(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn genus_three_relation() {
    let v = json(&["relations", "--kappa0", "4", "--degree", "3", "--dmax", "3"]);
    let first = &v["relations"][0];
    assert_eq!(first["r"], 5);
    assert_eq!(first["d"], 2);
    let terms = first["terms"].as_array().unwrap();
    assert_eq!(terms[0]["partition"], serde_json::json!([3]));
    assert_eq!(terms[0]["coeff"], "-9");
    assert_eq!(terms[1]["partition"], serde_json::json!([2, 1]));
    assert_eq!(terms[1]["coeff"], "1");
    let text = stdout(&kappa(&[
        "relations",
        "--kappa0",
        "4",
        "--degree",
        "3",
        "--dmax",
        "2",
    ]));
    assert!(text.contains("-9*k3 + k1*k2"), "{text}");
}

#[test]
fn betti_polynomial() {
    let o = kappa(&["betti0", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 + t + 2t^2 + 3t^3 + 3t^4 + t^5");
    let v = json(&["betti0", "--n", "7", "--method", "all"]);
    assert_eq!(v["agree"], true);
    assert_eq!(
        v["results"][1]["coefficients"],
        serde_json::json!([1, 1, 2, 2, 1])
    );
}

#[test]
fn pairing_and_socle() {
    let v = json(&["pairing", "--family", "mu", "--genus", "2"]);
    assert_eq!(v["matrix"]["entries"], serde_json::json!([["1/576"]]));
    assert_eq!(v["matrix"]["rows"], serde_json::json!([[1]]));
    let o = kappa(&["socle", "--genus", "1", "--psi", "0,0,0,0", "--kappa", "3"]);
    assert_eq!(stdout(&o).trim(), "1/24");
    let v = json(&["basis", "--n", "10", "--degree", "6"]);
    assert_eq!(v["basis"], serde_json::json!([[6], [5, 1], [4, 2], [3, 3]]));
    assert_eq!(v["nonsingular"], true);
}

#[test]
fn series_values() {
    let v = json(&["series", "--kind", "beta", "--order", "4"]);
    assert_eq!(
        v["coefficients"],
        serde_json::json!(["1", "-1", "-2", "-10", "-74"])
    );
    let o = kappa(&["series", "--kind", "chain", "--order", "4"]);
    assert!(stdout(&o).contains("p_4: 0 1 7 6 1"));
}

#[test]
fn express_and_refusal() {
    let v = json(&["express", "--kappa0", "2", "--l", "2", "--dcap", "4"]);
    assert_eq!(v["l"], 2);
    let o = kappa(&["express", "--kappa0", "8", "--l", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("required generator"));
}

#[test]
fn universality_small() {
    let v = json(&[
        "universality",
        "--genus",
        "1",
        "--n",
        "2",
        "--dmin",
        "1",
        "--dmax",
        "1",
    ]);
    let row = &v["rows"][0];
    assert_eq!(row["predicted"], 1);
    assert_eq!(row["upper_bound"], 1);
    assert_eq!(row["lower_bound"], 1);
    assert_eq!(row["verdict"], "isomorphism verified");
}

#[test]
fn usage_errors() {
    assert_eq!(
        kappa(&["betti0", "--n", "8", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(kappa(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        kappa(&["betti0", "--n", "8", "--method", "guess"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(kappa(&["betti0", "--n", "2"]).status.code(), Some(2));
    assert_eq!(kappa(&["--help"]).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(["betti0", "--n", "5"])
        .env("KAPPA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(["betti0", "--n", "5"])
        .env("KAPPA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "1 + t + t^2");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "richer", "--kappa0", "6", "--degree", "4", "--format", "json",
    ];
    assert_eq!(kappa(&args).stdout, kappa(&args).stdout);
}
