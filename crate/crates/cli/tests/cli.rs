use locfree_cli::run_with;
use num_bigint::BigUint;
use proptest::prelude::*;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("locfree").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn count_rows() {
    let (code, out, _) = call(&["count", "--variant", "group", "--n", "3", "--k-max", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("# locfree count"));
    assert_eq!(&lines[1..], ["variant,n,K,count", "group,3,1,6", "group,3,2,26"]);
}

#[test]
fn restricted_label_and_r_flag() {
    let (code, out, _) = call(&["count", "--variant", "restricted", "--r", "4", "--n", "2", "--k-max", "3"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(2).unwrap().starts_with("restricted:4,2,1,"));
    let (code, _, err) = call(&["count", "--variant", "restricted", "--n", "2", "--k-max", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("--r"));
    let (code, _, _) = call(&["count", "--variant", "group", "--r", "3", "--n", "2", "--k-max", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn usage_and_range_errors_exit_two() {
    assert_eq!(call(&["count", "--variant", "group"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["count", "--variant", "group", "--n", "0", "--k-max", "3"]).0, 2);
    assert_eq!(call(&["volume", "--variant", "group", "--n", "3", "--k-max", "1"]).0, 2);
    assert_eq!(call(&["walk", "--mode", "group", "--n", "5000", "--steps", "10", "--trials", "1", "--seed", "0"]).0, 2);
    let (code, _, err) = call(&["walk", "--mode", "group", "--n", "10", "--steps", "50", "--trials", "1", "--seed", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("--burn-in"));
    assert_eq!(call(&["braid-bounds", "--n", "10", "--alpha", "0.5"]).0, 2);
    assert_eq!(call(&["inequality", "--volume", "1", "--drift", "0", "--entropy", "1"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn oracle_budget_exhaustion_is_a_runtime_error() {
    let (code, _, err) = call(&["oracle-verify", "--n-max", "4", "--k-max", "7", "--budget", "10"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn oracle_verify_passes() {
    let v = json(&["oracle-verify", "--n-max", "3", "--k-max", "5"]);
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_u64().unwrap() > 50);
}

#[test]
fn exact_distribution_export_sums_to_one() {
    let (code, out, _) = call(&["oracle-verify", "--distribution", "--mode", "group", "--n", "3", "--steps", "3"]);
    assert_eq!(code, 0);
    // rows are reduced fractions of the total (2n)^N = 216
    let total = BigUint::from(216u32);
    let mut sum = BigUint::from(0u32);
    for line in out.lines().skip(2) {
        let f: Vec<&str> = line.split(',').collect();
        let (num, den): (BigUint, BigUint) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        assert_eq!(&total % &den, BigUint::from(0u32));
        sum += num * (&total / den);
    }
    assert_eq!(sum, total);
}

#[test]
fn semigroup_walk_drift_is_one() {
    let (code, out, _) = call(&[
        "walk", "--mode", "semigroup", "--n", "8", "--steps", "1000", "--trials", "2", "--seed", "7", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"drift_mean\": 1.0"));
}

#[test]
fn walk_snapshots() {
    let (code, out, _) = call(&[
        "walk", "--mode", "group", "--n", "4", "--steps", "100", "--trials", "1", "--seed", "1", "--burn-in", "5",
        "--snapshot-every", "25",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "step,column,top_level,in_roof");
    // 4 snapshots of 4 columns
    assert_eq!(lines.len(), 2 + 16);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["walk", "--mode", "group", "--n", "12", "--steps", "3000", "--trials", "3", "--seed", "99", "--format", "json"];
    let (_, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(a, b);
    let path = std::env::temp_dir().join(format!("locfree-cli-test-{}.json", std::process::id()));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let (code, stdout, _) = call(&with_out);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn flag_comment_reruns_to_the_same_output() {
    let (_, first, _) = call(&["roof-chain", "--n", "6", "--supports"]);
    let comment = first.lines().next().unwrap();
    let args: Vec<&str> = comment.split_whitespace().skip(2).collect();
    let (code, second, _) = call(&args);
    assert_eq!(code, 0);
    assert_eq!(first, second);
}

#[test]
fn spectrum_and_volume() {
    let s = json(&["spectrum", "--n", "6"]);
    let rows = s["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        let (l, c) = (r["eigenvalue"].as_f64().unwrap(), r["cosine_n_plus_2"].as_f64().unwrap());
        assert!((l - c).abs() < 1e-9);
    }
    let v = json(&["volume", "--variant", "semigroup", "--n", "2", "--k-max", "5"]);
    for r in v["rows"].as_array().unwrap() {
        assert!((r["log_ratio"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-11);
    }
}

#[test]
fn braid_and_inequality() {
    let b = json(&["braid-bounds", "--n", "30"]);
    assert!((b["drift_upper"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-11);
    assert!(b["epsilon"].as_f64().unwrap() > 0.0);
    let i = json(&["inequality", "--volume", "1.945910149", "--drift", "0.666666667", "--entropy", "1.098612289"]);
    assert!((i["epsilon"].as_f64().unwrap() - 0.199).abs() < 1e-3);
    assert_eq!(i["grid_all_positive"], true);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn count_csv_matches_json(n in 1u32..12, k in 1u32..30, variant in prop::sample::select(vec!["group", "semigroup", "projective"])) {
        let (n, k) = (n.to_string(), k.to_string());
        let (_, csv, _) = call(&["count", "--variant", variant, "--n", &n, "--k-max", &k]);
        let j = json(&["count", "--variant", variant, "--n", &n, "--k-max", &k]);
        let from_csv: Vec<String> = csv.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().to_string()).collect();
        let from_json: Vec<String> = j["rows"].as_array().unwrap().iter().map(|r| r["count"].as_str().unwrap().to_string()).collect();
        prop_assert_eq!(from_csv, from_json);
    }
}
