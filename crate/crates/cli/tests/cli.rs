use std::process::Command;

use grigorchuk_cli::run_args;
use serde_json::Value;

fn grig(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_grig")).args(args).output().expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8"), out.status.code().unwrap_or(-1))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["grig", "--format", "json"];
    full.extend_from_slice(args);
    let out = run_args(full);
    assert_eq!(out.code, 0, "{}", out.stdout);
    serde_json::from_str(&out.stdout).expect("json output")
}

#[test]
fn order_of_ad() {
    assert_eq!(grig(&["order", "ad"]), ("4\n".to_string(), 0));
    assert_eq!(json(&["order", "ab"])["order"], 16);
}

#[test]
fn reduce_and_split() {
    let v = json(&["reduce", "abbc", "bcd"]);
    assert_eq!(v[0]["reduced"], "ac");
    assert_eq!(v[1]["reduced"], "1");
    let s = json(&["split", "abab"]);
    assert_eq!((s["w0"].as_str(), s["w1"].as_str()), (Some("ca"), Some("ac")));
}

#[test]
fn usage_errors_exit_two() {
    let (_, code) = grig(&["reduce", "abx"]);
    assert_eq!(code, 2);
    let out = run_args(["grig", "reduce", "abx"]);
    assert!(out.stdout.contains("byte offset 2"), "{}", out.stdout);
    assert_eq!(grig(&["split", "ab"]).1, 2);
    assert_eq!(grig(&["no-such-command"]).1, 2);
}

#[test]
fn verify_nball_five_passes() {
    let (out, code) = grig(&["verify-nball", "5"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("pass n=5 level=6 words=77 certified=77"), "{out}");
}

#[test]
fn verify_nball_two_reports_exponent_witnesses() {
    let out = run_args(["grig", "--format", "json", "verify-nball", "2"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["report"]["certified"], 11);
    assert_eq!(v["report"]["above_level_plus_one_witnesses"], serde_json::json!(["ab", "ba"]));
}

#[test]
fn certificate_json_tree() {
    let v = json(&["certify", "abab", "--level", "5"]);
    assert_eq!(v["exponent"], 3);
    assert_eq!(v["rule"], "inactive-split");
    assert!(v["children"].as_array().is_some_and(|c| c.len() == 2));
    let out = run_args(["grig", "certify", "abab", "--level", "1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn coset_quotient_is_z2_times_d8() {
    let v = json(&["coset", "--gamma0", "--close", "abab", "--emit-quotient"]);
    assert_eq!(v["index"], 16);
    assert_eq!(v["status"], "complete");
    assert_eq!(v["quotient"]["order"], 16);
    assert_eq!(v["quotient"]["isomorphic_to"], "Z/2 x D_8");
    assert_eq!(json(&["coset", "--gamma0", "--close", "ab"])["index"], 4);
    assert_eq!(json(&["coset", "--gamma0", "--xi"])["index"], 2);
}

#[test]
fn coset_overflow_exits_three() {
    let out = run_args(["grig", "--format", "json", "coset", "--gamma0", "--cap", "64"]);
    assert_eq!(out.code, 3);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["status"], "overflowed");
    assert!(v["index"].is_null());
}

#[test]
fn coset_from_presentation_file() {
    let dir = std::env::temp_dir().join(format!("grig-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s3.pres");
    std::fs::write(&path, "# S_3\ngens: x y\ninvolutions: x y\nrel: xyxyxy\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["coset", "--pres", p, "--emit-quotient", "--emit-subgroup-pres"]);
    assert_eq!(v["index"], 6);
    let v = json(&["coset", "--pres", p, "--subgroup", "x", "--emit-subgroup-pres"]);
    assert_eq!(v["index"], 3);
    assert!(v["subgroup_presentation"].as_str().unwrap().starts_with("gens:"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn h0_subgroup_presentation_abelianizes_to_z3() {
    // the subgroup presentation emitted for ⟨⟨(ab)²⟩⟩ round-trips through abelianize
    let dir = std::env::temp_dir().join(format!("grig-h0-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let v = json(&["coset", "--gamma0", "--close", "abab", "--emit-subgroup-pres"]);
    assert_eq!(v["index"], 16);
    let path = dir.join("h0.pres");
    std::fs::write(&path, v["subgroup_presentation"].as_str().unwrap()).unwrap();
    let a = json(&["abelianize", "--pres", path.to_str().unwrap()]);
    assert_eq!(a["text"], "Z^3");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn abelianizations() {
    assert_eq!(json(&["abelianize", "--level", "-1"])["text"], "Z/2 x Z/2 x Z/2");
    assert_eq!(json(&["abelianize", "--gamma0"])["text"], "Z/2 x Z/2 x Z/2");
}

#[test]
fn relators_and_presentations() {
    let v = json(&["relators", "--level", "0"]);
    assert_eq!(v[0]["word"], "adadadad");
    assert_eq!(v[1]["word"], "adacacadacacadacacadacac");
    let p = run_args(["grig", "present", "--level", "1"]).stdout;
    assert!(p.starts_with("gens: a b c d\n"));
    assert_eq!(p.matches("rel:").count(), 5 + 2 + 1);
    assert_eq!(run_args(["grig", "present", "--level", "-2"]).code, 2);
}

#[test]
fn ball_and_growth() {
    assert_eq!(json(&["ball", "2"])["ball"], "11");
    assert_eq!(json(&["ball", "3", "--group", "free"])["ball"], "23");
    let out = run_args(["grig", "--format", "csv", "growth", "--maxn", "3"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "radius,ball,sphere,entropy_lo,entropy_hi");
    assert!(lines[4].starts_with("3,23,12,"));
    let partial = run_args(["grig", "ball", "10", "--budget", "30"]);
    assert_eq!(partial.code, 3);
    assert!(partial.stdout.contains("partial"));
}

#[test]
fn core_lemma_corpus_has_no_failures() {
    let v = json(&["core-lemma"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["fail"] == 0));
}

fn check_all(extra: &[&str]) -> (Value, i32) {
    let mut args = vec!["grig", "--format", "json", "check-all", "--no-timestamp"];
    args.extend_from_slice(extra);
    let out = run_args(args);
    (serde_json::from_str(&out.stdout).unwrap(), out.code as i32)
}

fn status_of<'a>(v: &'a Value, id: &str) -> &'a str {
    v["checks"].as_array().unwrap().iter().find(|c| c["id"] == id).unwrap_or_else(|| panic!("no check {id}"))["status"]
        .as_str()
        .unwrap()
}

fn config_file(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("grig-cfg-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("check.conf");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn check_all_skips_nball_and_is_reproducible() {
    let cfg = config_file("fast", "radius_max = 2000\nsamples = 500\n");
    let c = cfg.to_str().unwrap();
    let args = ["grig", "--format", "json", "check-all", "--no-timestamp", "--nball", "0", "--config", c];
    let first = run_args(args);
    let second = run_args(args);
    assert_eq!(first, second);
    assert_eq!(first.code, 0, "{}", first.stdout);
    let v: Value = serde_json::from_str(&first.stdout).unwrap();
    assert_eq!(status_of(&v, "nball"), "skipped");
    assert_eq!(v["status"], "pass");
    assert!(v.get("generated_at").is_none());
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids[..4], ["weights", "eq1", "lemma-ineq", "order-table"]);
    assert_eq!(ids.last(), Some(&"log-lambda-4"));
}

#[test]
fn tampered_weight_fails_eq1_with_witness() {
    // |c| replaced by 2λ² - 3λ + 2 (off by one)
    let cfg = config_file("tamper", "weight_c = 2 + -3*L + 2*L^2\nnball = 0\nradius_max = 100\nsamples = 200\n");
    let (v, code) = check_all(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(status_of(&v, "eq1"), "fail");
    assert_eq!(status_of(&v, "weights"), "fail");
    let eq1 = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "eq1").unwrap();
    let c_row = eq1["witnesses"].as_array().unwrap().iter().find(|r| r["letter"] == "c").unwrap();
    assert_eq!(c_row["equal"], false);
    assert_ne!(c_row["lhs"], c_row["rhs"]);
}

#[test]
fn check_all_default_radii() {
    // full default run; the n = 2 ball needs exponent i(2)+2 for ab and ba
    let (v, code) = check_all(&[]);
    assert_eq!(code, 1);
    assert_eq!(status_of(&v, "nball-2"), "fail");
    for id in ["nball-5", "nball-10", "nball-20", "coset-h0-quotient", "h0-abelianization", "radius-index", "growth-pipelines"] {
        assert_eq!(status_of(&v, id), "pass", "{id}");
    }
    let failing: Vec<&str> =
        v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(failing, ["nball-2"]);
}

#[test]
fn bad_config_is_a_usage_error() {
    let cfg = config_file("bad", "coset_cap = lots\n");
    let out = run_args(["grig", "check-all", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("line 1"), "{}", out.stdout);
}
