//! End-to-end checks of the command-line surface: exit codes, report
//! round-tripping, and the store resolution order.

use std::path::PathBuf;
use std::process::Command;

use quadfermat::config::{DataMode, RunConfig};
use quadfermat::store::{Store, StoreError};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadfermat"))
}

fn fixtures() -> PathBuf {
    RunConfig::bundled_fixtures()
}

#[test]
fn exit_code_eliminated() {
    let out = bin()
        .args(["eliminate", "-d", "5", "--offline"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inertia argument"));
    assert!(text.contains("p > 5"));
}

#[test]
fn exit_code_unresolved() {
    let out = bin()
        .args(["eliminate", "-d", "17", "--offline"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("unresolved"));
}

#[test]
fn exit_code_incomplete_data() {
    let out = bin()
        .args(["eliminate", "-d", "29", "--offline"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{:?}", out);
}

#[test]
fn exit_code_usage() {
    let out = bin()
        .args(["eliminate", "-d", "10", "--offline"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4), "{:?}", out);
    let out = bin().args(["eliminate", "--bogus-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = bin()
        .args(["eliminate", "-d", "3", "--odd-abc", "--offline"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn json_output_round_trips() {
    let out = bin()
        .args(["eliminate", "-d", "-19", "--offline", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mut reemitted = serde_json::to_string_pretty(&value).unwrap();
    reemitted.push('\n');
    assert_eq!(text, reemitted, "structured output must re-emit byte-identically");
    assert_eq!(value["schema"], "quadfermat-ledger/1");
    assert_eq!(value["bound"]["rendered"], "max{199, C_K}");
    assert_eq!(value["ck_incomplete"], true);
}

#[test]
fn level_filter_restricts_run() {
    let out = bin()
        .args([
            "eliminate",
            "-d",
            "7",
            "--offline",
            "--json",
            "--level-filter",
            "^4",
        ])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["levels"].as_array().unwrap().len(), 1);
}

#[test]
fn field_profile_rows() {
    let out = bin().args(["field-profile", "-d", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("modulus b = q2n2r1^5"));
    assert!(text.contains("order 2"));
    assert!(text.contains("2+1*sqrt(3)"), "fundamental unit line: {text}");
    let out = bin().args(["field-profile", "-d", "-3"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("order 4"));
    let out = bin().args(["field-profile", "-d", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("class number"));
}

#[test]
fn assumption_flags_in_ledgers() {
    let out = bin()
        .args(["eliminate", "-d", "-3", "--offline", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    let asms = v["assumptions"].to_string();
    assert!(asms.contains("Serre"), "{asms}");
    assert!(asms.contains("Eichler-Shimura"), "{asms}");
    let out = bin()
        .args(["eliminate", "-d", "-11", "--odd-abc", "--offline", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let asms = v["assumptions"].to_string();
    assert!(asms.contains("splits"), "{asms}");
    assert!(asms.contains("3 mod 4"), "{asms}");
    // real fields carry no conjecture flags
    let out = bin()
        .args(["eliminate", "-d", "7", "--offline", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let asms = v["assumptions"].to_string();
    assert!(!asms.contains("Serre"), "{asms}");
}

#[test]
fn offline_env_var_forbids_network() {
    // with the offline env var set, a configured API base is ignored and
    // a missing document surfaces as NotCached
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["eliminate", "-d", "5", "--fixtures"])
        .arg(tmp.path())
        .env("QUADFERMAT_API_BASE", "http://127.0.0.1:1")
        .env("QUADFERMAT_OFFLINE", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{:?}", out);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not cached"), "{err}");
}

#[test]
fn verify_tables_green() {
    let out = bin().args(["verify-tables", "--offline"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 failed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn missing_fixture_is_not_cached() {
    let tmp = tempfile::tempdir().unwrap();
    let st = Store::new(RunConfig::offline(tmp.path().to_path_buf()));
    let err = st.fetch_newforms("2.2.5.1", "q2n4.q5n5r3").unwrap_err();
    assert!(matches!(err, StoreError::NotCached(_)), "{err}");
}

#[test]
fn tampered_fixture_fails_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("2.2.5.1/newforms");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("q2n4.q5n5r3.toml"), "schema = \"bogus/9\"\n").unwrap();
    let st = Store::new(RunConfig::offline(tmp.path().to_path_buf()));
    let err = st.fetch_newforms("2.2.5.1", "q2n4.q5n5r3").unwrap_err();
    assert!(matches!(err, StoreError::SchemaMismatch { .. }), "{err}");
}

#[test]
fn cache_resolution_and_idempotent_writes() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = tmp.path().join("cache");
    let empty_fixtures = tmp.path().join("fixtures");
    std::fs::create_dir_all(&empty_fixtures).unwrap();
    let mut cfg = RunConfig::offline(empty_fixtures);
    cfg.cache_dir = Some(cache.clone());
    let st = Store::new(cfg);
    // seed the cache with a real fixture document
    let doc = std::fs::read_to_string(
        fixtures().join("2.2.5.1/newforms/q2n4.q5n5r3.toml"),
    )
    .unwrap();
    st.write_cache("2.2.5.1", "newforms", "q2n4.q5n5r3", &doc)
        .unwrap();
    // double write: idempotent
    st.write_cache("2.2.5.1", "newforms", "q2n4.q5n5r3", &doc)
        .unwrap();
    let data = st.fetch_newforms("2.2.5.1", "q2n4.q5n5r3").unwrap();
    assert_eq!(data.level_norm, num_bigint::BigInt::from(20));
}

#[test]
fn online_mode_network_failure_surfaces() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::offline(tmp.path().to_path_buf());
    cfg.mode = DataMode::Online;
    cfg.api_base = Some(String::from("http://127.0.0.1:1"));
    cfg.request_delay_ms = 1;
    let st = Store::new(cfg);
    let err = st.fetch_newforms("2.2.5.1", "q2n4.q5n5r3").unwrap_err();
    assert!(matches!(err, StoreError::Network(_)), "{err}");
}
