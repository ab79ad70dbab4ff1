use std::process::{Command, Output};

use serde_json::Value;
use slmod::cli::{parse_config, RunConfig};

fn slmod(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slmod")).args(args.split_whitespace()).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn passing_check_exits_zero() {
    let out = slmod("check --id composition --N 4 --p 2 --beta 1/2,0,0,0 --window 2");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["results"][0]["check_id"], "composition");
    assert_eq!(v["results"][0]["status"], "PASS");
    assert_eq!(v["config"]["beta"], "1/2,0,0,0");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        "check --id composition --N 3",
        "check --id composition --N 4 --beta 1/2,0",
        "check --id no-such-check",
        "homology --complex FSQ(x)",
        "frame --N 4 --vector 0,0,0,0",
        "dims --window -1",
    ] {
        let out = slmod(args);
        assert_eq!(out.status.code(), Some(2), "{args}");
        assert!(out.stdout.is_empty(), "{args}");
    }
}

#[test]
fn invalid_parameters_exit_two() {
    for args in ["check --id composition --N 4 --p 3", "dims --N 4 --p 4", "homology --N 4 --complex FSQ(3)"] {
        let out = slmod(args);
        assert_eq!(out.status.code(), Some(2), "{args}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args}");
    }
}

#[test]
fn csv_has_one_row_per_record() {
    let args = "homology --N 4 --complex FSQ(1) --beta 0,0,0,0 --window 1";
    let records: usize = json(&slmod(args))["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["details"].as_array().unwrap().len())
        .sum();
    let out = slmod(&format!("{args} --format csv"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["check_id", "degree", "expected", "actual", "status"]);
    assert_eq!(rows.records().count(), records);
}

#[test]
fn config_echo_round_trips() {
    let out = slmod("closure --N 4 --p 1 --beta 1/2,0,0,-2/3 --seed-fiber 1,0,-1,0 --seed-index 2 --window 1 --seed 7");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let echoed: RunConfig = serde_json::from_value(json(&out)["config"].clone()).unwrap();
    let mut argv = vec!["slmod".to_string()];
    argv.extend(echoed.to_args());
    assert_eq!(parse_config(argv).unwrap(), echoed);
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("slmod-cli-{}.json", std::process::id()));
    let args = "frame --N 4 --vector 0,1,2,3";
    let out = slmod(&format!("{args} --output {}", path.display()));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let mut direct = json(&slmod(args));
    let mut from_file: Value = serde_json::from_slice(&written).unwrap();
    direct["config"]["output"] = Value::Null;
    from_file["config"]["output"] = Value::Null;
    assert_eq!(direct, from_file);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let args = "check --id inclusion-chain --N 4 --window 1";
    let one = Command::new(env!("CARGO_BIN_EXE_slmod")).args(args.split_whitespace()).env("SLMOD_WORKERS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_slmod")).args(args.split_whitespace()).env("SLMOD_WORKERS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn text_report_lists_status_lines() {
    let out = slmod("dims --N 4 --window 1 --format text");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS"));
    assert!(text.trim_end().ends_with("pass 1 fail 0 skipped 0"));
}
