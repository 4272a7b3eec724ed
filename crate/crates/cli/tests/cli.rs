use std::process::{Command, Output};

use etacheck::congruences::CheckOutcome;
use etacheck::{IntSeries, ModSeries, TauTable};

fn etacheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etacheck"))
        .args(args)
        .env_remove("ETACHECK_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = etacheck(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    etacheck(args).status.code().unwrap()
}

/// Second column of table or CSV output, header dropped.
fn column(text: &str, csv: bool) -> Vec<String> {
    text.lines()
        .skip(1)
        .map(|l| {
            let cells: Vec<&str> = if csv { l.split(',').collect() } else { l.split_whitespace().collect() };
            cells[1].to_string()
        })
        .collect()
}

fn json_values(text: &str, key: &str) -> Vec<String> {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    v[key].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

fn all_formats(args: &[&str], key: &str) -> Vec<String> {
    let with = |f: &str| {
        let mut a = args.to_vec();
        a.extend(["--format", f]);
        ok(&a)
    };
    let table = column(&with("table"), false);
    let csv = column(&with("csv"), true);
    let json = json_values(&with("json"), key);
    assert_eq!(table, csv, "{args:?}");
    assert_eq!(table, json, "{args:?}");
    table
}

#[test]
fn tau_command() {
    let values = all_formats(&["tau", "--k", "24", "--max-n", "7"], "values");
    assert_eq!(values.last().unwrap(), "-16744");
    let omega = all_formats(&["tau", "--k", "1", "--max-n", "8"], "values");
    assert_eq!(omega, ["1", "-1", "-1", "0", "0", "1", "0", "1"]);
    let reduced = all_formats(&["tau", "--k", "24", "--max-n", "5", "--modulus", "12"], "values");
    assert_eq!(reduced, ["1", "0", "0", "4", "6"]);
    let recurrence = all_formats(&["tau", "--k", "-3", "--max-n", "30", "--route", "recurrence"], "values");
    assert_eq!(recurrence, all_formats(&["tau", "--k", "-3", "--max-n", "30"], "values"));

    let json = ok(&["tau", "--k", "24", "--max-n", "10", "--format", "json"]);
    let table: TauTable = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&table).unwrap(), json.trim_end());

    assert_eq!(code(&["tau", "--k", "0", "--max-n", "5"]), 2);
    assert_eq!(code(&["tau", "--k", "3", "--max-n", "0"]), 2);
    assert_eq!(code(&["tau", "--k", "3"]), 2);
    assert_eq!(code(&["tau", "--k", "3", "--max-n", "65", "--route", "partition-sum"]), 2);
}

#[test]
fn partition_command() {
    assert_eq!(all_formats(&["partition", "--fn", "R", "--t", "9", "--max-n", "3"], "values"), ["1", "1", "2", "3"]);
    let p = all_formats(&["partition", "--fn", "p", "--max-n", "9"], "values");
    assert_eq!(p.last().unwrap(), "30");
    let d3 = all_formats(&["partition", "--fn", "d", "--t", "3", "--max-n", "6"], "values");
    assert_eq!(d3, all_formats(&["partition", "--fn", "R", "--t", "4", "--max-n", "6"], "values"));
    let f = all_formats(&["partition", "--fn", "F", "--set", "1,2,3", "--max-n", "40"], "values");
    assert_eq!(f, all_formats(&["partition", "--fn", "d", "--t", "3", "--max-n", "40"], "values"));
    assert_eq!(all_formats(&["partition", "--fn", "q", "--max-n", "6"], "values"), ["1", "1", "1", "2", "2", "3", "4"]);

    assert_eq!(code(&["partition", "--fn", "R", "--max-n", "5"]), 2);
    assert_eq!(code(&["partition", "--fn", "R", "--t", "1", "--max-n", "5"]), 2);
    assert_eq!(code(&["partition", "--fn", "F", "--max-n", "5"]), 2);
    assert_eq!(code(&["partition", "--fn", "F", "--set", "0,2", "--max-n", "5"]), 2);
    assert_eq!(code(&["partition", "--fn", "x", "--max-n", "5"]), 2);
}

#[test]
fn series_command() {
    assert_eq!(all_formats(&["series", "--spec", "1; 1^24", "--order", "2"], "coeffs"), ["0", "1", "-24"]);
    let r4 = all_formats(&["series", "--spec", "0; 4^1 1^-1", "--order", "6"], "coeffs");
    assert_eq!(r4, ["1", "1", "2", "3", "4", "6", "9"]);

    let json = ok(&["series", "--spec", "1; 1^24", "--order", "30", "--format", "json"]);
    let s: IntSeries = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&s).unwrap(), json.trim_end());
    let json = ok(&["series", "--spec", "0; 1^-1", "--order", "30", "--modulus", "5", "--format", "json"]);
    let m: ModSeries = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&m).unwrap(), json.trim_end());
    assert_eq!(m.coeffs()[4], 0);

    let bad = etacheck(&["series", "--spec", "0; 0^2", "--order", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8(bad.stderr).unwrap();
    assert!(err.contains("position 3"), "{err}");
    assert!(err.contains("\n     ^"), "{err}");
    assert_eq!(code(&["series", "--spec", "1 1^24", "--order", "3"]), 2);
    assert_eq!(code(&["series", "--spec", "0; 1^2", "--order", "3", "--modulus", "1"]), 2);
}

#[test]
fn verify_command() {
    let out = ok(&["verify", "--check", "T3.6", "--limit", "3000"]);
    assert!(out.lines().nth(1).unwrap().contains("pass"));

    // the printed audit fails as predicted, which is success
    let json = ok(&["verify", "--check", "P2.4a", "--limit", "200", "--format", "json"]);
    let outcomes: Vec<CheckOutcome> = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&outcomes).unwrap(), json.trim_end());
    let first = &outcomes[0].counterexamples[0];
    assert_eq!((first.n, first.lhs.as_str()), (5, "6"));

    assert_eq!(code(&["verify", "--check", "P2.4a", "--limit", "20", "--expect", "pass"]), 1);
    assert_eq!(code(&["verify", "--check", "T3.3", "--limit", "20", "--expect", "fail"]), 1);
    assert_eq!(code(&["verify", "--check", "NOPE"]), 2);
    assert_eq!(code(&["verify", "--check", "T3.6", "--limit", "0"]), 2);

    let csv = ok(&["verify", "--check", "T3.3", "--check", "C4.2b", "--limit", "50", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(2).unwrap().starts_with("C4.2b,pass,pass,ok,0,50,0,"));
}

#[test]
fn verify_quick_profile() {
    let out = ok(&["verify"]);
    assert!(out.trim_end().ends_with("checks, 0 unexpected"), "{out}");
}

#[test]
fn bench_command() {
    let a = ok(&["bench", "--order", "300"]);
    let b = ok(&["bench", "--order", "300"]);
    assert_eq!(a.lines().count(), 3);
    let sums = |s: &str| s.lines().skip(1).map(|l| l.split_whitespace().last().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(sums(&a), sums(&b));
    ok(&["bench", "--order", "1"]);
    assert_eq!(code(&["bench", "--order", "0"]), 2);
}

#[test]
fn order_ceiling_from_environment() {
    let run = |ceiling: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_etacheck"))
            .args(args)
            .env("ETACHECK_MAX_ORDER", ceiling)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(run("100", &["tau", "--k", "24", "--max-n", "101"]), 2);
    assert_eq!(run("100", &["tau", "--k", "24", "--max-n", "100"]), 0);
    assert_eq!(run("100", &["verify", "--check", "C3.6a", "--limit", "500"]), 2);
    assert_eq!(run("lots", &["bench", "--order", "5"]), 2);
}

#[test]
fn checks_listing() {
    let csv = ok(&["checks", "--format", "csv"]);
    assert!(csv.contains("\nT3.6,pass,"));
    assert!(csv.contains("\nP2.4a,fail,"));
    let v: serde_json::Value = serde_json::from_str(&ok(&["checks", "--format", "json"])).unwrap();
    assert_eq!(v.as_array().unwrap().len(), etacheck::congruences::registry().len());
}
