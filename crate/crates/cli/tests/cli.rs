use std::process::{Command, Output};

use det_waring::decompositions::{krishna_makam_det3, Scheme};
use det_waring_cli::json::{parse_decomposition, parse_product};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_det-waring")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["decompose", "--d", "2"], 0),
        (&["verify", "--d", "3", "--scheme", "gurvits"], 0),
        (&["verify", "--scheme", "krishna-makam"], 0),
        (&["lemma-check", "--d", "4"], 0),
        (&["independence", "--d", "3"], 0),
        (&["symmetries", "--d", "2", "--full"], 0),
        (&["equations", "--d", "3", "--prime", "7"], 0),
        (&["bounds"], 0),
        (&["--help"], 0),
        (&["--version"], 0),
        // the literal d = 4 first family does not vanish
        (&["equations", "--d", "4"], 1),
        (&[], 2),
        (&["frobnicate"], 2),
        (&["verify", "--d", "zero"], 2),
        (&["verify", "--scheme", "nope"], 2),
        (&["verify", "--d", "7"], 2),
        (&["verify", "--d", "6", "--scheme", "classical"], 2),
        (&["verify", "--d", "40", "--force"], 2),
        (&["verify", "--d", "4", "--scheme", "krishna-makam"], 2),
        (&["independence", "--d", "6"], 2),
        (&["symmetries", "--d", "5", "--full"], 2),
        (&["equations", "--d", "4", "--prime", "5", "--full"], 2),
        (&["equations", "--d", "3", "--prime", "11"], 2),
        (&["equations", "--d", "3", "--prime", "9"], 2),
        (&["lemma-check", "--format", "latex"], 2),
        (&["bench", "--scheme", "krishna-makam"], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn usage_errors_go_to_stderr() {
    let out = run(&["verify", "--d", "9"]);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("Usage: det-waring"), "{err}");
    assert!(err.contains("d = 9"), "{err}");
}

#[test]
fn force_extends_the_budget() {
    assert_eq!(code(&["decompose", "--d", "7"]), 2);
    let out = run(&["decompose", "--d", "7", "--force"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 7 * 5040);
}

#[test]
fn emitted_json_parses_back() {
    for scheme in Scheme::ALL {
        for d in 1..=4 {
            let out = run(&["decompose", "--d", &d.to_string(), "--scheme", scheme.name()]);
            let parsed = parse_decomposition(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
            assert_eq!(parsed, scheme.build(d).unwrap(), "{scheme} d={d}");
        }
    }
    let out = run(&["decompose", "--scheme", "krishna-makam"]);
    assert_eq!(parse_product(std::str::from_utf8(&out.stdout).unwrap()).unwrap(), krishna_makam_det3());
}

#[test]
fn documented_examples() {
    let out = run(&["decompose", "--d", "3", "--scheme", "main", "--format", "latex"]);
    let tex = String::from_utf8(out.stdout).unwrap();
    assert_eq!(tex.matches("\\right)^{3}").count(), 18);

    let v = json(&["verify", "--d", "4", "--scheme", "main"]);
    assert_eq!(v["outcome"], true);
    assert_eq!(v["results"][0]["details"]["equal"], true);
    assert_eq!(v["results"][0]["details"]["terms"], 96);

    let v = json(&["symmetries", "--d", "3", "--full"]);
    assert_eq!(v["outcome"], true);
    assert_eq!(v["results"][0]["details"]["h_order"], 162);
    let action = v["results"].as_array().unwrap().iter().find(|r| r["name"] == "action on terms").unwrap();
    assert_eq!(action["pass"], true);

    let v = json(&["decompose", "--d", "2"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
}

#[test]
fn jobs_do_not_change_reports() {
    for args in [
        &["verify", "--d", "5", "--mode", "both"][..],
        &["bounds", "--format", "text"],
        &["decompose", "--d", "4", "--scheme", "gurvits"],
    ] {
        let a = run(&[args, &["--jobs", "1"]].concat());
        let b = run(&[args, &["--jobs", "3"]].concat());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn timings_are_opt_in() {
    let v = json(&["verify", "--d", "3"]);
    assert!(v.get("timings_ms").is_none());
    let v = json(&["verify", "--d", "3", "--timings"]);
    assert!(v["timings_ms"]["expansion"].is_number());
}

#[test]
fn seeds_select_samples() {
    let a = run(&["lemma-check", "--d", "5", "--seed", "1"]).stdout;
    let b = run(&["lemma-check", "--d", "5", "--seed", "1"]).stdout;
    let c = run(&["lemma-check", "--d", "5", "--seed", "2"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn table_mismatch_is_flagged_not_failed() {
    let v = json(&["symmetries", "--d", "5"]);
    assert_eq!(v["outcome"], true);
    let order = &v["results"][0];
    assert_eq!(order["details"]["h_order"], 30000);
    assert_eq!(order["details"]["printed_table"], 37500);
    assert_eq!(order["flags"].as_array().unwrap().len(), 1);
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("det-waring-out-{}.json", std::process::id()));
    let out = run(&["bounds", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"][0]["details"]["rows"].as_array().unwrap().len(), 8);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn bounds_latex_has_every_row() {
    let out = run(&["bounds", "--format", "latex"]);
    let tex = String::from_utf8(out.stdout).unwrap();
    assert!(tex.contains("new & 4 & 18 & 96 & 600 & 4320 & 35280 & 322560 & 3265920"));
    assert!(tex.contains("lower & 4 & 17 & 50"));
}

#[test]
fn failing_report_names_the_generators() {
    let out = run(&["equations", "--d", "4"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outcome"], false);
    let failing: Vec<&Value> = v["results"].as_array().unwrap().iter().filter(|r| r["pass"] == false).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["details"]["failing"].as_array().unwrap().len(), 24);
}
