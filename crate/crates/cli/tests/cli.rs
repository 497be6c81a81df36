use std::collections::HashMap;
use std::process::Command;

use mldo_cli::expr::parse;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &HashMap::new())
}

fn run_env(args: &[&str], env: &HashMap<String, String>) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("mldo").chain(args.iter().copied());
    let code = mldo_cli::run(argv, env, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, _) = run(&all);
    (code, serde_json::from_str(out.trim()).expect("one JSON document"))
}

fn check_schema(doc: &Value, command: &str) {
    let obj = doc.as_object().expect("object");
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["command", "inputs", "result", "status"]);
    assert_eq!(doc["command"], command);
    assert!(doc["inputs"]["args"].is_array());
    assert!(["ok", "fail", "error"].contains(&doc["status"].as_str().unwrap()));
    if doc["status"] == "error" {
        assert!(doc["result"]["error"].is_string());
        assert!(doc["result"]["message"].is_string());
    }
}

#[test]
fn spec_examples() {
    let (code, out, _) = run(&["annihilate", "--weight", "1", "--order", "3", "E2"]);
    assert_eq!((code, out.trim()), (0, "D^3 - (23/144)*E4*D - (1/216)*E6"));
    let (code, out, _) = run(&["charpoly", "--weight", "0", "phi(2)"]);
    assert_eq!(code, 0);
    let mut factors: Vec<&str> = out.trim().trim_matches(|c| c == '(' || c == ')').split(")(").collect();
    factors.sort();
    assert_eq!(factors, ["λ + 1/24", "λ - 1/12", "λ - 11/24"]);
    let (code, out, _) = run(&["expand", "D*E4 - E4*D"]);
    assert_eq!((code, out.trim()), (0, "-(1/3)*E6"));
}

#[test]
fn every_subcommand_emits_the_schema() {
    let cases: &[(&str, &[&str])] = &[
        ("expand", &["expand", "D*E4"]),
        ("expand", &["expand", "--terms", "3", "E4"]),
        ("apply", &["apply", "--weight", "4", "kz(4)", "E4"]),
        ("apply", &["apply", "--weight", "1", "--terms", "5", "--series", "eta2z^2", "phi(2)"]),
        ("divide", &["divide", "D^3", "kz(4)"]),
        ("divide", &["divide", "--left", "E4*D^3", "E6*D^2"]),
        ("quo", &["quo", "D^3 - (1/6)*E4*D", "D"]),
        ("gcrd", &["gcrd", "kz(4)", "D^3 - (1/6)*E4*D + (1/18)*E6"]),
        ("lclm", &["lclm", "D", "kz(4)"]),
        ("orepair", &["orepair", "E4", "D"]),
        ("charpoly", &["charpoly", "--weight", "4", "kz(4)"]),
        ("construct", &["construct", "--weight", "0", "--roots", "1/12,-1/24,11/24"]),
        ("mapspace", &["mapspace", "--weight", "0", "--order", "1", "phi(2)", "D^2 + (1/144)*E4"]),
        ("annihilate", &["annihilate", "--weight", "4", "--order", "2", "E4"]),
        ("mord", &["mord", "--weight", "4", "E4"]),
        ("dwt", &["dwt", "E2"]),
        ("frobenius", &["frobenius", "--weight", "4", "--terms", "3", "kz(4)"]),
        ("mason", &["mason", "--weight", "4", "--terms", "12", "kz(4)"]),
        ("symprod", &["symprod", "D", "D"]),
        ("verify", &["verify", "--terms", "4"]),
        ("charpoly", &["charpoly", "D"]),
        ("quo", &["quo", "D*E4", "D"]),
    ];
    for (name, args) in cases {
        let (code, doc) = json(args);
        check_schema(&doc, name);
        let expect = match doc["status"].as_str().unwrap() {
            "ok" => 0,
            "fail" => 1,
            _ => {
                if doc["result"]["error"] == "PreconditionViolated" {
                    2
                } else {
                    1
                }
            }
        };
        assert_eq!(code, expect, "{args:?}: {doc}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["expand", "E4 +"]).0, 2);
    assert_eq!(run(&["bogus"]).0, 2);
    assert_eq!(run(&["charpoly", "kz(4)"]).0, 2);
    assert_eq!(run(&["quo", "D*E4", "D"]).0, 1);
    assert_eq!(run(&["frobenius", "--weight", "0", "D^2 - (1/72)*E4"]).0, 1);
    let (code, _, err) = run(&["expand", "E4 $"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error at 3"), "{err}");
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn outputs_parse_back() {
    let cmds: &[&[&str]] = &[
        &["annihilate", "--weight", "1", "--order", "3", "E2"],
        &["construct", "--weight", "1/2", "--roots", "1/8,1/72,25/72,49/72"],
        &["lclm", "D", "kz(4)"],
        &["symprod", "kz(4)", "kz(6)"],
        &["expand", "(D + E4)^3"],
        &["orepair", "E4", "D"],
    ];
    for args in cmds {
        let (code, doc) = json(args);
        assert_eq!(code, 0);
        let mut texts = Vec::new();
        for v in doc["result"].as_object().map(|o| o.values().cloned().collect()).unwrap_or_else(|| vec![doc["result"].clone()]) {
            if let Some(s) = v.as_str() {
                texts.push(s.to_string());
            }
        }
        assert!(!texts.is_empty());
        for t in texts {
            if t.chars().next().is_some_and(|c| c.is_ascii_digit()) && !t.contains('D') && !t.contains('E') {
                continue;
            }
            assert_eq!(parse(&t).unwrap().to_string(), t, "{args:?}");
        }
    }
}

#[test]
fn config_file_and_env() {
    let path = std::env::temp_dir().join(format!("mldo-cli-test-{}.conf", std::process::id()));
    std::fs::write(&path, "terms = 2\n").unwrap();
    let p = path.to_str().unwrap();
    let (_, out, _) = run(&["expand", "--config", p, "--terms", "3", "E4"]);
    assert!(out.contains("O(q^(3))"));
    let mut env = HashMap::new();
    env.insert("MLDO_CONFIG".to_string(), p.to_string());
    let (_, out, _) = run_env(&["frobenius", "--weight", "4", "kz(4)"], &env);
    assert!(out.lines().all(|l| l.ends_with("O(q^(2))")), "{out}");
    env.insert("MLDO_TERMS".to_string(), "1".to_string());
    let (_, out, _) = run_env(&["frobenius", "--weight", "4", "kz(4)"], &env);
    assert!(out.lines().all(|l| l.ends_with("O(q^(1))")), "{out}");
    env.insert("MLDO_GRID".to_string(), "zero".to_string());
    assert_eq!(run_env(&["expand", "E4"], &env).0, 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn binary_verify() {
    let out = Command::new(env!("CARGO_BIN_EXE_mldo")).args(["verify", "--terms", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| !l.starts_with("[fail]")), "{text}");
    let bad = Command::new(env!("CARGO_BIN_EXE_mldo")).args(["verify", "--terms", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

mod round_trip {
    use mldo_cli::expr::parse;
    use proptest::prelude::*;

    fn term() -> impl Strategy<Value = String> {
        (-9i64..=9, 1i64..=12, 0u32..=2, 0u32..=2, 0u32..=2, 0u32..=3)
            .prop_map(|(n, d, a, b, c, s)| format!("({n}/{d})*E2^{a}*E4^{b}*E6^{c}*D^{s}"))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn parse_print_parse(terms in prop::collection::vec(term(), 1..5), shuffle in any::<bool>()) {
            let mut text = terms.join(" + ");
            if shuffle {
                // exercise the skew product: D on the left of a coefficient
                text = format!("D*({text}) - ({text})*D");
            }
            let a = parse(&text).unwrap();
            let printed = a.to_string();
            let b = parse(&printed).unwrap();
            prop_assert_eq!(&b, &a);
            prop_assert_eq!(b.to_string(), printed);
        }
    }
}
