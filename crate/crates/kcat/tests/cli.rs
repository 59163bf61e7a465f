use kcat::character::{bott_samelson_char, CharObj};
use kcat::root_datum::{DatumName, RootDatum};
use std::process::{Command, Output};

fn kcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcat")).args(args).output().expect("run kcat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

#[test]
fn alcove_queries() {
    assert_eq!(stdout(&kcat(&["alcove", "leq", "A1", "[0]", "[3]"])), "true");
    assert_eq!(stdout(&kcat(&["alcove", "leq", "A1", "[3]", "[0]"])), "false");
    assert_eq!(stdout(&kcat(&["alcove", "dist", "A1", "[0]", "[0]"])), "0");
    assert_eq!(stdout(&kcat(&["alcove", "box", "A2", "[1,1,1]"])), "[1, 1]");
    assert_eq!(stdout(&kcat(&["alcove", "length", "--datum", "A1", "[3]"])), "2");
    assert_eq!(stdout(&kcat(&["alcove", "up", "A1", "0", "[-1]"])), "[0]");
    assert_eq!(stdout(&kcat(&["alcove", "orbit", "A2", "[0,0]"])).lines().count(), 6);
}

#[test]
fn exit_codes() {
    assert_eq!(kcat(&["char", "A1", "0", "[sx]"]).status.code(), Some(2));
    assert_eq!(kcat(&["alcove", "leq", "A1", "[0]"]).status.code(), Some(2));
    assert_eq!(kcat(&["alcove", "coords", "A2", "[1,1,5]"]).status.code(), Some(3));
    assert_eq!(kcat(&["alcove", "coords", "A1", "[1]", "-p", "2"]).status.code(), Some(4));
    assert_eq!(kcat(&["alcove", "coords", "G2", "[1,1,1,1,1,1]", "--char-p", "3"]).status.code(), Some(4));
    assert_eq!(kcat(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(kcat(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn character_json_round_trips() {
    let out = kcat(&["char", "A1", "0", "[s1]", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let d = RootDatum::build(DatumName::A1);
    let c = CharObj::from_json(&d, &v).unwrap();
    let w = d.parse_word("[s1]").unwrap();
    assert_eq!(c, bott_samelson_char(&d, &[0], &w, 0).unwrap());
    // empty word gives ch(Q_0)
    let q = stdout(&kcat(&["char", "A1", "0"]));
    assert_eq!(q.lines().count(), 2);
}

#[test]
fn decompose_and_table() {
    let out = stdout(&kcat(&["decompose", "A1", "0", "[s1]"]));
    assert!(out.starts_with("2 summands"), "{out}");
    let one = stdout(&kcat(&["decompose", "A1", "0", "[s0]", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["summands"].as_array().unwrap().len(), 2);
    let t = kcat(&["mult-table", "A1", "--radius", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&t)).unwrap();
    let rows: Vec<Vec<i64>> = serde_json::from_value(v["table"].clone()).unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[i], 1);
        assert!(row[..i].iter().all(|&x| x == 0));
    }
}

#[test]
fn deterministic_output() {
    let args = ["decompose", "A1", "0", "[s0,s1]", "--format", "json"];
    assert_eq!(kcat(&args).stdout, kcat(&args).stdout);
}

#[test]
fn verify_suites() {
    let out = kcat(&["verify", "all", "--datum", "A1", "-p", "0"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 8);
    let out = kcat(&["verify", "hecke-axioms", "--datum", "B2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["passed"], serde_json::Value::Bool(true));
}
