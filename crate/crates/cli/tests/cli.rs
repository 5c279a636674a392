use std::path::PathBuf;
use std::process::{Command, Output};

fn dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("idlat-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn idlat(d: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idlat")).current_dir(d).args(args).output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn worked_example_output() {
    let d = dir("gb");
    std::fs::write(d.join("ex.json"), r#"{"nvars":2,"generators":["3*x^2","5*x^2","y"]}"#).unwrap();
    let o = idlat(&d, &["groebner", "--ideal", "ex.json", "--order", "lex", "--short"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "{\"elements\":[\"x^2\",\"y\"],\"monic\":true}\n");
    let o = idlat(&d, &["quotient", "--ideal", "ex.json"]);
    let v = json(&o);
    assert_eq!(v["N"], 2);
    assert_eq!(v["basis"], serde_json::json!(["1", "x"]));
    assert_eq!(v["free"], true);
}

#[test]
fn exit_codes() {
    let d = dir("codes");
    std::fs::write(d.join("t.json"), r#"{"nvars":1,"generators":["2*x","x^2"]}"#).unwrap();
    std::fs::write(d.join("c.json"), r#"{"nvars":1,"generators":["x^2+x+1"]}"#).unwrap();

    let help = idlat(&d, &["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(!help.stdout.is_empty());

    let bad = idlat(&d, &["groebner", "--no-such-flag"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(bad.stdout.is_empty());

    // a randomized command without --seed is a usage error
    assert_eq!(idlat(&d, &["hardness", "expansion", "--ideal", "c.json", "--k", "2"]).status.code(), Some(1));

    let torsion = idlat(&d, &["quotient", "--ideal", "t.json", "--phi", "x"]);
    assert_eq!(torsion.status.code(), Some(2));
    assert!(torsion.stdout.is_empty());
    assert_eq!(idlat(&d, &["groebner", "--ideal", "missing.json"]).status.code(), Some(2));

    let big = idlat(&d, &["hardness", "spp", "--ideal", "c.json", "--gen", "x+2", "--budget", "1"]);
    assert_eq!(big.status.code(), Some(3));
}

#[test]
fn outputs_feed_back() {
    let d = dir("pipe");
    std::fs::write(
        d.join("params.json"),
        r#"{"p":"17","ideal":{"nvars":1,"generators":["x^2+x+1"]},"d":1,"m":5}"#,
    )
    .unwrap();
    let key = idlat(&d, &["hash", "keygen", "--params", "params.json", "--seed", "4"]);
    assert_eq!(key.status.code(), Some(0));
    assert_eq!(json(&key)["insecure"], true);
    std::fs::write(d.join("key.json"), &key.stdout).unwrap();
    let c = idlat(&d, &["hash", "collide", "--key", "key.json", "--budget", "1e6"]);
    assert_eq!(c.status.code(), Some(0));
    let v = json(&c);
    assert_eq!(v["alpha"].as_array().unwrap().len(), 5);
    assert_ne!(v["alpha"], v["beta"]);

    let q = idlat(&d, &["quotient", "--ideal", "-", "--phi", "x^3 + 2"]);
    assert_eq!(q.status.code(), Some(2), "empty stdin is not an ideal");
}

#[test]
fn reals_are_seventeen_digits() {
    let d = dir("reals");
    let o = idlat(&d, &["hardness", "maxsub", "--r", "3", "--poly", "x + 2"]);
    let s = json(&o)["maxsub"].as_str().unwrap().to_string();
    assert!((s.parse::<f64>().unwrap() - 3f64.sqrt()).abs() < 1e-12);
    let mantissa = s.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17);
}
