use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bing_core::bing_topology::Point;
use bing_core::engine::{Engine, EngineConfig, WellOrder};
use serde_json::Value;
use tempfile::TempDir;

fn bing(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bing")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_pairs(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn extend(dir: &Path, pairs: &Path, stages: u32, name: &str) -> (Output, PathBuf) {
    let out = dir.join(name);
    let o = bing(&[
        "extend",
        "--pairs",
        pairs.to_str().unwrap(),
        "--stages",
        &stages.to_string(),
        "--out",
        out.to_str().unwrap(),
    ]);
    (o, out)
}

const ONE_PAIR: &str = r#"[{"from": {"x": "0", "y": "0"}, "to": {"x": "0", "y": "1"}}]"#;

#[test]
fn empty_start_enrolls_the_first_points() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(dir.path(), "empty.json", "[]");
    let (o, cert) = extend(dir.path(), &pairs, 5, "c.json");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["stages"], 5);
    let v: Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    let last = &v["stages"][5];
    let order = WellOrder::new();
    let dom: Vec<Point> = last["domain_cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| serde_json::from_value(m["point"].clone()).unwrap())
        .collect();
    let ran: Vec<Point> = last["range_cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| serde_json::from_value(m["point"].clone()).unwrap())
        .collect();
    for i in 0..5 {
        let z = order.point(i);
        assert!(dom.contains(&z) && ran.contains(&z), "point {i} = {z}");
    }
    let mut e = Engine::new(Vec::new(), EngineConfig::default()).unwrap();
    e.run_to(5).unwrap();
    assert_eq!(dom.len(), 10);
    assert_eq!(dom, e.last().a);
    assert_eq!(ran, e.last().b);
}

#[test]
fn extend_then_verify() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(dir.path(), "p.json", ONE_PAIR);
    let (o, cert) = extend(dir.path(), &pairs, 8, "c.json");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(&cert).unwrap()).unwrap();
    assert_eq!(v["f0"][0]["to"]["y"], "1/1");
    assert_eq!(v["stages"].as_array().unwrap().len(), 9);

    let o = bing(&["verify", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["ok"], true);
    assert_eq!(r["stages"], 8);
    assert_eq!(r["digest"], v["digest"]);
}

#[test]
fn duplicate_target_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(
        dir.path(),
        "dup.json",
        r#"[{"from": {"x": "0", "y": "0"}, "to": {"x": "1", "y": "0"}},
            {"from": {"x": "2", "y": "0"}, "to": {"x": "1", "y": "0"}}]"#,
    );
    let (o, cert) = extend(dir.path(), &pairs, 2, "c.json");
    assert_eq!(o.status.code(), Some(2));
    assert!(!cert.exists());
}

#[test]
fn tampered_certificates_are_rejected() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(dir.path(), "p.json", ONE_PAIR);
    let (o, cert) = extend(dir.path(), &pairs, 4, "c.json");
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&cert).unwrap();

    // move the image b chosen at stage 2
    let mut v: Value = serde_json::from_str(&text).unwrap();
    let b = v["stages"][2]["chosen"]["b"]["x"].as_str().unwrap().to_string();
    let moved = format!("{}1", b.split('/').next().unwrap());
    let denom = b.split('/').nth(1).unwrap_or("1");
    v["stages"][2]["chosen"]["b"]["x"] = Value::String(format!("{moved}/{denom}"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_vec_pretty(&v).unwrap()).unwrap();
    let o = bing(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("stage 2: condition"), "{err}");
    let r = stdout_json(&o);
    assert_eq!(r["ok"], false);
    assert_eq!(r["failure"]["stage"], 2);

    // truncation is malformed input
    let cut = dir.path().join("cut.json");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(bing(&["verify", cut.to_str().unwrap()]).status.code(), Some(2));

    // so is a wrong schema tag
    let other = dir.path().join("schema.json");
    std::fs::write(&other, text.replace("bing-certificate/1", "bing-certificate/9")).unwrap();
    assert_eq!(bing(&["verify", other.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn extend_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(dir.path(), "p.json", ONE_PAIR);
    let (_, a) = extend(dir.path(), &pairs, 5, "a.json");
    let (_, b) = extend(dir.path(), &pairs, 5, "b.json");
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn eval_agrees_with_the_library() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(dir.path(), "p.json", ONE_PAIR);
    let (_, cert) = extend(dir.path(), &pairs, 4, "c.json");
    let c = cert.to_str().unwrap();

    let o = bing(&["eval", "--cert", c, "--point", "0;0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "0/1;1/1");
    let o = bing(&["eval", "--cert", c, "--point", "0;1", "--inverse"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "0/1;0/1");

    let z = WellOrder::new().point(3);
    let f0 = vec![("0;0".parse().unwrap(), "0;1".parse().unwrap())];
    let mut e = Engine::new(f0, EngineConfig { verify: false, ..EngineConfig::default() }).unwrap();
    let want = e.evaluate(&z, 32).unwrap();
    let arg = z.to_string();
    let first = bing(&["eval", "--cert", c, "--point", &arg]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(String::from_utf8_lossy(&first.stdout).trim(), want.to_string());
    let again = bing(&["eval", "--cert", c, "--point", &arg]);
    assert_eq!(first.stdout, again.stdout);

    let o = bing(&["eval", "--cert", c, "--point", "3/7;2", "--max-stages", "5"]);
    assert_eq!(o.status.code(), Some(4));
    let o = bing(&["eval", "--cert", c, "--point", "1;-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn examples() {
    let o = bing(&["example", "example1", "--eps", "1/2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["audit"][0]["K"], "4");
    assert_eq!(v["audit"][1]["K"], "1");
    assert_eq!(v["audit"][0]["closure_contains_a_K"], true);
    assert_eq!(v["audit"][0]["closure_contains_a_K_minus_1"], false);
    assert_eq!(v["points"].as_array().unwrap().len(), 5);

    let o = bing(&["example", "example2", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["separation_radius"], "1/3");
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["points"].as_array().unwrap().len(), 11);

    assert_eq!(bing(&["example", "example3"]).status.code(), Some(2));
    assert_eq!(bing(&["example", "example1", "--eps", "0"]).status.code(), Some(2));
}

#[test]
fn audit_smoke() {
    let dir = TempDir::new().unwrap();
    let pairs = write_pairs(dir.path(), "p.json", ONE_PAIR);
    let (_, cert) = extend(dir.path(), &pairs, 3, "c.json");
    let o = bing(&["audit", "--cert", cert.to_str().unwrap(), "--point", "0;0", "--eps", "1", "--height", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["eps"], "1/1");
    assert!(v["outcome"].is_object());
}

#[test]
fn usage_errors() {
    assert_eq!(bing(&[]).status.code(), Some(2));
    assert_eq!(bing(&["extend", "--stages", "x"]).status.code(), Some(2));
    assert_eq!(bing(&["--help"]).status.code(), Some(0));
}
