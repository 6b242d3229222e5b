//! End-to-end runs of the `lnat` binary on the sample instances.

use std::path::PathBuf;
use std::process::{Command, Output};

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn lnat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

#[test]
fn nonconvex_demo_passes_the_lnat_check() {
    let o = lnat(&["check", "--property", "lnat", &instance("nonconvex-demo.json")]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS midpoint-convex"));
}

#[test]
fn supermodular_table_fails_with_a_confirmed_witness() {
    let o = lnat(&["--format", "json", "check", &instance("supermodular.json")]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["witness"]["confirmed"], true);
    assert_eq!(v["witness"]["x"], serde_json::json!([0, 1]));
}

#[test]
fn buildk_recovers_the_nine_dimensional_index_set() {
    let o = lnat(&["mixing", "buildk", &instance("mixing-9.json"), "--p", "1,1,0,0,1,-1,0,0,-1", "--delta", "1,7,6,2,9,3,8,5,4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("K={3,4,6,9}"), "{out}");
    assert!(out.contains("sepi: w >= 7/10 - 1/10 x3 - 1/5 x4 - 3/10 x6 - 2/5 x9"), "{out}");
}

#[test]
fn mixing_roundtrip_agrees() {
    let o = lnat(&["mixing", "roundtrip", &instance("mixing-3.json"), "--p", "-1,-1,1", "--delta", "1,2,3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("w >= 4/5 - 3/10 x1 - 7/10 x2"));
}

#[test]
fn cycle_command_prints_the_exact_inequality() {
    let o = lnat(&["misepi", "cycle", &instance("cmix-4.json"), "--arcs", "1-4,4-3,3-1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("2 w + y1 + y3 + y4 >= 1 - 7/10 x1 - 2/5 x3 - 9/10 x4"));
    assert!(out.contains("p: (0, 2, -1, -1)") && out.contains("delta: (3, 4, 1, 2)"), "{out}");
    // the file's own cycles are used without --arcs
    let o = lnat(&["--format", "json", "misepi", "cycle", &instance("cmix-4.json")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["cycles"].as_array().unwrap().len(), 2);
}

#[test]
fn mcmix_facet_is_certified() {
    let o = lnat(&[
        "--format", "json", "misepi", "facet", &instance("mcmix-4.json"),
        "--matrix", "1100,1010,1001,0111", "--p", "0,0,0,0", "--delta", "4,3,2,1",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["affine_rank"], 8);
    assert_eq!(v["inequality"]["constant"], "35/12");
    assert_eq!(v["u"], serde_json::json!(["2/3", "1/3", "1/3", "1/3"]));
}

#[test]
fn sample_instances_are_canonical() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances"].iter().collect();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let p = path.to_string_lossy();
        let o = lnat(&["fmt", &p]);
        assert_eq!(code(&o), 0, "{p}");
        assert_eq!(stdout(&o), std::fs::read_to_string(&path).unwrap(), "{p} is not canonical");
        assert_eq!(code(&lnat(&["fmt", "--check", &p])), 0);
    }
}

fn write_temp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("lnat-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validation_and_parse_errors_exit_2() {
    let cases = [
        ("q-one.json", r#"{"format": 1, "function": {"tag": "gen-int-mixing", "q": ["1/1", "1/2"]}, "box": {"lower": [0, 0], "upper": [1, 1]}}"#, "function.q"),
        ("c-neg.json", r#"{"format": 1, "function": {"tag": "mcmix", "q": ["1", "1/2"], "c": ["-1", "2"]}, "box": {"lower": [0, 0], "upper": [1, 1]}}"#, "function.c"),
        ("float.json", r#"{"format": 1, "function": {"tag": "gen-int-mixing", "q": [0.5]}, "box": {"lower": [0], "upper": [1]}}"#, "line 1"),
        ("version.json", r#"{"format": 2, "function": {"tag": "max-component"}, "box": {"lower": [0], "upper": [1]}}"#, "format"),
    ];
    for (name, text, needle) in cases {
        let o = lnat(&["check", &write_temp(name, text)]);
        assert_eq!(code(&o), 2, "{name}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(needle), "{name}: {err}");
    }
    assert_eq!(code(&lnat(&["check", "/nonexistent/instance.json"])), 2);
    assert_eq!(code(&lnat(&["frobnicate"])), 2);
    // wrong model for the command
    assert_eq!(code(&lnat(&["misepi", "hull", &instance("nonconvex-demo.json")])), 2);
}

#[test]
fn objectives_unbounded_along_a_ray_are_rejected() {
    let o = lnat(&["misepi", "minimize", &instance("mcmix-4.json"), "--cw", "1", "--cy", "0,0,0,0", "--cx", "1,1,1,1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn minimizers_match_enumeration() {
    let o = lnat(&["misepi", "minimize", &instance("mcmix-4.json"), "--cw", "1", "--cy", "1,1,1,1", "--cx", "1,1,1,1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("optimum 7/2"));
    let o = lnat(&["minimize", &instance("quadratic-2.json"), "--cw", "1", "--cx", "1,-5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("optimum -4"));
}

#[test]
fn oracle_compare_is_deterministic_across_job_counts() {
    for name in ["mixing-3.json", "mcmix-4.json", "joint-2.json"] {
        let o = lnat(&["oracle", "compare", &instance(name), "--trials", "6"]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
    let one = lnat(&["--seed", "3", "--jobs", "1", "oracle", "compare", &instance("supermodular.json"), "--trials", "12"]);
    let four = lnat(&["--seed", "3", "--jobs", "4", "oracle", "compare", &instance("supermodular.json"), "--trials", "12"]);
    assert_eq!(code(&one), 1);
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn json_mirrors_the_text_report() {
    let args = ["sepi", "separate", &instance("mixing-3.json"), "--x", "1/2,1/3,1/4", "--w", "0"];
    let text = stdout(&lnat(&args));
    let mut jargs = vec!["--format", "json", "--decimal"];
    jargs.extend(args);
    let v: serde_json::Value = serde_json::from_str(&stdout(&lnat(&jargs))).unwrap();
    assert!(text.contains("violation: 1/2"));
    assert_eq!(v["violation"], serde_json::json!({ "exact": "1/2", "decimal": "0.5" }));
    assert_eq!(v["inequality"]["text"], "w >= 4/5 - 3/10 x1 - 3/10 x2 - 1/5 x3");
    assert_eq!(v["p"], serde_json::json!([0, 0, 0]));
}

#[test]
fn joint_membership_cross_checks() {
    let o = lnat(&["joint", "member", &instance("joint-2.json"), "--w", "2,1", "--x", "1/2,3/2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("agree: true"));
}
