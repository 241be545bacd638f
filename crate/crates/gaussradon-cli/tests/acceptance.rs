//! CLI acceptance: bit-identical reruns for every shipped config, the
//! documented exit codes, and the structured error report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gaussradon")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    dir
}

fn run(subcommand: &str, cfg: &str, out: &Path, extra: &[&str]) -> Output {
    Command::new(bin())
        .arg(subcommand)
        .arg("--config")
        .arg(config(cfg))
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).expect("output dir exists") {
        let entry = entry.unwrap();
        out.insert(
            entry.file_name().to_string_lossy().into_owned(),
            fs::read(entry.path()).unwrap(),
        );
    }
    out
}

fn report(pass: bool, detail: &str) {
    println!(
        "acceptance criterion 11: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion 11 failed: {detail}");
}

#[test]
fn criterion_11_output_files_are_bit_identical_across_reruns() {
    let cases = [
        ("sample", "sample.json"),
        ("transform", "transform.json"),
        ("transform", "transform-bump.json"),
        ("disintegrate", "disintegrate.json"),
        ("recover", "recover.json"),
        ("tails", "tails.json"),
        ("support", "support.json"),
        ("helgason2d", "helgason.json"),
        ("wiener-sanity", "wiener-sanity.json"),
    ];
    let mut files_compared = 0;
    for (sub, cfg) in cases {
        let slug = cfg.trim_end_matches(".json");
        let dir_a = tmp(&format!("{slug}-a"));
        let dir_b = tmp(&format!("{slug}-b"));
        let out_a = run(sub, cfg, &dir_a, &[]);
        let out_b = run(sub, cfg, &dir_b, &[]);
        assert!(
            out_a.status.success(),
            "{sub} {cfg} failed: {}",
            String::from_utf8_lossy(&out_a.stderr)
        );
        assert!(out_b.status.success());
        let a = dir_contents(&dir_a);
        let b = dir_contents(&dir_b);
        assert_eq!(
            a.keys().collect::<Vec<_>>(),
            b.keys().collect::<Vec<_>>(),
            "{cfg}: file sets differ"
        );
        for (name, bytes) in &a {
            assert_eq!(
                Some(bytes),
                b.get(name),
                "{cfg}: {name} differs between reruns"
            );
            files_compared += 1;
        }
        assert!(a.contains_key("report.json"), "{cfg}: no report written");
    }
    report(
        true,
        &format!(
            "{files_compared} output files across {} experiments bit-identical on rerun",
            cases.len()
        ),
    );
}

#[test]
fn seed_override_changes_outputs_and_is_recorded() {
    let dir_a = tmp("seed-a");
    let dir_b = tmp("seed-b");
    let base = run("transform", "transform-bump.json", &dir_a, &[]);
    let overridden = run(
        "transform",
        "transform-bump.json",
        &dir_b,
        &["--seed", "99"],
    );
    assert!(base.status.success() && overridden.status.success());
    let a: serde_json::Value =
        serde_json::from_slice(&fs::read(dir_a.join("report.json")).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_slice(&fs::read(dir_b.join("report.json")).unwrap()).unwrap();
    assert_eq!(b["config"]["seed"], serde_json::json!(99));
    assert_ne!(a["result"]["estimate"], b["result"]["estimate"]);
}

#[test]
fn trivial_transform_is_exact() {
    let dir = tmp("trivial-transform");
    let out = run("transform", "transform.json", &dir, &[]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["estimate"], serde_json::json!(1.0));
    assert_eq!(report["result"]["stderr"], serde_json::json!(0.0));
}

#[test]
fn exit_code_2_on_config_errors() {
    // missing file
    let out = Command::new(bin())
        .args(["transform", "--config", "does-not-exist.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // kind mismatch between config and subcommand
    let dir = tmp("kind-mismatch");
    let out = run("support", "transform.json", &dir, &[]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "config");
    assert_eq!(err["exit_code"], 2);

    // unknown registry name
    let bad = tmp("bad-registry");
    fs::create_dir_all(&bad).unwrap();
    let cfg = bad.join("bad.json");
    fs::write(
        &cfg,
        r#"{"kind":"transform","seed":1,"normal":[1.0],"offset":0.0,
           "functional":{"name":"no-such-functional"}}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args(["transform", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_3_on_proof_step_failure() {
    // separation fails when the point sits inside the body
    let dir = tmp("support-inside");
    let out = run("support", "support-inside.json", &dir, &[]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "proof-step");
    assert_eq!(err["exit_code"], 3);
    assert!(err["message"].as_str().unwrap().contains("not separated"));
}

#[test]
fn exit_code_4_on_tolerance_failure() {
    // the declared body is smaller than the functional's support, so lines
    // "missing" the declared body still carry signal
    let dir = tmp("helgason-misdeclared");
    let out = run("helgason2d", "helgason-misdeclared.json", &dir, &[]);
    assert_eq!(out.status.code(), Some(4));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "tolerance");
    // outputs are still written for inspection
    assert!(dir.join("report.json").exists());
    assert!(dir.join("lines.csv").exists());
}

#[test]
fn list_prints_registry_in_stable_order() {
    let out = Command::new(bin()).arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    for name in [
        "weighted-l2",
        "wiener-sup",
        "h-norm",
        "ball",
        "hull",
        "coordinate-bump",
        "path-value-clamp",
    ] {
        assert!(text.contains(name), "listing missing {name}");
    }
    let again = Command::new(bin()).arg("list").output().unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn support_run_passes_and_summarizes() {
    let dir = tmp("support-pass");
    let out = run("support", "support.json", &dir, &[]);
    assert!(
        out.status.success(),
        "support run failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("within envelope"));
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(
        report["report"]["verdict"]["passes"],
        serde_json::json!(true)
    );
    assert!(dir.join("levels.csv").exists());
}
