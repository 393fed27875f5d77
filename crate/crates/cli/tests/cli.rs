use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn gst() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gst"));
    c.env_remove("GST_MAX_SET_SIZE");
    c
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn combined(dir: &Path) -> PathBuf {
    let out = dir.join("zfplus.axioms.json");
    let (code, _, err) = run(gst().arg("combine").arg(data("zfplus.spec")).arg("-o").arg(&out));
    assert_eq!(code, 0, "{err}");
    out
}

#[test]
fn combine_writes_the_zfplus_axiom_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let (code, _, err) = run(gst().arg("combine").arg(data("zfplus.spec")).arg("-o").arg(&out));
    assert_eq!(code, 0);
    assert!(err.contains("24 axioms (otherwise 9, disjoint 6, cover 1, admit 4, restrict 4), 4 defs"), "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["axioms"].as_array().unwrap().len(), 24);
    assert_eq!(v["defs"].as_array().unwrap().len(), 4);
    let shown = v.to_string();
    assert!(shown.contains("(∀ (b1) (→ (¬ (: b1 Fun)) (= (dom b1) •)))"), "{shown}");

    let (code, stdout, _) = run(gst().arg("combine").arg(data("zfplus.spec")));
    assert_eq!(code, 0);
    assert_eq!(stdout, std::fs::read_to_string(&out).unwrap());

    let (code, stdout, _) = run(gst().args(["combine", "--policy", "never"]).arg(data("zfplus.spec")));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["axioms"].as_array().unwrap().len(), 15);
}

#[test]
fn bad_specs_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.spec");
    std::fs::write(&empty, "[]").unwrap();
    let (code, _, err) = run(gst().arg("combine").arg(&empty));
    assert_eq!(code, 2);
    assert!(err.contains("empty"), "{err}");

    let unknown = dir.path().join("unknown.spec");
    std::fs::write(&unknown, r#"[{"feature": "Quaternion", "default": "•"}]"#).unwrap();
    let (code, _, err) = run(gst().arg("combine").arg(&unknown));
    assert_eq!(code, 2);
    assert!(err.contains("Quaternion"), "{err}");

    let (code, _, _) = run(gst().arg("combine").arg(dir.path().join("missing.spec")));
    assert_eq!(code, 2);
}

fn check_json(args: &[&str], axioms: &Path) -> (i32, Value, String) {
    let (code, out, err) = run(gst().arg("check").arg(axioms).args(args));
    let v = serde_json::from_str(&out).unwrap_or(Value::Null);
    (code, v, err)
}

fn verdicts(v: &Value) -> Vec<(String, String)> {
    v["check"]["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["provenance"].as_str().unwrap().to_owned(), r["verdict"].as_str().unwrap().to_owned()))
        .collect()
}

#[test]
fn check_reports_every_item_and_exits_one_on_the_admit_failures() {
    let dir = tempfile::tempdir().unwrap();
    let axioms = combined(dir.path());
    let (code, v, err) = check_json(&[], &axioms);
    assert_eq!(code, 1, "{err}");
    let s = &v["check"]["summary"];
    assert_eq!((s["holds"].as_u64(), s["fails"].as_u64()), (Some(66), Some(2)));
    assert_eq!(s["unchecked_infinite"].as_u64(), Some(6));
    assert_eq!(v["check"]["domain_size"].as_u64(), Some(36));
    let failing: Vec<_> = verdicts(&v).into_iter().filter(|(_, x)| x == "fails").map(|(p, _)| p).collect();
    assert_eq!(failing, ["admit Ordinal", "admit Exc"]);
    for (p, x) in verdicts(&v) {
        if p.contains("Inf") {
            assert_ne!(x, "fails");
        }
    }
    assert!(err.contains("examples ok"), "{err}");

    // Byte-identical output for identical inputs.
    let a = run(gst().arg("check").arg(&axioms).args(["--seed", "5"])).1;
    let b = run(gst().arg("check").arg(&axioms).args(["--seed", "5"])).1;
    assert_eq!(a, b);
}

#[test]
fn depth_one_runs_with_the_same_verdict_classes() {
    let dir = tempfile::tempdir().unwrap();
    let axioms = combined(dir.path());
    let (_, deep, _) = check_json(&[], &axioms);
    let (code, shallow, err) = check_json(&["--depth", "1"], &axioms);
    assert_eq!(code, 1, "{err}");
    assert_eq!(shallow["check"]["domain_size"].as_u64(), Some(2));
    assert_eq!(verdicts(&shallow), verdicts(&deep));
}

#[test]
fn a_corrupted_axiom_fails() {
    let dir = tempfile::tempdir().unwrap();
    let axioms = combined(dir.path());
    let text = std::fs::read_to_string(&axioms).unwrap();
    let good = "(= (⊓ Set Ord) ⊥)";
    assert!(text.contains(good), "{text}");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, text.replace(good, "(= (⊓ Set Set) ⊥)")).unwrap();
    let (code, v, _) = check_json(&[], &bad);
    assert_eq!(code, 1);
    let failing: Vec<_> = verdicts(&v).into_iter().filter(|(_, x)| x == "fails").map(|(p, _)| p).collect();
    assert_eq!(failing, ["disjoint", "admit Ordinal", "admit Exc"]);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(run(gst().arg("check").arg(&garbage)).0, 2);
}

#[test]
fn translate_prints_axioms_and_closure_goals() {
    let (code, out, err) = run(gst().args(["translate", "GZF", "--morphism"]).arg(data("mgzf.map")));
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().any(|l| l == "(∀ (b : 𝕄) (¬ (∈̄ b ∅̄)))"), "{out}");
    assert!(out.lines().any(|l| l == "(∀ (x : 𝕄) (: (𝒫̄ x) 𝕄))"), "{out}");
    let (axioms, goals) = out.split_once("; respectfulness\n").unwrap();
    assert_eq!(axioms.lines().count(), 1 + 13);
    assert_eq!(goals.lines().count(), 6);

    let dir = tempfile::tempdir().unwrap();
    let partial = dir.path().join("partial.map");
    let src = std::fs::read_to_string(data("mgzf.map")).unwrap();
    std::fs::write(&partial, src.lines().filter(|l| !l.starts_with("Repl ")).collect::<Vec<_>>().join("\n"))
        .unwrap();
    let (code, _, err) = run(gst().args(["translate", "GZF", "--morphism"]).arg(&partial));
    assert_eq!(code, 2);
    assert!(err.contains("'Repl'"), "{err}");

    let (code, _, err) = run(gst().args(["translate", "Nonesuch"]));
    assert_eq!(code, 2);
    assert!(err.contains("Nonesuch"), "{err}");
}

#[test]
fn examples_and_model_dump() {
    let (code, out, _) = run(gst().arg("eval-examples"));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["ok"] == Value::Bool(true)));

    let (code, out, _) = run(gst().args(["dump-model", "--depth", "3"]));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let sizes: Vec<u64> = v["tiers"].as_array().unwrap().iter().map(|t| t["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [1, 2, 5, 36]);
}

#[test]
fn usage_errors_and_the_size_guard_exit_two() {
    assert_eq!(run(&mut gst()).0, 2);
    assert_eq!(run(gst().args(["dump-model", "--depth", "0"])).0, 2);
    assert_eq!(run(gst().args(["check", "x.json", "--unary-bound", "0"])).0, 2);
    assert_eq!(run(gst().arg("frobnicate")).0, 2);
    let (code, _, err) = run(gst().args(["dump-model", "--depth", "3"]).env("GST_MAX_SET_SIZE", "3"));
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}
