use std::path::Path;
use std::process::{Command, Output};

fn subkern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subkern"))
        .args(args)
        .env_remove("SUBKERN_DEFAULT_LOGIC")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn prove_tarskian_d_axiom() {
    let o = subkern(&["prove", "--logic", "mall", "=> <.>top"]);
    assert_eq!(stdout(&o).trim(), "derivable");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bare_formula_goal() {
    let o = subkern(&["prove", "--logic", "mall", "[.](a /\\ b) -> [.]a /\\ [.]b"]);
    assert_eq!(stdout(&o).trim(), "derivable");
    let o = subkern(&["prove", "--logic", "mall", "[.]a /\\ [.]b -> [.](a /\\ b)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn prove_expected_refutation() {
    let o = subkern(&["prove", "--logic", "kmall", "=> <>top", "--expect", "not-derivable"]);
    assert_eq!(stdout(&o).trim(), "not derivable (search exhausted)");
    assert_eq!(o.status.code(), Some(0));
    let o = subkern(&["prove", "--logic", "kmall", "=> <>top", "--expect", "derivable"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn default_logic_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_subkern"))
        .args(["prove", "=> a -> a"])
        .env("SUBKERN_DEFAULT_LOGIC", "mall")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).trim(), "derivable");
    let o = subkern(&["prove", "=> a -> a"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let o = subkern(&["prove", "--logic", "nosuch", "a => a"]);
    assert_eq!(o.status.code(), Some(2));
    let o = subkern(&["prove", "--logic", "mall", "a => (b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grammar"));
    let o = subkern(&["corpus", "--filter", "colour=red"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn emitted_proof_is_accepted_by_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let p = path.to_str().unwrap();
    let o = subkern(&["prove", "--logic", "mall", "[.](a -> b) => [.]a -> [.]b", "--emit-proof", p]);
    assert_eq!(o.status.code(), Some(0));
    let o = subkern(&["check", p]);
    assert_eq!(stdout(&o).trim(), "ok");
    assert_eq!(o.status.code(), Some(0));
    let o = subkern(&["check", p, "--logic", "kmall"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn check_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let bad = serde_json_text("mall", "Ax", "a => b");
    std::fs::write(&path, bad).unwrap();
    let o = subkern(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation"));
}

fn serde_json_text(logic: &str, rule: &str, conclusion: &str) -> String {
    serde_json::json!({"logic": logic, "rule": rule, "conclusion": conclusion, "premises": []}).to_string()
}

fn write_proof(dir: &Path, name: &str, logic: &str, root: serde_json::Value) -> String {
    let path = dir.join(name);
    let mut v = root;
    v["logic"] = serde_json::json!(logic);
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn translate_and_elim_cut_write_checkable_files() {
    let dir = tempfile::tempdir().unwrap();
    let ax = serde_json::json!({"rule": "Ax", "conclusion": "a => a", "premises": []});
    let kbox = serde_json::json!({"rule": "KBox", "conclusion": "[]a => []a", "premises": [ax.clone()]});
    let k = write_proof(dir.path(), "k.json", "kmall", kbox.clone());
    let out = dir.path().join("t.json");
    let o = subkern(&["translate", &k, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = subkern(&["check", out.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "ok");
    let o = subkern(&["render", "--proof", out.to_str().unwrap(), "--style", "ascii"]);
    assert!(stdout(&o).starts_with("[.]a => [.]a"));

    let cut = serde_json::json!({"rule": "Cut", "conclusion": "[]a => []a", "premises": [kbox.clone(), kbox]});
    let c = write_proof(dir.path(), "c.json", "kmall+cut", cut);
    let out = dir.path().join("e.json");
    let o = subkern(&["elim-cut", &c, "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains("\"Cut\""));
    let o = subkern(&["check", out.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "ok");

    // Translation refuses cuts.
    let o = subkern(&["translate", &c]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn corpus_iul_table() {
    let o = subkern(&["corpus", "--filter", "logic=iul"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("7/7 entries passed"), "{out}");
}

#[test]
fn corpus_json_report() {
    let o = subkern(&["corpus", "--filter", "logic=kmall", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert_eq!(r["expected"], r["actual"]);
        assert!(r["millis"].is_u64());
    }
}

#[test]
fn render_and_parse() {
    let o = subkern(&["render", "a + b -> <.>c", "--style", "unicode"]);
    assert_eq!(stdout(&o).trim(), "a ⊕ b → ◇\u{307}c");
    let o = subkern(&["render", "a, b => [.]c", "--style", "ascii"]);
    assert_eq!(stdout(&o).trim(), "a, b => [.]c");
    let o = subkern(&["parse", "a => b | c =>"]);
    assert_eq!(stdout(&o).trim(), "hypersequent of 2 components: a => b | c =>");
    let o = subkern(&["parse", "~(a * b)"]);
    assert!(stdout(&o).starts_with("formula ~(a * b)"));
}
