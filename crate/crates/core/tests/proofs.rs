use std::path::PathBuf;

use qutrit_zx::rewrite::derivations::derivations;
use qutrit_zx::rewrite::{replay, ProofScript, RuleName};

fn proofs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../proofs")
}

fn shipped() -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(proofs_dir())
        .expect("proofs directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn shipped_scripts_replay() {
    let files = shipped();
    assert!(!files.is_empty());
    for (name, text) in &files {
        let script = ProofScript::from_json(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let report = replay(&script).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(report.max_residual <= 1e-9, "{name}");
    }
}

#[test]
fn shipped_scripts_cover_every_derived_rule() {
    let derived: Vec<RuleName> =
        shipped().iter().map(|(_, t)| ProofScript::from_json(t).unwrap().derives).collect();
    for r in [RuleName::ID, RuleName::H2, RuleName::H4, RuleName::SX, RuleName::P1Prime, RuleName::P2Prime, RuleName::EUPrime] {
        assert!(derived.contains(&r), "no script derives {r}");
    }
}

#[test]
fn shipped_scripts_match_generator() {
    let files = shipped();
    for script in derivations().unwrap() {
        let file = format!("{}.json", script.name.replace('\'', "prime"));
        let (_, text) = files.iter().find(|(n, _)| *n == file).unwrap_or_else(|| panic!("missing {file}"));
        assert_eq!(text.trim_end(), script.to_json(), "{file} is out of date");
    }
}

#[test]
fn tampered_script_fails() {
    let (_, text) = shipped().into_iter().find(|(n, _)| n == "H4.json").unwrap();
    let mut script = ProofScript::from_json(&text).unwrap();
    script.steps.pop();
    assert!(replay(&script).is_err());
}
