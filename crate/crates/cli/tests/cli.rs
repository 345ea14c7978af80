use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use morita_cli::document::{load, serialize, Document, Payload};
use morita_core::action::GAction;
use morita_core::bibundle::Bibundle;
use morita_core::functor::InternalFunctor;
use morita_core::group::GroupTable;
use morita_core::groupoid::Groupoid;

fn morita(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morita"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run the binary")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, file: &str, name: &str, payload: Payload) {
    std::fs::write(dir.join(file), serialize(&Document::new(name, payload))).unwrap();
}

fn cyclic(n: usize) -> Arc<Groupoid> {
    Arc::new(Groupoid::from_group(&GroupTable::cyclic(n)))
}

#[test]
fn validate_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "g.json", "g", Payload::Groupoid(Groupoid::trivial(2)));
    let out = morita(dir.path(), &["validate", "g.json", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violations"], serde_json::json!([]));

    let sides = morita_core::biaction::BiAction::from_raw(
        GAction::terminal(Arc::new(Groupoid::trivial(1))),
        GAction::terminal(cyclic(2)),
    )
    .unwrap();
    write(dir.path(), "bad.json", "bad", Payload::Bibundle(sides));
    let out = morita(dir.path(), &["validate", "bad.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("principality"), "{}", stdout(&out));

    assert_eq!(morita(dir.path(), &["validate", "missing.json"]).status.code(), Some(2));
    assert_eq!(morita(dir.path(), &["frobnicate"]).status.code(), Some(2));
    std::fs::write(dir.path().join("junk.json"), "{ not json").unwrap();
    let out = morita(dir.path(), &["validate", "junk.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn morita_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "z2.json", "z2", Payload::Groupoid((*cyclic(2)).clone()));
    write(dir.path(), "z3.json", "z3", Payload::Groupoid((*cyclic(3)).clone()));
    let out = morita(dir.path(), &["morita", "z2.json", "z3.json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: inequivalent") && text.contains("only left") && text.contains("only right"));

    write(dir.path(), "pair.json", "pair", Payload::Groupoid(Groupoid::pair(3)));
    write(dir.path(), "point.json", "point", Payload::Groupoid(Groupoid::trivial(1)));
    let out = morita(dir.path(), &["morita", "pair.json", "point.json", "-o", "eq.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: equivalent"));
    let bundle = load(&dir.path().join("eq.json")).unwrap().into_bibundle().unwrap();
    assert_eq!(bundle.len(), 3);
}

#[test]
fn constructions_write_documents() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = cyclic(2);
    let id = Bibundle::identity(z2.clone());
    write(dir.path(), "id.json", "id", Payload::Bibundle(id.sides().clone()));
    write(dir.path(), "reg.json", "reg", Payload::Action(GAction::arrows_acting(z2.clone())));
    write(dir.path(), "f.json", "f", Payload::Functor(InternalFunctor::identity(z2.clone())));
    for args in [
        vec!["compose", "id.json", "id.json"],
        vec!["pair", "id.json", "id.json"],
        vec!["apply", "id.json", "reg.json"],
        vec!["restrict", "f.json", "reg.json"],
        vec!["induce", "f.json", "reg.json"],
        vec!["invert", "f.json"],
        vec!["reconstruct", "id.json"],
    ] {
        let mut with_output = args.clone();
        with_output.extend(["-o", "out.json"]);
        let out = morita(dir.path(), &with_output);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let doc = load(&dir.path().join("out.json")).unwrap();
        assert!(doc.validate().is_empty(), "{args:?}");
        // same document on standard output
        assert_eq!(stdout(&morita(dir.path(), &args)), std::fs::read_to_string(dir.path().join("out.json")).unwrap());
    }
    assert_eq!(morita(dir.path(), &["semidirect", "out.json", "-o", "k.json"]).status.code(), Some(0));
    let semidirect = load(&dir.path().join("k.json")).unwrap().into_groupoid().unwrap();
    // the two-sided action groupoid: 2 points, 2 arrows on each side
    assert_eq!(semidirect.num_arrows(), 8);

    let out = morita(dir.path(), &["orbits", "reg.json", "--format", "json"]);
    let orbits: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(orbits["orbits"], serde_json::json!([[0, 1]]));

    write(dir.path(), "z2.json", "z2", Payload::Groupoid((*z2).clone()));
    let out = morita(dir.path(), &["points", "z2.json", "2", "-o", "pts.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(load(&dir.path().join("pts.json")).unwrap().into_groupoid().unwrap().num_arrows(), 4);
}

#[test]
fn failures_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = cyclic(2);
    let z3 = cyclic(3);
    let non_equivalence = InternalFunctor::to_terminal(z2.clone());
    write(dir.path(), "f.json", "f", Payload::Functor(non_equivalence));
    let out = morita(dir.path(), &["invert", "f.json", "-o", "out.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("out.json").exists());

    write(dir.path(), "a.json", "a", Payload::Bibundle(Bibundle::identity(z2).into_sides()));
    write(dir.path(), "b.json", "b", Payload::Bibundle(Bibundle::identity(z3).into_sides()));
    std::fs::write(dir.path().join("out.json"), "previous\n").unwrap();
    let out = morita(dir.path(), &["compose", "a.json", "b.json", "-o", "out.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(dir.path().join("out.json")).unwrap(), "previous\n");
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 4);
}

#[test]
fn check_laws_small_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check-laws", "--seed", "7", "--max-arrows", "8", "--cases", "20"];
    let first = morita(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.lines().any(|l| l.starts_with("total: ")), "{text}");
    let mut sequential = args.to_vec();
    sequential.push("--sequential");
    assert_eq!(morita(dir.path(), &sequential).stdout, first.stdout);
}
