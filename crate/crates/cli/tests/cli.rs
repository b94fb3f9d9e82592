use std::path::PathBuf;
use std::process::{Command, Output};

use beldef_cli::analyze::Analysis;
use beldef_cli::oracle::OracleRun;
use beldef_cli::query::{Comparison, Engine, QueryResult, Verdict};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn beldef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beldef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn entail(kb: &str, engine: &str, alpha: &str, beta: &str) -> QueryResult {
    let out = beldef(&["entail", "--kb", &fixture(kb), "--engine", engine, alpha, beta, "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("query result")
}

fn compare(kb: &str, alpha: &str, beta: &str) -> Comparison {
    let out = beldef(&["compare", "--kb", &fixture(kb), alpha, beta, "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("comparison")
}

fn verdict_of(c: &Comparison, engine: Engine) -> Verdict {
    c.results.iter().find(|r| r.engine == engine).expect("engine present").verdict
}

#[test]
fn penguin_lcd_entails_not_flying() {
    let out = beldef(&["entail", "--kb", &fixture("penguin.kb"), "--engine", "lcd", "b & p", "!f"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: entailed"), "{text}");
    assert!(text.contains("classes: ξ0 = {e1}; ξ1 = {e2, e3}"), "{text}");
}

#[test]
fn z_ignores_an_irrelevant_new_atom() {
    let r = entail("penguin.kb", "z", "b & r", "f");
    assert_eq!(r.verdict, Verdict::Entailed);
    let levels = r.diagnostics.levels.expect("ranks reported");
    assert_eq!((levels.with_beta, levels.without_beta), (Some(0), Some(1)));
}

#[test]
fn inconsistent_base_exits_with_two() {
    let kb = fixture("inconsistent.kb");
    for args in [
        vec!["entail", "--kb", &kb, "--engine", "z", "a", "b"],
        vec!["entail", "--kb", &kb, "--engine", "lcd", "a", "b"],
        vec!["compare", "--kb", &kb, "a", "b"],
        vec!["oracle", "--kb", &kb],
    ] {
        let out = beldef(&args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("inconsistent"));
    }
}

#[test]
fn usage_and_parse_errors_exit_with_one() {
    let kb = fixture("penguin.kb");
    let missing = fixture("no-such.kb");
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.kb");
    std::fs::write(&broken, "atoms: a b\na ~> \n").unwrap();
    let broken = broken.to_string_lossy().into_owned();
    for args in [
        vec!["entail", "--kb", &kb, "--engine", "q", "b", "f"],
        vec!["entail", "--kb", &kb, "b", "f"],
        vec!["entail", "--kb", &kb, "--engine", "z", "b &", "f"],
        vec!["entail", "--kb", &missing, "--engine", "z", "b", "f"],
        vec!["entail", "--kb", &broken, "--engine", "z", "a", "b"],
        vec!["entail", "--kb", &kb, "--engine", "z", "b", "f", "--max-atoms", "2"],
        vec!["oracle", "--kb", &kb, "--eps", "3/2"],
        vec!["oracle", "--kb", &kb, "--eps", "zero"],
        vec!["oracle"],
        vec!["frobnicate"],
    ] {
        assert_eq!(code(&beldef(&args)), 1, "{args:?}");
    }
    assert_eq!(code(&beldef(&["--help"])), 0);
}

#[test]
fn query_atoms_extend_the_vocabulary() {
    let r = entail("penguin.kb", "lcd", "b & r", "f");
    assert_eq!(r.verdict, Verdict::Entailed);
    assert!(r.diagnostics.witness_worlds.iter().all(|w| w.ends_with(" r")));
}

#[test]
fn compare_matrix_on_the_divergent_fixtures() {
    let legs = compare("legs.kb", "p", "l");
    assert_eq!(verdict_of(&legs, Engine::Z), Verdict::NotEntailed);
    assert_eq!(verdict_of(&legs, Engine::Lcd), Verdict::Entailed);

    let wings = compare("wings.kb", "b & p & m", "!f");
    assert_eq!(verdict_of(&wings, Engine::Z), Verdict::Entailed);
    assert!(!verdict_of(&wings, Engine::Lcd).is_entailed());

    let quaker = compare("quaker2.kb", "q & r", "pa");
    assert_eq!(verdict_of(&quaker, Engine::Lex), Verdict::Entailed);
    assert_eq!(verdict_of(&quaker, Engine::Lcd), Verdict::NotEntailedAmbiguous);
}

#[test]
fn compare_text_lists_every_engine() {
    let out = beldef(&["compare", "--kb", &fixture("legs.kb"), "p", "l"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for e in Engine::ALL {
        assert!(text.lines().any(|l| l.starts_with(&format!("{}:", e.name()))), "{text}");
    }
    assert!(text.lines().any(|l| l.starts_with("z:") && l.contains(" no ")));
    assert!(text.lines().any(|l| l.starts_with("lcd:") && l.contains(" yes ")));
}

const QUERIES: &[(&str, &str, &str)] = &[
    ("penguin.kb", "b & p", "!f"),
    ("penguin.kb", "p", "b"),
    ("penguin.kb", "b & r", "f"),
    ("legs.kb", "p", "l"),
    ("legs.kb", "b & !f", "l"),
    ("wings.kb", "b & p & m", "!f"),
    ("wings.kb", "m", "f"),
    ("quaker2.kb", "q & r", "pa"),
    ("quaker2.kb", "q", "pa"),
    ("ecologist.kb", "q & e & r", "pa"),
    ("nixon.kb", "q & r", "pa"),
    ("empty.kb", "a", "b"),
    ("single.kb", "a", "b"),
    ("single.kb", "a & b", "a"),
];

#[test]
fn compare_agrees_with_individual_runs() {
    for &(kb, alpha, beta) in QUERIES {
        let c = compare(kb, alpha, beta);
        assert_eq!(c.results.len(), 6);
        for (r, e) in c.results.iter().zip(Engine::ALL) {
            assert_eq!(r.engine, e);
            assert_eq!(*r, entail(kb, e.name(), alpha, beta), "{kb} {alpha} |~ {beta}");
        }
    }
}

#[test]
fn refined_verdicts_only_from_lcd() {
    for &(kb, alpha, beta) in QUERIES {
        for r in compare(kb, alpha, beta).results {
            if r.engine != Engine::Lcd {
                assert!(matches!(r.verdict, Verdict::Entailed | Verdict::NotEntailed));
            }
        }
    }
}

#[test]
fn json_output_round_trips() {
    for e in Engine::ALL {
        let out = beldef(&["entail", "--kb", &fixture("wings.kb"), "--engine", e.name(), "b & p & m", "!f", "--format", "json"]);
        let text = stdout(&out);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        for field in ["engine", "alpha", "beta", "verdict", "diagnostics"] {
            assert!(value.get(field).is_some(), "{field} missing");
        }
        let typed: QueryResult = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_value(&typed).unwrap(), value);
    }
    let out = beldef(&["analyze", "--kb", &fixture("legs.kb"), "--format", "json"]);
    let typed: Analysis = serde_json::from_str(&stdout(&out)).unwrap();
    let again: Analysis = serde_json::from_str(&serde_json::to_string(&typed).unwrap()).unwrap();
    assert_eq!(typed, again);
}

#[test]
fn verdict_labels_are_kebab_case() {
    let r = entail("quaker2.kb", "lcd", "q & r", "pa");
    let value = serde_json::to_value(&r).unwrap();
    assert_eq!(value["verdict"], "not-entailed-ambiguous");
    assert_eq!(value["engine"], "lcd");
}

#[test]
fn analyze_prints_the_class_lines() {
    for (kb, line) in [
        ("penguin.kb", "classes: ξ0 = {e1}; ξ1 = {e2, e3}"),
        ("legs.kb", "classes: ξ0 = {e1, e4}; ξ1 = {e2, e3}"),
    ] {
        let out = beldef(&["analyze", "--kb", &fixture(kb)]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).lines().any(|l| l == line), "{kb}");
    }
}

#[test]
fn analyze_penguin_sections() {
    let out = beldef(&["analyze", "--kb", &fixture("penguin.kb"), "--format", "json"]);
    let a: Analysis = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(a.strata, vec![vec![1], vec![2, 3]]);
    assert_eq!(a.lc_chain.len(), 2);
    let lcd = a.lcd.expect("LCD section");
    assert_eq!(lcd.constraints.len(), 3);
    assert_eq!(lcd.classes, vec![vec!["e1".to_string()], vec!["e2".into(), "e3".into()]]);
    assert_eq!(a.worlds.len(), 8);
    let flying_penguin = a.worlds.iter().find(|w| w.world == "b p f").unwrap();
    assert_eq!((flying_penguin.term.as_str(), flying_penguin.rank, flying_penguin.cost), ("e2", Some(2), Some(2)));
}

#[test]
fn analyze_empty_base_ranks_every_world_zero() {
    let out = beldef(&["analyze", "--kb", &fixture("empty.kb"), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let a: Analysis = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(a.strata.is_empty());
    assert_eq!(a.worlds.len(), 4);
    assert!(a.worlds.iter().all(|w| w.rank == Some(0) && w.cost == Some(0) && w.term == "1"));
}

#[test]
fn analyze_inconsistent_base_reports_the_residue() {
    let out = beldef(&["analyze", "--kb", &fixture("inconsistent.kb")]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    assert!(text.contains("strata: inconsistent, residue {1, 2}"), "{text}");
    assert!(!text.contains("classes:"));
}

#[test]
fn oracle_confirms_penguin() {
    let out = beldef(&["oracle", "--kb", &fixture("penguin.kb"), "--eps", "1/100,1/10000", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let run: OracleRun = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(run.passed);
    let base = &run.bases[0];
    assert_eq!(base.rungs.len(), 2);
    assert!(base.rungs.iter().all(|r| r.within_bound && r.refuted.is_empty() && r.confirmed > 0));
}

#[test]
fn oracle_single_rule_trivially_passes() {
    let out = beldef(&["oracle", "--kb", &fixture("single.kb")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("result: PASS"));
}

#[test]
fn oracle_reports_same_order_pairs() {
    let out = beldef(&["oracle", "--kb", &fixture("quaker2.kb")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("e1*e2 ~ e3: no strict numeric separation expected"));
}

#[test]
fn oracle_random_suite_is_seeded() {
    let args = ["oracle", "--random", "5", "--seed", "11", "--eps", "0.01,0.0001", "--format", "json"];
    let first = beldef(&args);
    assert_eq!(code(&first), 0);
    let run: OracleRun = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(run.bases.len(), 5);
    assert_eq!(stdout(&first), stdout(&beldef(&args)));
}
