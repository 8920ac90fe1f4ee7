use std::process::{Command, Output};

use yamabe::cli::{OutputDocument, Results};
use yamabe::verdict::{Rule, VerdictStatus};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_yamabe")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> OutputDocument {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: OutputDocument = serde_json::from_str(&text).unwrap();
    let again: OutputDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
    doc
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn homology_ranks() {
    let doc = json(&["homology", "Z/3 x Z/3", "--coeff", "Z", "--max-degree", "4"]);
    let Results::Homology { degrees, .. } = doc.results else { panic!() };
    let ranks: Vec<usize> = degrees.iter().map(|r| r.rank).collect();
    assert_eq!(ranks, vec![1, 2, 1, 3, 2]);
    assert_eq!(degrees[0].free_rank, 1);

    let doc = json(&["homology", "Z", "--max-degree", "1"]);
    let Results::Homology { degrees, .. } = doc.results else { panic!() };
    assert!(degrees.iter().all(|r| r.group == "Z"));
}

#[test]
fn poincare_output() {
    let doc = json(&["poincare", "1", "--max-degree", "5"]);
    let Results::Poincare { closed, .. } = doc.results else { panic!() };
    assert_eq!(closed.unwrap(), vec!["1", "1", "0", "1", "0", "1"]);
    let doc = json(&["poincare", "3", "--method", "both"]);
    let Results::Poincare { agree, .. } = doc.results else { panic!() };
    assert_eq!(agree, Some(true));
}

#[test]
fn split_output() {
    let doc = json(&["split", "(Z/3)^3", "--max-degree", "4"]);
    let Results::Split { degrees, .. } = doc.results else { panic!() };
    assert_eq!(degrees.iter().map(|r| r.toral).collect::<Vec<_>>(), vec![1, 3, 3, 1, 0]);
    let doc = json(&["split", "Z/9"]);
    let Results::Split { degrees, .. } = doc.results else { panic!() };
    assert!(degrees.iter().all(|r| r.toral == 0 || r.degree <= 1));
}

#[test]
fn generators_output() {
    let doc = json(&["generators", "Z/5", "--degree", "7"]);
    let Results::Generators { generators, span, .. } = doc.results else { panic!() };
    assert_eq!(generators.len(), 1);
    assert_eq!(span.tally.psc, 1);
    let doc = json(&["generators", "Z/3", "--degree", "2"]);
    let Results::Generators { generators, .. } = doc.results else { panic!() };
    assert!(generators.is_empty());
    let doc = json(&["generators", "(Z/3)^2", "--degree", "3"]);
    let Results::Generators { generators, .. } = doc.results else { panic!() };
    assert!(generators.iter().any(|g| g.generator.generator.is_toda()));
}

#[test]
fn classify_examples() {
    let cases: [(&[&str], VerdictStatus, Rule); 3] = [
        (
            &["classify", "(Z/3)^2", "--dim", "5", "--spin", "nonspin-cover", "--orientable", "yes"],
            VerdictStatus::PscGuaranteed,
            Rule::Thm5_8,
        ),
        (
            &[
                "classify",
                "(Z/3)^5",
                "--dim",
                "5",
                "--spin",
                "nonspin-cover",
                "--orientable",
                "yes",
                "--class",
                "toral",
            ],
            VerdictStatus::OpenToral,
            Rule::Problem5_9,
        ),
        (
            &["classify", "Z/7 x Z/7", "--dim", "6", "--spin", "spin", "--orientable", "yes"],
            VerdictStatus::YamabeNonnegGuaranteed,
            Rule::Thm4_5,
        ),
    ];
    for (args, status, rule) in cases {
        let Results::Classify { verdict, .. } = json(args).results else { panic!() };
        assert_eq!(verdict.status, status);
        assert_eq!(verdict.citations, vec![rule]);
    }
    let table = String::from_utf8(run(cases[0].0).stdout).unwrap();
    assert!(table.contains("citations: [Thm 5.8]"));
}

#[test]
fn toda_bound_output() {
    let Results::TodaBound { bound, certified, .. } =
        json(&["toda-bound", "--n0", "3", "--n1", "3", "--delta", "1e-3"]).results
    else {
        panic!()
    };
    assert!(bound < 1e-3);
    assert_eq!(certified, Some(true));
    let Results::TodaBound { bound, .. } =
        json(&["toda-bound", "--n0", "3", "--n1", "3", "--constants", "1,1,0,0", "--params", "0.5,0.5,1,0"]).results
    else {
        panic!()
    };
    assert_eq!(bound, 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["homology", "Z/5", "--coeff", "Z2"]), 3);
    assert_eq!(code(&["homology", "Z/5 x"]), 2);
    assert_eq!(code(&["poincare", "0"]), 2);
    assert_eq!(code(&["split", "Z/2 x Z/3"]), 3);
    assert_eq!(code(&["classify", "Z/2", "--dim", "5", "--spin", "spin", "--orientable", "no"]), 2);
    assert_eq!(code(&["toda-bound", "--n0", "3", "--n1", "3", "--delta", "0"]), 2);
    assert_eq!(code(&["homology", "Z/4"]), 0);
}

#[test]
fn errors_go_to_stderr() {
    let out = run(&["homology", "Z/"]);
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 2"), "{err}");
}

#[test]
fn version_flag() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains(env!("CARGO_PKG_VERSION")));
}
