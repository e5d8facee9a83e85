use axtrans::cli::{run, EXIT_OK, EXIT_REFUTED, EXIT_RESOURCE_CAP, EXIT_USAGE};
use axtrans::fixtures;
use axtrans::independence::Report;

fn axtrans(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("axtrans").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn valid_target() {
    let (code, out, _) = axtrans(&["valid", "exists x1. P(x1) -> exists x1. ~~P(x1)"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "valid\n"));
    let (code, out, _) = axtrans(&["valid", "exists x1. P(x1)"]);
    assert_eq!(code, EXIT_REFUTED);
    assert!(out.starts_with("not valid\ncountermodel: domain size 1"), "{out}");
}

#[test]
fn verify_independence_from_fixture_names() {
    let (code, out, err) = axtrans(&["verify-independence", "bs_system.calc", "prop1_model.gmodel", "target.fml"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.starts_with("INDEPENDENT\n"));
    let (code, out, _) = axtrans(&["verify-independence", "bs_system.calc", "standard_2elt.gmodel", "target.fml"]);
    assert_eq!(code, EXIT_REFUTED);
    assert!(out.starts_with("NOT CERTIFIED: target is designated"));
}

#[test]
fn files_on_disk_take_precedence() {
    let dir = std::env::temp_dir().join(format!("axtrans-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("prop1_model.gmodel");
    std::fs::write(&path, fixtures::text::STANDARD_2ELT).unwrap();
    let (code, _, _) = axtrans(&["verify-independence", "bs_system.calc", path.to_str().unwrap(), "target.fml"]);
    assert_eq!(code, EXIT_REFUTED);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn repro_prop1_prints_tables_and_chain() {
    let (code, out, _) = axtrans(&["repro", "prop1"]);
    assert!(out.contains("table f*imp(f*forall(A(phi)), A(phi))"));
    assert!(out.contains("f*imp(A, f*exists(f*not({u})))\nf*imp(A, f*exists({}))\nf*imp(A, {})\n{}\n"));
    assert!(out.contains("[PASS] evaluation chain"));
    let all_pass = !out.contains("[FAIL]");
    assert_eq!(code, if all_pass { EXIT_OK } else { EXIT_REFUTED });
}

#[test]
fn exit_codes() {
    assert_eq!(axtrans(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(axtrans(&["parse", "p1 ->"]).0, EXIT_USAGE);
    assert_eq!(axtrans(&["check-proof", "missing.calc", "x.proof"]).0, EXIT_USAGE);
    let (code, _, err) = axtrans(&[
        "valid",
        "exists x1. (P(x1) /\\ Q(x1) /\\ R(x1)) -> exists x1. P(x1)",
        "--max-domain",
        "16",
    ]);
    assert_eq!(code, EXIT_RESOURCE_CAP, "{err}");
    let (code, out, _) = axtrans(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify-independence"));
}

#[test]
fn proofs_and_theorems() {
    let (code, out, _) = axtrans(&["check-proof", "prop_a1a3.calc", "identity.proof"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "accepted (5 steps)\n"));
    let (code, out, _) = axtrans(&["prove", "prop_a1a3.calc", "p1 -> p1", "--depth", "4", "--steps", "2", "--vars", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("YES\n"));
    let (code, out, _) = axtrans(&["prove", "prop_a1a3.calc", "p1", "--depth", "2", "--steps", "2"]);
    assert_eq!(code, EXIT_REFUTED);
    assert!(out.starts_with("UNKNOWN"));
    let (_, out, _) = axtrans(&["closure", "top_only.calc"]);
    assert_eq!(out, "1 theorems after 1 rounds (saturated)\ntop\n");
}

#[test]
fn translate_and_eval() {
    let (_, out, _) = axtrans(&["translate", "halmos.trans", "p1 \\/ p2"]);
    assert_eq!(out, "~(~p1 /\\ ~p2)\n");
    let (_, out, _) = axtrans(&["translate", "identity_bot.trans", "--depth", "2"]);
    assert!(out.starts_with("not surjective: bot (depth 0)"));
    let (_, out, _) = axtrans(&["eval", "generalized", "prop1_model.gmodel", "target.fml"]);
    assert_eq!(out, "{}\n");
    let (_, out, _) = axtrans(&["eval", "standard", "prop1_model.gmodel", "target.fml"]);
    assert_eq!(out, "{u,v} (designated)\n");
    let (_, out, _) = axtrans(&["eval", "star", "prop1_model.gmodel", "target.fml"]);
    assert_eq!(out, "[] {}\nnot true*\n");
}

#[test]
fn structured_output_round_trips() {
    let args = [
        "--format",
        "json",
        "verify-independence",
        "bs_system.calc",
        "prop1_model.gmodel",
        "target.fml",
        "--depth",
        "2",
    ];
    let (code, out, _) = axtrans(&args);
    assert_eq!(code, EXIT_OK);
    let report = Report::from_json(&out).unwrap();
    assert!(report.is_independent());
    assert_eq!(report.to_json() + "\n", out);
}

#[test]
fn same_config_same_bytes() {
    let args = [
        "--format",
        "json",
        "--seed",
        "11",
        "--workers",
        "2",
        "search-model",
        "bs_system.calc",
        "target.fml",
        "--strategy",
        "random",
        "--samples",
        "20",
        "--depth",
        "2",
    ];
    let first = axtrans(&args);
    let second = axtrans(&args);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    assert!(v["space"].as_str().unwrap().contains("seed 11"));
}

#[test]
fn matrix_search_round_trips() {
    let args = [
        "search-matrix",
        "hilbert_ackermann.calc",
        "~(p1 /\\ ~p1)",
        "--translate",
        "halmos.trans",
    ];
    let (code, out, _) = axtrans(&args);
    assert_eq!(code, EXIT_OK);
    let text = out.split_once('\n').unwrap().1;
    let dir = std::env::temp_dir().join(format!("axtrans-matrix-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("found.matrix");
    std::fs::write(&path, text).unwrap();
    let calc = dir.join("translated.calc");
    let (_, translated, _) = axtrans(&["translate", "halmos.trans", "--calculus", "hilbert_ackermann.calc"]);
    std::fs::write(&calc, translated).unwrap();
    let (code, out, err) = axtrans(&[
        "verify-independence",
        calc.to_str().unwrap(),
        path.to_str().unwrap(),
        "~(p1 /\\ ~p1)",
    ]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}
