//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use axtrans::calculus::{closure_bounded, is_theorem_bounded, translate_calculus, ClosureConfig, TheoremSearch};
use axtrans::fixtures::{self, golden};
use axtrans::independence::{
    audit_axiom_tables, evaluation_chain, search_matrix, verify_independence, MatrixSearch, Semantics, VerifyConfig,
};
use axtrans::semantics::{classically_valid, find_countermodel, monadic_bound, true_star, Matrix, Subset};
use axtrans::syntax::{enumerate_formulas, parse, Binding, Formula, PropVar, Signature};
use axtrans::translation::{injective_up_to, surjective_up_to, ImageConfig};
use axtrans::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        passed,
        detail: detail.into(),
    })
}

/// Proposition 1 values, tables and chain.
fn prop1() -> Result<Outcome> {
    let (c, m, t) = (fixtures::bs_system(), fixtures::prop1_model(), fixtures::target());
    let report = verify_independence(&c, Semantics::Values(&m), &t, &VerifyConfig::default())?;
    let axioms = report.axioms.iter().all(|a| a.passed()) && report.instance_depth == 3;

    let tables = audit_axiom_tables(&m)?;
    let a4_all_a = tables.a4.rows.iter().flat_map(|(_, r)| r.iter().flatten()).all(|c| c == "A");
    let a4 = tables.a4_text() == golden::A4_TABLE;
    let a5 = tables.a5_text() == golden::A5_TABLES;

    let chain = evaluation_chain(&m, &t)?;
    let paper_tail = ["f*imp(A, f*exists(f*not({u})))", "f*imp(A, f*exists({}))", "f*imp(A, {})", "{}"];
    let chain_ok = chain[1..] == paper_tail && m.value_1var(&t)? == Subset::EMPTY;

    let mut diffs = Vec::new();
    if !a5 {
        diffs.extend(axtrans::independence::diff_lines(golden::A5_TABLES, &tables.a5_text()));
    }
    outcome(
        axioms && a4_all_a && a4 && a5 && chain_ok,
        format!(
            "(a) axioms {axioms}, (b) A4 all-A {a4_all_a}, A4 golden {a4}, A5 golden {a5}, (c) chain {chain_ok} {}",
            diffs.join("; ")
        ),
    )
}

fn forall_composition() -> Result<Outcome> {
    let m = fixtures::prop1_model();
    let f = m.compose_forall()?;
    let d = &m.domain;
    let paper = [("{u,v}", "{u}"), ("{u}", "{u}"), ("{v}", "{}"), ("{}", "{}")];
    let mut ok = true;
    for (x, y) in paper {
        ok &= f.get(&[d.parse_subset(x)?]) == d.parse_subset(y)?;
    }
    outcome(ok, "f*forall = {u}, {u}, {}, {}")
}

fn prop2() -> Result<Outcome> {
    let (c, m, t) = (fixtures::bs_system(), fixtures::prop1_model(), fixtures::target());
    let cfg = VerifyConfig {
        instance_depth: 3,
        vars: 3,
        ..VerifyConfig::default()
    };
    let r = verify_independence(&c, Semantics::Star(&m), &t, &cfg)?;
    let axioms = r.axioms.iter().all(|a| a.passed());
    let rules = r.rules.iter().all(|a| a.passed());
    let target = !true_star(&m, &t)?;
    let instances: u128 = r.axioms.iter().chain(&r.rules).map(|c| c.instances).sum();
    outcome(
        axioms && rules && target,
        format!("axioms {axioms}, rules {rules}, target not true* {target}, {instances} instances"),
    )
}

fn truth(f: &Formula, val: &std::collections::BTreeMap<PropVar, bool>) -> bool {
    match f {
        Formula::Prop(p) => val[p],
        Formula::Conn(c, a) => match c.name() {
            "not" => !truth(&a[0], val),
            "imp" => !truth(&a[0], val) || truth(&a[1], val),
            other => panic!("{other}"),
        },
        _ => unreachable!(),
    }
}

fn classical_oracle() -> Result<Outcome> {
    let sig = Signature::permissive();
    let valid = |f: &Formula| classically_valid(f, monadic_bound(f));
    let target = valid(&fixtures::target())?;

    let bs = fixtures::bs_system();
    let fillers = enumerate_formulas(&bs.sig, 1, 2)?;
    let mut schemas = 0;
    let mut all_valid = true;
    for name in ["A4", "A5"] {
        let schema = &bs.axiom(name).expect("axiom").schema;
        for phi in &fillers {
            for psi in &fillers {
                for x in 1..=2 {
                    let b = Binding::new()
                        .with_formula("Phi", phi.clone())
                        .with_formula("Psi", psi.clone())
                        .with_var("x", x);
                    if schema.check_side_conditions(&b).is_ok() {
                        all_valid &= valid(&schema.instantiate(&b)?)?;
                        schemas += 1;
                    }
                }
            }
        }
    }

    let e = parse("exists x1. P(x1)", &sig)?;
    let g = parse("~exists x1. ~P(x1) -> exists x1. ~P(x1)", &sig)?;
    let e_cm = find_countermodel(&e, monadic_bound(&e))?;
    let g_cm = find_countermodel(&g, monadic_bound(&g))?;
    let fixtures_ok = matches!(&e_cm, Some(cm) if cm.structure.size == 1 && cm.structure.predicates.values().all(|&p| p == 0))
        && matches!(&g_cm, Some(cm) if cm.structure.size == 1 && cm.structure.predicates.values().all(|&p| p == 1));

    let props = Signature::propositional(&["not", "imp"])?;
    let mut agree = true;
    let formulas = enumerate_formulas(&props, 4, 1)?;
    for f in &formulas {
        let tt = [false, true].iter().all(|&b| truth(f, &[(PropVar(1), b)].into_iter().collect()));
        agree &= classically_valid(f, 1)? == tt;
    }
    outcome(
        target && all_valid && fixtures_ok && agree,
        format!(
            "target {target}, {schemas} A4/A5 instances valid {all_valid}, fixtures {fixtures_ok}, truth tables agree on {} formulas {agree}",
            formulas.len()
        ),
    )
}

fn consistency() -> Result<Outcome> {
    let (c, m, t) = (fixtures::bs_system(), fixtures::prop1_model(), fixtures::target());
    let r = verify_independence(&c, Semantics::Values(&m), &t, &VerifyConfig::default())?;
    let search = is_theorem_bounded(&c, &t, &ClosureConfig::new(4, 12))?;
    let detail = match &search {
        TheoremSearch::Yes(p) => format!("bounded search PROVED the target:\n{p}"),
        TheoremSearch::Unknown {
            rounds,
            theorems,
            saturated,
        } => {
            format!("UNKNOWN after {rounds} rounds, {theorems} theorems, saturated {saturated}")
        }
    };
    outcome(
        r.is_independent() && !search.is_yes(),
        format!("independent {}, {detail}", r.is_independent()),
    )
}

fn frank() -> Result<Outcome> {
    let cfg = ImageConfig::default();
    let s = surjective_up_to(&fixtures::identity_bot(), 3, &cfg)?;
    let surj = s.witness().is_some_and(|w| w.depth() == 0 && *w == Formula::constant("bot"));
    let cl = closure_bounded(&fixtures::top_only_calculus(), &ClosureConfig::new(3, 5))?;
    let top = cl.theorems() == [Formula::constant("top")];
    let inj = injective_up_to(&fixtures::merge_constants(), 1, &cfg)?.witness().is_some();
    outcome(
        surj && top && inj,
        format!("bot witness {surj}, closure {{top}} {top}, collision {inj}"),
    )
}

fn hiz() -> Result<Outcome> {
    let c = translate_calculus(&fixtures::halmos(), &fixtures::hilbert_ackermann())?;
    let t = parse("~(p1 /\\ ~p1)", &c.sig)?;
    let out = search_matrix(
        &c,
        &t,
        &MatrixSearch {
            max_size: 3,
            ..MatrixSearch::default()
        },
    )?;
    let reverified = match &out.found {
        Some(m) => {
            let again = Matrix::from_text("again", &m.to_text())?;
            verify_independence(&c, Semantics::Matrix(&again), &t, &VerifyConfig::default())?.is_independent()
        }
        None => false,
    };
    let boolean = Matrix::boolean(c.sig.connectives.iter().cloned())?;
    let b = verify_independence(&c, Semantics::Matrix(&boolean), &t, &VerifyConfig::default())?;
    let rejected = b.target_designated && !b.is_independent();
    outcome(
        reverified && rejected,
        format!(
            "found size {:?} re-verified {reverified}, Boolean rejected {rejected}",
            out.found.as_ref().map(|m| m.size)
        ),
    )
}

fn replacement() -> Result<Outcome> {
    let m = fixtures::prop1_model();
    let sig = Signature::permissive();
    let p = parse("P(x1)", &sig)?;
    let nnp = parse("~~P(x1)", &sig)?;
    let values = m.value_1var(&p)? == Subset(0b10) && m.value_1var(&nnp)? == Subset::EMPTY;
    let mut valid = true;
    for f in [Formula::imp(p.clone(), nnp.clone()), Formula::imp(nnp, p)] {
        valid &= classically_valid(&f, monadic_bound(&f))?;
    }
    outcome(values && valid, format!("{{v}} vs {{}} {values}, both directions valid {valid}"))
}

fn main() {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(&str, &str, Check, Duration); 8] = [
        ("1", "Proposition 1 reproduction", prop1, Duration::from_secs(10)),
        ("2", "forall composition", forall_composition, Duration::from_secs(1)),
        ("3", "Proposition 2 reproduction", prop2, Duration::from_secs(60)),
        ("4", "classical validity oracle", classical_oracle, Duration::from_secs(120)),
        ("5", "certification consistency", consistency, Duration::from_secs(600)),
        ("6", "translation fixtures", frank, Duration::from_secs(10)),
        ("7", "separating matrix search", hiz, Duration::from_secs(1800)),
        ("8", "replacement of equivalents", replacement, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && took <= limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += !passed as usize;
        println!(
            "criterion {id} {name}: {} ({:.2}s of {}s) {detail}",
            if passed { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
