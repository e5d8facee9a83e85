//! Cross-checks against slow, independent reference computations.

use std::collections::{BTreeMap, HashSet};

use axtrans::calculus::Calculus;
use axtrans::fixtures;
use axtrans::independence::{verify_independence, Semantics, VerifyConfig};
use axtrans::semantics::{classically_valid, true_star, GeneralizedModel};
use axtrans::syntax::{enumerate_formulas, predicted_totals, Binding, Formula, PropVar, Schema, Signature, Var};

/// Formulas of depth `<= d`, counted by the obvious recursion.
fn count(leaves: u128, unary: u128, binary: u128, binders: u128, d: usize) -> u128 {
    if d == 0 {
        return leaves;
    }
    let prev = count(leaves, unary, binary, binders, d - 1);
    leaves + unary * prev + binary * prev * prev + binders * prev
}

#[test]
fn enumeration_matches_recursive_count() {
    let cases: Vec<(Signature, u32, [u128; 4])> = vec![
        (Signature::propositional(&["not", "imp"]).unwrap(), 2, [2, 1, 1, 0]),
        (Signature::propositional(&["not", "and", "or", "bot"]).unwrap(), 1, [2, 1, 2, 0]),
        (fixtures::bs_system().sig, 1, [1, 1, 1, 1]),
        (fixtures::bs_system().sig, 2, [2, 1, 1, 2]),
    ];
    for (sig, vars, [l, u, b, q]) in cases {
        for d in 0..=3 {
            let fs = enumerate_formulas(&sig, d, vars).unwrap();
            let expected = count(l, u, b, q, d);
            assert_eq!(fs.len() as u128, expected, "depth {d} over {}", sig.describe_primitives());
            assert_eq!(predicted_totals(&sig, d, vars)[d], expected);
            assert!(fs.iter().all(|f| f.depth() <= d));
            assert_eq!(fs.iter().collect::<HashSet<_>>().len(), fs.len(), "duplicates at depth {d}");
        }
    }
}

fn truth(f: &Formula, val: &BTreeMap<PropVar, bool>) -> bool {
    match f {
        Formula::Prop(p) => val[p],
        Formula::Conn(c, a) => match c.name() {
            "not" => !truth(&a[0], val),
            "and" => truth(&a[0], val) && truth(&a[1], val),
            "or" => truth(&a[0], val) || truth(&a[1], val),
            "imp" => !truth(&a[0], val) || truth(&a[1], val),
            "top" => true,
            "bot" => false,
            other => panic!("{other}"),
        },
        _ => unreachable!(),
    }
}

fn tautology(f: &Formula) -> bool {
    let ps: Vec<PropVar> = f.prop_vars().into_iter().collect();
    (0..1u32 << ps.len()).all(|bits| {
        let val = ps.iter().enumerate().map(|(i, p)| (*p, bits >> i & 1 == 1)).collect();
        truth(f, &val)
    })
}

#[test]
fn validity_agrees_with_truth_tables() {
    let cases = [
        (Signature::propositional(&["not", "imp"]).unwrap(), 4, 1),
        (Signature::propositional(&["not", "and", "or", "imp", "bot"]).unwrap(), 2, 2),
    ];
    let mut tautologies = 0;
    for (sig, depth, props) in cases {
        for f in enumerate_formulas(&sig, depth, props).unwrap() {
            let t = tautology(&f);
            tautologies += t as usize;
            assert_eq!(classically_valid(&f, 1).unwrap(), t, "{f}");
        }
    }
    assert!(tautologies > 100);
}

#[test]
fn every_mp_instance_to_depth_three_preserves_designation() {
    let c = fixtures::bs_system();
    let m = fixtures::prop1_model();
    let fillers = enumerate_formulas(&c.sig, 3, 1).unwrap();
    let values: Vec<_> = fillers.iter().map(|f| m.value_1var(f).unwrap()).collect();
    let mut checked = 0u64;
    for (a, &va) in fillers.iter().zip(&values) {
        if !m.is_designated(va) {
            continue;
        }
        for (b, &vb) in fillers.iter().zip(&values) {
            if m.is_designated(m.value_1var(&Formula::imp(a.clone(), b.clone())).unwrap()) {
                assert!(m.is_designated(vb), "MP from {a} and {a} -> {b}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

/// Every instance of `schema` with fillers from `fillers` and variables from `vars`.
fn instances(schema: &Schema, fillers: &[Formula], vars: &[Var], mut visit: impl FnMut(Formula)) {
    let metas = schema.template.metas();
    let var_metas = schema.template.var_metas();
    let total = fillers.len().pow(metas.len() as u32) * vars.len().pow(var_metas.len() as u32);
    for mut idx in 0..total {
        let mut b = Binding::new();
        for m in &metas {
            b = b.with_formula(m, fillers[idx % fillers.len()].clone());
            idx /= fillers.len();
        }
        for m in &var_metas {
            b = b.with_var(m, vars[idx % vars.len()].0);
            idx /= vars.len();
        }
        if schema.check_side_conditions(&b).is_ok() {
            visit(schema.instantiate(&b).unwrap());
        }
    }
}

fn cross_check(c: &Calculus, m: &GeneralizedModel, star: bool, depth: usize, nvars: u32) {
    let cfg = VerifyConfig {
        instance_depth: depth,
        vars: nvars,
        props: 0,
        ..VerifyConfig::default()
    };
    let sem = if star { Semantics::Star(m) } else { Semantics::Values(m) };
    let report = verify_independence(c, sem, &fixtures::target(), &cfg).unwrap();
    let fillers = enumerate_formulas(&c.sig, depth, nvars).unwrap();
    let vars: Vec<Var> = (1..=nvars).map(Var).collect();
    let mv = m.with_defined_forall().unwrap();
    for (ax, check) in c.axioms.iter().zip(&report.axioms) {
        let mut n = 0u128;
        let mut all = true;
        instances(&ax.schema, &fillers, &vars, |f| {
            n += 1;
            all &= if star {
                true_star(m, &f).unwrap()
            } else {
                mv.is_designated(mv.value_1var(&f).unwrap())
            };
        });
        assert_eq!(check.instances, n, "{} instance count", ax.name);
        assert_eq!(check.passed(), all, "{} verdict", ax.name);
    }
}

#[test]
fn class_sweep_matches_direct_enumeration() {
    let c = fixtures::bs_system();
    cross_check(&c, &fixtures::prop1_model(), false, 2, 1);
    cross_check(&c, &fixtures::prop1_model(), true, 1, 3);
    cross_check(&c, &fixtures::standard_2elt(), true, 1, 2);
}
