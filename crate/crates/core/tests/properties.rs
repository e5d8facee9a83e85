use std::collections::{BTreeMap, BTreeSet};

use axtrans::calculus::{check_proof, closure_bounded, ClosureConfig};
use axtrans::fixtures;
use axtrans::independence::{verify_independence, Report, Semantics, VerifyConfig};
use axtrans::semantics::{find_countermodel, true_star, Domain, GeneralizedModel, Matrix, OperationTable, Structure, Subset};
use axtrans::syntax::{parse, Binding, Connective, Formula, Name, Primitive, PropVar, Signature, Var};
use proptest::prelude::*;
use proptest::strategy::{BoxedStrategy, Union};

#[derive(Clone, Copy)]
struct Shape {
    props: u32,
    vars: u32,
    preds: usize,
    quantifiers: bool,
    and_or: bool,
    constants: bool,
}

const FULL: Shape = Shape {
    props: 2,
    vars: 2,
    preds: 2,
    quantifiers: true,
    and_or: true,
    constants: true,
};

fn formulas(s: Shape) -> BoxedStrategy<Formula> {
    let mut leaves: Vec<BoxedStrategy<Formula>> = Vec::new();
    if s.props > 0 {
        leaves.push((1..=s.props).prop_map(Formula::prop).boxed());
    }
    if s.preds > 0 {
        leaves.push((0..s.preds, 1..=s.vars).prop_map(|(p, v)| Formula::atom(["P", "Q"][p], v)).boxed());
    }
    if s.constants {
        leaves.push(prop_oneof![Just(Formula::constant("bot")), Just(Formula::constant("top"))].boxed());
    }
    Union::new(leaves)
        .prop_recursive(4, 24, 2, move |inner| {
            let mut arms: Vec<BoxedStrategy<Formula>> = vec![
                inner.clone().prop_map(Formula::not).boxed(),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)).boxed(),
            ];
            if s.and_or {
                arms.push((inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)).boxed());
                arms.push((inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)).boxed());
            }
            if s.quantifiers {
                arms.push((1..=s.vars, inner.clone()).prop_map(|(v, b)| Formula::forall(v, b)).boxed());
                arms.push((1..=s.vars, inner.clone()).prop_map(|(v, b)| Formula::exists(v, b)).boxed());
            }
            Union::new(arms)
        })
        .boxed()
}

/// One-variable formulas over `P` with `not`, `imp`, `exists`, `forall`.
fn one_var() -> BoxedStrategy<Formula> {
    formulas(Shape {
        props: 0,
        vars: 1,
        preds: 1,
        quantifiers: true,
        and_or: false,
        constants: false,
    })
}

fn prims(names: &[&str]) -> Vec<Primitive> {
    names.iter().map(|n| Primitive::from_name(n)).collect()
}

/// Two-valued evaluation by direct recursion.
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
            other => panic!("no truth table for {other}"),
        },
        _ => panic!("not propositional: {f}"),
    }
}

fn valuations(props: &BTreeSet<PropVar>) -> Vec<BTreeMap<PropVar, bool>> {
    let ps: Vec<PropVar> = props.iter().copied().collect();
    (0..1u32 << ps.len())
        .map(|bits| ps.iter().enumerate().map(|(i, p)| (*p, bits >> i & 1 == 1)).collect())
        .collect()
}

fn random_model(cells: &[u64], designated: u64) -> GeneralizedModel {
    let domain = Domain::new(&["u", "v"], "u").unwrap();
    let mut next = cells.iter().copied().cycle();
    let mut tables = BTreeMap::new();
    for (name, arity) in [("not", 1), ("imp", 2), ("exists", 1)] {
        let t = OperationTable::from_fn(&domain, arity, |_| Subset(next.next().unwrap() % 4));
        tables.insert(Primitive::from_name(name), t);
    }
    GeneralizedModel {
        name: "random".into(),
        predicates: BTreeMap::from([(Name::from("P"), Subset(0b10))]),
        designated: (0..4).filter(|s| designated >> s & 1 == 1).map(Subset).collect(),
        domain,
        tables,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_then_parsing_is_identity(f in formulas(FULL)) {
        let again = parse(&f.to_string(), &Signature::permissive()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn schema_instances_match_back(a in formulas(FULL), b in formulas(FULL), c in formulas(FULL)) {
        let calc = fixtures::prop_a1a3();
        for ax in &calc.axioms {
            let binding = Binding::new().with_formula("Phi", a.clone()).with_formula("Psi", b.clone()).with_formula("Chi", c.clone());
            let inst = ax.schema.instantiate(&binding).unwrap();
            let found = ax.schema.match_formula(&inst).expect("an instance matches its schema");
            prop_assert_eq!(ax.schema.instantiate(&found).unwrap(), inst);
        }
    }

    #[test]
    fn halmos_translation_preserves_truth(f in formulas(Shape { props: 3, vars: 1, preds: 0, quantifiers: false, and_or: true, constants: false })) {
        let f = strip_and(&f);
        let g = fixtures::halmos().translate(&f).unwrap();
        prop_assert!(g.visit_all(|h| !matches!(h, Formula::Conn(Connective::Or, _))));
        for val in valuations(&f.prop_vars()) {
            prop_assert_eq!(truth(&f, &val), truth(&g, &val));
        }
    }

    #[test]
    fn forall_translation_preserves_satisfaction(
        f in formulas(Shape { props: 0, vars: 2, preds: 1, quantifiers: true, and_or: false, constants: false }),
        ext in 0u64..8,
    ) {
        let f = strip_exists(&f);
        let g = fixtures::forall_as_not_exists_not().translate(&f).unwrap();
        prop_assert_eq!(g.free_vars(), f.free_vars());
        let s = Structure { size: 3, predicates: BTreeMap::from([(Name::from("P"), ext)]), props: BTreeMap::new() };
        for a in 0..3 {
            for b in 0..3 {
                let mut asg = BTreeMap::from([(Var(1), a), (Var(2), b)]);
                prop_assert_eq!(s.satisfies(&f, &mut asg).unwrap(), s.satisfies(&g, &mut asg).unwrap());
            }
        }
    }

    #[test]
    fn standard_values_are_tarskian(
        f in formulas(Shape { props: 0, vars: 1, preds: 2, quantifiers: true, and_or: true, constants: true }),
        n in 1usize..=3,
        p in 0u64..8,
        q in 0u64..8,
    ) {
        let mask = (1u64 << n) - 1;
        let (p, q) = (p & mask, q & mask);
        let domain = Domain::standard(n).unwrap();
        let preds = BTreeMap::from([(Name::from("P"), Subset(p)), (Name::from("Q"), Subset(q))]);
        let m = GeneralizedModel::standard(domain, preds, &prims(&["not", "and", "or", "imp", "bot", "top", "exists", "forall"])).unwrap();
        let s = Structure { size: n, predicates: BTreeMap::from([(Name::from("P"), p), (Name::from("Q"), q)]), props: BTreeMap::new() };
        let expected: u64 = (0..n).filter(|&a| s.satisfies(&f, &mut BTreeMap::from([(Var(1), a)])).unwrap()).map(|a| 1 << a).sum();
        prop_assert_eq!(m.value_1var(&f).unwrap(), Subset(expected));
    }

    #[test]
    fn star_truth_is_designation(f in one_var()) {
        let m = fixtures::prop1_model().with_defined_forall().unwrap();
        let v = m.value_1var(&f).unwrap();
        prop_assert_eq!(true_star(&m, &f).unwrap(), m.is_designated(v), "{} has value {}", f, m.show(v));
    }

    #[test]
    fn rules_preserve_designation_in_prop1(a in one_var(), b in one_var()) {
        let m = fixtures::prop1_model().with_defined_forall().unwrap();
        let d = |f: &Formula| m.is_designated(m.value_1var(f).unwrap());
        if d(&Formula::imp(a.clone(), b.clone())) && d(&a) {
            prop_assert!(d(&b));
        }
        let gen = Formula::not(Formula::exists(1, Formula::not(a.clone())));
        prop_assert!(!d(&a) || d(&gen));
    }

    #[test]
    fn countermodels_falsify(f in formulas(Shape { props: 1, vars: 2, preds: 2, quantifiers: true, and_or: true, constants: true })) {
        if let Some(cm) = find_countermodel(&f, 4).unwrap() {
            let mut asg = cm.assignment.clone();
            prop_assert!(!cm.structure.satisfies(&f, &mut asg).unwrap());
        }
    }

    #[test]
    fn models_round_trip_through_text(cells in prop::collection::vec(0u64..4, 22), designated in 1u64..15) {
        let m = random_model(&cells, designated);
        prop_assert_eq!(GeneralizedModel::from_text("m", &m.to_text()).unwrap(), m);
    }

    #[test]
    fn matrices_round_trip_through_text(size in 2usize..=4, seed in prop::collection::vec(0u8..8, 20), designated in 1u8..15) {
        let mut it = seed.iter().copied().cycle();
        let tables = BTreeMap::from([
            (Connective::Not, (0..size).map(|_| it.next().unwrap() % size as u8).collect()),
            (Connective::Imp, (0..size * size).map(|_| it.next().unwrap() % size as u8).collect()),
        ]);
        let m = Matrix { size, designated: (0..size).map(|i| designated >> i & 1 == 1).collect(), tables };
        prop_assert_eq!(Matrix::from_text("m", &m.to_text()).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn closure_is_monotone_and_certified(depth in 2usize..=3, steps in 0usize..=1) {
        let calc = fixtures::prop_a1a3();
        let small = closure_bounded(&calc, &ClosureConfig::new(depth, steps).vars(1)).unwrap();
        let large = closure_bounded(&calc, &ClosureConfig::new(depth, steps + 1).vars(1)).unwrap();
        for f in small.theorems() {
            prop_assert!(large.contains(f));
        }
        for f in large.theorems() {
            let proof = large.proof(&calc, f).unwrap();
            prop_assert!(check_proof(&calc, &proof).is_accepted());
            prop_assert_eq!(proof.conclusion(), Some(f));
        }
    }

    #[test]
    fn random_models_give_round_trippable_reports(cells in prop::collection::vec(0u64..4, 22), designated in 1u64..15) {
        let m = random_model(&cells, designated);
        let cfg = VerifyConfig { instance_depth: 1, ..VerifyConfig::default() };
        let r = verify_independence(&fixtures::bs_system(), Semantics::Values(&m), &fixtures::target(), &cfg).unwrap();
        prop_assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}

/// Replaces `and` with its classical definition so only `not`/`or` remain.
fn strip_and(f: &Formula) -> Formula {
    match f {
        Formula::Conn(Connective::And, a) => Formula::not(Formula::or(Formula::not(strip_and(&a[0])), Formula::not(strip_and(&a[1])))),
        Formula::Conn(Connective::Imp, a) => Formula::or(Formula::not(strip_and(&a[0])), strip_and(&a[1])),
        Formula::Conn(c, a) => Formula::Conn(c.clone(), a.iter().map(strip_and).collect::<Vec<_>>().into()),
        _ => f.clone(),
    }
}

fn strip_exists(f: &Formula) -> Formula {
    match f {
        Formula::Quant(axtrans::syntax::Quantifier::Exists, v, b) => Formula::not(Formula::forall(v.0, Formula::not(strip_exists(b)))),
        Formula::Quant(q, v, b) => Formula::Quant(*q, *v, strip_exists(b).into()),
        Formula::Conn(c, a) => Formula::Conn(c.clone(), a.iter().map(strip_exists).collect::<Vec<_>>().into()),
        _ => f.clone(),
    }
}

trait VisitAll {
    fn visit_all(&self, ok: impl Fn(&Formula) -> bool) -> bool;
}

impl VisitAll for Formula {
    fn visit_all(&self, ok: impl Fn(&Formula) -> bool) -> bool {
        let mut all = true;
        self.visit(&mut |g| all &= ok(g));
        all
    }
}
