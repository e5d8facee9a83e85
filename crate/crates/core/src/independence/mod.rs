//! Certified unprovability: soundness of a calculus with respect to a
//! non-standard semantics plus refutation of a target formula.

mod audit;
pub mod classes;
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use audit::{audit_axiom_tables, diff_lines, evaluation_chain, AxiomTables, ValueTable};
pub use search::{search_generalized_model, search_matrix, ImpStrategy, MatrixSearch, ModelStrategy, SearchOutcome};

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::semantics::{Algebra, GeneralizedModel, Matrix, MatrixAt, StarAlgebra};
use crate::syntax::{Formula, Primitive, Quantifier, Template};
use classes::{realized_classes, sweep, value_classes, Class, Compiled, Pool, Sweep};

/// The semantics a calculus is checked against.
#[derive(Clone, Copy, Debug)]
pub enum Semantics<'a> {
    /// One-variable values in a generalized model, designated set from the model.
    Values(&'a GeneralizedModel),
    /// The starred satisfaction relation over the model; designated means true*.
    Star(&'a GeneralizedModel),
    /// A propositional matrix.
    Matrix(&'a Matrix),
}

impl Semantics<'_> {
    pub fn kind(&self) -> SemanticsKind {
        match self {
            Semantics::Values(_) => SemanticsKind::Values,
            Semantics::Star(_) => SemanticsKind::Star,
            Semantics::Matrix(_) => SemanticsKind::Matrix,
        }
    }

    fn serialize_model(&self) -> serde_json::Value {
        match self {
            Semantics::Values(m) | Semantics::Star(m) => m.to_json(),
            Semantics::Matrix(m) => m.to_json(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemanticsKind {
    Values,
    Star,
    Matrix,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Depth bound for formulas filling schema metavariables.
    pub instance_depth: usize,
    /// Individual variables in the filler pool (forced to 1 for one-variable values).
    pub vars: u32,
    /// Propositional variables in the filler pool.
    pub props: u32,
    pub max_classes: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            instance_depth: 3,
            vars: 3,
            props: 3,
            max_classes: 200_000,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Every enumerated instance, grouped by the value of each filler.
    Instances,
    /// Every tuple of semantic values, realized or not.
    Table,
}

/// Result of checking one axiom schema or rule.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub mode: CheckMode,
    /// Value tuples examined.
    pub tuples: u64,
    /// Instances those tuples cover (equal to `tuples` in table mode).
    pub instances: u128,
    pub failure: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn from_sweep(name: &str, mode: CheckMode, s: Sweep) -> Check {
        Check {
            name: name.to_owned(),
            mode,
            tuples: s.tuples,
            instances: s.instances,
            failure: s.failure.map(|f| {
                let shown: Vec<String> = f.formulas.iter().map(|g| g.to_string()).collect();
                if shown.is_empty() {
                    f.assignment.join(", ")
                } else {
                    format!("{} ({})", shown.join(" ; "), f.assignment.join(", "))
                }
            }),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    Independent,
    AxiomFails { name: String },
    RuleFails { name: String },
    TargetDesignated,
}

/// Everything [`verify_independence`] established, in a serializable form.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub calculus: String,
    pub semantics: SemanticsKind,
    pub target: String,
    pub target_value: String,
    pub target_designated: bool,
    pub instance_depth: usize,
    pub pool_vars: Vec<String>,
    pub pool_props: Vec<String>,
    pub classes: usize,
    pub axioms: Vec<Check>,
    pub rules: Vec<Check>,
    pub outcome: Outcome,
    pub model: serde_json::Value,
}

impl Report {
    pub fn is_independent(&self) -> bool {
        self.outcome == Outcome::Independent
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match &self.outcome {
            Outcome::Independent => "INDEPENDENT".to_owned(),
            Outcome::AxiomFails { name } => format!("NOT CERTIFIED: axiom {name} fails"),
            Outcome::RuleFails { name } => format!("NOT CERTIFIED: rule {name} fails"),
            Outcome::TargetDesignated => "NOT CERTIFIED: target is designated".to_owned(),
        };
        writeln!(f, "{verdict}")?;
        let sem = match self.semantics {
            SemanticsKind::Values => "values",
            SemanticsKind::Star => "star",
            SemanticsKind::Matrix => "matrix",
        };
        writeln!(f, "calculus {}, semantics {sem}", self.calculus)?;
        if self.semantics != SemanticsKind::Matrix {
            writeln!(
                f,
                "fillers to depth {} over {} ({} value classes)",
                self.instance_depth,
                self.pool_vars.join(" "),
                self.classes
            )?;
        }
        for (kind, checks) in [("axiom", &self.axioms), ("rule", &self.rules)] {
            for c in checks {
                let mode = match c.mode {
                    CheckMode::Instances => format!("{} instances in {} classes", c.instances, c.tuples),
                    CheckMode::Table => format!("{} value tuples", c.tuples),
                };
                match &c.failure {
                    None => writeln!(f, "  {kind} {}: ok ({mode})", c.name)?,
                    Some(why) => writeln!(f, "  {kind} {}: FAILS at {why}", c.name)?,
                }
            }
        }
        writeln!(
            f,
            "  target {}: {} ({})",
            self.target,
            self.target_value,
            if self.target_designated { "designated" } else { "undesignated" }
        )
    }
}

/// Checks that every axiom instance is designated, every rule preserves
/// designation, and the target is undesignated.
///
/// Axioms are checked over all fillers of depth `<= instance_depth` (table
/// level for matrices, where that is exact). Rules are checked at table
/// level for value semantics and over enumerated instances for the starred
/// relation, whose negation clause is assignment-sensitive.
pub fn verify_independence(c: &Calculus, sem: Semantics<'_>, target: &Formula, cfg: &VerifyConfig) -> Result<Report> {
    c.sig.check(target)?;
    match sem {
        Semantics::Values(m) => {
            let m = with_forall_if_needed(c, m)?;
            let pool = Pool::new(&c.sig, 1, cfg.props);
            let levels = realized_classes(&m, &pool, cfg.instance_depth, cfg.max_classes)?;
            let classes = levels.last().expect("depth 0 level");
            let values = value_classes(m.domain.subsets());
            run(c, &m, sem, target, cfg, &pool, classes, &values, CheckMode::Table)
        }
        Semantics::Star(m) => {
            let alg = StarAlgebra::new(m);
            let pool = Pool::new(&c.sig, cfg.vars, cfg.props);
            let levels = realized_classes(&alg, &pool, cfg.instance_depth, cfg.max_classes)?;
            let classes = levels.last().expect("depth 0 level");
            run(c, &alg, sem, target, cfg, &pool, classes, classes, CheckMode::Instances)
        }
        Semantics::Matrix(mx) => {
            if !c.sig.quantifiers.is_empty() || !c.sig.predicates.is_empty() {
                return Err(Error::SemanticsMismatch(format!(
                    "a matrix cannot interpret the quantified calculus {}",
                    c.name
                )));
            }
            let alg = MatrixAt {
                matrix: mx,
                valuation: Default::default(),
            };
            let pool = Pool::new(&c.sig, 0, cfg.props);
            let values = value_classes(0..mx.size as u8);
            let mut report = run(c, &alg, sem, target, cfg, &pool, &values, &values, CheckMode::Table)?;
            report.classes = mx.size;
            match mx.refuting_valuation(target)? {
                Some(val) => {
                    let shown: Vec<String> = val.iter().map(|(p, v)| format!("{p}={v}")).collect();
                    let value = crate::semantics::eval_matrix(mx, target, &val)?;
                    report.target_value = format!("{value} at {}", shown.join(" "));
                    report.target_designated = false;
                }
                None => {
                    report.target_value = "designated under every valuation".into();
                    report.target_designated = true;
                }
            }
            report.outcome = outcome(&report);
            Ok(report)
        }
    }
}

fn with_forall_if_needed(c: &Calculus, m: &GeneralizedModel) -> Result<GeneralizedModel> {
    let forall = Primitive::Quant(Quantifier::Forall);
    if c.sig.has_primitive(&forall) && !m.tables.contains_key(&forall) {
        m.with_defined_forall()
    } else {
        Ok(m.clone())
    }
}

#[allow(clippy::too_many_arguments)]
fn run<A: Algebra>(
    c: &Calculus,
    alg: &A,
    sem: Semantics<'_>,
    target: &Formula,
    cfg: &VerifyConfig,
    pool: &Pool,
    axiom_classes: &[Class<A::Value>],
    rule_classes: &[Class<A::Value>],
    rule_mode: CheckMode,
) -> Result<Report> {
    let axiom_mode = if matches!(sem, Semantics::Matrix(_)) {
        CheckMode::Table
    } else {
        CheckMode::Instances
    };
    let mut axioms = Vec::new();
    for ax in &c.axioms {
        let compiled = Compiled::new(&[&ax.schema.template]);
        let s = sweep(alg, &compiled, &ax.schema.side_conditions, axiom_classes, &pool.vars, |v| {
            alg.designated(v[0])
        })?;
        axioms.push(Check::from_sweep(&ax.name, axiom_mode, s));
    }
    let mut rules = Vec::new();
    let mut rule_list: Vec<(String, Vec<&Template>, &[crate::syntax::SideCondition])> = c
        .rules
        .iter()
        .map(|r| {
            let mut ts: Vec<&Template> = r.premises.iter().collect();
            ts.push(&r.conclusion);
            (r.name.clone(), ts, r.side_conditions.as_slice())
        })
        .collect();
    let phi = Template::meta("Phi");
    if let (true, Some(g)) = (c.generalize_axioms, &c.generalizer) {
        rule_list.push(("generalization".into(), vec![&phi, g], &[]));
    }
    for (name, templates, side) in rule_list {
        let compiled = Compiled::new(&templates);
        let premises = templates.len() - 1;
        let s = sweep(alg, &compiled, side, rule_classes, &pool.vars, |v| {
            !v[..premises].iter().all(|&p| alg.designated(p)) || alg.designated(v[premises])
        })?;
        rules.push(Check::from_sweep(&name, rule_mode, s));
    }
    let (target_value, target_designated) = if matches!(sem, Semantics::Matrix(_)) {
        (String::new(), false)
    } else {
        let v = alg.eval(target)?;
        (alg.show(v), alg.designated(v))
    };
    let mut report = Report {
        calculus: c.name.clone(),
        semantics: sem.kind(),
        target: target.to_string(),
        target_value,
        target_designated,
        instance_depth: cfg.instance_depth,
        pool_vars: pool.vars.iter().map(|v| v.to_string()).collect(),
        pool_props: pool.props.iter().map(|p| p.to_string()).collect(),
        classes: axiom_classes.len(),
        axioms,
        rules,
        outcome: Outcome::Independent,
        model: sem.serialize_model(),
    };
    report.outcome = outcome(&report);
    Ok(report)
}

fn outcome(r: &Report) -> Outcome {
    if let Some(a) = r.axioms.iter().find(|a| !a.passed()) {
        Outcome::AxiomFails { name: a.name.clone() }
    } else if let Some(a) = r.rules.iter().find(|a| !a.passed()) {
        Outcome::RuleFails { name: a.name.clone() }
    } else if r.target_designated {
        Outcome::TargetDesignated
    } else {
        Outcome::Independent
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semantics::Matrix;
    use crate::syntax::parse;

    #[test]
    fn prop1_model_separates_under_values_and_star() {
        let c = fixtures::bs_system();
        let m = fixtures::prop1_model();
        let t = fixtures::target();
        let cfg = VerifyConfig {
            instance_depth: 2,
            ..VerifyConfig::default()
        };
        let r = verify_independence(&c, Semantics::Values(&m), &t, &cfg).unwrap();
        assert!(r.is_independent(), "{r}");
        assert_eq!(r.target_value, "{}");
        let r = verify_independence(&c, Semantics::Star(&m), &t, &cfg).unwrap();
        assert!(r.is_independent(), "{r}");
    }

    #[test]
    fn standard_model_designates_the_target() {
        let c = fixtures::bs_system();
        let m = fixtures::standard_2elt();
        let r = verify_independence(&c, Semantics::Values(&m), &fixtures::target(), &VerifyConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::TargetDesignated);
    }

    #[test]
    fn boolean_matrix_designates_theorems() {
        let c = fixtures::prop_a1a3();
        let m = Matrix::boolean(c.sig.connectives.iter().cloned()).unwrap();
        let t = parse("p1 -> p1", &c.sig).unwrap();
        let r = verify_independence(&c, Semantics::Matrix(&m), &t, &VerifyConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::TargetDesignated);
        assert!(r.axioms.iter().all(Check::passed));
    }

    #[test]
    fn matrix_rejects_quantified_calculus() {
        let c = fixtures::bs_system();
        let m = Matrix::boolean(c.sig.connectives.iter().cloned()).unwrap();
        let e = verify_independence(&c, Semantics::Matrix(&m), &fixtures::target(), &VerifyConfig::default());
        assert!(matches!(e, Err(Error::SemanticsMismatch(_))));
    }

    #[test]
    fn report_json_round_trip() {
        let c = fixtures::bs_system();
        let m = fixtures::prop1_model();
        let cfg = VerifyConfig {
            instance_depth: 1,
            ..VerifyConfig::default()
        };
        let r = verify_independence(&c, Semantics::Values(&m), &fixtures::target(), &cfg).unwrap();
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}
