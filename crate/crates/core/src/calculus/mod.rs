//! Hilbert calculi: axiom schemata, rules, proofs and bounded closure.

mod closure;
mod proof;

use std::fmt::Write as _;

pub use closure::{closure_bounded, is_theorem_bounded, Closure, ClosureConfig, Derivation, TheoremSearch};
pub use proof::{check_proof, Justification, Proof, Step, Verdict};

use crate::error::{Error, Result};
use crate::syntax::{parse_schema, parse_template, Binding, Formula, Name, Schema, SideCondition, Signature, Template, Var, VarFamily};
use crate::text;
use crate::translation::Translation;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Axiom {
    pub name: String,
    pub schema: Schema,
}

/// A rule: premises and conclusion share one metavariable scope.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Template>,
    pub conclusion: Template,
    pub side_conditions: Vec<SideCondition>,
    /// Whether the conclusion may mention formula metavariables absent from the premises.
    pub fresh: bool,
}

impl Rule {
    pub fn new(
        name: impl Into<String>,
        premises: Vec<Template>,
        conclusion: Template,
        side_conditions: Vec<SideCondition>,
        fresh: bool,
    ) -> Result<Rule> {
        let name = name.into();
        let in_premises: Vec<Name> = premises.iter().flat_map(Template::metas).collect();
        if !fresh {
            if let Some(m) = conclusion.metas().into_iter().find(|m| !in_premises.contains(m)) {
                return Err(Error::Invalid(format!(
                    "rule {name}: conclusion metavariable `{m}` does not occur in a premise (mark the rule `fresh`)"
                )));
            }
        }
        let all_metas: Vec<Name> = in_premises.iter().cloned().chain(conclusion.metas()).collect();
        let all_vars: Vec<Name> = premises.iter().chain([&conclusion]).flat_map(Template::var_metas).collect();
        for sc in &side_conditions {
            let (v, f) = sc.metas();
            if !all_metas.contains(f) || v.is_some_and(|v| !all_vars.contains(v)) {
                return Err(Error::Invalid(format!(
                    "rule {name}: side condition {sc} mentions an unknown metavariable"
                )));
            }
        }
        Ok(Rule {
            name,
            premises,
            conclusion,
            side_conditions,
            fresh,
        })
    }

    pub fn templates(&self) -> impl Iterator<Item = &Template> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    /// Extends `binding` so that the premises become `premises` and the
    /// conclusion `conclusion`, checking side conditions.
    pub fn matches(&self, premises: &[&Formula], conclusion: &Formula, binding: &mut Binding) -> bool {
        premises.len() == self.premises.len()
            && self.premises.iter().zip(premises).all(|(t, f)| t.match_into(f, binding))
            && self.conclusion.match_into(conclusion, binding)
            && self.side_conditions.iter().all(|sc| sc.holds(binding).unwrap_or(false))
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "{} => {}", premises.join(" ; "), self.conclusion)?;
        for sc in &self.side_conditions {
            write!(f, " {sc}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Calculus {
    pub name: String,
    pub sig: Signature,
    pub axioms: Vec<Axiom>,
    pub rules: Vec<Rule>,
    /// Axiom instances also count in every generalized form.
    pub generalize_axioms: bool,
    /// How to generalize a formula: a template in `Phi` and the variable
    /// metavariable `x`. Absent for quantifier-free calculi.
    pub generalizer: Option<Template>,
}

fn default_generalizer(sig: &Signature) -> Option<Template> {
    let forall = crate::syntax::Quantifier::Forall;
    sig.quantifiers
        .contains(&forall)
        .then(|| Template::Quant(forall, crate::syntax::VarTerm::Meta("x".into()), Box::new(Template::meta("Phi"))))
}

impl Calculus {
    pub fn new(name: impl Into<String>, sig: Signature) -> Calculus {
        Calculus {
            name: name.into(),
            generalizer: default_generalizer(&sig),
            sig,
            axioms: Vec::new(),
            rules: Vec::new(),
            generalize_axioms: false,
        }
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// Applies the generalizer for each variable, innermost last in `vars`.
    pub fn generalize(&self, f: Formula, vars: &[Var]) -> Result<Formula> {
        if vars.is_empty() {
            return Ok(f);
        }
        let g = self
            .generalizer
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("{} has no generalizer", self.name)))?;
        vars.iter()
            .rev()
            .try_fold(f, |acc, v| g.fill(&Binding::new().with_formula("Phi", acc).with_var("x", v.0)))
    }

    /// Inverse of [`Calculus::generalize`]: peels `vars.len()` generalizer layers.
    pub(crate) fn strip_generalizations(&self, f: &Formula, vars: &[Var]) -> Option<Formula> {
        let mut cur = f.clone();
        for v in vars {
            let mut b = Binding::new();
            if !self.generalizer.as_ref()?.match_into(&cur, &mut b) || b.vars.get("x") != Some(v) {
                return None;
            }
            cur = b.formulas.get("Phi")?.clone();
        }
        Some(cur)
    }

    fn check_templates(&self) -> Result<()> {
        let mut templates: Vec<&Template> = self.axioms.iter().map(|a| &a.schema.template).collect();
        templates.extend(self.rules.iter().flat_map(Rule::templates));
        templates.extend(&self.generalizer);
        for t in templates {
            for c in t.connectives() {
                if !self.sig.connectives.contains(&c) {
                    return Err(Error::SignatureMismatch(format!(
                        "`{}` in `{t}` is not a primitive of {}",
                        c.name(),
                        self.name
                    )));
                }
            }
            for q in t.quantifiers() {
                if !self.sig.quantifiers.contains(&q) {
                    return Err(Error::SignatureMismatch(format!(
                        "`{}` in `{t}` is not a primitive of {}",
                        q.name(),
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parses the `.calc` text format.
    pub fn from_text(file: &str, text: &str) -> Result<Calculus> {
        let mut name = file.to_owned();
        let mut prims: Option<Vec<String>> = None;
        let mut predicates: Vec<String> = Vec::new();
        let mut props = VarFamily::Unbounded;
        let mut vars = VarFamily::Absent;
        let mut generalize = false;
        let mut entries: Vec<(usize, &str, String)> = Vec::new();
        for (line, content) in text::lines(text) {
            let (kw, rest) = text::directive(content);
            let bad = |e: String| Error::format(file, line, e);
            match kw {
                "name" => name = rest.to_owned(),
                "primitives" => prims = Some(rest.split_whitespace().map(str::to_owned).collect()),
                "predicates" => predicates = rest.split_whitespace().map(str::to_owned).collect(),
                "props" => props = rest.parse().map_err(bad)?,
                "vars" => vars = rest.parse().map_err(bad)?,
                "generalizations" => {
                    generalize = match rest {
                        "on" => true,
                        "off" => false,
                        other => return Err(bad(format!("expected `on` or `off`, found `{other}`"))),
                    }
                }
                "axiom" | "rule" | "generalizer" => entries.push((line, kw, rest.to_owned())),
                other => return Err(bad(format!("unknown directive `{other}`"))),
            }
        }
        let prims = prims.ok_or_else(|| Error::format(file, 0, "missing `primitives` line"))?;
        let mut sig = Signature::new(props, vars);
        sig.predicates = predicates.iter().map(|p| Name::from(p.as_str())).collect();
        let prim_refs: Vec<&str> = prims.iter().map(String::as_str).collect();
        let sig = sig.with_primitives(&prim_refs).map_err(|e| Error::format(file, 0, e.to_string()))?;
        let mut calc = Calculus::new(name, sig);
        calc.generalize_axioms = generalize;
        for (line, kw, rest) in entries {
            let wrap = |e: Error| Error::format(file, line, e.to_string());
            match kw {
                "generalizer" => calc.generalizer = Some(parse_template(&rest, &calc.sig).map_err(|e| wrap(e.into()))?),
                "axiom" => {
                    let (n, body) = text::named(&rest).ok_or_else(|| Error::format(file, line, "expected `axiom <name>: <schema>`"))?;
                    let schema = parse_schema(body, &calc.sig).map_err(wrap)?;
                    calc.axioms.push(Axiom {
                        name: n.to_owned(),
                        schema,
                    });
                }
                _ => {
                    let (head, body) = text::named(&rest)
                        .ok_or_else(|| Error::format(file, line, "expected `rule <name>: <premises> => <conclusion>`"))?;
                    let mut head = head.split_whitespace();
                    let n = head.next().unwrap_or_default().to_owned();
                    let fresh = match head.next() {
                        None => false,
                        Some("fresh") => true,
                        Some(other) => return Err(Error::format(file, line, format!("unknown rule flag `{other}`"))),
                    };
                    let (lhs, rhs) = body.split_once("=>").ok_or_else(|| Error::format(file, line, "rule needs `=>`"))?;
                    let premises = lhs
                        .split(';')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(|p| parse_template(p, &calc.sig).map_err(|e| wrap(e.into())))
                        .collect::<Result<Vec<_>>>()?;
                    let concl = parse_schema(rhs.trim(), &calc.sig).map_err(wrap)?;
                    let rule = Rule::new(n, premises, concl.template, concl.side_conditions, fresh).map_err(wrap)?;
                    calc.rules.push(rule);
                }
            }
        }
        for (i, a) in calc.axioms.iter().enumerate() {
            if calc.axioms[..i].iter().any(|b| b.name == a.name) || calc.rules.iter().any(|r| r.name == a.name) {
                return Err(Error::format(file, 0, format!("duplicate name `{}`", a.name)));
            }
        }
        calc.check_templates().map_err(|e| Error::format(file, 0, e.to_string()))?;
        Ok(calc)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name {}", self.name);
        let _ = writeln!(s, "primitives {}", self.sig.describe_primitives());
        if !self.sig.predicates.is_empty() {
            let preds: Vec<&str> = self.sig.predicates.iter().map(|p| &**p).collect();
            let _ = writeln!(s, "predicates {}", preds.join(" "));
        }
        let _ = writeln!(s, "props {}", self.sig.props);
        let _ = writeln!(s, "vars {}", self.sig.vars);
        for a in &self.axioms {
            let _ = writeln!(s, "axiom {}: {}", a.name, a.schema);
        }
        for r in &self.rules {
            let flag = if r.fresh { " fresh" } else { "" };
            let _ = writeln!(s, "rule {}{flag}: {r}", r.name);
        }
        if self.generalize_axioms {
            let _ = writeln!(s, "generalizations on");
        }
        if let Some(g) = &self.generalizer {
            let _ = writeln!(s, "generalizer {g}");
        }
        s
    }
}

/// Translates every axiom schema, rule and the generalizer; names gain a `'`.
pub fn translate_calculus(t: &Translation, c: &Calculus) -> Result<Calculus> {
    for p in c.sig.primitives() {
        if !t.source.has_primitive(&p) {
            return Err(Error::SignatureMismatch(format!(
                "`{p}` of {} is not a source primitive of {}",
                c.name, t.name
            )));
        }
    }
    let mut sig = t.target.clone();
    sig.props = c.sig.props;
    sig.vars = c.sig.vars;
    sig.predicates = c.sig.predicates.clone();
    let axioms = c
        .axioms
        .iter()
        .map(|a| {
            Ok(Axiom {
                name: format!("{}'", a.name),
                schema: t.translate_schema(&a.schema)?,
            })
        })
        .collect::<Result<_>>()?;
    let rules = c
        .rules
        .iter()
        .map(|r| {
            Ok(Rule {
                name: format!("{}'", r.name),
                premises: r.premises.iter().map(|p| t.translate_template(p)).collect::<Result<_>>()?,
                conclusion: t.translate_template(&r.conclusion)?,
                side_conditions: r.side_conditions.clone(),
                fresh: r.fresh,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Calculus {
        name: format!("{}'", c.name),
        sig,
        axioms,
        rules,
        generalize_axioms: c.generalize_axioms,
        generalizer: c.generalizer.as_ref().map(|g| t.translate_template(g)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for c in [
            fixtures::bs_forall(),
            fixtures::bs_system(),
            fixtures::prop_a1a3(),
            fixtures::top_only_calculus(),
            fixtures::hilbert_ackermann(),
        ] {
            let again = Calculus::from_text("again", &c.to_text()).unwrap();
            assert_eq!(again, c);
        }
    }

    #[test]
    fn translated_system_matches_fixture() {
        let t = translate_calculus(&fixtures::forall_as_not_exists_not(), &fixtures::bs_forall()).unwrap();
        let fixture = fixtures::bs_system();
        assert_eq!(t.sig, fixture.sig);
        assert_eq!(t.axiom("A4'").unwrap().schema.to_string(), "~exists x. ~Phi -> Phi");
        for (a, b) in t.axioms.iter().zip(&fixture.axioms) {
            assert_eq!(a.schema, b.schema, "{}", a.name);
        }
        assert_eq!(t.rule("Gen'").unwrap().conclusion.to_string(), "~exists x. ~Phi");
    }

    #[test]
    fn fresh_metavariables_need_the_flag() {
        let sig = Signature::permissive();
        let p = parse_template("Phi", &sig).unwrap();
        let c = parse_template("Phi \\/ Psi", &sig).unwrap();
        assert!(Rule::new("OrI", vec![p.clone()], c.clone(), vec![], false).is_err());
        assert!(Rule::new("OrI", vec![p], c, vec![], true).is_ok());
    }

    #[test]
    fn identity_translation_keeps_calculus() {
        let c = fixtures::prop_a1a3();
        let t = Translation::identity("id", c.sig.clone(), c.sig.clone()).unwrap();
        let mut out = translate_calculus(&t, &c).unwrap();
        out.name = c.name.clone();
        for a in &mut out.axioms {
            a.name.pop();
        }
        for r in &mut out.rules {
            r.name.pop();
        }
        assert_eq!(out, c);
    }
}
