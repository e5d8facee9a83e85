//! Proof objects and the proof checker.

use std::fmt;

use serde::Serialize;

use super::Calculus;
use crate::error::{Error, Result};
use crate::syntax::{parse, Binding, Formula, Var};
use crate::text;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    /// Instance of a named axiom schema, optionally generalized over `generalized`
    /// (outermost first). The binding, when given, must produce the step.
    Axiom {
        name: String,
        binding: Option<Binding>,
        generalized: Vec<Var>,
    },
    /// Application of a named rule to earlier steps (0-based indices).
    Rule {
        name: String,
        premises: Vec<usize>,
        binding: Option<Binding>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Proof {
    pub steps: Vec<Step>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Accepted {
        steps: usize,
    },
    /// `step` is 1-based, as in the text format.
    Rejected {
        step: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted { steps } => write!(f, "accepted ({steps} steps)"),
            Verdict::Rejected { step, reason } => write!(f, "rejected at step {step}: {reason}"),
        }
    }
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Parses lines of the form `3. p1 -> p1 by MP 1 2`, `1. ... by A1`,
    /// or `2. ... by A4 gen x1`. Step numbers must run 1, 2, 3, ...
    pub fn from_text(file: &str, text: &str, calc: &Calculus) -> Result<Proof> {
        let mut steps = Vec::new();
        for (line, content) in text::lines(text) {
            let bad = |m: String| Error::format(file, line, m);
            let (num, rest) = content
                .split_once('.')
                .ok_or_else(|| bad("expected `<n>. <formula> by ...`".into()))?;
            let n: usize = num.trim().parse().map_err(|_| bad(format!("bad step number `{num}`")))?;
            if n != steps.len() + 1 {
                return Err(bad(format!("expected step {}, found {n}", steps.len() + 1)));
            }
            let (formula, just) = rest.rsplit_once(" by ").ok_or_else(|| bad("missing `by`".into()))?;
            let formula = parse(formula.trim(), &calc.sig).map_err(|e| bad(e.to_string()))?;
            let mut words = just.split_whitespace();
            let name = words.next().ok_or_else(|| bad("missing justification".into()))?.to_owned();
            let args: Vec<&str> = words.collect();
            let justification = if calc.axiom(&name).is_some() {
                let generalized = match args.split_first() {
                    None => Vec::new(),
                    Some((&"gen", vars)) => vars
                        .iter()
                        .map(|v| {
                            v.strip_prefix('x')
                                .and_then(|n| n.parse().ok())
                                .map(Var)
                                .ok_or_else(|| bad(format!("bad variable `{v}`")))
                        })
                        .collect::<Result<_>>()?,
                    Some(_) => return Err(bad("axiom steps take no premises".into())),
                };
                Justification::Axiom {
                    name,
                    binding: None,
                    generalized,
                }
            } else {
                let premises = args
                    .iter()
                    .map(|a| match a.parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(bad(format!("bad premise reference `{a}`"))),
                    })
                    .collect::<Result<_>>()?;
                Justification::Rule {
                    name,
                    premises,
                    binding: None,
                }
            };
            steps.push(Step { formula, justification });
        }
        Ok(Proof { steps })
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "{}. {} by ", i + 1, s.formula)?;
            match &s.justification {
                Justification::Axiom { name, generalized, .. } => {
                    f.write_str(name)?;
                    if !generalized.is_empty() {
                        f.write_str(" gen")?;
                        for v in generalized {
                            write!(f, " {v}")?;
                        }
                    }
                }
                Justification::Rule { name, premises, .. } => {
                    f.write_str(name)?;
                    for p in premises {
                        write!(f, " {}", p + 1)?;
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Accepts iff every step is justified by an axiom instance or a rule
/// application to earlier steps; otherwise reports the first bad step.
pub fn check_proof(calc: &Calculus, proof: &Proof) -> Verdict {
    for (i, step) in proof.steps.iter().enumerate() {
        if let Err(reason) = check_step(calc, proof, i, step) {
            return Verdict::Rejected { step: i + 1, reason };
        }
    }
    Verdict::Accepted { steps: proof.steps.len() }
}

fn check_step(calc: &Calculus, proof: &Proof, i: usize, step: &Step) -> std::result::Result<(), String> {
    if let Err(e) = calc.sig.check(&step.formula) {
        return Err(e.to_string());
    }
    match &step.justification {
        Justification::Axiom {
            name,
            binding,
            generalized,
        } => {
            let axiom = calc.axiom(name).ok_or_else(|| format!("no axiom named {name}"))?;
            if !generalized.is_empty() && !calc.generalize_axioms {
                return Err(format!("{} does not admit generalized axiom instances", calc.name));
            }
            let body = calc
                .strip_generalizations(&step.formula, generalized)
                .ok_or_else(|| "formula is not the claimed generalization".to_owned())?;
            match binding {
                Some(b) => match axiom.schema.instantiate(b) {
                    Ok(f) if f == body => Ok(()),
                    Ok(f) => Err(format!("{name} under {b} gives {f}, not {body}")),
                    Err(e) => Err(e.to_string()),
                },
                None => axiom
                    .schema
                    .match_formula(&body)
                    .map(|_| ())
                    .ok_or_else(|| format!("{body} is not an instance of {name}: {}", axiom.schema)),
            }
        }
        Justification::Rule { name, premises, binding } => {
            let rule = calc.rule(name).ok_or_else(|| format!("no rule named {name}"))?;
            if let Some(&bad) = premises.iter().find(|&&p| p >= i) {
                return Err(format!("premise {} does not precede step {}", bad + 1, i + 1));
            }
            if premises.len() != rule.premises.len() {
                return Err(format!("{name} takes {} premises, {} given", rule.premises.len(), premises.len()));
            }
            let formulas: Vec<&Formula> = premises.iter().map(|&p| &proof.steps[p].formula).collect();
            let mut b = binding.clone().unwrap_or_default();
            if rule.matches(&formulas, &step.formula, &mut b) {
                Ok(())
            } else {
                Err(format!("not an application of {name}: {rule}"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn single_axiom_instance() {
        let c = fixtures::prop_a1a3();
        let p = Proof::from_text("t", "1. p1 -> (p2 -> p1) by A1", &c).unwrap();
        assert!(check_proof(&c, &p).is_accepted());
    }

    #[test]
    fn unproved_premise_is_rejected() {
        let c = fixtures::prop_a1a3();
        let p = Proof::from_text("t", "1. p1 -> (p2 -> p1) by A1\n2. p2 -> p1 by MP 1 1", &c).unwrap();
        assert_eq!(
            check_proof(&c, &p),
            Verdict::Rejected {
                step: 2,
                reason: format!("not an application of MP: {}", c.rule("MP").unwrap())
            }
        );
    }

    #[test]
    fn forward_references_are_rejected() {
        let c = fixtures::prop_a1a3();
        let p = Proof::from_text("t", "1. p1 by MP 2 3", &c).unwrap();
        assert!(matches!(check_proof(&c, &p), Verdict::Rejected { step: 1, .. }));
    }

    #[test]
    fn text_round_trip() {
        let c = fixtures::prop_a1a3();
        let text = "1. p1 -> p1 -> p1 by A1\n2. p1 -> (p1 -> p1) -> p1 by A1\n";
        let p = Proof::from_text("t", text, &c).unwrap();
        assert_eq!(p.to_string(), text);
    }
}
