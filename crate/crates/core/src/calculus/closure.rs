//! Bounded forward closure and theorem search with proof reconstruction.

use std::collections::HashMap;
use std::ops::ControlFlow;

use rayon::prelude::*;

use super::proof::{Justification, Proof, Step};
use super::{Calculus, Rule};
use crate::error::{Error, Result};
use crate::syntax::{enumerate_layers, Binding, BindingSpace, Formula, Layers, Template, Var, DEFAULT_MAX_FORMULAS};

#[derive(Clone, Copy, Debug)]
pub struct ClosureConfig {
    /// Largest formula depth admitted anywhere in the closure.
    pub depth: usize,
    /// Number of rule rounds after the axiom instances.
    pub steps: usize,
    /// Variables (individual and propositional) are drawn from `1..=vars_limit`.
    pub vars_limit: u32,
    pub max_formulas: usize,
    pub max_theorems: usize,
}

impl ClosureConfig {
    pub fn new(depth: usize, steps: usize) -> Self {
        ClosureConfig {
            depth,
            steps,
            vars_limit: 2,
            max_formulas: DEFAULT_MAX_FORMULAS,
            max_theorems: 2_000_000,
        }
    }

    pub fn vars(mut self, vars_limit: u32) -> Self {
        self.vars_limit = vars_limit;
        self
    }
}

/// How a closure member was first obtained. Rule premises are theorem indices.
#[derive(Clone, Debug)]
pub enum Derivation {
    Axiom {
        axiom: usize,
        binding: Binding,
        generalized: Vec<Var>,
    },
    Rule {
        rule: usize,
        premises: Vec<usize>,
        binding: Binding,
    },
}

#[derive(Clone, Debug)]
pub struct Closure {
    theorems: Vec<Formula>,
    derivations: Vec<Derivation>,
    index: HashMap<Formula, usize>,
    /// Rule rounds actually run.
    pub rounds: usize,
    /// True when a round added nothing, so further rounds cannot either.
    pub saturated: bool,
    pub depth: usize,
}

impl Closure {
    pub fn len(&self) -> usize {
        self.theorems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theorems.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    /// Members in discovery order.
    pub fn theorems(&self) -> &[Formula] {
        &self.theorems
    }

    /// Members in the lexicographic order of their printed form.
    pub fn sorted(&self) -> Vec<&Formula> {
        let mut v: Vec<&Formula> = self.theorems.iter().collect();
        v.sort_by_cached_key(|f| (f.depth(), f.to_string()));
        v
    }

    pub fn derivation(&self, f: &Formula) -> Option<&Derivation> {
        self.index.get(f).map(|&i| &self.derivations[i])
    }

    /// Reconstructs a proof of `f` from recorded derivations.
    pub fn proof(&self, calc: &Calculus, f: &Formula) -> Option<Proof> {
        let &root = self.index.get(f)?;
        let mut placed: HashMap<usize, usize> = HashMap::new();
        let mut proof = Proof::default();
        self.emit(calc, root, &mut placed, &mut proof);
        Some(proof)
    }

    fn emit(&self, calc: &Calculus, i: usize, placed: &mut HashMap<usize, usize>, proof: &mut Proof) -> usize {
        if let Some(&s) = placed.get(&i) {
            return s;
        }
        let justification = match &self.derivations[i] {
            Derivation::Axiom {
                axiom,
                binding,
                generalized,
            } => Justification::Axiom {
                name: calc.axioms[*axiom].name.clone(),
                binding: Some(binding.clone()),
                generalized: generalized.clone(),
            },
            Derivation::Rule { rule, premises, binding } => {
                let steps = premises.iter().map(|&p| self.emit(calc, p, placed, proof)).collect();
                Justification::Rule {
                    name: calc.rules[*rule].name.clone(),
                    premises: steps,
                    binding: Some(binding.clone()),
                }
            }
        };
        proof.steps.push(Step {
            formula: self.theorems[i].clone(),
            justification,
        });
        placed.insert(i, proof.steps.len() - 1);
        proof.steps.len() - 1
    }

    fn insert(&mut self, f: Formula, d: Derivation, cap: usize) -> Result<bool> {
        if self.index.contains_key(&f) {
            return Ok(false);
        }
        if self.theorems.len() >= cap {
            return Err(Error::ResourceCap(format!("closure exceeds {cap} formulas")));
        }
        self.index.insert(f.clone(), self.theorems.len());
        self.theorems.push(f);
        self.derivations.push(d);
        Ok(true)
    }
}

/// Truncated least fixed point: all axiom instances of depth `<= cfg.depth`,
/// then up to `cfg.steps` rounds of rule applications whose conclusions stay
/// within the depth bound. Conclusions beyond the bound are dropped.
pub fn closure_bounded(calc: &Calculus, cfg: &ClosureConfig) -> Result<Closure> {
    run(calc, cfg, None)
}

#[derive(Clone, Debug)]
pub enum TheoremSearch {
    Yes(Proof),
    /// Not found within the bounds; never a refutation.
    Unknown {
        rounds: usize,
        theorems: usize,
        saturated: bool,
    },
}

impl TheoremSearch {
    pub fn is_yes(&self) -> bool {
        matches!(self, TheoremSearch::Yes(_))
    }
}

pub fn is_theorem_bounded(calc: &Calculus, f: &Formula, cfg: &ClosureConfig) -> Result<TheoremSearch> {
    let closure = run(calc, cfg, Some(f))?;
    Ok(match closure.proof(calc, f) {
        Some(p) => TheoremSearch::Yes(p),
        None => TheoremSearch::Unknown {
            rounds: closure.rounds,
            theorems: closure.len(),
            saturated: closure.saturated,
        },
    })
}

/// Deepest filler any axiom or rule conclusion can need under the bound.
fn filler_depth(calc: &Calculus, depth: usize) -> usize {
    let templates = calc
        .axioms
        .iter()
        .map(|a| &a.schema.template)
        .chain(calc.rules.iter().filter(|r| r.fresh).map(|r| &r.conclusion));
    let shallowest = templates.flat_map(|t| t.meta_depths().into_values()).min().unwrap_or(depth);
    depth.saturating_sub(shallowest)
}

fn run(calc: &Calculus, cfg: &ClosureConfig, goal: Option<&Formula>) -> Result<Closure> {
    let layers = enumerate_layers(&calc.sig, filler_depth(calc, cfg.depth), cfg.vars_limit, cfg.max_formulas)?;
    let vars: Vec<Var> = (1..=calc.sig.vars.truncate(cfg.vars_limit)).map(Var).collect();
    let mut closure = Closure {
        theorems: Vec::new(),
        derivations: Vec::new(),
        index: HashMap::new(),
        rounds: 0,
        saturated: false,
        depth: cfg.depth,
    };
    for (ai, axiom) in calc.axioms.iter().enumerate() {
        let t = &axiom.schema.template;
        let Some(space) = BindingSpace::bounded(&[t], &axiom.schema.side_conditions, &layers, &vars, cfg.depth) else {
            continue;
        };
        let mut failure = None;
        space.for_each(|b| {
            let f = t.fill(b)?;
            let gens = if calc.generalize_axioms {
                generalizations(calc, &f, cfg.depth)?
            } else {
                vec![(f, Vec::new())]
            };
            for (g, generalized) in gens {
                let d = Derivation::Axiom {
                    axiom: ai,
                    binding: b.clone(),
                    generalized,
                };
                if let Err(e) = closure.insert(g, d, cfg.max_theorems) {
                    failure = Some(e);
                    return Ok(ControlFlow::Break(()));
                }
            }
            Ok(ControlFlow::Continue(()))
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
    }
    let mut lo = 0;
    while closure.rounds < cfg.steps {
        if goal.is_some_and(|g| closure.contains(g)) {
            return Ok(closure);
        }
        let n = closure.len();
        let mut fresh: Vec<(Formula, Derivation)> = Vec::new();
        for (ri, rule) in calc.rules.iter().enumerate() {
            if rule.premises.is_empty() {
                continue;
            }
            let found: Vec<Vec<(Formula, Derivation)>> = (0..n)
                .into_par_iter()
                .map(|first| {
                    let mut out = Vec::new();
                    let mut ctx = Apply {
                        rule,
                        rule_index: ri,
                        closure: &closure,
                        layers: &layers,
                        vars: &vars,
                        depth: cfg.depth,
                        limit: n,
                        lo,
                        out: &mut out,
                    };
                    let mut b = Binding::new();
                    if rule.premises[0].match_into(&closure.theorems[first], &mut b) {
                        ctx.premise(1, b, vec![first], first >= lo);
                    }
                    out
                })
                .collect();
            fresh.extend(found.into_iter().flatten());
        }
        closure.rounds += 1;
        let mut added = false;
        for (f, d) in fresh {
            added |= closure.insert(f, d, cfg.max_theorems)?;
        }
        if !added {
            closure.saturated = true;
            break;
        }
        lo = n;
    }
    Ok(closure)
}

/// Every generalization of `f` over ordered sequences of distinct free
/// variables (including the empty one) that stays within `depth`.
fn generalizations(calc: &Calculus, f: &Formula, depth: usize) -> Result<Vec<(Formula, Vec<Var>)>> {
    let free: Vec<Var> = f.free_vars().into_iter().collect();
    let mut out = vec![(f.clone(), Vec::new())];
    let mut frontier = vec![Vec::<Var>::new()];
    while let Some(prefix) = frontier.pop() {
        for &v in &free {
            if prefix.contains(&v) {
                continue;
            }
            let mut seq = prefix.clone();
            seq.push(v);
            let g = calc.generalize(f.clone(), &seq)?;
            if g.depth() <= depth {
                out.push((g, seq.clone()));
                frontier.push(seq);
            }
        }
    }
    Ok(out)
}

struct Apply<'a> {
    rule: &'a Rule,
    rule_index: usize,
    closure: &'a Closure,
    layers: &'a Layers,
    vars: &'a [Var],
    depth: usize,
    limit: usize,
    lo: usize,
    out: &'a mut Vec<(Formula, Derivation)>,
}

impl Apply<'_> {
    fn premise(&mut self, k: usize, b: Binding, used: Vec<usize>, has_new: bool) {
        if k == self.rule.premises.len() {
            if has_new {
                self.conclude(b, used);
            }
            return;
        }
        let t = &self.rule.premises[k];
        let bound = t.metas().iter().all(|m| b.formulas.contains_key(m)) && t.var_metas().iter().all(|m| b.vars.contains_key(m));
        if bound {
            let Ok(f) = t.fill(&b) else { return };
            if let Some(&j) = self.closure.index.get(&f) {
                if j < self.limit {
                    let mut used = used;
                    used.push(j);
                    self.premise(k + 1, b, used, has_new || j >= self.lo);
                }
            }
            return;
        }
        for j in 0..self.limit {
            let mut nb = b.clone();
            if t.match_into(&self.closure.theorems[j], &mut nb) {
                let mut u = used.clone();
                u.push(j);
                self.premise(k + 1, nb, u, has_new || j >= self.lo);
            }
        }
    }

    fn conclude(&mut self, b: Binding, used: Vec<usize>) {
        let c = &self.rule.conclusion;
        let missing_f = c.metas().into_iter().any(|m| !b.formulas.contains_key(&m));
        let missing_v = c.var_metas().into_iter().any(|m| !b.vars.contains_key(&m));
        if !missing_f && !missing_v {
            self.emit(&b, used);
            return;
        }
        // Fill metavariables that only the conclusion mentions.
        let partial = c.substitute(
            &b.formulas.iter().map(|(k, v)| (k.clone(), Template::from(v))).collect(),
            &b.vars.iter().map(|(k, v)| (k.clone(), crate::syntax::VarTerm::Var(*v))).collect(),
        );
        let Some(space) = BindingSpace::bounded(&[&partial], &[], self.layers, self.vars, self.depth) else {
            return;
        };
        let _ = space.for_each(|extra| {
            let mut full = b.clone();
            full.formulas.extend(extra.formulas.iter().map(|(k, v)| (k.clone(), v.clone())));
            full.vars.extend(extra.vars.iter().map(|(k, v)| (k.clone(), *v)));
            self.emit(&full, used.clone());
            Ok(ControlFlow::Continue(()))
        });
    }

    fn emit(&mut self, b: &Binding, used: Vec<usize>) {
        if !self.rule.side_conditions.iter().all(|sc| sc.holds(b).unwrap_or(false)) {
            return;
        }
        let Ok(f) = self.rule.conclusion.fill(b) else { return };
        if f.depth() > self.depth || self.closure.contains(&f) {
            return;
        }
        self.out.push((
            f,
            Derivation::Rule {
                rule: self.rule_index,
                premises: used,
                binding: b.clone(),
            },
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_proof;
    use crate::fixtures;
    use crate::syntax::parse;

    #[test]
    fn top_only_closure_is_top() {
        let c = fixtures::top_only_calculus();
        let cl = closure_bounded(&c, &ClosureConfig::new(3, 5)).unwrap();
        assert_eq!(cl.theorems(), &[Formula::constant("top")]);
        assert!(cl.saturated);
    }

    #[test]
    fn empty_axioms_give_empty_closure() {
        let mut c = fixtures::prop_a1a3();
        c.axioms.clear();
        let cl = closure_bounded(&c, &ClosureConfig::new(3, 3)).unwrap();
        assert!(cl.is_empty());
    }

    #[test]
    fn identity_is_derivable_at_depth_four() {
        let c = fixtures::prop_a1a3();
        let goal = parse("p1 -> p1", &c.sig).unwrap();
        let shallow = closure_bounded(&c, &ClosureConfig::new(3, 4)).unwrap();
        assert!(!shallow.contains(&goal));
        match is_theorem_bounded(&c, &goal, &ClosureConfig::new(4, 4)).unwrap() {
            TheoremSearch::Yes(p) => {
                assert!(check_proof(&c, &p).is_accepted(), "{p}");
                assert_eq!(p.conclusion(), Some(&goal));
            }
            other => panic!("{other:?}"),
        }
    }
}
