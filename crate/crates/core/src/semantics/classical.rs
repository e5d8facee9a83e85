//! Tarskian satisfaction and brute-force classical validity for monadic formulas.
//!
//! A monadic formula with `k` predicates that fails somewhere fails in a model
//! of at most `2^k` elements (merge elements with the same predicate profile),
//! so checking every domain up to that size decides validity.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula, Name, PropVar, Quantifier, Var};

/// Upper bound on the number of structures (times assignments) examined.
const MAX_CHECKS: u128 = 200_000_000;

/// A finite classical structure: domain `0..size`, predicate extensions as
/// bitmasks and truth values for propositional variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Structure {
    pub size: usize,
    pub predicates: BTreeMap<Name, u64>,
    pub props: BTreeMap<PropVar, bool>,
}

impl Structure {
    pub fn satisfies(&self, f: &Formula, assignment: &mut BTreeMap<Var, usize>) -> Result<bool> {
        Ok(match f {
            Formula::Prop(p) => *self.props.get(p).ok_or_else(|| Error::UnboundVariable(p.to_string()))?,
            Formula::Atom(pred, v) => {
                let a = *assignment.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
                let ext = self
                    .predicates
                    .get(pred)
                    .ok_or_else(|| Error::SignatureMismatch(format!("predicate {pred} has no extension")))?;
                ext >> a & 1 == 1
            }
            Formula::Conn(c, args) => match c {
                Connective::Not => !self.satisfies(&args[0], assignment)?,
                Connective::And => self.satisfies(&args[0], assignment)? && self.satisfies(&args[1], assignment)?,
                Connective::Or => self.satisfies(&args[0], assignment)? || self.satisfies(&args[1], assignment)?,
                Connective::Imp => !self.satisfies(&args[0], assignment)? || self.satisfies(&args[1], assignment)?,
                Connective::Const(n) if &**n == "top" => true,
                Connective::Const(n) if &**n == "bot" => false,
                Connective::Const(n) => return Err(Error::Unsupported(format!("no classical reading of constant `{n}`"))),
            },
            Formula::Quant(q, v, body) => {
                let saved = assignment.get(v).copied();
                let mut result = matches!(q, Quantifier::Forall);
                for a in 0..self.size {
                    assignment.insert(*v, a);
                    let holds = self.satisfies(body, assignment)?;
                    if holds != result {
                        result = holds;
                        break;
                    }
                }
                match saved {
                    Some(a) => assignment.insert(*v, a),
                    None => assignment.remove(v),
                };
                result
            }
        })
    }
}

/// A structure and an assignment to the free variables where a formula fails.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Countermodel {
    pub structure: Structure,
    pub assignment: BTreeMap<Var, usize>,
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain size {}", self.structure.size)?;
        for (p, ext) in &self.structure.predicates {
            let members: Vec<String> = (0..self.structure.size)
                .filter(|a| ext >> a & 1 == 1)
                .map(|a| a.to_string())
                .collect();
            write!(f, "; {p} = {{{}}}", members.join(","))?;
        }
        for (p, b) in &self.structure.props {
            write!(f, "; {p} = {}", if *b { 1 } else { 0 })?;
        }
        for (v, a) in &self.assignment {
            write!(f, "; {v} = {a}")?;
        }
        Ok(())
    }
}

/// `2^k` for a formula with `k` distinct predicates.
pub fn monadic_bound(f: &Formula) -> usize {
    1usize << f.predicates().len().min(16)
}

/// Searches every structure of size `1..=max_domain` and every assignment.
pub fn find_countermodel(f: &Formula, max_domain: usize) -> Result<Option<Countermodel>> {
    let preds: Vec<Name> = f.predicates().into_iter().collect();
    let props: Vec<PropVar> = f.prop_vars().into_iter().collect();
    let free: Vec<Var> = f.free_vars().into_iter().collect();
    if max_domain > 16 {
        return Err(Error::DomainSizeUnsupported(max_domain));
    }
    let sizes = 1..=max_domain.max(1);
    let cost = |n: usize| -> u128 {
        let bits = n * preds.len();
        let interps = if bits < 127 { 1u128 << bits } else { u128::MAX };
        let assignments = (n as u128).saturating_pow(free.len() as u32);
        interps.saturating_mul(1u128 << props.len().min(64)).saturating_mul(assignments)
    };
    let budget = sizes.clone().map(cost).fold(0u128, u128::saturating_add);
    if budget > MAX_CHECKS {
        return Err(Error::ResourceCap(format!(
            "{budget} structure/assignment pairs exceed {MAX_CHECKS}"
        )));
    }
    for n in sizes {
        let interps = 1u128 << (n * preds.len());
        let valuations = 1u128 << props.len();
        let assignments = (n as u128).pow(free.len() as u32);
        for code in 0..interps {
            let predicates: BTreeMap<Name, u64> = preds
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), ((code >> (i * n)) as u64) & ((1u64 << n) - 1)))
                .collect();
            for val in 0..valuations {
                let structure = Structure {
                    size: n,
                    predicates: predicates.clone(),
                    props: props.iter().enumerate().map(|(i, p)| (*p, val >> i & 1 == 1)).collect(),
                };
                for idx in 0..assignments {
                    let mut rest = idx;
                    let mut assignment: BTreeMap<Var, usize> = free
                        .iter()
                        .map(|v| {
                            let a = (rest % n as u128) as usize;
                            rest /= n as u128;
                            (*v, a)
                        })
                        .collect();
                    if !structure.satisfies(f, &mut assignment)? {
                        return Ok(Some(Countermodel { structure, assignment }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// True iff `f` holds in every structure of size `<= max_domain` under every
/// assignment. Decides classical validity once `max_domain >= monadic_bound(f)`.
pub fn classically_valid(f: &Formula, max_domain: usize) -> Result<bool> {
    Ok(find_countermodel(f, max_domain)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    #[test]
    fn monadic_examples() {
        let sig = Signature::permissive();
        let f = |s: &str| parse(s, &sig).unwrap();
        let bound = |g: &Formula| monadic_bound(g);
        let target = f("exists x1. P(x1) -> exists x1. ~~P(x1)");
        assert!(classically_valid(&target, bound(&target)).unwrap());
        let e = f("exists x1. P(x1)");
        assert!(!classically_valid(&e, bound(&e)).unwrap());
        let a4 = f("forall x1. P(x1) -> P(x1)");
        assert!(classically_valid(&a4, bound(&a4)).unwrap());
        let g = f("~exists x1. ~P(x1) -> exists x1. ~P(x1)");
        let cm = find_countermodel(&g, bound(&g)).unwrap().unwrap();
        assert_eq!(cm.structure.predicates[&Name::from("P")], 1);
    }
}
