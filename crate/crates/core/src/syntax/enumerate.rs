//! Exhaustive, duplicate-free enumeration of formulas by node depth.

use std::sync::Arc;

use super::formula::{Formula, PropVar, Var};
use super::signature::Signature;
use crate::error::{Error, Result};

/// Default cap on the number of formulas an enumeration may materialize.
pub const DEFAULT_MAX_FORMULAS: usize = 5_000_000;

/// Formulas grouped by exact depth, stored shallowest first. `layer(d)` holds
/// every formula of depth exactly `d`; `up_to(d)` every formula of depth `<= d`.
#[derive(Clone, Debug)]
pub struct Layers {
    flat: Vec<Formula>,
    ends: Vec<usize>,
}

impl Layers {
    pub fn depth(&self) -> usize {
        self.ends.len().saturating_sub(1)
    }

    pub fn layer(&self, d: usize) -> &[Formula] {
        match self.ends.get(d) {
            Some(&end) => &self.flat[if d == 0 { 0 } else { self.ends[d - 1] }..end],
            None => &[],
        }
    }

    /// Every formula of depth `<= d`, shallowest first.
    pub fn up_to(&self, d: usize) -> &[Formula] {
        let end = self.ends.get(d).or(self.ends.last()).copied().unwrap_or(0);
        &self.flat[..end]
    }

    pub fn all(&self) -> &[Formula] {
        &self.flat
    }

    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }
}

/// Atomic formulas: `p1..pk`, then `P(x1)..` per predicate, then constants.
pub fn leaves(sig: &Signature, vars_limit: u32) -> Vec<Formula> {
    let props = sig.props.truncate(vars_limit);
    let vars = sig.vars.truncate(vars_limit);
    let mut out: Vec<Formula> = (1..=props).map(|n| Formula::Prop(PropVar(n))).collect();
    for pred in &sig.predicates {
        out.extend((1..=vars).map(|n| Formula::Atom(pred.clone(), Var(n))));
    }
    for c in &sig.connectives {
        if c.arity() == 0 {
            out.push(Formula::Conn(c.clone(), Arc::from(Vec::new())));
        }
    }
    out
}

/// Predicted number of formulas of depth `<= d` for each `d` in `0..=depth`,
/// saturating at `u128::MAX`.
pub fn predicted_totals(sig: &Signature, depth: usize, vars_limit: u32) -> Vec<u128> {
    let leaf_count = leaves(sig, vars_limit).len() as u128;
    let binders = sig.quantifiers.len() as u128 * sig.vars.truncate(vars_limit) as u128;
    let mut totals = vec![leaf_count];
    for _ in 0..depth {
        let prev = *totals.last().unwrap();
        let mut next = leaf_count;
        for c in &sig.connectives {
            let k = c.arity() as u32;
            if k > 0 {
                next = next.saturating_add(prev.saturating_pow(k));
            }
        }
        next = next.saturating_add(binders.saturating_mul(prev));
        totals.push(next);
    }
    totals
}

/// Enumerates all formulas over `sig` of depth `<= depth` whose variables
/// have index `<= vars_limit`, failing if more than `max_formulas` would be built.
pub fn enumerate_layers(sig: &Signature, depth: usize, vars_limit: u32, max_formulas: usize) -> Result<Layers> {
    let totals = predicted_totals(sig, depth, vars_limit);
    if totals[depth] > max_formulas as u128 {
        return Err(Error::ResourceCap(format!(
            "{} formulas of depth <= {depth} exceed the cap of {max_formulas}",
            totals[depth]
        )));
    }
    let vars = sig.vars.truncate(vars_limit);
    let mut cumulative = leaves(sig, vars_limit);
    let mut ends = vec![cumulative.len()];
    for d in 1..=depth {
        let lo = if d == 1 { 0 } else { ends[d - 2] };
        let mut layer = Vec::new();
        for c in &sig.connectives {
            let k = c.arity();
            if k == 0 {
                continue;
            }
            // Odometer over `cumulative^k`, keeping tuples with at least one
            // component from the previous layer.
            let mut idx = vec![0usize; k];
            'tuples: loop {
                if idx.iter().any(|&i| i >= lo) {
                    let args: Vec<Formula> = idx.iter().map(|&i| cumulative[i].clone()).collect();
                    layer.push(Formula::Conn(c.clone(), Arc::from(args)));
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < cumulative.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
        }
        for q in &sig.quantifiers {
            for v in 1..=vars {
                for body in &cumulative[lo..] {
                    layer.push(Formula::Quant(*q, Var(v), Arc::new(body.clone())));
                }
            }
        }
        cumulative.extend(layer);
        ends.push(cumulative.len());
    }
    Ok(Layers { flat: cumulative, ends })
}

/// Flat enumeration, shallowest first, with the default cap.
pub fn enumerate_formulas(sig: &Signature, depth: usize, vars_limit: u32) -> Result<Vec<Formula>> {
    let layers = enumerate_layers(sig, depth, vars_limit, DEFAULT_MAX_FORMULAS)?;
    Ok(layers.flat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn depth_zero_is_atoms_only() {
        let sig = Signature::monadic(&["P"], &["not", "imp", "exists"]).unwrap();
        let fs = enumerate_formulas(&sig, 0, 1).unwrap();
        assert_eq!(fs, vec![Formula::atom("P", 1)]);
    }

    #[test]
    fn depth_one_contains_expected() {
        let sig = Signature::monadic(&["P"], &["not", "imp", "exists"]).unwrap();
        let fs = enumerate_formulas(&sig, 1, 1).unwrap();
        let p = Formula::atom("P", 1);
        assert!(fs.contains(&Formula::not(p.clone())));
        assert!(fs.contains(&Formula::exists(1, p.clone())));
        assert!(fs.contains(&Formula::imp(p.clone(), p)));
        assert_eq!(fs.len(), 4);
    }

    #[test]
    fn no_duplicates_and_layers_are_exact() {
        let sig = Signature::propositional(&["not", "imp", "bot"]).unwrap();
        let layers = enumerate_layers(&sig, 3, 2, DEFAULT_MAX_FORMULAS).unwrap();
        let set: HashSet<_> = layers.all().iter().collect();
        assert_eq!(set.len(), layers.len());
        for d in 0..=3 {
            assert!(layers.layer(d).iter().all(|f| f.depth() == d));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let sig = Signature::propositional(&["not", "imp"]).unwrap();
        let e = enumerate_layers(&sig, 4, 2, 1000).unwrap_err();
        assert!(matches!(e, Error::ResourceCap(_)));
    }
}
