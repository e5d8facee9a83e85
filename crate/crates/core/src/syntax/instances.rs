//! Bounded enumeration of metavariable bindings.

use std::ops::ControlFlow;

use super::enumerate::Layers;
use super::formula::{Name, Var};
use super::schema::{Binding, SideCondition, Template};
use crate::error::Result;

/// The finite space of bindings for a group of templates: each formula
/// metavariable ranges over the enumerated formulas up to its own depth
/// bound, each variable metavariable over a fixed list of variables.
pub struct BindingSpace<'a> {
    pub metas: Vec<(Name, &'a [crate::syntax::Formula])>,
    pub var_metas: Vec<Name>,
    pub vars: Vec<Var>,
    pub side_conditions: &'a [SideCondition],
}

impl<'a> BindingSpace<'a> {
    /// Bindings under which every template in `templates` instantiates to a
    /// formula of depth `<= depth`. Returns `None` when some template's own
    /// skeleton already exceeds the bound.
    pub fn bounded(
        templates: &[&Template],
        side_conditions: &'a [SideCondition],
        layers: &'a Layers,
        vars: &[Var],
        depth: usize,
    ) -> Option<Self> {
        let mut metas: Vec<(Name, usize)> = Vec::new();
        let mut var_metas = Vec::new();
        for t in templates {
            if t.depth() > depth {
                return None;
            }
            let depths = t.meta_depths();
            for m in t.metas() {
                let at = depths[&m];
                match metas.iter_mut().find(|(n, _)| *n == m) {
                    Some((_, d)) => *d = (*d).max(at),
                    None => metas.push((m, at)),
                }
            }
            for v in t.var_metas() {
                if !var_metas.contains(&v) {
                    var_metas.push(v);
                }
            }
        }
        let mut ranged = Vec::with_capacity(metas.len());
        for (m, at) in metas {
            if at > depth {
                return None;
            }
            ranged.push((m, layers.up_to(depth - at)));
        }
        Some(BindingSpace {
            metas: ranged,
            var_metas,
            vars: vars.to_vec(),
            side_conditions,
        })
    }

    /// Upper bound on the number of bindings (before side conditions).
    pub fn size(&self) -> u128 {
        let f = self.metas.iter().fold(1u128, |acc, (_, fs)| acc.saturating_mul(fs.len() as u128));
        (0..self.var_metas.len()).fold(f, |acc, _| acc.saturating_mul(self.vars.len() as u128))
    }

    /// Visits every binding satisfying the side conditions, in lexicographic
    /// order of (formula metavariables, then variable metavariables).
    pub fn for_each<F>(&self, mut visit: F) -> Result<()>
    where
        F: FnMut(&Binding) -> Result<ControlFlow<()>>,
    {
        if self.metas.iter().any(|(_, fs)| fs.is_empty()) || (!self.var_metas.is_empty() && self.vars.is_empty()) {
            return Ok(());
        }
        let n = self.metas.len();
        let k = self.var_metas.len();
        let mut idx = vec![0usize; n + k];
        let mut binding = Binding::new();
        loop {
            for (i, (m, fs)) in self.metas.iter().enumerate() {
                binding.formulas.insert(m.clone(), fs[idx[i]].clone());
            }
            for (j, m) in self.var_metas.iter().enumerate() {
                binding.vars.insert(m.clone(), self.vars[idx[n + j]]);
            }
            let mut ok = true;
            for sc in self.side_conditions {
                if !sc.holds(&binding)? {
                    ok = false;
                    break;
                }
            }
            if ok && visit(&binding)?.is_break() {
                return Ok(());
            }
            let mut pos = n + k;
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                idx[pos] += 1;
                let limit = if pos < n { self.metas[pos].1.len() } else { self.vars.len() };
                if idx[pos] < limit {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}
