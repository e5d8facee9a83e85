//! Formulas grouped by semantic value, and template evaluation over those
//! groups, so that schema instances can be checked class by class.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::semantics::Algebra;
use crate::syntax::{Binding, Connective, Formula, Name, PropVar, Quantifier, SideCondition, Signature, Template, Var, VarTerm};

/// Variables, propositional letters and predicates that fill metavariables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pool {
    pub vars: Vec<Var>,
    pub props: Vec<PropVar>,
    pub predicates: Vec<Name>,
    pub constants: Vec<Connective>,
    pub connectives: Vec<Connective>,
    pub quantifiers: Vec<Quantifier>,
}

impl Pool {
    pub fn new(sig: &Signature, vars: u32, props: u32) -> Pool {
        Pool {
            vars: (1..=sig.vars.truncate(vars)).map(Var).collect(),
            props: (1..=sig.props.truncate(props)).map(PropVar).collect(),
            predicates: sig.predicates.iter().cloned().collect(),
            constants: sig.connectives.iter().filter(|c| c.arity() == 0).cloned().collect(),
            connectives: sig.connectives.iter().filter(|c| c.arity() > 0).cloned().collect(),
            quantifiers: sig.quantifiers.iter().copied().collect(),
        }
    }

    fn leaves(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self.props.iter().map(|p| Formula::Prop(*p)).collect();
        for pred in &self.predicates {
            out.extend(self.vars.iter().map(|v| Formula::Atom(pred.clone(), *v)));
        }
        out.extend(self.constants.iter().map(|c| Formula::Conn(c.clone(), Arc::from(Vec::new()))));
        out
    }
}

/// All formulas sharing a value and a set of free variables.
#[derive(Clone, Debug)]
pub struct Class<V> {
    pub value: V,
    /// Bit `i` set iff `x{i}` is free.
    pub fv: u64,
    /// Number of formulas in the class (within the depth bound).
    pub count: u128,
    /// The first formula found in the class; `None` for table-level pseudo-classes.
    pub witness: Option<Formula>,
}

fn fv_mask(f: &Formula) -> Result<u64> {
    f.free_vars().into_iter().try_fold(0u64, |acc, v| {
        if v.0 >= 64 {
            Err(Error::ResourceCap(format!("variable {v}")))
        } else {
            Ok(acc | 1 << v.0)
        }
    })
}

/// Classes of all formulas over `pool` of depth `<= d`, for each `d` in `0..=depth`.
pub fn realized_classes<A: Algebra>(alg: &A, pool: &Pool, depth: usize, max_classes: usize) -> Result<Vec<Vec<Class<A::Value>>>> {
    let mut base: Vec<Class<A::Value>> = Vec::new();
    let mut index: HashMap<(A::Value, u64), usize> = HashMap::new();
    for leaf in pool.leaves() {
        let key = (alg.eval(&leaf)?, fv_mask(&leaf)?);
        match index.get(&key) {
            Some(&i) => base[i].count += 1,
            None => {
                index.insert(key, base.len());
                base.push(Class {
                    value: key.0,
                    fv: key.1,
                    count: 1,
                    witness: Some(leaf),
                });
            }
        }
    }
    let mut levels = vec![base.clone()];
    for _ in 1..=depth {
        let prev = levels.last().expect("level 0 exists");
        let mut next = base.clone();
        let mut index: HashMap<(A::Value, u64), usize> = next.iter().enumerate().map(|(i, c)| ((c.value, c.fv), i)).collect();
        let mut add = |value: A::Value, fv: u64, count: u128, make: &dyn Fn() -> Formula| -> Result<()> {
            match index.get(&(value, fv)) {
                Some(&i) => next[i].count = next[i].count.saturating_add(count),
                None => {
                    if next.len() >= max_classes {
                        return Err(Error::ResourceCap(format!("more than {max_classes} value classes")));
                    }
                    index.insert((value, fv), next.len());
                    next.push(Class {
                        value,
                        fv,
                        count,
                        witness: Some(make()),
                    });
                }
            }
            Ok(())
        };
        for c in &pool.connectives {
            let arity = c.arity();
            let mut idx = vec![0usize; arity];
            'tuples: loop {
                let vals: Vec<A::Value> = idx.iter().map(|&i| prev[i].value).collect();
                let fv = idx.iter().fold(0, |acc, &i| acc | prev[i].fv);
                let count = idx.iter().fold(1u128, |acc, &i| acc.saturating_mul(prev[i].count));
                let value = alg.connective(c, &vals)?;
                add(value, fv, count, &|| {
                    let args: Vec<Formula> = idx.iter().map(|&i| prev[i].witness.clone().expect("realized")).collect();
                    Formula::Conn(c.clone(), Arc::from(args))
                })?;
                for slot in (0..arity).rev() {
                    idx[slot] += 1;
                    if idx[slot] < prev.len() {
                        continue 'tuples;
                    }
                    idx[slot] = 0;
                }
                break;
            }
        }
        for &q in &pool.quantifiers {
            for &v in &pool.vars {
                for body in prev {
                    let value = alg.quantifier(q, v, body.value)?;
                    add(value, body.fv & !(1 << v.0), body.count, &|| {
                        Formula::Quant(q, v, Arc::new(body.witness.clone().expect("realized")))
                    })?;
                }
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

#[derive(Clone, Debug)]
enum Node {
    Meta(usize),
    Leaf(Formula),
    Atom(Name, usize),
    Conn(Connective, Vec<Node>),
    Quant(Quantifier, Slot, Box<Node>),
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Fixed(Var),
    Meta(usize),
}

/// A template with metavariables replaced by positions, for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub metas: Vec<Name>,
    pub var_metas: Vec<Name>,
    templates: Vec<Template>,
    roots: Vec<Node>,
}

impl Compiled {
    /// Compiles several templates sharing one metavariable scope.
    pub fn new(templates: &[&Template]) -> Compiled {
        let mut metas = Vec::new();
        let mut var_metas = Vec::new();
        for t in templates {
            for m in t.metas() {
                if !metas.contains(&m) {
                    metas.push(m);
                }
            }
            for m in t.var_metas() {
                if !var_metas.contains(&m) {
                    var_metas.push(m);
                }
            }
        }
        let roots = templates.iter().map(|t| node(t, &metas, &var_metas)).collect();
        Compiled {
            metas,
            var_metas,
            templates: templates.iter().map(|t| (*t).clone()).collect(),
            roots,
        }
    }

    pub fn eval<A: Algebra>(&self, alg: &A, root: usize, metas: &[A::Value], vars: &[Var]) -> Result<A::Value> {
        eval(&self.roots[root], alg, metas, vars)
    }

    pub fn roots(&self) -> usize {
        self.roots.len()
    }

    fn meta_index(&self, name: &Name) -> Option<usize> {
        self.metas.iter().position(|m| m == name)
    }

    fn var_index(&self, name: &Name) -> Option<usize> {
        self.var_metas.iter().position(|m| m == name)
    }
}

fn node(t: &Template, metas: &[Name], var_metas: &[Name]) -> Node {
    let slot = |v: &VarTerm| match v {
        VarTerm::Var(v) => Slot::Fixed(*v),
        VarTerm::Meta(m) => Slot::Meta(var_metas.iter().position(|x| x == m).expect("collected")),
    };
    match t {
        Template::Meta(m) => Node::Meta(metas.iter().position(|x| x == m).expect("collected")),
        Template::Prop(p) => Node::Leaf(Formula::Prop(*p)),
        Template::Atom(pred, VarTerm::Var(v)) => Node::Leaf(Formula::Atom(pred.clone(), *v)),
        Template::Atom(pred, v) => match slot(v) {
            Slot::Meta(i) => Node::Atom(pred.clone(), i),
            Slot::Fixed(_) => unreachable!("fixed variables are handled above"),
        },
        Template::Conn(c, args) => Node::Conn(c.clone(), args.iter().map(|a| node(a, metas, var_metas)).collect()),
        Template::Quant(q, v, body) => Node::Quant(*q, slot(v), Box::new(node(body, metas, var_metas))),
    }
}

fn eval<A: Algebra>(n: &Node, alg: &A, metas: &[A::Value], vars: &[Var]) -> Result<A::Value> {
    match n {
        Node::Meta(i) => Ok(metas[*i]),
        Node::Leaf(f) => alg.eval(f),
        Node::Atom(pred, i) => alg.leaf(&Formula::Atom(pred.clone(), vars[*i])),
        Node::Conn(c, args) => {
            let vals = args.iter().map(|a| eval(a, alg, metas, vars)).collect::<Result<Vec<_>>>()?;
            alg.connective(c, &vals)
        }
        Node::Quant(q, slot, body) => {
            let v = match slot {
                Slot::Fixed(v) => *v,
                Slot::Meta(i) => vars[*i],
            };
            alg.quantifier(*q, v, eval(body, alg, metas, vars)?)
        }
    }
}

/// Outcome of checking one schema or rule over every tuple of classes.
#[derive(Clone, Debug, Default)]
pub struct Sweep {
    /// Class (or value) tuples examined.
    pub tuples: u64,
    /// Formula instances those tuples stand for.
    pub instances: u128,
    /// Metavariable assignment of the first failing tuple.
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug)]
pub struct Failure {
    /// Instance formulas (premises then conclusion, or the axiom instance), if realized.
    pub formulas: Vec<Formula>,
    /// `meta = value` for every metavariable, and `x = var` for variable metas.
    pub assignment: Vec<String>,
}

/// Checks `accept(values)` on every assignment of classes to the compiled
/// metavariables and pool variables to variable metavariables, honouring
/// side conditions. Stops at the first rejected tuple in enumeration order.
pub fn sweep<A, F>(
    alg: &A,
    compiled: &Compiled,
    side_conditions: &[SideCondition],
    classes: &[Class<A::Value>],
    vars: &[Var],
    accept: F,
) -> Result<Sweep>
where
    A: Algebra,
    F: Fn(&[A::Value]) -> bool + Sync,
{
    let k = compiled.metas.len();
    let kv = compiled.var_metas.len();
    if k > 0 && classes.is_empty() || kv > 0 && vars.is_empty() {
        return Ok(Sweep::default());
    }
    let var_tuples = product(vars.len(), kv);
    let side: Vec<(Option<usize>, usize)> = side_conditions
        .iter()
        .filter_map(|sc| match sc {
            SideCondition::NotFreeIn { var, formula } => Some((Some(compiled.var_index(var)?), compiled.meta_index(formula)?)),
            SideCondition::Closed(m) => Some((None, compiled.meta_index(m)?)),
        })
        .collect();
    let first_range = if k == 0 { 1 } else { classes.len() };
    let results: Vec<Result<Sweep>> = (0..first_range)
        .into_par_iter()
        .map(|first| {
            let mut out = Sweep::default();
            let mut idx = vec![0usize; k];
            if k > 0 {
                idx[0] = first;
            }
            let mut values: Vec<A::Value> = Vec::with_capacity(k);
            for var_idx in &var_tuples {
                let chosen: Vec<Var> = var_idx.iter().map(|&i| vars[i]).collect();
                for slot in idx.iter_mut().skip(1) {
                    *slot = 0;
                }
                'tuples: loop {
                    let ok = side.iter().all(|&(v, m)| {
                        let fv = classes[idx[m]].fv;
                        match v {
                            Some(v) => fv >> chosen[v].0 & 1 == 0,
                            None => fv == 0,
                        }
                    });
                    if ok {
                        values.clear();
                        values.extend(idx.iter().map(|&i| classes[i].value));
                        let mut vals = Vec::with_capacity(compiled.roots());
                        for r in 0..compiled.roots() {
                            vals.push(compiled.eval(alg, r, &values, &chosen)?);
                        }
                        out.tuples += 1;
                        out.instances = out
                            .instances
                            .saturating_add(idx.iter().fold(1u128, |acc, &i| acc.saturating_mul(classes[i].count)));
                        if !accept(&vals) {
                            out.failure = Some(describe(alg, compiled, classes, &idx, &chosen, &vals));
                            return Ok(out);
                        }
                    }
                    for slot in (1..k).rev() {
                        idx[slot] += 1;
                        if idx[slot] < classes.len() {
                            continue 'tuples;
                        }
                        idx[slot] = 0;
                    }
                    break;
                }
            }
            Ok(out)
        })
        .collect();
    let mut total = Sweep::default();
    for r in results {
        let r = r?;
        total.tuples += r.tuples;
        total.instances = total.instances.saturating_add(r.instances);
        if r.failure.is_some() {
            total.failure = r.failure;
            break;
        }
    }
    Ok(total)
}

fn describe<A: Algebra>(
    alg: &A,
    compiled: &Compiled,
    classes: &[Class<A::Value>],
    idx: &[usize],
    vars: &[Var],
    vals: &[A::Value],
) -> Failure {
    let mut assignment: Vec<String> = compiled
        .metas
        .iter()
        .zip(idx)
        .map(|(m, &i)| match &classes[i].witness {
            Some(w) => format!("{m} := {w}"),
            None => format!("{m} = {}", alg.show(classes[i].value)),
        })
        .collect();
    assignment.extend(compiled.var_metas.iter().zip(vars).map(|(m, v)| format!("{m} := {v}")));
    assignment.extend(vals.iter().enumerate().map(|(r, v)| format!("value {} = {}", r + 1, alg.show(*v))));
    let mut binding = Binding::new();
    let mut realized = true;
    for (m, &i) in compiled.metas.iter().zip(idx) {
        match &classes[i].witness {
            Some(w) => binding.formulas.insert(m.clone(), w.clone()),
            None => {
                realized = false;
                None
            }
        };
    }
    for (m, v) in compiled.var_metas.iter().zip(vars) {
        binding.vars.insert(m.clone(), *v);
    }
    let formulas = if realized {
        compiled.templates.iter().filter_map(|t| t.fill(&binding).ok()).collect()
    } else {
        Vec::new()
    };
    Failure { formulas, assignment }
}

/// Every `len`-tuple over `0..n`, first position most significant.
fn product(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Pseudo-classes standing for every value of a finite algebra, with no witness.
pub fn value_classes<V: Copy>(values: impl IntoIterator<Item = V>) -> Vec<Class<V>> {
    values
        .into_iter()
        .map(|value| Class {
            value,
            fv: 0,
            count: 1,
            witness: None,
        })
        .collect()
}
