use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::formula::{Connective, Formula, Name, PropVar, Quantifier, Var};
use crate::error::{Error, Result};

/// Position of an individual variable inside a template: either a concrete
/// variable or a variable metavariable (`x`, `y`, `z`, `$v`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VarTerm {
    Var(Var),
    Meta(Name),
}

impl fmt::Display for VarTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarTerm::Var(v) => write!(f, "{v}"),
            VarTerm::Meta(m) => f.write_str(m),
        }
    }
}

/// A formula-shaped tree whose leaves may be formula metavariables
/// (`Phi`, `Psi`, `Chi`, `$1`, ...).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    Meta(Name),
    Prop(PropVar),
    Atom(Name, VarTerm),
    Conn(Connective, Vec<Template>),
    Quant(Quantifier, VarTerm, Box<Template>),
}

impl fmt::Debug for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<&Formula> for Template {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::Prop(p) => Template::Prop(*p),
            Formula::Atom(p, v) => Template::Atom(p.clone(), VarTerm::Var(*v)),
            Formula::Conn(c, args) => Template::Conn(c.clone(), args.iter().map(Template::from).collect()),
            Formula::Quant(q, v, body) => Template::Quant(*q, VarTerm::Var(*v), Box::new(Template::from(&**body))),
        }
    }
}

impl Template {
    pub fn meta(name: &str) -> Template {
        Template::Meta(name.into())
    }

    pub fn depth(&self) -> usize {
        match self {
            Template::Meta(_) | Template::Prop(_) | Template::Atom(..) => 0,
            Template::Conn(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
            Template::Quant(_, _, body) => body.depth() + 1,
        }
    }

    /// Formula metavariables in order of first occurrence (left to right).
    pub fn metas(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Template::Meta(m) = t {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
        });
        out
    }

    /// Variable metavariables in order of first occurrence.
    pub fn var_metas(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.visit(&mut |t| match t {
            Template::Atom(_, VarTerm::Meta(m)) | Template::Quant(_, VarTerm::Meta(m), _) => {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
            _ => {}
        });
        out
    }

    /// Deepest position at which each formula metavariable occurs.
    pub fn meta_depths(&self) -> BTreeMap<Name, usize> {
        fn go(t: &Template, at: usize, out: &mut BTreeMap<Name, usize>) {
            match t {
                Template::Meta(m) => {
                    let e = out.entry(m.clone()).or_insert(at);
                    *e = (*e).max(at);
                }
                Template::Conn(_, args) => args.iter().for_each(|a| go(a, at + 1, out)),
                Template::Quant(_, _, body) => go(body, at + 1, out),
                _ => {}
            }
        }
        let mut out = BTreeMap::new();
        go(self, 0, &mut out);
        out
    }

    pub fn visit<F: FnMut(&Template)>(&self, visitor: &mut F) {
        visitor(self);
        match self {
            Template::Conn(_, args) => args.iter().for_each(|a| a.visit(visitor)),
            Template::Quant(_, _, body) => body.visit(visitor),
            _ => {}
        }
    }

    /// Primitives used by the template itself (metavariables excluded).
    pub fn connectives(&self) -> BTreeSet<Connective> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Template::Conn(c, _) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn quantifiers(&self) -> BTreeSet<Quantifier> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Template::Quant(q, _, _) = t {
                out.insert(*q);
            }
        });
        out
    }

    /// Replaces metavariables by formulas. Fails on any unbound metavariable.
    pub fn fill(&self, binding: &Binding) -> Result<Formula> {
        Ok(match self {
            Template::Meta(m) => binding
                .formulas
                .get(m)
                .cloned()
                .ok_or_else(|| Error::IncompleteBinding(m.to_string()))?,
            Template::Prop(p) => Formula::Prop(*p),
            Template::Atom(p, v) => Formula::Atom(p.clone(), binding.resolve_var(v)?),
            Template::Conn(c, args) => Formula::Conn(c.clone(), args.iter().map(|a| a.fill(binding)).collect::<Result<Vec<_>>>()?.into()),
            Template::Quant(q, v, body) => Formula::Quant(*q, binding.resolve_var(v)?, Arc::new(body.fill(binding)?)),
        })
    }

    /// Replaces metavariables by templates, leaving unmapped ones in place.
    pub fn substitute(&self, formulas: &BTreeMap<Name, Template>, vars: &BTreeMap<Name, VarTerm>) -> Template {
        let var = |v: &VarTerm| match v {
            VarTerm::Meta(m) => vars.get(m).cloned().unwrap_or_else(|| v.clone()),
            other => other.clone(),
        };
        match self {
            Template::Meta(m) => formulas.get(m).cloned().unwrap_or_else(|| self.clone()),
            Template::Prop(_) => self.clone(),
            Template::Atom(p, v) => Template::Atom(p.clone(), var(v)),
            Template::Conn(c, args) => Template::Conn(c.clone(), args.iter().map(|a| a.substitute(formulas, vars)).collect()),
            Template::Quant(q, v, body) => Template::Quant(*q, var(v), Box::new(body.substitute(formulas, vars))),
        }
    }

    /// Leftmost-outermost matching against `f`, extending `binding`.
    /// Returns false (leaving `binding` in an unspecified state) on mismatch.
    pub fn match_into(&self, f: &Formula, binding: &mut Binding) -> bool {
        match (self, f) {
            (Template::Meta(m), _) => match binding.formulas.get(m) {
                Some(bound) => bound == f,
                None => {
                    binding.formulas.insert(m.clone(), f.clone());
                    true
                }
            },
            (Template::Prop(p), Formula::Prop(q)) => p == q,
            (Template::Atom(p, vt), Formula::Atom(q, v)) => p == q && binding.match_var(vt, *v),
            (Template::Conn(c, targs), Formula::Conn(d, fargs)) => {
                c == d && targs.len() == fargs.len() && targs.iter().zip(fargs.iter()).all(|(t, a)| t.match_into(a, binding))
            }
            (Template::Quant(q, vt, tbody), Formula::Quant(r, v, fbody)) => {
                q == r && binding.match_var(vt, *v) && tbody.match_into(fbody, binding)
            }
            _ => false,
        }
    }

    /// Converts a metavariable-free template into a formula.
    pub fn to_formula(&self) -> Option<Formula> {
        self.fill(&Binding::default()).ok()
    }
}

/// Assignment of formulas to formula metavariables and variables to
/// variable metavariables.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Binding {
    pub formulas: BTreeMap<Name, Formula>,
    pub vars: BTreeMap<Name, Var>,
}

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    pub fn with_formula(mut self, meta: &str, f: Formula) -> Self {
        self.formulas.insert(meta.into(), f);
        self
    }

    pub fn with_var(mut self, meta: &str, v: u32) -> Self {
        self.vars.insert(meta.into(), Var(v));
        self
    }

    fn resolve_var(&self, v: &VarTerm) -> Result<Var> {
        match v {
            VarTerm::Var(v) => Ok(*v),
            VarTerm::Meta(m) => self.vars.get(m).copied().ok_or_else(|| Error::IncompleteBinding(m.to_string())),
        }
    }

    fn match_var(&mut self, term: &VarTerm, v: Var) -> bool {
        match term {
            VarTerm::Var(w) => *w == v,
            VarTerm::Meta(m) => match self.vars.get(m) {
                Some(w) => *w == v,
                None => {
                    self.vars.insert(m.clone(), v);
                    true
                }
            },
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .formulas
            .iter()
            .map(|(k, v)| format!("{k} := {v}"))
            .chain(self.vars.iter().map(|(k, v)| format!("{k} := {v}")));
        write!(f, "{{{}}}", parts.collect::<Vec<_>>().join(", "))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SideCondition {
    /// The variable bound to `var` does not occur free in the formula bound to `formula`.
    NotFreeIn { var: Name, formula: Name },
    /// The formula bound to the metavariable has no free variables.
    Closed(Name),
}

impl SideCondition {
    pub fn holds(&self, binding: &Binding) -> Result<bool> {
        Ok(match self {
            SideCondition::NotFreeIn { var, formula } => {
                let v = binding.vars.get(var).ok_or_else(|| Error::IncompleteBinding(var.to_string()))?;
                let f = binding
                    .formulas
                    .get(formula)
                    .ok_or_else(|| Error::IncompleteBinding(formula.to_string()))?;
                !f.is_free(*v)
            }
            SideCondition::Closed(m) => binding
                .formulas
                .get(m)
                .ok_or_else(|| Error::IncompleteBinding(m.to_string()))?
                .is_closed(),
        })
    }

    pub fn metas(&self) -> (Option<&Name>, &Name) {
        match self {
            SideCondition::NotFreeIn { var, formula } => (Some(var), formula),
            SideCondition::Closed(m) => (None, m),
        }
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::NotFreeIn { var, formula } => write!(f, "[{var} not free in {formula}]"),
            SideCondition::Closed(m) => write!(f, "[{m} closed]"),
        }
    }
}

/// Formula template plus side conditions; its instances are the formulas
/// obtained by uniform substitution.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Schema {
    pub template: Template,
    pub side_conditions: Vec<SideCondition>,
}

impl Schema {
    pub fn new(template: Template, side_conditions: Vec<SideCondition>) -> Result<Schema> {
        let metas = template.metas();
        let var_metas = template.var_metas();
        for sc in &side_conditions {
            let (var, formula) = sc.metas();
            if !metas.contains(formula) || var.is_some_and(|v| !var_metas.contains(v)) {
                return Err(Error::Invalid(format!(
                    "side condition {sc} mentions a metavariable absent from `{template}`"
                )));
            }
        }
        Ok(Schema { template, side_conditions })
    }

    pub fn plain(template: Template) -> Schema {
        Schema {
            template,
            side_conditions: Vec::new(),
        }
    }

    pub fn check_side_conditions(&self, binding: &Binding) -> Result<()> {
        for sc in &self.side_conditions {
            if !sc.holds(binding)? {
                return Err(Error::SideConditionViolated(format!("{sc} fails under {binding}")));
            }
        }
        Ok(())
    }

    pub fn instantiate(&self, binding: &Binding) -> Result<Formula> {
        let f = self.template.fill(binding)?;
        self.check_side_conditions(binding)?;
        Ok(f)
    }

    /// Returns the binding under which `f` is an instance, if any.
    pub fn match_formula(&self, f: &Formula) -> Option<Binding> {
        let mut binding = Binding::new();
        if !self.template.match_into(f, &mut binding) {
            return None;
        }
        self.check_side_conditions(&binding).ok()?;
        Some(binding)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.template)?;
        for sc in &self.side_conditions {
            write!(f, " {sc}")?;
        }
        Ok(())
    }
}
