use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Shared, immutable symbol name.
pub type Name = Arc<str>;

/// Individual variable `x<n>`, `n >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Var(pub u32);

/// Propositional variable `p<n>`, `n >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PropVar(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for PropVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// A propositional connective. The four built-in connectives have fixed
/// concrete syntax; every other connective is a nullary constant written by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Connective {
    Not,
    And,
    Or,
    Imp,
    Const(Name),
}

impl Connective {
    pub fn arity(&self) -> usize {
        match self {
            Connective::Not => 1,
            Connective::And | Connective::Or | Connective::Imp => 2,
            Connective::Const(_) => 0,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Connective::Not => "not",
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Imp => "imp",
            Connective::Const(n) => n,
        }
    }

    /// Resolves a primitive name as written in fixture files.
    pub fn from_name(name: &str) -> Connective {
        match name {
            "not" => Connective::Not,
            "and" => Connective::And,
            "or" => Connective::Or,
            "imp" => Connective::Imp,
            other => Connective::Const(other.into()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn name(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }

    pub fn from_name(name: &str) -> Option<Quantifier> {
        match name {
            "forall" => Some(Quantifier::Forall),
            "exists" => Some(Quantifier::Exists),
            _ => None,
        }
    }
}

/// Formula over a monadic first-order signature.
///
/// Children are reference counted so that enumeration and closure can share
/// subterms; cloning a formula is O(1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(PropVar),
    Atom(Name, Var),
    Conn(Connective, Arc<[Formula]>),
    Quant(Quantifier, Var, Arc<Formula>),
}

impl Formula {
    pub fn prop(n: u32) -> Formula {
        Formula::Prop(PropVar(n))
    }

    pub fn atom(pred: &str, var: u32) -> Formula {
        Formula::Atom(pred.into(), Var(var))
    }

    pub fn constant(name: &str) -> Formula {
        Formula::Conn(Connective::Const(name.into()), Arc::from(Vec::new()))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Conn(Connective::Not, Arc::from(vec![f]))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Conn(Connective::Imp, Arc::from(vec![a, b]))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::Conn(Connective::And, Arc::from(vec![a, b]))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Conn(Connective::Or, Arc::from(vec![a, b]))
    }

    pub fn forall(var: u32, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, Var(var), Arc::new(body))
    }

    pub fn exists(var: u32, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, Var(var), Arc::new(body))
    }

    /// Node depth: atoms, propositional variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Atom(..) => 0,
            Formula::Conn(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
            Formula::Quant(_, _, body) => body.depth() + 1,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Atom(..) => 1,
            Formula::Conn(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
            Formula::Quant(_, _, body) => 1 + body.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Prop(_) => {}
            Formula::Atom(_, v) => {
                if !bound.contains(v) {
                    out.insert(*v);
                }
            }
            Formula::Conn(_, args) => args.iter().for_each(|a| a.collect_free(bound, out)),
            Formula::Quant(_, v, body) => {
                bound.push(*v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, var: Var) -> bool {
        match self {
            Formula::Prop(_) => false,
            Formula::Atom(_, v) => *v == var,
            Formula::Conn(_, args) => args.iter().any(|a| a.is_free(var)),
            Formula::Quant(_, v, body) => *v != var && body.is_free(var),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every individual variable occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, v) | Formula::Quant(_, v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    pub fn prop_vars(&self) -> BTreeSet<PropVar> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(*p);
            }
        });
        out
    }

    pub fn predicates(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, visitor: &mut F) {
        visitor(self);
        match self {
            Formula::Conn(_, args) => args.iter().for_each(|a| a.visit(visitor)),
            Formula::Quant(_, _, body) => body.visit(visitor),
            _ => {}
        }
    }

    pub fn is_propositional(&self) -> bool {
        let mut ok = true;
        self.visit(&mut |f| {
            if matches!(f, Formula::Atom(..) | Formula::Quant(..)) {
                ok = false;
            }
        });
        ok
    }

    /// Splits `a -> b` into its two sides.
    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Conn(Connective::Imp, args) => Some((&args[0], &args[1])),
            _ => None,
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
