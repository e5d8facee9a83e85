use std::collections::BTreeSet;
use std::fmt;

use super::formula::{Connective, Formula, Name, Quantifier};
use crate::error::{Error, Result};

/// How many variables of a kind (`p<n>` or `x<n>`) a signature admits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarFamily {
    Absent,
    UpTo(u32),
    Unbounded,
}

impl VarFamily {
    pub fn admits(self, index: u32) -> bool {
        index >= 1
            && match self {
                VarFamily::Absent => false,
                VarFamily::UpTo(n) => index <= n,
                VarFamily::Unbounded => true,
            }
    }

    /// Number of variables usable when enumerating under `limit`.
    pub fn truncate(self, limit: u32) -> u32 {
        match self {
            VarFamily::Absent => 0,
            VarFamily::UpTo(n) => n.min(limit),
            VarFamily::Unbounded => limit,
        }
    }
}

impl fmt::Display for VarFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarFamily::Absent => write!(f, "none"),
            VarFamily::UpTo(n) => write!(f, "{n}"),
            VarFamily::Unbounded => write!(f, "unbounded"),
        }
    }
}

impl std::str::FromStr for VarFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" | "0" => Ok(VarFamily::Absent),
            "unbounded" | "*" => Ok(VarFamily::Unbounded),
            n => n
                .parse::<u32>()
                .map(VarFamily::UpTo)
                .map_err(|_| format!("bad variable family `{n}`")),
        }
    }
}

/// A logical primitive: a connective or a quantifier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Primitive {
    Conn(Connective),
    Quant(Quantifier),
}

impl Primitive {
    pub fn from_name(name: &str) -> Primitive {
        match Quantifier::from_name(name) {
            Some(q) => Primitive::Quant(q),
            None => Primitive::Conn(Connective::from_name(name)),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Primitive::Conn(c) => c.name(),
            Primitive::Quant(q) => q.name(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Primitive::Conn(c) => c.arity(),
            Primitive::Quant(_) => 1,
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const RESERVED: &[&str] = &["forall", "exists", "not", "and", "or", "imp", "by"];

/// Vocabulary of a language: variable supplies, unary predicates, connectives
/// and quantifiers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    pub props: VarFamily,
    pub vars: VarFamily,
    pub predicates: BTreeSet<Name>,
    pub connectives: BTreeSet<Connective>,
    pub quantifiers: BTreeSet<Quantifier>,
}

impl Signature {
    pub fn new(props: VarFamily, vars: VarFamily) -> Self {
        Signature {
            props,
            vars,
            predicates: BTreeSet::new(),
            connectives: BTreeSet::new(),
            quantifiers: BTreeSet::new(),
        }
    }

    /// Propositional signature with the given primitives and unboundedly many `p<n>`.
    pub fn propositional(primitives: &[&str]) -> Result<Self> {
        Signature::new(VarFamily::Unbounded, VarFamily::Absent).with_primitives(primitives)
    }

    /// Monadic signature with the given predicates and primitives, no propositional variables.
    pub fn monadic(predicates: &[&str], primitives: &[&str]) -> Result<Self> {
        let mut sig = Signature::new(VarFamily::Absent, VarFamily::Unbounded);
        sig.predicates = predicates.iter().map(|p| Name::from(*p)).collect();
        sig.with_primitives(primitives)
    }

    /// Everything the concrete grammar can spell, with predicates `P`, `Q`, `R`.
    pub fn permissive() -> Self {
        let mut sig = Signature::new(VarFamily::Unbounded, VarFamily::Unbounded);
        sig.predicates = ["P", "Q", "R"].iter().map(|p| Name::from(*p)).collect();
        sig.with_primitives(&["not", "and", "or", "imp", "bot", "top", "forall", "exists"])
            .expect("built-in primitives are valid")
    }

    pub fn with_primitives(mut self, primitives: &[&str]) -> Result<Self> {
        for p in primitives {
            self.add_primitive(Primitive::from_name(p));
        }
        self.validate()?;
        Ok(self)
    }

    pub fn add_primitive(&mut self, p: Primitive) {
        match p {
            Primitive::Conn(c) => {
                self.connectives.insert(c);
            }
            Primitive::Quant(q) => {
                self.quantifiers.insert(q);
            }
        }
    }

    pub fn primitives(&self) -> Vec<Primitive> {
        self.connectives
            .iter()
            .cloned()
            .map(Primitive::Conn)
            .chain(self.quantifiers.iter().copied().map(Primitive::Quant))
            .collect()
    }

    pub fn has_primitive(&self, p: &Primitive) -> bool {
        match p {
            Primitive::Conn(c) => self.connectives.contains(c),
            Primitive::Quant(q) => self.quantifiers.contains(q),
        }
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.connectives.iter().any(|c| matches!(c, Connective::Const(n) if &**n == name))
    }

    /// Checks that names are pairwise distinct across categories and do not
    /// collide with reserved words or variable spellings.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let consts = self.connectives.iter().filter_map(|c| match c {
            Connective::Const(n) => Some(n.clone()),
            _ => None,
        });
        for name in self.predicates.iter().cloned().chain(consts) {
            if !is_identifier(&name) {
                return Err(Error::Invalid(format!("`{name}` is not an identifier")));
            }
            if RESERVED.contains(&&*name) || is_var_spelling(&name) || is_meta_spelling(&name) {
                return Err(Error::Invalid(format!("`{name}` is a reserved spelling")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Invalid(format!("`{name}` is used both as a predicate and a constant")));
            }
        }
        Ok(())
    }

    /// The same signature restricted to the single individual variable `x1`.
    pub fn one_variable(&self) -> Signature {
        Signature {
            vars: match self.vars {
                VarFamily::Absent => VarFamily::Absent,
                _ => VarFamily::UpTo(1),
            },
            ..self.clone()
        }
    }

    /// Fails with `SignatureMismatch` unless every symbol of `f` belongs here.
    pub fn check(&self, f: &Formula) -> Result<()> {
        let mut problem = None;
        f.visit(&mut |node| {
            if problem.is_some() {
                return;
            }
            match node {
                Formula::Prop(p) if !self.props.admits(p.0) => problem = Some(format!("propositional variable {p}")),
                Formula::Atom(pred, v) => {
                    if !self.predicates.contains(pred) {
                        problem = Some(format!("predicate {pred}"));
                    } else if !self.vars.admits(v.0) {
                        problem = Some(format!("variable {v}"));
                    }
                }
                Formula::Conn(c, _) if !self.connectives.contains(c) => problem = Some(format!("connective {}", c.name())),
                Formula::Quant(q, v, _) => {
                    if !self.quantifiers.contains(q) {
                        problem = Some(format!("quantifier {}", q.name()));
                    } else if !self.vars.admits(v.0) {
                        problem = Some(format!("variable {v}"));
                    }
                }
                _ => {}
            }
        });
        match problem {
            None => Ok(()),
            Some(p) => Err(Error::SignatureMismatch(format!("{p} is not in the signature of `{f}`"))),
        }
    }

    pub fn describe_primitives(&self) -> String {
        self.primitives().iter().map(|p| p.name().to_owned()).collect::<Vec<_>>().join(" ")
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn indexed(s: &str, prefix: char) -> Option<u32> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn is_var_spelling(s: &str) -> bool {
    indexed(s, 'p').is_some() || indexed(s, 'x').is_some() || matches!(s, "x" | "y" | "z")
}

pub(crate) fn is_meta_spelling(s: &str) -> bool {
    ["Phi", "Psi", "Chi"]
        .iter()
        .any(|m| s.strip_prefix(m).is_some_and(|rest| rest.bytes().all(|b| b.is_ascii_digit())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_clashing_names() {
        let mut sig = Signature::monadic(&["P"], &["not"]).unwrap();
        sig.add_primitive(Primitive::from_name("P"));
        assert!(sig.validate().is_err());
        assert!(Signature::propositional(&["p1"]).is_err());
        assert!(Signature::propositional(&["Phi"]).is_err());
    }

    #[test]
    fn one_variable_mode_truncates() {
        let sig = Signature::monadic(&["P"], &["not", "imp", "exists"]).unwrap();
        let one = sig.one_variable();
        assert!(one.vars.admits(1));
        assert!(!one.vars.admits(2));
        assert_eq!(one.connectives, sig.connectives);
    }

    #[test]
    fn check_reports_foreign_symbols() {
        let sig = Signature::propositional(&["not", "imp"]).unwrap();
        assert!(sig.check(&Formula::imp(Formula::prop(1), Formula::prop(2))).is_ok());
        let err = sig.check(&Formula::and(Formula::prop(1), Formula::prop(2)));
        assert!(matches!(err, Err(Error::SignatureMismatch(_))));
    }
}
