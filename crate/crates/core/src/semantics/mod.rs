//! Finite semantics: generalized models over powersets, the starred
//! satisfaction relation, propositional matrices and classical validity.

mod classical;
mod matrix;
mod star;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::hash::Hash;

pub use classical::{classically_valid, find_countermodel, monadic_bound, Countermodel, Structure};
pub use matrix::{eval_matrix, Matrix, MatrixAt};
pub use star::{eval_star, true_star, StarAlgebra, StarValue};

use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula, Name, Primitive, Quantifier, Var};
use crate::text;

/// Largest domain a generalized model may have (tables are indexed by subsets).
pub const MAX_DOMAIN: usize = 6;

/// A subset of the domain as a bitmask over element indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        Subset((1u64 << n) - 1)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Domain {
    pub elements: Vec<Name>,
    /// Index of the distinguished element.
    pub distinguished: usize,
}

impl Domain {
    pub fn new(elements: &[&str], distinguished: &str) -> Result<Domain> {
        let elements: Vec<Name> = elements.iter().map(|e| Name::from(*e)).collect();
        if elements.is_empty() {
            return Err(Error::DomainSizeUnsupported(0));
        }
        let distinguished = elements
            .iter()
            .position(|e| &**e == distinguished)
            .ok_or_else(|| Error::Invalid(format!("distinguished element `{distinguished}` is not in the domain")))?;
        let unique: BTreeSet<&Name> = elements.iter().collect();
        if unique.len() != elements.len() {
            return Err(Error::Invalid("repeated domain element".into()));
        }
        Ok(Domain { elements, distinguished })
    }

    /// `{u, v}` with `u` distinguished for size 2, otherwise `e1..en` with `e1` distinguished.
    pub fn standard(n: usize) -> Result<Domain> {
        match n {
            0 => Err(Error::DomainSizeUnsupported(0)),
            2 => Domain::new(&["u", "v"], "u"),
            _ => {
                let names: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                Domain::new(&refs, "e1")
            }
        }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size())
    }

    /// Every subset, in increasing bitmask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..1u64 << self.size()).map(Subset)
    }

    pub fn show(&self, s: Subset) -> String {
        let names: Vec<&str> = (0..self.size()).filter(|&i| s.contains(i)).map(|i| &*self.elements[i]).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses a literal such as `{u,v}`, `{ u }` or `{}`.
    pub fn parse_subset(&self, lit: &str) -> Result<Subset> {
        let inner = lit
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Invalid(format!("`{lit}` is not a subset literal")))?;
        let mut s = Subset::EMPTY;
        for name in inner.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let i = self
                .elements
                .iter()
                .position(|e| &**e == name)
                .ok_or_else(|| Error::Invalid(format!("`{name}` is not a domain element")))?;
            s.0 |= 1 << i;
        }
        Ok(s)
    }
}

/// A total operation on the powerset of the domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperationTable {
    pub arity: usize,
    radix: usize,
    values: Vec<Subset>,
}

impl OperationTable {
    pub fn from_fn(domain: &Domain, arity: usize, mut f: impl FnMut(&[Subset]) -> Subset) -> OperationTable {
        let radix = 1usize << domain.size();
        let cells = radix.pow(arity as u32);
        let mut args = vec![Subset::EMPTY; arity];
        let values = (0..cells)
            .map(|i| {
                decode(i, radix, &mut args);
                f(&args)
            })
            .collect();
        OperationTable { arity, radix, values }
    }

    pub fn get(&self, args: &[Subset]) -> Subset {
        debug_assert_eq!(args.len(), self.arity);
        self.values[encode(args, self.radix)]
    }

    pub fn set(&mut self, args: &[Subset], value: Subset) {
        let i = encode(args, self.radix);
        self.values[i] = value;
    }

    /// `(arguments, value)` for every cell, first argument most significant.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<Subset>, Subset)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| {
            let mut args = vec![Subset::EMPTY; self.arity];
            decode(i, self.radix, &mut args);
            (args, *v)
        })
    }

    pub fn cells(&self) -> usize {
        self.values.len()
    }
}

fn encode(args: &[Subset], radix: usize) -> usize {
    args.iter().fold(0, |acc, a| acc * radix + a.0 as usize)
}

fn decode(mut i: usize, radix: usize, out: &mut [Subset]) {
    for slot in out.iter_mut().rev() {
        *slot = Subset((i % radix) as u64);
        i /= radix;
    }
}

/// A domain with a distinguished element, predicate values, one operation
/// table per primitive and a set of designated values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedModel {
    pub name: String,
    pub domain: Domain,
    pub predicates: BTreeMap<Name, Subset>,
    pub tables: BTreeMap<Primitive, OperationTable>,
    pub designated: BTreeSet<Subset>,
}

/// The Tarskian operation for a built-in primitive on `domain`.
pub fn standard_table(domain: &Domain, p: &Primitive) -> Result<OperationTable> {
    let n = domain.size();
    let full = domain.full();
    Ok(match p {
        Primitive::Conn(c) => match c {
            Connective::Not => OperationTable::from_fn(domain, 1, |a| a[0].complement(n)),
            Connective::And => OperationTable::from_fn(domain, 2, |a| Subset(a[0].0 & a[1].0)),
            Connective::Or => OperationTable::from_fn(domain, 2, |a| Subset(a[0].0 | a[1].0)),
            Connective::Imp => OperationTable::from_fn(domain, 2, |a| Subset(a[0].complement(n).0 | a[1].0)),
            Connective::Const(name) if &**name == "top" => OperationTable::from_fn(domain, 0, |_| full),
            Connective::Const(name) if &**name == "bot" => OperationTable::from_fn(domain, 0, |_| Subset::EMPTY),
            Connective::Const(name) => return Err(Error::MissingTable(name.to_string())),
        },
        Primitive::Quant(Quantifier::Exists) => OperationTable::from_fn(domain, 1, |a| if a[0].is_empty() { Subset::EMPTY } else { full }),
        Primitive::Quant(Quantifier::Forall) => OperationTable::from_fn(domain, 1, |a| if a[0] == full { full } else { Subset::EMPTY }),
    })
}

impl GeneralizedModel {
    /// Tarskian tables for `primitives`, designated value the full domain.
    pub fn standard(domain: Domain, predicates: BTreeMap<Name, Subset>, primitives: &[Primitive]) -> Result<Self> {
        if domain.size() > MAX_DOMAIN {
            return Err(Error::DomainSizeUnsupported(domain.size()));
        }
        let tables = primitives
            .iter()
            .map(|p| Ok((p.clone(), standard_table(&domain, p)?)))
            .collect::<Result<_>>()?;
        Ok(GeneralizedModel {
            name: format!("standard_{}", domain.size()),
            designated: BTreeSet::from([domain.full()]),
            domain,
            predicates,
            tables,
        })
    }

    pub fn table(&self, p: &Primitive) -> Result<&OperationTable> {
        self.tables.get(p).ok_or_else(|| Error::MissingTable(p.name().to_owned()))
    }

    pub fn is_designated(&self, s: Subset) -> bool {
        self.designated.contains(&s)
    }

    pub fn show(&self, s: Subset) -> String {
        self.domain.show(s)
    }

    /// Value of a formula in at most the variable `x1`, by recursive table lookup.
    pub fn value_1var(&self, f: &Formula) -> Result<Subset> {
        Ok(match f {
            Formula::Prop(p) => return Err(Error::Unsupported(format!("propositional variable {p} in a generalized model"))),
            Formula::Atom(pred, v) => {
                one_var(*v, f)?;
                *self
                    .predicates
                    .get(pred)
                    .ok_or_else(|| Error::SignatureMismatch(format!("predicate {pred} has no interpretation")))?
            }
            Formula::Conn(c, args) => {
                let table = self.table(&Primitive::Conn(c.clone()))?;
                let vals = args.iter().map(|a| self.value_1var(a)).collect::<Result<Vec<_>>>()?;
                table.get(&vals)
            }
            Formula::Quant(q, v, body) => {
                one_var(*v, f)?;
                let table = self.table(&Primitive::Quant(*q))?;
                table.get(&[self.value_1var(body)?])
            }
        })
    }

    /// The operation `not(exists(not(X)))`.
    pub fn compose_forall(&self) -> Result<OperationTable> {
        let not = self.table(&Primitive::Conn(Connective::Not))?;
        let exists = self.table(&Primitive::Quant(Quantifier::Exists))?;
        Ok(OperationTable::from_fn(&self.domain, 1, |a| {
            not.get(&[exists.get(&[not.get(&[a[0]])])])
        }))
    }

    /// The same model with `forall` interpreted by [`GeneralizedModel::compose_forall`].
    pub fn with_defined_forall(&self) -> Result<GeneralizedModel> {
        let mut m = self.clone();
        m.tables.insert(Primitive::Quant(Quantifier::Forall), self.compose_forall()?);
        Ok(m)
    }

    /// Parses the `.gmodel` text format.
    pub fn from_text(file: &str, text: &str) -> Result<GeneralizedModel> {
        let mut name = file.to_owned();
        let mut elements: Vec<String> = Vec::new();
        let mut distinguished: Option<String> = None;
        let mut pending: Vec<(usize, &str, &str)> = Vec::new();
        for (line, content) in text::lines(text) {
            let (kw, rest) = text::directive(content);
            match kw {
                "name" => name = rest.to_owned(),
                "domain" => elements = rest.split_whitespace().map(str::to_owned).collect(),
                "distinguished" => distinguished = Some(rest.to_owned()),
                _ => pending.push((line, kw, rest)),
            }
        }
        let refs: Vec<&str> = elements.iter().map(String::as_str).collect();
        let first = refs.first().copied().unwrap_or_default();
        let d = Domain::new(&refs, distinguished.as_deref().unwrap_or(first)).map_err(|e| Error::format(file, 0, e.to_string()))?;
        if d.size() > MAX_DOMAIN {
            return Err(Error::DomainSizeUnsupported(d.size()));
        }
        let mut model = GeneralizedModel {
            name,
            domain: d,
            predicates: BTreeMap::new(),
            tables: BTreeMap::new(),
            designated: BTreeSet::new(),
        };
        let mut current: Option<(Primitive, OperationTable, Vec<bool>)> = None;
        let finish = |cur: Option<(Primitive, OperationTable, Vec<bool>)>, model: &mut GeneralizedModel| -> Result<()> {
            if let Some((p, t, seen)) = cur {
                if let Some(missing) = seen.iter().position(|s| !s) {
                    let (args, _) = t.rows().nth(missing).expect("index in range");
                    let shown: Vec<String> = args.iter().map(|a| model.domain.show(*a)).collect();
                    return Err(Error::format(file, 0, format!("table {p} has no row for {}", shown.join(" "))));
                }
                model.tables.insert(p, t);
            }
            Ok(())
        };
        for (line, kw, rest) in pending {
            let bad = |m: String| Error::format(file, line, m);
            match kw {
                "predicate" => {
                    let (pred, lit) = rest.split_once('=').ok_or_else(|| bad("expected `predicate P = {...}`".into()))?;
                    let s = model.domain.parse_subset(lit).map_err(|e| bad(e.to_string()))?;
                    model.predicates.insert(pred.trim().into(), s);
                }
                "designated" => {
                    for lit in subset_literals(rest).map_err(bad)? {
                        model
                            .designated
                            .insert(model.domain.parse_subset(lit).map_err(|e| bad(e.to_string()))?);
                    }
                }
                "table" => {
                    finish(current.take(), &mut model)?;
                    let p = Primitive::from_name(rest);
                    let t = OperationTable::from_fn(&model.domain, p.arity(), |_| Subset::EMPTY);
                    let seen = vec![false; t.cells()];
                    current = Some((p, t, seen));
                }
                _ if kw.starts_with('{') || kw == "->" => {
                    let (p, t, seen) = current.as_mut().ok_or_else(|| bad("table row outside a table".into()))?;
                    let (lhs, rhs) = content_split(kw, rest).ok_or_else(|| bad("expected `<args> -> <value>`".into()))?;
                    let args = subset_literals(&lhs)
                        .map_err(&bad)?
                        .into_iter()
                        .map(|l| model.domain.parse_subset(l))
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| bad(e.to_string()))?;
                    if args.len() != t.arity {
                        return Err(bad(format!("{p} takes {} arguments, row has {}", t.arity, args.len())));
                    }
                    let value = model.domain.parse_subset(rhs.trim()).map_err(|e| bad(e.to_string()))?;
                    let i = encode(&args, t.radix);
                    if seen[i] {
                        return Err(bad(format!("second row for the same arguments of {p}")));
                    }
                    seen[i] = true;
                    t.set(&args, value);
                }
                other => return Err(bad(format!("unknown directive `{other}`"))),
            }
        }
        finish(current.take(), &mut model)?;
        Ok(model)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let names: Vec<&str> = self.domain.elements.iter().map(|e| &**e).collect();
        let _ = writeln!(s, "name {}", self.name);
        let _ = writeln!(s, "domain {}", names.join(" "));
        let _ = writeln!(s, "distinguished {}", self.domain.elements[self.domain.distinguished]);
        for (p, v) in &self.predicates {
            let _ = writeln!(s, "predicate {p} = {}", self.show(*v));
        }
        let des: Vec<String> = self.designated.iter().rev().map(|d| self.show(*d)).collect();
        let _ = writeln!(s, "designated {}", des.join(" "));
        for (p, t) in &self.tables {
            let _ = writeln!(s, "table {p}");
            for (args, v) in t.rows() {
                let shown: Vec<String> = args.iter().map(|a| self.show(*a)).collect();
                let _ = writeln!(s, "  {} -> {}", shown.join(" "), self.show(v));
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let tables: serde_json::Map<String, serde_json::Value> = self
            .tables
            .iter()
            .map(|(p, t)| {
                let rows: Vec<serde_json::Value> = t
                    .rows()
                    .map(|(args, v)| {
                        serde_json::json!({
                            "args": args.iter().map(|a| self.show(*a)).collect::<Vec<_>>(),
                            "value": self.show(v),
                        })
                    })
                    .collect();
                (p.name().to_owned(), serde_json::Value::Array(rows))
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "domain": self.domain.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "distinguished": self.domain.elements[self.domain.distinguished].to_string(),
            "predicates": self.predicates.iter().map(|(p, v)| (p.to_string(), self.show(*v))).collect::<BTreeMap<_, _>>(),
            "designated": self.designated.iter().map(|d| self.show(*d)).collect::<Vec<_>>(),
            "tables": tables,
        })
    }
}

fn one_var(v: Var, f: &Formula) -> Result<()> {
    if v.0 == 1 {
        Ok(())
    } else {
        Err(Error::VariableLimitExceeded(format!("{v} in `{f}`")))
    }
}

/// Splits a table row `kw rest` into argument and value text at `->`.
fn content_split(kw: &str, rest: &str) -> Option<(String, String)> {
    let whole = format!("{kw} {rest}");
    let (l, r) = whole.split_once("->")?;
    Some((l.to_owned(), r.to_owned()))
}

/// The brace groups of `s`, in order.
fn subset_literals(s: &str) -> std::result::Result<Vec<&str>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('{') {
            return Err(format!("expected a subset literal at `{rest}`"));
        }
        let end = rest.find('}').ok_or_else(|| format!("unterminated subset literal `{rest}`"))?;
        out.push(&rest[..=end]);
        rest = rest[end + 1..].trim_start();
    }
    Ok(out)
}

/// A compositional semantics: values of leaves, connectives and quantifiers,
/// and which values count as true.
pub trait Algebra: Sync {
    type Value: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    /// Value of a propositional variable or atomic formula.
    fn leaf(&self, f: &Formula) -> Result<Self::Value>;
    fn connective(&self, c: &Connective, args: &[Self::Value]) -> Result<Self::Value>;
    fn quantifier(&self, q: Quantifier, v: Var, body: Self::Value) -> Result<Self::Value>;
    fn designated(&self, v: Self::Value) -> bool;
    fn show(&self, v: Self::Value) -> String;

    fn eval(&self, f: &Formula) -> Result<Self::Value> {
        match f {
            Formula::Prop(_) | Formula::Atom(..) => self.leaf(f),
            Formula::Conn(c, args) => {
                let vals = args.iter().map(|a| self.eval(a)).collect::<Result<Vec<_>>>()?;
                self.connective(c, &vals)
            }
            Formula::Quant(q, v, body) => {
                let b = self.eval(body)?;
                self.quantifier(*q, *v, b)
            }
        }
    }
}

/// One-variable evaluation in a generalized model.
impl Algebra for GeneralizedModel {
    type Value = Subset;

    fn leaf(&self, f: &Formula) -> Result<Subset> {
        self.value_1var(f)
    }

    fn connective(&self, c: &Connective, args: &[Subset]) -> Result<Subset> {
        Ok(self.table(&Primitive::Conn(c.clone()))?.get(args))
    }

    fn quantifier(&self, q: Quantifier, v: Var, body: Subset) -> Result<Subset> {
        if v.0 != 1 {
            return Err(Error::VariableLimitExceeded(v.to_string()));
        }
        Ok(self.table(&Primitive::Quant(q))?.get(&[body]))
    }

    fn designated(&self, v: Subset) -> bool {
        self.is_designated(v)
    }

    fn show(&self, v: Subset) -> String {
        self.domain.show(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse;

    #[test]
    fn value_examples() {
        let m = fixtures::prop1_model();
        let sig = fixtures::bs_system().sig;
        let v = |s: &str| m.show(m.value_1var(&parse(s, &sig).unwrap()).unwrap());
        assert_eq!(v("P(x1)"), "{v}");
        assert_eq!(v("~~P(x1)"), "{}");
        assert_eq!(v("exists x1. P(x1) -> exists x1. ~~P(x1)"), "{}");
        let e = m.value_1var(&parse("P(x2)", &sig).unwrap()).unwrap_err();
        assert!(matches!(e, Error::VariableLimitExceeded(_)));
    }

    #[test]
    fn composed_forall() {
        let m = fixtures::prop1_model();
        let f = m.compose_forall().unwrap();
        let col: Vec<String> = ["{u,v}", "{u}", "{v}", "{}"]
            .iter()
            .map(|s| m.show(f.get(&[m.domain.parse_subset(s).unwrap()])))
            .collect();
        assert_eq!(col, ["{u}", "{u}", "{}", "{}"]);
        let s = fixtures::standard_2elt();
        let g = s.compose_forall().unwrap();
        assert_eq!(g.get(&[s.domain.full()]), s.domain.full());
        assert_eq!(g.get(&[s.domain.parse_subset("{v}").unwrap()]), Subset::EMPTY);
    }

    #[test]
    fn missing_table_is_reported() {
        let m = fixtures::prop1_model();
        let f = Formula::forall(1, Formula::atom("P", 1));
        assert!(matches!(m.value_1var(&f), Err(Error::MissingTable(_))));
    }

    #[test]
    fn text_round_trip() {
        for m in [fixtures::prop1_model(), fixtures::standard_2elt()] {
            assert_eq!(GeneralizedModel::from_text("again", &m.to_text()).unwrap(), m);
        }
    }

    #[test]
    fn incomplete_tables_are_rejected() {
        let text = "domain u v\ndistinguished u\ntable not\n  {u,v} -> {}\n";
        assert!(GeneralizedModel::from_text("t", text).is_err());
    }
}
