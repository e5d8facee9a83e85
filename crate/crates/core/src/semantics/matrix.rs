//! Finite logical matrices for propositional languages.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::Algebra;
use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula, PropVar, Quantifier, Var};
use crate::text;

/// Values are `0..size`; each connective has a table indexed in mixed radix,
/// first argument most significant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub size: usize,
    pub designated: Vec<bool>,
    pub tables: BTreeMap<Connective, Vec<u8>>,
}

impl Matrix {
    /// The two-valued Boolean matrix (`1` designated) for the given connectives.
    pub fn boolean(connectives: impl IntoIterator<Item = Connective>) -> Result<Matrix> {
        let mut m = Matrix {
            size: 2,
            designated: vec![false, true],
            tables: BTreeMap::new(),
        };
        for c in connectives {
            let f: fn(&[u8]) -> u8 = match &c {
                Connective::Not => |a| 1 - a[0],
                Connective::And => |a| a[0] & a[1],
                Connective::Or => |a| a[0] | a[1],
                Connective::Imp => |a| (1 - a[0]) | a[1],
                Connective::Const(n) if &**n == "top" => |_| 1,
                Connective::Const(n) if &**n == "bot" => |_| 0,
                Connective::Const(n) => return Err(Error::MissingTable(n.to_string())),
            };
            m.tables.insert(c.clone(), m.tabulate(c.arity(), f));
        }
        Ok(m)
    }

    pub fn tabulate(&self, arity: usize, f: impl Fn(&[u8]) -> u8) -> Vec<u8> {
        let cells = self.size.pow(arity as u32);
        let mut args = vec![0u8; arity];
        (0..cells)
            .map(|i| {
                let mut rest = i;
                for slot in args.iter_mut().rev() {
                    *slot = (rest % self.size) as u8;
                    rest /= self.size;
                }
                f(&args)
            })
            .collect()
    }

    pub fn apply(&self, c: &Connective, args: &[u8]) -> Result<u8> {
        let t = self.tables.get(c).ok_or_else(|| Error::MissingTable(c.name().to_owned()))?;
        let i = args.iter().fold(0usize, |acc, &a| acc * self.size + a as usize);
        Ok(t[i])
    }

    pub fn is_designated(&self, v: u8) -> bool {
        self.designated[v as usize]
    }

    /// Every valuation of `props` (in order) as a vector of values.
    pub fn valuations(&self, props: usize) -> impl Iterator<Item = Vec<u8>> + '_ {
        let total = self.size.pow(props as u32);
        (0..total).map(move |mut i| {
            (0..props)
                .map(|_| {
                    let v = (i % self.size) as u8;
                    i /= self.size;
                    v
                })
                .collect()
        })
    }

    /// A valuation (indexed by propositional variable) under which `f` is
    /// undesignated, if any.
    pub fn refuting_valuation(&self, f: &Formula) -> Result<Option<BTreeMap<PropVar, u8>>> {
        let props: Vec<PropVar> = f.prop_vars().into_iter().collect();
        for vals in self.valuations(props.len()) {
            let valuation: BTreeMap<PropVar, u8> = props.iter().copied().zip(vals).collect();
            if !self.is_designated(eval_matrix(self, f, &valuation)?) {
                return Ok(Some(valuation));
            }
        }
        Ok(None)
    }

    /// Parses the `.matrix` format: `values n`, `designated 0 2`, then
    /// `table <connective>` followed by rows `a b -> c`.
    pub fn from_text(file: &str, text: &str) -> Result<Matrix> {
        let mut m = Matrix {
            size: 0,
            designated: Vec::new(),
            tables: BTreeMap::new(),
        };
        let mut current: Option<(Connective, Vec<Option<u8>>)> = None;
        let close = |cur: Option<(Connective, Vec<Option<u8>>)>, m: &mut Matrix| -> Result<()> {
            if let Some((c, cells)) = cur {
                let t = cells
                    .into_iter()
                    .collect::<Option<Vec<u8>>>()
                    .ok_or_else(|| Error::format(file, 0, format!("table {} is incomplete", c.name())))?;
                m.tables.insert(c, t);
            }
            Ok(())
        };
        for (line, content) in text::lines(text) {
            let bad = |msg: String| Error::format(file, line, msg);
            let (kw, rest) = text::directive(content);
            match kw {
                "values" => {
                    m.size = rest.parse().map_err(|_| bad(format!("bad size `{rest}`")))?;
                    if !(1..=8).contains(&m.size) {
                        return Err(Error::DomainSizeUnsupported(m.size));
                    }
                    m.designated = vec![false; m.size];
                }
                "designated" => {
                    for w in rest.split_whitespace() {
                        let v = value(w, m.size).map_err(bad)?;
                        m.designated[v as usize] = true;
                    }
                }
                "table" => {
                    close(current.take(), &mut m)?;
                    let c = Connective::from_name(rest);
                    current = Some((c.clone(), vec![None; m.size.pow(c.arity() as u32)]));
                }
                _ => {
                    let (c, cells) = current.as_mut().ok_or_else(|| bad("row outside a table".into()))?;
                    let (lhs, rhs) = content.split_once("->").ok_or_else(|| bad("expected `<args> -> <value>`".into()))?;
                    let args = lhs
                        .split_whitespace()
                        .map(|w| value(w, m.size))
                        .collect::<std::result::Result<Vec<u8>, String>>()
                        .map_err(bad)?;
                    if args.len() != c.arity() {
                        return Err(bad(format!("{} takes {} arguments", c.name(), c.arity())));
                    }
                    let i = args.iter().fold(0usize, |acc, &a| acc * m.size + a as usize);
                    cells[i] = Some(value(rhs.trim(), m.size).map_err(bad)?);
                }
            }
        }
        close(current.take(), &mut m)?;
        if m.size == 0 {
            return Err(Error::format(file, 0, "missing `values` line"));
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "values {}", self.size);
        let des: Vec<String> = (0..self.size).filter(|&v| self.designated[v]).map(|v| v.to_string()).collect();
        let _ = writeln!(s, "designated {}", des.join(" "));
        for (c, t) in &self.tables {
            let _ = writeln!(s, "table {}", c.name());
            let arity = c.arity();
            for (i, v) in t.iter().enumerate() {
                let mut rest = i;
                let mut args = vec![0usize; arity];
                for slot in args.iter_mut().rev() {
                    *slot = rest % self.size;
                    rest /= self.size;
                }
                let a: String = args.iter().map(|x| format!("{x} ")).collect();
                let _ = writeln!(s, "  {a}-> {v}");
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "values": self.size,
            "designated": (0..self.size).filter(|&v| self.designated[v]).collect::<Vec<_>>(),
            "tables": self.tables.iter().map(|(c, t)| (c.name().to_owned(), t.clone())).collect::<BTreeMap<_, _>>(),
        })
    }
}

fn value(w: &str, size: usize) -> std::result::Result<u8, String> {
    match w.parse::<u8>() {
        Ok(v) if (v as usize) < size => Ok(v),
        _ => Err(format!("`{w}` is not a value below {size}")),
    }
}

/// Table evaluation of a propositional formula.
pub fn eval_matrix(m: &Matrix, f: &Formula, valuation: &BTreeMap<PropVar, u8>) -> Result<u8> {
    match f {
        Formula::Prop(p) => valuation.get(p).copied().ok_or_else(|| Error::UnboundVariable(p.to_string())),
        Formula::Conn(c, args) => {
            let vals = args.iter().map(|a| eval_matrix(m, a, valuation)).collect::<Result<Vec<_>>>()?;
            m.apply(c, &vals)
        }
        other => Err(Error::SemanticsMismatch(format!(
            "matrices evaluate propositional formulas only, not `{other}`"
        ))),
    }
}

/// A matrix together with a fixed valuation, as an [`Algebra`].
pub struct MatrixAt<'a> {
    pub matrix: &'a Matrix,
    pub valuation: BTreeMap<PropVar, u8>,
}

impl Algebra for MatrixAt<'_> {
    type Value = u8;

    fn leaf(&self, f: &Formula) -> Result<u8> {
        eval_matrix(self.matrix, f, &self.valuation)
    }

    fn connective(&self, c: &Connective, args: &[u8]) -> Result<u8> {
        self.matrix.apply(c, args)
    }

    fn quantifier(&self, q: Quantifier, _: Var, _: u8) -> Result<u8> {
        Err(Error::SemanticsMismatch(format!("matrices have no `{}`", q.name())))
    }

    fn designated(&self, v: u8) -> bool {
        self.matrix.is_designated(v)
    }

    fn show(&self, v: u8) -> String {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    #[test]
    fn boolean_matrix_designates_tautologies() {
        let sig = Signature::propositional(&["not", "and", "imp"]).unwrap();
        let m = Matrix::boolean(sig.connectives.iter().cloned()).unwrap();
        for s in ["p1 /\\ p1 -> p1", "~(p1 /\\ ~p1)"] {
            let f = parse(s, &sig).unwrap();
            assert_eq!(m.refuting_valuation(&f).unwrap(), None, "{s}");
        }
        let f = parse("p1 -> p2", &sig).unwrap();
        assert!(m.refuting_valuation(&f).unwrap().is_some());
    }

    #[test]
    fn text_round_trip() {
        let m = Matrix::boolean([Connective::Not, Connective::And]).unwrap();
        assert_eq!(Matrix::from_text("t", &m.to_text()).unwrap(), m);
    }
}
