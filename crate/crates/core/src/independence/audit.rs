//! The value tables behind the A4/A5 soundness argument, and step-by-step
//! evaluation chains, rendered as plain text.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::semantics::{GeneralizedModel, OperationTable, Subset};
use crate::syntax::{Connective, Formula, Primitive, Quantifier};

const CELL: usize = 8;

/// A two-way table of values; `None` cells are printed as `.`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValueTable {
    pub title: String,
    pub row_label: String,
    pub col_label: String,
    pub cols: Vec<String>,
    pub rows: Vec<(String, Vec<Option<String>>)>,
}

impl ValueTable {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "table {}", self.title);
        let _ = writeln!(s, "rows {}", self.row_label);
        let _ = writeln!(s, "cols {}", self.col_label);
        let mut header = " ".repeat(CELL);
        for c in &self.cols {
            let _ = write!(header, "{c:<CELL$}");
        }
        let _ = writeln!(s, "{}", header.trim_end());
        for (label, cells) in &self.rows {
            let mut line = format!("{label:<CELL$}");
            for c in cells {
                let _ = write!(line, "{:<CELL$}", c.as_deref().unwrap_or("."));
            }
            let _ = writeln!(s, "{}", line.trim_end());
        }
        s
    }
}

/// The A4 table and the four A5 tables of a two-element model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomTables {
    pub a4: ValueTable,
    pub a5: Vec<ValueTable>,
}

impl AxiomTables {
    pub fn a4_text(&self) -> String {
        self.a4.render()
    }

    pub fn a5_text(&self) -> String {
        self.a5.iter().map(ValueTable::render).collect::<Vec<_>>().join("\n")
    }
}

/// `A` for the whole domain, otherwise the subset literal.
fn label(m: &GeneralizedModel, s: Subset) -> String {
    if s == m.domain.full() {
        "A".into()
    } else {
        m.show(s)
    }
}

/// Subsets from the whole domain down to the empty set, larger first.
fn ordered(m: &GeneralizedModel) -> Vec<Subset> {
    let mut all: Vec<Subset> = m.domain.subsets().collect();
    all.sort_by_key(|s| (std::cmp::Reverse(s.len()), s.0));
    all
}

fn distinct(values: impl IntoIterator<Item = Subset>) -> Vec<Subset> {
    let mut out = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Tables for A4 (`forall x. Phi -> Phi`) and A5, with `forall` read as
/// `not exists not`. A5's `Phi` is a sentence, so its value is taken to be
/// the whole domain or empty.
pub fn audit_axiom_tables(m: &GeneralizedModel) -> Result<AxiomTables> {
    if m.domain.size() != 2 {
        return Err(Error::DomainSizeUnsupported(m.domain.size()));
    }
    let imp: &OperationTable = m.table(&Primitive::Conn(Connective::Imp))?;
    let forall = match m.tables.get(&Primitive::Quant(Quantifier::Forall)) {
        Some(t) => t.clone(),
        None => m.compose_forall()?,
    };
    let fa = |x: Subset| forall.get(&[x]);
    let im = |a: Subset, b: Subset| imp.get(&[a, b]);
    let values = ordered(m);
    let show = |s: Subset| label(m, s);
    let cols: Vec<String> = values.iter().map(|&v| show(v)).collect();

    let a4_rows = distinct(values.iter().map(|&x| fa(x)));
    let a4 = ValueTable {
        title: "f*imp(f*forall(A(phi)), A(phi))".into(),
        row_label: "f*forall(A(phi))".into(),
        col_label: "A(phi)".into(),
        cols: cols.clone(),
        rows: a4_rows
            .iter()
            .map(|&r| {
                let cells = values.iter().map(|&x| (fa(x) == r).then(|| show(im(r, x)))).collect();
                (show(r), cells)
            })
            .collect(),
    };

    let sentence = [m.domain.full(), Subset::EMPTY];
    let imp_table = ValueTable {
        title: "f*imp(A(phi), A(psi(x)))".into(),
        row_label: "A(phi)".into(),
        col_label: "A(psi(x))".into(),
        cols: cols.clone(),
        rows: sentence
            .iter()
            .map(|&p| (show(p), values.iter().map(|&y| Some(show(im(p, y)))).collect()))
            .collect(),
    };
    let forall_table = ValueTable {
        title: "f*forall(X)".into(),
        row_label: "-".into(),
        col_label: "X".into(),
        cols: cols.clone(),
        rows: vec![("".into(), values.iter().map(|&x| Some(show(fa(x)))).collect())],
    };
    let rhs_cols = distinct(values.iter().map(|&y| fa(y)));
    let rhs_table = ValueTable {
        title: "f*imp(A(phi), f*forall(A(psi(x))))".into(),
        row_label: "A(phi)".into(),
        col_label: "f*forall(A(psi(x)))".into(),
        cols: rhs_cols.iter().map(|&c| show(c)).collect(),
        rows: sentence
            .iter()
            .map(|&p| (show(p), rhs_cols.iter().map(|&c| Some(show(im(p, c)))).collect()))
            .collect(),
    };
    let final_table = ValueTable {
        title: "f*imp(S0, S1)".into(),
        row_label: "A(phi)".into(),
        col_label: "A(psi(x))".into(),
        cols,
        rows: sentence
            .iter()
            .map(|&p| {
                let cells = values
                    .iter()
                    .map(|&y| {
                        let s0 = fa(im(p, y));
                        let s1 = im(p, fa(y));
                        Some(show(im(s0, s1)))
                    })
                    .collect();
                (show(p), cells)
            })
            .collect(),
    };
    Ok(AxiomTables {
        a4,
        a5: vec![imp_table, forall_table, rhs_table, final_table],
    })
}

#[derive(Clone, Debug)]
enum Expr {
    Val(Subset),
    App(String, Vec<Expr>),
}

impl Expr {
    fn of(m: &GeneralizedModel, f: &Formula) -> Result<Expr> {
        Ok(match f {
            Formula::Prop(_) | Formula::Atom(..) => Expr::Val(m.value_1var(f)?),
            Formula::Conn(c, args) => {
                m.table(&Primitive::Conn(c.clone()))?;
                Expr::App(
                    format!("f*{}", c.name()),
                    args.iter().map(|a| Expr::of(m, a)).collect::<Result<_>>()?,
                )
            }
            Formula::Quant(q, v, body) => {
                if v.0 != 1 {
                    return Err(Error::VariableLimitExceeded(v.to_string()));
                }
                m.table(&Primitive::Quant(*q))?;
                Expr::App(format!("f*{}", q.name()), vec![Expr::of(m, body)?])
            }
        })
    }

    /// Evaluates every application whose arguments are all values.
    fn step(&self, m: &GeneralizedModel) -> Expr {
        match self {
            Expr::Val(v) => Expr::Val(*v),
            Expr::App(name, args) => {
                if let Some(vals) = args
                    .iter()
                    .map(|a| match a {
                        Expr::Val(v) => Some(*v),
                        _ => None,
                    })
                    .collect::<Option<Vec<_>>>()
                {
                    let p = Primitive::from_name(name.trim_start_matches("f*"));
                    Expr::Val(m.tables[&p].get(&vals))
                } else {
                    Expr::App(name.clone(), args.iter().map(|a| a.step(m)).collect())
                }
            }
        }
    }

    fn show(&self, m: &GeneralizedModel) -> String {
        match self {
            Expr::Val(v) => label(m, *v),
            Expr::App(name, args) => {
                let shown: Vec<String> = args.iter().map(|a| a.show(m)).collect();
                format!("{name}({})", shown.join(", "))
            }
        }
    }
}

/// The value computation of a one-variable formula, one line per stage;
/// each stage evaluates every operation whose arguments are already values.
pub fn evaluation_chain(m: &GeneralizedModel, f: &Formula) -> Result<Vec<String>> {
    let mut e = Expr::of(m, f)?;
    let mut out = vec![e.show(m)];
    while let Expr::App(..) = e {
        e = e.step(m);
        out.push(e.show(m));
    }
    Ok(out)
}

/// `line N: expected ..., found ...` for each differing line.
pub fn diff_lines(expected: &str, found: &str) -> Vec<String> {
    let e: Vec<&str> = expected.lines().collect();
    let f: Vec<&str> = found.lines().collect();
    (0..e.len().max(f.len()))
        .filter_map(|i| {
            let (a, b) = (e.get(i).copied().unwrap_or(""), f.get(i).copied().unwrap_or(""));
            (a != b).then(|| format!("line {}: expected `{a}`, found `{b}`", i + 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn a4_is_all_a() {
        for m in [fixtures::prop1_model(), fixtures::standard_2elt()] {
            let t = audit_axiom_tables(&m).unwrap();
            let cells: Vec<&String> = t.a4.rows.iter().flat_map(|(_, c)| c.iter().flatten()).collect();
            assert_eq!(cells.len(), 4);
            assert!(cells.iter().all(|c| *c == "A"), "{}", m.name);
        }
    }

    #[test]
    fn chain_ends_in_empty() {
        let m = fixtures::prop1_model();
        let chain = evaluation_chain(&m, &fixtures::target()).unwrap();
        assert_eq!(chain[0], "f*imp(f*exists({v}), f*exists(f*not(f*not({v}))))");
        assert_eq!(chain[1], "f*imp(A, f*exists(f*not({u})))");
        assert_eq!(chain.last().unwrap(), "{}");
        assert_eq!(chain.len(), 5);
    }

    #[test]
    fn rejects_other_domain_sizes() {
        let d = crate::semantics::Domain::standard(3).unwrap();
        let m = GeneralizedModel::standard(d, Default::default(), &[Primitive::from_name("imp")]).unwrap();
        assert!(matches!(audit_axiom_tables(&m), Err(Error::DomainSizeUnsupported(3))));
    }
}
