//! Pretty printer for the concrete grammar. Output re-parses to the same tree.

use std::fmt;

use super::formula::{Connective, Formula, Quantifier};
use super::schema::Template;

// Binding strength: implication < disjunction < conjunction < prefix operators.
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;

enum Shape<'a, T> {
    Leaf(String),
    Not(&'a T),
    Binary(&'static str, u8, &'a T, &'a T),
    Quant(Quantifier, String, &'a T),
}

trait Printable: Sized {
    fn shape(&self) -> Shape<'_, Self>;
}

impl Printable for Formula {
    fn shape(&self) -> Shape<'_, Self> {
        match self {
            Formula::Prop(p) => Shape::Leaf(p.to_string()),
            Formula::Atom(pred, v) => Shape::Leaf(format!("{pred}({v})")),
            Formula::Conn(c, args) => conn_shape(c, args),
            Formula::Quant(q, v, body) => Shape::Quant(*q, v.to_string(), body),
        }
    }
}

impl Printable for Template {
    fn shape(&self) -> Shape<'_, Self> {
        match self {
            Template::Meta(m) => Shape::Leaf(m.to_string()),
            Template::Prop(p) => Shape::Leaf(p.to_string()),
            Template::Atom(pred, v) => Shape::Leaf(format!("{pred}({v})")),
            Template::Conn(c, args) => conn_shape(c, args),
            Template::Quant(q, v, body) => Shape::Quant(*q, v.to_string(), body),
        }
    }
}

fn conn_shape<'a, T>(c: &Connective, args: &'a [T]) -> Shape<'a, T> {
    match c {
        Connective::Not => Shape::Not(&args[0]),
        Connective::And => Shape::Binary("/\\", AND, &args[0], &args[1]),
        Connective::Or => Shape::Binary("\\/", OR, &args[0], &args[1]),
        Connective::Imp => Shape::Binary("->", IMP, &args[0], &args[1]),
        Connective::Const(name) => Shape::Leaf(name.to_string()),
    }
}

fn write_node<T: Printable>(f: &mut fmt::Formatter<'_>, node: &T, context: u8) -> fmt::Result {
    match node.shape() {
        Shape::Leaf(s) => f.write_str(&s),
        Shape::Not(arg) => {
            f.write_str("~")?;
            write_node(f, arg, PREFIX)
        }
        Shape::Quant(q, v, body) => {
            write!(f, "{} {v}. ", q.name())?;
            write_node(f, body, PREFIX)
        }
        Shape::Binary(op, level, lhs, rhs) => {
            let parens = context > level;
            if parens {
                f.write_str("(")?;
            }
            // `->` associates to the right, `/\` and `\/` to the left.
            let (l, r) = if level == IMP { (level + 1, level) } else { (level, level + 1) };
            write_node(f, lhs, l)?;
            write!(f, " {op} ")?;
            write_node(f, rhs, r)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self, 0)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, self, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_parentheses() {
        let p = || Formula::atom("P", 1);
        let f = Formula::imp(Formula::exists(1, p()), Formula::exists(1, Formula::not(Formula::not(p()))));
        assert_eq!(f.to_string(), "exists x1. P(x1) -> exists x1. ~~P(x1)");
        let g = Formula::imp(Formula::imp(Formula::prop(1), Formula::prop(2)), Formula::prop(3));
        assert_eq!(g.to_string(), "(p1 -> p2) -> p3");
        let h = Formula::forall(2, Formula::imp(p(), Formula::atom("P", 2)));
        assert_eq!(h.to_string(), "forall x2. (P(x1) -> P(x2))");
        let k = Formula::and(Formula::prop(1), Formula::and(Formula::prop(2), Formula::prop(3)));
        assert_eq!(k.to_string(), "p1 /\\ (p2 /\\ p3)");
        let m = Formula::not(Formula::and(Formula::not(Formula::prop(1)), Formula::not(Formula::prop(2))));
        assert_eq!(m.to_string(), "~(~p1 /\\ ~p2)");
    }
}
