//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! imp    := or ( "->" imp )?
//! or     := and ( "\/" and )*
//! and    := unary ( "/\" unary )*
//! unary  := "~" unary | ("forall" | "exists") var "." unary | atom | "(" imp ")"
//! atom   := PRED "(" var ")" | p<n> | CONST | metavariable
//! ```
//!
//! Quantifiers bind as tightly as negation, so `exists x1. P(x1) -> Q(x1)`
//! is an implication whose antecedent is the quantified formula.

use std::fmt;

use thiserror::Error;

use super::formula::{Connective, Formula, PropVar, Quantifier, Var};
use super::schema::{Schema, SideCondition, Template, VarTerm};
use super::signature::{indexed, is_meta_spelling, Signature};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParseErrorKind {
    Lexical,
    UnknownSymbol,
    ArityMismatch,
    UnboundSyntax,
    Unexpected,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lexical => "lexical error",
            ParseErrorKind::UnknownSymbol => "unknown symbol",
            ParseErrorKind::ArityMismatch => "arity mismatch",
            ParseErrorKind::UnboundSyntax => "unbound syntax",
            ParseErrorKind::Unexpected => "unexpected token",
        })
    }
}

/// Parse failure with the byte offset at which it was detected.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{kind} at offset {pos}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Tilde,
    Arrow,
    Wedge,
    Vee,
    LParen,
    RParen,
    Dot,
    Comma,
    Ident(String),
    Placeholder(String),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Tilde => f.write_str("`~`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Wedge => f.write_str("`/\\`"),
            Tok::Vee => f.write_str("`\\/`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Placeholder(s) => write!(f, "`{s}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'.' => Tok::Dot,
            b',' => Tok::Comma,
            _ if two == Some(b"->") => {
                i += 1;
                Tok::Arrow
            }
            _ if two == Some(b"/\\") => {
                i += 1;
                Tok::Wedge
            }
            _ if two == Some(b"\\/") => {
                i += 1;
                Tok::Vee
            }
            b'$' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_alphanumeric() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(ParseErrorKind::Lexical, start, "`$` must be followed by a placeholder name"));
                }
                let s = text[i..j].to_owned();
                i = j - 1;
                Tok::Placeholder(s)
            }
            _ if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let s = text[i..j].to_owned();
                i = j - 1;
                Tok::Ident(s)
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(ParseErrorKind::Lexical, start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn err(kind: ParseErrorKind, pos: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind,
        pos,
        message: message.into(),
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    sig: &'a Signature,
    schema_mode: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (tok, pos) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(err(ParseErrorKind::Unexpected, pos, format!("expected {want}, found {tok}")))
        }
    }

    fn require(&self, c: Connective, pos: usize) -> Result<Connective, ParseError> {
        if self.sig.connectives.contains(&c) {
            Ok(c)
        } else {
            Err(err(
                ParseErrorKind::UnknownSymbol,
                pos,
                format!("connective `{}` is not in the signature", c.name()),
            ))
        }
    }

    fn imp(&mut self) -> Result<Template, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            let pos = self.pos();
            self.bump();
            let c = self.require(Connective::Imp, pos)?;
            let rhs = self.imp()?;
            return Ok(Template::Conn(c, vec![lhs, rhs]));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Template, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Vee {
            let pos = self.pos();
            self.bump();
            let c = self.require(Connective::Or, pos)?;
            let rhs = self.and()?;
            lhs = Template::Conn(c, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Template, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Wedge {
            let pos = self.pos();
            self.bump();
            let c = self.require(Connective::And, pos)?;
            let rhs = self.unary()?;
            lhs = Template::Conn(c, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Template, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Tilde => {
                let c = self.require(Connective::Not, pos)?;
                Ok(Template::Conn(c, vec![self.unary()?]))
            }
            Tok::LParen => {
                let inner = self.imp()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Placeholder(name) => {
                if !self.schema_mode {
                    return Err(err(
                        ParseErrorKind::UnboundSyntax,
                        pos,
                        format!("placeholder `{name}` outside a schema"),
                    ));
                }
                if name == "$v" {
                    return Err(err(
                        ParseErrorKind::UnboundSyntax,
                        pos,
                        "variable placeholder `$v` used as a formula",
                    ));
                }
                Ok(Template::Meta(name.into()))
            }
            Tok::Ident(name) => self.ident(name, pos),
            other => Err(err(ParseErrorKind::Unexpected, pos, format!("expected a formula, found {other}"))),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Template, ParseError> {
        if let Some(q) = Quantifier::from_name(&name) {
            if !self.sig.quantifiers.contains(&q) {
                return Err(err(
                    ParseErrorKind::UnknownSymbol,
                    pos,
                    format!("quantifier `{name}` is not in the signature"),
                ));
            }
            let var = self.var_term(true)?;
            self.expect(Tok::Dot)?;
            let body = self.unary()?;
            return Ok(Template::Quant(q, var, Box::new(body)));
        }
        if *self.peek() == Tok::LParen {
            if self.sig.has_constant(&name) {
                return Err(err(
                    ParseErrorKind::ArityMismatch,
                    pos,
                    format!("constant `{name}` takes no arguments"),
                ));
            }
            let pred = self
                .sig
                .predicates
                .get(name.as_str())
                .cloned()
                .ok_or_else(|| err(ParseErrorKind::UnknownSymbol, pos, format!("unknown predicate `{name}`")))?;
            self.bump();
            let var = self.var_term(false)?;
            if *self.peek() == Tok::Comma {
                return Err(err(
                    ParseErrorKind::ArityMismatch,
                    self.pos(),
                    format!("predicate `{name}` is unary"),
                ));
            }
            self.expect(Tok::RParen)?;
            return Ok(Template::Atom(pred, var));
        }
        if self.schema_mode && is_meta_spelling(&name) {
            return Ok(Template::Meta(name.into()));
        }
        if let Some(n) = indexed(&name, 'p') {
            if !self.sig.props.admits(n) {
                return Err(err(
                    ParseErrorKind::UnknownSymbol,
                    pos,
                    format!("propositional variable `{name}` is not in the signature"),
                ));
            }
            return Ok(Template::Prop(PropVar(n)));
        }
        if self.sig.has_constant(&name) {
            return Ok(Template::Conn(Connective::Const(name.into()), Vec::new()));
        }
        if indexed(&name, 'x').is_some() || (self.schema_mode && matches!(name.as_str(), "x" | "y" | "z")) {
            return Err(err(
                ParseErrorKind::UnboundSyntax,
                pos,
                format!("individual variable `{name}` used as a formula"),
            ));
        }
        if self.sig.predicates.contains(name.as_str()) {
            return Err(err(
                ParseErrorKind::ArityMismatch,
                pos,
                format!("predicate `{name}` needs an argument"),
            ));
        }
        Err(err(ParseErrorKind::UnknownSymbol, pos, format!("unknown symbol `{name}`")))
    }

    fn var_term(&mut self, after_quantifier: bool) -> Result<VarTerm, ParseError> {
        let (tok, pos) = self.bump();
        let what = if after_quantifier {
            "a bound variable after the quantifier"
        } else {
            "a variable"
        };
        match tok {
            Tok::Ident(name) => {
                if let Some(n) = indexed(&name, 'x') {
                    if !self.sig.vars.admits(n) {
                        return Err(err(
                            ParseErrorKind::UnknownSymbol,
                            pos,
                            format!("variable `{name}` is not in the signature"),
                        ));
                    }
                    return Ok(VarTerm::Var(Var(n)));
                }
                if self.schema_mode && matches!(name.as_str(), "x" | "y" | "z") {
                    return Ok(VarTerm::Meta(name.into()));
                }
                Err(err(ParseErrorKind::UnboundSyntax, pos, format!("expected {what}, found `{name}`")))
            }
            Tok::Placeholder(name) if self.schema_mode && name == "$v" => Ok(VarTerm::Meta(name.into())),
            other => Err(err(ParseErrorKind::UnboundSyntax, pos, format!("expected {what}, found {other}"))),
        }
    }
}

fn run(text: &str, sig: &Signature, schema_mode: bool) -> Result<Template, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        sig,
        schema_mode,
    };
    let t = p.imp()?;
    if *p.peek() != Tok::End {
        return Err(err(
            ParseErrorKind::Unexpected,
            p.pos(),
            format!("trailing input starting at {}", p.peek()),
        ));
    }
    Ok(t)
}

/// Parses a formula over `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let t = run(text, sig, false)?;
    Ok(t.to_formula().expect("formula mode produces no metavariables"))
}

/// Parses a template in which `Phi`, `Psi`, `Chi`, `$<n>` denote formula
/// metavariables and `x`, `y`, `z`, `$v` denote variable metavariables.
pub fn parse_template(text: &str, sig: &Signature) -> Result<Template, ParseError> {
    run(text, sig, true)
}

/// Parses a template followed by side conditions such as
/// `[x not free in Phi]` or `[Phi closed]`.
pub fn parse_schema(text: &str, sig: &Signature) -> crate::error::Result<Schema> {
    let body_end = text.find('[').unwrap_or(text.len());
    let template = parse_template(text[..body_end].trim(), sig)?;
    let mut side_conditions = Vec::new();
    let mut rest = &text[body_end..];
    while let Some(open) = rest.find('[') {
        let close = rest[open..]
            .find(']')
            .map(|c| open + c)
            .ok_or_else(|| err(ParseErrorKind::Unexpected, body_end, "unterminated side condition".to_owned()))?;
        let words: Vec<&str> = rest[open + 1..close].split_whitespace().collect();
        side_conditions.push(match words.as_slice() {
            [v, "not", "free", "in", f] => SideCondition::NotFreeIn {
                var: (*v).into(),
                formula: (*f).into(),
            },
            [f, "closed"] => SideCondition::Closed((*f).into()),
            _ => {
                return Err(err(
                    ParseErrorKind::Unexpected,
                    body_end + open,
                    format!("unrecognized side condition `{}`", &rest[open..=close]),
                )
                .into())
            }
        });
        rest = &rest[close + 1..];
    }
    if !rest.trim().is_empty() {
        return Err(err(
            ParseErrorKind::Unexpected,
            text.len() - rest.len(),
            "text after side conditions".to_owned(),
        )
        .into());
    }
    Schema::new(template, side_conditions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::permissive()
    }

    #[test]
    fn paper_target_parses_as_implication() {
        let f = parse("exists x1. P(x1) -> exists x1. ~~P(x1)", &sig()).unwrap();
        let p = Formula::atom("P", 1);
        let expected = Formula::imp(Formula::exists(1, p.clone()), Formula::exists(1, Formula::not(Formula::not(p))));
        assert_eq!(f, expected);
    }

    #[test]
    fn atomic_and_halmos_shape() {
        assert_eq!(parse("p1", &sig()).unwrap(), Formula::prop(1));
        let f = parse("~(~p1 /\\ ~p2)", &sig()).unwrap();
        let expected = Formula::not(Formula::and(Formula::not(Formula::prop(1)), Formula::not(Formula::prop(2))));
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("p1 -> p2 -> p3", &sig()).unwrap();
        assert_eq!(f, Formula::imp(Formula::prop(1), Formula::imp(Formula::prop(2), Formula::prop(3))));
        let g = parse("p1 \\/ p2 /\\ p3 -> p1", &sig()).unwrap();
        let lhs = Formula::or(Formula::prop(1), Formula::and(Formula::prop(2), Formula::prop(3)));
        assert_eq!(g, Formula::imp(lhs, Formula::prop(1)));
        let h = parse("~p1 /\\ p2", &sig()).unwrap();
        assert_eq!(h, Formula::and(Formula::not(Formula::prop(1)), Formula::prop(2)));
    }

    #[test]
    fn errors_carry_kind_and_position() {
        let e = parse("p1 & p2", &sig()).unwrap_err();
        assert_eq!((e.kind, e.pos), (ParseErrorKind::Lexical, 3));
        let e = parse("Q(x1) -> Z(x1)", &sig()).unwrap_err();
        assert_eq!((e.kind, e.pos), (ParseErrorKind::UnknownSymbol, 9));
        let e = parse("P(x1, x2)", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ArityMismatch);
        let e = parse("forall P(x1)", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnboundSyntax);
        let e = parse("x1 -> p1", &sig()).unwrap_err();
        assert_eq!((e.kind, e.pos), (ParseErrorKind::UnboundSyntax, 0));
        let e = parse("(p1 -> p2", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Unexpected);
        let e = parse("Phi -> p1", &sig()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol);
    }

    #[test]
    fn connective_outside_signature_is_rejected() {
        let s = Signature::propositional(&["not", "imp"]).unwrap();
        let e = parse("p1 /\\ p2", &s).unwrap_err();
        assert_eq!((e.kind, e.pos), (ParseErrorKind::UnknownSymbol, 3));
    }

    #[test]
    fn templates_admit_metavariables() {
        let t = parse_template("forall x. (Phi -> Psi) -> (Phi -> forall x. Psi)", &sig()).unwrap();
        assert_eq!(t.metas().len(), 2);
        assert_eq!(t.var_metas().len(), 1);
        let d = parse_template("~(~$1 /\\ ~$2)", &sig()).unwrap();
        assert_eq!(d.metas(), vec!["$1".into(), "$2".into()] as Vec<std::sync::Arc<str>>);
        let q = parse_template("~exists $v. ~$1", &sig()).unwrap();
        assert_eq!(q.var_metas(), vec![std::sync::Arc::<str>::from("$v")]);
    }
}
