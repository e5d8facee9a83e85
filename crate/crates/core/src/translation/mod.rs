//! Definitional translations: variable-fixed, compositional maps that send
//! each source primitive to a fixed target template.

mod check;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub use check::{
    injective_up_to, rule_appset, surjective_up_to, translate_rule_appset, Application, ImageConfig, Injectivity, RuleReadings,
    Surjectivity,
};

use crate::error::{Error, Result};
use crate::syntax::{
    parse_template, Binding, Connective, Formula, Name, Primitive, Quantifier, Schema, Signature, Template, VarFamily, VarTerm,
};
use crate::text;

pub const VAR_PLACEHOLDER: &str = "$v";

/// Name of the `i`-th (1-based) formula placeholder.
pub fn placeholder(i: usize) -> Name {
    format!("${i}").into()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Translation {
    pub name: String,
    pub source: Signature,
    pub target: Signature,
    defs: BTreeMap<Primitive, Template>,
}

impl Translation {
    /// Builds a translation, checking that every source primitive has exactly
    /// one defining template written with target primitives and the declared
    /// placeholders only.
    pub fn new(name: impl Into<String>, source: Signature, target: Signature, defs: BTreeMap<Primitive, Template>) -> Result<Translation> {
        for p in source.primitives() {
            let def = defs
                .get(&p)
                .ok_or_else(|| Error::Invalid(format!("no defining template for `{p}`")))?;
            check_template(&p, def, &target)?;
        }
        if let Some(extra) = defs.keys().find(|p| !source.has_primitive(p)) {
            return Err(Error::Invalid(format!("`{extra}` is not a source primitive")));
        }
        Ok(Translation {
            name: name.into(),
            source,
            target,
            defs,
        })
    }

    /// The translation sending every primitive of `source` to itself inside `target`.
    pub fn identity(name: impl Into<String>, source: Signature, target: Signature) -> Result<Translation> {
        let defs = source
            .primitives()
            .into_iter()
            .map(|p| {
                let t = match &p {
                    Primitive::Conn(c) => Template::Conn(c.clone(), (1..=c.arity()).map(|i| Template::Meta(placeholder(i))).collect()),
                    Primitive::Quant(q) => {
                        Template::Quant(*q, VarTerm::Meta(VAR_PLACEHOLDER.into()), Box::new(Template::Meta(placeholder(1))))
                    }
                };
                (p, t)
            })
            .collect();
        Translation::new(name, source, target, defs)
    }

    pub fn definition(&self, p: &Primitive) -> Option<&Template> {
        self.defs.get(p)
    }

    pub fn definitions(&self) -> impl Iterator<Item = (&Primitive, &Template)> {
        self.defs.iter()
    }

    /// Smallest depth of any defining template of a non-nullary primitive.
    pub fn min_template_depth(&self) -> usize {
        self.defs
            .iter()
            .filter(|(p, _)| p.arity() > 0)
            .map(|(_, t)| t.depth())
            .min()
            .unwrap_or(1)
    }

    /// Structural translation of a source formula.
    pub fn translate(&self, f: &Formula) -> Result<Formula> {
        check_primitives(&self.source, f)?;
        Ok(self.translate_unchecked(f))
    }

    pub(crate) fn translate_unchecked(&self, f: &Formula) -> Formula {
        match f {
            Formula::Prop(_) | Formula::Atom(..) => f.clone(),
            Formula::Conn(c, args) => {
                let def = &self.defs[&Primitive::Conn(c.clone())];
                let mut b = Binding::new();
                for (i, a) in args.iter().enumerate() {
                    b.formulas.insert(placeholder(i + 1), self.translate_unchecked(a));
                }
                def.fill(&b).expect("definitions only use declared placeholders")
            }
            Formula::Quant(q, v, body) => {
                let def = &self.defs[&Primitive::Quant(*q)];
                let mut b = Binding::new();
                b.formulas.insert(placeholder(1), self.translate_unchecked(body));
                b.vars.insert(VAR_PLACEHOLDER.into(), *v);
                def.fill(&b).expect("definitions only use declared placeholders")
            }
        }
    }

    /// Translates a template, keeping its metavariables fixed.
    pub fn translate_template(&self, t: &Template) -> Result<Template> {
        Ok(match t {
            Template::Meta(_) | Template::Prop(_) | Template::Atom(..) => t.clone(),
            Template::Conn(c, args) => {
                let def = self
                    .defs
                    .get(&Primitive::Conn(c.clone()))
                    .ok_or_else(|| Error::SignatureMismatch(format!("connective `{}` is not a source primitive", c.name())))?;
                let mut fm = BTreeMap::new();
                for (i, a) in args.iter().enumerate() {
                    fm.insert(placeholder(i + 1), self.translate_template(a)?);
                }
                def.substitute(&fm, &BTreeMap::new())
            }
            Template::Quant(q, v, body) => {
                let def = self
                    .defs
                    .get(&Primitive::Quant(*q))
                    .ok_or_else(|| Error::SignatureMismatch(format!("quantifier `{}` is not a source primitive", q.name())))?;
                let fm = BTreeMap::from([(placeholder(1), self.translate_template(body)?)]);
                let vm = BTreeMap::from([(Name::from(VAR_PLACEHOLDER), v.clone())]);
                def.substitute(&fm, &vm)
            }
        })
    }

    /// Schema reading of translation: the template is translated with its
    /// metavariables left in place (so they range over all target formulas);
    /// side conditions carry over unchanged.
    pub fn translate_schema(&self, s: &Schema) -> Result<Schema> {
        Ok(Schema {
            template: self.translate_template(&s.template)?,
            side_conditions: s.side_conditions.clone(),
        })
    }

    /// Parses the `.trans` text format.
    pub fn from_text(file: &str, text: &str) -> Result<Translation> {
        let mut name = file.to_owned();
        let mut source = None;
        let mut target = None;
        let mut props = VarFamily::Unbounded;
        let mut vars = VarFamily::Absent;
        let mut predicates: Vec<String> = Vec::new();
        let mut raw_defs: Vec<(usize, String, String)> = Vec::new();
        for (line, content) in text::lines(text) {
            let (kw, rest) = text::directive(content);
            match kw {
                "name" => name = rest.to_owned(),
                "source" => source = Some((line, rest.to_owned())),
                "target" => target = Some((line, rest.to_owned())),
                "props" => props = rest.parse().map_err(|e: String| Error::format(file, line, e))?,
                "vars" => vars = rest.parse().map_err(|e: String| Error::format(file, line, e))?,
                "predicates" => predicates = rest.split_whitespace().map(str::to_owned).collect(),
                "def" => {
                    let (p, body) = text::named(rest).ok_or_else(|| Error::format(file, line, "expected `def <primitive>: <template>`"))?;
                    raw_defs.push((line, p.to_owned(), body.to_owned()));
                }
                other => return Err(Error::format(file, line, format!("unknown directive `{other}`"))),
            }
        }
        let build = |spec: Option<(usize, String)>, what: &str| -> Result<Signature> {
            let (line, prims) = spec.ok_or_else(|| Error::format(file, 0, format!("missing `{what}` line")))?;
            let mut sig = Signature::new(props, vars);
            sig.predicates = predicates.iter().map(|p| Name::from(p.as_str())).collect();
            let prims: Vec<&str> = prims.split_whitespace().collect();
            sig.with_primitives(&prims).map_err(|e| Error::format(file, line, e.to_string()))
        };
        let source = build(source, "source")?;
        let target = build(target, "target")?;
        let template_sig = Signature {
            props: VarFamily::Absent,
            vars: VarFamily::Absent,
            predicates: BTreeSet::new(),
            ..target.clone()
        };
        let mut defs = BTreeMap::new();
        for (line, p, body) in raw_defs {
            let t = parse_template(&body, &template_sig).map_err(|e| Error::format(file, line, e.to_string()))?;
            if defs.insert(Primitive::from_name(&p), t).is_some() {
                return Err(Error::format(file, line, format!("second definition for `{p}`")));
            }
        }
        Translation::new(name, source, target, defs)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name {}", self.name);
        let _ = writeln!(s, "source {}", self.source.describe_primitives());
        let _ = writeln!(s, "target {}", self.target.describe_primitives());
        let _ = writeln!(s, "props {}", self.source.props);
        let _ = writeln!(s, "vars {}", self.source.vars);
        if !self.source.predicates.is_empty() {
            let preds: Vec<&str> = self.source.predicates.iter().map(|p| &**p).collect();
            let _ = writeln!(s, "predicates {}", preds.join(" "));
        }
        for (p, t) in &self.defs {
            let _ = writeln!(s, "def {p}: {t}");
        }
        s
    }
}

fn check_template(p: &Primitive, def: &Template, target: &Signature) -> Result<()> {
    let allowed: BTreeSet<Name> = (1..=p.arity()).map(placeholder).collect();
    let mut problem = None;
    def.visit(&mut |node| {
        if problem.is_some() {
            return;
        }
        match node {
            Template::Meta(m) if !allowed.contains(m) => problem = Some(format!("placeholder `{m}`")),
            Template::Prop(_) | Template::Atom(..) => problem = Some("an atomic formula".to_owned()),
            Template::Conn(c, _) if !target.connectives.contains(c) => {
                problem = Some(format!("connective `{}` outside the target", c.name()))
            }
            Template::Quant(q, v, _) => {
                if !target.quantifiers.contains(q) {
                    problem = Some(format!("quantifier `{}` outside the target", q.name()));
                } else if *v != VarTerm::Meta(VAR_PLACEHOLDER.into()) {
                    problem = Some(format!("bound variable `{v}` (only `$v` is allowed)"));
                }
            }
            _ => {}
        }
    });
    if let Some(what) = problem {
        return Err(Error::Invalid(format!("definition of `{p}` uses {what}")));
    }
    let used = def.metas();
    if let Some(missing) = allowed.iter().find(|m| !used.contains(m)) {
        // Dropping an argument is legal for a definitional translation, but a
        // quantifier definition must still bind its variable somewhere.
        if matches!(p, Primitive::Quant(_)) {
            return Err(Error::Invalid(format!("definition of `{p}` never uses `{missing}`")));
        }
    }
    Ok(())
}

/// Fails unless every connective and quantifier of `f` is a primitive of `sig`.
pub(crate) fn check_primitives(sig: &Signature, f: &Formula) -> Result<()> {
    let mut bad: Option<String> = None;
    f.visit(&mut |node| match node {
        Formula::Conn(c, _) if bad.is_none() && !sig.connectives.contains(c) => bad = Some(c.name().to_owned()),
        Formula::Quant(q, _, _) if bad.is_none() && !sig.quantifiers.contains(q) => bad = Some(q.name().to_owned()),
        _ => {}
    });
    match bad {
        None => Ok(()),
        Some(p) => Err(Error::SignatureMismatch(format!("`{p}` in `{f}` is not a source primitive"))),
    }
}

/// Convenience lookups used by fixtures and tests.
impl Translation {
    pub fn defines(&self, c: &Connective) -> bool {
        self.defs.contains_key(&Primitive::Conn(c.clone()))
    }

    pub fn defines_quantifier(&self, q: Quantifier) -> bool {
        self.defs.contains_key(&Primitive::Quant(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse;

    #[test]
    fn halmos_disjunction() {
        let t = fixtures::halmos();
        let f = parse("p1 \\/ p2", &t.source).unwrap();
        assert_eq!(t.translate(&f).unwrap().to_string(), "~(~p1 /\\ ~p2)");
    }

    #[test]
    fn forall_as_not_exists_not() {
        let t = fixtures::forall_as_not_exists_not();
        let f = parse("forall x1. P(x1)", &t.source).unwrap();
        assert_eq!(t.translate(&f).unwrap().to_string(), "~exists x1. ~P(x1)");
    }

    #[test]
    fn identity_fixes_formulas() {
        let t = fixtures::identity_bot();
        let f = parse("~(p1 \\/ ~p2) \\/ p3", &t.source).unwrap();
        assert_eq!(t.translate(&f).unwrap(), f);
    }

    #[test]
    fn source_mismatch_is_reported() {
        let t = fixtures::halmos();
        let f = Formula::and(Formula::prop(1), Formula::prop(2));
        assert!(matches!(t.translate(&f), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn schemas_keep_metavariables_and_side_conditions() {
        let t = fixtures::forall_as_not_exists_not();
        let sig = Signature::permissive();
        let a4 = Schema::plain(parse_template("forall x. Phi -> Phi", &sig).unwrap());
        assert_eq!(t.translate_schema(&a4).unwrap().to_string(), "~exists x. ~Phi -> Phi");
        let a1 = Schema::plain(parse_template("Phi -> (Psi -> Phi)", &sig).unwrap());
        assert_eq!(t.translate_schema(&a1).unwrap(), a1);
        let a5 = Schema::new(
            parse_template("forall x. (Phi -> Psi) -> (Phi -> forall x. Psi)", &sig).unwrap(),
            vec![crate::syntax::SideCondition::NotFreeIn {
                var: "x".into(),
                formula: "Phi".into(),
            }],
        )
        .unwrap();
        let t5 = t.translate_schema(&a5).unwrap();
        assert_eq!(
            t5.to_string(),
            "~exists x. ~(Phi -> Psi) -> Phi -> ~exists x. ~Psi [x not free in Phi]"
        );
    }

    #[test]
    fn definitions_must_stay_in_target() {
        let src = Signature::propositional(&["or", "not"]).unwrap();
        let tgt = Signature::propositional(&["and", "not"]).unwrap();
        let defs = BTreeMap::from([
            (
                Primitive::from_name("not"),
                parse_template("~$1", &Signature::permissive()).unwrap(),
            ),
            (
                Primitive::from_name("or"),
                parse_template("$1 \\/ $2", &Signature::permissive()).unwrap(),
            ),
        ]);
        assert!(Translation::new("bad", src, tgt, defs).is_err());
    }

    #[test]
    fn text_round_trip() {
        for t in [fixtures::halmos(), fixtures::forall_as_not_exists_not(), fixtures::top_only()] {
            let again = Translation::from_text("again", &t.to_text()).unwrap();
            assert_eq!(again, t);
        }
    }
}
