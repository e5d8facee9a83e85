//! Exhaustive searches for separating matrices and two-element generalized models.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::classes::{realized_classes, sweep, Compiled, Pool};
use super::{verify_independence, Semantics, VerifyConfig};
use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::semantics::{Algebra, Domain, GeneralizedModel, Matrix, OperationTable, Subset};
use crate::syntax::{Connective, Formula, Primitive, PropVar, Quantifier, SideCondition, Template};

/// What a search returned, how much it looked at, and which space it covered.
#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome<T> {
    pub found: Option<T>,
    /// Candidates (complete or partial) visited before stopping.
    pub examined: u64,
    pub space: String,
}

#[derive(Clone, Debug)]
pub struct MatrixSearch {
    pub max_size: usize,
    pub max_candidates: u64,
}

impl Default for MatrixSearch {
    fn default() -> Self {
        MatrixSearch {
            max_size: 3,
            max_candidates: 50_000_000,
        }
    }
}

/// Stack program over matrix values; inputs are metavariables or propositional variables.
#[derive(Clone, Debug)]
struct Program {
    ops: Vec<Op>,
    inputs: usize,
    /// Highest connective index used, or `None` if no connective occurs.
    last_conn: Option<usize>,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Input(u8),
    Apply(u8, u8),
}

impl Program {
    fn template(t: &Template, metas: &[crate::syntax::Name], conns: &[Connective]) -> Result<Program> {
        let mut p = Program {
            ops: Vec::new(),
            inputs: metas.len(),
            last_conn: None,
        };
        p.emit_template(t, metas, conns)?;
        Ok(p)
    }

    fn emit_template(&mut self, t: &Template, metas: &[crate::syntax::Name], conns: &[Connective]) -> Result<()> {
        match t {
            Template::Meta(m) => {
                let i = metas.iter().position(|x| x == m).expect("collected");
                self.ops.push(Op::Input(i as u8));
            }
            Template::Conn(c, args) => {
                for a in args {
                    self.emit_template(a, metas, conns)?;
                }
                self.apply(c, conns)?;
            }
            other => {
                return Err(Error::SemanticsMismatch(format!(
                    "matrix search handles propositional schemata only, not `{other}`"
                )))
            }
        }
        Ok(())
    }

    fn formula(f: &Formula, props: &[PropVar], conns: &[Connective]) -> Result<Program> {
        let mut p = Program {
            ops: Vec::new(),
            inputs: props.len(),
            last_conn: None,
        };
        p.emit_formula(f, props, conns)?;
        Ok(p)
    }

    fn emit_formula(&mut self, f: &Formula, props: &[PropVar], conns: &[Connective]) -> Result<()> {
        match f {
            Formula::Prop(v) => {
                let i = props.iter().position(|x| x == v).expect("collected");
                self.ops.push(Op::Input(i as u8));
            }
            Formula::Conn(c, args) => {
                for a in args.iter() {
                    self.emit_formula(a, props, conns)?;
                }
                self.apply(c, conns)?;
            }
            other => return Err(Error::SemanticsMismatch(format!("`{other}` is not propositional"))),
        }
        Ok(())
    }

    fn apply(&mut self, c: &Connective, conns: &[Connective]) -> Result<()> {
        let i = conns
            .iter()
            .position(|x| x == c)
            .ok_or_else(|| Error::MissingTable(c.name().to_owned()))?;
        self.last_conn = Some(self.last_conn.map_or(i, |j| j.max(i)));
        self.ops.push(Op::Apply(i as u8, c.arity() as u8));
        Ok(())
    }

    fn run(&self, tables: &[Vec<u8>], n: usize, inputs: &[u8]) -> u8 {
        let mut stack = [0u8; 64];
        let mut sp = 0;
        for op in &self.ops {
            match *op {
                Op::Input(i) => {
                    stack[sp] = inputs[i as usize];
                    sp += 1;
                }
                Op::Apply(c, arity) => {
                    let arity = arity as usize;
                    let mut idx = 0usize;
                    for &a in &stack[sp - arity..sp] {
                        idx = idx * n + a as usize;
                    }
                    sp -= arity;
                    stack[sp] = tables[c as usize][idx];
                    sp += 1;
                }
            }
        }
        stack[0]
    }
}

enum MatrixCheck {
    /// Designated under every input.
    Valid(Program),
    /// Premises designated imply conclusion designated, under every input.
    Preserves(Vec<Program>, Program),
    /// Undesignated under some input.
    Refuted(Program),
}

impl MatrixCheck {
    fn stage(&self) -> Option<usize> {
        match self {
            MatrixCheck::Valid(p) | MatrixCheck::Refuted(p) => p.last_conn,
            MatrixCheck::Preserves(ps, c) => ps.iter().chain([c]).filter_map(|p| p.last_conn).max(),
        }
    }

    fn holds(&self, tables: &[Vec<u8>], n: usize, designated: &[bool]) -> bool {
        let inputs = match self {
            MatrixCheck::Valid(p) | MatrixCheck::Refuted(p) => p.inputs,
            MatrixCheck::Preserves(_, c) => c.inputs,
        };
        let mut args = vec![0u8; inputs];
        let total = n.pow(inputs as u32);
        let refuted = matches!(self, MatrixCheck::Refuted(_));
        for i in 0..total {
            let mut rest = i;
            for slot in args.iter_mut() {
                *slot = (rest % n) as u8;
                rest /= n;
            }
            let ok = match self {
                MatrixCheck::Valid(p) | MatrixCheck::Refuted(p) => designated[p.run(tables, n, &args) as usize],
                MatrixCheck::Preserves(ps, c) => {
                    !ps.iter().all(|p| designated[p.run(tables, n, &args) as usize]) || designated[c.run(tables, n, &args) as usize]
                }
            };
            if refuted && !ok {
                return true;
            }
            if !refuted && !ok {
                return false;
            }
        }
        !refuted
    }
}

/// Finds the first matrix (by size, then designated set, then tables in
/// lexicographic order) validating every axiom, preserving every rule and
/// refuting `target`. Checks run as soon as the tables they mention are fixed.
pub fn search_matrix(c: &Calculus, target: &Formula, cfg: &MatrixSearch) -> Result<SearchOutcome<Matrix>> {
    if !(2..=4).contains(&cfg.max_size) {
        return Err(Error::DomainSizeUnsupported(cfg.max_size));
    }
    if !c.sig.quantifiers.is_empty() || !c.sig.predicates.is_empty() {
        return Err(Error::SemanticsMismatch(format!("{} is not propositional", c.name)));
    }
    c.sig.check(target)?;
    let conns: Vec<Connective> = c.sig.connectives.iter().cloned().collect();
    let mut checks = Vec::new();
    for ax in &c.axioms {
        let metas = ax.schema.template.metas();
        checks.push(MatrixCheck::Valid(Program::template(&ax.schema.template, &metas, &conns)?));
    }
    for r in &c.rules {
        let metas = Compiled::new(&r.templates().collect::<Vec<_>>()).metas;
        let premises = r
            .premises
            .iter()
            .map(|p| Program::template(p, &metas, &conns))
            .collect::<Result<Vec<_>>>()?;
        let conclusion = Program::template(&r.conclusion, &metas, &conns)?;
        checks.push(MatrixCheck::Preserves(premises, conclusion));
    }
    let props: Vec<PropVar> = target.prop_vars().into_iter().collect();
    // The target goes first within its stage: it prunes hardest.
    checks.insert(0, MatrixCheck::Refuted(Program::formula(target, &props, &conns)?));
    let mut by_stage: Vec<Vec<&MatrixCheck>> = vec![Vec::new(); conns.len() + 1];
    for ch in &checks {
        by_stage[ch.stage().map_or(0, |s| s + 1)].push(ch);
    }
    let mut examined = 0u64;
    let space = format!(
        "sizes 2..={}, every non-empty proper designated set, every table for {}",
        cfg.max_size,
        conns.iter().map(|c| c.name().to_owned()).collect::<Vec<_>>().join(" ")
    );
    for n in 2..=cfg.max_size {
        for mask in 1..(1u32 << n) - 1 {
            let designated: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            if !by_stage[0].iter().all(|ch| ch.holds(&[], n, &designated)) {
                continue;
            }
            let mut tables: Vec<Vec<u8>> = conns.iter().map(|c| vec![0u8; n.pow(c.arity() as u32)]).collect();
            let mut search = Search {
                n,
                designated: &designated,
                stages: &by_stage,
                examined: &mut examined,
                max: cfg.max_candidates,
            };
            if search.descend(&mut tables, 0)? {
                let m = Matrix {
                    size: n,
                    designated,
                    tables: conns.iter().cloned().zip(tables).collect(),
                };
                certify_matrix(c, &m, target)?;
                return Ok(SearchOutcome {
                    found: Some(m),
                    examined,
                    space,
                });
            }
        }
    }
    Ok(SearchOutcome {
        found: None,
        examined,
        space,
    })
}

struct Search<'a> {
    n: usize,
    designated: &'a [bool],
    stages: &'a [Vec<&'a MatrixCheck>],
    examined: &'a mut u64,
    max: u64,
}

impl Search<'_> {
    fn descend(&mut self, tables: &mut Vec<Vec<u8>>, i: usize) -> Result<bool> {
        if i == tables.len() {
            return Ok(true);
        }
        let cells = tables[i].len();
        let total = (self.n as u128).pow(cells as u32);
        for code in 0..total {
            *self.examined += 1;
            if *self.examined > self.max {
                return Err(Error::ResourceCap(format!("more than {} candidate tables", self.max)));
            }
            let mut rest = code;
            for cell in tables[i].iter_mut().rev() {
                *cell = (rest % self.n as u128) as u8;
                rest /= self.n as u128;
            }
            if self.stages[i + 1].iter().all(|ch| ch.holds(tables, self.n, self.designated)) && self.descend(tables, i + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Re-verifies a found matrix from its serialized text.
fn certify_matrix(c: &Calculus, m: &Matrix, target: &Formula) -> Result<()> {
    let reparsed = Matrix::from_text("search result", &m.to_text())?;
    let report = verify_independence(c, Semantics::Matrix(&reparsed), target, &VerifyConfig::default())?;
    if report.is_independent() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("search returned a matrix that does not verify:\n{report}")))
    }
}

/// Candidate `imp` tables for a two-element generalized-model search.
#[derive(Clone, Debug)]
pub enum ImpStrategy {
    /// All `4^16` tables; only feasible with a large candidate budget.
    Exhaustive,
    /// Tables differing from `seed` in at most `radius` cells, nearest first.
    Neighbourhood {
        seed: OperationTable,
        radius: usize,
    },
    Fixed(OperationTable),
    /// `samples` uniformly random tables from a seeded generator.
    Random {
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct ModelStrategy {
    pub imp: ImpStrategy,
    /// Designated sets to try, in order.
    pub designated: Vec<BTreeSet<Subset>>,
    /// Interpretation of every predicate.
    pub predicate: Subset,
    pub instance_depth: usize,
    pub max_candidates: u64,
}

impl ModelStrategy {
    /// Neighbourhood of radius 1 around `seed`'s `imp` table, with its designated set and predicates.
    pub fn seeded(seed: &GeneralizedModel) -> Result<ModelStrategy> {
        Ok(ModelStrategy {
            imp: ImpStrategy::Neighbourhood {
                seed: seed.table(&Primitive::Conn(Connective::Imp))?.clone(),
                radius: 1,
            },
            designated: vec![seed.designated.clone()],
            predicate: seed.predicates.values().next().copied().unwrap_or(Subset(0b10)),
            instance_depth: 3,
            max_candidates: 50_000_000,
        })
    }

    pub fn describe(&self) -> String {
        let imp = match &self.imp {
            ImpStrategy::Exhaustive => "every imp table".to_owned(),
            ImpStrategy::Neighbourhood { radius, .. } => format!("imp tables within {radius} cells of the seed"),
            ImpStrategy::Fixed(_) => "the given imp table only".to_owned(),
            ImpStrategy::Random { samples, seed } => format!("{samples} random imp tables (seed {seed})"),
        };
        format!(
            "two elements, every not and exists table, {imp}, {} designated set(s), fillers to depth {}",
            self.designated.len(),
            self.instance_depth
        )
    }
}

fn imp_candidates<'a>(domain: &'a Domain, s: &'a ImpStrategy) -> Box<dyn Iterator<Item = OperationTable> + 'a> {
    let radix = 1u64 << domain.size();
    match s {
        ImpStrategy::Fixed(t) => Box::new(std::iter::once(t.clone())),
        ImpStrategy::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Box::new((0..*samples).map(move |_| OperationTable::from_fn(domain, 2, |_| Subset(rng.gen_range(0..radix)))))
        }
        ImpStrategy::Exhaustive => {
            let cells = (radix * radix) as u32;
            Box::new((0..radix.pow(cells)).map(move |code| {
                let mut t = OperationTable::from_fn(domain, 2, |_| Subset::EMPTY);
                let mut rest = code;
                let rows: Vec<Vec<Subset>> = t.rows().map(|(a, _)| a).collect();
                for args in rows.iter().rev() {
                    t.set(args, Subset(rest % radix));
                    rest /= radix;
                }
                t
            }))
        }
        ImpStrategy::Neighbourhood { seed, radius } => {
            let rows: Vec<(Vec<Subset>, Subset)> = seed.rows().collect();
            let mut out = vec![seed.clone()];
            let mut frontier: Vec<(OperationTable, usize)> = vec![(seed.clone(), 0)];
            for _ in 0..*radius {
                let mut next = Vec::new();
                for (t, from) in &frontier {
                    for (cell, (args, orig)) in rows.iter().enumerate().skip(*from) {
                        for v in (0..radix).map(Subset).filter(|v| v != orig) {
                            let mut t2 = t.clone();
                            t2.set(args, v);
                            next.push((t2, cell + 1));
                        }
                    }
                }
                out.extend(next.iter().map(|(t, _)| t.clone()));
                frontier = next;
            }
            Box::new(out.into_iter())
        }
    }
}

/// Primitive needs of a template, as a bit set over `[imp, not, exists, forall]`.
fn needs(t: &Template) -> u8 {
    let mut m = 0;
    for c in t.connectives() {
        m |= match c {
            Connective::Imp => 1,
            Connective::Not => 2,
            _ => 16,
        };
    }
    for q in t.quantifiers() {
        m |= match q {
            Quantifier::Exists => 4,
            Quantifier::Forall => 6,
        };
    }
    m
}

/// Searches two-element models with fixed predicate values: `not` and
/// `exists` exhaustively, `imp` per the strategy. Rule checks are table
/// level and run as soon as their tables are fixed; axioms are checked over
/// fillers to the strategy's depth. Hits are re-verified from serialized form.
pub fn search_generalized_model(c: &Calculus, target: &Formula, s: &ModelStrategy) -> Result<SearchOutcome<GeneralizedModel>> {
    c.sig.check(target)?;
    for p in c.sig.primitives() {
        if !matches!(
            p,
            Primitive::Conn(Connective::Not | Connective::Imp) | Primitive::Quant(Quantifier::Exists | Quantifier::Forall)
        ) {
            return Err(Error::Unsupported(format!("model search does not cover `{}`", p.name())));
        }
    }
    let domain = Domain::standard(2)?;
    let blank1 = OperationTable::from_fn(&domain, 1, |_| Subset::EMPTY);
    let mut model = GeneralizedModel {
        name: "found".into(),
        domain: domain.clone(),
        predicates: c.sig.predicates.iter().map(|p| (p.clone(), s.predicate)).collect(),
        tables: [
            (Primitive::Conn(Connective::Not), blank1.clone()),
            (
                Primitive::Conn(Connective::Imp),
                OperationTable::from_fn(&domain, 2, |_| Subset::EMPTY),
            ),
            (Primitive::Quant(Quantifier::Exists), blank1.clone()),
        ]
        .into_iter()
        .collect(),
        designated: BTreeSet::new(),
    };
    let uses_forall = c.sig.has_primitive(&Primitive::Quant(Quantifier::Forall));
    let phi = Template::meta("Phi");
    let mut rules: Vec<(Compiled, Vec<SideCondition>, usize, u8)> = Vec::new();
    for r in &c.rules {
        let ts: Vec<&Template> = r.templates().collect();
        let need = ts.iter().fold(0, |acc, t| acc | needs(t));
        rules.push((Compiled::new(&ts), r.side_conditions.clone(), r.premises.len(), need));
    }
    if let (true, Some(g)) = (c.generalize_axioms, &c.generalizer) {
        rules.push((Compiled::new(&[&phi, g]), Vec::new(), 1, needs(g)));
    }
    let axioms: Vec<(Compiled, &[SideCondition])> = c
        .axioms
        .iter()
        .map(|a| (Compiled::new(&[&a.schema.template]), a.schema.side_conditions.as_slice()))
        .collect();
    let values = super::classes::value_classes(domain.subsets());
    let pool = Pool::new(&c.sig, 1, 0);
    let rules_hold = |m: &GeneralizedModel, stage: u8, prev: u8| -> Result<bool> {
        for (compiled, side, premises, need) in &rules {
            if need & !stage != 0 || need & !prev == 0 && prev != 0 {
                continue;
            }
            let sw = sweep(m, compiled, side, &values, &pool.vars, |v| {
                !v[..*premises].iter().all(|&p| m.designated(p)) || m.designated(v[*premises])
            })?;
            if sw.failure.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut examined = 0u64;
    let space = s.describe();
    let subsets: Vec<Subset> = domain.subsets().collect();
    let unary = |code: u64| -> Vec<Subset> { (0..4).map(|i| Subset(code >> (2 * (3 - i)) & 3)).collect() };
    for designated in &s.designated {
        model.designated = designated.clone();
        for imp in imp_candidates(&domain, &s.imp) {
            examined += 1;
            model.tables.insert(Primitive::Conn(Connective::Imp), imp);
            if !rules_hold(&model, 1, 0)? {
                continue;
            }
            for not_code in 0..256u64 {
                let not = unary(not_code);
                let t = model.tables.get_mut(&Primitive::Conn(Connective::Not)).expect("inserted");
                for (x, v) in subsets.iter().zip(&not) {
                    t.set(&[*x], *v);
                }
                if !rules_hold(&model, 3, 1)? {
                    continue;
                }
                for ex_code in 0..256u64 {
                    examined += 1;
                    if examined > s.max_candidates {
                        return Err(Error::ResourceCap(format!("more than {} candidate models", s.max_candidates)));
                    }
                    let ex = unary(ex_code);
                    let t = model.tables.get_mut(&Primitive::Quant(Quantifier::Exists)).expect("inserted");
                    for (x, v) in subsets.iter().zip(&ex) {
                        t.set(&[*x], *v);
                    }
                    let m = if uses_forall { model.with_defined_forall()? } else { model.clone() };
                    if m.designated(m.eval(target)?) || !rules_hold(&m, 7, 3)? {
                        continue;
                    }
                    let levels = realized_classes(&m, &pool, s.instance_depth, 10_000)?;
                    let classes = levels.last().expect("depth 0 level");
                    let mut sound = true;
                    for (compiled, side) in &axioms {
                        let sw = sweep(&m, compiled, side, classes, &pool.vars, |v| m.designated(v[0]))?;
                        if sw.failure.is_some() {
                            sound = false;
                            break;
                        }
                    }
                    if sound {
                        let found = certify_model(c, &model, target, s.instance_depth)?;
                        return Ok(SearchOutcome {
                            found: Some(found),
                            examined,
                            space,
                        });
                    }
                }
            }
        }
    }
    Ok(SearchOutcome {
        found: None,
        examined,
        space,
    })
}

fn certify_model(c: &Calculus, m: &GeneralizedModel, target: &Formula, depth: usize) -> Result<GeneralizedModel> {
    let reparsed = GeneralizedModel::from_text("search result", &m.to_text())?;
    let cfg = VerifyConfig {
        instance_depth: depth,
        ..VerifyConfig::default()
    };
    let report = verify_independence(c, Semantics::Values(&reparsed), target, &cfg)?;
    if report.is_independent() {
        Ok(reparsed)
    } else {
        Err(Error::Invalid(format!("search returned a model that does not verify:\n{report}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::translate_calculus;
    use crate::fixtures;
    use crate::syntax::parse;

    #[test]
    fn theorem_has_no_separating_matrix() {
        let c = fixtures::prop_a1a3();
        let t = parse("p1 -> p1", &c.sig).unwrap();
        let cfg = MatrixSearch {
            max_size: 2,
            ..MatrixSearch::default()
        };
        assert!(search_matrix(&c, &t, &cfg).unwrap().found.is_none());
    }

    #[test]
    fn halmos_translation_admits_a_separating_matrix() {
        let c = translate_calculus(&fixtures::halmos(), &fixtures::hilbert_ackermann()).unwrap();
        let t = parse("~(p1 /\\ ~p1)", &c.sig).unwrap();
        let out = search_matrix(&c, &t, &MatrixSearch::default()).unwrap();
        let m = out.found.expect("a separating matrix exists");
        assert!(m.refuting_valuation(&t).unwrap().is_some());
    }

    #[test]
    fn seeded_model_search_finds_a_verified_separator() {
        let c = fixtures::bs_system();
        let mut s = ModelStrategy::seeded(&fixtures::prop1_model()).unwrap();
        s.instance_depth = 2;
        let out = search_generalized_model(&c, &fixtures::target(), &s).unwrap();
        let m = out.found.expect("the seed itself separates");
        assert!(!m.designated(m.value_1var(&fixtures::target()).unwrap()));
    }
}
