//! The starred satisfaction relation: negation and the universal quantifier
//! only hold at the all-distinguished assignment.

use std::collections::BTreeMap;

use super::{Algebra, GeneralizedModel};
use crate::error::{Error, Result};
use crate::syntax::{Connective, Formula, Quantifier, Var};

/// Satisfaction of `f` under `assignment` (element indices), clause by clause.
pub fn eval_star(m: &GeneralizedModel, f: &Formula, assignment: &BTreeMap<Var, usize>) -> Result<bool> {
    let u = m.domain.distinguished;
    let all_u = |g: &Formula| -> Result<bool> {
        for v in g.free_vars() {
            match assignment.get(&v) {
                Some(&a) if a == u => {}
                Some(_) => return Ok(false),
                None => return Err(Error::UnboundVariable(v.to_string())),
            }
        }
        Ok(true)
    };
    let at_u = |g: &Formula| -> BTreeMap<Var, usize> { g.free_vars().into_iter().map(|v| (v, u)).collect() };
    Ok(match f {
        Formula::Atom(pred, v) => {
            let a = *assignment.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            m.predicates
                .get(pred)
                .ok_or_else(|| Error::SignatureMismatch(format!("predicate {pred} has no interpretation")))?
                .contains(a)
        }
        Formula::Conn(Connective::Not, args) => all_u(f)? && !eval_star(m, &args[0], &at_u(&args[0]))?,
        Formula::Conn(Connective::Imp, args) => !eval_star(m, &args[0], assignment)? || eval_star(m, &args[1], assignment)?,
        Formula::Quant(Quantifier::Exists, v, body) => {
            let mut a = assignment.clone();
            let mut any = false;
            for b in 0..m.domain.size() {
                a.insert(*v, b);
                if eval_star(m, body, &a)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::Quant(Quantifier::Forall, _, body) => all_u(f)? && eval_star(m, body, &at_u(body))?,
        other => return Err(unsupported(other)),
    })
}

/// Satisfaction by the assignment sending every free variable to the distinguished element.
pub fn true_star(m: &GeneralizedModel, f: &Formula) -> Result<bool> {
    let u = m.domain.distinguished;
    let a = f.free_vars().into_iter().map(|v| (v, u)).collect();
    eval_star(m, f, &a)
}

fn unsupported(f: &Formula) -> Error {
    Error::SemanticsMismatch(format!("the starred relation has no clause for `{f}`"))
}

/// Meaning of a formula under the starred relation: its free variables and
/// the set of assignments to them that satisfy it.
///
/// Assignments are indexed in mixed radix over the free variables in
/// increasing order, the lowest variable least significant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StarValue {
    /// Bit `i` set iff `x{i}` is free.
    pub fv: u64,
    pub ext: u64,
}

impl StarValue {
    pub fn vars(self) -> impl Iterator<Item = Var> {
        (0..64u32).filter(move |i| self.fv >> i & 1 == 1).map(Var)
    }

    pub fn arity(self) -> u32 {
        self.fv.count_ones()
    }
}

/// [`StarValue`] semantics for a model; supports `n^k <= 64` assignments.
pub struct StarAlgebra<'a> {
    pub model: &'a GeneralizedModel,
}

impl<'a> StarAlgebra<'a> {
    pub fn new(model: &'a GeneralizedModel) -> Self {
        StarAlgebra { model }
    }

    fn n(&self) -> usize {
        self.model.domain.size()
    }

    fn cells(&self, fv: u64) -> Result<usize> {
        let k = fv.count_ones();
        match self.n().checked_pow(k) {
            Some(c) if c <= 64 => Ok(c),
            _ => Err(Error::ResourceCap(format!("{k} free variables over {} elements", self.n()))),
        }
    }

    /// Index of the all-distinguished assignment over `fv`.
    fn all_u(&self, fv: u64) -> usize {
        let (n, u) = (self.n(), self.model.domain.distinguished);
        (0..fv.count_ones()).fold(0, |acc, _| acc * n + u)
    }

    /// Re-indexes `v` over the larger variable set `to`.
    fn lift(&self, v: StarValue, to: u64) -> Result<Vec<bool>> {
        let n = self.n();
        let cells = self.cells(to)?;
        let to_vars: Vec<u32> = (0..64).filter(|i| to >> i & 1 == 1).collect();
        let mut out = vec![false; cells];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rest = idx;
            let mut sub = 0usize;
            let mut weight = 1usize;
            for &var in &to_vars {
                let a = rest % n;
                rest /= n;
                if v.fv >> var & 1 == 1 {
                    sub += a * weight;
                    weight *= n;
                }
            }
            *slot = v.ext >> sub & 1 == 1;
        }
        Ok(out)
    }

    fn pack(bits: &[bool]) -> u64 {
        bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as u64) << i)
    }

    pub fn eval_value(&self, f: &Formula) -> Result<StarValue> {
        Algebra::eval(self, f)
    }
}

impl Algebra for StarAlgebra<'_> {
    type Value = StarValue;

    fn leaf(&self, f: &Formula) -> Result<StarValue> {
        match f {
            Formula::Atom(pred, v) => {
                let p = self
                    .model
                    .predicates
                    .get(pred)
                    .ok_or_else(|| Error::SignatureMismatch(format!("predicate {pred} has no interpretation")))?;
                if v.0 >= 64 {
                    return Err(Error::ResourceCap(format!("variable {v}")));
                }
                Ok(StarValue { fv: 1 << v.0, ext: p.0 })
            }
            other => Err(unsupported(other)),
        }
    }

    fn connective(&self, c: &Connective, args: &[StarValue]) -> Result<StarValue> {
        match c {
            Connective::Not => {
                let a = args[0];
                let i = self.all_u(a.fv);
                let ext = if a.ext >> i & 1 == 0 { 1 << i } else { 0 };
                Ok(StarValue { fv: a.fv, ext })
            }
            Connective::Imp => {
                let fv = args[0].fv | args[1].fv;
                let l = self.lift(args[0], fv)?;
                let r = self.lift(args[1], fv)?;
                let bits: Vec<bool> = l.iter().zip(&r).map(|(a, b)| !a || *b).collect();
                Ok(StarValue {
                    fv,
                    ext: Self::pack(&bits),
                })
            }
            other => Err(Error::SemanticsMismatch(format!(
                "the starred relation has no clause for `{}`",
                other.name()
            ))),
        }
    }

    fn quantifier(&self, q: Quantifier, v: Var, body: StarValue) -> Result<StarValue> {
        let bit = 1u64 << v.0;
        let fv = body.fv & !bit;
        match q {
            Quantifier::Exists => {
                if body.fv & bit == 0 {
                    return Ok(body);
                }
                let n = self.n();
                let cells = self.cells(fv)?;
                // Position of `v` among the body's variables fixes its stride.
                let below = (body.fv & (bit - 1)).count_ones();
                let stride = n.pow(below);
                let mut bits = vec![false; cells];
                for (idx, slot) in bits.iter_mut().enumerate() {
                    let lo = idx % stride;
                    let hi = idx / stride;
                    *slot = (0..n).any(|b| body.ext >> (lo + b * stride + hi * stride * n) & 1 == 1);
                }
                Ok(StarValue {
                    fv,
                    ext: Self::pack(&bits),
                })
            }
            Quantifier::Forall => {
                let holds = body.ext >> self.all_u(body.fv) & 1 == 1;
                let ext = if holds { 1 << self.all_u(fv) } else { 0 };
                Ok(StarValue { fv, ext })
            }
        }
    }

    fn designated(&self, v: StarValue) -> bool {
        v.ext >> self.all_u(v.fv) & 1 == 1
    }

    fn show(&self, v: StarValue) -> String {
        let vars: Vec<String> = v.vars().map(|x| x.to_string()).collect();
        let n = self.n();
        let k = v.arity();
        let cells = n.pow(k);
        let mut sat = Vec::new();
        for idx in 0..cells {
            if v.ext >> idx & 1 == 1 {
                let mut rest = idx;
                let tuple: Vec<&str> = (0..k)
                    .map(|_| {
                        let a = rest % n;
                        rest /= n;
                        &*self.model.domain.elements[a]
                    })
                    .collect();
                sat.push(format!("({})", tuple.join(",")));
            }
        }
        format!("[{}] {{{}}}", vars.join(","), sat.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse;

    fn at(pairs: &[(u32, usize)]) -> BTreeMap<Var, usize> {
        pairs.iter().map(|&(v, a)| (Var(v), a)).collect()
    }

    #[test]
    fn clause_examples() {
        let m = fixtures::prop1_model();
        let sig = fixtures::bs_system().sig;
        let f = |s: &str| parse(s, &sig).unwrap();
        let (u, v) = (0, 1);
        assert!(eval_star(&m, &f("P(x1)"), &at(&[(1, v)])).unwrap());
        assert!(eval_star(&m, &f("~P(x1)"), &at(&[(1, u)])).unwrap());
        assert!(!eval_star(&m, &f("~P(x1)"), &at(&[(1, v)])).unwrap());
        assert!(true_star(&m, &f("exists x1. P(x1)")).unwrap());
        assert!(!true_star(&m, &f("exists x1. P(x1) -> exists x1. ~~P(x1)")).unwrap());
        assert!(true_star(&m, &f("P(x1) -> P(x1)")).unwrap());
        assert!(matches!(eval_star(&m, &f("P(x2)"), &at(&[(1, u)])), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn algebra_agrees_with_direct_clauses() {
        let m = fixtures::prop1_model();
        let sig = fixtures::bs_system().sig;
        let alg = StarAlgebra::new(&m);
        for s in [
            "exists x2. (P(x1) -> ~P(x2))",
            "~exists x1. ~(P(x1) -> P(x2)) -> (P(x2) -> ~exists x1. ~P(x1))",
            "exists x1. ~P(x2) -> P(x3)",
        ] {
            let f = parse(s, &sig).unwrap();
            let val = alg.eval_value(&f).unwrap();
            let vars: Vec<Var> = val.vars().collect();
            for idx in 0..(1usize << vars.len()) {
                let a: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(j, v)| (*v, idx >> j & 1)).collect();
                assert_eq!(val.ext >> idx & 1 == 1, eval_star(&m, &f, &a).unwrap(), "{s} at {a:?}");
            }
        }
    }
}
