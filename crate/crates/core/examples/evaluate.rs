//! Evaluates formulas under the standard, generalized, starred and matrix semantics.
use axtrans::fixtures;
use axtrans::semantics::{true_star, Algebra, GeneralizedModel, Matrix, StarAlgebra};
use axtrans::syntax::{parse, Connective, Signature};

fn main() -> axtrans::Result<()> {
    let sig = Signature::permissive();
    let m = fixtures::prop1_model().with_defined_forall()?;
    let prims: Vec<_> = m.tables.keys().cloned().collect();
    let standard = GeneralizedModel::standard(m.domain.clone(), m.predicates.clone(), &prims)?;
    let star = StarAlgebra::new(&m);

    for text in [
        "P(x1)",
        "~~P(x1)",
        "exists x1. P(x1) -> exists x1. ~~P(x1)",
        "forall x1. P(x1) -> P(x1)",
    ] {
        let f = parse(text, &sig)?;
        println!(
            "{text:<42} standard {:<6} generalized {:<6} star {} ({})",
            standard.show(standard.value_1var(&f)?),
            m.show(m.value_1var(&f)?),
            star.show(star.eval_value(&f)?),
            if true_star(&m, &f)? { "true*" } else { "not true*" },
        );
    }

    let boolean = Matrix::boolean([Connective::Not, Connective::Imp])?;
    for text in ["p1 -> p1", "p1 -> ~p1"] {
        let f = parse(text, &sig)?;
        println!("{text:<12} Boolean refutation: {:?}", boolean.refuting_valuation(&f)?);
    }
    Ok(())
}
