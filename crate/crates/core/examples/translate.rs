//! Applies definitional translations and probes them for surjectivity and injectivity.
use axtrans::calculus::translate_calculus;
use axtrans::fixtures;
use axtrans::syntax::parse;
use axtrans::translation::{injective_up_to, surjective_up_to, ImageConfig};

fn main() -> axtrans::Result<()> {
    let halmos = fixtures::halmos();
    let f = parse("p1 \\/ ~p2", &halmos.source)?;
    println!("{f}  =>  {}", halmos.translate(&f)?);

    let bs = fixtures::forall_as_not_exists_not();
    let a4 = parse("forall x1. P(x1) -> P(x1)", &bs.source)?;
    println!("{a4}  =>  {}", bs.translate(&a4)?);

    let cfg = ImageConfig::default();
    let s = surjective_up_to(&fixtures::identity_bot(), 3, &cfg)?;
    println!("identity_bot: {}", serde_json::to_string(&s)?);
    let i = injective_up_to(&fixtures::merge_constants(), 1, &cfg)?;
    println!("merge_constants: {}", serde_json::to_string(&i)?);

    println!("\n{}", translate_calculus(&halmos, &fixtures::hilbert_ackermann())?.to_text());
    Ok(())
}
