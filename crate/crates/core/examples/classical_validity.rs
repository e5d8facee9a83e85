//! Decides monadic validity by searching all structures up to the `2^k` bound.
use axtrans::semantics::{find_countermodel, monadic_bound};
use axtrans::syntax::{parse, Signature};

fn main() -> axtrans::Result<()> {
    let sig = Signature::permissive();
    for text in [
        "exists x1. P(x1) -> exists x1. ~~P(x1)",
        "exists x1. P(x1)",
        "~exists x1. ~P(x1) -> exists x1. ~P(x1)",
        "forall x1. (P(x1) -> Q(x1)) -> (exists x1. P(x1) -> exists x1. Q(x1))",
    ] {
        let f = parse(text, &sig)?;
        match find_countermodel(&f, monadic_bound(&f))? {
            None => println!("valid      {f}"),
            Some(cm) => println!("not valid  {f}\n           {cm}"),
        }
    }
    Ok(())
}
