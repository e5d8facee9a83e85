//! Parses a few formulas, prints them back and lists their free variables.
use axtrans::syntax::{parse, Signature};

fn main() -> axtrans::Result<()> {
    let sig = Signature::permissive();
    for text in [
        "exists x1. P(x1) -> exists x1. ~~P(x1)",
        "p1 -> p2 -> p1",
        "forall x1. (P(x1) /\\ Q(x2))",
        "~(p1 \\/ bot)",
    ] {
        let f = parse(text, &sig)?;
        let free: Vec<String> = f.free_vars().iter().map(|v| v.to_string()).collect();
        println!("{f:<45} depth {} free [{}]", f.depth(), free.join(" "));
    }
    match parse("p1 -> ", &sig) {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
    Ok(())
}
