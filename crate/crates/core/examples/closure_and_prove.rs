//! Bounded forward closure and theorem search with proof reconstruction.
use axtrans::calculus::{closure_bounded, is_theorem_bounded, ClosureConfig, TheoremSearch};
use axtrans::fixtures;
use axtrans::syntax::parse;

fn main() -> axtrans::Result<()> {
    let top = closure_bounded(&fixtures::top_only_calculus(), &ClosureConfig::new(3, 5))?;
    println!(
        "top_only closure: {:?}",
        top.sorted().iter().map(|f| f.to_string()).collect::<Vec<_>>()
    );

    let calc = fixtures::prop_a1a3();
    let cl = closure_bounded(&calc, &ClosureConfig::new(3, 2))?;
    println!("prop_a1a3 at depth 3, 2 rounds: {} theorems", cl.len());

    let goal = parse("p1 -> p1", &calc.sig)?;
    match is_theorem_bounded(&calc, &goal, &ClosureConfig::new(4, 2).vars(1))? {
        TheoremSearch::Yes(p) => print!("found a proof of {goal}:\n{p}"),
        TheoremSearch::Unknown { theorems, .. } => println!("{goal}: unknown after {theorems} theorems"),
    }
    Ok(())
}
