//! Finds a three-valued matrix showing that the translated Hilbert-Ackermann
//! system does not prove `~(p1 /\ ~p1)`.
use axtrans::calculus::translate_calculus;
use axtrans::fixtures;
use axtrans::independence::{search_matrix, MatrixSearch};
use axtrans::syntax::parse;

fn main() -> axtrans::Result<()> {
    let calc = translate_calculus(&fixtures::halmos(), &fixtures::hilbert_ackermann())?;
    let target = parse("~(p1 /\\ ~p1)", &calc.sig)?;
    let out = search_matrix(&calc, &target, &MatrixSearch::default())?;
    println!("examined {} candidates over {}", out.examined, out.space);
    match out.found {
        Some(m) => print!("{}", m.to_text()),
        None => println!("no separating matrix"),
    }
    Ok(())
}
