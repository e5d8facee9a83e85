//! Prints the A4/A5 value tables and the target's evaluation chain.
use axtrans::fixtures;
use axtrans::independence::{audit_axiom_tables, evaluation_chain};

fn main() -> axtrans::Result<()> {
    let m = fixtures::prop1_model();
    let t = audit_axiom_tables(&m)?;
    println!("{}", t.a4_text());
    println!("{}", t.a5_text());
    for line in evaluation_chain(&m, &fixtures::target())? {
        println!("{line}");
    }
    Ok(())
}
