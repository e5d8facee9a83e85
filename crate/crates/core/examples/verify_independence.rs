//! Certifies that the target formula is not a theorem of the translated
//! system, under both the one-variable values and the starred relation.

use axtrans::fixtures;
use axtrans::independence::{verify_independence, Semantics, VerifyConfig};

fn main() -> axtrans::Result<()> {
    let calc = fixtures::bs_system();
    let model = fixtures::prop1_model();
    let target = fixtures::target();
    let cfg = VerifyConfig::default();

    let values = verify_independence(&calc, Semantics::Values(&model), &target, &cfg)?;
    println!("{values}");
    let star = verify_independence(&calc, Semantics::Star(&model), &target, &cfg)?;
    println!("{star}");
    Ok(())
}
