//! Checks a five-step proof of `p1 -> p1`, then a corrupted copy.
use axtrans::calculus::{check_proof, Proof};
use axtrans::fixtures;

fn main() -> axtrans::Result<()> {
    let calc = fixtures::prop_a1a3();
    let text = fixtures::text::IDENTITY_PROOF;
    let proof = Proof::from_text("identity.proof", text, &calc)?;
    print!("{proof}");
    println!("{}", check_proof(&calc, &proof));

    let bad = text.replace("by MP 3 4", "by MP 4 3");
    let proof = Proof::from_text("bad.proof", &bad, &calc)?;
    println!("{}", check_proof(&calc, &proof));
    Ok(())
}
