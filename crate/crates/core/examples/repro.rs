//! Runs the full reproduction suite and prints one line per checked claim.
use axtrans::cli::{repro, ReproTarget};

fn main() -> axtrans::Result<()> {
    for section in repro(ReproTarget::All)? {
        for c in &section.criteria {
            println!("{:?} {:<40} {}", section.name, c.name, if c.passed { "pass" } else { "FAIL" });
        }
    }
    Ok(())
}
