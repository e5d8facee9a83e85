//! Searches two-element generalized models around the prop1 model, then with
//! seeded random `imp` tables.
use axtrans::fixtures;
use axtrans::independence::{search_generalized_model, ImpStrategy, ModelStrategy};

fn main() -> axtrans::Result<()> {
    let calc = fixtures::bs_system();
    let target = fixtures::target();
    let mut s = ModelStrategy::seeded(&fixtures::prop1_model())?;
    s.instance_depth = 2;
    let out = search_generalized_model(&calc, &target, &s)?;
    println!("neighbourhood: {} candidates, found: {}", out.examined, out.found.is_some());
    if let Some(m) = out.found {
        print!("{}", m.to_text());
    }

    s.imp = ImpStrategy::Random { samples: 200, seed: 42 };
    let out = search_generalized_model(&calc, &target, &s)?;
    println!("{}: {} candidates, found: {}", out.space, out.examined, out.found.is_some());
    Ok(())
}
