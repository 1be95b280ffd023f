//! Reduced form of a quasigroup and the isotopy that reproduces it.
//!
//! ```text
//! cargo run --example reduce -- [table.q4]
//! ```
//! Without an argument the input is x₀ + 3x₁ + x₂ + 2 mod 4.

use std::fs;

use quasi4::census::reduction_fiber;
use quasi4::Quasigroup;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = match std::env::args().nth(1) {
        Some(path) => Quasigroup::parse(&fs::read_to_string(path)?)?,
        None => Quasigroup::from_fn(3, |x| (x[0] + 3 * x[1] + x[2] + 2) % 4)?,
    };
    println!("input:\n{}", f.to_text());
    let (eq, g) = f.reduce();
    let taus: Vec<String> = eq.taus().iter().map(|t| t.to_string()).collect();
    println!("taus = {}", taus.join(" "));
    println!("reduced:\n{}", g.to_text());
    assert_eq!(eq.apply(&g)?, f);
    let fiber = reduction_fiber(&g);
    println!(
        "{} quasigroups share this reduced form (4·6^{})",
        fiber.len(),
        f.arity()
    );
    assert!(fiber.contains(&f));
    Ok(())
}
