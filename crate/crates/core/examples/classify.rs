//! Linear, semilinear and decomposable quasigroups, with the witnesses the
//! classifiers return.
//!
//! ```text
//! cargo run --example classify -- [table.q4]
//! ```

use std::fs;

use quasi4::quasigroup::{is_decomposable_structural, is_semilinear, linear_pairs, Classification};
use quasi4::Quasigroup;

fn show(name: &str, f: &Quasigroup) -> quasi4::Result<()> {
    println!("{name}: {}", Classification::of(f));
    if let Some((a, b)) = is_semilinear(f) {
        println!(
            "  S_{{{a},{b}}} is linear; linear pairs {:?}",
            linear_pairs(f)
        );
    }
    if f.arity() >= 3 {
        if let Some(d) = is_decomposable_structural(f)? {
            println!(
                "  inner block {:?}, outer arity {}",
                d.inner_coords,
                d.outer.arity()
            );
            assert_eq!(d.recompose(), *f);
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    if let Some(path) = std::env::args().nth(1) {
        let f = Quasigroup::parse(&fs::read_to_string(path)?)?;
        show("input", &f)?;
        return Ok(());
    }
    show("x0 ^ x1 ^ x2", &Quasigroup::linear(3)?)?;
    show(
        "x0 + x1 + x2 mod 4",
        &Quasigroup::from_fn(3, |x| (x[0] + x[1] + x[2]) % 4)?,
    )?;
    show(
        "(x0 ^ x2) + x1 + x3 mod 4",
        &Quasigroup::from_fn(4, |x| ((x[0] ^ x[2]) + x[1] + x[3]) % 4)?,
    )?;
    show(
        "((x0 + x1) mod 4) ^ x2, then + x3",
        &Quasigroup::from_fn(4, |x| ((((x[0] + x[1]) % 4) ^ x[2]) + x[3]) % 4)?,
    )?;
    Ok(())
}
