//! Experiment: which reduced 3-quasigroups are inequivalent to one of their
//! inversions? Nothing is asserted; the counts are printed.
//!
//! ```text
//! cargo run --release --example inversion_equivalence
//! ```

use quasi4::census::collect_reduced;
use quasi4::quasigroup::are_equivalent_quasigroups;

fn main() -> quasi4::Result<()> {
    let (tables, _) = collect_reduced(3, 1)?;
    let mut witnesses = Vec::new();
    for f in &tables {
        for axis in 0..3 {
            let g = f.inversion(axis)?;
            if !are_equivalent_quasigroups(f, &g)? {
                witnesses.push((f.clone(), axis));
            }
        }
    }
    println!(
        "{} of {} (table, axis) pairs are inequivalent",
        witnesses.len(),
        3 * tables.len()
    );
    if let Some((f, axis)) = witnesses.first() {
        println!("first witness, inverted in axis {axis}:\n{}", f.to_text());
        println!("inversion:\n{}", f.inversion(*axis)?.to_text());
    }
    Ok(())
}
