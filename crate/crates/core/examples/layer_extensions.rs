//! Completing two layers of a 3-quasigroup: brute-force extension counts
//! against the double-code count, and the two semilinear completions built
//! from a semilinear layer.
//!
//! ```text
//! cargo run --example layer_extensions
//! ```

use quasi4::census::collect_reduced;
use quasi4::quasigroup::{
    count_extensions, extension_count_by_codes, is_semilinear, swap_extensions, PartialQuasigroup,
};

fn main() -> quasi4::Result<()> {
    let (tables, _) = collect_reduced(3, 1)?;
    let mut histogram = std::collections::BTreeMap::new();
    for q in &tables {
        for beta in 1..4u8 {
            let g = PartialQuasigroup::from_layers(q, 0, beta)?;
            let brute = count_extensions(&g)?.len();
            assert_eq!(brute, extension_count_by_codes(&g)?);
            *histogram.entry(brute).or_insert(0) += 1;
        }
    }
    println!("extensions of two fixed layers over the n=3 census:");
    for (count, times) in &histogram {
        println!("  {count} completions: {times} partial tables");
    }

    let q = tables
        .iter()
        .find(|q| {
            is_semilinear(q).is_none()
                && (0..4).any(|a| is_semilinear(&q.layer(2, a).unwrap()).is_some())
        })
        .expect("a non-semilinear table with a semilinear layer");
    let alpha = (0..4)
        .find(|&a| is_semilinear(&q.layer(2, a).unwrap()).is_some())
        .unwrap();
    let w = swap_extensions(q, alpha)?;
    println!(
        "\nnon-semilinear q with semilinear layer {alpha}:\n{}",
        q.to_text()
    );
    println!(
        "layers {alpha} and {} also extend to\n{}and\n{}",
        w.beta,
        w.f.to_text(),
        w.f_prime.to_text()
    );
    Ok(())
}
