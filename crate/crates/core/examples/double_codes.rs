//! Double-codes in Σ² and Σ³: predicates, prime components, splittability,
//! linearity and XOR factorization.
//!
//! ```text
//! cargo run --example double_codes
//! ```

use std::ops::ControlFlow;

use quasi4::dcode::{
    brute_force_subsets, extend_double_code, for_each_double_mds_code, is_double_code,
    is_double_mds_code, is_linear_double_code, is_mds_code, is_splittable, prime_components,
    xor_factorize,
};
use quasi4::space::index_of;
use quasi4::CellSet;

fn set(n: usize, points: &[&[u8]]) -> CellSet {
    let mut s = CellSet::empty(n).unwrap();
    for p in points {
        s.insert(index_of(p));
    }
    s
}

fn main() -> quasi4::Result<()> {
    println!(
        "Σ²: {} MDS codes",
        brute_force_subsets(2, is_mds_code).len()
    );
    println!(
        "Σ²: {} double-MDS-codes",
        brute_force_subsets(2, is_double_mds_code).len()
    );
    println!(
        "Σ²: {} linear double-codes",
        brute_force_subsets(2, |s| is_linear_double_code(s).is_some()).len()
    );

    // a 2x2 block is a double-code but not a double-MDS-code
    let block = set(2, &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
    println!(
        "\nblock {{0,1}}x{{0,1}}: double_code={} double_mds={}",
        is_double_code(&block),
        is_double_mds_code(&block)
    );
    let full = extend_double_code(&block)?.expect("a block extends");
    println!("its unique extension:\n{}", full.to_text());
    let gamma = prime_components(&full)?.len();
    println!(
        "gamma={gamma} splittable={} linear={}",
        is_splittable(&full)?.is_some(),
        is_linear_double_code(&full).map_or("no".into(), |f| f.to_string())
    );

    let mut total = 0usize;
    let mut unsplittable = 0usize;
    let mut by_k = [0usize; 4];
    for_each_double_mds_code(3, |s| {
        total += 1;
        unsplittable += usize::from(is_splittable(s).unwrap().is_none());
        by_k[xor_factorize(s).unwrap().k()] += 1;
        ControlFlow::Continue(())
    })?;
    println!("\nΣ³: {total} double-MDS-codes, {unsplittable} unsplittable");
    for (k, count) in by_k.iter().enumerate().skip(1) {
        println!("  {count} with {k} XOR factor(s)");
    }
    Ok(())
}
