//! Exact big-integer bounds on the number of n-quasigroups of order 4.
//!
//! ```text
//! cargo run --example count_bounds
//! ```

use quasi4::census::{
    formula_k, formula_k_star, published_v_star, verify_count_sandwich, verify_inequalities,
};

fn main() -> quasi4::Result<()> {
    for n in 1..=5 {
        let v = published_v_star(n)?;
        println!("{}\n", verify_count_sandwich(n, v)?);
    }
    println!("semilinear counts");
    for n in 1..=8 {
        println!("  n={n}: k*={} k={}", formula_k_star(n)?, formula_k(n)?);
    }
    println!("\ninequalities at n=4");
    for check in verify_inequalities(4, 1)? {
        println!("  {check}");
    }
    Ok(())
}
