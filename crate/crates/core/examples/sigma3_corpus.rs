//! The 51678 double-MDS-codes of Σ³ and the structure of their layers.
//!
//! ```text
//! cargo run --release --example sigma3_corpus
//! ```

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use quasi4::dcode::{
    for_each_double_mds_code, is_linear_double_code, is_splittable, prime_components,
};

fn main() -> quasi4::Result<()> {
    let mut gammas: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut linear = 0;
    let mut linear_layers = 0;
    for_each_double_mds_code(3, |s| {
        let gamma = prime_components(s).unwrap().len();
        let split = is_splittable(s).unwrap().is_some();
        *gammas.entry((gamma, split)).or_default() += 1;
        linear += usize::from(is_linear_double_code(s).is_some());
        if (0..3)
            .any(|axis| (0..4).any(|a| is_linear_double_code(&s.layer(axis, a).unwrap()).is_some()))
        {
            linear_layers += 1;
        }
        ControlFlow::Continue(())
    })?;
    println!("gamma  splittable  codes");
    for ((gamma, split), count) in &gammas {
        println!("{gamma:>5}  {split:>10}  {count:>5}");
    }
    println!("linear: {linear}");
    println!("with a linear layer: {linear_layers}");
    Ok(())
}
