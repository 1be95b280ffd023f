//! Exhaustive census of reduced n-quasigroups with class counts and the
//! bounds checked against them. n = 5 is counted through equivalence
//! classes of the first layer, which takes under a minute.
//!
//! ```text
//! cargo run --release --example census -- [n] [jobs]
//! ```

use quasi4::census::{run_census, CensusOptions};

fn main() -> quasi4::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(4, |a| a.parse().expect("n"));
    let jobs: usize = args.next().map_or(1, |a| a.parse().expect("jobs"));
    let opts = CensusOptions {
        jobs,
        classify: n <= 4,
        long_run: n >= 5,
        checkpoint: None,
        by_first_layer: n >= 5,
    };
    let report = run_census(n, &opts)?;
    print!("{}", report.to_text());
    Ok(())
}
