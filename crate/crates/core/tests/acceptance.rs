//! Acceptance checks, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`; set QUASI4_LONG_RUN=1 to include the
//! full n = 5 search (QUASI4_CHECKPOINT names its progress file).

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use common::{all_squares, census, sigma3_corpus};
use num_bigint::BigUint;
use quasi4::census::{
    bound_r_star, classify_census, count_reduced, count_reduced_by_first_layer,
    count_reduced_checkpointed, formula_k_star, verify_count_sandwich, PUBLISHED_T3_STAR,
    PUBLISHED_V_STAR,
};
use quasi4::dcode::{
    brute_force_subsets, double_code_core, extend_double_code, find_linear_antilayer,
    for_each_completion, is_double_mds_code, is_linear_double_code, is_mds_code, is_splittable,
    prime_components,
};
use quasi4::quasigroup::{is_decomposable_oracle, is_decomposable_structural, is_semilinear};
use quasi4::CellSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn census_exactness() -> Outcome {
    let budgets = [1.0, 1.0, 1.0, 60.0];
    let mut times = Vec::new();
    for n in 1..=4 {
        let start = Instant::now();
        let stats = count_reduced(n, 1, false).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        ensure(stats.count == PUBLISHED_V_STAR[n - 1], || {
            format!(
                "v*_{n} = {} expected {}",
                stats.count,
                PUBLISHED_V_STAR[n - 1]
            )
        })?;
        ensure(secs < budgets[n - 1], || format!("n={n} took {secs:.2}s"))?;
        times.push(format!("{secs:.3}s"));
    }
    Ok(format!(
        "v* = 1, 4, 64, 7132 single-threaded in {}",
        times.join(", ")
    ))
}

fn semilinear_counts() -> Outcome {
    let mut parts = Vec::new();
    for n in 2..=4 {
        let c = classify_census(n, 1).map_err(|e| e.to_string())?;
        let want = formula_k_star(n).map_err(|e| e.to_string())?;
        ensure(BigUint::from(c.k_star) == want, || {
            format!("k*_{n} = {} expected {want}", c.k_star)
        })?;
        if n == 3 {
            ensure(c.t_star == PUBLISHED_T3_STAR, || {
                format!("t*_3 = {}", c.t_star)
            })?;
        }
        parts.push(c.k_star.to_string());
    }
    Ok(format!("k* = {}; t*_3 = 18", parts.join(", ")))
}

fn linear_double_codes_in_sigma2() -> Outcome {
    let start = Instant::now();
    let count = brute_force_subsets(2, |s| is_linear_double_code(s).is_some()).len();
    let secs = start.elapsed().as_secs_f64();
    ensure(count == 18, || format!("found {count}"))?;
    ensure(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("18 of 65536 subsets in {secs:.3}s"))
}

fn subcodes_iff_splittable() -> Outcome {
    let mds2 = brute_force_subsets(2, is_mds_code);
    let codes2 = brute_force_subsets(2, is_double_mds_code);
    let graphs3: Vec<CellSet> = all_squares().iter().map(|q| q.graph_code()).collect();
    let check = |s: &CellSet, mds: &[CellSet]| -> Result<bool, String> {
        let inside = mds.iter().filter(|c| c.is_subset_of(s)).count();
        let gamma = prime_components(s).map_err(|e| e.to_string())?.len();
        let split = is_splittable(s).map_err(|e| e.to_string())?.is_some();
        let expected = if split { 1usize << gamma } else { 0 };
        ensure(inside == expected, || {
            format!(
                "{} holds {inside} MDS codes, expected {expected}",
                s.to_text()
            )
        })?;
        Ok(split)
    };
    for s in &codes2 {
        check(s, &mds2)?;
    }
    let mut unsplittable = 0;
    for s in sigma3_corpus() {
        unsplittable += usize::from(!check(s, &graphs3)?);
    }
    Ok(format!(
        "{} codes in Σ², {} in Σ³ ({unsplittable} unsplittable)",
        codes2.len(),
        sigma3_corpus().len()
    ))
}

fn double_codes_determine_their_extension() -> Outcome {
    let corpus = sigma3_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut shared = 0;
    for _ in 0..1000 {
        let s1 = &corpus[rng.gen_range(0..corpus.len())];
        let comps = prime_components(s1).map_err(|e| e.to_string())?;
        let mut s0 = CellSet::empty(3).unwrap();
        while s0.is_empty() {
            for c in &comps {
                if rng.gen_bool(0.5) {
                    s0 = s0.union(c).unwrap();
                }
            }
        }
        // s2 is either unrelated, s1 itself, or a code sharing one component
        let s2 = match rng.gen_range(0..3) {
            0 => corpus[rng.gen_range(0..corpus.len())].clone(),
            1 => s1.clone(),
            _ => {
                let c = comps.choose(&mut rng).unwrap();
                corpus
                    .iter()
                    .filter(|t| c.is_subset_of(t))
                    .cloned()
                    .collect::<Vec<_>>()
                    .choose(&mut rng)
                    .unwrap()
                    .clone()
            }
        };
        let common = double_code_core(&s1.intersection(&s2).unwrap()).map_err(|e| e.to_string())?;
        if !common.is_empty() {
            shared += 1;
            ensure(*s1 == s2, || {
                "a nonempty double-code lies in two distinct codes".into()
            })?;
        }
        let mut completions = 0;
        for_each_completion(&s0, |_| {
            completions += 1;
            if completions > 1 {
                std::ops::ControlFlow::Break(())
            } else {
                std::ops::ControlFlow::Continue(())
            }
        })
        .map_err(|e| e.to_string())?;
        ensure(completions == 1, || {
            format!("seed has {completions} completions")
        })?;
        let ext = extend_double_code(&s0).map_err(|e| e.to_string())?;
        ensure(ext.as_ref() == Some(s1), || {
            "extension differs from the source code".into()
        })?;
    }
    Ok(format!(
        "1000 configurations, {shared} with a shared double-code"
    ))
}

fn linear_layers_have_complements() -> Outcome {
    let mut with_linear = 0;
    for s in sigma3_corpus() {
        if is_splittable(s).map_err(|e| e.to_string())?.is_none() {
            continue;
        }
        let mut counted = false;
        for axis in 0..3 {
            for a in 0..4u8 {
                let layer = s.layer(axis, a).unwrap();
                if is_linear_double_code(&layer).is_none() {
                    continue;
                }
                if !counted {
                    with_linear += 1;
                    counted = true;
                }
                let b = find_linear_antilayer(s, axis, a).map_err(|e| e.to_string())?;
                ensure(s.layer(axis, b).unwrap() == layer.complement(), || {
                    "anti-layer mismatch".into()
                })?;
                let comp = s.complement();
                ensure(
                    is_splittable(&comp).map_err(|e| e.to_string())?.is_some(),
                    || format!("complement of {} is unsplittable", s.to_text()),
                )?;
            }
        }
    }
    Ok(format!(
        "{with_linear} splittable codes with a linear layer, no counterexample"
    ))
}

fn decomposability_agreement() -> Outcome {
    let agree = |f: &quasi4::Quasigroup| -> Result<bool, String> {
        let a = is_decomposable_oracle(f)
            .map_err(|e| e.to_string())?
            .is_some();
        let b = is_decomposable_structural(f)
            .map_err(|e| e.to_string())?
            .is_some();
        ensure(a == b, || format!("routes disagree on\n{}", f.to_text()))?;
        Ok(a)
    };
    let c3 = census(3);
    let mut r3 = 0u64;
    for f in &c3.tables {
        r3 += u64::from(agree(f)?);
    }
    let c4 = census(4);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for f in c4.tables.choose_multiple(&mut rng, 1000) {
        agree(f)?;
    }
    let r4 = c4.flags.iter().filter(|f| f.decomposable).count() as u64;
    let v: Vec<u64> = PUBLISHED_V_STAR.to_vec();
    let b3 = bound_r_star(3, &v).map_err(|e| e.to_string())?;
    let b4 = bound_r_star(4, &v).map_err(|e| e.to_string())?;
    ensure(
        b3 == BigUint::from(48u32) && b4 == BigUint::from(2560u32),
        || format!("bounds {b3}, {b4}"),
    )?;
    ensure(BigUint::from(r3) <= b3 && BigUint::from(r4) <= b4, || {
        format!("r*_3={r3}, r*_4={r4}")
    })?;
    Ok(format!(
        "64 + 1000 tables agree; r*_3 = {r3} <= 48, r*_4 = {r4} <= 2560"
    ))
}

fn semilinear_layer_forces_structure() -> Outcome {
    let mut with_layer = 0;
    for n in [3, 4] {
        let c = census(n);
        for (q, fl) in c.tables.iter().zip(&c.flags) {
            let has_layer = (0..4).any(|a| is_semilinear(&q.layer(n - 1, a).unwrap()).is_some());
            if has_layer {
                with_layer += 1;
                ensure(fl.semilinear || fl.decomposable, || {
                    format!("counterexample\n{}", q.to_text())
                })?;
            }
        }
    }
    Ok(format!(
        "{with_layer} tables with a semilinear layer, no counterexample"
    ))
}

fn count_sandwich() -> Outcome {
    let t5 = verify_count_sandwich(5, PUBLISHED_V_STAR[4]).map_err(|e| e.to_string())?;
    ensure(t5.holds() == Some(true), || t5.to_string())?;
    let t4 = verify_count_sandwich(4, PUBLISHED_V_STAR[3]).map_err(|e| e.to_string())?;
    ensure(t4.lower_holds && t4.holds() == Some(true), || {
        t4.to_string()
    })?;
    Ok(format!(
        "{} <= {} <= {}; n=4 lower {} <= {}",
        t5.lower, t5.v, t5.upper, t4.lower, t4.v
    ))
}

fn census_of_five_by_first_layer() -> Outcome {
    let start = Instant::now();
    let c = count_reduced_by_first_layer(5, 1).map_err(|e| e.to_string())?;
    ensure(c.count == PUBLISHED_V_STAR[4], || {
        format!("v*_5 = {}", c.count)
    })?;
    Ok(format!(
        "v*_5 = {} from {} first-layer classes in {:.1}s",
        c.count,
        c.classes,
        start.elapsed().as_secs_f64()
    ))
}

/// The full search; None means skipped.
fn census_of_five() -> Option<Outcome> {
    if std::env::var("QUASI4_LONG_RUN").as_deref() != Ok("1") {
        return None;
    }
    let jobs = std::thread::available_parallelism().map_or(1, |p| p.get());
    let path = std::env::var_os("QUASI4_CHECKPOINT")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("quasi4-n5-checkpoint.json"));
    let start = Instant::now();
    let outcome = count_reduced_checkpointed(5, jobs, true, &path, |done, total| {
        eprintln!("n=5: {done}/{total} prefixes");
    })
    .map_err(|e| e.to_string())
    .and_then(|stats| {
        ensure(stats.count == PUBLISHED_V_STAR[4], || {
            format!("v*_5 = {}", stats.count)
        })?;
        Ok(format!(
            "v*_5 = {} after {}s in this process (earlier checkpointed work is not timed)",
            stats.count,
            start.elapsed().as_secs()
        ))
    });
    Some(outcome)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("census exactness n=1..4", census_exactness),
        ("semilinear counts and t*_3", semilinear_counts),
        ("linear double-codes in Σ²", linear_double_codes_in_sigma2),
        ("MDS subcodes iff splittable", subcodes_iff_splittable),
        (
            "double-codes determine their extension",
            double_codes_determine_their_extension,
        ),
        (
            "linear layers have complementary layers",
            linear_layers_have_complements,
        ),
        ("decomposability routes agree", decomposability_agreement),
        (
            "semilinear layer forces semilinear or decomposable",
            semilinear_layer_forces_structure,
        ),
        ("count sandwich at n=5", count_sandwich),
        (
            "census exactness n=5 by first-layer classes",
            census_of_five_by_first_layer,
        ),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    match census_of_five() {
        None => println!("SKIP 10 census exactness n=5 by full search: set QUASI4_LONG_RUN=1"),
        Some(Ok(detail)) => println!("PASS 10 census exactness n=5 by full search: {detail}"),
        Some(Err(why)) => {
            failed += 1;
            println!("FAIL 10 census exactness n=5 by full search: {why}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
