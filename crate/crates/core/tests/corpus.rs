mod common;

use std::collections::HashMap;

use common::{all_squares, block, cycle, hexagon, sigma3_corpus, two_blocks};
use quasi4::dcode::{
    brute_force_subsets, double_code_core, enumerate_mds_splits, extend_double_code,
    find_linear_antilayer, is_double_code, is_double_mds_code, is_linear_double_code, is_mds_code,
    is_splittable, prime_components, xor_factorize,
};
use quasi4::space::are_equivalent_sets;
use quasi4::CellSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sigma2_brute_force_counts() {
    assert_eq!(brute_force_subsets(2, is_mds_code).len(), 24);
    assert_eq!(brute_force_subsets(2, is_double_mds_code).len(), 90);
    assert_eq!(
        brute_force_subsets(2, |s| is_linear_double_code(s).is_some()).len(),
        18
    );
}

#[test]
fn sigma2_codes_are_splittable_with_power_of_two_subcodes() {
    let mds = brute_force_subsets(2, is_mds_code);
    for s in brute_force_subsets(2, is_double_mds_code) {
        assert!(is_splittable(&s).unwrap().is_some());
        let gamma = prime_components(&s).unwrap().len();
        let inside = mds.iter().filter(|c| c.is_subset_of(&s)).count();
        assert_eq!(inside, 1 << gamma);
        assert_eq!(enumerate_mds_splits(&s).unwrap().len(), inside);
    }
}

#[test]
fn small_codes_in_sigma2() {
    assert!(is_double_code(&block()) && !is_double_mds_code(&block()));
    assert!(is_linear_double_code(&two_blocks()).is_some());
    assert_eq!(prime_components(&cycle()).unwrap().len(), 1);
    assert!(is_linear_double_code(&cycle()).is_none());
    assert!(is_double_code(&hexagon()));
    assert_eq!(extend_double_code(&hexagon()).unwrap(), None);
    assert_eq!(
        extend_double_code(&block()).unwrap().map(|s| s.len()),
        Some(8)
    );
}

#[test]
fn sigma2_unique_extension_and_anti_extension() {
    let codes = brute_force_subsets(2, is_double_mds_code);
    for s1 in &codes {
        for s2 in &codes {
            let common = double_code_core(&s1.intersection(s2).unwrap()).unwrap();
            if !common.is_empty() {
                assert_eq!(s1, s2);
            }
            let apart = double_code_core(&s1.difference(s2).unwrap()).unwrap();
            if !apart.is_empty() {
                assert_eq!(*s1, s2.complement());
            }
        }
    }
}

#[test]
fn sigma2_linear_iff_contains_a_square_block() {
    let square = block();
    for s in brute_force_subsets(2, is_double_mds_code) {
        let has_block = prime_components(&s)
            .unwrap()
            .iter()
            .any(|c| c.len() == 4 && are_equivalent_sets(c, &square).unwrap());
        assert_eq!(is_linear_double_code(&s).is_some(), has_block);
    }
}

#[test]
fn sigma3_corpus_size_and_structure() {
    let corpus = sigma3_corpus();
    assert_eq!(corpus.len(), 51678);
    let mut unsplittable = 0;
    for s in corpus {
        assert!(is_double_mds_code(s));
        let split = is_splittable(s).unwrap();
        unsplittable += usize::from(split.is_none());
        for axis in 0..3 {
            for y in 0..4 {
                let layer = s.layer(axis, y).unwrap();
                assert!(is_double_mds_code(&layer));
                if split.is_some() {
                    assert!(is_splittable(&layer).unwrap().is_some());
                }
            }
        }
        let f = xor_factorize(s).unwrap();
        assert_eq!(f.recompose().unwrap(), *s);
        assert_eq!(prime_components(s).unwrap().len(), 1 << (f.k() - 1));
        assert_eq!(
            prime_components(&s.complement()).unwrap().len(),
            1 << (f.k() - 1)
        );
        if let Some(form) = is_linear_double_code(s) {
            assert!(split.is_some());
            assert_eq!(f.k(), 3);
            assert_eq!(form.to_cellset().unwrap(), *s);
            assert!(is_linear_double_code(&s.complement()).is_some());
        }
    }
    assert!(unsplittable > 0);
}

#[test]
fn sigma3_subcode_count_matches_components() {
    let graphs: Vec<CellSet> = all_squares().iter().map(|q| q.graph_code()).collect();
    assert_eq!(graphs.len(), 576);
    for s in sigma3_corpus() {
        let inside = graphs.iter().filter(|c| c.is_subset_of(s)).count();
        let gamma = prime_components(s).unwrap().len();
        let expected = if is_splittable(s).unwrap().is_some() {
            1 << gamma
        } else {
            0
        };
        assert_eq!(inside, expected);
    }
}

#[test]
fn sigma3_three_layers_determine_the_fourth() {
    let corpus = sigma3_corpus();
    for axis in 0..3 {
        for skip in 0..4u8 {
            let mut seen: HashMap<Vec<CellSet>, &CellSet> = HashMap::new();
            for s in corpus {
                let key: Vec<CellSet> = (0..4u8)
                    .filter(|&y| y != skip)
                    .map(|y| s.layer(axis, y).unwrap())
                    .collect();
                if let Some(prev) = seen.insert(key, s) {
                    assert_eq!(prev, s);
                }
            }
        }
    }
}

#[test]
fn sigma3_linear_layers_have_anti_layers() {
    for s in sigma3_corpus() {
        if is_splittable(s).unwrap().is_none() {
            continue;
        }
        for axis in 0..3 {
            for a in 0..4u8 {
                if is_linear_double_code(&s.layer(axis, a).unwrap()).is_some() {
                    let b = find_linear_antilayer(s, axis, a).unwrap();
                    assert_eq!(
                        s.layer(axis, b).unwrap(),
                        s.layer(axis, a).unwrap().complement()
                    );
                }
            }
        }
    }
}

#[test]
fn sigma3_sampled_seeds_extend_uniquely() {
    let corpus = sigma3_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let s = &corpus[rng.gen_range(0..corpus.len())];
        let comps = prime_components(s).unwrap();
        let mut seed = CellSet::empty(3).unwrap();
        while seed.is_empty() {
            for c in &comps {
                if rng.gen_bool(0.5) {
                    seed = seed.union(c).unwrap();
                }
            }
        }
        assert_eq!(extend_double_code(&seed).unwrap().as_ref(), Some(s));
    }
}
