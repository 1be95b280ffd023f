use itertools::Itertools;

use super::Quasigroup;
use crate::dcode::is_linear_double_code;
use crate::space::{digit, volume};

/// The six unordered symbol pairs in lexicographic order.
pub(crate) const PAIRS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// All pairs {a,b} with S_{a,b}(f) a linear double-code.
pub fn linear_pairs(f: &Quasigroup) -> Vec<(u8, u8)> {
    PAIRS
        .iter()
        .copied()
        .filter(|&(a, b)| {
            is_linear_double_code(&f.pair_set(a, b).expect("distinct symbols")).is_some()
        })
        .collect()
}

/// The lexicographically smallest pair whose pair set is linear.
pub fn is_semilinear(f: &Quasigroup) -> Option<(u8, u8)> {
    PAIRS.iter().copied().find(|&(a, b)| {
        is_linear_double_code(&f.pair_set(a, b).expect("distinct symbols")).is_some()
    })
}

pub fn is_linear(f: &Quasigroup) -> bool {
    linear_pairs(f).len() == PAIRS.len()
}

/// Linearity through the reduced form: f is linear iff its reduced form is
/// x₁*…*xₙ over Z₂×Z₂.
pub fn is_linear_by_reduction(f: &Quasigroup) -> bool {
    let (_, g) = f.reduce();
    (0..volume(f.arity()))
        .all(|i| g.at(i) == (0..f.arity()).fold(0, |acc, a| acc ^ digit(i, f.arity(), a)))
}

/// Semilinearity through the parity relation
/// ⨁ᵢ₌₀ⁿ χ_{{aᵢ,bᵢ}}(xᵢ) = 0 on all points with x₀ = f(x₁,…,xₙ),
/// searching every choice of the input pairs. Exponential in n; meant as
/// an independent cross-check for small arities.
pub fn semilinear_pair_by_relation(f: &Quasigroup) -> Option<(u8, u8)> {
    let n = f.arity();
    // each 2-subset of Σ as a 4-bit membership mask
    let subsets: Vec<u8> = PAIRS.iter().map(|&(a, b)| (1 << a) | (1 << b)).collect();
    PAIRS.iter().copied().find(|&(a, b)| {
        let out_mask = (1u8 << a) | (1 << b);
        (0..n)
            .map(|_| subsets.iter().copied())
            .multi_cartesian_product()
            .any(|masks| {
                (0..volume(n)).all(|i| {
                    let parity = (0..n).fold((out_mask >> f.at(i)) & 1, |acc, c| {
                        acc ^ ((masks[c] >> digit(i, n, c)) & 1)
                    });
                    parity == 0
                })
            })
    })
}
