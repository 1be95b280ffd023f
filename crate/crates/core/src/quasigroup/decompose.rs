use std::collections::HashMap;

use itertools::Itertools;

use super::linear::PAIRS;
use super::Quasigroup;
use crate::dcode::xor_factorize;
use crate::error::{Error, Result};
use crate::space::{digit, volume, with_digit};

/// f(x̄) = outer(inner(x̄_A), x̄_{[n]∖A}).
///
/// `inner` takes the coordinates of A in ascending order; `outer` takes the
/// inner value first, then the remaining coordinates in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub inner_coords: Vec<usize>,
    pub inner: Quasigroup,
    pub outer: Quasigroup,
}

impl Decomposition {
    pub fn arity(&self) -> usize {
        self.inner.arity() + self.outer.arity() - 1
    }

    pub fn outer_coords(&self) -> Vec<usize> {
        (0..self.arity())
            .filter(|c| !self.inner_coords.contains(c))
            .collect()
    }

    pub fn recompose(&self) -> Quasigroup {
        let n = self.arity();
        let rest = self.outer_coords();
        let table = (0..volume(n))
            .map(|i| {
                let u = self.inner.at(gather(i, n, &self.inner_coords));
                let z = gather(i, n, &rest);
                self.outer.at(((u as usize) << (2 * rest.len())) | z)
            })
            .collect();
        Quasigroup::from_raw(n, table)
    }
}

/// Index in Σ^{|coords|} of the projection of `index` onto `coords`.
fn gather(index: usize, n: usize, coords: &[usize]) -> usize {
    coords
        .iter()
        .fold(0, |acc, &c| (acc << 2) | digit(index, n, c) as usize)
}

/// Index in Σⁿ with `coords` taken from `sub` and every other coordinate 0.
fn scatter(sub: usize, n: usize, coords: &[usize]) -> usize {
    let m = coords.len();
    coords.iter().enumerate().fold(0, |acc, (pos, &c)| {
        with_digit(acc, n, c, digit(sub, m, pos))
    })
}

fn require_arity(f: &Quasigroup) -> Result<()> {
    if f.arity() < 3 {
        return Err(Error::DimensionTooSmall {
            n: f.arity(),
            min: 3,
        });
    }
    Ok(())
}

/// Candidate inner coordinate sets: by size, then lexicographically.
fn candidate_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (2..n).flat_map(move |m| (0..n).combinations(m))
}

/// Superposition test through the identity
/// f(x, ȳ, z̄) ≡ h₀(δ⁻¹(g₀(x, ȳ)), z̄) with g₀ = f(·,·,0̄), h₀ = f(·,0̄,·),
/// δ = f(·,0̄,0̄), x the smallest coordinate of A. Tried for every A in
/// canonical order; the first success is returned.
pub fn is_decomposable_oracle(f: &Quasigroup) -> Result<Option<Decomposition>> {
    require_arity(f)?;
    let n = f.arity();
    for a_set in candidate_subsets(n) {
        let rest: Vec<usize> = (0..n).filter(|c| !a_set.contains(c)).collect();
        let x = a_set[0];
        let m = a_set.len();
        let delta_inv = {
            let mut inv = [0u8; 4];
            for v in 0..4u8 {
                inv[f.at(with_digit(0, n, x, v)) as usize] = v;
            }
            inv
        };
        let g0 = |i: usize| f.at(scatter(gather(i, n, &a_set), n, &a_set));
        let h0 =
            |xv: u8, i: usize| f.at(with_digit(scatter(gather(i, n, &rest), n, &rest), n, x, xv));
        let holds = (0..volume(n)).all(|i| f.at(i) == h0(delta_inv[g0(i) as usize], i));
        if !holds {
            continue;
        }
        let inner_table = (0..volume(m))
            .map(|s| f.at(scatter(s, n, &a_set)))
            .collect();
        let k = rest.len();
        let outer_table = (0..volume(k + 1))
            .map(|s| {
                let u = (s >> (2 * k)) as u8;
                let z = s & ((1 << (2 * k)) - 1);
                f.at(with_digit(
                    scatter(z, n, &rest),
                    n,
                    x,
                    delta_inv[u as usize],
                ))
            })
            .collect();
        let dec = Decomposition {
            inner_coords: a_set,
            inner: Quasigroup::new(m, inner_table)?,
            outer: Quasigroup::new(k + 1, outer_table)?,
        };
        if dec.recompose() != *f {
            return Err(Error::defect(
                "superposition identity held but recomposition differs",
            ));
        }
        return Ok(Some(dec));
    }
    Ok(None)
}

/// Builds inner/outer for A from the decomposition chart of f: rows are
/// indexed by x̄_A, columns by the remaining coordinates. Returns `None`
/// unless the chart has exactly four distinct rows.
fn chart_decomposition(f: &Quasigroup, a_set: &[usize]) -> Option<Decomposition> {
    let n = f.arity();
    let rest: Vec<usize> = (0..n).filter(|c| !a_set.contains(c)).collect();
    let (m, k) = (a_set.len(), rest.len());
    let mut rows: HashMap<Vec<u8>, usize> = HashMap::new();
    for s in 0..volume(m) {
        let base = scatter(s, n, a_set);
        let row: Vec<u8> = (0..volume(k))
            .map(|z| f.at(base | scatter(z, n, &rest)))
            .collect();
        let next = rows.len();
        rows.entry(row).or_insert(next);
        if rows.len() > 4 {
            return None;
        }
    }
    // the column at z̄ = 0̄ tells the four rows apart
    let mut outer_table = vec![0u8; volume(k + 1)];
    for row in rows.keys() {
        let u = row[0] as usize;
        outer_table[u << (2 * k)..(u + 1) << (2 * k)].copy_from_slice(row);
    }
    let inner_table = (0..volume(m)).map(|s| f.at(scatter(s, n, a_set))).collect();
    let dec = Decomposition {
        inner_coords: a_set.to_vec(),
        inner: Quasigroup::new(m, inner_table).ok()?,
        outer: Quasigroup::new(k + 1, outer_table).ok()?,
    };
    (dec.recompose() == *f).then_some(dec)
}

/// Decomposability through the prime factorization of pair sets.
///
/// For each pair {c,d}, S_{c,d}(f) is XOR-factorized over coordinate groups;
/// a group with 2..n−1 coordinates is an inner block of a superposition,
/// which is extracted and validated. When some pair set is linear (every
/// group a singleton) the factorization carries no block information, and
/// the decomposition charts of all candidate blocks are inspected instead.
pub fn is_decomposable_structural(f: &Quasigroup) -> Result<Option<Decomposition>> {
    require_arity(f)?;
    let n = f.arity();
    let mut has_linear_pair = false;
    for &(c, d) in &PAIRS {
        let factors = xor_factorize(&f.pair_set(c, d)?)?;
        if factors.k() == n {
            has_linear_pair = true;
            continue;
        }
        if let Some(group) = factors.groups.iter().find(|g| g.len() >= 2 && g.len() < n) {
            return match chart_decomposition(f, group) {
                Some(dec) => Ok(Some(dec)),
                None => Err(Error::defect(format!(
                    "pair set ({c},{d}) factorizes over {group:?} but f does not decompose there"
                ))),
            };
        }
    }
    if has_linear_pair {
        for a_set in candidate_subsets(n) {
            if let Some(dec) = chart_decomposition(f, &a_set) {
                return Ok(Some(dec));
            }
        }
    }
    Ok(None)
}
