use super::{is_semilinear, Quasigroup};
use crate::dcode::{find_linear_antilayer, is_double_mds_code, is_splittable, prime_components};
use crate::error::{Error, Result};
use crate::space::{check_symbol, digit, stride, volume, with_digit, CellSet, Perm4};

/// A value table in which some cells are unset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuasigroup {
    n: usize,
    table: Vec<u8>,
}

impl PartialQuasigroup {
    pub const UNSET: u8 = 4;

    /// Set values must be pairwise distinct along every axis line.
    pub fn new(n: usize, table: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { n, min: 1 });
        }
        if n > super::MAX_ARITY {
            return Err(Error::DimensionTooLarge {
                n,
                max: super::MAX_ARITY,
            });
        }
        if table.len() != volume(n) {
            return Err(Error::DimensionMismatch {
                expected: volume(n),
                found: table.len(),
            });
        }
        for &v in &table {
            if v != Self::UNSET {
                check_symbol(v)?;
            }
        }
        for axis in 0..n {
            let st = stride(n, axis);
            for base in (0..volume(n)).filter(|&i| digit(i, n, axis) == 0) {
                let mut seen = 0u8;
                for a in 0..4 {
                    let v = table[base + a * st];
                    if v == Self::UNSET {
                        continue;
                    }
                    if seen & (1 << v) != 0 {
                        return Err(Error::precondition("a symbol repeats on an axis line"));
                    }
                    seen |= 1 << v;
                }
            }
        }
        Ok(PartialQuasigroup { n, table })
    }

    /// q restricted to Σⁿ⁻¹ × {α, β}.
    pub fn from_layers(q: &Quasigroup, alpha: u8, beta: u8) -> Result<Self> {
        check_symbol(alpha)?;
        check_symbol(beta)?;
        if alpha == beta {
            return Err(Error::precondition("the two layers must differ"));
        }
        let n = q.arity();
        let table = (0..volume(n))
            .map(|i| {
                let last = digit(i, n, n - 1);
                if last == alpha || last == beta {
                    q.at(i)
                } else {
                    Self::UNSET
                }
            })
            .collect();
        Ok(PartialQuasigroup { n, table })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn get(&self, index: usize) -> Option<u8> {
        let v = self.table[index];
        (v != Self::UNSET).then_some(v)
    }

    pub fn domain(&self) -> CellSet {
        CellSet::from_fn(self.n, |i| self.table[i] != Self::UNSET).expect("arity capped")
    }

    pub fn is_extended_by(&self, f: &Quasigroup) -> bool {
        f.arity() == self.n
            && self
                .table
                .iter()
                .zip(f.table())
                .all(|(&g, &v)| g == Self::UNSET || g == v)
    }

    /// The two layers (α, β) in the last direction when the domain is
    /// exactly Σⁿ⁻¹ × {α, β}.
    pub fn layer_pair(&self) -> Option<(u8, u8)> {
        let n = self.n;
        let full: Vec<u8> = (0..4u8)
            .filter(|&y| {
                (0..volume(n - 1)).all(|j| self.table[(j << 2) | y as usize] != Self::UNSET)
            })
            .collect();
        let empty = (0..4u8)
            .filter(|&y| {
                (0..volume(n - 1)).all(|j| self.table[(j << 2) | y as usize] == Self::UNSET)
            })
            .count();
        (full.len() == 2 && empty == 2).then(|| (full[0], full[1]))
    }

    fn require_two_layers(&self) -> Result<(u8, u8)> {
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n, min: 2 });
        }
        self.layer_pair().ok_or_else(|| {
            Error::precondition("domain is not two full layers in the last direction")
        })
    }

    /// Layer y in the last direction as an (n−1)-ary table.
    fn layer_table(&self, y: u8) -> Vec<u8> {
        (0..volume(self.n - 1))
            .map(|j| self.table[(j << 2) | y as usize])
            .collect()
    }
}

/// Every quasigroup extending a partial quasigroup defined on two layers,
/// found by backtracking over the unset cells in index order.
pub fn count_extensions(g: &PartialQuasigroup) -> Result<Vec<Quasigroup>> {
    g.require_two_layers()?;
    let n = g.n;
    let free: Vec<usize> = (0..volume(n))
        .filter(|&i| g.table[i] == PartialQuasigroup::UNSET)
        .collect();
    let mut table = g.table.clone();
    let mut found = Vec::new();
    fill(n, &free, 0, &mut table, &mut found);
    Ok(found)
}

fn fill(n: usize, free: &[usize], pos: usize, table: &mut Vec<u8>, found: &mut Vec<Quasigroup>) {
    let Some(&cell) = free.get(pos) else {
        found.push(Quasigroup::from_raw(n, table.clone()));
        return;
    };
    let mut used = 0u8;
    for axis in 0..n {
        let base = with_digit(cell, n, axis, 0);
        let st = stride(n, axis);
        for a in 0..4 {
            let v = table[base + a * st];
            if v != PartialQuasigroup::UNSET {
                used |= 1 << v;
            }
        }
    }
    for v in 0..4u8 {
        if used & (1 << v) == 0 {
            table[cell] = v;
            fill(n, free, pos + 1, table, found);
        }
    }
    table[cell] = PartialQuasigroup::UNSET;
}

/// The number of extensions through the double-MDS-code
/// S = Σⁿ ∖ (C(g_α) ∪ C(g_β)): every extension is fixed by the MDS code
/// C(f_γ) ⊂ S, and S contains 2^γ MDS codes when splittable, none otherwise.
pub fn extension_count_by_codes(g: &PartialQuasigroup) -> Result<usize> {
    let (alpha, beta) = g.require_two_layers()?;
    let n = g.n;
    let ga = g.layer_table(alpha);
    let gb = g.layer_table(beta);
    let s = CellSet::from_fn(n, |i| {
        let (j, v) = (i >> 2, (i & 3) as u8);
        ga[j] != v && gb[j] != v
    })?;
    if !is_double_mds_code(&s) {
        return Err(Error::defect(
            "complement of two layer codes is not a double-MDS-code",
        ));
    }
    if is_splittable(&s)?.is_none() {
        return Ok(0);
    }
    Ok(1usize << prime_components(&s)?.len())
}

/// Two semilinear extensions of q restricted to layers α and β, where β is
/// the layer whose pair set is the complement of the one at α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapExtensions {
    pub beta: u8,
    pub pair: (u8, u8),
    pub f: Quasigroup,
    pub f_prime: Quasigroup,
}

/// For q whose last-direction layer α is semilinear with pair {a,b}: finds β,
/// and builds f with layers (q_α, q_β, σq_α, σq_β) at (α, β, γ, δ) where
/// σ = (ab)(cd), and f′ with layers γ and δ swapped.
pub fn swap_extensions(q: &Quasigroup, alpha: u8) -> Result<SwapExtensions> {
    check_symbol(alpha)?;
    let n = q.arity();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let layer = q.layer(n - 1, alpha)?;
    let (a, b) =
        is_semilinear(&layer).ok_or_else(|| Error::precondition("layer is not semilinear"))?;
    let beta = find_linear_antilayer(&q.pair_set(a, b)?, n - 1, alpha)?;
    let rest: Vec<u8> = (0..4).filter(|&s| s != a && s != b).collect();
    let sigma = swap_pairs(a, b, rest[0], rest[1]);
    let others: Vec<u8> = (0..4).filter(|&y| y != alpha && y != beta).collect();
    let (gamma, delta) = (others[0], others[1]);
    let build = |gamma: u8, delta: u8| -> Result<Quasigroup> {
        let table = (0..volume(n))
            .map(|i| {
                let y = digit(i, n, n - 1);
                let at = |src: u8| q.at(with_digit(i, n, n - 1, src));
                if y == gamma {
                    sigma.apply(at(alpha))
                } else if y == delta {
                    sigma.apply(at(beta))
                } else {
                    q.at(i)
                }
            })
            .collect();
        Quasigroup::new(n, table)
            .map_err(|_| Error::defect("symbol swap did not give a quasigroup"))
    };
    let f = build(gamma, delta)?;
    let f_prime = build(delta, gamma)?;
    if is_semilinear(&f).is_none() || is_semilinear(&f_prime).is_none() {
        return Err(Error::defect("swap extension is not semilinear"));
    }
    Ok(SwapExtensions {
        beta,
        pair: (a, b),
        f,
        f_prime,
    })
}

fn swap_pairs(a: u8, b: u8, c: u8, d: u8) -> Perm4 {
    let mut images = [0u8; 4];
    images[a as usize] = b;
    images[b as usize] = a;
    images[c as usize] = d;
    images[d as usize] = c;
    Perm4::new(images).expect("two disjoint transpositions")
}
