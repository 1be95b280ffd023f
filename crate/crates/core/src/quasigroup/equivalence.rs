use itertools::Itertools;

use super::Quasigroup;
use crate::error::{Error, Result};
use crate::space::{check_coordinate_permutation, digit, volume, Perm4, EQUIVALENCE_MAX_DIM};

/// f(x₁,…,xₙ) ≡ τ₀ g(τ₁x_{σ(1)},…,τₙx_{σ(n)}).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QEquivalence {
    sigma: Vec<usize>,
    taus: Vec<Perm4>,
}

impl QEquivalence {
    pub fn new(sigma: Vec<usize>, taus: Vec<Perm4>) -> Result<Self> {
        let n = sigma.len();
        check_coordinate_permutation(&sigma, n)?;
        if taus.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: taus.len(),
            });
        }
        Ok(QEquivalence { sigma, taus })
    }

    pub fn identity(n: usize) -> Self {
        QEquivalence {
            sigma: (0..n).collect(),
            taus: vec![Perm4::IDENTITY; n + 1],
        }
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    /// τ₀ (output) followed by τ₁…τₙ (inputs).
    pub fn taus(&self) -> &[Perm4] {
        &self.taus
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &s)| i == s)
            && self.taus.iter().all(|t| t.is_identity())
    }

    /// The quasigroup f obtained from g.
    pub fn apply(&self, g: &Quasigroup) -> Result<Quasigroup> {
        let n = self.sigma.len();
        if g.arity() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.arity(),
            });
        }
        let table = (0..volume(n))
            .map(|i| {
                let src = (0..n).fold(0, |acc, j| {
                    (acc << 2) | self.taus[j + 1].apply(digit(i, n, self.sigma[j])) as usize
                });
                self.taus[0].apply(g.at(src))
            })
            .collect();
        Ok(Quasigroup::from_raw(n, table))
    }
}

/// Exhaustive search for an equivalence mapping `g` to `f` (n ≤ 3).
///
/// τ₀ is not enumerated: once σ and τ₁…τₙ are fixed, it is forced by the
/// values of f and has to be a consistent bijection.
pub fn find_equivalence(f: &Quasigroup, g: &Quasigroup) -> Result<Option<QEquivalence>> {
    let n = f.arity();
    if g.arity() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.arity(),
        });
    }
    if n > EQUIVALENCE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: EQUIVALENCE_MAX_DIM,
        });
    }
    let perms = Perm4::all();
    for sigma in (0..n).permutations(n) {
        for inputs in (0..n)
            .map(|_| perms.iter().copied())
            .multi_cartesian_product()
        {
            let mut out = [u8::MAX; 4];
            let mut ok = true;
            for i in 0..volume(n) {
                let src = (0..n).fold(0, |acc, j| {
                    (acc << 2) | inputs[j].apply(digit(i, n, sigma[j])) as usize
                });
                let (from, to) = (g.at(src) as usize, f.at(i));
                if out[from] == u8::MAX {
                    out[from] = to;
                } else if out[from] != to {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            if let Ok(tau0) = Perm4::new(out) {
                let mut taus = vec![tau0];
                taus.extend(inputs);
                return Ok(Some(QEquivalence::new(sigma, taus)?));
            }
        }
    }
    Ok(None)
}

pub fn are_equivalent_quasigroups(f: &Quasigroup, g: &Quasigroup) -> Result<bool> {
    Ok(find_equivalence(f, g)?.is_some())
}
