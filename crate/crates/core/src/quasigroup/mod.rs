//! Value tables of n-quasigroups of order 4.

mod decompose;
mod equivalence;
mod linear;
mod partial;

use std::fmt;

pub use decompose::{is_decomposable_oracle, is_decomposable_structural, Decomposition};
pub use equivalence::{are_equivalent_quasigroups, find_equivalence, QEquivalence};
pub use linear::{
    is_linear, is_linear_by_reduction, is_semilinear, linear_pairs, semilinear_pair_by_relation,
};
pub use partial::{
    count_extensions, extension_count_by_codes, swap_extensions, PartialQuasigroup, SwapExtensions,
};

use crate::error::{Error, Result};
use crate::space::{
    check_axis, check_symbol, digit, index_of, split_header, stride, volume, with_digit, CellSet,
    Perm4, MAX_DIM,
};

/// Largest arity whose graph code still fits a [`CellSet`].
pub const MAX_ARITY: usize = MAX_DIM - 1;

/// An n-quasigroup f: Σⁿ → Σ; entry `index(x̄)` of the table is f(x̄).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quasigroup {
    n: usize,
    table: Vec<u8>,
}

impl fmt::Debug for Quasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quasigroup(n={}, {})", self.n, self.table_string())
    }
}

/// Whether every axis line of `table` carries each symbol once.
pub fn is_quasigroup(n: usize, table: &[u8]) -> Result<bool> {
    if table.len() != volume(n) {
        return Err(Error::DimensionMismatch {
            expected: volume(n),
            found: table.len(),
        });
    }
    for &s in table {
        check_symbol(s)?;
    }
    Ok(latin_along_all_axes(n, table))
}

fn latin_along_all_axes(n: usize, table: &[u8]) -> bool {
    (0..n).all(|axis| {
        let st = stride(n, axis);
        (0..volume(n))
            .filter(|&i| digit(i, n, axis) == 0)
            .all(|b| (0..4).fold(0u8, |m, a| m | 1 << table[b + a * st]) == 0xF)
    })
}

impl Quasigroup {
    pub fn new(n: usize, table: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionTooSmall { n, min: 1 });
        }
        if n > MAX_ARITY {
            return Err(Error::DimensionTooLarge { n, max: MAX_ARITY });
        }
        if !is_quasigroup(n, &table)? {
            return Err(Error::precondition("table is not Latin along every axis"));
        }
        Ok(Quasigroup { n, table })
    }

    /// Caller guarantees a valid table.
    pub(crate) fn from_raw(n: usize, table: Vec<u8>) -> Self {
        debug_assert!(latin_along_all_axes(n, &table));
        Quasigroup { n, table }
    }

    pub fn from_fn(n: usize, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        if n > MAX_ARITY {
            return Err(Error::DimensionTooLarge { n, max: MAX_ARITY });
        }
        let table = (0..volume(n))
            .map(|i| f(&crate::space::coords_of(i, n)))
            .collect();
        Self::new(n, table)
    }

    /// The reduced linear n-quasigroup x₁*…*xₙ over Z₂×Z₂ (bitwise XOR).
    pub fn linear(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| x.iter().fold(0, |acc, &c| acc ^ c))
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    #[inline]
    pub fn at(&self, index: usize) -> u8 {
        self.table[index]
    }

    pub fn eval(&self, x: &[u8]) -> u8 {
        self.table[index_of(x)]
    }

    /// C(f) = {(x̄, f(x̄))} ⊂ Σⁿ⁺¹.
    pub fn graph_code(&self) -> CellSet {
        CellSet::from_indices(
            self.n + 1,
            self.table
                .iter()
                .enumerate()
                .map(|(i, &v)| (i << 2) | v as usize),
        )
        .expect("arity capped below MAX_DIM")
    }

    /// Inverse of [`graph_code`](Self::graph_code).
    pub fn from_mds_code(c: &CellSet) -> Result<Self> {
        if c.dim() < 2 {
            return Err(Error::DimensionTooSmall { n: c.dim(), min: 2 });
        }
        if !crate::dcode::is_mds_code(c) {
            return Err(Error::precondition("set is not an MDS code"));
        }
        let n = c.dim() - 1;
        let mut table = vec![0u8; volume(n)];
        for idx in c.iter() {
            table[idx >> 2] = (idx & 3) as u8;
        }
        Self::new(n, table)
    }

    /// C_a(f) = {x̄ : f(x̄) = a}.
    pub fn level_set(&self, a: u8) -> Result<CellSet> {
        check_symbol(a)?;
        CellSet::from_fn(self.n, |i| self.table[i] == a)
    }

    pub fn level_sets(&self) -> [CellSet; 4] {
        [0, 1, 2, 3].map(|a| self.level_set(a).expect("symbol in range"))
    }

    /// S_{a,b}(f) = C_a(f) ∪ C_b(f).
    pub fn pair_set(&self, a: u8, b: u8) -> Result<CellSet> {
        check_symbol(a)?;
        check_symbol(b)?;
        if a == b {
            return Err(Error::precondition("pair set needs two distinct symbols"));
        }
        CellSet::from_fn(self.n, |i| self.table[i] == a || self.table[i] == b)
    }

    /// f^⟨i⟩(x̄) = b ⇔ f(x̄⁽ⁱ⁾#b) = xᵢ.
    pub fn inversion(&self, axis: usize) -> Result<Self> {
        check_axis(axis, self.n)?;
        let mut table = vec![0u8; self.table.len()];
        for (idx, &v) in self.table.iter().enumerate() {
            // f(idx) = v, so at x̄ = idx with axis set to v the inverse is idx[axis]
            table[with_digit(idx, self.n, axis, v)] = digit(idx, self.n, axis);
        }
        Ok(Quasigroup::from_raw(self.n, table))
    }

    /// f(0̄⁽ⁱ⁾#a) = a for every axis i and symbol a.
    pub fn is_reduced(&self) -> bool {
        (0..self.n).all(|axis| (0..4u8).all(|a| self.table[with_digit(0, self.n, axis, a)] == a))
    }

    /// The unique decomposition f(x̄) = τ₀ g(τ₁x₁,…,τₙxₙ) with g reduced,
    /// τ₀ = (0, f(0̄)) and every τᵢ fixing 0.
    pub fn reduce(&self) -> (QEquivalence, Quasigroup) {
        let n = self.n;
        let tau0 = Perm4::transposition(0, self.table[0]);
        let tau0_inv = tau0.inverse();
        let mut taus = vec![tau0];
        for axis in 0..n {
            let images =
                [0u8, 1, 2, 3].map(|b| tau0_inv.apply(self.table[with_digit(0, n, axis, b)]));
            taus.push(Perm4::new(images).expect("axis line of a quasigroup is a permutation"));
        }
        let inv: Vec<Perm4> = taus[1..].iter().map(|t| t.inverse()).collect();
        let table = (0..volume(n))
            .map(|i| {
                let src = (0..n).fold(0, |acc, axis| {
                    (acc << 2) | inv[axis].apply(digit(i, n, axis)) as usize
                });
                tau0_inv.apply(self.table[src])
            })
            .collect();
        let eq = QEquivalence::new((0..n).collect(), taus).expect("valid by construction");
        (eq, Quasigroup::from_raw(n, table))
    }

    /// Fixes coordinate `axis` to `value`, giving an (n−1)-quasigroup.
    pub fn layer(&self, axis: usize, value: u8) -> Result<Self> {
        check_axis(axis, self.n)?;
        check_symbol(value)?;
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n, min: 2 });
        }
        let n = self.n;
        let low_bits = 2 * (n - 1 - axis);
        let low_mask = (1usize << low_bits) - 1;
        let table = (0..volume(n - 1))
            .map(|j| {
                self.table[((j >> low_bits) << (low_bits + 2))
                    | ((value as usize) << low_bits)
                    | (j & low_mask)]
            })
            .collect();
        Ok(Quasigroup::from_raw(n - 1, table))
    }

    /// g(x₁,…,x_{n−m}) = f(x₁,…,x_{n−m}, a₁,…,a_m).
    pub fn fix_last(&self, values: &[u8]) -> Result<Self> {
        let m = values.len();
        if m >= self.n {
            return Err(Error::precondition("at least one argument must stay free"));
        }
        let mut g = self.clone();
        for &v in values.iter().rev() {
            g = g.layer(g.n - 1, v)?;
        }
        Ok(g)
    }

    fn table_string(&self) -> String {
        self.table.iter().map(|&v| (b'0' + v) as char).collect()
    }

    /// `q4 n=<n>` header followed by 4ⁿ symbols in index order.
    pub fn to_text(&self) -> String {
        format!("q4 n={}\n{}\n", self.n, self.table_string())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (header, body) = split_header(text)?;
        let rest = header
            .strip_prefix("q4 ")
            .ok_or_else(|| Error::Parse(format!("unknown header {header:?}")))?;
        let n = crate::space::parse_dim(rest)?;
        if body.len() != volume(n) {
            return Err(Error::Parse(format!(
                "expected {} symbols, found {}",
                volume(n),
                body.len()
            )));
        }
        let table = body
            .chars()
            .map(|c| match c {
                '0'..='3' => Ok(c as u8 - b'0'),
                _ => Err(Error::Parse(format!("bad symbol {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(n, table).map_err(|e| match e {
            Error::Precondition(m) => Error::Parse(m),
            other => other,
        })
    }
}

/// Flags produced by the three classifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub reduced: bool,
    pub linear: bool,
    pub semilinear: Option<(u8, u8)>,
    /// Always `None` for arity below 3.
    pub decomposable: Option<Decomposition>,
}

impl Classification {
    pub fn of(f: &Quasigroup) -> Self {
        let decomposable = if f.arity() >= 3 {
            is_decomposable_oracle(f).expect("arity checked")
        } else {
            None
        };
        Classification {
            reduced: f.is_reduced(),
            linear: is_linear(f),
            semilinear: is_semilinear(f),
            decomposable,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "reduced={} linear={} semilinear=",
            self.reduced, self.linear
        )?;
        match self.semilinear {
            Some((a, b)) => write!(f, "({a},{b})")?,
            None => write!(f, "none")?,
        }
        write!(f, " decomposable=")?;
        match &self.decomposable {
            Some(d) => {
                let coords: Vec<String> =
                    d.inner_coords.iter().map(|c| (c + 1).to_string()).collect();
                write!(f, "{{{}}}", coords.join(","))
            }
            None => write!(f, "none"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcode::{is_double_mds_code, is_linear_double_code, is_mds_code, is_splittable};

    pub(crate) fn z2z2() -> Quasigroup {
        Quasigroup::linear(2).unwrap()
    }

    #[test]
    fn remark_table() {
        let q = z2z2();
        assert_eq!(q.table(), &[0, 1, 2, 3, 1, 0, 3, 2, 2, 3, 0, 1, 3, 2, 1, 0]);
        assert!(q.is_reduced());
    }

    #[test]
    fn quasigroup_predicate() {
        assert!(is_quasigroup(2, z2z2().table()).unwrap());
        assert!(!is_quasigroup(2, &[0; 16]).unwrap());
        assert!(is_quasigroup(2, &[0; 15]).is_err());
        assert!(is_quasigroup(1, &[0, 1, 2, 4]).is_err());
        let perms = Perm4::all();
        assert_eq!(
            perms
                .iter()
                .filter(|p| is_quasigroup(1, &p.images()).unwrap())
                .count(),
            24
        );
    }

    #[test]
    fn graph_code_of_identity_is_diagonal() {
        let id = Quasigroup::new(1, vec![0, 1, 2, 3]).unwrap();
        let c = id.graph_code();
        assert!(is_mds_code(&c));
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![0, 5, 10, 15]);
        assert_eq!(Quasigroup::from_mds_code(&c).unwrap(), id);
        assert!(is_mds_code(&z2z2().graph_code()));
    }

    #[test]
    fn level_and_pair_sets() {
        let q = z2z2();
        let levels = q.level_sets();
        assert_eq!(levels.iter().map(CellSet::len).sum::<usize>(), 16);
        assert!(levels.iter().all(is_mds_code));
        let s01 = q.pair_set(0, 1).unwrap();
        assert!(is_double_mds_code(&s01));
        assert!(is_linear_double_code(&s01).is_some());
        assert!(is_splittable(&s01).unwrap().is_some());
        assert!(q.pair_set(2, 2).is_err());
    }

    #[test]
    fn inversion_of_z2z2_is_itself() {
        let q = z2z2();
        assert_eq!(q.inversion(0).unwrap(), q);
        assert_eq!(q.inversion(1).unwrap(), q);
        assert!(q.inversion(2).is_err());
    }

    #[test]
    fn inversion_is_involution() {
        let f = Quasigroup::from_fn(3, |x| (x[0] + 3 * x[1] + x[2]) % 4).unwrap();
        for axis in 0..3 {
            let g = f.inversion(axis).unwrap();
            assert!(is_quasigroup(3, g.table()).unwrap());
            assert_eq!(g.inversion(axis).unwrap(), f);
        }
    }

    #[test]
    fn reduce_reproduces_input() {
        let f = Quasigroup::from_fn(2, |x| (3 * x[0] + x[1] + 2) % 4).unwrap();
        let (eq, g) = f.reduce();
        assert!(g.is_reduced());
        assert_eq!(eq.apply(&g).unwrap(), f);
        let (eq, g) = z2z2().reduce();
        assert!(eq.is_identity());
        assert_eq!(g, z2z2());
        let p = Quasigroup::new(1, vec![2, 0, 3, 1]).unwrap();
        assert_eq!(p.reduce().1, Quasigroup::new(1, vec![0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn layers_and_restrictions() {
        let f = Quasigroup::linear(3).unwrap();
        let l = f.layer(2, 1).unwrap();
        assert_eq!(l, Quasigroup::from_fn(2, |x| x[0] ^ x[1] ^ 1).unwrap());
        let g = f.fix_last(&[1, 2]).unwrap();
        assert_eq!(g, Quasigroup::from_fn(1, |x| x[0] ^ 3).unwrap());
        assert!(f.fix_last(&[0, 0, 0]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let q = z2z2();
        assert_eq!(q.to_text(), "q4 n=2\n0123103223013210\n");
        assert_eq!(Quasigroup::parse(&q.to_text()).unwrap(), q);
        assert!(matches!(
            Quasigroup::parse("q4 n=2\n0000000000000000"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Quasigroup::parse("q4 n=1\n0124"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Quasigroup::parse("cs n=1\n0123"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn classification_line() {
        let c = Classification::of(&z2z2());
        assert_eq!(
            c.to_string(),
            "reduced=true linear=true semilinear=(0,1) decomposable=none"
        );
        let c3 = Classification::of(&Quasigroup::linear(3).unwrap());
        assert_eq!(
            c3.to_string(),
            "reduced=true linear=true semilinear=(0,1) decomposable={1,2}"
        );
    }
}
