//! The ambient space Σⁿ with Σ = {0,1,2,3}.
//!
//! Vertices are addressed by a big-endian base-4 index: the first
//! coordinate is the most significant digit. Every table, bit vector and
//! serialized form in this crate uses that order.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Size of the alphabet Σ.
pub const ALPHABET: usize = 4;

/// Largest dimension a [`CellSet`] may have (4¹² bits = 2 MiB).
pub const MAX_DIM: usize = 12;

/// Number of vertices of Σⁿ.
#[inline]
pub const fn volume(n: usize) -> usize {
    1 << (2 * n)
}

/// Index distance between neighbours along `axis`.
#[inline]
pub const fn stride(n: usize, axis: usize) -> usize {
    1 << (2 * (n - 1 - axis))
}

#[inline]
pub fn digit(index: usize, n: usize, axis: usize) -> u8 {
    ((index >> (2 * (n - 1 - axis))) & 3) as u8
}

/// `index` with coordinate `axis` replaced by `value`.
#[inline]
pub fn with_digit(index: usize, n: usize, axis: usize, value: u8) -> usize {
    let shift = 2 * (n - 1 - axis);
    (index & !(3 << shift)) | ((value as usize) << shift)
}

pub fn index_of(coords: &[u8]) -> usize {
    coords
        .iter()
        .fold(0, |acc, &c| (acc << 2) | (c as usize & 3))
}

pub fn coords_of(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|axis| digit(index, n, axis)).collect()
}

pub(crate) fn check_axis(axis: usize, n: usize) -> Result<()> {
    if axis >= n {
        return Err(Error::AxisOutOfRange { axis, n });
    }
    Ok(())
}

pub(crate) fn check_symbol(s: u8) -> Result<()> {
    if s as usize >= ALPHABET {
        return Err(Error::SymbolOutOfRange(s));
    }
    Ok(())
}

/// A point of Σⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    coords: Vec<u8>,
}

impl Vertex {
    pub fn new(coords: Vec<u8>) -> Result<Self> {
        for &c in &coords {
            check_symbol(c)?;
        }
        Ok(Vertex { coords })
    }

    pub fn zero(n: usize) -> Self {
        Vertex { coords: vec![0; n] }
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Vertex {
            coords: coords_of(index, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn index(&self) -> usize {
        index_of(&self.coords)
    }

    /// The vertex with coordinate `axis` replaced by `value` (ȳ⁽ⁱ⁾#x).
    pub fn with(&self, axis: usize, value: u8) -> Result<Self> {
        check_axis(axis, self.dim())?;
        check_symbol(value)?;
        let mut coords = self.coords.clone();
        coords[axis] = value;
        Ok(Vertex { coords })
    }
}

/// A permutation of Σ, stored as its image table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm4([u8; 4]);

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self> {
        let mut seen = 0u8;
        for &x in &images {
            if x > 3 || seen & (1 << x) != 0 {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen |= 1 << x;
        }
        Ok(Perm4(images))
    }

    /// The transposition exchanging `a` and `b` (identity when equal).
    pub fn transposition(a: u8, b: u8) -> Self {
        let mut images = [0, 1, 2, 3];
        images.swap(a as usize, b as usize);
        Perm4(images)
    }

    #[inline]
    pub fn apply(self, x: u8) -> u8 {
        self.0[x as usize]
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Perm4(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(self, other: Perm4) -> Self {
        Perm4(other.0.map(|x| self.0[x as usize]))
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    /// Reduced permutations fix the symbol 0.
    pub fn is_reduced(self) -> bool {
        self.0[0] == 0
    }

    /// All 24 permutations of Σ in lexicographic order of image tables.
    pub fn all() -> Vec<Perm4> {
        (0..4u8)
            .permutations(4)
            .map(|p| Perm4([p[0], p[1], p[2], p[3]]))
            .collect()
    }

    /// The 6 permutations fixing 0.
    pub fn all_reduced() -> Vec<Perm4> {
        Self::all().into_iter().filter(|p| p.is_reduced()).collect()
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// A coordinatewise permutation θ̄ = (θ₁,…,θₙ) of Σⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isotopy {
    perms: Vec<Perm4>,
}

impl Isotopy {
    pub fn new(perms: Vec<Perm4>) -> Self {
        Isotopy { perms }
    }

    pub fn identity(n: usize) -> Self {
        Isotopy {
            perms: vec![Perm4::IDENTITY; n],
        }
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Perm4] {
        &self.perms
    }

    pub fn inverse(&self) -> Self {
        Isotopy {
            perms: self.perms.iter().map(|p| p.inverse()).collect(),
        }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Isotopy) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Isotopy {
            perms: self
                .perms
                .iter()
                .zip(&other.perms)
                .map(|(a, b)| a.after(*b))
                .collect(),
        })
    }

    /// Image of a vertex index of Σⁿ.
    pub fn map_index(&self, index: usize) -> usize {
        let n = self.perms.len();
        (0..n).fold(0, |acc, axis| {
            (acc << 2) | self.perms[axis].apply(digit(index, n, axis)) as usize
        })
    }
}

/// Checks that `tau` is a permutation of `0..n`.
pub(crate) fn check_coordinate_permutation(tau: &[usize], n: usize) -> Result<()> {
    if tau.len() != n {
        return Err(Error::NotAPermutation(format!("{tau:?} has length != {n}")));
    }
    let mut seen = vec![false; n];
    for &t in tau {
        if t >= n || seen[t] {
            return Err(Error::NotAPermutation(format!("{tau:?}")));
        }
        seen[t] = true;
    }
    Ok(())
}

/// A subset of Σⁿ stored as a bit vector of length 4ⁿ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSet {
    n: usize,
    words: Vec<u64>,
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellSet(n={}, {})", self.n, self.bit_string())
    }
}

impl CellSet {
    fn word_count(n: usize) -> usize {
        volume(n).div_ceil(64)
    }

    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_DIM });
        }
        Ok(CellSet {
            n,
            words: vec![0; Self::word_count(n)],
        })
    }

    pub fn full(n: usize) -> Result<Self> {
        Ok(Self::empty(n)?.complement())
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n)?;
        let vol = volume(n);
        for i in indices {
            if i >= vol {
                return Err(Error::precondition(format!("index {i} outside Σ^{n}")));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_vertices<'a>(
        n: usize,
        vertices: impl IntoIterator<Item = &'a [u8]>,
    ) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for v in vertices {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            for &c in v {
                check_symbol(c)?;
            }
            s.insert(index_of(v));
        }
        Ok(s)
    }

    pub fn from_fn(n: usize, mut member: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut s = Self::empty(n)?;
        for i in 0..volume(n) {
            if member(i) {
                s.insert(i);
            }
        }
        Ok(s)
    }

    /// Builds a set of dimension ≤ 2 from a 16-bit mask, bit `i` = index `i`.
    pub(crate) fn from_mask16(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 3);
        let mut s = CellSet { n, words: vec![0] };
        s.words[0] = mask & Self::last_word_mask(n);
        s
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        v.dim() == self.n && self.contains(v.index())
    }

    #[inline]
    pub fn insert(&mut self, index: usize) {
        self.words[index >> 6] |= 1 << (index & 63);
    }

    #[inline]
    pub fn remove(&mut self, index: usize) {
        self.words[index >> 6] &= !(1 << (index & 63));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.iter().map(move |i| Vertex::from_index(i, self.n))
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn last_word_mask(n: usize) -> u64 {
        let bits = volume(n) % 64;
        if bits == 0 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        }
    }

    pub fn complement(&self) -> Self {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            *last &= Self::last_word_mask(self.n);
        }
        CellSet { n: self.n, words }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(CellSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// The y-th layer in direction `axis`, re-indexed in Σⁿ⁻¹.
    pub fn layer(&self, axis: usize, y: u8) -> Result<Self> {
        check_axis(axis, self.n)?;
        check_symbol(y)?;
        let n = self.n;
        let low_bits = 2 * (n - 1 - axis);
        let low_mask = (1usize << low_bits) - 1;
        CellSet::from_fn(n - 1, |j| {
            let idx =
                ((j >> low_bits) << (low_bits + 2)) | ((y as usize) << low_bits) | (j & low_mask);
            self.contains(idx)
        })
    }

    /// θ̄S = {(θ₁x₁,…,θₙxₙ) : x̄ ∈ S}.
    pub fn apply_isotopy(&self, theta: &Isotopy) -> Result<Self> {
        if theta.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: theta.len(),
            });
        }
        CellSet::from_indices(self.n, self.iter().map(|i| theta.map_index(i)))
    }

    /// {x̄ : (x_{τ(1)},…,x_{τ(n)}) ∈ S}.
    pub fn permute_coordinates(&self, tau: &[usize]) -> Result<Self> {
        check_coordinate_permutation(tau, self.n)?;
        let n = self.n;
        CellSet::from_indices(
            n,
            self.iter().map(|i| {
                let mut x = vec![0u8; n];
                for (j, &t) in tau.iter().enumerate() {
                    x[t] = digit(i, n, j);
                }
                index_of(&x)
            }),
        )
    }

    /// Number of members on the axis line through `index` in direction `axis`.
    pub fn line_count(&self, index: usize, axis: usize) -> usize {
        (0..4u8)
            .filter(|&a| self.contains(with_digit(index, self.n, axis, a)))
            .count()
    }

    fn bit_string(&self) -> String {
        (0..volume(self.n))
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// `cs n=<n>` header followed by 4ⁿ characters `0`/`1` in index order.
    pub fn to_text(&self) -> String {
        format!("cs n={}\n{}\n", self.n, self.bit_string())
    }

    /// `csx n=<n>` header followed by 4ⁿ⁻¹ hex digits; each digit packs four
    /// consecutive bits, the lowest index in the most significant position.
    pub fn to_hex(&self) -> Result<String> {
        if self.n == 0 {
            return Err(Error::DimensionTooSmall { n: 0, min: 1 });
        }
        let digits: String = (0..volume(self.n) / 4)
            .map(|d| {
                let v = (0..4).fold(0u32, |acc, b| (acc << 1) | self.contains(4 * d + b) as u32);
                char::from_digit(v, 16).expect("nibble")
            })
            .collect();
        Ok(format!("csx n={}\n{}\n", self.n, digits))
    }

    /// Parses either the bit form or the hex form.
    pub fn parse(text: &str) -> Result<Self> {
        let (header, body) = split_header(text)?;
        if let Some(rest) = header.strip_prefix("csx ") {
            let n = parse_dim(rest)?;
            if n == 0 {
                return Err(Error::Parse("hex form needs n >= 1".into()));
            }
            let expected = volume(n) / 4;
            if body.len() != expected {
                return Err(Error::Parse(format!(
                    "expected {expected} hex digits, found {}",
                    body.len()
                )));
            }
            let mut s = CellSet::empty(n)?;
            for (d, ch) in body.chars().enumerate() {
                let v = ch
                    .to_digit(16)
                    .ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?}")))?;
                for b in 0..4 {
                    if v & (8 >> b) != 0 {
                        s.insert(4 * d + b);
                    }
                }
            }
            Ok(s)
        } else if let Some(rest) = header.strip_prefix("cs ") {
            let n = parse_dim(rest)?;
            let expected = volume(n);
            if body.len() != expected {
                return Err(Error::Parse(format!(
                    "expected {expected} cells, found {}",
                    body.len()
                )));
            }
            let mut s = CellSet::empty(n)?;
            for (i, ch) in body.chars().enumerate() {
                match ch {
                    '1' => s.insert(i),
                    '0' => {}
                    _ => return Err(Error::Parse(format!("bad cell character {ch:?}"))),
                }
            }
            Ok(s)
        } else {
            Err(Error::Parse(format!("unknown header {header:?}")))
        }
    }
}

/// Splits a text file into its header line and its whitespace-free body.
pub(crate) fn split_header(text: &str) -> Result<(&str, String)> {
    let mut lines = text.lines().skip_while(|l| l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .trim();
    let body: String = lines
        .flat_map(|l| l.chars())
        .filter(|c| !c.is_whitespace())
        .collect();
    Ok((header, body))
}

pub(crate) fn parse_dim(field: &str) -> Result<usize> {
    let value = field
        .trim()
        .strip_prefix("n=")
        .ok_or_else(|| Error::Parse(format!("expected n=<dim>, found {field:?}")))?;
    let n: usize = value
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension {value:?}")))?;
    if n > MAX_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_DIM });
    }
    Ok(n)
}

/// The k-edge through `x`: the four vertices differing from `x` only in `axis`.
pub fn edge(x: &Vertex, axis: usize) -> Result<CellSet> {
    let n = x.dim();
    check_axis(axis, n)?;
    let base = x.index();
    CellSet::from_indices(n, (0..4u8).map(|a| with_digit(base, n, axis, a)))
}

/// Largest dimension accepted by exhaustive equivalence searches.
pub const EQUIVALENCE_MAX_DIM: usize = 3;

/// Searches for a coordinate permutation τ and isotopy θ̄ with
/// `s1 = (θ̄ s2) permuted by τ`.
pub fn find_set_equivalence(s1: &CellSet, s2: &CellSet) -> Result<Option<(Vec<usize>, Isotopy)>> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim(),
            found: s2.dim(),
        });
    }
    let n = s1.dim();
    if n > EQUIVALENCE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: EQUIVALENCE_MAX_DIM,
        });
    }
    if s1.len() != s2.len() {
        return Ok(None);
    }
    let perms = Perm4::all();
    for tau in (0..n).permutations(n) {
        let moved = s2.permute_coordinates(&tau)?;
        // after moving coordinates, θ acts on the permuted axes
        for thetas in (0..n)
            .map(|_| perms.iter().copied())
            .multi_cartesian_product()
        {
            let theta = Isotopy::new(thetas);
            if moved.apply_isotopy(&theta)? == *s1 {
                // θ ∘ τ == τ ∘ θ' with θ'_{τ(j)} relabelled
                let mut inner = vec![Perm4::IDENTITY; n];
                for (j, &t) in tau.iter().enumerate() {
                    inner[j] = theta.perms()[t];
                }
                return Ok(Some((tau, Isotopy::new(inner))));
            }
        }
        if n == 0 && moved == *s1 {
            return Ok(Some((tau, Isotopy::identity(0))));
        }
    }
    Ok(None)
}

pub fn are_equivalent_sets(s1: &CellSet, s2: &CellSet) -> Result<bool> {
    Ok(find_set_equivalence(s1, s2)?.is_some())
}
