//! MDS codes, double-codes and double-MDS-codes in Σⁿ.
//!
//! A set meeting every axis line exactly once is an MDS code; meeting every
//! line through its own points exactly twice, a double-code; meeting every
//! line exactly twice, a double-MDS-code.

use std::collections::VecDeque;
use std::fmt;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::space::{check_axis, check_symbol, digit, stride, volume, with_digit, CellSet};

/// Indices of Σⁿ with coordinate `axis` equal to 0, one per line.
fn line_bases(n: usize, axis: usize) -> impl Iterator<Item = usize> {
    (0..volume(n)).filter(move |&i| digit(i, n, axis) == 0)
}

fn all_lines(s: &CellSet, ok: impl Fn(usize) -> bool) -> bool {
    let n = s.dim();
    (0..n).all(|axis| {
        let st = stride(n, axis);
        line_bases(n, axis).all(|b| ok((0..4).filter(|&a| s.contains(b + a * st)).count()))
    })
}

pub fn is_mds_code(s: &CellSet) -> bool {
    s.dim() > 0 && all_lines(s, |c| c == 1)
}

/// Every vertex of `s` sees exactly two members of `s` on each axis line.
/// The empty set qualifies vacuously.
pub fn is_double_code(s: &CellSet) -> bool {
    all_lines(s, |c| c == 0 || c == 2)
}

pub fn is_double_mds_code(s: &CellSet) -> bool {
    s.dim() > 0 && all_lines(s, |c| c == 2)
}

fn require_double_mds(s: &CellSet) -> Result<()> {
    if !is_double_mds_code(s) {
        return Err(Error::precondition("set is not a double-MDS-code"));
    }
    Ok(())
}

/// Γ(S): vertices are the members of S, edges join neighbours in Σⁿ.
#[derive(Clone, Debug)]
pub struct AdjacencyGraph {
    n: usize,
    vertices: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Member indices of Σⁿ, ascending; node `p` is `vertices()[p]`.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn node_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    /// BFS from each not-yet-visited node in ascending order. Returns the
    /// component label and the BFS 2-coloring (`None` on an odd cycle).
    fn traverse(&self) -> (Vec<usize>, Option<Vec<u8>>) {
        let mut comp = vec![usize::MAX; self.node_count()];
        let mut color = vec![0u8; self.node_count()];
        let mut bipartite = true;
        let mut next = 0;
        for start in 0..self.node_count() {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.neighbors[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        color[w] = color[u] ^ 1;
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        bipartite = false;
                    }
                }
            }
            next += 1;
        }
        (comp, bipartite.then_some(color))
    }

    /// Connected components as lists of nodes, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let (comp, _) = self.traverse();
        let count = comp.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut out = vec![Vec::new(); count];
        for (node, &c) in comp.iter().enumerate() {
            out[c].push(node);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Proper 2-coloring where the smallest vertex of each component gets 0.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        self.traverse().1
    }
}

pub fn adjacency_graph(s: &CellSet) -> AdjacencyGraph {
    let n = s.dim();
    let vertices: Vec<usize> = s.iter().collect();
    let neighbors = vertices
        .iter()
        .map(|&v| {
            let mut adj = Vec::new();
            for axis in 0..n {
                let own = digit(v, n, axis);
                for a in (0..4u8).filter(|&a| a != own) {
                    let w = with_digit(v, n, axis, a);
                    if s.contains(w) {
                        adj.push(vertices.binary_search(&w).expect("member"));
                    }
                }
            }
            adj.sort_unstable();
            adj
        })
        .collect();
    AdjacencyGraph {
        n,
        vertices,
        neighbors,
    }
}

fn nodes_to_set(g: &AdjacencyGraph, nodes: impl IntoIterator<Item = usize>) -> CellSet {
    CellSet::from_indices(g.n, nodes.into_iter().map(|p| g.vertices[p])).expect("same dimension")
}

/// Connected components of Γ(S), each as a set, ordered by smallest vertex.
pub fn prime_components(s: &CellSet) -> Result<Vec<CellSet>> {
    if s.is_empty() {
        return Err(Error::precondition(
            "prime components need a nonempty double-code",
        ));
    }
    if !is_double_code(s) {
        return Err(Error::precondition("set is not a double-code"));
    }
    let g = adjacency_graph(s);
    Ok(g.components()
        .into_iter()
        .map(|c| nodes_to_set(&g, c))
        .collect())
}

/// A double-MDS-code written as the disjoint union of two MDS codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub first: CellSet,
    pub second: CellSet,
}

/// Splittability via bipartiteness of Γ(S). The witness colors the smallest
/// vertex of every component 0; both parts are checked to be MDS codes.
pub fn is_splittable(s: &CellSet) -> Result<Option<Split>> {
    require_double_mds(s)?;
    let g = adjacency_graph(s);
    let Some(color) = g.two_coloring() else {
        return Ok(None);
    };
    let first = nodes_to_set(&g, (0..g.node_count()).filter(|&p| color[p] == 0));
    let second = nodes_to_set(&g, (0..g.node_count()).filter(|&p| color[p] == 1));
    if !is_mds_code(&first) || !is_mds_code(&second) {
        return Err(Error::defect(
            "bipartite double-MDS-code with a non-MDS color class",
        ));
    }
    Ok(Some(Split { first, second }))
}

/// Largest component count accepted by [`enumerate_mds_splits`].
pub const MAX_SPLIT_COMPONENTS: usize = 20;

/// All ordered splits of a splittable double-MDS-code: one per choice of
/// color class in every component of Γ(S), 2^γ in total.
pub fn enumerate_mds_splits(s: &CellSet) -> Result<Vec<Split>> {
    require_double_mds(s)?;
    let g = adjacency_graph(s);
    let color = g
        .two_coloring()
        .ok_or_else(|| Error::precondition("double-MDS-code is not splittable"))?;
    let components = g.components();
    let gamma = components.len();
    if gamma > MAX_SPLIT_COMPONENTS {
        return Err(Error::DimensionTooLarge {
            n: gamma,
            max: MAX_SPLIT_COMPONENTS,
        });
    }
    let mut splits = Vec::with_capacity(1 << gamma);
    for mask in 0u64..(1 << gamma) {
        let mut first = CellSet::empty(s.dim())?;
        for (ci, comp) in components.iter().enumerate() {
            let flip = ((mask >> ci) & 1) as u8;
            for &p in comp {
                if color[p] ^ flip == 0 {
                    first.insert(g.vertices[p]);
                }
            }
        }
        let second = s.difference(&first)?;
        if !is_mds_code(&first) || !is_mds_code(&second) {
            return Err(Error::defect(
                "component recoloring produced a non-MDS part",
            ));
        }
        splits.push(Split { first, second });
    }
    Ok(splits)
}

/// χ_S(x̄) = χ⁰ ⊕ ⨁ᵢ (χⁱ(xᵢ) ⊕ χ⁰), where χⁱ is read off the axis through 0̄.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub chi0: bool,
    pub chi: Vec<[bool; 4]>,
}

impl LinearForm {
    pub fn dim(&self) -> usize {
        self.chi.len()
    }

    pub fn eval(&self, index: usize) -> bool {
        let n = self.dim();
        (0..n).fold(self.chi0, |acc, i| {
            acc ^ self.chi[i][digit(index, n, i) as usize] ^ self.chi0
        })
    }

    pub fn to_cellset(&self) -> Result<CellSet> {
        CellSet::from_fn(self.dim(), |i| self.eval(i))
    }

    /// The 2-subsets {y : χⁱ(y) = 1}.
    pub fn supports(&self) -> Vec<[u8; 2]> {
        self.chi
            .iter()
            .map(|c| {
                let mut it = (0..4u8).filter(|&y| c[y as usize]);
                [it.next().unwrap_or(0), it.next().unwrap_or(0)]
            })
            .collect()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi0={}", self.chi0 as u8)?;
        for s in self.supports() {
            write!(f, " {{{},{}}}", s[0], s[1])?;
        }
        Ok(())
    }
}

/// Reconstructs the only possible linear form from the axes through 0̄ and
/// checks it against every vertex.
pub fn is_linear_double_code(s: &CellSet) -> Option<LinearForm> {
    let n = s.dim();
    if n == 0 || s.is_empty() {
        return None;
    }
    let chi0 = s.contains(0);
    let chi: Vec<[bool; 4]> = (0..n)
        .map(|i| [0u8, 1, 2, 3].map(|y| s.contains(with_digit(0, n, i, y))))
        .collect();
    if chi.iter().any(|c| c.iter().filter(|&&b| b).count() != 2) {
        return None;
    }
    let form = LinearForm { chi0, chi };
    (0..volume(n))
        .all(|i| form.eval(i) == s.contains(i))
        .then_some(form)
}

/// Constraint-propagation search for double-MDS-codes. Every axis line must
/// end with exactly two members and two non-members.
#[derive(Clone)]
struct Completion {
    n: usize,
    lines_per_axis: usize,
    state: Vec<i8>,
    ins: Vec<u8>,
    outs: Vec<u8>,
}

const UNKNOWN: i8 = -1;

impl Completion {
    fn new(n: usize) -> Self {
        let lines_per_axis = volume(n) / 4;
        Completion {
            n,
            lines_per_axis,
            state: vec![UNKNOWN; volume(n)],
            ins: vec![0; n * lines_per_axis],
            outs: vec![0; n * lines_per_axis],
        }
    }

    fn line_id(&self, cell: usize, axis: usize) -> usize {
        let st = stride(self.n, axis);
        axis * self.lines_per_axis + (cell / (4 * st)) * st + cell % st
    }

    /// Assigns and propagates; `false` on contradiction.
    fn assign(&mut self, cell: usize, value: bool) -> bool {
        let mut work = vec![(cell, value)];
        while let Some((c, v)) = work.pop() {
            let current = self.state[c];
            if current != UNKNOWN {
                if (current == 1) != v {
                    return false;
                }
                continue;
            }
            self.state[c] = v as i8;
            for axis in 0..self.n {
                let id = self.line_id(c, axis);
                let count = if v {
                    &mut self.ins[id]
                } else {
                    &mut self.outs[id]
                };
                *count += 1;
                if *count > 2 {
                    return false;
                }
                if *count == 2 {
                    for a in 0..4u8 {
                        let other = with_digit(c, self.n, axis, a);
                        if self.state[other] == UNKNOWN {
                            work.push((other, !v));
                        }
                    }
                }
            }
        }
        true
    }

    fn to_set(&self) -> CellSet {
        CellSet::from_fn(self.n, |i| self.state[i] == 1).expect("dimension checked")
    }

    fn search(
        &self,
        from: usize,
        visit: &mut dyn FnMut(&CellSet) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(cell) = (from..self.state.len()).find(|&i| self.state[i] == UNKNOWN) else {
            return visit(&self.to_set());
        };
        for value in [true, false] {
            let mut next = self.clone();
            if next.assign(cell, value) {
                next.search(cell + 1, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every double-MDS-code of Σⁿ containing `seed`, in search order.
pub fn for_each_completion(
    seed: &CellSet,
    mut visit: impl FnMut(&CellSet) -> ControlFlow<()>,
) -> Result<()> {
    let n = seed.dim();
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    let mut root = Completion::new(n);
    for cell in seed.iter() {
        if !root.assign(cell, true) {
            return Ok(());
        }
    }
    let _ = root.search(0, &mut visit);
    Ok(())
}

/// Visits every double-MDS-code of Σⁿ (51678 of them for n = 3).
pub fn for_each_double_mds_code(
    n: usize,
    visit: impl FnMut(&CellSet) -> ControlFlow<()>,
) -> Result<()> {
    for_each_completion(&CellSet::empty(n)?, visit)
}

/// The unique double-MDS-code containing a nonempty double-code, if any.
pub fn extend_double_code(seed: &CellSet) -> Result<Option<CellSet>> {
    if seed.is_empty() {
        return Err(Error::precondition(
            "extension needs a nonempty double-code",
        ));
    }
    if !is_double_code(seed) {
        return Err(Error::precondition("seed is not a double-code"));
    }
    let mut found = Vec::new();
    for_each_completion(seed, |c| {
        found.push(c.clone());
        if found.len() > 1 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        _ => Err(Error::defect(
            "a double-code extends to two distinct double-MDS-codes",
        )),
    }
}

/// Given a splittable double-MDS-code whose layer (axis, a) is linear,
/// returns b with layer (axis, b) equal to the complement of that layer.
pub fn find_linear_antilayer(s: &CellSet, axis: usize, a: u8) -> Result<u8> {
    check_axis(axis, s.dim())?;
    check_symbol(a)?;
    if s.dim() < 2 {
        return Err(Error::DimensionTooSmall { n: s.dim(), min: 2 });
    }
    if is_splittable(s)?.is_none() {
        return Err(Error::precondition("double-MDS-code is not splittable"));
    }
    let layer = s.layer(axis, a)?;
    if is_linear_double_code(&layer).is_none() {
        return Err(Error::precondition("layer is not a linear double-code"));
    }
    let target = layer.complement();
    let b = (0..4u8)
        .find(|&b| s.layer(axis, b).map(|l| l == target).unwrap_or(false))
        .ok_or_else(|| {
            Error::defect("splittable double-MDS-code with a linear layer but no anti-layer")
        })?;
    if is_splittable(&s.complement())?.is_none() {
        return Err(Error::defect(
            "complement of a code with a linear layer is unsplittable",
        ));
    }
    Ok(b)
}

/// χ_S(x̄) = constant ⊕ ⨁ⱼ χ_{Sⱼ}(x̃ⱼ) with prime components Sⱼ.
///
/// Groups are listed by smallest coordinate, coordinates ascending inside a
/// group; component `j` lives in Σ^{|groups[j]|} with that coordinate order.
/// Every component is normalized so that 0̄ ∉ Sⱼ, which makes
/// `constant = χ_S(0̄)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDecomposition {
    pub n: usize,
    pub groups: Vec<Vec<usize>>,
    pub components: Vec<CellSet>,
    pub constant: bool,
}

impl PrimeDecomposition {
    pub fn k(&self) -> usize {
        self.groups.len()
    }

    fn project(&self, index: usize, group: &[usize]) -> usize {
        group
            .iter()
            .fold(0, |acc, &c| (acc << 2) | digit(index, self.n, c) as usize)
    }

    pub fn eval(&self, index: usize) -> bool {
        self.groups
            .iter()
            .zip(&self.components)
            .fold(self.constant, |acc, (g, c)| {
                acc ^ c.contains(self.project(index, g))
            })
    }

    pub fn recompose(&self) -> Result<CellSet> {
        CellSet::from_fn(self.n, |i| self.eval(i))
    }
}

/// Whether `f` (a bit table over Σⁿ) changes when coordinate `axis` varies.
fn depends_on(f: &CellSet, axis: usize) -> bool {
    let n = f.dim();
    let st = stride(n, axis);
    line_bases(n, axis).any(|b| (1..4).any(|a| f.contains(b) != f.contains(b + a * st)))
}

/// Finest XOR factorization of a double-MDS-code over coordinate groups.
///
/// Coordinates i and j are linked when some toggle χ_S(x̄) ⊕ χ_S(x̄⁽ⁱ⁾#a)
/// depends on x_j; the groups are the connected classes of that relation.
pub fn xor_factorize(s: &CellSet) -> Result<PrimeDecomposition> {
    require_double_mds(s)?;
    let n = s.dim();
    let mut group_of: Vec<usize> = (0..n).collect();
    fn root(g: &mut [usize], mut x: usize) -> usize {
        while g[x] != x {
            g[x] = g[g[x]];
            x = g[x];
        }
        x
    }
    for i in 0..n {
        for a in 1..4u8 {
            let toggle =
                CellSet::from_fn(n, |x| s.contains(x) ^ s.contains(with_digit(x, n, i, a)))?;
            for j in (0..n).filter(|&j| j != i) {
                if depends_on(&toggle, j) {
                    let (ri, rj) = (root(&mut group_of, i), root(&mut group_of, j));
                    group_of[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for c in 0..n {
        let r = root(&mut group_of, c);
        match groups.iter_mut().find(|g| g[0] == r) {
            Some(g) => g.push(c),
            None => groups.push(vec![c]),
        }
    }
    let components = groups
        .iter()
        .map(|g| {
            let comp = CellSet::from_fn(g.len(), |y| {
                let x = g.iter().enumerate().fold(0, |acc, (pos, &c)| {
                    with_digit(acc, n, c, digit(y, g.len(), pos))
                });
                s.contains(x)
            })?;
            Ok(if comp.contains(0) {
                comp.complement()
            } else {
                comp
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dec = PrimeDecomposition {
        n,
        groups,
        components,
        constant: s.contains(0),
    };
    if dec.recompose()? != *s {
        return Err(Error::defect(
            "XOR factorization does not recompose to the input",
        ));
    }
    for c in &dec.components {
        if !is_double_mds_code(c) || !adjacency_graph(c).is_connected() {
            return Err(Error::defect("XOR factor is not a prime double-MDS-code"));
        }
    }
    Ok(dec)
}

/// The union of all double-codes contained in `t`, for `t` meeting every
/// axis line at most twice (as any subset of a double-MDS-code does).
///
/// A point is peeled off while some axis line through it holds fewer than
/// two remaining points (itself included).
pub fn double_code_core(t: &CellSet) -> Result<CellSet> {
    if !all_lines(t, |c| c <= 2) {
        return Err(Error::precondition(
            "set meets some axis line more than twice",
        ));
    }
    let n = t.dim();
    let mut core = t.clone();
    let mut queue: VecDeque<usize> = core.iter().collect();
    while let Some(x) = queue.pop_front() {
        if !core.contains(x) || (0..n).all(|axis| core.line_count(x, axis) == 2) {
            continue;
        }
        core.remove(x);
        for axis in 0..n {
            for a in 0..4u8 {
                let y = with_digit(x, n, axis, a);
                if core.contains(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(core)
}

/// Brute-force list of all subsets of Σⁿ (n ≤ 2) satisfying `keep`.
pub fn brute_force_subsets(n: usize, keep: impl Fn(&CellSet) -> bool) -> Vec<CellSet> {
    assert!(n <= 2, "brute force is limited to Σ² (2^16 subsets)");
    (0u64..(1 << volume(n)))
        .map(|mask| CellSet::from_mask16(n, mask))
        .filter(|s| keep(s))
        .collect()
}
